//! The on-disk code artifact: a versioned JSON document holding everything
//! needed to re-verify a code without rerunning its recipe.
//!
//! Field elements are written as coefficient arrays in the polynomial basis
//! (lowest degree first), never as discrete logarithms, and the field
//! modulus is stored explicitly, so a file means the same thing under any
//! choice of primitive element.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{LrcCode, Provenance};
use crate::curve::{CurveModel, Place};
use crate::ecurve::WeierstrassCurve;
use crate::gf::{Fe, Field, GfError};
use crate::linalg::Matrix;
use crate::scurve::SuperellipticCurve;
use crate::verify::VerificationReport;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("invalid artifact: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A field element as coefficients of the polynomial basis.
pub type Coeffs = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub s: u32,
    /// Monic modulus, lowest coefficient first.
    pub modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum CurveDesc {
    /// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
    Weierstrass { a: Vec<Coeffs> },
    /// gamma y^m = f(x).
    Superelliptic { m: u32, f: Vec<Coeffs>, gamma: Coeffs },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeDesc {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Declared {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub r: usize,
    pub delta: usize,
    pub t: usize,
    pub m: usize,
    pub optimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceDesc {
    Infinity,
    Affine { x: Coeffs, y: Coeffs },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeArtifact {
    pub format_version: u32,
    pub field: FieldDesc,
    pub curve: Option<CurveDesc>,
    pub recipe: RecipeDesc,
    pub declared: Declared,
    /// Half-open column ranges [start, end) of the repair groups.
    pub groups: Vec<[usize; 2]>,
    pub z_values: Vec<Coeffs>,
    pub places: Vec<PlaceDesc>,
    /// k rows of n elements.
    pub generator: Vec<Vec<Coeffs>>,
    pub report: Option<VerificationReport>,
}

impl CodeArtifact {
    pub fn from_code(code: &LrcCode, report: Option<&VerificationReport>) -> CodeArtifact {
        let f = &code.field;
        let el = |a: Fe| f.coeffs(a);
        let curve = code.curve.as_ref().map(|c| match c {
            CurveModel::Weierstrass(w) => CurveDesc::Weierstrass { a: w.coefficients().iter().map(|&a| el(a)).collect() },
            CurveModel::Superelliptic(s) => CurveDesc::Superelliptic {
                m: s.m(),
                f: s.f_coeffs().iter().map(|&a| el(a)).collect(),
                gamma: el(s.gamma()),
            },
        });
        CodeArtifact {
            format_version: FORMAT_VERSION,
            field: FieldDesc { p: f.p(), s: f.s(), modulus: f.modulus().to_vec() },
            curve,
            recipe: RecipeDesc { name: code.provenance.recipe.clone(), params: code.provenance.params.clone() },
            declared: Declared {
                n: code.n,
                k: code.k,
                d: code.d_designed,
                r: code.r,
                delta: code.delta,
                t: code.t,
                m: code.m,
                optimal: code.optimal,
            },
            groups: code.groups.iter().map(|g| [g.start, g.end]).collect(),
            z_values: code.z_values.iter().map(|&z| el(z)).collect(),
            places: code
                .places
                .iter()
                .map(|p| match *p {
                    Place::Infinity => PlaceDesc::Infinity,
                    Place::Affine { x, y } => PlaceDesc::Affine { x: el(x), y: el(y) },
                })
                .collect(),
            generator: code.generator.to_rows().into_iter().map(|row| row.into_iter().map(el).collect()).collect(),
            report: report.cloned(),
        }
    }

    /// Rebuilds the code. Shape is checked here; parameters are left for
    /// the verifier.
    pub fn to_code(&self) -> Result<LrcCode, ArtifactError> {
        if self.format_version != FORMAT_VERSION {
            return Err(ArtifactError::Version(self.format_version));
        }
        let fd = &self.field;
        let field = Field::new(fd.p, fd.s, Some(&fd.modulus))?;
        let el = |c: &Coeffs| field.from_coeffs(c);
        let els = |v: &[Coeffs]| v.iter().map(el).collect::<Result<Vec<Fe>, GfError>>();
        let rows: Vec<Vec<Fe>> = self.generator.iter().map(|r| els(r)).collect::<Result<_, _>>()?;
        let d = &self.declared;
        if rows.len() != d.k || rows.iter().any(|r| r.len() != d.n) {
            return Err(ArtifactError::Invalid(format!("generator is not {} x {}", d.k, d.n)));
        }
        let generator = Matrix::from_rows(&field, &rows).map_err(|e| ArtifactError::Invalid(e.to_string()))?;
        let curve = match &self.curve {
            None => None,
            Some(CurveDesc::Weierstrass { a }) => {
                let a: [Fe; 5] = els(a)?.try_into().map_err(|_| ArtifactError::Invalid("five coefficients expected".into()))?;
                Some(WeierstrassCurve::new(&field, a).map_err(|e| ArtifactError::Invalid(e.to_string()))?.into())
            }
            Some(CurveDesc::Superelliptic { m, f, gamma }) => Some(
                SuperellipticCurve::new(&field, *m, els(f)?, el(gamma)?)
                    .map_err(|e| ArtifactError::Invalid(e.to_string()))?
                    .into(),
            ),
        };
        let places = self
            .places
            .iter()
            .map(|p| match p {
                PlaceDesc::Infinity => Ok(Place::Infinity),
                PlaceDesc::Affine { x, y } => Ok(Place::affine(el(x)?, el(y)?)),
            })
            .collect::<Result<Vec<_>, GfError>>()?;
        let code = LrcCode {
            n: d.n,
            k: d.k,
            d_designed: d.d,
            r: d.r,
            delta: d.delta,
            t: d.t,
            m: d.m,
            optimal: d.optimal,
            generator,
            groups: self.groups.iter().map(|g| g[0]..g[1]).collect(),
            z_values: els(&self.z_values)?,
            places,
            curve,
            provenance: Provenance { recipe: self.recipe.name.clone(), params: self.recipe.params.clone() },
            field,
        };
        code.check_shape().map_err(|e| ArtifactError::Invalid(e.to_string()))?;
        Ok(code)
    }

    pub fn to_json(&self) -> Result<String, ArtifactError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<CodeArtifact, ArtifactError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ArtifactError> {
        Ok(std::fs::write(path, self.to_json()?)?)
    }

    pub fn load(path: &Path) -> Result<CodeArtifact, ArtifactError> {
        CodeArtifact::from_json(&std::fs::read_to_string(path)?)
    }
}
