//! Evaluation codes on repair groups and the code type the rest of the
//! crate consumes.

use std::collections::{BTreeMap, HashSet};
use std::ops::Range;

use thiserror::Error;

use crate::curve::{CurveModel, Place};
use crate::funcspace::{CurveFunction, FsError, FunctionSpace};
use crate::gf::{Fe, Field};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("a basis function has a pole at evaluation place {0:?}")]
    PoleAtEvaluationPlace(Place),
    #[error("generator has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("z is not constant on repair group {0}")]
    NotInvariant(usize),
    #[error("z takes the same value on repair groups {0} and {1}")]
    GroupsNotSeparated(usize, usize),
    #[error("bad plan: {0}")]
    BadPlan(String),
    #[error(transparent)]
    Function(#[from] FsError),
}

/// Recipe name plus the parameters it was run with.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub recipe: String,
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(recipe: &str) -> Provenance {
        Provenance { recipe: recipe.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Provenance {
        self.params.insert(key.into(), value.to_string());
        self
    }
}

/// Everything needed to write down a generator matrix: the groups of
/// evaluation places and the functions w_i and z spanning
/// V = <w_i z^j : i < r, j < t> + <z^t>.
#[derive(Clone, Debug)]
pub struct EvaluationPlan {
    pub curve: CurveModel,
    pub groups: Vec<Vec<Place>>,
    pub w: Vec<CurveFunction>,
    pub z: CurveFunction,
    pub r: usize,
    pub delta: usize,
    pub t: usize,
    /// Lower bound on the distance implied by the construction.
    pub d_designed: usize,
    /// Whether the construction claims to meet the Singleton-type bound.
    pub optimal: bool,
}

/// A linear code with a partition of its coordinates into repair groups.
#[derive(Clone, Debug)]
pub struct LrcCode {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub d_designed: usize,
    pub r: usize,
    pub delta: usize,
    pub t: usize,
    pub m: usize,
    pub optimal: bool,
    /// k x n, rows ordered w_0 z^0, ..., w_(r-1) z^0, w_0 z^1, ..., w_0 z^t.
    pub generator: Matrix,
    /// Contiguous column ranges, one per repair group.
    pub groups: Vec<Range<usize>>,
    /// The value of z on each group.
    pub z_values: Vec<Fe>,
    /// Evaluation place of each column, when known.
    pub places: Vec<Place>,
    pub curve: Option<CurveModel>,
    pub provenance: Provenance,
}

impl LrcCode {
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Group index of every column.
    pub fn group_of_column(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (g, range) in self.groups.iter().enumerate() {
            for c in range.clone() {
                out[c] = g;
            }
        }
        out
    }

    /// Row of the generator holding w_0 z^j.
    pub fn z_power_row(&self, j: usize) -> usize {
        j * self.r
    }

    /// Checks the shape invariants: group ranges tile 0..n and the matrix
    /// has k rows and n columns.
    pub fn check_shape(&self) -> Result<(), CodeError> {
        let mut next = 0;
        for g in &self.groups {
            if g.start != next || g.end <= g.start {
                return Err(CodeError::BadPlan("groups do not tile the columns".into()));
            }
            next = g.end;
        }
        if next != self.n || self.generator.cols() != self.n || self.generator.rows() != self.k {
            return Err(CodeError::BadPlan("generator shape disagrees with n and k".into()));
        }
        if self.z_values.len() != self.groups.len() || self.m != self.groups.len() {
            return Err(CodeError::BadPlan("one z value per group is required".into()));
        }
        Ok(())
    }
}

/// Evaluates the plan's basis on its groups and checks the result has full rank.
pub fn build_code(plan: &EvaluationPlan, provenance: Provenance) -> Result<LrcCode, CodeError> {
    let fs = FunctionSpace::new(&plan.curve);
    let f = fs.field().clone();
    let (r, t) = (plan.r, plan.t);
    if plan.w.len() != r || r == 0 || plan.groups.len() <= t {
        return Err(CodeError::BadPlan(format!(
            "{} ladder functions for r = {r}, {} groups for t = {t}",
            plan.w.len(),
            plan.groups.len()
        )));
    }
    let mut seen = HashSet::new();
    let places: Vec<Place> = plan.groups.iter().flatten().copied().collect();
    if !places.iter().all(|p| seen.insert(*p)) {
        return Err(CodeError::BadPlan("evaluation places repeat".into()));
    }
    let value = |g: &CurveFunction, p: &Place| -> Result<Fe, CodeError> {
        fs.eval(g, p)?.ok_or(CodeError::PoleAtEvaluationPlace(*p))
    };
    let wv: Vec<Vec<Fe>> =
        plan.w.iter().map(|w| places.iter().map(|p| value(w, p)).collect()).collect::<Result<_, _>>()?;
    let zv: Vec<Fe> = places.iter().map(|p| value(&plan.z, p)).collect::<Result<_, _>>()?;

    let mut groups = Vec::new();
    let mut z_values = Vec::new();
    let mut start = 0;
    for (gi, g) in plan.groups.iter().enumerate() {
        let range = start..start + g.len();
        let z0 = zv[range.start];
        if zv[range.clone()].iter().any(|&v| v != z0) {
            return Err(CodeError::NotInvariant(gi));
        }
        if let Some(prev) = z_values.iter().position(|&v| v == z0) {
            return Err(CodeError::GroupsNotSeparated(prev, gi));
        }
        z_values.push(z0);
        start = range.end;
        groups.push(range);
    }

    let n = places.len();
    let mut rows = Vec::with_capacity(t * r + 1);
    let mut zpow = vec![Fe::ONE; n];
    for _ in 0..t {
        for w in &wv {
            rows.push(w.iter().zip(&zpow).map(|(&a, &b)| f.mul(a, b)).collect::<Vec<_>>());
        }
        for (zp, &z) in zpow.iter_mut().zip(&zv) {
            *zp = f.mul(*zp, z);
        }
    }
    rows.push(wv[0].iter().zip(&zpow).map(|(&a, &b)| f.mul(a, b)).collect());
    let generator = Matrix::from_rows(&f, &rows).map_err(|e| CodeError::BadPlan(e.to_string()))?;
    let k = t * r + 1;
    let rank = generator.rank();
    if rank != k {
        return Err(CodeError::RankDeficient { rank, expected: k });
    }
    Ok(LrcCode {
        field: f,
        n,
        k,
        d_designed: plan.d_designed,
        r,
        delta: plan.delta,
        t,
        m: plan.groups.len(),
        optimal: plan.optimal,
        generator,
        groups,
        z_values,
        places,
        curve: Some(plan.curve.clone()),
        provenance,
    })
}
