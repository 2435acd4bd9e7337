//! The code families: each recipe picks a curve and a group of
//! automorphisms, checks the side conditions its theorem needs, and
//! produces an [`OrbitFamily`] from which codes of any admissible (t, m)
//! are built.
//!
//! Side conditions are re-checked by brute force at run time. A recipe
//! that cannot establish them returns an error instead of a code.

use std::collections::HashSet;

use thiserror::Error;

use crate::code::{build_code, CodeError, EvaluationPlan, LrcCode, Provenance};
use crate::curve::{self, CurveModel, Perm, Place, PlaceSet};
use crate::ecurve::{self, Condition14, EcAutomorphism, EcError, WeierstrassCurve};
use crate::funcspace::{CurveFunction, Divisor, FsError, FunctionSpace};
use crate::gf::{Fe, Field, GfError};
use crate::scurve::{self, Genus2Automorphism, Maximality, ScError, SuperellipticCurve};

/// Cap on subset sums visited by the tail-sum check.
const CONDITION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecipeError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("selection failed: {0}")]
    SelectionFailed(String),
    #[error("the hyperelliptic involution lies in the group")]
    InvolutionInGroup,
    #[error("curve has {count} rational places, a maximal curve has {expected}")]
    NotMaximal { count: u64, expected: u64 },
    #[error("M = N leaves no orientation")]
    OrientationDegenerate,
    #[error("no twist is available for an even exponent s in this case")]
    EvenSWithoutTwist,
    #[error("side condition failed: {0}")]
    ConditionFailed(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Function(#[from] FsError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Elliptic(#[from] EcError),
    #[error(transparent)]
    Superelliptic(#[from] ScError),
}

/// Which end of the defining list carries the locality: `Primary` gives
/// the larger r, `Reversed` reads the defining list backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Primary,
    Reversed,
}

/// A family with its parameters, as accepted by [`family`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Elliptic curve, G = T_H <[-1]>, (r, delta) = (2h - 2, 3) or (2, 2h - 1).
    EllipticInvolution { q: u32, h: u64, orientation: Orientation },
    /// y^2 + y = x^3 over GF(4^(2s+1)), |H| = |A| = 3, (r, delta) = (7, 3) or (2, 8).
    EllipticOrderThree { q: u32, orientation: Orientation },
    /// y^2 = x^5 + x with a group of order 6 avoiding the involution, (r, delta) = (4, 3).
    Genus2 { q: u32 },
    /// Maximal y^2 = x^(2g+1) + x or + 1, (r, delta) = (g + 1 - g', g + 1 + g').
    Hyperelliptic { q: u32, g: u32, g_prime: i32 },
    /// y^M = Tr(x) from GF(qbar^s) down to GF(qbar^c).
    NormTrace { qbar: u32, s: u32, b: u64, c: u32, b_prime: u32 },
    /// y^((qbar + 1)/b) = x^qbar + x over GF(qbar^(2s)).
    Hermitian { qbar: u32, s: u32, b: u64, b_prime: u32 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::EllipticInvolution { .. } => "eff-involution",
            Family::EllipticOrderThree { .. } => "eff-noninvolution",
            Family::Genus2 { .. } => "genus2-43",
            Family::Hyperelliptic { .. } => "hyperelliptic",
            Family::NormTrace { .. } => "normtrace",
            Family::Hermitian { .. } => "hermitian",
        }
    }
}

/// How the functions w_i and z are obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisSpec {
    /// w_i from the prefix ladder of the defining list, z invariant in L(defining).
    Ladder { defining: Vec<Place> },
    /// w_i and z are monomials x^a y^b.
    Monomial { w: Vec<(usize, usize)>, z: (usize, usize) },
}

/// A curve, its repair groups and the recipe for V; everything except
/// the choice of (t, m).
#[derive(Clone, Debug)]
pub struct OrbitFamily {
    pub curve: CurveModel,
    pub r: usize,
    pub delta: usize,
    pub basis: BasisSpec,
    /// Every orbit of the group on the rational places.
    pub orbits: Vec<Vec<Place>>,
    /// Usable repair groups, in canonical order.
    pub groups: Vec<Vec<Place>>,
    /// The number of groups the family's theorem guarantees.
    pub ell_formula: u64,
    pub group_order: usize,
    /// Added to (m - t)(r + delta - 1) to get the designed distance.
    pub distance_shift: i64,
    pub optimal: bool,
    pub provenance: Provenance,
    pub notes: Vec<String>,
}

impl OrbitFamily {
    /// Number of usable repair groups found.
    pub fn ell(&self) -> usize {
        self.groups.len()
    }

    pub fn num_places(&self) -> usize {
        self.curve.places().len()
    }

    pub fn plan(&self, t: usize, m: usize) -> Result<EvaluationPlan, RecipeError> {
        if t < 1 || t >= m || m > self.groups.len() {
            return Err(RecipeError::ParameterOutOfRange(format!(
                "need 1 <= t < m <= {} (t = {t}, m = {m})",
                self.groups.len()
            )));
        }
        let fs = FunctionSpace::new(&self.curve);
        let (w, z) = match &self.basis {
            BasisSpec::Ladder { defining } => {
                let ladder = fs.ladder(defining, self.r)?;
                let z = fs.invariant_function(&Divisor::from_places(defining), &self.orbits)?;
                (ladder.functions, z)
            }
            BasisSpec::Monomial { w, z } => (
                w.iter().map(|&(i, j)| CurveFunction::monomial(i, j, Fe::ONE)).collect(),
                CurveFunction::monomial(z.0, z.1, Fe::ONE),
            ),
        };
        let base = ((m - t) * (self.r + self.delta - 1)) as i64;
        Ok(EvaluationPlan {
            curve: self.curve.clone(),
            groups: self.groups[..m].to_vec(),
            w,
            z,
            r: self.r,
            delta: self.delta,
            t,
            d_designed: (base + self.distance_shift).max(0) as usize,
            optimal: self.optimal,
        })
    }

    pub fn build(&self, t: usize, m: usize) -> Result<LrcCode, RecipeError> {
        let plan = self.plan(t, m)?;
        let prov = self.provenance.clone().with("t", t).with("m", m);
        Ok(build_code(&plan, prov)?)
    }
}

/// Sets up a family. `modulus` overrides the defining polynomial of the
/// field (coefficients lowest first).
pub fn family(spec: &Family, modulus: Option<&[u32]>) -> Result<OrbitFamily, RecipeError> {
    let mut fam = match *spec {
        Family::EllipticInvolution { q, h, orientation } => eff_involution(q, h, orientation, modulus)?,
        Family::EllipticOrderThree { q, orientation } => eff_order_three(q, orientation, modulus)?,
        Family::Genus2 { q } => genus2(q, modulus)?,
        Family::Hyperelliptic { q, g, g_prime } => hyperelliptic(q, g, g_prime, modulus)?,
        Family::NormTrace { qbar, s, b, c, b_prime } => normtrace(qbar, s, b, c, b_prime, modulus)?,
        Family::Hermitian { qbar, s, b, b_prime } => hermitian(qbar, s, b, b_prime, modulus)?,
    };
    if let Some(m) = modulus {
        fam.provenance = fam.provenance.with("modulus", format!("{m:?}"));
    }
    Ok(fam)
}

/// Sets up a family and builds the code for (t, m).
pub fn construct(spec: &Family, t: usize, m: usize, modulus: Option<&[u32]>) -> Result<LrcCode, RecipeError> {
    family(spec, modulus)?.build(t, m)
}

fn field_for(q: u32, modulus: Option<&[u32]>) -> Result<Field, RecipeError> {
    let (p, e) = scurve::prime_power(q as u64)
        .ok_or_else(|| RecipeError::ParameterOutOfRange(format!("{q} is not a prime power")))?;
    Ok(Field::new(p, e, modulus)?)
}

fn exact_sqrt(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r * r == q).then_some(r)
}

fn full_orbits(group: &[Perm], set: &PlaceSet) -> (Vec<Vec<Place>>, Vec<Vec<Place>>) {
    let all = curve::orbits(group, set);
    let full = all.iter().filter(|o| o.is_full()).map(|o| o.places.clone()).collect();
    (all.into_iter().map(|o| o.places).collect(), full)
}

/// Elliptic curves with G = T_H <[-1]>.
pub fn eff_involution(q: u32, h: u64, orientation: Orientation, modulus: Option<&[u32]>) -> Result<OrbitFamily, RecipeError> {
    let field = field_for(q, modulus)?;
    let root = exact_sqrt(q as u64)
        .ok_or_else(|| RecipeError::ParameterOutOfRange(format!("q = {q} is not an even power of p")))?;
    let curve = if field.p() == 2 {
        let target = q as u64 + 2 * root + 1;
        let z = Fe::ZERO;
        let c = WeierstrassCurve::new(&field, [z, z, Fe::ONE, z, z])?;
        if c.num_points() == target {
            c
        } else {
            WeierstrassCurve::search_with_order(&field, target, u64::MAX)?
        }
    } else {
        WeierstrassCurve::search_with_order(&field, q as u64 + 2 * root, u64::MAX)?
    };
    let n = curve.num_points();
    if n % 2 == 0 {
        return Err(RecipeError::ConditionFailed(format!("N = {n} is even")));
    }
    if h < 3 || n % h != 0 {
        return Err(RecipeError::ParameterOutOfRange(format!("h = {h} must be at least 3 and divide N = {n}")));
    }
    let structure = curve.group_structure();
    let sub = curve.subgroup_of_order(&structure, h)?;
    let a = vec![EcAutomorphism::identity(), EcAutomorphism::negation(&curve)];
    if !ecurve::check_th_a_subgroup(&curve, &sub, &a)? {
        return Err(RecipeError::ConditionFailed("[-1] does not preserve H".into()));
    }
    let set = curve.point_set();
    let group = ecurve::th_a_group(&curve, &sub, &a, &set)?;
    if group.len() as u64 != 2 * h {
        return Err(RecipeError::ConditionFailed(format!("|T_H A| = {}, expected {}", group.len(), 2 * h)));
    }
    let (orbits, full) = full_orbits(&group, &set);
    let ell_formula = ((n - h) / (2 * h)).saturating_sub(1);
    let hs = h as usize;
    let (r, delta) = match orientation {
        Orientation::Primary => (2 * hs - 2, 3),
        Orientation::Reversed => (2, 2 * hs - 1),
    };
    let Some((defining_orbit, groups)) = full.split_first() else {
        return Err(RecipeError::ParameterOutOfRange("no full orbit to define the quotient".into()));
    };
    let defining = select_involution_tail(&curve, &sub, defining_orbit, groups, orientation)?;
    let prov = Provenance::new("eff-involution").with("q", q).with("h", h).with("orientation", format!("{orientation:?}"));
    Ok(OrbitFamily {
        curve: curve.into(),
        r,
        delta,
        basis: BasisSpec::Ladder { defining },
        orbits,
        groups: groups.to_vec(),
        ell_formula,
        group_order: 2 * hs,
        distance_shift: 0,
        optimal: true,
        provenance: prov,
        notes: vec![format!("N = {n}, H of order {h}")],
    })
}

/// Orders the defining orbit so that its last two places are distinct
/// members of P_1 + H and the tail-sum condition holds for the orientation used.
fn select_involution_tail(
    curve: &WeierstrassCurve,
    h: &[Place],
    orbit: &[Place],
    groups: &[Vec<Place>],
    orientation: Orientation,
) -> Result<Vec<Place>, RecipeError> {
    let p1 = orbit[0];
    let mut coset: Vec<Place> = h.iter().map(|q| curve.add(&p1, q)).collect();
    coset.sort();
    let len = orbit.len();
    for i in 0..coset.len() {
        for j in i + 1..coset.len() {
            let (a, b) = (coset[i], coset[j]);
            let mut list: Vec<Place> = orbit.iter().copied().filter(|p| *p != a && *p != b).collect();
            list.push(a);
            list.push(b);
            let (list, r, delta) = match orientation {
                Orientation::Primary => (list, len - 2, 3),
                Orientation::Reversed => (list.into_iter().rev().collect(), 2, len - 1),
            };
            if ecurve::condition_13_14_check(curve, &list, groups, r, delta, CONDITION_CAP)? == Condition14::Holds {
                return Ok(list);
            }
        }
    }
    Err(RecipeError::SelectionFailed("no pair in P_1 + H satisfies the tail-sum condition".into()))
}

/// y^2 + y = x^3 over GF(4^(2s+1)) with H = <(0, 1)> and A generated by
/// x -> w^2 x for a primitive cube root of unity w.
pub fn eff_order_three(q: u32, orientation: Orientation, modulus: Option<&[u32]>) -> Result<OrbitFamily, RecipeError> {
    let field = field_for(q, modulus)?;
    if field.p() != 2 || field.s() % 4 != 2 {
        return Err(RecipeError::ParameterOutOfRange(format!("q = {q} is not of the form 4^(2s+1)")));
    }
    let root = exact_sqrt(q as u64).expect("even exponent");
    let z = Fe::ZERO;
    let curve = WeierstrassCurve::new(&field, [z, z, Fe::ONE, z, z])?;
    let n = curve.num_points();
    let expected = q as u64 + 2 * root + 1;
    if n != expected {
        return Err(RecipeError::NotMaximal { count: n, expected });
    }
    let gen = Place::affine(Fe::ZERO, Fe::ONE);
    let neg = curve.neg(&gen);
    let sub = vec![Place::Infinity, gen, neg];
    let omega = field
        .nth_roots_of_unity(3)?
        .into_iter()
        .find(|&w| w != Fe::ONE)
        .ok_or_else(|| RecipeError::ConditionFailed("no primitive cube root of unity".into()))?;
    let sigma = EcAutomorphism::fixing_o(&curve, omega, z, z, z, "x -> w^2 x")?;
    let sigma2 = EcAutomorphism::fixing_o(&curve, field.mul(omega, omega), z, z, z, "x -> w x")?;
    if sigma.apply(&curve, &gen) != gen {
        return Err(RecipeError::ConditionFailed("sigma does not fix Q".into()));
    }
    let a = vec![EcAutomorphism::identity(), sigma, sigma2];
    if !ecurve::check_th_a_subgroup(&curve, &sub, &a)? {
        return Err(RecipeError::ConditionFailed("A does not preserve H".into()));
    }
    let set = curve.point_set();
    let group = ecurve::th_a_group(&curve, &sub, &a, &set)?;
    if group.len() != 9 {
        return Err(RecipeError::ConditionFailed(format!("|T_H A| = {}, expected 9", group.len())));
    }
    let (orbits, full) = full_orbits(&group, &set);
    let o = Place::Infinity;
    let mut defining = vec![o, gen, neg, gen, neg, gen, neg, o, o];
    let (r, delta) = match orientation {
        Orientation::Primary => (7, 3),
        Orientation::Reversed => {
            defining.reverse();
            (2, 8)
        }
    };
    let mut groups = Vec::new();
    let mut dropped = 0;
    for g in full {
        let verdict = ecurve::condition_13_14_check(&curve, &defining, std::slice::from_ref(&g), r, delta, CONDITION_CAP)?;
        if verdict == Condition14::Holds {
            groups.push(g);
        } else {
            dropped += 1;
        }
    }
    let ell_formula = (q as u64 + 2 * root - 8) / 9;
    let prov = Provenance::new("eff-noninvolution").with("q", q).with("orientation", format!("{orientation:?}"));
    Ok(OrbitFamily {
        curve: curve.into(),
        r,
        delta,
        basis: BasisSpec::Ladder { defining },
        orbits,
        groups,
        ell_formula,
        group_order: 9,
        distance_shift: 0,
        optimal: true,
        provenance: prov,
        notes: vec![format!("N = {n}; {dropped} full orbits failed the tail-sum condition")],
    })
}

/// Finds (qbar, s) with q = qbar^(2s), s odd, qbar satisfying `accept`.
fn split_square_power(q: u64, accept: impl Fn(u64) -> bool) -> Option<(u64, u32)> {
    let (p, e) = scurve::prime_power(q)?;
    (1..=e / 2)
        .filter(|s| e % (2 * s) == 0)
        .map(|s| ((p as u64).pow(e / (2 * s)), s))
        .find(|&(qbar, s)| accept(qbar) && s >= 1)
}

/// y^2 = x^5 + x with a group of order 6 that avoids the hyperelliptic
/// involution; defining list is the fiber containing infinity.
pub fn genus2(q: u32, modulus: Option<&[u32]>) -> Result<OrbitFamily, RecipeError> {
    // The worked example over GF(25) uses the modulus u^2 + 4u + 2.
    let modulus = modulus.or(if q == 25 { Some(&[2, 4, 1][..]) } else { None });
    let field = field_for(q, modulus)?;
    let f = &field;
    let curve = SuperellipticCurve::from_terms(f, 2, &[(5, Fe::ONE), (1, Fe::ONE)], Fe::ONE)?;
    let case_one = split_square_power(q as u64, |qb| qb == 5).filter(|&(_, s)| s % 2 == 1);
    let case_two = split_square_power(q as u64, |qb| qb != 5 && qb % 2 == 1 && [5, 15, 21, 23].contains(&(qb % 24)))
        .filter(|&(_, s)| s % 2 == 1);
    let gens: Vec<Genus2Automorphism> = if case_one.is_some() {
        // alpha is the first power of the primitive element with alpha^2 = 2.
        let two = f.int(2);
        let alpha = (1..f.q() as i64)
            .map(|k| f.exp(k))
            .find(|&a| f.mul(a, a) == two)
            .ok_or_else(|| RecipeError::ConditionFailed("2 is not a square".into()))?;
        let m1 = f.neg(Fe::ONE);
        vec![Genus2Automorphism::new(f, alpha, m1, m1, Fe::ZERO)?]
    } else if case_two.is_some() {
        let alpha = f.exp(((f.q() - 1) / 8) as i64);
        let half = f.inv(f.int(2));
        let a2 = f.mul(alpha, alpha);
        let a3 = f.mul(a2, alpha);
        let m1 = f.neg(Fe::ONE);
        vec![
            Genus2Automorphism::new(f, Fe::ZERO, m1, m1, Fe::ZERO)?,
            Genus2Automorphism::new(
                f,
                f.mul(half, f.sub(a2, Fe::ONE)),
                f.mul(half, f.sub(alpha, a3)),
                f.mul(half, f.sub(a3, alpha)),
                f.mul(half, f.sub(m1, a2)),
            )?,
        ]
    } else {
        return Err(RecipeError::ParameterOutOfRange(format!(
            "q = {q} is neither 5^(2s) nor qbar^(2s) with qbar = 5, 15, 21, 23 mod 24 (s odd)"
        )));
    };
    let (kind, n) = curve.maximality_check()?;
    let root = exact_sqrt(q as u64).expect("square field");
    if kind != Maximality::Maximal {
        return Err(RecipeError::NotMaximal { count: n, expected: q as u64 + 1 + 4 * root });
    }
    let set = curve.place_set();
    let group = scurve::genus2_group(&curve, &gens, &set)?;
    let iota: Perm = set
        .places()
        .iter()
        .map(|p| set.index_of(&curve.hyperelliptic_conjugate(p).expect("genus 2")).expect("rational"))
        .collect();
    if group.contains(&iota) {
        return Err(RecipeError::InvolutionInGroup);
    }
    let order = group.len();
    if order != 6 {
        return Err(RecipeError::ConditionFailed(format!("|G| = {order}, expected 6")));
    }
    if n % order as u64 == 0 {
        return Err(RecipeError::ConditionFailed(format!("|G| = {order} divides N = {n}")));
    }
    let all = curve::orbits(&group, &set);
    let inf_orbit = all.iter().find(|o| o.contains(&Place::Infinity)).expect("infinity lies in some orbit");
    let mut defining = Vec::new();
    for p in inf_orbit.places.iter().filter(|p| !p.is_infinity()) {
        defining.extend(std::iter::repeat(*p).take(inf_orbit.ramification));
    }
    defining.extend(std::iter::repeat(Place::Infinity).take(inf_orbit.ramification));
    let mut groups = Vec::new();
    let mut not_reduced = 0;
    for o in all.iter().filter(|o| o.is_full() && !o.contains(&Place::Infinity)) {
        if curve.is_reduced(&o.places)? {
            groups.push(o.places.clone());
        } else {
            not_reduced += 1;
        }
    }
    let worst = 2 * (n as i64 - 4 * order as i64 - 2).div_euclid(2 * order as i64)
        + if (n as i64 - 4 * order as i64 - 2).rem_euclid(2 * order as i64) != 0 { 2 } else { 0 }
        - 1;
    let orbits = all.into_iter().map(|o| o.places).collect();
    Ok(OrbitFamily {
        curve: curve.into(),
        r: 4,
        delta: 3,
        basis: BasisSpec::Ladder { defining },
        orbits,
        groups,
        ell_formula: worst.max(0) as u64,
        group_order: order,
        distance_shift: 0,
        optimal: true,
        provenance: Provenance::new("genus2-43").with("q", q),
        notes: vec![format!("N = {n}; {not_reduced} full orbits contain a conjugate pair")],
    })
}

/// Which coordinate the repair groups keep fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Orbits {
    /// Groups share y; z = y and w_i = x^i.
    SameY,
    /// Groups share x; z = x and w_i = y^i.
    SameX,
}

/// Builds the family for a superelliptic curve once its groups are known.
#[allow(clippy::too_many_arguments)]
fn superelliptic_family(
    curve: SuperellipticCurve,
    groups: Vec<Vec<Place>>,
    kind: Orbits,
    b_prime: i64,
    ell_formula: u64,
    distance_shift: i64,
    prov: Provenance,
    notes: Vec<String>,
) -> Result<OrbitFamily, RecipeError> {
    let (m, n) = (curve.m() as i64, curve.degree() as i64);
    let (size, other) = match kind {
        Orbits::SameY => (n, m),
        Orbits::SameX => (m, n),
    };
    let r = (size - 1) / other + 1 - b_prime;
    if r < 1 || r > size - 1 {
        return Err(RecipeError::ParameterOutOfRange(format!("r = {r} is outside 1..{}", size - 1)));
    }
    let delta = size + 1 - r;
    let (w, z) = match kind {
        Orbits::SameY => ((0..r as usize).map(|i| (i, 0)).collect(), (0, 1)),
        Orbits::SameX => ((0..r as usize).map(|i| (0, i)).collect(), (1, 0)),
    };
    let group_order = size as usize;
    if groups.iter().any(|g| g.len() != group_order) {
        return Err(RecipeError::ConditionFailed("a repair group is not a full orbit".into()));
    }
    let orbits = groups.clone();
    Ok(OrbitFamily {
        curve: curve.into(),
        r: r as usize,
        delta: delta as usize,
        basis: BasisSpec::Monomial { w, z },
        orbits,
        groups,
        ell_formula,
        group_order,
        distance_shift,
        optimal: distance_shift == 0,
        provenance: prov,
        notes,
    })
}

fn require_maximal(curve: &SuperellipticCurve) -> Result<u64, RecipeError> {
    let (kind, n) = curve.maximality_check()?;
    if kind != Maximality::Maximal {
        let q = curve.field().q() as u64;
        let root = exact_sqrt(q).unwrap_or(0);
        return Err(RecipeError::NotMaximal { count: n, expected: q + 1 + 2 * curve.genus() * root });
    }
    Ok(n)
}

fn additive_kernel(f: &Field, poly: &[(usize, Fe)]) -> Vec<Fe> {
    f.elements()
        .filter(|&a| f.sum(poly.iter().map(|&(e, c)| f.mul(c, f.pow(a, e as u64)))).is_zero())
        .collect()
}

/// Maximal hyperelliptic curves of genus g: y^2 = x^(2g+1) + x when q is a
/// power of 2g + 1, y^2 = x^(2g+1) + 1 when q = qbar^(2s) with
/// qbar = -1 mod 2g + 1; a quadratic twist when s is even.
pub fn hyperelliptic(q: u32, g: u32, g_prime: i32, modulus: Option<&[u32]>) -> Result<OrbitFamily, RecipeError> {
    if g == 0 || g_prime.unsigned_abs() > g - 1 {
        return Err(RecipeError::ParameterOutOfRange(format!("g' = {g_prime} must satisfy |g'| <= g - 1")));
    }
    let field = field_for(q, modulus)?;
    let f = &field;
    let n = 2 * g as u64 + 1;
    let (p, e) = scurve::prime_power(q as u64).expect("checked by field_for");
    let case_one = scurve::prime_power(n)
        .filter(|&(pn, en)| pn == p && e % (2 * en) == 0)
        .map(|(_, en)| e / (2 * en));
    let case_two = split_square_power(q as u64, |qb| qb % 2 == 1 && (qb + 1) % n == 0).map(|(_, s)| s);
    let (s, translation) = match (case_one, case_two) {
        (Some(s), _) => (s, true),
        (None, Some(s)) => (s, false),
        _ => {
            return Err(RecipeError::ParameterOutOfRange(format!(
                "q = {q} is neither a power of {n} nor qbar^(2s) with qbar = -1 mod {n}"
            )))
        }
    };
    let gamma = if s % 2 == 0 { f.quadratic_nonresidue()? } else { Fe::ONE };
    let low = if translation { 1 } else { 0 };
    let curve = SuperellipticCurve::from_terms(f, 2, &[(n as usize, Fe::ONE), (low, Fe::ONE)], gamma)?;
    let count = require_maximal(&curve)?;
    let groups: Vec<Vec<Place>> = if translation {
        let kernel = additive_kernel(f, &[(n as usize, Fe::ONE), (1, Fe::ONE)]);
        curve.x_translation_orbits(&kernel)?.into_iter().map(|o| o.places).collect()
    } else {
        let roots = f.nth_roots_of_unity(n)?;
        curve.x_scaling_orbits(&roots)?.0.into_iter().map(|o| o.places).collect()
    };
    let root = exact_sqrt(q as u64).expect("square field");
    let ell_formula = (q as u64 + 2 * g as u64 * root) / n;
    let shift = (2 * g_prime as i64 + 1).min(0);
    let prov = Provenance::new("hyperelliptic").with("q", q).with("g", g).with("g_prime", g_prime);
    let notes = vec![format!(
        "N = {count}; {} orbits, s = {s}{}",
        if translation { "x-translation" } else { "x-scaling" },
        if s % 2 == 0 { ", twisted" } else { "" }
    )];
    superelliptic_family(curve, groups, Orbits::SameY, g_prime as i64, ell_formula, shift, prov, notes)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// y^M = Tr(x) from GF(qbar^s) to GF(qbar^c), M = (qbar^s - 1)/(b(qbar - 1)).
pub fn normtrace(qbar: u32, s: u32, b: u64, c: u32, b_prime: u32, modulus: Option<&[u32]>) -> Result<OrbitFamily, RecipeError> {
    let (p, e) = scurve::prime_power(qbar as u64)
        .ok_or_else(|| RecipeError::ParameterOutOfRange(format!("qbar = {qbar} is not a prime power")))?;
    let qb = qbar as u64;
    let full = (qb.pow(s) - 1) / (qb - 1);
    if b == 0 || full % b != 0 || b == full {
        return Err(RecipeError::ParameterOutOfRange(format!("b = {b} must be a proper divisor of {full}")));
    }
    if c == 0 || c >= s || s % c != 0 {
        return Err(RecipeError::ParameterOutOfRange(format!("c = {c} must be a proper divisor of s = {s}")));
    }
    let field = Field::new(p, e * s, modulus)?;
    let f = &field;
    let curve = scurve::norm_trace_curve(f, qb, s, b, c)?;
    let (m, n) = (curve.m() as u64, curve.degree() as u64);
    let q = qb.pow(s);
    let qc = qb.pow(c);
    let head = gcd(b, (qc - 1) / (qb - 1)) * (q - 1) * q / (b * qc);
    let prov = Provenance::new("normtrace").with("qbar", qbar).with("s", s).with("b", b).with("c", c).with("b_prime", b_prime);
    let notes = vec![format!("M = {m}, N = {n}, {} places", curve.num_places())];
    match m.cmp(&n) {
        std::cmp::Ordering::Equal => Err(RecipeError::OrientationDegenerate),
        std::cmp::Ordering::Less => {
            let terms: Vec<(usize, Fe)> = (0..s / c).map(|i| (qb.pow(c * i) as usize, Fe::ONE)).collect();
            let kernel = additive_kernel(f, &terms);
            let groups = curve.x_translation_orbits(&kernel)?.into_iter().map(|o| o.places).collect();
            let ell = (head + q / qc) / n;
            superelliptic_family(curve, groups, Orbits::SameY, b_prime as i64, ell, 0, prov, notes)
        }
        std::cmp::Ordering::Greater => {
            let roots = f.nth_roots_of_unity(m)?;
            let groups = curve.y_scaling_orbits(&roots)?.0.into_iter().map(|o| o.places).collect();
            superelliptic_family(curve, groups, Orbits::SameX, b_prime as i64, head / m, 0, prov, notes)
        }
    }
}

/// Hermitian-type curves y^((qbar + 1)/b) = x^qbar + x over GF(qbar^(2s)).
pub fn hermitian(qbar: u32, s: u32, b: u64, b_prime: u32, modulus: Option<&[u32]>) -> Result<OrbitFamily, RecipeError> {
    let (p, e) = scurve::prime_power(qbar as u64)
        .ok_or_else(|| RecipeError::ParameterOutOfRange(format!("qbar = {qbar} is not a prime power")))?;
    let qb = qbar as u64;
    if s == 0 || b == 0 || (qb + 1) % b != 0 || b == qb + 1 {
        return Err(RecipeError::ParameterOutOfRange(format!("b = {b} must be a proper divisor of {}", qb + 1)));
    }
    if (b > 1 && b_prime as u64 + 2 > b) || (b == 1 && b_prime != 0) {
        return Err(RecipeError::ParameterOutOfRange(format!("b' = {b_prime} must lie in 0..={}", b.saturating_sub(2))));
    }
    let field = Field::new(p, 2 * e * s, modulus)?;
    let f = &field;
    let q = f.q() as u64;
    let root = exact_sqrt(q).expect("even exponent");
    let m = (qb + 1) / b;
    let even = s % 2 == 0;
    let qbar_terms = [(qbar as usize, Fe::ONE), (1, Fe::ONE)];
    let curve = if !even {
        SuperellipticCurve::from_terms(f, m as u32, &qbar_terms, Fe::ONE)?
    } else if qb % 2 == 1 && b == (qb + 1) / 2 {
        SuperellipticCurve::from_terms(f, 2, &qbar_terms, f.quadratic_nonresidue()?)?
    } else if qb == 2 && b == 1 {
        // y^3 = x^2 + x + eta with eta not of the form a^2 + a.
        let images: HashSet<Fe> = f.elements().map(|a| f.add(f.mul(a, a), a)).collect();
        let mut found = None;
        for eta in f.elements().filter(|eta| !images.contains(eta)) {
            let c = SuperellipticCurve::from_terms(f, 3, &[(2, Fe::ONE), (1, Fe::ONE), (0, eta)], Fe::ONE)?;
            if c.maximality_check()?.0 == Maximality::Maximal {
                found = Some(c);
                break;
            }
        }
        found.ok_or_else(|| RecipeError::SelectionFailed("no maximal y^3 = x^2 + x + eta".into()))?
    } else {
        return Err(RecipeError::EvenSWithoutTwist);
    };
    let count = require_maximal(&curve)?;
    let prov = Provenance::new("hermitian").with("qbar", qbar).with("s", s).with("b", b).with("b_prime", b_prime);
    let notes = vec![format!("M = {}, N = {}, {count} places", curve.m(), curve.degree())];
    if curve.m() as u64 > curve.degree() as u64 {
        let roots = f.nth_roots_of_unity(curve.m() as u64)?;
        let groups = curve.y_scaling_orbits(&roots)?.0.into_iter().map(|o| o.places).collect();
        let ell = (q + qb * (qb - 1) * root) / (qb + 1);
        superelliptic_family(curve, groups, Orbits::SameX, b_prime as i64, ell, 0, prov, notes)
    } else {
        let kernel = additive_kernel(f, &qbar_terms);
        let groups = curve.x_translation_orbits(&kernel)?.into_iter().map(|o| o.places).collect();
        let ell = (q + (m - 1) * (qb - 1) * root) / qb;
        superelliptic_family(curve, groups, Orbits::SameY, b_prime as i64, ell, 0, prov, notes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_small() {
        let fam = hermitian(3, 1, 2, 0, None).unwrap();
        assert_eq!((fam.r, fam.delta), (2, 2));
        assert_eq!(fam.ell(), 5);
        assert_eq!(fam.ell_formula, 5);
        let code = fam.build(1, 5).unwrap();
        assert_eq!((code.n, code.k, code.d_designed), (15, 3, 12));
    }

    #[test]
    fn hermitian_scaling_branch() {
        let fam = hermitian(3, 1, 1, 0, None).unwrap();
        assert_eq!((fam.r, fam.delta), (2, 3));
        assert_eq!(fam.ell(), 6);
        assert_eq!(fam.ell_formula, 6);
        let code = fam.build(1, 2).unwrap();
        assert_eq!((code.n, code.k, code.d_designed), (8, 3, 4));
        assert!(matches!(hermitian(3, 1, 2, 1, None), Err(RecipeError::ParameterOutOfRange(_))));
        assert!(matches!(hermitian(3, 2, 1, 0, None), Err(RecipeError::EvenSWithoutTwist)));
    }

    #[test]
    fn hermitian_even_s_twists() {
        let fam = hermitian(2, 2, 1, 0, None).unwrap();
        assert_eq!((fam.r, fam.delta), (2, 2));
        let fam = hermitian(3, 2, 2, 0, None).unwrap();
        assert_eq!(fam.curve.genus(), 1);
        assert!(fam.ell() >= 2);
    }

    #[test]
    fn hyperelliptic_genus_two() {
        let fam = hyperelliptic(25, 2, 0, None).unwrap();
        assert_eq!((fam.r, fam.delta, fam.ell(), fam.ell_formula), (3, 3, 9, 9));
        let code = fam.build(1, 2).unwrap();
        assert_eq!((code.n, code.k, code.d_designed), (10, 4, 5));
        let fam = hyperelliptic(25, 2, 1, None).unwrap();
        assert_eq!((fam.r, fam.delta), (2, 4));
        let fam = hyperelliptic(25, 2, -1, None).unwrap();
        assert_eq!((fam.r, fam.delta), (4, 2));
        assert!(!fam.optimal);
        let code = fam.build(1, 2).unwrap();
        assert_eq!(code.d_designed, 4);
    }

    #[test]
    fn hyperelliptic_scaling_case() {
        // 9 = -1 mod 5, q = 81.
        let fam = hyperelliptic(81, 2, 0, None).unwrap();
        assert_eq!(fam.group_order, 5);
        assert!(fam.ell() as u64 >= fam.ell_formula.saturating_sub(1));
        fam.build(1, 2).unwrap();
    }

    #[test]
    fn normtrace_small() {
        let fam = normtrace(2, 2, 1, 1, 0, None).unwrap();
        assert_eq!((fam.r, fam.delta, fam.ell(), fam.ell_formula), (2, 2, 2, 2));
        let code = fam.build(1, 2).unwrap();
        assert_eq!((code.n, code.k, code.d_designed), (6, 3, 3));
        assert!(normtrace(2, 2, 3, 1, 0, None).is_err());
    }

    #[test]
    fn normtrace_translation_orientation() {
        // qbar = 2, s = 3, b = 7: M = 1 is not a curve; b = 1: M = 7 > N = 4.
        let fam = normtrace(3, 2, 2, 1, 0, None).unwrap();
        // M = 2 < N = 3.
        assert_eq!(fam.group_order, 3);
        assert_eq!(fam.ell() as u64, fam.ell_formula);
        fam.build(1, 2).unwrap();
    }

    #[test]
    fn genus2_example_family() {
        let fam = genus2(25, None).unwrap();
        assert_eq!(fam.group_order, 6);
        assert_eq!(fam.ell(), 6);
        assert_eq!(fam.ell_formula, 3);
        let BasisSpec::Ladder { defining } = &fam.basis else { panic!() };
        assert_eq!(defining.len(), 6);
        assert_eq!(defining.last(), Some(&Place::Infinity));
        let code = fam.build(1, 6).unwrap();
        assert_eq!((code.n, code.k, code.d_designed), (36, 5, 30));
    }

    #[test]
    fn elliptic_involution_family() {
        let fam = eff_involution(64, 3, Orientation::Primary, None).unwrap();
        assert_eq!(fam.ell(), 12);
        assert_eq!(fam.ell_formula, 12);
        assert_eq!(fam.orbits.iter().filter(|o| o.len() == 6).count(), 13);
        let code = fam.build(1, 2).unwrap();
        assert_eq!((code.n, code.k, code.d_designed), (12, 5, 6));
        let rev = eff_involution(64, 3, Orientation::Reversed, None).unwrap();
        assert_eq!((rev.r, rev.delta), (2, 5));
        assert_eq!(rev.groups, fam.groups);
        rev.build(1, 2).unwrap();
        assert!(eff_involution(16, 5, Orientation::Primary, None).unwrap().build(1, 2).is_err());
    }

    #[test]
    fn elliptic_order_three_family() {
        let fam = eff_order_three(64, Orientation::Primary, None).unwrap();
        assert_eq!(fam.ell_formula, 8);
        assert_eq!(fam.ell(), 8);
        let code = fam.build(1, 2).unwrap();
        assert_eq!((code.n, code.k, code.d_designed), (18, 8, 9));
        let rev = eff_order_three(64, Orientation::Reversed, None).unwrap();
        assert_eq!((rev.r, rev.delta), (2, 8));
        rev.build(1, 2).unwrap();
        assert!(eff_order_three(16, Orientation::Primary, None).is_err());
    }
}
