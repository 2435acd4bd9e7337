//! Superelliptic curves gamma * y^M = f(x), including hyperelliptic ones.

use std::collections::HashSet;

use thiserror::Error;

use crate::curve::{self, Orbit, Perm, Place, PlaceSet};
use crate::gf::{Fe, Field, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScError {
    #[error("invalid superelliptic curve: {0}")]
    InvalidCurve(String),
    #[error("field size is not a square; maximality is undefined")]
    NonSquareField,
    #[error("the curve is not hyperelliptic (M = {0})")]
    NotHyperelliptic(u32),
    #[error("the curve does not have genus 2")]
    NotGenus2,
    #[error("translation kernel is not an additive group")]
    KernelNotClosed,
    #[error("translation by {0:?} is not an automorphism")]
    TranslationNotAutomorphism(Fe),
    #[error("scaling by {0:?} is not an automorphism")]
    ScalingNotAutomorphism(Fe),
    #[error("expected the {expected} roots of unity, got {got} elements")]
    WrongRootCount { expected: u64, got: usize },
    #[error("image of {0:?} is off the curve")]
    ImageOffCurve(Place),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("group generated exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// gamma * y^M = f(x) with gcd(M, deg f) = 1, gcd(M, p) = 1 and f squarefree.
#[derive(Clone, Debug)]
pub struct SuperellipticCurve {
    field: Field,
    m: u32,
    f: Vec<Fe>,
    gamma: Fe,
    places: Vec<Place>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Univariate helpers over a field, lowest coefficient first.
fn trim(a: &mut Vec<Fe>) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn poly_rem(f: &Field, a: &[Fe], m: &[Fe]) -> Vec<Fe> {
    let mut a = a.to_vec();
    trim(&mut a);
    let dm = m.len() - 1;
    let inv = f.inv(m[dm]);
    while a.len() > dm {
        let top = a.len() - 1;
        let c = f.mul(a[top], inv);
        for (i, &mi) in m.iter().enumerate() {
            a[top - dm + i] = f.sub(a[top - dm + i], f.mul(c, mi));
        }
        a.pop();
        trim(&mut a);
    }
    a
}

pub(crate) fn poly_gcd(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn derivative(f: &Field, a: &[Fe]) -> Vec<Fe> {
    a.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.int(i as i64), c)).collect()
}

impl SuperellipticCurve {
    pub fn new(field: &Field, m: u32, f_coeffs: Vec<Fe>, gamma: Fe) -> Result<SuperellipticCurve, ScError> {
        let mut f = f_coeffs;
        trim(&mut f);
        if f.len() < 2 {
            return Err(ScError::InvalidCurve("f must be nonconstant".into()));
        }
        let n = (f.len() - 1) as u64;
        if m < 2 || gcd(m as u64, n) != 1 || gcd(m as u64, field.p() as u64) != 1 {
            return Err(ScError::InvalidCurve(format!("need gcd(M, N) = gcd(M, p) = 1, got M = {m}, N = {n}")));
        }
        if gamma.is_zero() {
            return Err(ScError::InvalidCurve("twist must be nonzero".into()));
        }
        if poly_gcd(field, &f, &derivative(field, &f)).len() != 1 {
            return Err(ScError::InvalidCurve("gcd(f, f') is not 1".into()));
        }
        let mut c = SuperellipticCurve { field: field.clone(), m, f, gamma, places: Vec::new() };
        c.places = c.enumerate_places();
        Ok(c)
    }

    /// y^M = x^N + x-type curves are common enough to deserve a shortcut:
    /// builds gamma * y^M = sum of c x^e over the given (e, c) terms.
    pub fn from_terms(field: &Field, m: u32, terms: &[(usize, Fe)], gamma: Fe) -> Result<SuperellipticCurve, ScError> {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut f = vec![Fe::ZERO; deg + 1];
        for &(e, c) in terms {
            f[e] = field.add(f[e], c);
        }
        SuperellipticCurve::new(field, m, f, gamma)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// N = deg f.
    pub fn degree(&self) -> u32 {
        (self.f.len() - 1) as u32
    }

    pub fn f_coeffs(&self) -> &[Fe] {
        &self.f
    }

    pub fn gamma(&self) -> Fe {
        self.gamma
    }

    pub fn genus(&self) -> u64 {
        (self.m as u64 - 1) * (self.degree() as u64 - 1) / 2
    }

    pub fn eval_f(&self, x: Fe) -> Fe {
        self.field.eval_poly(&self.f, x)
    }

    pub fn is_on_curve(&self, p: &Place) -> bool {
        match *p {
            Place::Infinity => true,
            Place::Affine { x, y } => self.field.mul(self.gamma, self.field.pow(y, self.m as u64)) == self.eval_f(x),
        }
    }

    fn enumerate_places(&self) -> Vec<Place> {
        let f = &self.field;
        let mut roots: Vec<Vec<Fe>> = vec![Vec::new(); f.q() as usize];
        for y in f.elements() {
            roots[f.pow(y, self.m as u64).0 as usize].push(y);
        }
        let ginv = f.inv(self.gamma);
        let mut out = vec![Place::Infinity];
        for x in f.elements() {
            let c = f.mul(self.eval_f(x), ginv);
            out.extend(roots[c.0 as usize].iter().map(|&y| Place::affine(x, y)));
        }
        out.sort();
        out
    }

    /// The place at infinity followed by all affine places, canonically sorted.
    pub fn places(&self) -> Vec<Place> {
        self.places.clone()
    }

    pub fn num_places(&self) -> u64 {
        self.places.len() as u64
    }

    pub fn place_set(&self) -> PlaceSet {
        PlaceSet::new(self.places.clone())
    }

    /// Compares the place count against q + 1 +- 2g sqrt(q).
    pub fn maximality_check(&self) -> Result<(Maximality, u64), ScError> {
        let q = self.field.q() as u64;
        let root = (q as f64).sqrt().round() as u64;
        let n = self.num_places();
        if root * root != q {
            return Err(ScError::NonSquareField);
        }
        let g = self.genus();
        let kind = if n == q + 1 + 2 * g * root {
            Maximality::Maximal
        } else if n + 2 * g * root == q + 1 {
            Maximality::Minimal
        } else {
            Maximality::Neither
        };
        Ok((kind, n))
    }

    /// The hyperelliptic involution (x, y) -> (x, -y).
    pub fn hyperelliptic_conjugate(&self, p: &Place) -> Result<Place, ScError> {
        if self.m != 2 {
            return Err(ScError::NotHyperelliptic(self.m));
        }
        Ok(match *p {
            Place::Infinity => Place::Infinity,
            Place::Affine { x, y } => Place::affine(x, self.field.neg(y)),
        })
    }

    /// Whether the affine part of a list of places is reduced: no place
    /// appears together with its distinct conjugate, and places fixed by
    /// the involution appear at most once.
    pub fn is_reduced(&self, places: &[Place]) -> Result<bool, ScError> {
        let affine: Vec<&Place> = places.iter().filter(|p| !p.is_infinity()).collect();
        for (i, p) in affine.iter().enumerate() {
            let conj = self.hyperelliptic_conjugate(p)?;
            for other in &affine[i + 1..] {
                if **other == conj {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Orbits of affine places under x -> x + a for a in `kernel`.
    pub fn x_translation_orbits(&self, kernel: &[Fe]) -> Result<Vec<Orbit>, ScError> {
        let f = &self.field;
        let ks: HashSet<Fe> = kernel.iter().copied().collect();
        if !ks.contains(&Fe::ZERO) || ks.len() != kernel.len() || kernel.iter().any(|&a| kernel.iter().any(|&b| !ks.contains(&f.add(a, b)))) {
            return Err(ScError::KernelNotClosed);
        }
        let set = self.place_set();
        let mut gens = Vec::new();
        for &a in kernel {
            gens.push(self.affine_perm(&set, |x, y| Place::affine(f.add(x, a), y)).ok_or(ScError::TranslationNotAutomorphism(a))?);
        }
        Ok(self.affine_orbits(&set, &gens, kernel.len()))
    }

    /// Orbits of affine places with x != 0 under x -> zeta x for zeta in
    /// `roots`; the places with x = 0 are returned separately.
    pub fn x_scaling_orbits(&self, roots: &[Fe]) -> Result<(Vec<Orbit>, Vec<Place>), ScError> {
        let f = &self.field;
        let set = self.place_set();
        let mut gens = Vec::new();
        for &z in roots {
            gens.push(self.affine_perm(&set, |x, y| Place::affine(f.mul(z, x), y)).ok_or(ScError::ScalingNotAutomorphism(z))?);
        }
        let all = self.affine_orbits(&set, &gens, roots.len());
        Ok(split_excluded(all, |p| p.x() == Some(Fe::ZERO)))
    }

    /// Orbits of affine places with y != 0 under y -> zeta y for the M-th
    /// roots of unity; the places with y = 0 are returned separately.
    pub fn y_scaling_orbits(&self, roots: &[Fe]) -> Result<(Vec<Orbit>, Vec<Place>), ScError> {
        let f = &self.field;
        let m = self.m as u64;
        let distinct: HashSet<Fe> = roots.iter().copied().collect();
        if (f.q() as u64 - 1) % m != 0
            || roots.len() as u64 != m
            || distinct.len() != roots.len()
            || roots.iter().any(|&z| f.pow(z, m) != Fe::ONE)
        {
            return Err(ScError::WrongRootCount { expected: m, got: roots.len() });
        }
        let set = self.place_set();
        let gens: Vec<Perm> = roots
            .iter()
            .map(|&z| self.affine_perm(&set, |x, y| Place::affine(x, f.mul(z, y))).expect("y-scaling by M-th roots preserves the curve"))
            .collect();
        let all = self.affine_orbits(&set, &gens, roots.len());
        Ok(split_excluded(all, |p| p.y() == Some(Fe::ZERO)))
    }

    fn affine_perm(&self, set: &PlaceSet, map: impl Fn(Fe, Fe) -> Place) -> Option<Perm> {
        set.places()
            .iter()
            .map(|p| match *p {
                Place::Infinity => set.index_of(p),
                Place::Affine { x, y } => set.index_of(&map(x, y)),
            })
            .collect()
    }

    fn affine_orbits(&self, set: &PlaceSet, gens: &[Perm], order: usize) -> Vec<Orbit> {
        let group = curve::generate_group(set.len(), gens, order.max(1)).expect("abelian generator set closes at its size");
        curve::orbits(&group, set).into_iter().filter(|o| !o.places[0].is_infinity()).collect()
    }
}

fn split_excluded(all: Vec<Orbit>, excluded: impl Fn(&Place) -> bool) -> (Vec<Orbit>, Vec<Place>) {
    let mut kept = Vec::new();
    let mut out = Vec::new();
    for o in all {
        if excluded(&o.places[0]) {
            out.extend(o.places);
        } else {
            kept.push(o);
        }
    }
    (kept, out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Maximality {
    Maximal,
    Minimal,
    Neither,
}

/// The automorphism of a genus-2 curve y^2 = f(x) attached to a matrix
/// (a, b; c, d): x -> (ax + b)/(cx + d), y -> (ad - bc) y / (cx + d)^3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Genus2Automorphism {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub d: Fe,
}

impl Genus2Automorphism {
    pub fn new(field: &Field, a: Fe, b: Fe, c: Fe, d: Fe) -> Result<Genus2Automorphism, ScError> {
        if field.sub(field.mul(a, d), field.mul(b, c)).is_zero() {
            return Err(ScError::SingularMatrix);
        }
        Ok(Genus2Automorphism { a, b, c, d })
    }

    /// Matrix product self * other, i.e. the map `other` followed by `self`
    /// up to the usual scalar ambiguity.
    pub fn compose(&self, field: &Field, other: &Genus2Automorphism) -> Genus2Automorphism {
        let f = field;
        Genus2Automorphism {
            a: f.add(f.mul(self.a, other.a), f.mul(self.b, other.c)),
            b: f.add(f.mul(self.a, other.b), f.mul(self.b, other.d)),
            c: f.add(f.mul(self.c, other.a), f.mul(self.d, other.c)),
            d: f.add(f.mul(self.c, other.b), f.mul(self.d, other.d)),
        }
    }

    /// Image of a place. A place with cx + d = 0 goes to infinity; infinity
    /// goes to (a/c, 0) when c != 0 since y/(cx+d)^3 has a zero there.
    pub fn apply(&self, curve: &SuperellipticCurve, p: &Place) -> Result<Place, ScError> {
        if curve.m() != 2 || curve.degree() != 5 {
            return Err(ScError::NotGenus2);
        }
        let f = curve.field();
        let img = match *p {
            Place::Infinity => {
                if self.c.is_zero() {
                    Place::Infinity
                } else {
                    Place::affine(f.div(self.a, self.c), Fe::ZERO)
                }
            }
            Place::Affine { x, y } => {
                let den = f.add(f.mul(self.c, x), self.d);
                if den.is_zero() {
                    Place::Infinity
                } else {
                    let det = f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c));
                    let nx = f.div(f.add(f.mul(self.a, x), self.b), den);
                    let ny = f.div(f.mul(det, y), f.pow(den, 3));
                    Place::affine(nx, ny)
                }
            }
        };
        if !curve.is_on_curve(&img) {
            return Err(ScError::ImageOffCurve(*p));
        }
        Ok(img)
    }

    /// The induced permutation of rational places, validated to be a bijection.
    pub fn to_perm(&self, curve: &SuperellipticCurve, set: &PlaceSet) -> Result<Perm, ScError> {
        let mut seen = HashSet::new();
        let mut perm = Vec::with_capacity(set.len());
        for p in set.places() {
            let img = self.apply(curve, p)?;
            let idx = set.index_of(&img).ok_or(ScError::ImageOffCurve(*p))?;
            if !seen.insert(idx) {
                return Err(ScError::ImageOffCurve(*p));
            }
            perm.push(idx);
        }
        Ok(perm)
    }
}

/// The permutation group generated by genus-2 automorphisms, capped at
/// 240 elements.
pub fn genus2_group(curve: &SuperellipticCurve, gens: &[Genus2Automorphism], set: &PlaceSet) -> Result<Vec<Perm>, ScError> {
    const CAP: usize = 240;
    let perms = gens.iter().map(|g| g.to_perm(curve, set)).collect::<Result<Vec<_>, _>>()?;
    curve::generate_group(set.len(), &perms, CAP).ok_or(ScError::GroupTooLarge(CAP))
}

/// Splits q = p^e into (p, e).
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p as u32, e))
}

/// The Norm-Trace style curve y^M = Tr(x) from GF(qbar^s) to GF(qbar^c),
/// with M = (qbar^s - 1)/(b (qbar - 1)).
pub fn norm_trace_curve(field: &Field, qbar: u64, s: u32, b: u64, c: u32) -> Result<SuperellipticCurve, ScError> {
    if c == 0 || s % c != 0 || c == s {
        return Err(ScError::InvalidCurve(format!("c = {c} must be a proper divisor of s = {s}")));
    }
    let full = (qbar.pow(s) - 1) / (qbar - 1);
    if b == 0 || full % b != 0 {
        return Err(ScError::InvalidCurve(format!("b = {b} must divide {full}")));
    }
    let m = full / b;
    let terms: Vec<(usize, Fe)> = (0..s / c).map(|i| (qbar.pow(c * i) as usize, Fe::ONE)).collect();
    SuperellipticCurve::from_terms(field, m as u32, &terms, Fe::ONE)
}

/// Closed-form place count of the Norm-Trace style curve.
pub fn norm_trace_count(qbar: u64, s: u32, b: u64, c: u32) -> u64 {
    let q = qbar.pow(s);
    let qc = qbar.pow(c);
    gcd(b, (qc - 1) / (qbar - 1)) * q * (q - 1) / (b * qc) + q / qc + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f25() -> Field {
        Field::new(5, 2, Some(&[2, 4, 1])).unwrap()
    }

    fn y2_x5_x(f: &Field, gamma: Fe) -> SuperellipticCurve {
        SuperellipticCurve::from_terms(f, 2, &[(5, Fe::ONE), (1, Fe::ONE)], gamma).unwrap()
    }

    #[test]
    fn rejects_bad_curves() {
        let f = f25();
        assert!(SuperellipticCurve::from_terms(&f, 2, &[(4, Fe::ONE), (1, Fe::ONE)], Fe::ONE).is_err());
        assert!(SuperellipticCurve::from_terms(&f, 5, &[(3, Fe::ONE), (1, Fe::ONE)], Fe::ONE).is_err());
        // (x - 1)^2 (x^3 + ...) has a repeated root
        let one = Fe::ONE;
        let neg2 = f.int(-2);
        assert!(SuperellipticCurve::new(&f, 2, vec![one, neg2, one, Fe::ZERO, Fe::ZERO, Fe::ZERO], one).is_err());
        let sq = SuperellipticCurve::new(&f, 2, vec![Fe::ZERO, one, neg2, one], one);
        assert!(sq.is_err());
    }

    #[test]
    fn hermitian_gf4_has_nine_places() {
        let f = Field::new(2, 2, None).unwrap();
        let c = SuperellipticCurve::from_terms(&f, 3, &[(2, Fe::ONE), (1, Fe::ONE)], Fe::ONE).unwrap();
        assert_eq!(c.num_places(), 9);
        assert_eq!(c.genus(), 1);
        assert_eq!(c.places()[0], Place::Infinity);
    }

    #[test]
    fn genus2_gf25_is_maximal() {
        let f = f25();
        let c = y2_x5_x(&f, Fe::ONE);
        assert_eq!(c.genus(), 2);
        // q + 2 g sqrt(q) + 1 = 25 + 20 + 1
        assert_eq!(c.maximality_check().unwrap(), (Maximality::Maximal, 46));
    }

    #[test]
    fn genus2_gf625_minimal_and_twist_maximal() {
        let f = Field::new(5, 4, None).unwrap();
        let c = y2_x5_x(&f, Fe::ONE);
        assert_eq!(c.maximality_check().unwrap(), (Maximality::Minimal, 626 - 100));
        let g = f.quadratic_nonresidue().unwrap();
        let t = y2_x5_x(&f, g);
        assert_eq!(t.maximality_check().unwrap(), (Maximality::Maximal, 626 + 100));
        // affine counts of the curve and its twist sum to 2q
        assert_eq!(c.num_places() - 1 + t.num_places() - 1, 2 * 625);
    }

    #[test]
    fn maximality_needs_square_field() {
        let f = Field::new(2, 3, None).unwrap();
        let c = SuperellipticCurve::from_terms(&f, 3, &[(2, Fe::ONE), (1, Fe::ONE)], Fe::ONE).unwrap();
        assert_eq!(c.maximality_check(), Err(ScError::NonSquareField));
    }

    #[test]
    fn conjugation() {
        let f = f25();
        let c = y2_x5_x(&f, Fe::ONE);
        for p in c.places() {
            let i = c.hyperelliptic_conjugate(&p).unwrap();
            assert!(c.is_on_curve(&i));
            assert_eq!(c.hyperelliptic_conjugate(&i).unwrap(), p);
            if p.y() == Some(Fe::ZERO) {
                assert_eq!(i, p);
            }
        }
        let p = c.places().into_iter().find(|p| p.y().is_some_and(|y| !y.is_zero())).unwrap();
        let ip = c.hyperelliptic_conjugate(&p).unwrap();
        assert!(!c.is_reduced(&[p, ip]).unwrap());
        assert!(c.is_reduced(&[p, Place::Infinity]).unwrap());
        let f4 = Field::new(2, 2, None).unwrap();
        let h = SuperellipticCurve::from_terms(&f4, 3, &[(2, Fe::ONE), (1, Fe::ONE)], Fe::ONE).unwrap();
        assert_eq!(h.hyperelliptic_conjugate(&Place::Infinity), Err(ScError::NotHyperelliptic(3)));
    }

    #[test]
    fn translation_orbits_genus2() {
        let f = f25();
        let c = y2_x5_x(&f, Fe::ONE);
        let kernel: Vec<Fe> = f.elements().filter(|&z| f.add(f.pow(z, 5), z).is_zero()).collect();
        assert_eq!(kernel.len(), 5);
        let orbs = c.x_translation_orbits(&kernel).unwrap();
        // 45 affine places in orbits of 5
        assert_eq!(orbs.len(), 9);
        for o in &orbs {
            assert_eq!(o.len(), 5);
            let ys: HashSet<Fe> = o.places.iter().map(|p| p.y().unwrap()).collect();
            let xs: HashSet<Fe> = o.places.iter().map(|p| p.x().unwrap()).collect();
            assert_eq!((ys.len(), xs.len()), (1, 5));
        }
        assert_eq!(c.x_translation_orbits(&[Fe::ZERO, Fe::ONE]), Err(ScError::KernelNotClosed));
        let prime: Vec<Fe> = (0..5).map(|i| f.int(i)).collect();
        assert!(matches!(c.x_translation_orbits(&prime), Err(ScError::TranslationNotAutomorphism(_))));
    }

    #[test]
    fn y_scaling_hermitian_gf9() {
        let f = Field::new(3, 2, None).unwrap();
        let c = SuperellipticCurve::from_terms(&f, 4, &[(3, Fe::ONE), (1, Fe::ONE)], Fe::ONE).unwrap();
        assert_eq!(c.num_places() - 1, 27);
        let roots = f.nth_roots_of_unity(4).unwrap();
        let (orbs, excluded) = c.y_scaling_orbits(&roots).unwrap();
        assert_eq!(excluded.len(), 3);
        assert_eq!(orbs.len(), 6);
        for o in &orbs {
            let xs: HashSet<Fe> = o.places.iter().map(|p| p.x().unwrap()).collect();
            let ys: HashSet<Fe> = o.places.iter().map(|p| p.y().unwrap()).collect();
            assert_eq!((xs.len(), ys.len(), o.len()), (1, 4, 4));
        }
        assert!(matches!(c.y_scaling_orbits(&roots[..3]), Err(ScError::WrongRootCount { .. })));
        let f4 = Field::new(2, 3, None).unwrap();
        let h = SuperellipticCurve::from_terms(&f4, 3, &[(2, Fe::ONE), (1, Fe::ONE)], Fe::ONE).unwrap();
        assert!(matches!(h.y_scaling_orbits(&[Fe::ONE]), Err(ScError::WrongRootCount { .. })));
    }

    #[test]
    fn genus2_automorphisms() {
        let f = f25();
        let c = y2_x5_x(&f, Fe::ONE);
        let set = c.place_set();
        let id = Genus2Automorphism::new(&f, Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE).unwrap();
        assert_eq!(id.to_perm(&c, &set).unwrap(), curve::identity_perm(set.len()));
        let m1 = f.neg(Fe::ONE);
        let iota = Genus2Automorphism::new(&f, m1, Fe::ZERO, Fe::ZERO, m1).unwrap();
        for p in c.places() {
            assert_eq!(iota.apply(&c, &p).unwrap(), c.hyperelliptic_conjugate(&p).unwrap());
        }
        let u = f.generator();
        let alpha = f.pow(u, 3);
        assert_eq!(f.mul(alpha, alpha), f.int(2));
        let sigma = Genus2Automorphism::new(&f, alpha, m1, m1, Fe::ZERO).unwrap();
        let group = genus2_group(&c, &[sigma], &set).unwrap();
        assert_eq!(group.len(), 6);
        let iota_perm = iota.to_perm(&c, &set).unwrap();
        assert!(!group.contains(&iota_perm));
        // composition agrees with the matrix product
        let s2 = sigma.compose(&f, &sigma);
        let s = sigma.to_perm(&c, &set).unwrap();
        assert_eq!(s2.to_perm(&c, &set).unwrap(), curve::compose(&s, &s));
        assert_eq!(Genus2Automorphism::new(&f, Fe::ONE, Fe::ONE, Fe::ONE, Fe::ONE), Err(ScError::SingularMatrix));
    }

    #[test]
    fn norm_trace_counts_match_formula() {
        let mut checked = 0;
        for (qbar, s) in [(2u64, 2u32), (2, 3), (2, 4), (2, 6), (3, 2), (3, 4), (4, 2), (4, 3), (5, 2), (7, 2), (8, 2), (9, 2)] {
            let (p, e) = prime_power(qbar).unwrap();
            if qbar.pow(s) > 81 {
                continue;
            }
            let field = Field::new(p, e * s, None).unwrap();
            for c in (1..s).filter(|c| s % c == 0) {
                let full = (qbar.pow(s) - 1) / (qbar - 1);
                for b in (1..full).filter(|b| full % b == 0) {
                    let m = full / b;
                    let n = qbar.pow(s - c);
                    if m < 2 || gcd(m, n) != 1 {
                        continue;
                    }
                    let curve = norm_trace_curve(&field, qbar, s, b, c).unwrap();
                    assert_eq!(curve.num_places(), norm_trace_count(qbar, s, b, c), "qbar={qbar} s={s} b={b} c={c}");
                    checked += 1;
                }
            }
        }
        assert!(checked >= 8);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
    }
}
