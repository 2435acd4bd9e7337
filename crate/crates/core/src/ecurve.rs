//! Elliptic curves in general Weierstrass form
//! y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.

use std::collections::HashSet;

use thiserror::Error;

use crate::curve::{self, Orbit, Perm, Place, PlaceSet};
use crate::gf::{prime_factors, Fe, Field};
use crate::linalg::binomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcError {
    #[error("the Weierstrass model is singular")]
    Singular,
    #[error("point {0:?} is not on the curve")]
    PointNotOnCurve(Place),
    #[error("no subgroup of order {0}")]
    NoSuchSubgroup(u64),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("map {0} does not preserve the curve")]
    NotAnAutomorphism(String),
    #[error("{count} subset sums exceed the cap of {cap}")]
    BudgetExceeded { count: u64, cap: u64 },
    #[error("no curve with {target} points after {tried} attempts")]
    SearchExhausted { target: u64, tried: u64 },
    #[error("bad input: {0}")]
    BadInput(String),
}

/// Nonsingular Weierstrass curve together with its rational points.
#[derive(Clone, Debug)]
pub struct WeierstrassCurve {
    field: Field,
    a: [Fe; 5],
    points: Vec<Place>,
}

impl WeierstrassCurve {
    /// Coefficients in the order a1, a2, a3, a4, a6.
    pub fn new(field: &Field, a: [Fe; 5]) -> Result<WeierstrassCurve, EcError> {
        let mut c = WeierstrassCurve { field: field.clone(), a, points: Vec::new() };
        if c.discriminant().is_zero() {
            return Err(EcError::Singular);
        }
        c.points = c.enumerate_points();
        Ok(c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coefficients(&self) -> [Fe; 5] {
        self.a
    }

    pub fn discriminant(&self) -> Fe {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let k = |n: i64| f.int(n);
        let b2 = f.add(f.mul(a1, a1), f.mul(k(4), a2));
        let b4 = f.add(f.mul(k(2), a4), f.mul(a1, a3));
        let b6 = f.add(f.mul(a3, a3), f.mul(k(4), a6));
        let b8 = f.sum([
            f.product([a1, a1, a6]),
            f.product([k(4), a2, a6]),
            f.neg(f.product([a1, a3, a4])),
            f.product([a2, a3, a3]),
            f.neg(f.mul(a4, a4)),
        ]);
        f.sum([
            f.neg(f.product([b2, b2, b8])),
            f.neg(f.product([k(8), b4, b4, b4])),
            f.neg(f.product([k(27), b6, b6])),
            f.product([k(9), b2, b4, b6]),
        ])
    }

    pub fn is_on_curve(&self, p: &Place) -> bool {
        match *p {
            Place::Infinity => true,
            Place::Affine { x, y } => {
                let f = &self.field;
                let [a1, a2, a3, a4, a6] = self.a;
                let lhs = f.sum([f.mul(y, y), f.product([a1, x, y]), f.mul(a3, y)]);
                let rhs = f.sum([f.product([x, x, x]), f.product([a2, x, x]), f.mul(a4, x), a6]);
                lhs == rhs
            }
        }
    }

    /// x-sweep: for each x solve y^2 + b y = c with b = a1 x + a3.
    fn enumerate_points(&self) -> Vec<Place> {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let mut pts = vec![Place::Infinity];
        let q = f.q() as usize;
        if f.p() == 2 {
            // Artin-Schreier table: as_root[v] is some w with w^2 + w = v.
            let mut as_root = vec![None; q];
            for w in f.elements() {
                as_root[f.add(f.mul(w, w), w).0 as usize] = Some(w);
            }
            let half = f.q() as u64 / 2;
            for x in f.elements() {
                let b = f.add(f.mul(a1, x), a3);
                let c = f.sum([f.product([x, x, x]), f.product([a2, x, x]), f.mul(a4, x), a6]);
                if b.is_zero() {
                    pts.push(Place::affine(x, f.pow(c, half)));
                } else {
                    let v = f.div(c, f.mul(b, b));
                    if !f.trace(v).is_zero() {
                        continue;
                    }
                    let w = as_root[v.0 as usize].expect("trace zero implies solvable");
                    pts.push(Place::affine(x, f.mul(b, w)));
                    pts.push(Place::affine(x, f.mul(b, f.add(w, Fe::ONE))));
                }
            }
        } else {
            let roots = f.sqrt_table();
            let half = f.inv(f.int(2));
            for x in f.elements() {
                let b = f.add(f.mul(a1, x), a3);
                let c = f.sum([f.product([x, x, x]), f.product([a2, x, x]), f.mul(a4, x), a6]);
                let disc = f.add(f.mul(b, b), f.mul(f.int(4), c));
                if let Some(r) = roots[disc.0 as usize] {
                    let y1 = f.mul(f.sub(r, b), half);
                    let y2 = f.mul(f.sub(f.neg(r), b), half);
                    pts.push(Place::affine(x, y1));
                    if y2 != y1 {
                        pts.push(Place::affine(x, y2));
                    }
                }
            }
        }
        pts.sort();
        pts
    }

    /// All rational points, infinity first, in canonical order.
    pub fn points(&self) -> Vec<Place> {
        self.points.clone()
    }

    pub fn num_points(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn point_set(&self) -> PlaceSet {
        PlaceSet::new(self.points.clone())
    }

    /// The elliptic involution (x, y) -> (x, -y - a1 x - a3).
    pub fn neg(&self, p: &Place) -> Place {
        match *p {
            Place::Infinity => Place::Infinity,
            Place::Affine { x, y } => {
                let f = &self.field;
                let [a1, _, a3, _, _] = self.a;
                Place::affine(x, f.sub(f.neg(y), f.add(f.mul(a1, x), a3)))
            }
        }
    }

    /// Chord-tangent addition. Inputs are assumed to be on the curve; use
    /// [`WeierstrassCurve::checked_add`] to validate them.
    pub fn add(&self, p: &Place, q: &Place) -> Place {
        let (x1, y1, x2, y2) = match (*p, *q) {
            (Place::Infinity, _) => return *q,
            (_, Place::Infinity) => return *p,
            (Place::Affine { x: x1, y: y1 }, Place::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        if x1 == x2 && f.sum([y1, y2, f.mul(a1, x2), a3]).is_zero() {
            return Place::Infinity;
        }
        let (lambda, nu) = if x1 != x2 {
            let dx = f.sub(x2, x1);
            (f.div(f.sub(y2, y1), dx), f.div(f.sub(f.mul(y1, x2), f.mul(y2, x1)), dx))
        } else {
            let den = f.sum([f.mul(f.int(2), y1), f.mul(a1, x1), a3]);
            let num = f.sum([f.product([f.int(3), x1, x1]), f.product([f.int(2), a2, x1]), a4, f.neg(f.mul(a1, y1))]);
            let num2 = f.sum([
                f.neg(f.product([x1, x1, x1])),
                f.mul(a4, x1),
                f.mul(f.int(2), a6),
                f.neg(f.mul(a3, y1)),
            ]);
            (f.div(num, den), f.div(num2, den))
        };
        let x3 = f.sum([f.mul(lambda, lambda), f.mul(a1, lambda), f.neg(a2), f.neg(x1), f.neg(x2)]);
        let y3 = f.sub(f.neg(f.mul(f.add(lambda, a1), x3)), f.add(nu, a3));
        Place::affine(x3, y3)
    }

    pub fn checked_add(&self, p: &Place, q: &Place) -> Result<Place, EcError> {
        for pt in [p, q] {
            if !self.is_on_curve(pt) {
                return Err(EcError::PointNotOnCurve(*pt));
            }
        }
        Ok(self.add(p, q))
    }

    pub fn sub(&self, p: &Place, q: &Place) -> Place {
        self.add(p, &self.neg(q))
    }

    /// [m]P by double-and-add.
    pub fn scalar_mul(&self, m: i64, p: &Place) -> Place {
        let base = if m < 0 { self.neg(p) } else { *p };
        let mut k = m.unsigned_abs();
        let mut acc = Place::Infinity;
        let mut cur = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &cur);
            }
            cur = self.add(&cur, &cur);
            k >>= 1;
        }
        acc
    }

    pub fn sum_points<'a, I: IntoIterator<Item = &'a Place>>(&self, pts: I) -> Place {
        pts.into_iter().fold(Place::Infinity, |acc, p| self.add(&acc, p))
    }

    /// Order of a rational point, using the known group order.
    pub fn point_order(&self, p: &Place) -> u64 {
        let mut ord = self.num_points();
        for l in prime_factors(ord) {
            while ord % l == 0 && self.scalar_mul((ord / l) as i64, p) == Place::Infinity {
                ord /= l;
            }
        }
        ord
    }

    /// Decomposes the point group as Z/n1 x Z/n2 with n1 | n2.
    pub fn group_structure(&self) -> GroupStructure {
        let n = self.num_points();
        let orders: Vec<u64> = self.points.iter().map(|p| self.point_order(p)).collect();
        let n2 = *orders.iter().max().expect("O is always present");
        let gen2 = self.points[orders.iter().position(|&o| o == n2).unwrap()];
        let n1 = n / n2;
        let span2: HashSet<Place> = (0..n2).map(|i| self.scalar_mul(i as i64, &gen2)).collect();
        let gen1 = self
            .points
            .iter()
            .zip(&orders)
            .find(|(p, &o)| o == n1 && (1..n1).all(|i| !span2.contains(&self.scalar_mul(i as i64, p))))
            .map(|(p, _)| *p)
            .expect("a complement to the largest cyclic factor exists");
        GroupStructure { n1, n2, gen1, gen2 }
    }

    /// A subgroup of order h. When h = h0^2 and h0 divides both invariant
    /// factors the h0-torsion is returned; otherwise the subgroup generated
    /// by suitable multiples of the two generators.
    pub fn subgroup_of_order(&self, st: &GroupStructure, h: u64) -> Result<Vec<Place>, EcError> {
        let n = self.num_points();
        if h == 0 || n % h != 0 {
            return Err(EcError::NoSuchSubgroup(h));
        }
        let h0 = (h as f64).sqrt().round() as u64;
        let sub: Vec<Place> = if h0 * h0 == h && st.n1 % h0 == 0 {
            self.points.iter().filter(|p| self.scalar_mul(h0 as i64, p) == Place::Infinity).copied().collect()
        } else {
            let d2 = gcd(h, st.n2);
            let d1 = h / d2;
            if st.n1 % d1 != 0 {
                return Err(EcError::NoSuchSubgroup(h));
            }
            let g1 = self.scalar_mul((st.n1 / d1) as i64, &st.gen1);
            let g2 = self.scalar_mul((st.n2 / d2) as i64, &st.gen2);
            let mut s: Vec<Place> = (0..d1)
                .flat_map(|i| (0..d2).map(move |j| (i, j)))
                .map(|(i, j)| self.add(&self.scalar_mul(i as i64, &g1), &self.scalar_mul(j as i64, &g2)))
                .collect();
            s.sort();
            s.dedup();
            s
        };
        if sub.len() as u64 != h || !self.is_subgroup(&sub) {
            return Err(EcError::NoSuchSubgroup(h));
        }
        Ok(sub)
    }

    pub fn is_subgroup(&self, h: &[Place]) -> bool {
        let set: HashSet<&Place> = h.iter().collect();
        set.contains(&Place::Infinity) && h.iter().all(|a| h.iter().all(|b| set.contains(&self.sub(a, b))))
    }

    /// Whether a1 + ... + an and b1 + ... + bn are linearly equivalent,
    /// i.e. whether their sums under the group law agree.
    pub fn divisor_class_sum(&self, a: &[Place], b: &[Place]) -> Result<bool, EcError> {
        if a.len() != b.len() {
            return Err(EcError::BadInput("divisors of different degree".into()));
        }
        Ok(self.sum_points(a) == self.sum_points(b))
    }

    /// The translation x -> (y+1)/x^2, y -> (y+1)/y by Q = (0, 1) on
    /// y^2 + y = x^3, written as explicit rational maps. Defined where x and
    /// y are nonzero.
    pub fn tau_q_rational(&self, p: &Place) -> Option<Place> {
        let f = &self.field;
        let (x, y) = (p.x()?, p.y()?);
        if x.is_zero() || y.is_zero() {
            return None;
        }
        let y1 = f.add(y, Fe::ONE);
        Some(Place::affine(f.div(y1, f.mul(x, x)), f.div(y1, y)))
    }

    /// Searches curves (short Weierstrass in odd characteristic, the
    /// supersingular family then the ordinary family in characteristic 2)
    /// for one with exactly `target` rational points.
    pub fn search_with_order(field: &Field, target: u64, max_attempts: u64) -> Result<WeierstrassCurve, EcError> {
        let mut tried = 0;
        let els: Vec<Fe> = field.elements().collect();
        let mut candidates: Vec<[Fe; 5]> = Vec::new();
        let z = Fe::ZERO;
        if field.p() == 2 {
            for &a4 in &els {
                for &a6 in &els {
                    candidates.push([z, z, Fe::ONE, a4, a6]);
                }
            }
            for &a2 in &els {
                for &a6 in &els {
                    candidates.push([Fe::ONE, a2, z, z, a6]);
                }
            }
        } else {
            for &a4 in &els {
                for &a6 in &els {
                    candidates.push([z, z, z, a4, a6]);
                }
            }
        }
        for a in candidates {
            if tried >= max_attempts {
                break;
            }
            tried += 1;
            if let Ok(c) = WeierstrassCurve::new(field, a) {
                if c.num_points() == target {
                    return Ok(c);
                }
            }
        }
        Err(EcError::SearchExhausted { target, tried })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Z/n1 x Z/n2 with verified generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub n1: u64,
    pub n2: u64,
    pub gen1: Place,
    pub gen2: Place,
}

impl GroupStructure {
    /// Checks that (i, j) -> [i]gen1 + [j]gen2 hits every point exactly once.
    pub fn verify(&self, c: &WeierstrassCurve) -> bool {
        let mut hit = HashSet::new();
        for i in 0..self.n1 {
            let a = c.scalar_mul(i as i64, &self.gen1);
            for j in 0..self.n2 {
                hit.insert(c.add(&a, &c.scalar_mul(j as i64, &self.gen2)));
            }
        }
        self.n1 * self.n2 == c.num_points()
            && self.n2 % self.n1 == 0
            && hit.len() as u64 == c.num_points()
            && c.point_order(&self.gen1) == self.n1
            && c.point_order(&self.gen2) == self.n2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EcAutKind {
    Translation(Place),
    /// (x, y) -> (u^2 x + r, u^3 y + u^2 s x + t).
    FixingO { u: Fe, r: Fe, s: Fe, t: Fe },
    Composite(Vec<EcAutomorphism>),
}

/// An automorphism of the curve as an executable point map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EcAutomorphism {
    pub kind: EcAutKind,
    pub description: String,
}

impl EcAutomorphism {
    pub fn translation(c: &WeierstrassCurve, q: Place) -> Result<EcAutomorphism, EcError> {
        if !c.is_on_curve(&q) {
            return Err(EcError::PointNotOnCurve(q));
        }
        Ok(EcAutomorphism { kind: EcAutKind::Translation(q), description: format!("translation by {q:?}") })
    }

    /// A change of variables fixing O, validated on every rational point.
    pub fn fixing_o(
        c: &WeierstrassCurve,
        u: Fe,
        r: Fe,
        s: Fe,
        t: Fe,
        description: &str,
    ) -> Result<EcAutomorphism, EcError> {
        if u.is_zero() {
            return Err(EcError::NotAnAutomorphism(description.into()));
        }
        let aut = EcAutomorphism { kind: EcAutKind::FixingO { u, r, s, t }, description: description.into() };
        aut.validate(c)?;
        Ok(aut)
    }

    /// The elliptic involution [-1].
    pub fn negation(c: &WeierstrassCurve) -> EcAutomorphism {
        let f = c.field();
        let [a1, _, a3, _, _] = c.coefficients();
        EcAutomorphism {
            kind: EcAutKind::FixingO { u: f.neg(Fe::ONE), r: Fe::ZERO, s: f.neg(a1), t: f.neg(a3) },
            description: "[-1]".into(),
        }
    }

    pub fn identity() -> EcAutomorphism {
        EcAutomorphism {
            kind: EcAutKind::FixingO { u: Fe::ONE, r: Fe::ZERO, s: Fe::ZERO, t: Fe::ZERO },
            description: "id".into(),
        }
    }

    /// Applies `parts` in order: the first element acts first.
    pub fn composite(parts: Vec<EcAutomorphism>) -> EcAutomorphism {
        let description = parts.iter().map(|p| p.description.as_str()).collect::<Vec<_>>().join(" then ");
        EcAutomorphism { kind: EcAutKind::Composite(parts), description }
    }

    pub fn fixes_o(&self) -> bool {
        match &self.kind {
            EcAutKind::Translation(q) => q.is_infinity(),
            EcAutKind::FixingO { .. } => true,
            EcAutKind::Composite(parts) => parts.iter().all(EcAutomorphism::fixes_o),
        }
    }

    pub fn apply(&self, c: &WeierstrassCurve, p: &Place) -> Place {
        match &self.kind {
            EcAutKind::Translation(q) => c.add(p, q),
            EcAutKind::FixingO { u, r, s, t } => match *p {
                Place::Infinity => Place::Infinity,
                Place::Affine { x, y } => {
                    let f = c.field();
                    let u2 = f.mul(*u, *u);
                    let u3 = f.mul(u2, *u);
                    Place::affine(f.add(f.mul(u2, x), *r), f.sum([f.mul(u3, y), f.product([u2, *s, x]), *t]))
                }
            },
            EcAutKind::Composite(parts) => parts.iter().fold(*p, |acc, a| a.apply(c, &acc)),
        }
    }

    pub fn validate(&self, c: &WeierstrassCurve) -> Result<(), EcError> {
        let mut images = HashSet::new();
        for p in &c.points {
            let img = self.apply(c, p);
            if !c.is_on_curve(&img) || !images.insert(img) {
                return Err(EcError::NotAnAutomorphism(self.description.clone()));
            }
        }
        Ok(())
    }

    pub fn to_perm(&self, c: &WeierstrassCurve, set: &PlaceSet) -> Perm {
        set.places()
            .iter()
            .map(|p| set.index_of(&self.apply(c, p)).expect("automorphisms permute rational points"))
            .collect()
    }
}

/// The group T_H A as permutations of the rational points, with a check
/// that it has the expected order |H| |A|.
pub fn th_a_group(
    c: &WeierstrassCurve,
    h: &[Place],
    a: &[EcAutomorphism],
    set: &PlaceSet,
) -> Result<Vec<Perm>, EcError> {
    let mut gens: Vec<Perm> = h.iter().map(|q| EcAutomorphism::translation(c, *q).map(|t| t.to_perm(c, set))).collect::<Result<_, _>>()?;
    gens.extend(a.iter().map(|s| s.to_perm(c, set)));
    let cap = h.len() * a.len().max(1) * 2 + 1;
    let group = curve::generate_group(set.len(), &gens, cap)
        .ok_or_else(|| EcError::NotASubgroup("T_H A is larger than |H||A|".into()))?;
    Ok(group)
}

/// Whether every sigma in A maps H into H, so that T_H A is a group of
/// order |A| |H|. A and H are first checked for closure.
pub fn check_th_a_subgroup(c: &WeierstrassCurve, h: &[Place], a: &[EcAutomorphism]) -> Result<bool, EcError> {
    if !c.is_subgroup(h) {
        return Err(EcError::NotASubgroup("H is not closed".into()));
    }
    let set = c.point_set();
    let perms: Vec<Perm> = a.iter().map(|s| s.to_perm(c, &set)).collect();
    if a.iter().any(|s| !s.fixes_o()) || !curve::is_closed(&perms) {
        return Err(EcError::NotASubgroup("A is not a group of automorphisms fixing O".into()));
    }
    let hs: HashSet<&Place> = h.iter().collect();
    Ok(a.iter().all(|s| h.iter().all(|q| hs.contains(&s.apply(c, q)))))
}

/// Orbits of a group given by automorphisms, on all rational points.
pub fn orbits(c: &WeierstrassCurve, g: &[EcAutomorphism]) -> Vec<Orbit> {
    let set = c.point_set();
    let perms: Vec<Perm> = g.iter().map(|s| s.to_perm(c, &set)).collect();
    curve::orbits(&perms, &set)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition14 {
    Holds,
    /// Repair orbit `orbit` has a (delta-1)-subset `subset` (positions in the
    /// orbit) whose sum equals the tail sum.
    Violated { orbit: usize, subset: Vec<usize> },
}

/// Tail-sum condition: the sum of the tail P_{r+1}..P_{r+delta-1} of the
/// defining list differs from every (delta-1)-subset sum of every orbit.
pub fn condition_13_14_check(
    c: &WeierstrassCurve,
    defining: &[Place],
    orbit_families: &[Vec<Place>],
    r: usize,
    delta: usize,
    cap: u64,
) -> Result<Condition14, EcError> {
    if delta < 2 || defining.len() != r + delta - 1 {
        return Err(EcError::BadInput(format!(
            "defining list of length {} for r = {r}, delta = {delta}",
            defining.len()
        )));
    }
    let per_orbit: u64 = orbit_families.iter().map(|o| binomial(o.len() as u64, (delta - 1) as u64)).sum();
    if per_orbit > cap {
        return Err(EcError::BudgetExceeded { count: per_orbit, cap });
    }
    let tail = c.sum_points(&defining[r..]);
    for (oi, orbit) in orbit_families.iter().enumerate() {
        if orbit.len() < delta - 1 {
            continue;
        }
        let mut combo: Vec<usize> = (0..delta - 1).collect();
        loop {
            let s = c.sum_points(combo.iter().map(|&i| &orbit[i]));
            if s == tail {
                return Ok(Condition14::Violated { orbit: oi, subset: combo });
            }
            if !crate::linalg::next_combination(&mut combo, orbit.len()) {
                break;
            }
        }
    }
    Ok(Condition14::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve_y2_y_x3(p: u32, s: u32) -> WeierstrassCurve {
        let f = Field::new(p, s, None).unwrap();
        let z = Fe::ZERO;
        WeierstrassCurve::new(&f, [z, z, Fe::ONE, z, z]).unwrap()
    }

    #[test]
    fn maximal_counts() {
        assert_eq!(curve_y2_y_x3(2, 2).num_points(), 9);
        assert_eq!(curve_y2_y_x3(2, 6).num_points(), 81);
        // over GF(16) the same curve is minimal: 16 + 1 - 8
        assert_eq!(curve_y2_y_x3(2, 4).num_points(), 9);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (p, s) in [(2, 3), (3, 2), (5, 2), (7, 1)] {
            let f = Field::new(p, s, None).unwrap();
            let a = [Fe(1), Fe(0), Fe(1), Fe(2 % f.q()), Fe(1)];
            let Ok(c) = WeierstrassCurve::new(&f, a) else { continue };
            let mut brute = vec![Place::Infinity];
            for x in f.elements() {
                for y in f.elements() {
                    if c.is_on_curve(&Place::affine(x, y)) {
                        brute.push(Place::affine(x, y));
                    }
                }
            }
            brute.sort();
            assert_eq!(c.points(), brute);
            let q = f.q() as f64;
            assert!((c.num_points() as f64 - q - 1.0).abs() <= 2.0 * q.sqrt());
        }
    }

    #[test]
    fn group_law_small_curve() {
        let c = curve_y2_y_x3(2, 2);
        let o = Place::Infinity;
        let p00 = Place::affine(Fe(0), Fe(0));
        let p01 = Place::affine(Fe(0), Fe(1));
        assert_eq!(c.add(&p00, &p01), o);
        assert_eq!(c.neg(&p00), p01);
        let pts = c.points();
        for a in &pts {
            assert_eq!(c.add(&o, a), *a);
            assert_eq!(c.scalar_mul(9, a), o);
            for b in &pts {
                assert_eq!(c.add(a, b), c.add(b, a));
                for d in &pts {
                    assert_eq!(c.add(&c.add(a, b), d), c.add(a, &c.add(b, d)));
                }
            }
        }
        assert!(c.checked_add(&Place::affine(Fe(1), Fe(0)), &o).is_err());
    }

    #[test]
    fn group_law_odd_characteristic() {
        let f = Field::new(5, 2, None).unwrap();
        let c = WeierstrassCurve::new(&f, [Fe(0), Fe(0), Fe(0), Fe(1), Fe(3)]).unwrap();
        let pts = c.points();
        let n = c.num_points() as i64;
        for a in pts.iter().take(12) {
            assert_eq!(c.scalar_mul(n, a), Place::Infinity);
            assert_eq!(c.add(a, &c.neg(a)), Place::Infinity);
            for b in pts.iter().take(12) {
                for d in pts.iter().take(12) {
                    assert_eq!(c.add(&c.add(a, b), d), c.add(a, &c.add(b, d)));
                }
            }
        }
    }

    #[test]
    fn structure_gf64() {
        let c = curve_y2_y_x3(2, 6);
        let st = c.group_structure();
        assert_eq!((st.n1, st.n2), (9, 9));
        assert!(st.verify(&c));
        let h9 = c.subgroup_of_order(&st, 9).unwrap();
        assert!(h9.iter().all(|p| c.scalar_mul(3, p) == Place::Infinity));
        let h3 = c.subgroup_of_order(&st, 3).unwrap();
        assert!(h3.contains(&c.scalar_mul(3, &st.gen2)));
        assert_eq!(c.subgroup_of_order(&st, 1).unwrap(), vec![Place::Infinity]);
        assert_eq!(c.subgroup_of_order(&st, 27).unwrap().len(), 27);
        assert!(c.subgroup_of_order(&st, 5).is_err());
    }

    #[test]
    fn prime_order_group_is_cyclic() {
        let f = Field::prime(7).unwrap();
        let c = WeierstrassCurve::search_with_order(&f, 5, 1000).unwrap();
        let st = c.group_structure();
        assert_eq!((st.n1, st.n2), (1, 5));
        assert!(st.verify(&c));
    }

    fn sigma(c: &WeierstrassCurve) -> EcAutomorphism {
        let f = c.field();
        let w = f.exp((f.q() as i64 - 1) / 3);
        EcAutomorphism::fixing_o(c, w, Fe::ZERO, Fe::ZERO, Fe::ZERO, "x -> w^2 x").unwrap()
    }

    #[test]
    fn th_a_checks() {
        let c = curve_y2_y_x3(2, 6);
        let st = c.group_structure();
        let h = c.subgroup_of_order(&st, 3).unwrap();
        let neg = vec![EcAutomorphism::identity(), EcAutomorphism::negation(&c)];
        assert!(check_th_a_subgroup(&c, &h, &neg).unwrap());

        let s = sigma(&c);
        let s2 = EcAutomorphism::composite(vec![s.clone(), s.clone()]);
        let a = vec![EcAutomorphism::identity(), s.clone(), s2];
        let q = Place::affine(Fe(0), Fe(1));
        assert_eq!(s.apply(&c, &q), q);
        let hq = vec![Place::Infinity, q, c.neg(&q)];
        assert!(check_th_a_subgroup(&c, &hq, &a).unwrap());
        // some other order-3 subgroup is not sigma-stable
        let e3: Vec<Place> = c.subgroup_of_order(&st, 9).unwrap();
        let other = e3.iter().find(|p| !p.is_infinity() && p.x() != Some(Fe(0))).unwrap();
        let bad = vec![Place::Infinity, *other, c.neg(other)];
        assert!(!check_th_a_subgroup(&c, &bad, &a).unwrap());
        assert!(check_th_a_subgroup(&c, &[Place::Infinity, q], &a).is_err());
    }

    #[test]
    fn negation_commutes_with_fixing_o() {
        let c = curve_y2_y_x3(2, 6);
        let s = sigma(&c);
        let n = EcAutomorphism::negation(&c);
        for p in c.points() {
            assert_eq!(s.apply(&c, &n.apply(&c, &p)), n.apply(&c, &s.apply(&c, &p)));
        }
    }

    #[test]
    fn symbolic_translation_matches_group_law() {
        let c = curve_y2_y_x3(2, 6);
        let q = Place::affine(Fe(0), Fe(1));
        let mut checked = 0;
        for p in c.points() {
            if let Some(img) = c.tau_q_rational(&p) {
                assert_eq!(img, c.add(&p, &q));
                checked += 1;
            }
        }
        assert!(checked > 70);
    }

    #[test]
    fn orbit_counts_h3() {
        let c = curve_y2_y_x3(2, 6);
        let st = c.group_structure();
        let h = c.subgroup_of_order(&st, 3).unwrap();
        let set = c.point_set();
        let group = th_a_group(&c, &h, &[EcAutomorphism::negation(&c)], &set).unwrap();
        assert_eq!(group.len(), 6);
        let orbs = curve::orbits(&group, &set);
        let full = orbs.iter().filter(|o| o.len() == 6).count();
        assert_eq!(full, 13);
        let short: Vec<&Orbit> = orbs.iter().filter(|o| o.len() != 6).collect();
        assert_eq!(short.len(), 1);
        assert_eq!(short[0].places, h);
        assert_eq!(orbs.iter().map(Orbit::len).sum::<usize>(), 81);
        assert!(orbs.iter().all(|o| 6 % o.len() == 0));
    }

    #[test]
    fn divisor_sums() {
        let c = curve_y2_y_x3(2, 6);
        let pts = c.points();
        let p = pts[5];
        assert!(c.divisor_class_sum(&[p, c.neg(&p)], &[Place::Infinity, Place::Infinity]).unwrap());
        assert!(c.divisor_class_sum(&pts[1..4], &pts[1..4]).unwrap());
        assert!(c.divisor_class_sum(&pts[1..4], &pts[1..3]).is_err());
    }

    #[test]
    fn condition_14_trivial_for_delta_two() {
        let c = curve_y2_y_x3(2, 2);
        let pts = c.points();
        let orbit = vec![pts[1], pts[2]];
        let defining = vec![pts[3], pts[4]];
        assert_eq!(condition_13_14_check(&c, &defining, &[orbit], 1, 2, 100).unwrap(), Condition14::Holds);
    }
}
