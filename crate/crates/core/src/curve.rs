//! Places, permutation groups acting on them, and the common curve model
//! consumed by the function-space machinery.

use std::collections::{BTreeSet, HashMap};

use crate::ecurve::WeierstrassCurve;
use crate::gf::{Fe, Field};
use crate::scurve::SuperellipticCurve;

/// A rational place: the unique place at infinity or an affine point.
///
/// The derived order (infinity first, then affine points by x then y) is
/// the canonical order used everywhere.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Place {
    Infinity,
    Affine { x: Fe, y: Fe },
}

impl Place {
    pub fn affine(x: Fe, y: Fe) -> Place {
        Place::Affine { x, y }
    }

    pub fn x(&self) -> Option<Fe> {
        match *self {
            Place::Affine { x, .. } => Some(x),
            Place::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<Fe> {
        match *self {
            Place::Affine { y, .. } => Some(y),
            Place::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }
}

/// Sorted list of places with reverse lookup.
#[derive(Clone, Debug)]
pub struct PlaceSet {
    places: Vec<Place>,
    index: HashMap<Place, usize>,
}

impl PlaceSet {
    pub fn new(mut places: Vec<Place>) -> PlaceSet {
        places.sort();
        places.dedup();
        let index = places.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        PlaceSet { places, index }
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn index_of(&self, p: &Place) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn get(&self, i: usize) -> Place {
        self.places[i]
    }
}

/// A permutation of place indices.
pub type Perm = Vec<usize>;

pub fn identity_perm(n: usize) -> Perm {
    (0..n).collect()
}

/// `a` after `b`.
pub fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

/// Closure of a set of generators under composition, or `None` when the
/// group would exceed `cap` elements. The identity comes first.
pub fn generate_group(n: usize, generators: &[Perm], cap: usize) -> Option<Vec<Perm>> {
    let id = identity_perm(n);
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    seen.insert(id.clone());
    let mut elems = vec![id];
    let mut frontier = 0;
    while frontier < elems.len() {
        let cur = elems[frontier].clone();
        frontier += 1;
        for g in generators {
            let next = compose(g, &cur);
            if seen.insert(next.clone()) {
                elems.push(next);
                if elems.len() > cap {
                    return None;
                }
            }
        }
    }
    Some(elems)
}

/// Whether a list of permutations is closed under composition.
pub fn is_closed(group: &[Perm]) -> bool {
    let set: BTreeSet<&Perm> = group.iter().collect();
    group.iter().all(|a| group.iter().all(|b| set.contains(&compose(a, b))))
}

/// A G-orbit of places with its ramification index |G| / |orbit|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub places: Vec<Place>,
    pub ramification: usize,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.ramification == 1
    }

    pub fn contains(&self, p: &Place) -> bool {
        self.places.contains(p)
    }
}

/// Orbits of a permutation group on a place set, each sorted canonically,
/// listed in order of their smallest place.
pub fn orbits(group: &[Perm], set: &PlaceSet) -> Vec<Orbit> {
    let n = set.len();
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if done[start] {
            continue;
        }
        let mut members: Vec<usize> = group.iter().map(|g| g[start]).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            done[m] = true;
        }
        out.push(Orbit {
            ramification: group.len() / members.len(),
            places: members.into_iter().map(|i| set.get(i)).collect(),
        });
    }
    out
}

/// The two curve shapes the toolkit understands, viewed uniformly as plane
/// models F(x, y) = 0 with a single place at infinity where x and y have
/// pole orders `weights().0` and `weights().1`.
#[derive(Clone, Debug)]
pub enum CurveModel {
    Weierstrass(WeierstrassCurve),
    Superelliptic(SuperellipticCurve),
}

impl CurveModel {
    pub fn field(&self) -> &Field {
        match self {
            CurveModel::Weierstrass(c) => c.field(),
            CurveModel::Superelliptic(c) => c.field(),
        }
    }

    pub fn genus(&self) -> u64 {
        match self {
            CurveModel::Weierstrass(_) => 1,
            CurveModel::Superelliptic(c) => c.genus(),
        }
    }

    /// Pole orders of x and y at infinity.
    pub fn weights(&self) -> (u64, u64) {
        match self {
            CurveModel::Weierstrass(_) => (2, 3),
            CurveModel::Superelliptic(c) => (c.m() as u64, c.degree() as u64),
        }
    }

    /// Degree of the equation in y; monomials are reduced below it.
    pub fn y_degree(&self) -> usize {
        match self {
            CurveModel::Weierstrass(_) => 2,
            CurveModel::Superelliptic(c) => c.m() as usize,
        }
    }

    /// Coefficients of F(x, y) as (i, j, c) for c x^i y^j, with F = 0 on the curve.
    pub fn equation(&self) -> Vec<(usize, usize, Fe)> {
        let f = self.field();
        match self {
            CurveModel::Weierstrass(c) => {
                let [a1, a2, a3, a4, a6] = c.coefficients();
                vec![
                    (0, 2, Fe::ONE),
                    (1, 1, a1),
                    (0, 1, a3),
                    (3, 0, f.neg(Fe::ONE)),
                    (2, 0, f.neg(a2)),
                    (1, 0, f.neg(a4)),
                    (0, 0, f.neg(a6)),
                ]
                .into_iter()
                .filter(|t| !t.2.is_zero())
                .collect()
            }
            CurveModel::Superelliptic(c) => {
                let mut terms = vec![(0, c.m() as usize, c.gamma())];
                for (i, &a) in c.f_coeffs().iter().enumerate() {
                    if !a.is_zero() {
                        terms.push((i, 0, f.neg(a)));
                    }
                }
                terms
            }
        }
    }

    pub fn places(&self) -> Vec<Place> {
        match self {
            CurveModel::Weierstrass(c) => c.points(),
            CurveModel::Superelliptic(c) => c.places(),
        }
    }

    pub fn contains(&self, p: &Place) -> bool {
        match self {
            CurveModel::Weierstrass(c) => c.is_on_curve(p),
            CurveModel::Superelliptic(c) => c.is_on_curve(p),
        }
    }
}

impl From<WeierstrassCurve> for CurveModel {
    fn from(c: WeierstrassCurve) -> Self {
        CurveModel::Weierstrass(c)
    }
}

impl From<SuperellipticCurve> for CurveModel {
    fn from(c: SuperellipticCurve) -> Self {
        CurveModel::Superelliptic(c)
    }
}
