//! Riemann-Roch spaces on curves with a single place at infinity.
//!
//! Functions are stored as g(x, y) / h(x) with g reduced modulo the curve
//! equation (y-degree below the equation's y-degree). On such a model the
//! monomials x^i y^j have pairwise distinct pole orders i*W1 + j*W2 at
//! infinity, so the pole order of g is read off its top monomial.
//!
//! A space L(D) is computed by fixing a denominator h whose zeros cover the
//! finite poles allowed by D, bounding the monomials of g by the pole allowed
//! at infinity, and imposing vanishing conditions read off local power
//! series at the places above the roots of h.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use thiserror::Error;

use crate::curve::{CurveModel, Place};
use crate::gf::{Fe, Field};
use crate::linalg::Matrix;

/// Longest power series the expansion routines will produce.
pub const MAX_EXPANSION_ORDER: usize = 512;

/// Largest monomial space a single Riemann-Roch computation may use.
pub const MONOMIAL_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FsError {
    #[error("place {0:?} is off the curve or lies over a fiber with non-rational places")]
    UnsupportedPlace(Place),
    #[error("expansion to order {0} exceeds the supported maximum")]
    OrderTooLarge(usize),
    #[error("{0} monomials exceed the cap")]
    CapExceeded(usize),
    #[error("computed dimension {got}, Riemann-Roch predicts {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ladder: {0}")]
    LadderGapMismatch(String),
    #[error("no nonconstant function is constant on the given orbits")]
    NoInvariantFound,
    #[error("only {outside} places lie outside a support of degree {degree}")]
    TooFewPlaces { outside: usize, degree: i64 },
    #[error("the zero polynomial cannot be a denominator")]
    ZeroDenominator,
}

/// A formal sum of rational places with integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    /// The sum of the listed places, repeats adding up.
    pub fn from_places(places: &[Place]) -> Divisor {
        let mut d = Divisor::zero();
        for p in places {
            d.add(*p, 1);
        }
        d
    }

    pub fn add(&mut self, p: Place, n: i64) {
        let e = self.terms.entry(p).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn multiplicity(&self, p: &Place) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n >= 0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &n)| (p, n))
    }
}

/// g(x, y) / h(x) on a fixed curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFunction {
    num: BTreeMap<(usize, usize), Fe>,
    den: Vec<Fe>,
}

impl CurveFunction {
    /// Builds g / h from monomial terms of g and the coefficients of h
    /// (lowest degree first). Zero terms are dropped.
    pub fn new(num: impl IntoIterator<Item = ((usize, usize), Fe)>, mut den: Vec<Fe>) -> Result<CurveFunction, FsError> {
        while den.last().is_some_and(|c| c.is_zero()) {
            den.pop();
        }
        if den.is_empty() {
            return Err(FsError::ZeroDenominator);
        }
        let num = num.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(CurveFunction { num, den })
    }

    pub fn constant(c: Fe) -> CurveFunction {
        CurveFunction::monomial(0, 0, c)
    }

    /// c * x^i * y^j.
    pub fn monomial(i: usize, j: usize, c: Fe) -> CurveFunction {
        let mut num = BTreeMap::new();
        if !c.is_zero() {
            num.insert((i, j), c);
        }
        CurveFunction { num, den: vec![Fe::ONE] }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn numerator(&self) -> impl Iterator<Item = ((usize, usize), Fe)> + '_ {
        self.num.iter().map(|(&k, &c)| (k, c))
    }

    pub fn denominator(&self) -> &[Fe] {
        &self.den
    }
}

/// A truncated Laurent series in a local parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub valuation: i64,
    /// Coefficients of t^valuation, t^(valuation+1), ...; the first is nonzero.
    pub coeffs: Vec<Fe>,
}

/// A basis of L(D), all members sharing one denominator. Members are sorted
/// by pole order at infinity and are in reduced echelon form with respect
/// to their top monomials.
#[derive(Clone, Debug)]
pub struct FunctionBasis {
    field: Field,
    divisor: Divisor,
    denominator: Vec<Fe>,
    monomials: Vec<(usize, usize)>,
    coords: Vec<Vec<Fe>>,
}

impl FunctionBasis {
    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn denominator(&self) -> &[Fe] {
        &self.denominator
    }

    pub fn monomials(&self) -> &[(usize, usize)] {
        &self.monomials
    }

    /// Basis members as numerator coordinates over [`Self::monomials`].
    pub fn coordinates(&self) -> &[Vec<Fe>] {
        &self.coords
    }

    pub fn function(&self, i: usize) -> CurveFunction {
        self.from_coords(&self.coords[i])
    }

    pub fn functions(&self) -> Vec<CurveFunction> {
        self.coords.iter().map(|v| self.from_coords(v)).collect()
    }

    /// The function sum_i c_i * basis_i.
    pub fn combine(&self, c: &[Fe]) -> CurveFunction {
        let f = &self.field;
        let mut v = vec![Fe::ZERO; self.monomials.len()];
        for (&ci, b) in c.iter().zip(&self.coords) {
            for (slot, &x) in v.iter_mut().zip(b) {
                *slot = f.add(*slot, f.mul(ci, x));
            }
        }
        self.from_coords(&v)
    }

    fn from_coords(&self, v: &[Fe]) -> CurveFunction {
        CurveFunction {
            num: self.monomials.iter().copied().zip(v.iter().copied()).filter(|(_, c)| !c.is_zero()).collect(),
            den: self.denominator.clone(),
        }
    }

    /// Values of every basis member at every listed place; `None` marks a pole.
    pub fn evaluate(&self, fs: &FunctionSpace, places: &[Place]) -> Result<Vec<Vec<Option<Fe>>>, FsError> {
        self.functions().iter().map(|g| places.iter().map(|p| fs.eval(g, p)).collect()).collect()
    }
}

/// Functions w_0 = 1, w_1, ... with w_i in L(D_I) \ L(D_(I-1)) for the
/// prefix divisors D_I of a defining list.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub functions: Vec<CurveFunction>,
    /// 1-based prefix length at which each function first appears.
    pub increments: Vec<usize>,
    /// dim L(D_I) for every prefix visited.
    pub dims: Vec<usize>,
}

/// Local coordinates at a place: x and y as power series ux(t), uy(t),
/// shifted by t^-W1 and t^-W2 at infinity.
#[derive(Clone, Debug)]
struct Chart {
    ux: Vec<Fe>,
    uy: Vec<Fe>,
}

/// Function-field computations on one curve.
pub struct FunctionSpace {
    curve: CurveModel,
    field: Field,
    eq: Vec<(usize, usize, Fe)>,
    w1: usize,
    w2: usize,
    ydeg: usize,
    places: Vec<Place>,
    fibers: BTreeMap<Fe, Vec<Place>>,
    /// a, b with a*W1 + b*W2 = 1, used for the chart at infinity.
    bezout: (i64, i64),
    charts: Mutex<HashMap<Place, Chart>>,
}

impl FunctionSpace {
    pub fn new(curve: &CurveModel) -> FunctionSpace {
        let (w1, w2) = curve.weights();
        let places = curve.places();
        let mut fibers: BTreeMap<Fe, Vec<Place>> = BTreeMap::new();
        for p in &places {
            if let Some(x) = p.x() {
                fibers.entry(x).or_default().push(*p);
            }
        }
        FunctionSpace {
            field: curve.field().clone(),
            eq: curve.equation(),
            w1: w1 as usize,
            w2: w2 as usize,
            ydeg: curve.y_degree(),
            bezout: bezout(w1 as i64, w2 as i64),
            curve: curve.clone(),
            places,
            fibers,
            charts: Mutex::new(HashMap::new()),
        }
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// All rational places in canonical order.
    pub fn places(&self) -> &[Place] {
        &self.places
    }

    fn weight(&self, (i, j): (usize, usize)) -> usize {
        i * self.w1 + j * self.w2
    }

    /// Pole order at infinity of a nonzero function (negative for a zero).
    pub fn pole_order_at_infinity(&self, g: &CurveFunction) -> Option<i64> {
        let top = g.num.keys().map(|&m| self.weight(m)).max()?;
        Some(top as i64 - (self.w1 * (g.den.len() - 1)) as i64)
    }

    /// The chart at `p`, with unit series of at least `len` terms.
    fn chart(&self, p: &Place, len: usize) -> Result<Chart, FsError> {
        if len > MAX_EXPANSION_ORDER {
            return Err(FsError::OrderTooLarge(len));
        }
        if let Some(c) = self.charts.lock().unwrap().get(p) {
            if c.ux.len() >= len {
                return Ok(c.clone());
            }
        }
        let c = match p {
            Place::Infinity => self.infinity_chart(len)?,
            Place::Affine { x, y } => self.affine_chart(*p, *x, *y, len)?,
        };
        self.charts.lock().unwrap().insert(*p, c.clone());
        Ok(c)
    }

    fn affine_chart(&self, p: Place, a: Fe, b: Fe, len: usize) -> Result<Chart, FsError> {
        let f = &self.field;
        if !self.curve.contains(&p) {
            return Err(FsError::UnsupportedPlace(p));
        }
        let mut fx = Fe::ZERO;
        let mut fy = Fe::ZERO;
        for &(i, j, c) in &self.eq {
            if i > 0 {
                let t = f.mul(f.int(i as i64), f.mul(f.pow(a, i as u64 - 1), f.pow(b, j as u64)));
                fx = f.add(fx, f.mul(c, t));
            }
            if j > 0 {
                let t = f.mul(f.int(j as i64), f.mul(f.pow(a, i as u64), f.pow(b, j as u64 - 1)));
                fy = f.add(fy, f.mul(c, t));
            }
        }
        // Parametrize by whichever coordinate is a local parameter, and lift
        // the other one coefficient by coefficient.
        let (by_x, deriv) = if !fy.is_zero() {
            (true, fy)
        } else if !fx.is_zero() {
            (false, fx)
        } else {
            return Err(FsError::UnsupportedPlace(p));
        };
        let mut free = vec![Fe::ZERO; len.max(2)];
        let mut lifted = vec![Fe::ZERO; len.max(2)];
        free[0] = if by_x { a } else { b };
        free[1] = Fe::ONE;
        lifted[0] = if by_x { b } else { a };
        let dinv = f.inv(deriv);
        for k in 1..lifted.len() {
            let val = if by_x {
                self.eval_equation(&free, &lifted, k + 1)
            } else {
                self.eval_equation(&lifted, &free, k + 1)
            };
            lifted[k] = f.neg(f.mul(val[k], dinv));
        }
        let (xs, ys) = if by_x { (free, lifted) } else { (lifted, free) };
        Ok(Chart { ux: xs, uy: ys })
    }

    /// F(x(t), y(t)) truncated to `len` terms, for power series x and y.
    fn eval_equation(&self, xs: &[Fe], ys: &[Fe], len: usize) -> Vec<Fe> {
        let f = &self.field;
        let maxi = self.eq.iter().map(|t| t.0).max().unwrap_or(0);
        let maxj = self.eq.iter().map(|t| t.1).max().unwrap_or(0);
        let xp = powers(f, xs, maxi, len);
        let yp = powers(f, ys, maxj, len);
        let mut out = vec![Fe::ZERO; len];
        for &(i, j, c) in &self.eq {
            let t = ser_mul(f, &xp[i], &yp[j], len);
            for (o, v) in out.iter_mut().zip(t) {
                *o = f.add(*o, f.mul(c, v));
            }
        }
        out
    }

    /// At infinity take x = t^-W1 * S^-b and y = t^-W2 * S^a with
    /// a*W1 + b*W2 = 1. Clearing t^-(W1*W2) from the equation leaves
    /// G(t, S) = 0 with a simple root S(0) at t = 0, which is lifted.
    fn infinity_chart(&self, len: usize) -> Result<Chart, FsError> {
        let f = &self.field;
        let (a, b) = self.bezout;
        let top = self.w1 * self.w2;
        let len = len.max(1);
        let mut cy = Fe::ZERO;
        let mut cx = Fe::ZERO;
        for &(i, j, c) in &self.eq {
            if (i, j) == (0, self.w1) {
                cy = c;
            }
            if (i, j) == (self.w2, 0) {
                cx = c;
            }
        }
        if cy.is_zero() || cx.is_zero() {
            return Err(FsError::UnsupportedPlace(Place::Infinity));
        }
        let terms: Vec<(usize, i64, Fe)> = self
            .eq
            .iter()
            .map(|&(i, j, c)| (top - self.weight((i, j)), a * j as i64 - b * i as i64, c))
            .collect();
        let s0 = f.neg(f.div(cx, cy));
        let mut deriv = Fe::ZERO;
        for &(shift, e, c) in &terms {
            if shift == 0 {
                let d = f.mul(f.int(e), f.pow_signed(s0, e - 1).expect("S(0) is nonzero"));
                deriv = f.add(deriv, f.mul(c, d));
            }
        }
        let dinv = f.inv(deriv);
        let mut s = vec![Fe::ZERO; len];
        s[0] = s0;
        for k in 1..len {
            let mut val = Fe::ZERO;
            for &(shift, e, c) in &terms {
                if shift <= k {
                    let pw = ser_pow_signed(f, &s[..=k], e, k + 1);
                    val = f.add(val, f.mul(c, pw[k - shift]));
                }
            }
            s[k] = f.neg(f.mul(val, dinv));
        }
        Ok(Chart {
            ux: ser_pow_signed(f, &s, -b, len),
            uy: ser_pow_signed(f, &s, a, len),
        })
    }

    /// A polynomial in x and y at `p` as t^v * (series of `len` terms).
    fn poly_series(&self, terms: &[((usize, usize), Fe)], p: &Place, len: usize) -> Result<(i64, Vec<Fe>), FsError> {
        let f = &self.field;
        let maxi = terms.iter().map(|t| t.0 .0).max().unwrap_or(0);
        let maxj = terms.iter().map(|t| t.0 .1).max().unwrap_or(0);
        let base = terms.iter().map(|&((i, j), _)| self.shift(p, i, j)).min().unwrap_or(0);
        let spread = terms.iter().map(|&((i, j), _)| (self.shift(p, i, j) - base) as usize).max().unwrap_or(0);
        let c = self.chart(p, len + spread)?;
        let xp = powers(f, &c.ux, maxi, len + spread);
        let yp = powers(f, &c.uy, maxj, len + spread);
        let mut out = vec![Fe::ZERO; len];
        for &((i, j), coef) in terms {
            let off = (self.shift(p, i, j) - base) as usize;
            if off >= len {
                continue;
            }
            let t = ser_mul(f, &xp[i], &yp[j], len - off);
            for (k, v) in t.into_iter().enumerate() {
                out[k + off] = f.add(out[k + off], f.mul(coef, v));
            }
        }
        Ok((base, out))
    }

    /// Valuation of x^i y^j coming from the chart's leading powers of t.
    fn shift(&self, p: &Place, i: usize, j: usize) -> i64 {
        match p {
            Place::Infinity => -(self.weight((i, j)) as i64),
            Place::Affine { .. } => 0,
        }
    }

    /// Valuation and leading terms of a nonzero polynomial at `p`.
    fn poly_expansion(&self, terms: &[((usize, usize), Fe)], p: &Place, extra: usize) -> Result<Laurent, FsError> {
        // A nonzero polynomial has no zero of order above its pole order at
        // infinity, which bounds how far to look for the leading term.
        let bound = terms.iter().map(|&(m, _)| self.weight(m)).max().unwrap_or(0) + 1;
        let (base, s) = self.poly_series(terms, p, bound + extra)?;
        let lead = s.iter().position(|c| !c.is_zero()).expect("a reduced nonzero polynomial has finite valuation");
        let coeffs = s[lead..].iter().copied().take(extra.max(1)).collect();
        Ok(Laurent { valuation: base + lead as i64, coeffs })
    }

    /// Laurent expansion of `g` at `p` with `terms` coefficients, or `None`
    /// for the zero function.
    pub fn local_expansion(&self, g: &CurveFunction, p: &Place, terms: usize) -> Result<Option<Laurent>, FsError> {
        if g.is_zero() {
            return Ok(None);
        }
        let f = &self.field;
        let terms = terms.max(1);
        let num: Vec<_> = g.numerator().collect();
        let den: Vec<_> = g.den.iter().enumerate().map(|(i, &c)| ((i, 0), c)).filter(|t| !t.1.is_zero()).collect();
        let n = self.poly_expansion(&num, p, terms)?;
        let d = self.poly_expansion(&den, p, terms)?;
        let mut dn = d.coeffs.clone();
        dn.resize(terms, Fe::ZERO);
        let mut nn = n.coeffs.clone();
        nn.resize(terms, Fe::ZERO);
        let inv = ser_inv(f, &dn, terms);
        Ok(Some(Laurent { valuation: n.valuation - d.valuation, coeffs: ser_mul(f, &nn, &inv, terms) }))
    }

    /// Order of `g` at `p`; `None` for the zero function.
    pub fn valuation(&self, g: &CurveFunction, p: &Place) -> Result<Option<i64>, FsError> {
        Ok(self.local_expansion(g, p, 1)?.map(|l| l.valuation))
    }

    /// Value of `g` at `p`, or `None` at a pole.
    pub fn eval(&self, g: &CurveFunction, p: &Place) -> Result<Option<Fe>, FsError> {
        let f = &self.field;
        if g.is_zero() {
            return Ok(Some(Fe::ZERO));
        }
        if let Place::Affine { x, y } = *p {
            let h = f.eval_poly(&g.den, x);
            if !h.is_zero() {
                let v = f.sum(g.num.iter().map(|(&(i, j), &c)| f.mul(c, f.mul(f.pow(x, i as u64), f.pow(y, j as u64)))));
                return Ok(Some(f.div(v, h)));
            }
        }
        let l = self.local_expansion(g, p, 1)?.expect("nonzero");
        Ok(match l.valuation {
            v if v < 0 => None,
            0 => Some(l.coeffs[0]),
            _ => Some(Fe::ZERO),
        })
    }

    /// Affine places over `x = a` with their ramification over the x-line,
    /// provided the whole fiber is rational.
    fn fiber(&self, a: Fe) -> Result<Vec<(Place, usize)>, FsError> {
        let places = self.fibers.get(&a).cloned().unwrap_or_default();
        let mut out = Vec::new();
        for p in places {
            let c = self.chart(&p, self.ydeg + 1)?;
            let e = c.ux.iter().skip(1).position(|v| !v.is_zero()).map_or(usize::MAX, |k| k + 1);
            out.push((p, e));
        }
        let total: usize = out.iter().map(|t| t.1).sum();
        if total != self.ydeg {
            let p = out.first().map_or(Place::Affine { x: a, y: Fe::ZERO }, |t| t.0);
            return Err(FsError::UnsupportedPlace(p));
        }
        Ok(out)
    }

    /// The smallest denominator h = prod (x - a)^k_a admitting the poles of `d`.
    fn denominator_for(&self, d: &Divisor) -> Result<BTreeMap<Fe, usize>, FsError> {
        let mut den = BTreeMap::new();
        for (p, n) in d.terms() {
            let Place::Affine { x, .. } = *p else { continue };
            if n <= 0 {
                continue;
            }
            if !self.curve.contains(p) {
                return Err(FsError::UnsupportedPlace(*p));
            }
            for (q, e) in self.fiber(x)? {
                let k = d.multiplicity(&q).max(0) as usize;
                let need = k.div_ceil(e);
                let slot = den.entry(x).or_insert(0);
                *slot = (*slot).max(need);
            }
        }
        Ok(den)
    }

    fn monomials_up_to(&self, bound: i64) -> Result<Vec<(usize, usize)>, FsError> {
        let mut out = Vec::new();
        if bound < 0 {
            return Ok(out);
        }
        let bound = bound as usize;
        for j in 0..self.ydeg {
            let mut i = 0;
            while self.weight((i, j)) <= bound {
                out.push((i, j));
                if out.len() > MONOMIAL_CAP {
                    return Err(FsError::CapExceeded(out.len()));
                }
                i += 1;
            }
        }
        out.sort_by_key(|&m| self.weight(m));
        Ok(out)
    }

    /// Numerator coordinates (over `monos`) of a basis of L(d), with the
    /// denominator fixed to `den`. `den` must cover the poles of `d`.
    fn rr_coordinates(
        &self,
        d: &Divisor,
        den: &BTreeMap<Fe, usize>,
        monos: &[(usize, usize)],
    ) -> Result<Vec<Vec<Fe>>, FsError> {
        let f = &self.field;
        let kdeg: usize = den.values().sum();
        let bound = d.multiplicity(&Place::Infinity) + (kdeg * self.w1) as i64;
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        for (c, &m) in monos.iter().enumerate() {
            if self.weight(m) as i64 > bound {
                rows.push(unit(monos.len(), c));
            }
        }
        // Required order of g at each affine place.
        let mut need: BTreeMap<Place, i64> = BTreeMap::new();
        for (&a, &k) in den {
            if k == 0 {
                continue;
            }
            for (q, e) in self.fiber(a)? {
                need.insert(q, (k * e) as i64 - d.multiplicity(&q));
            }
        }
        for (p, n) in d.terms() {
            if !p.is_infinity() && n < 0 && !need.contains_key(p) {
                need.insert(*p, -n);
            }
        }
        for (q, &order) in &need {
            if order <= 0 {
                continue;
            }
            let order = order as usize;
            let series: Vec<Vec<Fe>> =
                monos.iter().map(|&m| self.poly_series(&[(m, Fe::ONE)], q, order).map(|s| s.1)).collect::<Result<_, _>>()?;
            for k in 0..order {
                rows.push(series.iter().map(|s| s[k]).collect());
            }
        }
        let kernel = if rows.is_empty() {
            (0..monos.len()).map(|c| unit(monos.len(), c)).collect()
        } else {
            Matrix::from_rows(f, &rows).expect("rectangular").kernel()
        };
        Ok(echelon_by_top(f, kernel, monos.len()))
    }

    /// A basis of L(d).
    pub fn rr_basis(&self, d: &Divisor) -> Result<FunctionBasis, FsError> {
        let den = self.denominator_for(d)?;
        self.rr_basis_with_denominator(d, &den)
    }

    /// A basis of L(d) over the denominator prod (x - a)^k_a, which must
    /// cover the poles of `d`. Sharing a denominator lets nested spaces
    /// share coordinates.
    pub fn rr_basis_with_denominator(&self, d: &Divisor, den: &BTreeMap<Fe, usize>) -> Result<FunctionBasis, FsError> {
        let kdeg: usize = den.values().sum();
        let bound = d.multiplicity(&Place::Infinity) + (kdeg * self.w1) as i64;
        let monos = self.monomials_up_to(bound)?;
        let coords = self.rr_coordinates(d, den, &monos)?;
        let g = self.curve.genus() as i64;
        let deg = d.degree();
        if deg >= 2 * g - 1 {
            let expected = (deg + 1 - g).max(0) as usize;
            if coords.len() != expected {
                return Err(FsError::DimensionMismatch { expected, got: coords.len() });
            }
        }
        Ok(FunctionBasis {
            field: self.field.clone(),
            divisor: d.clone(),
            denominator: expand_denominator(&self.field, den),
            monomials: monos,
            coords,
        })
    }

    /// Builds w_0 = 1, ..., w_(r-1) from the prefixes of `defining`: w_i is
    /// taken from the i-th prefix divisor at which the dimension of L(D_I)
    /// grows, as the first basis member outside the span found so far.
    pub fn ladder(&self, defining: &[Place], r: usize) -> Result<Ladder, FsError> {
        if defining.is_empty() || r == 0 {
            return Err(FsError::LadderGapMismatch("empty defining list or r = 0".into()));
        }
        let f = &self.field;
        let full = Divisor::from_places(defining);
        let den = self.denominator_for(&full)?;
        let kdeg: usize = den.values().sum();
        let monos = self.monomials_up_to(full.multiplicity(&Place::Infinity) + (kdeg * self.w1) as i64)?;
        let h = expand_denominator(f, &den);
        let one: Vec<Fe> = monos.iter().map(|&(i, j)| if j == 0 { h.get(i).copied().unwrap_or(Fe::ZERO) } else { Fe::ZERO }).collect();
        let mut chosen = vec![one];
        let mut increments = vec![1];
        let mut dims = Vec::new();
        let mut prefix = Divisor::zero();
        for (idx, p) in defining.iter().enumerate() {
            prefix.add(*p, 1);
            let basis = self.rr_coordinates(&prefix, &den, &monos)?;
            let prev = dims.last().copied().unwrap_or(0);
            dims.push(basis.len());
            if idx == 0 {
                if basis.len() != 1 {
                    return Err(FsError::LadderGapMismatch(format!("L(D_1) has dimension {}", basis.len())));
                }
                continue;
            }
            if basis.len() == prev {
                continue;
            }
            if basis.len() != prev + 1 {
                return Err(FsError::LadderGapMismatch(format!("dimension jumps from {prev} to {}", basis.len())));
            }
            let fresh = basis
                .into_iter()
                .find(|v| {
                    let mut rows = chosen.clone();
                    rows.push(v.clone());
                    Matrix::from_rows(f, &rows).expect("rectangular").rank() == rows.len()
                })
                .ok_or_else(|| FsError::LadderGapMismatch("no new function at a dimension step".into()))?;
            chosen.push(fresh);
            increments.push(idx + 1);
            if chosen.len() == r {
                break;
            }
        }
        if chosen.len() < r {
            return Err(FsError::LadderGapMismatch(format!(
                "{} functions from a defining list of length {}, need {r}",
                chosen.len(),
                defining.len()
            )));
        }
        let functions = chosen
            .iter()
            .map(|v| CurveFunction {
                num: monos.iter().copied().zip(v.iter().copied()).filter(|(_, c)| !c.is_zero()).collect(),
                den: h.clone(),
            })
            .collect();
        Ok(Ladder { functions, increments, dims })
    }

    /// A nonconstant z in L(d) that takes one value on each listed orbit.
    ///
    /// Invariance is imposed on the places outside the support of `d`. When
    /// those outnumber deg d, agreeing values there force equality as
    /// functions, so the result is genuinely fixed by the group.
    pub fn invariant_function(&self, d: &Divisor, orbits: &[Vec<Place>]) -> Result<CurveFunction, FsError> {
        let f = &self.field;
        let outside: Vec<Place> = self.places.iter().copied().filter(|p| d.multiplicity(p) == 0).collect();
        if outside.len() as i64 <= d.degree() {
            return Err(FsError::TooFewPlaces { outside: outside.len(), degree: d.degree() });
        }
        let basis = self.rr_basis(d)?;
        let mut value: HashMap<Place, Vec<Fe>> = HashMap::new();
        let functions = basis.functions();
        for p in &outside {
            let v = functions
                .iter()
                .map(|g| self.eval(g, p).map(|o| o.expect("no poles outside the support")))
                .collect::<Result<Vec<_>, _>>()?;
            value.insert(*p, v);
        }
        let mut rows = Vec::new();
        for orbit in orbits {
            let members: Vec<&Place> = orbit.iter().filter(|p| value.contains_key(p)).collect();
            for w in members.windows(2) {
                let (a, b) = (&value[w[0]], &value[w[1]]);
                rows.push(a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect::<Vec<_>>());
            }
        }
        let kernel = if rows.is_empty() {
            (0..basis.dim()).map(|i| unit(basis.dim(), i)).collect()
        } else {
            Matrix::from_rows(f, &rows).expect("rectangular").kernel()
        };
        for c in echelon_by_top(f, kernel, basis.dim()) {
            let vals: Vec<Fe> =
                outside.iter().map(|p| f.sum(c.iter().zip(&value[p]).map(|(&a, &b)| f.mul(a, b)))).collect();
            if vals.iter().any(|&v| v != vals[0]) {
                return Ok(basis.combine(&c));
            }
        }
        Err(FsError::NoInvariantFound)
    }
}

fn unit(n: usize, i: usize) -> Vec<Fe> {
    let mut v = vec![Fe::ZERO; n];
    v[i] = Fe::ONE;
    v
}

/// Reduced echelon form with pivots on the highest coordinates, returned in
/// increasing order of top coordinate.
fn echelon_by_top(f: &Field, vectors: Vec<Vec<Fe>>, n: usize) -> Vec<Vec<Fe>> {
    if vectors.is_empty() {
        return vectors;
    }
    let rev: Vec<Vec<Fe>> = vectors.iter().map(|v| v.iter().rev().copied().collect()).collect();
    let rr = Matrix::from_rows(f, &rev).expect("rectangular").rref();
    let mut out: Vec<Vec<Fe>> =
        (0..rr.rank).map(|i| rr.matrix.row(i).iter().rev().copied().collect::<Vec<_>>()).collect();
    out.reverse();
    debug_assert!(out.iter().all(|v| v.len() == n));
    out
}

fn expand_denominator(f: &Field, den: &BTreeMap<Fe, usize>) -> Vec<Fe> {
    let mut h = vec![Fe::ONE];
    for (&a, &k) in den {
        for _ in 0..k {
            let mut next = vec![Fe::ZERO; h.len() + 1];
            for (i, &c) in h.iter().enumerate() {
                next[i + 1] = f.add(next[i + 1], c);
                next[i] = f.sub(next[i], f.mul(a, c));
            }
            h = next;
        }
    }
    h
}

fn bezout(a: i64, b: i64) -> (i64, i64) {
    // Extended Euclid: returns (s, t) with s*a + t*b = gcd(a, b).
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1, 0, 0, 1);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (s0, t0)
}

fn ser_mul(f: &Field, a: &[Fe], b: &[Fe], len: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] = f.add(out[i + j], f.mul(ai, bj));
        }
    }
    out
}

/// Inverse of a series with nonzero constant term.
fn ser_inv(f: &Field, a: &[Fe], len: usize) -> Vec<Fe> {
    let inv0 = f.inv(a[0]);
    let mut b = vec![Fe::ZERO; len];
    b[0] = inv0;
    for k in 1..len {
        let s = f.sum((1..=k.min(a.len() - 1)).map(|i| f.mul(a[i], b[k - i])));
        b[k] = f.neg(f.mul(s, inv0));
    }
    b
}

fn ser_pow(f: &Field, a: &[Fe], mut e: u64, len: usize) -> Vec<Fe> {
    let mut base: Vec<Fe> = a.iter().copied().chain(std::iter::repeat(Fe::ZERO)).take(len).collect();
    let mut acc = vec![Fe::ZERO; len];
    if len > 0 {
        acc[0] = Fe::ONE;
    }
    while e > 0 {
        if e & 1 == 1 {
            acc = ser_mul(f, &acc, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = ser_mul(f, &base, &base, len);
        }
    }
    acc
}

fn ser_pow_signed(f: &Field, a: &[Fe], e: i64, len: usize) -> Vec<Fe> {
    if e >= 0 {
        ser_pow(f, a, e as u64, len)
    } else {
        ser_pow(f, &ser_inv(f, a, len), e.unsigned_abs(), len)
    }
}

/// a^0, ..., a^max, each truncated to `len` terms.
fn powers(f: &Field, a: &[Fe], max: usize, len: usize) -> Vec<Vec<Fe>> {
    let mut out = Vec::with_capacity(max + 1);
    let mut one = vec![Fe::ZERO; len];
    if len > 0 {
        one[0] = Fe::ONE;
    }
    out.push(one);
    for k in 1..=max {
        let next = ser_mul(f, &out[k - 1], a, len);
        out.push(next);
    }
    out
}
