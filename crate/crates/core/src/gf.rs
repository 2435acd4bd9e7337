//! Finite fields GF(p^s) in a polynomial basis.
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{s-1} p^{s-1}`
//! where `c_i` are its coordinates in the basis `1, u, ..., u^{s-1}` and `u`
//! is a root of the field modulus. The modulus is the source of truth:
//! multiplication tables are derived from it once at construction.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field accepted. Keeps the log tables and point sweeps bounded.
pub const MAX_FIELD_SIZE: u32 = 1 << 20;

/// Above this size addition is done digit by digit instead of by table.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("modulus {0:?} is reducible over GF(p)")]
    ReducibleModulus(Vec<u32>),
    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    BadModulus { expected: u32, got: Vec<u32> },
    #[error("field of size {0} exceeds the supported limit")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{c} does not divide the extension degree {s}")]
    NonDividingDegree { c: u32, s: u32 },
    #[error("{m} does not divide the multiplicative order {order}")]
    OrderNotDividing { m: u64, order: u64 },
    #[error("every element is a square in characteristic 2")]
    EvenCharacteristic,
    #[error("coordinate vector {0:?} is not a valid element")]
    BadCoordinates(Vec<u32>),
}

/// A field element, identified by its packed polynomial-basis coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct Inner {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: Fe,
    /// exp[i] = primitive^i, doubled so that log sums need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// GF(p^s) with an explicit modulus and designated primitive element.
///
/// Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.s == other.0.s
                && self.0.modulus == other.0.modulus
                && self.0.primitive == other.0.primitive)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.0.p, self.0.s, self.0.modulus)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over GF(p), lowest coefficient first, used only to
/// vet and apply the modulus.
mod prime_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        trim(&mut a);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while a.len() > dm {
            let top = a.len() - 1;
            let c = (a[top] as u64 * lead_inv as u64 % p as u64) as u32;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = top - dm + i;
                    a[idx] = ((a[idx] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
                }
            }
            a.pop();
            trim(&mut a);
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// x^(p^k) mod m, by repeated p-th powering.
    pub fn frobenius_x(m: &[u32], p: u32, k: u32) -> Vec<u32> {
        let mut cur = rem(&[0, 1], m, p);
        for _ in 0..k {
            let mut acc = vec![1u32];
            let mut base = cur.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = rem(&mul(&acc, &base, p), m, p);
                }
                base = rem(&mul(&base, &base, p), m, p);
                e >>= 1;
            }
            cur = acc;
        }
        cur
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let s = (m.len() - 1) as u32;
        if s == 1 {
            return true;
        }
        let x = vec![0, 1];
        if sub(&frobenius_x(m, p, s), &x, p) != Vec::<u32>::new() {
            return false;
        }
        for l in super::prime_factors(s as u64) {
            let h = sub(&frobenius_x(m, p, s / l as u32), &x, p);
            if gcd(m, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds GF(p^s). Without an override the modulus is the monic
    /// irreducible whose lower coefficients, read as base-p digits with the
    /// constant term least significant, form the smallest integer.
    pub fn new(p: u32, s: u32, modulus_override: Option<&[u32]>) -> Result<Field, GfError> {
        if !is_prime(p as u64) {
            return Err(GfError::NonPrimeCharacteristic(p));
        }
        let q = (p as u64).checked_pow(s).unwrap_or(u64::MAX);
        if s == 0 || q > MAX_FIELD_SIZE as u64 {
            return Err(GfError::FieldTooLarge(q));
        }
        let q = q as u32;
        let modulus = match modulus_override {
            Some(m) => {
                if m.len() != s as usize + 1 || m[s as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(GfError::BadModulus { expected: s, got: m.to_vec() });
                }
                if !prime_poly::is_irreducible(m, p) {
                    return Err(GfError::ReducibleModulus(m.to_vec()));
                }
                m.to_vec()
            }
            None => (0..q)
                .map(|low| {
                    let mut m = digits(low, p, s);
                    m.push(1);
                    m
                })
                .find(|m| prime_poly::is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists"),
        };
        Ok(Field(Arc::new(Inner::build(p, s, q, modulus))))
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Field, GfError> {
        Field::new(p, 1, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn s(&self) -> u32 {
        self.0.s
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn primitive(&self) -> Fe {
        self.0.primitive
    }

    /// All elements in canonical (packed-coordinate) order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.0.q).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.0.q).map(Fe)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.s)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fe, GfError> {
        if c.len() > self.0.s as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(GfError::BadCoordinates(c.to_vec()));
        }
        Ok(Fe(c.iter().rev().fold(0, |acc, &x| acc * self.0.p + x)))
    }

    /// The image of an integer in the prime subfield.
    pub fn int(&self, k: i64) -> Fe {
        Fe(k.rem_euclid(self.0.p as i64) as u32)
    }

    /// The generator `u` of the polynomial basis (the modulus root).
    pub fn generator(&self) -> Fe {
        if self.0.s == 1 {
            // u is the root of a linear modulus x + c, i.e. -c.
            self.neg(Fe(self.0.modulus[0]))
        } else {
            Fe(self.0.p)
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.0;
        if inner.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if let Some(t) = &inner.add {
            return Fe(t[(a.0 * inner.q + b.0) as usize]);
        }
        if inner.s == 1 {
            return Fe((a.0 + b.0) % inner.p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        for _ in 0..inner.s {
            out += ((x % inner.p + y % inner.p) % inner.p) * place;
            x /= inner.p;
            y /= inner.p;
            place *= inner.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let inner = &*self.0;
        Fe(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn checked_inv(&self, a: Fe) -> Result<Fe, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let inner = &*self.0;
        let l = inner.log[a.0 as usize];
        Ok(Fe(inner.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize]))
    }

    pub fn checked_div(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        Ok(self.mul(a, self.checked_inv(b)?))
    }

    /// Inverse of a nonzero element.
    ///
    /// # Panics
    /// Panics on zero; use [`Field::checked_inv`] when that can happen.
    pub fn inv(&self, a: Fe) -> Fe {
        self.checked_inv(a).expect("inverse of zero")
    }

    /// # Panics
    /// Panics when `b` is zero.
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let inner = &*self.0;
        let l = inner.log[a.0 as usize] as u64 * (e % (inner.q as u64 - 1)) % (inner.q as u64 - 1);
        Fe(inner.exp[l as usize])
    }

    /// Power with a signed exponent; negative exponents need a unit.
    pub fn pow_signed(&self, a: Fe, e: i64) -> Result<Fe, GfError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.checked_inv(a)?, e.unsigned_abs()))
        }
    }

    /// primitive^k.
    pub fn exp(&self, k: i64) -> Fe {
        let n = self.0.q as i64 - 1;
        Fe(self.0.exp[k.rem_euclid(n) as usize])
    }

    /// Discrete logarithm to the primitive base.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    pub fn order(&self, a: Fe) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = self.0.q as u64 - 1;
        Some(n / gcd(n, l))
    }

    /// a^(p^k).
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        let mut x = a;
        for _ in 0..k {
            x = self.pow(x, self.0.p as u64);
        }
        x
    }

    pub fn is_square(&self, a: Fe) -> bool {
        match self.log(a) {
            None => true,
            Some(l) => self.0.p == 2 || l % 2 == 0,
        }
    }

    /// Trace from GF(p^s) down to GF(p^c): sum of a^((p^c)^i), i < s/c.
    /// The result is an element of the subfield, embedded in this field.
    pub fn trace_to_subfield(&self, a: Fe, c: u32) -> Result<Fe, GfError> {
        let s = self.0.s;
        if c == 0 || s % c != 0 {
            return Err(GfError::NonDividingDegree { c, s });
        }
        let mut acc = Fe::ZERO;
        let mut cur = a;
        for _ in 0..s / c {
            acc = self.add(acc, cur);
            cur = self.frobenius(cur, c);
        }
        debug_assert_eq!(self.frobenius(acc, c), acc);
        Ok(acc)
    }

    /// Absolute trace to GF(p).
    pub fn trace(&self, a: Fe) -> Fe {
        self.trace_to_subfield(a, 1).expect("1 divides every degree")
    }

    /// Norm from GF(p^s) down to GF(p^c): product of the conjugates.
    pub fn norm_to_subfield(&self, a: Fe, c: u32) -> Result<Fe, GfError> {
        let s = self.0.s;
        if c == 0 || s % c != 0 {
            return Err(GfError::NonDividingDegree { c, s });
        }
        let mut acc = Fe::ONE;
        let mut cur = a;
        for _ in 0..s / c {
            acc = self.mul(acc, cur);
            cur = self.frobenius(cur, c);
        }
        Ok(acc)
    }

    /// Whether `a` lies in the subfield GF(p^c).
    pub fn in_subfield(&self, a: Fe, c: u32) -> bool {
        self.frobenius(a, c) == a
    }

    /// The M distinct M-th roots of unity in canonical order.
    pub fn nth_roots_of_unity(&self, m: u64) -> Result<Vec<Fe>, GfError> {
        let order = self.0.q as u64 - 1;
        if m == 0 || order % m != 0 {
            return Err(GfError::OrderNotDividing { m, order });
        }
        let zeta = self.exp((order / m) as i64);
        let mut roots: Vec<Fe> = (0..m).map(|i| self.pow(zeta, i)).collect();
        roots.sort();
        Ok(roots)
    }

    /// The primitive element itself: its odd powers are exactly the
    /// non-squares, and exponent 1 is the smallest.
    pub fn quadratic_nonresidue(&self) -> Result<Fe, GfError> {
        if self.0.p == 2 {
            return Err(GfError::EvenCharacteristic);
        }
        Ok(self.0.primitive)
    }

    /// Square root table: `roots[a]` is some b with b^2 = a, if any.
    pub fn sqrt_table(&self) -> Vec<Option<Fe>> {
        let mut t = vec![None; self.0.q as usize];
        for b in self.elements() {
            let a = self.mul(b, b);
            if t[a.0 as usize].is_none() {
                t[a.0 as usize] = Some(b);
            }
        }
        t
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ONE, |acc, x| self.mul(acc, x))
    }

    /// Evaluates a univariate polynomial (lowest coefficient first).
    pub fn eval_poly(&self, coeffs: &[Fe], x: Fe) -> Fe {
        coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn digits(mut v: u32, p: u32, s: u32) -> Vec<u32> {
    (0..s)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

impl Inner {
    fn build(p: u32, s: u32, q: u32, modulus: Vec<u32>) -> Inner {
        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = prime_poly::mul(&digits(a, p, s), &digits(b, p, s), p);
            let r = prime_poly::rem(&prod, &modulus, p);
            r.iter().rev().fold(0, |acc, &x| acc * p + x)
        };
        let n = q as u64 - 1;
        let factors = prime_factors(n);
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let (mut acc, mut base) = (1u32, a);
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let primitive = (1..q)
            .find(|&a| slow_pow(a, n) == 1 && factors.iter().all(|&l| slow_pow(a, n / l) != 1))
            .expect("the multiplicative group is cyclic");

        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..n as usize {
            exp[i] = cur;
            exp[i + n as usize] = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, primitive);
        }

        let neg: Vec<u32> = (0..q)
            .map(|a| {
                digits(a, p, s)
                    .iter()
                    .rev()
                    .fold(0, |acc, &d| acc * p + (p - d) % p)
            })
            .collect();

        let add = (p != 2 && q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, s);
                for b in 0..q {
                    let db = digits(b, p, s);
                    t[(a * q + b) as usize] =
                        (0..s as usize).rev().fold(0, |acc, i| acc * p + (da[i] + db[i]) % p);
                }
            }
            t
        });

        Inner { p, s, q, modulus, primitive: Fe(primitive), exp, log, neg, add }
    }
}
