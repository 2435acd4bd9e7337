//! Dense exact linear algebra over a finite field.

use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::par::{self, Exec};

/// Default cap on the number of column subsets the MDS sweep will visit.
pub const DEFAULT_SUBSET_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{count} column subsets exceed the cap of {cap}")]
    BudgetExceeded { count: u64, cap: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

/// Reduced row echelon form together with its rank and pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Outcome of the all-square-submatrices sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubmatrixSweep {
    AllInvertible { checked: u64 },
    /// The lexicographically first column subset with zero determinant.
    Singular { columns: Vec<usize> },
}

impl SubmatrixSweep {
    pub fn is_all_invertible(&self) -> bool {
        matches!(self, SubmatrixSweep::AllInvertible { .. })
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Matrix, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Result<Matrix, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, rows.len(), cols, rows.concat())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let data = rows.iter().flat_map(|&r| self.row(r).iter().copied()).collect();
        Matrix { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Fe]) -> Result<Vec<Fe>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(a, g));
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Fe]) -> Result<Vec<Fe>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| f.sum(self.row(r).iter().zip(v).map(|(&a, &b)| f.mul(a, b))))
            .collect())
    }

    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, rank: pivots.len(), pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Nonzero rows of the reduced echelon form: a canonical row-space basis.
    pub fn row_space_basis(&self) -> Matrix {
        let rr = self.rref();
        let keep: Vec<usize> = (0..rr.rank).collect();
        rr.matrix.select_rows(&keep)
    }

    /// Basis of {x : self * x = 0}, one free variable set to 1 per vector.
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        let f = &self.field;
        let rr = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !rr.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![Fe::ZERO; self.cols];
                x[fc] = Fe::ONE;
                for (i, &pc) in rr.pivots.iter().enumerate() {
                    x[pc] = f.neg(rr.matrix.get(i, fc));
                }
                x
            })
            .collect()
    }

    /// Some x with self * x = b (free variables zero), or `None` when the
    /// system is inconsistent.
    pub fn solve(&self, b: &[Fe]) -> Result<Option<Vec<Fe>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let rr = aug.rref();
        if rr.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (i, &pc) in rr.pivots.iter().enumerate() {
            x[pc] = rr.matrix.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Determinant of a square matrix by elimination.
    pub fn determinant(&self) -> Result<Fe, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        Ok(det_in_place(&self.field, &mut self.data.clone(), self.rows))
    }

    /// Whether every choice of `rows` columns gives an invertible square
    /// matrix. Subsets are visited in lexicographic order and the first
    /// singular one is reported.
    pub fn all_square_submatrices_invertible(&self, cap: u64) -> Result<SubmatrixSweep, LinalgError> {
        self.all_square_submatrices_invertible_with(cap, Exec::default())
    }

    pub fn all_square_submatrices_invertible_with(
        &self,
        cap: u64,
        exec: Exec,
    ) -> Result<SubmatrixSweep, LinalgError> {
        let r = self.rows;
        if r > self.cols {
            return Err(LinalgError::DimensionMismatch(format!("{} rows exceed {} columns", r, self.cols)));
        }
        let count = binomial(self.cols as u64, r as u64);
        if count > cap {
            return Err(LinalgError::BudgetExceeded { count, cap });
        }
        const CHUNK: u64 = 256;
        let chunks = count.div_ceil(CHUNK) as usize;
        let hit = par::find_first(exec, chunks, |ci| {
            let start = ci as u64 * CHUNK;
            let end = (start + CHUNK).min(count);
            let mut combo = unrank_combination(self.cols, r, start);
            let mut buf = vec![Fe::ZERO; r * r];
            for idx in start..end {
                for (j, &c) in combo.iter().enumerate() {
                    for i in 0..r {
                        buf[i * r + j] = self.get(i, c);
                    }
                }
                if det_in_place(&self.field, &mut buf, r).is_zero() {
                    return Some(combo);
                }
                if idx + 1 < end {
                    next_combination(&mut combo, self.cols);
                }
            }
            None
        });
        Ok(match hit {
            Some((_, columns)) => SubmatrixSweep::Singular { columns },
            None => SubmatrixSweep::AllInvertible { checked: count },
        })
    }
}

fn det_in_place(f: &Field, a: &mut [Fe], n: usize) -> Fe {
    let mut det = Fe::ONE;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
            return Fe::ZERO;
        };
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            det = f.neg(det);
        }
        let pv = a[col * n + col];
        det = f.mul(det, pv);
        let inv = f.inv(pv);
        for r in col + 1..n {
            let factor = f.mul(a[r * n + col], inv);
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                a[r * n + c] = f.sub(a[r * n + c], f.mul(factor, a[col * n + c]));
            }
        }
    }
    det
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// The combination of rank `idx` among k-subsets of 0..n in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut idx: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        loop {
            let rest = binomial((n - next - 1) as u64, (k - slot - 1) as u64);
            if idx < rest {
                break;
            }
            idx -= rest;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Advances to the next k-subset in lexicographic order; false when done.
pub fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
