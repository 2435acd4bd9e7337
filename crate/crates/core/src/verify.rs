//! Independent checks of a code's claimed parameters.
//!
//! Nothing here trusts the recipe that built the code: dimension is a rank
//! computation, locality is checked on the punctured blocks, and the
//! distance is either enumerated or sandwiched between the designed bound
//! and an explicit low-weight codeword.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::LrcCode;
use crate::gf::Fe;
use crate::linalg::{Matrix, SubmatrixSweep, DEFAULT_SUBSET_CAP};
use crate::par::{self, Exec};

/// Default cap on nonzero messages for exhaustive distance.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// Cap on local codewords enumerated per repair group.
pub const LOCAL_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("certificate codeword has weight {weight}, expected {expected}")]
    CertificateFailed { weight: usize, expected: usize },
    #[error("malformed code: {0}")]
    Malformed(String),
}

/// n - k + 1 - (ceil(k/r) - 1)(delta - 1).
pub fn singleton_bound(n: usize, k: usize, r: usize, delta: usize) -> i64 {
    n as i64 - k as i64 + 1 - (k.div_ceil(r) as i64 - 1) * (delta as i64 - 1)
}

/// Distance of the bound from `d`; zero means optimal, negative means the
/// bound is violated, which no genuine code can do.
pub fn singleton_defect(n: usize, k: usize, d: usize, r: usize, delta: usize) -> i64 {
    singleton_bound(n, k, r, delta) - d as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AppendixCheck {
    /// d/n > 2/3, outside the bound's hypothesis.
    Vacuous,
    Holds,
    Violated,
}

impl AppendixCheck {
    pub fn ok(self) -> bool {
        self != AppendixCheck::Violated
    }
}

/// The length bound for optimal codes with d/n <= 2/3:
/// d <= ((r + delta - 1)(r + 1) + delta(delta - 1)) q / r.
pub fn appendix_bound_check(n: usize, d: usize, r: usize, delta: usize, q: u64) -> AppendixCheck {
    if 3 * d > 2 * n {
        return AppendixCheck::Vacuous;
    }
    let rhs = ((r + delta - 1) * (r + 1) + delta * (delta - 1)) as u128 * q as u128;
    if d as u128 * r as u128 <= rhs {
        AppendixCheck::Holds
    } else {
        AppendixCheck::Violated
    }
}

/// Locality findings for one repair group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupLocality {
    pub group: usize,
    pub size: usize,
    pub rank: usize,
    /// Minimum weight of the local code, when it was small enough to enumerate.
    pub exhaustive_distance: Option<usize>,
    /// Whether every rank x rank minor of a local basis is nonzero, i.e.
    /// the local code is MDS. `None` when the sweep was over budget.
    pub mds: Option<bool>,
    pub ok: bool,
}

impl GroupLocality {
    /// The local distance established by whichever method ran.
    pub fn distance(&self) -> Option<usize> {
        self.exhaustive_distance.or(match self.mds {
            Some(true) => Some(self.size - self.rank + 1),
            _ => None,
        })
    }

    /// Whether the two methods agree, when both ran.
    pub fn methods_agree(&self) -> Option<bool> {
        match (self.exhaustive_distance, self.mds) {
            (Some(d), Some(mds)) => Some(mds == (d == self.size - self.rank + 1)),
            _ => None,
        }
    }
}

/// Checks every repair group: block rank at most r and local distance at
/// least delta.
pub fn check_locality(code: &LrcCode, exec: Exec) -> Vec<GroupLocality> {
    code.groups
        .iter()
        .enumerate()
        .map(|(gi, range)| {
            let cols: Vec<usize> = range.clone().collect();
            let block = code.generator.select_columns(&cols);
            let basis = block.row_space_basis();
            let rank = basis.rows();
            let size = cols.len();
            let exhaustive_distance = local_min_weight(&basis);
            let mds = if rank == 0 {
                Some(true)
            } else {
                match basis.all_square_submatrices_invertible_with(DEFAULT_SUBSET_CAP, exec) {
                    Ok(SubmatrixSweep::AllInvertible { .. }) => Some(true),
                    Ok(SubmatrixSweep::Singular { .. }) => Some(false),
                    Err(_) => None,
                }
            };
            let mut g = GroupLocality { group: gi, size, rank, exhaustive_distance, mds, ok: false };
            g.ok = rank <= code.r && rank > 0 && g.distance().is_some_and(|d| d >= code.delta);
            g
        })
        .collect()
}

fn local_min_weight(basis: &Matrix) -> Option<usize> {
    let q = basis.field().q() as u64;
    let rank = basis.rows() as u32;
    if rank == 0 {
        return Some(usize::MAX);
    }
    let total = q.checked_pow(rank)?;
    if total > LOCAL_BUDGET {
        return None;
    }
    Some(min_weight_projective(basis, Exec::Sequential).0)
}

/// Result of the exhaustive distance search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exhaustive {
    /// Minimum weight over all `messages` nonzero messages, with a
    /// message attaining it.
    Exact { d: usize, messages: u64, witness: Vec<Fe> },
    /// q^k - 1 exceeds the budget.
    Abstained { messages: Option<u64>, budget: u64 },
}

/// Minimum Hamming weight of the code by enumerating every nonzero
/// message. Messages are visited up to scalar multiples, which does not
/// change the minimum.
pub fn min_distance_exhaustive(code: &LrcCode, budget: u64, exec: Exec) -> Exhaustive {
    let q = code.q() as u64;
    let messages = q.checked_pow(code.k as u32).map(|m| m - 1);
    match messages {
        Some(m) if m <= budget => {
            let (d, witness) = min_weight_projective(&code.generator, exec);
            Exhaustive::Exact { d, messages: m, witness }
        }
        _ => Exhaustive::Abstained { messages, budget },
    }
}

/// Minimum weight of a nonzero vector in the row space of `g`, with the
/// message attaining it. The search runs over messages whose first
/// nonzero coordinate is 1, split into independent chunks by the position
/// of that coordinate and the value of the next one. Within a chunk the
/// remaining coordinates move like an odometer and each step adds one
/// precomputed row multiple, so a step costs one pass over the columns.
fn min_weight_projective(g: &Matrix, exec: Exec) -> (usize, Vec<Fe>) {
    let f = g.field();
    let k = g.rows();
    let q = f.q() as usize;
    // Digit values in visiting order: 0, then powers of the primitive element.
    let vals: Vec<Fe> = std::iter::once(Fe::ZERO).chain((0..q as i64 - 1).map(|e| f.exp(e))).collect();
    let rows = g.to_rows();
    // steps[i][s]: row i times (vals[s + 1] - vals[s]), wrapping at the end.
    let steps: Vec<Vec<Vec<Fe>>> = rows
        .iter()
        .map(|row| {
            (0..q)
                .map(|s| {
                    let diff = f.sub(vals[(s + 1) % q], vals[s]);
                    row.iter().map(|&a| f.mul(a, diff)).collect()
                })
                .collect()
        })
        .collect();
    let mut chunks: Vec<(usize, usize)> = Vec::new();
    for lead in 0..k {
        if lead + 1 < k {
            chunks.extend((0..q).map(|v| (lead, v)));
        } else {
            chunks.push((lead, 0));
        }
    }
    let results = par::map_indexed(exec, chunks.len(), |ci| {
        let (lead, v) = chunks[ci];
        let mut cw = rows[lead].clone();
        let mut digits = vec![0usize; k];
        digits[lead] = 1;
        if lead + 1 < k {
            digits[lead + 1] = v;
            for (c, &a) in cw.iter_mut().zip(&rows[lead + 1]) {
                *c = f.add(*c, f.mul(a, vals[v]));
            }
        }
        let first_free = (lead + 2).min(k);
        let mut weight = cw.iter().filter(|c| !c.is_zero()).count();
        let mut best = (weight, digits.clone());
        loop {
            let mut j = k;
            loop {
                if j == first_free {
                    return best;
                }
                j -= 1;
                for (c, &d) in cw.iter_mut().zip(&steps[j][digits[j]]) {
                    if d.is_zero() {
                        continue;
                    }
                    let was = !c.is_zero();
                    *c = f.add(*c, d);
                    match (was, c.is_zero()) {
                        (true, true) => weight -= 1,
                        (false, false) => weight += 1,
                        _ => {}
                    }
                }
                digits[j] = (digits[j] + 1) % q;
                if digits[j] != 0 {
                    break;
                }
            }
            if weight < best.0 {
                best = (weight, digits.clone());
            }
        }
    });
    let (d, digits) = results.into_iter().min_by_key(|r| r.0).unwrap_or((usize::MAX, vec![]));
    (d, digits.into_iter().map(|i| vals[i]).collect())
}

/// A codeword of weight (m - t) times the group size: the evaluation of
/// prod_{i < t} (z - z_i), which vanishes exactly on the first t groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub message: Vec<Fe>,
    pub codeword: Vec<Fe>,
    pub weight: usize,
}

pub fn designed_weight_certificate(code: &LrcCode) -> Result<Certificate, VerifyError> {
    let f = &code.field;
    let t = code.t;
    if code.z_values.len() < t || code.k != t * code.r + 1 {
        return Err(VerifyError::Malformed("z values or dimension do not match t and r".into()));
    }
    // Coefficients of prod (z - z_i), lowest degree first.
    let mut poly = vec![Fe::ONE];
    for &zi in &code.z_values[..t] {
        let mut next = vec![Fe::ZERO; poly.len() + 1];
        for (j, &c) in poly.iter().enumerate() {
            next[j + 1] = f.add(next[j + 1], c);
            next[j] = f.sub(next[j], f.mul(c, zi));
        }
        poly = next;
    }
    let mut message = vec![Fe::ZERO; code.k];
    for (j, &c) in poly.iter().enumerate() {
        message[code.z_power_row(j)] = c;
    }
    let codeword = code.generator.vec_mul(&message).map_err(|e| VerifyError::Malformed(e.to_string()))?;
    let weight = codeword.iter().filter(|c| !c.is_zero()).count();
    let expected = code.groups[t..].iter().map(|g| g.len()).sum();
    if weight != expected {
        return Err(VerifyError::CertificateFailed { weight, expected });
    }
    Ok(Certificate { message, codeword, weight })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMode {
    Exhaustive,
    Certify,
    /// Exhaustive when within budget, certificate otherwise.
    #[default]
    Auto,
}

impl std::str::FromStr for DistanceMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exhaustive" => Ok(DistanceMode::Exhaustive),
            "certify" => Ok(DistanceMode::Certify),
            "auto" => Ok(DistanceMode::Auto),
            other => Err(format!("unknown distance mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceVerdict {
    Exact { d: usize, messages: u64 },
    /// Designed lower bound and certificate upper bound.
    Certified { lower: usize, upper: usize },
    Abstained { reason: String },
    /// The certificate codeword had the wrong weight.
    CertificateFailed { weight: usize, expected: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Exact,
    Certified,
    Abstained,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub k: usize,
    pub rank: usize,
    pub dimension_ok: bool,
    pub locality: Vec<GroupLocality>,
    pub locality_ok: bool,
    pub distance_mode: DistanceMode,
    pub distance: DistanceVerdict,
    pub singleton_bound: i64,
    /// Against the exact distance when known, otherwise the designed one.
    pub singleton_defect: i64,
    pub appendix: AppendixCheck,
    pub verdict: Verdict,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Exact | Verdict::Certified)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub mode: DistanceMode,
    pub budget: u64,
    pub exec: Exec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { mode: DistanceMode::Auto, budget: DEFAULT_BUDGET, exec: Exec::default() }
    }
}

/// Runs every check and folds them into one verdict.
pub fn verify_code(code: &LrcCode, opts: &VerifyOptions) -> VerificationReport {
    let mut failures = Vec::new();
    if let Err(e) = code.check_shape() {
        failures.push(e.to_string());
    }
    let rank = code.generator.rank();
    let dimension_ok = rank == code.k;
    if !dimension_ok {
        failures.push(format!("rank {rank} differs from k = {}", code.k));
    }
    let locality = check_locality(code, opts.exec);
    let locality_ok = locality.iter().all(|g| g.ok);
    for g in locality.iter().filter(|g| !g.ok) {
        failures.push(format!(
            "group {}: rank {}, local distance {:?}",
            g.group,
            g.rank,
            g.distance()
        ));
    }
    for g in &locality {
        if g.methods_agree() == Some(false) {
            failures.push(format!("group {}: enumeration and minor sweep disagree", g.group));
        }
    }

    let certificate = designed_weight_certificate(code);
    let run_exhaustive = match opts.mode {
        DistanceMode::Exhaustive => true,
        DistanceMode::Certify => false,
        DistanceMode::Auto => {
            matches!((code.q() as u64).checked_pow(code.k as u32), Some(m) if m - 1 <= opts.budget)
        }
    };
    let distance = if run_exhaustive {
        match min_distance_exhaustive(code, opts.budget, opts.exec) {
            Exhaustive::Exact { d, messages, .. } => DistanceVerdict::Exact { d, messages },
            Exhaustive::Abstained { messages, budget } => DistanceVerdict::Abstained {
                reason: match messages {
                    Some(m) => format!("{m} messages exceed the budget of {budget}"),
                    None => format!("q^k overflows; budget {budget}"),
                },
            },
        }
    } else {
        match &certificate {
            Ok(c) => DistanceVerdict::Certified { lower: code.d_designed, upper: c.weight },
            Err(VerifyError::CertificateFailed { weight, expected }) => {
                DistanceVerdict::CertificateFailed { weight: *weight, expected: *expected }
            }
            Err(e) => DistanceVerdict::Abstained { reason: e.to_string() },
        }
    };
    if let Err(e) = &certificate {
        failures.push(e.to_string());
    }

    let bound = singleton_bound(code.n, code.k, code.r, code.delta);
    let measured = match distance {
        DistanceVerdict::Exact { d, .. } => d,
        _ => code.d_designed,
    };
    let defect = bound - measured as i64;
    if defect < 0 {
        failures.push(format!("distance {measured} exceeds the Singleton-type bound {bound}"));
    } else if code.optimal && defect != 0 {
        failures.push(format!("claimed optimal but the defect is {defect}"));
    }
    match distance {
        DistanceVerdict::Exact { d, .. } if d < code.d_designed => {
            failures.push(format!("distance {d} is below the designed {}", code.d_designed));
        }
        DistanceVerdict::Certified { lower, upper } if upper < lower => {
            failures.push(format!("certificate weight {upper} is below the designed {lower}"));
        }
        DistanceVerdict::Certified { lower, upper } if code.optimal && upper != lower => {
            failures.push(format!("certificate weight {upper} does not match the designed {lower}"));
        }
        _ => {}
    }
    let appendix = if defect == 0 {
        appendix_bound_check(code.n, measured, code.r, code.delta, code.q() as u64)
    } else {
        AppendixCheck::Vacuous
    };
    if !appendix.ok() {
        failures.push("length bound for optimal codes is violated".into());
    }

    let verdict = if !failures.is_empty() {
        Verdict::Failed
    } else {
        match distance {
            DistanceVerdict::Exact { .. } => Verdict::Exact,
            DistanceVerdict::Certified { .. } => Verdict::Certified,
            _ => Verdict::Abstained,
        }
    };
    VerificationReport {
        n: code.n,
        k: code.k,
        rank,
        dimension_ok,
        locality,
        locality_ok,
        distance_mode: opts.mode,
        distance,
        singleton_bound: bound,
        singleton_defect: defect,
        appendix,
        verdict,
        failures,
    }
}
