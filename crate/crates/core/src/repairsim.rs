//! Erasure-and-repair harness: erase symbols inside repair groups and
//! recover them from the surviving symbols of the same group only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::LrcCode;
use crate::gf::Fe;
use crate::linalg::next_combination;
use crate::par::{self, Exec};

/// How many failing patterns a report keeps.
const MAX_REPORTED_FAILURES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepairError {
    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("group {0} does not exist")]
    NoSuchGroup(usize),
    #[error("column {column} is erased but lies outside group {group}")]
    HolesOutsideGroup { group: usize, column: usize },
    #[error("group {group}: {holes} erasures are not determined by the surviving symbols")]
    Unrecoverable { group: usize, holes: usize },
    #[error("group {0}: surviving symbols are not a restriction of any codeword")]
    Inconsistent(usize),
}

/// message x generator.
pub fn encode(code: &LrcCode, message: &[Fe]) -> Result<Vec<Fe>, RepairError> {
    if message.len() != code.k {
        return Err(RepairError::LengthMismatch { expected: code.k, got: message.len() });
    }
    Ok(code.generator.vec_mul(message).expect("length checked"))
}

/// A successful local repair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Repaired {
    /// The group's symbols, holes filled.
    pub values: Vec<Fe>,
    /// Surviving symbols that were read.
    pub reads: usize,
}

/// Fills the holes (`None`) of group `group` from that group's surviving
/// symbols. Holes elsewhere in the word are an error: repair never looks
/// outside the group.
pub fn local_repair(code: &LrcCode, received: &[Option<Fe>], group: usize) -> Result<Repaired, RepairError> {
    if received.len() != code.n {
        return Err(RepairError::LengthMismatch { expected: code.n, got: received.len() });
    }
    let range = code.groups.get(group).ok_or(RepairError::NoSuchGroup(group))?.clone();
    if let Some(column) = (0..code.n).find(|c| !range.contains(c) && received[*c].is_none()) {
        return Err(RepairError::HolesOutsideGroup { group, column });
    }
    let cols: Vec<usize> = range.clone().collect();
    let basis = code.generator.select_columns(&cols).row_space_basis();
    let known: Vec<usize> = (0..cols.len()).filter(|&i| received[cols[i]].is_some()).collect();
    let holes = cols.len() - known.len();
    if holes == 0 {
        return Ok(Repaired { values: received[range].iter().map(|v| v.expect("no holes")).collect(), reads: 0 });
    }
    let sub = basis.select_columns(&known);
    if sub.rank() != basis.rows() {
        return Err(RepairError::Unrecoverable { group, holes });
    }
    let rhs: Vec<Fe> = known.iter().map(|&i| received[cols[i]].expect("known")).collect();
    let coeffs = sub.transpose().solve(&rhs).expect("shapes agree").ok_or(RepairError::Inconsistent(group))?;
    let values = basis.vec_mul(&coeffs).expect("shapes agree");
    Ok(Repaired { values, reads: known.len() })
}

/// A pattern that did not repair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedRepair {
    pub trial: u64,
    pub group: usize,
    /// Erased positions within the group.
    pub pattern: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignStats {
    pub trials: u64,
    pub erasures_per_group: usize,
    pub seed: u64,
    pub repairs: u64,
    pub recovered: u64,
    /// `None` when nothing was attempted.
    pub recovery_rate: Option<f64>,
    /// Mean number of surviving in-group symbols read per successful repair.
    pub avg_reads: Option<f64>,
    pub failures: Vec<FailedRepair>,
}

fn random_message(code: &LrcCode, rng: &mut ChaCha8Rng) -> Vec<Fe> {
    let q = code.q();
    (0..code.k).map(|_| Fe(rng.gen_range(0..q))).collect()
}

/// Tries one erasure pattern in one group against a known codeword.
fn try_pattern(code: &LrcCode, codeword: &[Fe], group: usize, pattern: &[usize]) -> Result<usize, String> {
    let start = code.groups[group].start;
    let mut received: Vec<Option<Fe>> = codeword.iter().copied().map(Some).collect();
    for &p in pattern {
        received[start + p] = None;
    }
    match local_repair(code, &received, group) {
        Ok(rep) if rep.values[..] == codeword[code.groups[group].clone()] => Ok(rep.reads),
        Ok(_) => Err("repaired values differ from the original".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Random messages, random erasures in every group, local repair of each
/// group. Trial i draws from a ChaCha8 stream i under `seed`, so results
/// do not depend on scheduling.
pub fn run_campaign(code: &LrcCode, trials: u64, erasures_per_group: usize, seed: u64, exec: Exec) -> CampaignStats {
    let per_trial = par::map_indexed(exec, trials as usize, |trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let codeword = encode(code, &random_message(code, &mut rng)).expect("message has length k");
        let mut outcomes = Vec::with_capacity(code.groups.len());
        for (g, range) in code.groups.iter().enumerate() {
            let size = range.len();
            let e = erasures_per_group.min(size);
            let mut pattern = rand::seq::index::sample(&mut rng, size, e).into_vec();
            pattern.sort_unstable();
            let outcome = try_pattern(code, &codeword, g, &pattern);
            outcomes.push((g, pattern, outcome));
        }
        outcomes
    });
    let mut stats = CampaignStats {
        trials,
        erasures_per_group,
        seed,
        repairs: 0,
        recovered: 0,
        recovery_rate: None,
        avg_reads: None,
        failures: Vec::new(),
    };
    let mut reads = 0u64;
    for (trial, outcomes) in per_trial.into_iter().enumerate() {
        for (group, pattern, outcome) in outcomes {
            stats.repairs += 1;
            match outcome {
                Ok(r) => {
                    stats.recovered += 1;
                    reads += r as u64;
                }
                Err(reason) if stats.failures.len() < MAX_REPORTED_FAILURES => {
                    stats.failures.push(FailedRepair { trial: trial as u64, group, pattern, reason });
                }
                Err(_) => {}
            }
        }
    }
    if stats.repairs > 0 {
        stats.recovery_rate = Some(stats.recovered as f64 / stats.repairs as f64);
    }
    if stats.recovered > 0 {
        stats.avg_reads = Some(reads as f64 / stats.recovered as f64);
    }
    stats
}

/// Every pattern of exactly `erasures` holes in every group, checked
/// against one random codeword.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSweep {
    pub erasures: usize,
    pub patterns: u64,
    pub recovered: u64,
    pub failures: Vec<FailedRepair>,
}

impl PatternSweep {
    pub fn all_recovered(&self) -> bool {
        self.patterns == self.recovered
    }
}

pub fn sweep_patterns(code: &LrcCode, erasures: usize, seed: u64) -> PatternSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codeword = encode(code, &random_message(code, &mut rng)).expect("message has length k");
    let mut sweep = PatternSweep { erasures, patterns: 0, recovered: 0, failures: Vec::new() };
    for (g, range) in code.groups.iter().enumerate() {
        let size = range.len();
        if erasures > size {
            continue;
        }
        let mut pattern: Vec<usize> = (0..erasures).collect();
        loop {
            sweep.patterns += 1;
            match try_pattern(code, &codeword, g, &pattern) {
                Ok(_) => sweep.recovered += 1,
                Err(reason) => {
                    if sweep.failures.len() < MAX_REPORTED_FAILURES {
                        sweep.failures.push(FailedRepair { trial: 0, group: g, pattern: pattern.clone(), reason });
                    }
                }
            }
            if !next_combination(&mut pattern, size) {
                break;
            }
        }
    }
    sweep
}
