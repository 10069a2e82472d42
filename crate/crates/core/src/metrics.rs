//! Exact ground states for small problems and the benchmark statistics
//! built on them: success probability, time to solution, and median/IQR
//! summaries across instances.

use rayon::prelude::*;

use crate::error::MetricsError;
use crate::ising::{Energy, IsingProblem, SpinConfig};
use crate::solver::RunResult;

/// Largest problem [`brute_force_ground`] will enumerate.
pub const MAX_EXACT_SPINS: usize = 26;

/// Absolute tolerance for deciding that two energies are equal.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

/// Target confidence used for time to solution unless stated otherwise.
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundSource {
    /// Proven by exhaustive enumeration.
    Exact,
    /// Best value found or reported; not proven optimal.
    BestKnown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruth {
    pub energy: Energy,
    /// Number of optimal configurations; 0 when unknown.
    pub degeneracy: u64,
    pub source: GroundSource,
}

impl GroundTruth {
    pub fn best_known(energy: f64) -> Self {
        GroundTruth { energy: Energy(energy), degeneracy: 0, source: GroundSource::BestKnown }
    }
}

#[derive(Debug, Clone, Copy)]
struct Minimum {
    energy: f64,
    count: u64,
}

impl Minimum {
    const NONE: Minimum = Minimum { energy: f64::INFINITY, count: 0 };

    #[inline]
    fn observe(&mut self, energy: f64, count: u64) {
        if energy < self.energy - ENERGY_TOLERANCE {
            *self = Minimum { energy, count };
        } else if energy <= self.energy + ENERGY_TOLERANCE {
            self.energy = self.energy.min(energy);
            self.count += count;
        }
    }

    fn merge(mut self, other: Minimum) -> Minimum {
        if other.count > 0 {
            self.observe(other.energy, other.count);
        }
        self
    }
}

/// Exact ground energy and degeneracy by enumerating every configuration.
///
/// The configuration space is split into shards by the top spins; each shard
/// walks its remaining spins in Gray-code order, so consecutive states differ
/// by one flip and the energy and local fields update in `O(degree)`. With
/// no local fields the last spin is pinned to `+1` and the count doubled.
pub fn brute_force_ground(problem: &IsingProblem) -> Result<GroundTruth, MetricsError> {
    let n = problem.n();
    if n > MAX_EXACT_SPINS {
        return Err(MetricsError::TooLarge { n, max: MAX_EXACT_SPINS });
    }
    let symmetric = !problem.has_fields() && n >= 2;
    let free = if symmetric { n - 1 } else { n };
    let shard_bits = free.saturating_sub(12).min(8);
    let low_bits = free - shard_bits;

    let best = (0..1u64 << shard_bits)
        .into_par_iter()
        .map(|shard| enumerate_shard(problem, shard << low_bits, low_bits))
        .reduce(|| Minimum::NONE, Minimum::merge);

    Ok(GroundTruth {
        energy: Energy(best.energy),
        degeneracy: if symmetric { 2 * best.count } else { best.count },
        source: GroundSource::Exact,
    })
}

fn enumerate_shard(problem: &IsingProblem, prefix: u64, low_bits: usize) -> Minimum {
    let n = problem.n();
    let start = SpinConfig::from_bits(n, prefix);
    let mut spins: Vec<f64> = start.iter().map(|&v| f64::from(v)).collect();
    let mut fields = vec![0.0; n];
    problem.mean_field_into(&spins, &mut fields);
    let mut energy = problem.energy(&start).expect("length matches").value();

    let mut best = Minimum::NONE;
    best.observe(energy, 1);
    for g in 1..1u64 << low_bits {
        let k = g.trailing_zeros() as usize;
        let sk = spins[k];
        energy -= 2.0 * sk * fields[k];
        for (j, w) in problem.row(k) {
            fields[j] -= 2.0 * w * sk;
        }
        spins[k] = -sk;
        best.observe(energy, 1);
    }
    best
}

/// Fraction of runs whose energy is within [`ENERGY_TOLERANCE`] of (or below)
/// the reference energy.
pub fn success_probability(results: &[RunResult], ground: &GroundTruth) -> Result<f64, MetricsError> {
    let energies: Vec<Energy> = results.iter().map(|r| r.final_energy).collect();
    success_fraction(&energies, ground.energy)
}

pub fn success_fraction(energies: &[Energy], target: Energy) -> Result<f64, MetricsError> {
    if energies.is_empty() {
        return Err(MetricsError::Empty);
    }
    let hits = energies
        .iter()
        .filter(|e| e.0 <= target.0 + ENERGY_TOLERANCE)
        .count();
    Ok(hits as f64 / energies.len() as f64)
}

/// Expected time to see the target at least once with the given confidence,
/// `tau * ln(1 - confidence) / ln(1 - p)`.
///
/// Returns `tau` when a single run already meets the confidence and
/// infinity when `p = 0`.
pub fn time_to_solution(p: f64, tau: f64, confidence: f64) -> Result<f64, MetricsError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(MetricsError::Probability(p));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(MetricsError::Tau(tau));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(MetricsError::Confidence(confidence));
    }
    if p == 0.0 {
        Ok(f64::INFINITY)
    } else if p >= confidence {
        Ok(tau)
    } else {
        Ok(tau * (-confidence).ln_1p() / (-p).ln_1p())
    }
}

/// Median and interquartile range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

/// Percentile `q` in `[0, 1]` of sorted values, interpolating linearly
/// between closest ranks. Infinite values are allowed.
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let (a, b) = (sorted[lo], sorted[hi]);
    let frac = pos - lo as f64;
    if frac == 0.0 || a == b {
        a
    } else if b.is_infinite() {
        b
    } else {
        a + (b - a) * frac
    }
}

pub fn summarize(values: &[f64]) -> Result<Summary, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(Summary {
        median: percentile_sorted(&sorted, 0.5),
        q25: percentile_sorted(&sorted, 0.25),
        q75: percentile_sorted(&sorted, 0.75),
    })
}

/// Benchmark outcome for a single instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceStats {
    pub p_success: f64,
    /// Time to solution measured in runs (`tau = 1`).
    pub tts_runs: f64,
    /// Time to solution in seconds, when a per-run time was measured.
    pub tts_seconds: Option<f64>,
    pub mean_energy: f64,
    pub best_energy: f64,
}

impl InstanceStats {
    pub fn from_results(
        results: &[RunResult],
        ground: &GroundTruth,
        tau_seconds: Option<f64>,
    ) -> Result<Self, MetricsError> {
        let p = success_probability(results, ground)?;
        let energies = results.iter().map(|r| r.final_energy.0);
        let mean_energy = energies.clone().sum::<f64>() / results.len() as f64;
        let best_energy = energies.fold(f64::INFINITY, f64::min);
        Ok(InstanceStats {
            p_success: p,
            tts_runs: time_to_solution(p, 1.0, DEFAULT_CONFIDENCE)?,
            tts_seconds: tau_seconds
                .map(|tau| time_to_solution(p, tau, DEFAULT_CONFIDENCE))
                .transpose()?,
            mean_energy,
            best_energy,
        })
    }
}

/// Across-instance summary for one problem size.
#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub instances: usize,
    pub p_success: Summary,
    pub tts_runs: Summary,
    /// Present only when every instance has a measured time.
    pub tts_seconds: Option<Summary>,
    pub mean_energy: f64,
    pub best_energy: f64,
}

pub fn aggregate(stats: &[InstanceStats]) -> Result<RunStats, MetricsError> {
    if stats.is_empty() {
        return Err(MetricsError::Empty);
    }
    let collect = |f: fn(&InstanceStats) -> f64| stats.iter().map(f).collect::<Vec<_>>();
    let seconds: Option<Vec<f64>> = stats.iter().map(|s| s.tts_seconds).collect();
    Ok(RunStats {
        instances: stats.len(),
        p_success: summarize(&collect(|s| s.p_success))?,
        tts_runs: summarize(&collect(|s| s.tts_runs))?,
        tts_seconds: seconds.as_deref().map(summarize).transpose()?,
        mean_energy: collect(|s| s.mean_energy).iter().sum::<f64>() / stats.len() as f64,
        best_energy: collect(|s| s.best_energy).into_iter().fold(f64::INFINITY, f64::min),
    })
}
