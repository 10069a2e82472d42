//! Noisy mean-field annealing.
//!
//! Analog spins start at zero. Every iteration computes, for all spins at
//! once,
//!
//! ```text
//! phi_i   = (h_i + sum_j J_ij s_j) / sqrt(h_i^2 + sum_j J_ij^2) + N(0, sigma)
//! shat_i  = -tanh(phi_i / T_t)
//! s_i    <- alpha * shat_i + (1 - alpha) * s_i
//! ```
//!
//! and the output is the sign of each spin after the last iteration. The
//! update is synchronous: no spin sees another's new value within a step.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{ParamError, ProblemError};
use crate::ising::{Energy, IsingProblem, SpinConfig, SpinVector};
use crate::schedule::Schedule;

/// Solver parameters. The defaults use `alpha = sigma = 0.15`.
#[derive(Debug, Clone, PartialEq)]
pub struct NmfaParams {
    /// Feedback constant, the weight given to the new Boltzmann estimate.
    pub alpha: f64,
    /// Standard deviation of the Gaussian noise added to the normalized field.
    pub sigma: f64,
    /// Number of iterations `t_f`.
    pub iterations: usize,
    pub schedule: Schedule,
    pub seed: u64,
}

impl Default for NmfaParams {
    fn default() -> Self {
        NmfaParams {
            alpha: 0.15,
            sigma: 0.15,
            iterations: 1000,
            schedule: Schedule::default(),
            seed: 0,
        }
    }
}

impl NmfaParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(ParamError::Alpha(self.alpha));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(ParamError::Sigma(self.sigma));
        }
        if self.iterations == 0 {
            return Err(ParamError::Iterations);
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        NmfaParams { seed, ..self.clone() }
    }
}

/// A stream of standard normal draws. Draws are handed out by spin index, so
/// implementations decide nothing about evaluation order.
pub trait NoiseSource {
    fn fill(&mut self, out: &mut [f64]);
}

/// Standard normal noise from ChaCha8 seeded with `seed_from_u64`, sampled
/// with the ziggurat method of `rand_distr::StandardNormal`.
#[derive(Debug, Clone)]
pub struct GaussianNoise {
    rng: ChaCha8Rng,
}

impl GaussianNoise {
    pub fn new(seed: u64) -> Self {
        GaussianNoise { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl NoiseSource for GaussianNoise {
    fn fill(&mut self, out: &mut [f64]) {
        for z in out {
            *z = StandardNormal.sample(&mut self.rng);
        }
    }
}

/// Negates every draw of the wrapped source.
#[derive(Debug, Clone)]
pub struct Negated<N>(pub N);

impl<N: NoiseSource> NoiseSource for Negated<N> {
    fn fill(&mut self, out: &mut [f64]) {
        self.0.fill(out);
        for z in out {
            *z = -*z;
        }
    }
}

impl<N: NoiseSource + ?Sized> NoiseSource for &mut N {
    fn fill(&mut self, out: &mut [f64]) {
        (**self).fill(out)
    }
}

/// One recorded iteration: the analog spins after the update and the energy
/// of their signs.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub spins: SpinVector,
    pub energy: Energy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_config: SpinConfig,
    pub final_energy: Energy,
    pub seed: u64,
    pub trajectory: Option<Vec<Snapshot>>,
}

/// Per-problem state reused across iterations and runs.
pub struct Annealer<'a> {
    problem: &'a IsingProblem,
    inv_norm: Vec<f64>,
}

impl<'a> Annealer<'a> {
    pub fn new(problem: &'a IsingProblem) -> Self {
        // A spin with no couplers and no field has nothing to normalize; its
        // field is then pure noise.
        let inv_norm = problem
            .normalizers()
            .into_iter()
            .map(|r| if r > 0.0 { 1.0 / r } else { 1.0 })
            .collect();
        Annealer { problem, inv_norm }
    }

    pub fn problem(&self) -> &IsingProblem {
        self.problem
    }

    /// One synchronous update of `spins` in place. `noise` holds the already
    /// scaled Gaussian term per spin and `field` is scratch space.
    pub fn step_in_place(
        &self,
        spins: &mut [f64],
        field: &mut [f64],
        noise: &[f64],
        temperature: f64,
        alpha: f64,
    ) {
        self.problem.mean_field_into(spins, field);
        for (((s, &phi), &inv), &z) in spins.iter_mut().zip(field.iter()).zip(&self.inv_norm).zip(noise) {
            let estimate = -((phi * inv + z) / temperature).tanh();
            *s = alpha * estimate + (1.0 - alpha) * *s;
        }
    }

    pub fn run<N: NoiseSource>(
        &self,
        params: &NmfaParams,
        mut noise: N,
        record_trajectory: bool,
    ) -> Result<RunResult, ParamError> {
        params.validate()?;
        let n = self.problem.n();
        let mut spins = vec![0.0; n];
        let mut field = vec![0.0; n];
        let mut draws = vec![0.0; n];
        let mut trajectory = record_trajectory.then(|| Vec::with_capacity(params.iterations));
        for t in 1..=params.iterations {
            let temperature = params.schedule.temperature(t, params.iterations)?;
            if params.sigma > 0.0 {
                noise.fill(&mut draws);
                for z in &mut draws {
                    *z *= params.sigma;
                }
            }
            self.step_in_place(&mut spins, &mut field, &draws, temperature, params.alpha);
            if let Some(traj) = trajectory.as_mut() {
                let spins = SpinVector::from_raw(spins.clone());
                let energy = self.energy_of(&spins.sign_round());
                traj.push(Snapshot { spins, energy });
            }
        }
        let final_config = SpinVector::from_raw(spins).sign_round();
        Ok(RunResult {
            final_energy: self.energy_of(&final_config),
            final_config,
            seed: params.seed,
            trajectory,
        })
    }

    fn energy_of(&self, config: &SpinConfig) -> Energy {
        self.problem.energy(config).expect("config built for this problem")
    }
}

/// One noisy mean-field update of `s` at `temperature`, drawing `n` fresh
/// normal variates from `noise`.
pub fn step<N: NoiseSource>(
    problem: &IsingProblem,
    s: &SpinVector,
    temperature: f64,
    params: &NmfaParams,
    mut noise: N,
) -> Result<SpinVector, ProblemError> {
    if s.len() != problem.n() {
        return Err(ProblemError::Dimension { expected: problem.n(), actual: s.len() });
    }
    let annealer = Annealer::new(problem);
    let mut draws = vec![0.0; s.len()];
    noise.fill(&mut draws);
    for z in &mut draws {
        *z *= params.sigma;
    }
    let mut spins = s.to_vec();
    let mut field = vec![0.0; s.len()];
    annealer.step_in_place(&mut spins, &mut field, &draws, temperature, params.alpha);
    Ok(SpinVector::from_raw(spins))
}

/// A full run seeded from `params.seed`. Deterministic in `(problem, params)`.
pub fn run(
    problem: &IsingProblem,
    params: &NmfaParams,
    record_trajectory: bool,
) -> Result<RunResult, ParamError> {
    Annealer::new(problem).run(params, GaussianNoise::new(params.seed), record_trajectory)
}

/// `n_runs` independent runs; run `k` uses seed `params.seed + k`. Runs are
/// spread over the current rayon pool and returned in run order, so the
/// output does not depend on the number of threads.
pub fn batch(problem: &IsingProblem, params: &NmfaParams, n_runs: usize) -> Result<Vec<RunResult>, ParamError> {
    Ok(batch_timed(problem, params, n_runs)?.results)
}

/// The same runs as [`batch`], one after another on the calling thread.
pub fn batch_serial(
    problem: &IsingProblem,
    params: &NmfaParams,
    n_runs: usize,
) -> Result<Vec<RunResult>, ParamError> {
    check_batch(params, n_runs)?;
    let annealer = Annealer::new(problem);
    (0..n_runs as u64)
        .map(|k| {
            let p = params.with_seed(params.seed.wrapping_add(k));
            annealer.run(&p, GaussianNoise::new(p.seed), false)
        })
        .collect()
}

/// Batch results with wall-clock measurements.
#[derive(Debug, Clone)]
pub struct TimedBatch {
    pub results: Vec<RunResult>,
    /// Wall-clock time of each run on its worker.
    pub run_times: Vec<Duration>,
    /// Wall-clock time of the whole batch.
    pub elapsed: Duration,
}

impl TimedBatch {
    /// Effective time per sample: batch wall-clock divided by the run count.
    pub fn time_per_run(&self) -> Duration {
        self.elapsed / self.results.len().max(1) as u32
    }
}

pub fn batch_timed(problem: &IsingProblem, params: &NmfaParams, n_runs: usize) -> Result<TimedBatch, ParamError> {
    check_batch(params, n_runs)?;
    let annealer = Annealer::new(problem);
    let start = Instant::now();
    let timed: Vec<(RunResult, Duration)> = (0..n_runs as u64)
        .into_par_iter()
        .map(|k| {
            let p = params.with_seed(params.seed.wrapping_add(k));
            let t0 = Instant::now();
            let result = annealer.run(&p, GaussianNoise::new(p.seed), false)?;
            Ok((result, t0.elapsed()))
        })
        .collect::<Result<_, ParamError>>()?;
    let elapsed = start.elapsed();
    let (results, run_times) = timed.into_iter().unzip();
    Ok(TimedBatch { results, run_times, elapsed })
}

fn check_batch(params: &NmfaParams, n_runs: usize) -> Result<(), ParamError> {
    params.validate()?;
    if n_runs == 0 {
        return Err(ParamError::Runs);
    }
    Ok(())
}
