//! Noisy mean-field annealing (NMFA) for Ising and MAX-CUT problems.
//!
//! NMFA keeps one continuous spin in `[-1, 1]` per variable and repeats a
//! measure / mean-field / combine loop: the mean field on each spin is
//! normalized, perturbed with Gaussian noise, turned into a Boltzmann
//! expectation `-tanh(phi / T)` at a falling temperature, and mixed back
//! into the spin with feedback constant `alpha`.
//!
//! ```
//! use nmfa::{generate, metrics, solver::{self, NmfaParams}};
//!
//! let ladder = generate::moebius_ladder(16).unwrap();
//! let ground = metrics::brute_force_ground(&ladder).unwrap();
//! let params = NmfaParams { iterations: 100, seed: 1, ..Default::default() };
//! let runs = solver::batch(&ladder, &params, 20).unwrap();
//! let p = metrics::success_probability(&runs, &ground).unwrap();
//! assert!(p > 0.0);
//! ```

pub mod config;
pub mod error;
pub mod generate;
pub mod gset;
pub mod ising;
pub mod metrics;
pub mod schedule;
pub mod solver;

pub use error::{ConfigError, GenError, GsetError, GsetErrorKind, GsetWriteError, MetricsError, ParamError, ProblemError};
pub use ising::{Coupler, Energy, FieldVector, IsingProblem, Layout, SpinConfig, SpinVector};
pub use schedule::Schedule;
pub use solver::{NmfaParams, RunResult};
