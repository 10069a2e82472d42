//! Seeded instance generators for the benchmark classes.
//!
//! Every generator draws from a ChaCha8 stream seeded with `seed_from_u64`,
//! so an `(n, seed)` pair always yields the same instance.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::ising::IsingProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemClass {
    /// Complete graph with `J_ij = +-1` equiprobable.
    Sk,
    /// `J_ij = +1` independently with probability `p`.
    DenseMaxCut,
    /// Random 3-regular graph with `J_ij = +1`.
    CubicMaxCut,
    /// Even cycle plus antipodal chords.
    Moebius,
}

impl ProblemClass {
    pub fn name(self) -> &'static str {
        match self {
            ProblemClass::Sk => "sk",
            ProblemClass::DenseMaxCut => "dense",
            ProblemClass::CubicMaxCut => "cubic",
            ProblemClass::Moebius => "moebius",
        }
    }
}

impl fmt::Display for ProblemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sk" => Ok(ProblemClass::Sk),
            "dense" | "dense-maxcut" | "dense_maxcut" => Ok(ProblemClass::DenseMaxCut),
            "cubic" | "cubic-maxcut" | "cubic_maxcut" | "degree3" => Ok(ProblemClass::CubicMaxCut),
            "moebius" | "mobius" => Ok(ProblemClass::Moebius),
            other => Err(format!("unknown problem class {other:?}")),
        }
    }
}

/// Everything needed to regenerate an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub class: ProblemClass,
    pub n: usize,
    /// Edge probability; only read for [`ProblemClass::DenseMaxCut`].
    pub p: f64,
    /// Ignored for [`ProblemClass::Moebius`].
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<IsingProblem, GenError> {
        match self.class {
            ProblemClass::Sk => sk(self.n, self.seed),
            ProblemClass::DenseMaxCut => dense_maxcut(self.n, self.p, self.seed),
            ProblemClass::CubicMaxCut => cubic_maxcut(self.n, self.seed),
            ProblemClass::Moebius => moebius_ladder(self.n),
        }
    }
}

fn at_least(n: usize, min: usize) -> Result<(), GenError> {
    if n < min {
        Err(GenError::TooSmall { n, min })
    } else {
        Ok(())
    }
}

fn build(n: usize, edges: Vec<(usize, usize, f64)>) -> IsingProblem {
    IsingProblem::from_couplers(n, edges).expect("generated edges are valid")
}

/// Sherrington-Kirkpatrick instance on the complete graph.
pub fn sk(n: usize, seed: u64) -> Result<IsingProblem, GenError> {
    at_least(n, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let w = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            edges.push((i, j, w));
        }
    }
    Ok(build(n, edges))
}

/// Erdos-Renyi MAX-CUT instance with unit weights.
pub fn dense_maxcut(n: usize, p: f64, seed: u64) -> Result<IsingProblem, GenError> {
    at_least(n, 2)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(GenError::Probability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j, 1.0));
            }
        }
    }
    Ok(build(n, edges))
}

/// Random 3-regular simple graph by configuration-model pairing, restarting
/// from scratch whenever a pairing produces a self-loop or repeated edge.
pub fn cubic_maxcut(n: usize, seed: u64) -> Result<IsingProblem, GenError> {
    if n % 2 == 1 {
        return Err(GenError::OddSize(n));
    }
    at_least(n, 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v; 3]).collect();
    'attempt: loop {
        stubs.shuffle(&mut rng);
        let mut seen = HashSet::with_capacity(stubs.len() / 2);
        let mut edges = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
            edges.push((a, b, 1.0));
        }
        return Ok(build(n, edges));
    }
}

/// Möbius ladder: cycle edges `(i, i+1 mod n)` and chords `(i, i + n/2)`.
pub fn moebius_ladder(n: usize) -> Result<IsingProblem, GenError> {
    if n % 2 == 1 {
        return Err(GenError::OddSize(n));
    }
    at_least(n, 6)?;
    let cycle = (0..n).map(|i| (i, (i + 1) % n, 1.0));
    let chords = (0..n / 2).map(|i| (i, i + n / 2, 1.0));
    Ok(build(n, cycle.chain(chords).collect()))
}

/// Whether the coupling graph is connected.
pub fn is_connected(problem: &IsingProblem) -> bool {
    let n = problem.n();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for (u, _) in problem.row(v) {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                queue.push_back(u);
            }
        }
    }
    count == n
}
