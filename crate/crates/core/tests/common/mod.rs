//! Naive references used as independent oracles. Nothing here touches the
//! sparse rows, Gray-code walk, or sharding of the library.
#![allow(dead_code)]

use nmfa::IsingProblem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Full symmetric `n x n` coupling matrix built from the coupler list.
pub fn dense_matrix(p: &IsingProblem) -> Vec<Vec<f64>> {
    let n = p.n();
    let mut m = vec![vec![0.0; n]; n];
    for c in p.couplers() {
        m[c.i][c.j] = c.w;
        m[c.j][c.i] = c.w;
    }
    m
}

/// `sum_{i<j} J_ij s_i s_j + sum_i h_i s_i` by double loop over the matrix.
pub fn naive_energy(m: &[Vec<f64>], h: &[f64], s: &[f64]) -> f64 {
    let n = s.len();
    let mut e = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            e += m[i][j] * s[i] * s[j];
        }
        e += h[i] * s[i];
    }
    e
}

pub fn naive_mean_field(m: &[Vec<f64>], h: &[f64], s: &[f64]) -> Vec<f64> {
    (0..s.len())
        .map(|i| h[i] + (0..s.len()).map(|j| m[i][j] * s[j]).sum::<f64>())
        .collect()
}

/// Minimum energy and its multiplicity by evaluating every configuration
/// from scratch.
pub fn naive_ground(p: &IsingProblem) -> (f64, u64) {
    let n = p.n();
    let m = dense_matrix(p);
    let mut best = f64::INFINITY;
    let mut count = 0;
    let mut s = vec![0.0; n];
    for bits in 0u64..1 << n {
        for (i, v) in s.iter_mut().enumerate() {
            *v = if bits >> i & 1 == 1 { -1.0 } else { 1.0 };
        }
        let e = naive_energy(&m, p.h(), &s);
        if e < best - 1e-9 {
            best = e;
            count = 1;
        } else if e <= best + 1e-9 {
            count += 1;
        }
    }
    (best, count)
}

/// Random instance: integer weights in -3..=3 or real weights, optional
/// fields, random density.
pub fn random_problem(rng: &mut ChaCha8Rng, n: usize, integer: bool, fields: bool) -> IsingProblem {
    let density: f64 = rng.random_range(0.1..=1.0);
    let draw = |rng: &mut ChaCha8Rng| -> f64 {
        if integer {
            let w = rng.random_range(1..=3) as f64;
            if rng.random_bool(0.5) { w } else { -w }
        } else {
            rng.random_range(-2.0..2.0)
        }
    };
    let mut couplers = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                let w = draw(rng);
                if w != 0.0 {
                    couplers.push((i, j, w));
                }
            }
        }
    }
    let h = (0..n)
        .map(|_| if fields && rng.random_bool(0.7) { draw(rng) } else { 0.0 })
        .collect();
    IsingProblem::new(h, couplers).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_spins(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

pub fn random_config(rng: &mut ChaCha8Rng, n: usize) -> Vec<i8> {
    (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
