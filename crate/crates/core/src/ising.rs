//! Ising problems and the arithmetic every solver and metric is built on.
//!
//! A problem is the energy function
//!
//! ```text
//! H(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i,    s_i in {-1, +1}
//! ```
//!
//! where each unordered pair is counted once. The mean field on spin `i` is
//! `h_i + sum_j J_ij s_j`, which is exactly `dH/ds_i` under that convention.

use std::fmt;
use std::ops::Deref;

use crate::error::ProblemError;

/// Coupler density at or above which rows are also kept as a dense matrix.
pub const DENSE_THRESHOLD: f64 = 0.5;

/// One pairwise interaction `J_ij = w` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupler {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Which kernel `mean_field` uses. Chosen from the coupler density at
/// construction; both give the same sums up to floating-point reordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Sparse,
    Dense,
}

/// An immutable Ising problem `(h, J)` on `n` spins.
#[derive(Debug, Clone)]
pub struct IsingProblem {
    h: Vec<f64>,
    couplers: Vec<Coupler>,
    // CSR rows holding both (i, j) and (j, i); columns ascend within a row.
    offsets: Vec<usize>,
    columns: Vec<usize>,
    weights: Vec<f64>,
    dense: Option<Vec<f64>>,
}

impl PartialEq for IsingProblem {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.couplers == other.couplers
    }
}

impl IsingProblem {
    /// Builds a problem from local fields and `(i, j, w)` triples. Pairs may
    /// be given in either orientation but each unordered pair only once.
    pub fn new<I>(h: Vec<f64>, couplers: I) -> Result<Self, ProblemError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let n = h.len();
        if n == 0 {
            return Err(ProblemError::Empty);
        }
        if let Some((index, &value)) = h.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(ProblemError::InvalidField { index, value });
        }
        let mut list = Vec::new();
        for (a, b, w) in couplers {
            for index in [a, b] {
                if index >= n {
                    return Err(ProblemError::IndexOutOfRange { index, n });
                }
            }
            if a == b {
                return Err(ProblemError::SelfCoupling(a));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if w == 0.0 || !w.is_finite() {
                return Err(ProblemError::InvalidWeight { i, j, w });
            }
            list.push(Coupler { i, j, w });
        }
        list.sort_unstable_by_key(|c| (c.i, c.j));
        if let Some(pair) = list.windows(2).find(|p| (p[0].i, p[0].j) == (p[1].i, p[1].j)) {
            return Err(ProblemError::DuplicateCoupler(pair[0].i, pair[0].j));
        }

        let mut degree = vec![0usize; n];
        for c in &list {
            degree[c.i] += 1;
            degree[c.j] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let nnz = *offsets.last().unwrap();
        let mut columns = vec![0; nnz];
        let mut weights = vec![0.0; nnz];
        let mut cursor = offsets[..n].to_vec();
        // Visiting couplers in (i, j) order fills every row with ascending
        // columns: row k first receives its lower neighbours (as the j side,
        // in ascending i) and then its upper neighbours.
        let mut lower: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for c in &list {
            lower[c.j].push((c.i, c.w));
        }
        for k in 0..n {
            for &(col, w) in &lower[k] {
                columns[cursor[k]] = col;
                weights[cursor[k]] = w;
                cursor[k] += 1;
            }
        }
        for c in &list {
            columns[cursor[c.i]] = c.j;
            weights[cursor[c.i]] = c.w;
            cursor[c.i] += 1;
        }

        let mut problem = IsingProblem {
            h,
            couplers: list,
            offsets,
            columns,
            weights,
            dense: None,
        };
        if problem.density() >= DENSE_THRESHOLD {
            problem = problem.with_layout(Layout::Dense);
        }
        Ok(problem)
    }

    /// A problem with `h = 0`.
    pub fn from_couplers<I>(n: usize, couplers: I) -> Result<Self, ProblemError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        Self::new(vec![0.0; n], couplers)
    }

    /// Forces a kernel layout, overriding the density rule.
    pub fn with_layout(mut self, layout: Layout) -> Self {
        match layout {
            Layout::Sparse => self.dense = None,
            Layout::Dense => {
                let n = self.n();
                let mut m = vec![0.0; n * n];
                for c in &self.couplers {
                    m[c.i * n + c.j] = c.w;
                    m[c.j * n + c.i] = c.w;
                }
                self.dense = Some(m);
            }
        }
        self
    }

    pub fn layout(&self) -> Layout {
        if self.dense.is_some() {
            Layout::Dense
        } else {
            Layout::Sparse
        }
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Couplers sorted by `(i, j)`.
    pub fn couplers(&self) -> &[Coupler] {
        &self.couplers
    }

    pub fn has_fields(&self) -> bool {
        self.h.iter().any(|&v| v != 0.0)
    }

    /// Fraction of the `n(n-1)/2` possible pairs that carry a coupler.
    pub fn density(&self) -> f64 {
        let n = self.n();
        if n < 2 {
            return 0.0;
        }
        self.couplers.len() as f64 / (n * (n - 1) / 2) as f64
    }

    /// Neighbours of spin `i` as `(j, J_ij)` with ascending `j`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.columns[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Sum of all coupler weights.
    pub fn total_weight(&self) -> f64 {
        self.couplers.iter().map(|c| c.w).sum()
    }

    /// Evaluates `H` on a discrete configuration.
    pub fn energy(&self, config: &SpinConfig) -> Result<Energy, ProblemError> {
        self.check_len(config.len())?;
        let s = config.as_slice();
        let pair: f64 = self
            .couplers
            .iter()
            .map(|c| c.w * f64::from(s[c.i] * s[c.j]))
            .sum();
        let field: f64 = self.h.iter().zip(s).map(|(h, &x)| h * f64::from(x)).sum();
        Ok(Energy(pair + field))
    }

    /// MAX-CUT value `sum_(i,j) w (1 - s_i s_j) / 2` of a configuration.
    pub fn cut_value(&self, config: &SpinConfig) -> Result<f64, ProblemError> {
        if self.has_fields() {
            return Err(ProblemError::NonzeroField);
        }
        self.check_len(config.len())?;
        let s = config.as_slice();
        Ok(self
            .couplers
            .iter()
            .filter(|c| s[c.i] != s[c.j])
            .map(|c| c.w)
            .sum())
    }

    /// Raw mean field `h_i + sum_j J_ij s_j`, without normalization or noise.
    pub fn mean_field(&self, s: &SpinVector) -> Result<FieldVector, ProblemError> {
        self.check_len(s.len())?;
        let mut phi = vec![0.0; self.n()];
        self.mean_field_into(s, &mut phi);
        Ok(FieldVector(phi))
    }

    /// Writes the raw mean field of `s` into `out`. Both slices must have
    /// length `n`; this is the allocation-free kernel behind the solver.
    pub fn mean_field_into(&self, s: &[f64], out: &mut [f64]) {
        let n = self.n();
        assert_eq!(s.len(), n);
        assert_eq!(out.len(), n);
        match &self.dense {
            Some(m) => {
                for (i, (phi, row)) in out.iter_mut().zip(m.chunks_exact(n)).enumerate() {
                    *phi = self.h[i] + dot(row, s);
                }
            }
            None => {
                for (i, phi) in out.iter_mut().enumerate() {
                    let range = self.offsets[i]..self.offsets[i + 1];
                    let sum: f64 = self.columns[range.clone()]
                        .iter()
                        .zip(&self.weights[range])
                        .map(|(&j, &w)| w * s[j])
                        .sum();
                    *phi = self.h[i] + sum;
                }
            }
        }
    }

    /// Per-spin scale `sqrt(h_i^2 + sum_j J_ij^2)`. Isolated field-free spins
    /// get 0.
    pub fn normalizers(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| {
                let sq: f64 = self.row(i).map(|(_, w)| w * w).sum();
                (self.h[i] * self.h[i] + sq).sqrt()
            })
            .collect()
    }

    /// The same problem with spins relabelled: old spin `i` becomes
    /// `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, ProblemError> {
        self.check_len(perm.len())?;
        let mut h = vec![0.0; self.n()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= self.n() {
                return Err(ProblemError::IndexOutOfRange { index: p, n: self.n() });
            }
            h[p] = self.h[i];
        }
        let problem = Self::new(h, self.couplers.iter().map(|c| (perm[c.i], perm[c.j], c.w)))?;
        Ok(problem.with_layout(self.layout()))
    }

    fn check_len(&self, actual: usize) -> Result<(), ProblemError> {
        if actual == self.n() {
            Ok(())
        } else {
            Err(ProblemError::Dimension { expected: self.n(), actual })
        }
    }
}

// Four independent accumulators let the compiler vectorize the dense rows.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let (a4, a_tail) = a.split_at(a.len() / 4 * 4);
    let (b4, b_tail) = b.split_at(a4.len());
    for (x, y) in a4.chunks_exact(4).zip(b4.chunks_exact(4)) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in a_tail.iter().zip(b_tail) {
        sum += x * y;
    }
    sum
}

/// Continuous analog spins, each in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinVector(Vec<f64>);

impl SpinVector {
    pub fn new(values: Vec<f64>) -> Result<Self, ProblemError> {
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(-1.0..=1.0).contains(*v))
        {
            return Err(ProblemError::SpinOutOfRange { index, value });
        }
        Ok(SpinVector(values))
    }

    pub fn zeros(n: usize) -> Self {
        SpinVector(vec![0.0; n])
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| (-1.0..=1.0).contains(v)));
        SpinVector(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Rounds each spin to its sign; exact zeros go to `+1`.
    pub fn sign_round(&self) -> SpinConfig {
        SpinConfig(self.0.iter().map(|&v| if v < 0.0 { -1 } else { 1 }).collect())
    }
}

impl Deref for SpinVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A discrete configuration over `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self, ProblemError> {
        if let Some((index, &value)) = spins.iter().enumerate().find(|(_, v)| v.abs() != 1) {
            return Err(ProblemError::NotIsingSpin { index, value });
        }
        Ok(SpinConfig(spins))
    }

    pub fn all_up(n: usize) -> Self {
        SpinConfig(vec![1; n])
    }

    /// Configuration whose spin `i` is `-1` exactly when bit `i` of `bits`
    /// is set.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        SpinConfig((0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn flipped(&self) -> Self {
        SpinConfig(self.0.iter().map(|&v| -v).collect())
    }

    pub fn to_analog(&self) -> SpinVector {
        SpinVector(self.0.iter().map(|&v| f64::from(v)).collect())
    }
}

impl Deref for SpinConfig {
    type Target = [i8];
    fn deref(&self) -> &[i8] {
        &self.0
    }
}

/// Dimensionless Ising energy `H`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Energy(pub f64);

impl Energy {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Mean-field values `Phi_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldVector(pub Vec<f64>);

impl Deref for FieldVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}
