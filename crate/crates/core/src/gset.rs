//! G-set text format and the per-run results CSV.
//!
//! A G-set file is a header line `n_vertices n_edges` followed by one
//! `u v w` line per edge with 1-based vertex indices. Blank lines and lines
//! starting with `#` or `c` are skipped on input. Output is canonical: edges
//! sorted by `(u, v)` with `u < v`, single spaces, integer weights, and a
//! trailing newline.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Duration;

use crate::error::{GsetError, GsetErrorKind, GsetWriteError};
use crate::ising::IsingProblem;
use crate::solver::RunResult;

fn err(line: usize, kind: GsetErrorKind) -> GsetError {
    GsetError { line, kind }
}

/// Parses raw bytes, rejecting invalid UTF-8 instead of panicking.
pub fn parse_bytes(bytes: &[u8]) -> Result<IsingProblem, GsetError> {
    let text = std::str::from_utf8(bytes).map_err(|_| err(1, GsetErrorKind::Encoding))?;
    parse(text)
}

pub fn parse(text: &str) -> Result<IsingProblem, GsetError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !(l.is_empty() || l.starts_with('#') || l.starts_with('c')));

    let (header_line, header) = lines.next().ok_or(err(1, GsetErrorKind::MissingHeader))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(err(header_line, GsetErrorKind::BadHeader));
    }
    let n = parse_count(fields[0], header_line)?;
    let declared = parse_count(fields[1], header_line)?;
    if n == 0 {
        return Err(err(header_line, GsetErrorKind::BadHeader));
    }

    let mut seen = HashSet::with_capacity(declared.min(1 << 24));
    let mut edges = Vec::with_capacity(declared.min(1 << 24));
    let mut last_line = header_line;
    for (line, text) in lines {
        last_line = line;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(line, GsetErrorKind::FieldCount { expected: 3, found: fields.len() }));
        }
        let u = parse_count(fields[0], line)?;
        let v = parse_count(fields[1], line)?;
        let w: f64 = fields[2]
            .parse()
            .map_err(|_| err(line, GsetErrorKind::NotANumber(fields[2].to_string())))?;
        for vertex in [u, v] {
            if vertex == 0 || vertex > n {
                return Err(err(line, GsetErrorKind::VertexOutOfRange { vertex, n }));
            }
        }
        if u == v {
            return Err(err(line, GsetErrorKind::SelfLoop(u)));
        }
        if w == 0.0 || !w.is_finite() {
            return Err(err(line, GsetErrorKind::BadWeight));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(line, GsetErrorKind::DuplicateEdge(u, v)));
        }
        edges.push((u - 1, v - 1, w));
    }
    if edges.len() != declared {
        return Err(err(
            last_line,
            GsetErrorKind::EdgeCount { declared, found: edges.len() },
        ));
    }
    Ok(IsingProblem::from_couplers(n, edges).expect("edges validated above"))
}

fn parse_count(token: &str, line: usize) -> Result<usize, GsetError> {
    token
        .parse()
        .map_err(|_| err(line, GsetErrorKind::NotANumber(token.to_string())))
}

pub fn write(problem: &IsingProblem) -> Result<String, GsetWriteError> {
    if problem.has_fields() {
        return Err(GsetWriteError::NonzeroField);
    }
    let mut out = String::with_capacity(16 * (problem.couplers().len() + 1));
    writeln!(out, "{} {}", problem.n(), problem.couplers().len()).unwrap();
    for c in problem.couplers() {
        if c.w.fract() != 0.0 || c.w.abs() > 9.007_199_254_740_992e15 {
            return Err(GsetWriteError::NonIntegerWeight { i: c.i, j: c.j, w: c.w });
        }
        writeln!(out, "{} {} {}", c.i + 1, c.j + 1, c.w as i64).unwrap();
    }
    Ok(out)
}

/// Column order of [`write_results_csv`].
pub const RESULTS_HEADER: [&str; 5] = ["instance_id", "seed", "final_energy", "cut_value", "wall_clock_us"];

/// Identifies the instance and optionally carries per-run timings.
#[derive(Debug, Clone, Default)]
pub struct ResultsMeta<'a> {
    pub instance_id: &'a str,
    /// When present, one entry per result; otherwise the timing column is
    /// left empty and the file depends only on the seeds.
    pub run_times: Option<&'a [Duration]>,
}

/// One row per run. `cut_value` is empty for problems with local fields.
pub fn write_results_csv(problem: &IsingProblem, results: &[RunResult], meta: &ResultsMeta) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER).unwrap();
    for (k, r) in results.iter().enumerate() {
        let cut = problem
            .cut_value(&r.final_config)
            .map(|c| c.to_string())
            .unwrap_or_default();
        let time = meta
            .run_times
            .and_then(|t| t.get(k))
            .map(|d| format!("{:.3}", d.as_secs_f64() * 1e6))
            .unwrap_or_default();
        w.write_record([
            meta.instance_id.to_string(),
            r.seed.to_string(),
            r.final_energy.to_string(),
            cut,
            time,
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}
