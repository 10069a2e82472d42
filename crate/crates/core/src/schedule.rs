//! Piecewise exponential temperature schedules.
//!
//! A schedule is a list of breakpoints `(f_k, T_k)` over the run fraction
//! `f in [0, 1]`. Between breakpoints the temperature interpolates
//! geometrically, so `log T` is piecewise linear in `f`.

use std::fmt;
use std::str::FromStr;

use crate::error::ParamError;

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    breakpoints: Vec<(f64, f64)>,
}

impl Schedule {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self, ParamError> {
        if breakpoints.len() < 2 {
            return Err(ParamError::TooFewBreakpoints(breakpoints.len()));
        }
        if breakpoints[0].0 != 0.0 || breakpoints[breakpoints.len() - 1].0 != 1.0 {
            return Err(ParamError::ScheduleEndpoints);
        }
        for (index, &(f, t)) in breakpoints.iter().enumerate() {
            if !(t > 0.0 && t.is_finite()) {
                return Err(ParamError::Temperature { index, value: t });
            }
            if index > 0 && !(f > breakpoints[index - 1].0) {
                return Err(ParamError::ScheduleOrder(index));
            }
        }
        Ok(Schedule { breakpoints })
    }

    /// Single exponential segment from `start` to `end`.
    pub fn exponential(start: f64, end: f64) -> Result<Self, ParamError> {
        Self::new(vec![(0.0, start), (1.0, end)])
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// Temperature at iteration `t` of `t_final` (1-based).
    pub fn temperature(&self, t: usize, t_final: usize) -> Result<f64, ParamError> {
        if t == 0 || t > t_final {
            return Err(ParamError::IterationOutOfRange { t, t_final });
        }
        let f = if t_final == 1 {
            0.0
        } else {
            (t - 1) as f64 / (t_final - 1) as f64
        };
        Ok(self.at_fraction(f))
    }

    /// Temperature at run fraction `f`, clamped to `[0, 1]`.
    pub fn at_fraction(&self, f: f64) -> f64 {
        let f = f.clamp(0.0, 1.0);
        let k = self
            .breakpoints
            .windows(2)
            .position(|w| f <= w[1].0)
            .unwrap_or(self.breakpoints.len() - 2);
        let (f0, t0) = self.breakpoints[k];
        let (f1, t1) = self.breakpoints[k + 1];
        if f == f0 {
            return t0;
        }
        if f == f1 {
            return t1;
        }
        t0 * (t1 / t0).powf((f - f0) / (f1 - f0))
    }

    /// All temperatures for a run of `t_final` iterations.
    pub fn temperatures(&self, t_final: usize) -> Vec<f64> {
        (1..=t_final)
            .map(|t| self.temperature(t, t_final).expect("t in range"))
            .collect()
    }
}

impl Default for Schedule {
    /// Three segments: a hot noise-dominated start, a long middle stretch,
    /// and a cold finish.
    fn default() -> Self {
        Schedule::new(vec![(0.0, 2.0), (0.25, 0.8), (0.75, 0.2), (1.0, 0.02)])
            .expect("default schedule is valid")
    }
}

/// `"f:T,f:T,..."`, the same form `FromStr` accepts.
impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (frac, temp)) in self.breakpoints.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{frac}:{temp}")?;
        }
        Ok(())
    }
}

impl FromStr for Schedule {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut points = Vec::new();
        for entry in s.split(',') {
            let entry = entry.trim();
            let bad = || ParamError::ScheduleSyntax(entry.to_string());
            let (f, t) = entry.split_once(':').ok_or_else(bad)?;
            let f: f64 = f.trim().parse().map_err(|_| bad())?;
            let t: f64 = t.trim().parse().map_err(|_| bad())?;
            points.push((f, t));
        }
        Schedule::new(points)
    }
}
