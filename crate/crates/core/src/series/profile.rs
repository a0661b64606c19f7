//! First and second quotients over a finite index range.

use serde::Serialize;

use super::sequence::CoefficientSequence;
use crate::error::{Error, Result};
use crate::real::{to_f64, Precision, Real};

/// `2 * 2^{1/3}`, the lower end of the disk-count regime.
pub const CUBE_ROOT_REGIME: f64 = 2.519_842_099_789_746_3;

/// Relative tolerance for monotonicity comparisons.
pub const MONOTONE_TOL: f64 = 1e-14;

/// Which thresholds hold for every computed quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    pub all_at_least_3: bool,
    pub all_at_least_cube_root_regime: bool,
    pub all_at_least_4: bool,
}

/// `p_1..p_{n_max}` and `q_2..q_{n_max}`.
#[derive(Clone, Debug)]
pub struct QuotientProfile {
    p: Vec<Real>,
    q: Vec<Real>,
    pub monotone_nondecreasing: bool,
    /// `(n, q_n)` of the smallest quotient, earliest index on ties.
    pub min_q: (usize, f64),
    pub max_q: (usize, f64),
    pub thresholds: Thresholds,
    pub precision: Precision,
}

fn all_at_least(q: &[f64], t: f64, tol: f64) -> bool {
    q.iter().all(|&x| x >= t * (1.0 - tol))
}

/// Quotient profile of `seq` through `n_max`.
pub fn quotients(seq: &CoefficientSequence, n_max: usize) -> Result<QuotientProfile> {
    if n_max < 2 {
        return Err(Error::domain("n_max", "must be at least 2"));
    }
    let p = seq.p_values(n_max)?;
    let q: Vec<Real> = (2..=n_max).map(|n| seq.q(n)).collect::<Result<_>>()?;
    let qf: Vec<f64> = q.iter().map(to_f64).collect();
    let monotone_nondecreasing = qf.windows(2).all(|w| w[1] >= w[0] * (1.0 - MONOTONE_TOL));
    let mut min_q = (2, qf[0]);
    let mut max_q = (2, qf[0]);
    for (i, &x) in qf.iter().enumerate() {
        if x < min_q.1 {
            min_q = (i + 2, x);
        }
        if x > max_q.1 {
            max_q = (i + 2, x);
        }
    }
    let tol = 1e-12;
    let thresholds = Thresholds {
        all_at_least_3: all_at_least(&qf, 3.0, tol),
        all_at_least_cube_root_regime: all_at_least(&qf, CUBE_ROOT_REGIME, tol),
        all_at_least_4: all_at_least(&qf, 4.0, tol),
    };
    Ok(QuotientProfile { p, q, monotone_nondecreasing, min_q, max_q, thresholds, precision: seq.precision() })
}

impl QuotientProfile {
    pub fn n_max(&self) -> usize {
        self.p.len()
    }

    fn range(&self, n: usize, lo: usize) -> Result<usize> {
        if n < lo || n > self.n_max() {
            Err(Error::Range(format!("index {n} outside profile range {lo}..={}", self.n_max())))
        } else {
            Ok(n)
        }
    }

    pub fn p(&self, n: usize) -> Result<&Real> {
        Ok(&self.p[self.range(n, 1)? - 1])
    }

    pub fn q(&self, n: usize) -> Result<&Real> {
        Ok(&self.q[self.range(n, 2)? - 2])
    }

    pub fn q_f64(&self, n: usize) -> Result<f64> {
        self.q(n).map(to_f64)
    }

    /// `q_2..q_{n_max}` as `f64`.
    pub fn q_values(&self) -> Vec<f64> {
        self.q.iter().map(to_f64).collect()
    }

    pub fn p_values(&self) -> Vec<f64> {
        self.p.iter().map(to_f64).collect()
    }

    /// First `n` with `q_n < q_{n-1}` beyond tolerance.
    pub fn first_descent(&self) -> Option<usize> {
        let qf = self.q_values();
        qf.windows(2).position(|w| w[1] < w[0] * (1.0 - MONOTONE_TOL)).map(|i| i + 3)
    }
}
