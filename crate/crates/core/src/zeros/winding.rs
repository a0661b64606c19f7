//! Zero counts in disks by the argument principle.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{dyadic_root_of_unity, log2_abs, to_f64, Cplx, Real};
use crate::series::{Analytic, EvalOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourPolicy {
    /// Minimum number of samples on the first pass.
    pub initial_samples: usize,
    /// Expected oscillation count; the first pass uses at least `8 j` samples.
    pub oscillations: usize,
    pub max_samples: usize,
    pub rel_tol: f64,
}

impl Default for ContourPolicy {
    fn default() -> Self {
        Self { initial_samples: 64, oscillations: 0, max_samples: 1 << 16, rel_tol: 1e-30 }
    }
}

impl ContourPolicy {
    pub fn for_disk(j: usize) -> Self {
        Self { oscillations: j, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskCount {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub radius: f64,
    pub count: usize,
    /// Accumulated phase divided by `2 pi`, before rounding.
    pub winding: f64,
    pub residual: f64,
    /// `log2` of the smallest sampled `|f|`.
    pub log2_min_modulus: f64,
    /// `log2` of the evaluation error bound on the contour.
    pub log2_error_bound: f64,
    pub samples: usize,
}

fn wrap(d: f64) -> f64 {
    let mut d = d % TAU;
    if d > PI {
        d -= TAU;
    } else if d <= -PI {
        d += TAU;
    }
    d
}

/// Number of zeros of `f` in `|z| < radius`, counted with multiplicity.
///
/// Samples sit at `radius` times the `2^L`-th roots of unity. The sample
/// count doubles until every phase step between neighbours is below `pi/2`.
pub fn count_zeros_disk<A: Analytic>(f: &A, radius: &Real, policy: &ContourPolicy) -> Result<DiskCount> {
    let prec = f.precision();
    if radius <= &prec.zero() {
        return Err(Error::domain("radius", "must be positive"));
    }
    let plan = f.plan(radius, &EvalOptions::with_rel_tol(policy.rel_tol))?;
    let bound = plan.error_bound();
    let log2_bound = log2_abs(&bound);
    let first = policy.initial_samples.max(8 * policy.oscillations).max(4).next_power_of_two();
    let mut level = first.trailing_zeros();

    let step = dyadic_root_of_unity(prec, level);
    let mut pts = Vec::with_capacity(first);
    let mut z = Cplx::real(radius.clone());
    for _ in 0..first {
        pts.push(z.clone());
        z = &z * &step;
    }
    let mut vals: Vec<(f64, f64)> = pts.par_iter().map(|z| sample(&plan.eval(z))).collect();
    loop {
        // log2 |f| and arg f at each point
        let min_log = vals.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
        if min_log < log2_bound + 10f64.log2() {
            return Err(Error::ContourTooClose { min_modulus: min_log.exp2(), bound: log2_bound.exp2() });
        }
        let n = vals.len();
        let deltas: Vec<f64> = (0..n).map(|i| wrap(vals[(i + 1) % n].1 - vals[i].1)).collect();
        let worst = deltas.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if worst < PI / 2.0 {
            let winding = deltas.iter().sum::<f64>() / TAU;
            let count = winding.round() + f.origin_zeros() as f64;
            let residual = (winding - winding.round()).abs();
            if residual > 1e-6 || count < 0.0 {
                return Err(Error::Inconsistent(format!("phase accumulation gave winding {winding}")));
            }
            return Ok(DiskCount {
                j: None,
                radius: to_f64(radius),
                count: count as usize,
                winding,
                residual,
                log2_min_modulus: min_log,
                log2_error_bound: log2_bound,
                samples: n,
            });
        }
        if 2 * n > policy.max_samples {
            return Err(Error::Unresolved { what: format!("phase steps on |z| = {:e} with {n} samples", to_f64(radius)), bits: prec.bits() });
        }
        level += 1;
        let half = dyadic_root_of_unity(prec, level);
        let mids: Vec<Cplx> = pts.iter().map(|z| z * &half).collect();
        let mid_vals: Vec<(f64, f64)> = mids.par_iter().map(|z| sample(&plan.eval(z))).collect();
        let mut new_pts = Vec::with_capacity(2 * n);
        let mut new_vals = Vec::with_capacity(2 * n);
        for i in 0..n {
            new_pts.push(pts[i].clone());
            new_pts.push(mids[i].clone());
            new_vals.push(vals[i]);
            new_vals.push(mid_vals[i]);
        }
        pts = new_pts;
        vals = new_vals;
    }
}

fn sample(v: &Cplx) -> (f64, f64) {
    (v.log2_abs(), v.arg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Precision;
    use crate::series::{make_family, truncate, FamilySpec, TruncationPolynomial};

    #[test]
    fn counts_inside_and_outside() {
        let p = Precision::default();
        // (z + 1)(z + 3)(z - 5)
        let poly = TruncationPolynomial::from_f64(&[-15.0, -17.0, -1.0, 1.0], p).unwrap();
        let c = |r: f64| count_zeros_disk(&poly, &p.real(r), &ContourPolicy::default()).unwrap().count;
        assert_eq!(c(0.5), 0);
        assert_eq!(c(2.0), 1);
        assert_eq!(c(4.0), 2);
        assert_eq!(c(100.0), 3);
    }

    #[test]
    fn origin_factor_is_counted() {
        let p = Precision::default();
        let poly = TruncationPolynomial::from_f64(&[0.0, 0.0, 2.0, 1.0], p).unwrap();
        assert_eq!(count_zeros_disk(&poly, &p.real(1.0), &ContourPolicy::default()).unwrap().count, 2);
    }

    #[test]
    fn zero_on_the_contour() {
        let p = Precision::default();
        let poly = TruncationPolynomial::from_f64(&[1.0, 1.0], p).unwrap();
        let err = count_zeros_disk(&poly, &p.real(1.0), &ContourPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::ContourTooClose { .. }));
    }

    #[test]
    fn truncation_of_degree_three() {
        let s = make_family(&FamilySpec::constant_quotient(4.0)).unwrap();
        let t = truncate(&s, 3).unwrap();
        let d = count_zeros_disk(&t, &t.precision().real(1000.0), &ContourPolicy::default()).unwrap();
        assert_eq!(d.count, 3);
        assert!(d.residual < 1e-12);
    }
}
