//! The self-reciprocal quartic of the disk-count comparison.

use serde::Serialize;

use super::winding::{count_zeros_disk, ContourPolicy};
use crate::criteria::HYPOTHESIS_TOL;
use crate::error::{Error, Result};
use crate::real::{to_f64, Precision, Real, SquareRoot};
use crate::series::{TruncationPolynomial, CUBE_ROOT_REGIME};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuarticCheck {
    pub q_j: f64,
    pub q_j1: f64,
    /// Zeros of `1 - s w + q_j q_{j+1} w^2 - s w^3 + w^4` in `|w| < 1`, `s = q_j sqrt(q_{j+1})`.
    pub unit_disk_count: usize,
    /// Zeros on `|w| = 1`, two for each root of the quadratic in `[-1, 1]`.
    pub circle_zeros: usize,
    /// `None` when zeros on the circle rule out the argument principle.
    pub winding_residual: Option<f64>,
    /// Vertex `s/4` of `4t^2 - 2 s t + (q_j q_{j+1} - 2)`.
    pub vertex: f64,
    pub argmin: f64,
    pub min_on_interval: f64,
    /// `2 - 2s + q_j q_{j+1}`.
    pub value_at_one: f64,
}

/// Roots of the quadratic `4t^2 - 2 s t + (qq - 2)` inside `[-1, 1]`, with multiplicity.
fn roots_on_interval(s: &Real, qq: &Real, prec: Precision) -> usize {
    let disc = s * s - prec.int(4) * (qq - prec.int(2));
    if disc < Real::ZERO {
        return 0;
    }
    let r = disc.sqrt();
    let one = prec.one();
    [(s - &r) * prec.ratio(1, 4), (s + &r) * prec.ratio(1, 4)].iter().filter(|t| **t >= -one.clone() && **t <= one).count()
}

fn psi(t: &Real, s: &Real, qq: &Real, prec: Precision) -> Real {
    prec.int(4) * t * t - prec.int(2) * s * t + (qq - prec.int(2))
}

/// Unit-disk zero count of the quartic and the minimum of its companion
/// quadratic over `[-1, 1]`.
pub fn quartic_unit_disk_count(q_j: f64, q_j1: f64) -> Result<QuarticCheck> {
    for (field, q) in [("q_j", q_j), ("q_j1", q_j1)] {
        if !(q >= CUBE_ROOT_REGIME * (1.0 - HYPOTHESIS_TOL)) {
            return Err(Error::domain(field, format!("{q} is below 2*2^(1/3)")));
        }
    }
    let prec = Precision::default();
    let (a, b) = (prec.real(q_j), prec.real(q_j1));
    let s = &a * b.sqrt();
    let qq = &a * &b;
    let one = prec.one();
    let vertex = &s * prec.ratio(1, 4);
    let argmin = if vertex > one {
        one.clone()
    } else if vertex < -one.clone() {
        -one.clone()
    } else {
        vertex.clone()
    };
    let min = psi(&argmin, &s, &qq, prec);
    let at_one = psi(&one, &s, &qq, prec);
    // w + 1/w = 2t: a root t off [-1, 1] puts one zero inside the disk and one
    // outside, a root on [-1, 1] puts both on the circle
    let on_interval = roots_on_interval(&s, &qq, prec);
    let reduced = 2 - on_interval;
    let mut winding_residual = None;
    if min > Real::ZERO {
        let poly = TruncationPolynomial::from_coeffs(vec![one.clone(), -s.clone(), qq.clone(), -s.clone(), one.clone()], prec)?;
        let count = count_zeros_disk(&poly, &one, &ContourPolicy::default())?;
        if count.count != reduced {
            return Err(Error::Inconsistent(format!(
                "quartic for q_j = {q_j}, q_j1 = {q_j1}: winding gives {} zeros in |w| < 1, the reciprocal reduction {reduced}",
                count.count
            )));
        }
        winding_residual = Some(count.residual);
    }
    Ok(QuarticCheck {
        q_j,
        q_j1,
        unit_disk_count: reduced,
        circle_zeros: 2 * on_interval,
        winding_residual,
        vertex: to_f64(&vertex),
        argmin: to_f64(&argmin),
        min_on_interval: to_f64(&min),
        value_at_one: to_f64(&at_one),
    })
}
