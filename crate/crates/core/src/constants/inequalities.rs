//! The explicit inequalities behind the disk counts and the sign alternation.

use std::collections::BTreeMap;

use serde::Serialize;

use super::polys::{largest_real_root, NamedPolynomial};
use crate::criteria::{HYPOTHESIS_TOL, QUOTIENT_THRESHOLD, RATIO_THRESHOLD};
use crate::error::{Error, Result};
use crate::real::{to_f64, Precision, Real, SquareRoot};
use crate::series::{CoefficientSequence, CUBE_ROOT_REGIME};

/// Relative slack for `holds`.
pub const INEQUALITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub name: String,
    /// Quotients the inequality was evaluated at, in window order.
    pub point: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub margin: f64,
    pub holds: bool,
    /// The window satisfies the inequality's stated hypotheses.
    pub in_regime: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<u8>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
}

impl InequalityReport {
    fn new(name: impl Into<String>, point: &[f64], lhs: &Real, rhs: &Real, in_regime: bool) -> Self {
        let (l, r) = (to_f64(lhs), to_f64(rhs));
        let margin = to_f64(&(lhs - rhs));
        let scale = l.abs().max(r.abs()).max(1.0);
        Self {
            name: name.into(),
            point: point.to_vec(),
            lhs: l,
            rhs: r,
            margin,
            holds: margin >= -INEQUALITY_TOL * scale,
            in_regime,
            branches: Vec::new(),
            values: BTreeMap::new(),
        }
    }
}

fn reals(window: &[f64], expected: usize, field: &str, prec: Precision) -> Result<Vec<Real>> {
    if window.len() != expected {
        return Err(Error::domain(field, format!("expected {expected} quotients, got {}", window.len())));
    }
    if let Some(i) = window.iter().position(|q| !(*q > 0.0) || !q.is_finite()) {
        return Err(Error::domain(format!("{field}[{i}]"), "quotients must be positive and finite"));
    }
    Ok(window.iter().map(|&q| prec.real(q)).collect())
}

fn nondecreasing(w: &[f64]) -> bool {
    w.windows(2).all(|p| p[1] >= p[0] * (1.0 - HYPOTHESIS_TOL))
}

fn at_least(w: &[f64], floor: f64) -> bool {
    w.iter().all(|&q| q >= floor * (1.0 - HYPOTHESIS_TOL))
}

/// The disk-count comparison at index `j`, from the window `q_{j-2}, ..., q_{j+4}`.
///
/// `lhs = q_{j-1} q_j sqrt(q_{j+1}) (2 - 2 q_j sqrt(q_{j+1}) + q_j q_{j+1})`,
/// `rhs = 1/(1 - 1/(q_{j-2} q_{j-1} q_j sqrt(q_{j+1})))
///      + q_{j-1} q_j^2 / (q_{j+2}^2 q_{j+3}) / (1 - 1/(sqrt(q_{j+1}) q_{j+2} q_{j+3} q_{j+4}))
///      + q_{j-1} q_j sqrt(q_{j+1}) (1 - q_j / q_{j+2})`.
pub fn check_estqq(window: &[f64]) -> Result<InequalityReport> {
    let prec = Precision::default();
    let q = reals(window, 7, "window", prec)?;
    let (qm2, qm1, q0, q1, q2, q3, q4) = (&q[0], &q[1], &q[2], &q[3], &q[4], &q[5], &q[6]);
    let one = prec.one();
    let s1 = q1.clone().sqrt();
    let a = qm1 * q0 * &s1;
    let lhs = &a * (prec.int(2) - prec.int(2) * q0 * &s1 + q0 * q1);
    let d1 = &one - &one / (qm2 * &a);
    let d2 = &one - &one / (&s1 * q2 * q3 * q4);
    for (name, d) in [("1 - 1/(q_{j-2} q_{j-1} q_j sqrt(q_{j+1}))", &d1), ("1 - 1/(sqrt(q_{j+1}) q_{j+2} q_{j+3} q_{j+4})", &d2)] {
        if *d <= Real::ZERO {
            return Err(Error::domain("window", format!("denominator {name} is not positive")));
        }
    }
    let rhs = &one / &d1 + qm1 * q0 * q0 / (q2 * q2 * q3) / &d2 + &a * (&one - q0 / q2);
    let regime = at_least(window, CUBE_ROOT_REGIME) && nondecreasing(window);
    Ok(InequalityReport::new("estqq", window, &lhs, &rhs, regime))
}

/// `nu_k` at the window `q_{k-1}, ..., q_{k+3}` with the applicable case branches:
/// 1 when `q_{k+1} >= 4`; 2 when `q_{k+1} < 4` and either `q_{k+2} < 4` or
/// `q_k / q_{k+2} >= 0.525`; 3 when `q_{k+1} < 4 <= q_{k+2}` and `q_{k+1} >= 3.4303`.
pub fn check_nu_k(window: &[f64]) -> Result<InequalityReport> {
    let prec = Precision::default();
    let q = reals(window, 5, "window", prec)?;
    let (qm1, q0, q1, q2, q3) = (&q[0], &q[1], &q[2], &q[3], &q[4]);
    let s1 = q1.clone().sqrt();
    let b = qm1 * q0 * q0;
    let nu = -prec.one() + qm1 * q0 * &s1 - prec.int(2) * &b * q1 + &b * q1 * &s1 + &b * &s1 / q2 - &b / (q2 * q2 * q3);
    let regime = nondecreasing(window) && at_least(&window[..1], 3.0);
    let mut r = InequalityReport::new("nu_k", window, &nu, &prec.zero(), regime);
    let (w0, w1, w2) = (window[1], window[2], window[3]);
    let ge = |x: f64, t: f64| x >= t * (1.0 - HYPOTHESIS_TOL);
    if ge(w1, 4.0) {
        r.branches.push(1);
    } else {
        if !ge(w2, 4.0) || ge(w0 / w2, RATIO_THRESHOLD) {
            r.branches.push(2);
        }
        if ge(w2, 4.0) && ge(w1, QUOTIENT_THRESHOLD) {
            r.branches.push(3);
        }
    }
    r.values.insert("ratio_k_k2".into(), w0 / w2);
    Ok(r)
}

/// `psi(t) = 4t^2 - 2 q_j sqrt(q_{j+1}) t + (q_j q_{j+1} - 2)`: vertex `t_j >= 1`
/// and `psi(1) > 0`, so `psi > 0` on `[-1, 1]`.
pub fn check_psi_positive(q_j: f64, q_j1: f64) -> Result<InequalityReport> {
    let prec = Precision::default();
    let q = reals(&[q_j, q_j1], 2, "q", prec)?;
    let s = &q[0] * q[1].clone().sqrt();
    let at_one = prec.int(2) - prec.int(2) * &s + &q[0] * &q[1];
    let vertex = &s * prec.ratio(1, 4);
    let regime = at_least(&[q_j, q_j1], CUBE_ROOT_REGIME) && nondecreasing(&[q_j, q_j1]);
    let mut r = InequalityReport::new("psi_positive", &[q_j, q_j1], &at_one, &prec.zero(), regime);
    let vertex_ok = to_f64(&vertex) >= 1.0 - INEQUALITY_TOL;
    r.holds = r.margin > 0.0 && vertex_ok;
    r.values.insert("vertex".into(), to_f64(&vertex));
    r.values.insert("min_value".into(), r.lhs);
    Ok(r)
}

/// Threshold on the quotient limit above which the limiting disk-count
/// inequality holds: the square of the largest real root of the degree-11 reduction.
pub fn limit_threshold() -> f64 {
    let b = largest_real_root(NamedPolynomial::Deg11).largest_root.expect("the degree-11 reduction has a real root");
    b * b
}

/// `2 - 2a sqrt(a) + a^2 - 2a / (a^3 sqrt(a) - 1)`: the margin of the limiting form.
pub fn limit_margin(a: f64) -> f64 {
    let s = a.sqrt();
    2.0 - 2.0 * a * s + a * a - 2.0 * a / (a * a * a * s - 1.0)
}

/// Every inequality along a family's quotient sequence for `j` in `j_lo..=j_hi`.
pub fn verify_family(seq: &CoefficientSequence, j_lo: usize, j_hi: usize) -> Result<Vec<InequalityReport>> {
    if j_lo < 4 || j_lo > j_hi {
        return Err(Error::domain("j_range", format!("need 4 <= j_lo <= j_hi, got {j_lo}..{j_hi}")));
    }
    let q = |n: usize| seq.q(n).map(|x| to_f64(&x));
    let mut out = Vec::new();
    for j in j_lo..=j_hi {
        let w: Vec<f64> = (j - 2..=j + 4).map(q).collect::<Result<_>>()?;
        let mut r = check_estqq(&w)?;
        r.name = format!("estqq[j={j}]");
        out.push(r);
        let w: Vec<f64> = (j - 1..=j + 3).map(q).collect::<Result<_>>()?;
        let mut r = check_nu_k(&w)?;
        r.name = format!("nu_k[k={j}]");
        out.push(r);
        let mut r = check_psi_positive(q(j)?, q(j + 1)?)?;
        r.name = format!("psi_positive[j={j}]");
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estqq_constant_four() {
        let r = check_estqq(&[4.0; 7]).unwrap();
        assert!(r.holds && r.margin > 0.0 && r.in_regime);
        // a = 4: lhs = 32 * (2 - 16 + 16) = 64, rhs = 2/(1 - 1/128) + 0
        assert!((r.lhs - 64.0).abs() < 1e-12);
        assert!((r.rhs - 256.0 / 127.0).abs() < 1e-12);
    }

    #[test]
    fn psi_examples() {
        let r = check_psi_positive(3.0, 3.0).unwrap();
        assert!((r.lhs - (11.0 - 6.0 * 3f64.sqrt())).abs() < 1e-14);
        assert!(r.holds);
        let r = check_psi_positive(CUBE_ROOT_REGIME, CUBE_ROOT_REGIME).unwrap();
        assert!((r.values["vertex"] - 1.0).abs() < 1e-15);
        assert!(r.holds);
        // a decreasing pair is outside the regime and can fail
        let r = check_psi_positive(9.0, 3.0).unwrap();
        assert!(!r.in_regime && !r.holds);
    }

    #[test]
    fn nu_k_branches() {
        assert_eq!(check_nu_k(&[4.0; 5]).unwrap().branches, vec![1]);
        let r = check_nu_k(&[3.0; 5]).unwrap();
        assert_eq!(r.branches, vec![2]);
        assert!(r.holds);
        let r = check_nu_k(&[3.44, 3.44, 3.44, 4.5, 4.5]).unwrap();
        assert!(r.branches.contains(&3));
    }

    #[test]
    fn window_shape() {
        assert!(check_estqq(&[4.0; 6]).is_err());
        assert!(check_nu_k(&[4.0, -1.0, 4.0, 4.0, 4.0]).is_err());
    }
}
