//! Finite sections of coefficient sequences.

use serde::Serialize;
use serde_json::Value;

use super::sequence::CoefficientSequence;
use crate::error::{Error, Result};
use crate::real::{is_negative, is_zero, ln_abs, to_f64, Cplx, Precision, Real};

/// Where a polynomial's coefficients came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Source {
    pub family: Value,
    /// Index of the lowest retained coefficient in the parent sequence.
    pub first: usize,
    /// Index of the highest retained coefficient.
    pub last: usize,
}

/// `sum_{k=0}^{n} c_k z^k`, stored after removing a factor `z^m`.
#[derive(Clone, Debug)]
pub struct TruncationPolynomial {
    coeffs: Vec<Real>,
    origin_multiplicity: usize,
    source: Option<Source>,
    precision: Precision,
}

/// Degree-`n` Taylor section `a_0 + ... + a_n z^n`.
pub fn truncate(seq: &CoefficientSequence, n: usize) -> Result<TruncationPolynomial> {
    if n < 1 {
        return Err(Error::domain("n", "truncation degree must be at least 1"));
    }
    section(seq, 0, n)
}

/// `a_m z^m + ... + a_n z^n` with the factor `z^m` recorded as a root of
/// multiplicity `m` at the origin.
pub fn section(seq: &CoefficientSequence, m: usize, n: usize) -> Result<TruncationPolynomial> {
    if m >= n {
        return Err(Error::domain("m", format!("section needs m < n, got m = {m}, n = {n}")));
    }
    let coeffs = seq.coeffs(n)?.split_off(m);
    Ok(TruncationPolynomial {
        coeffs,
        origin_multiplicity: m,
        source: Some(Source { family: seq.provenance(), first: m, last: n }),
        precision: seq.precision(),
    })
}

impl TruncationPolynomial {
    /// Polynomial from ascending coefficients; low-order zeros become an
    /// origin root, a zero leading coefficient is rejected.
    pub fn from_coeffs(coeffs: Vec<Real>, prec: Precision) -> Result<Self> {
        let Some(top) = coeffs.last() else {
            return Err(Error::domain("coeffs", "empty coefficient list"));
        };
        if is_zero(top) {
            return Err(Error::domain("coeffs", "leading coefficient is zero"));
        }
        let m = coeffs.iter().position(|c| !is_zero(c)).expect("leading coefficient is nonzero");
        let coeffs = coeffs[m..].iter().map(|c| prec.round(c)).collect();
        Ok(Self { coeffs, origin_multiplicity: m, source: None, precision: prec })
    }

    pub fn from_f64(coeffs: &[f64], prec: Precision) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| prec.real(c)).collect(), prec)
    }

    pub fn with_precision(&self, prec: Precision) -> Self {
        let coeffs = self.coeffs.iter().map(|c| prec.round(c)).collect();
        Self { coeffs, precision: prec, ..self.clone() }
    }

    /// Degree after removing the origin factor.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn origin_multiplicity(&self) -> usize {
        self.origin_multiplicity
    }

    pub fn total_degree(&self) -> usize {
        self.degree() + self.origin_multiplicity
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn source(&self) -> Option<&Source> {
        self.source.as_ref()
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// `ln |c_k|`.
    pub fn log_magnitudes(&self) -> Vec<f64> {
        self.coeffs.iter().map(ln_abs).collect()
    }

    /// Signs of the coefficients; zero coefficients report `0`.
    pub fn signs(&self) -> Vec<i8> {
        self.coeffs
            .iter()
            .map(|c| if is_zero(c) { 0 } else if is_negative(c) { -1 } else { 1 })
            .collect()
    }

    /// `ln rho` for the balancing radius `rho = |c_0/c_n|^{1/n}`, the geometric
    /// mean of the root moduli.
    pub fn log_balancing_radius(&self) -> f64 {
        let lm = self.log_magnitudes();
        (lm[0] - lm[self.degree()]) / self.degree().max(1) as f64
    }

    pub fn balancing_radius(&self) -> Real {
        self.precision.real(self.log_balancing_radius()).exp()
    }

    /// `ln |c_k rho^k / c_0|`; first and last entries are zero.
    pub fn balanced_log_coeffs(&self) -> Vec<f64> {
        let lr = self.log_balancing_radius();
        let lm = self.log_magnitudes();
        lm.iter().enumerate().map(|(k, l)| l + k as f64 * lr - lm[0]).collect()
    }

    /// `P(-z)`.
    pub fn reflected(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        Self { coeffs, ..self.clone() }
    }

    /// Second quotients `c_{k-1}^2 / (c_{k-2} c_k)` for `k = 2..=n`.
    pub fn quotients(&self) -> Vec<Real> {
        (2..=self.degree())
            .map(|k| (&self.coeffs[k - 1] * &self.coeffs[k - 1]) / (&self.coeffs[k - 2] * &self.coeffs[k]))
            .collect()
    }

    /// Value of the stored factor (without `z^m`).
    pub fn eval(&self, z: &Cplx) -> Cplx {
        let n = self.degree();
        let mut acc = Cplx::real(self.coeffs[n].clone());
        for c in self.coeffs[..n].iter().rev() {
            acc = &acc * z;
            acc.re = &acc.re + c;
        }
        acc
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        let n = self.degree();
        let mut acc = self.coeffs[n].clone();
        for c in self.coeffs[..n].iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Value and derivative of the stored factor.
    pub fn eval_with_derivative(&self, z: &Cplx) -> (Cplx, Cplx) {
        let n = self.degree();
        let mut val = Cplx::real(self.coeffs[n].clone());
        let mut der = Cplx::real(self.precision.zero());
        for c in self.coeffs[..n].iter().rev() {
            der = &(&der * z) + &val;
            val = &val * z;
            val.re = &val.re + c;
        }
        (val, der)
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::family::FamilySpec;
    use crate::series::sequence::make_family;

    #[test]
    fn partial_theta_quadratic_section() {
        let s = make_family(&FamilySpec::PartialTheta { a2: 4.0 }).unwrap();
        let p = s.precision();
        let t = truncate(&s, 2).unwrap();
        assert_eq!(t.coeffs(), &[p.one(), p.ratio(1, 2), p.ratio(1, 16)]);
        assert_eq!(t.source().unwrap().last, 2);
        // geometric mean of the double root -4
        assert!((t.log_balancing_radius() - 4f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn sections_remove_the_origin_factor() {
        let s = make_family(&FamilySpec::constant_quotient(4.0)).unwrap();
        let sec = section(&s, 2, 6).unwrap();
        assert_eq!(sec.origin_multiplicity(), 2);
        assert_eq!(sec.degree(), 4);
        assert_eq!(sec.total_degree(), 6);
        for (k, q) in sec.quotients().iter().enumerate() {
            assert!((to_f64(q) - to_f64(&s.q(k + 4).unwrap())).abs() < 1e-28);
        }
        assert_eq!(section(&s, 0, 5).unwrap().coeffs(), truncate(&s, 5).unwrap().coeffs());
        assert!(section(&s, 3, 3).is_err());
    }

    #[test]
    fn explicit_lists_are_never_padded() {
        let s = make_family(&FamilySpec::Explicit { coeffs: vec![1.0, 2.0, 1.5, 0.5] }).unwrap();
        assert!(matches!(truncate(&s, 5), Err(Error::Range(_))));
        assert_eq!(truncate(&s, 3).unwrap().degree(), 3);
    }

    #[test]
    fn reflection_alternates_signs() {
        let p = Precision::default();
        let t = TruncationPolynomial::from_f64(&[1.0, 2.0, 3.0, 4.0], p).unwrap().reflected();
        assert_eq!(t.signs(), vec![1, -1, 1, -1]);
        let b = t.balanced_log_coeffs();
        assert!(b[0].abs() < 1e-15 && b[3].abs() < 1e-15);
        let zp = TruncationPolynomial::from_f64(&[0.0, 0.0, 1.0, 1.0], p).unwrap();
        assert_eq!(zp.origin_multiplicity(), 2);
        assert!(TruncationPolynomial::from_f64(&[1.0, 0.0], p).is_err());
    }
}
