//! Certified evaluation of series and polynomials.

use super::poly::TruncationPolynomial;
use super::sequence::CoefficientSequence;
use crate::error::{Error, Result};
use crate::real::{max_real, to_f64, Abs, Cplx, Precision, Real};

/// Default degree cap when searching for a truncation point.
pub const DEFAULT_DEGREE_CAP: usize = 10_000;

/// Magnitudes below this fraction of the largest term trigger re-summation
/// at doubled precision.
pub const CANCELLATION_RATIO: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    /// Tail allowance relative to the largest term.
    pub rel_tol: f64,
    pub degree_cap: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-30, degree_cap: DEFAULT_DEGREE_CAP }
    }
}

impl EvalOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }
}

/// A function that can be summed with certified bounds on a disk.
pub trait Analytic: Sync {
    fn precision(&self) -> Precision;

    /// Truncation and error bounds valid for every `|z| <= radius`.
    fn plan(&self, radius: &Real, opts: &EvalOptions) -> Result<SeriesPlan>;

    fn at_precision(&self, prec: Precision) -> Self
    where
        Self: Sized;

    /// Multiplicity of a zero at the origin left out of the plan's coefficients.
    fn origin_zeros(&self) -> usize {
        0
    }
}

/// Truncated coefficients plus error bounds valid on a closed disk.
///
/// For `|z| <= radius` the exact value differs from the Horner sum of the
/// stored coefficients by at most [`error_bound`](Self::error_bound).
#[derive(Clone, Debug)]
pub struct SeriesPlan {
    coeffs: Vec<Real>,
    radius: Real,
    tail_bound: Real,
    rounding_bound: Real,
    largest_term: Real,
    abs_sum: Real,
    precision: Precision,
}

impl SeriesPlan {
    /// Plan for a finite coefficient list whose entry `k` carries relative
    /// error at most `(4 (k + offset) + 8) u`.
    pub fn finite(coeffs: Vec<Real>, offset: usize, radius: &Real, prec: Precision) -> Self {
        let mut term = prec.one();
        let mut terms = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            terms.push(c.clone().abs() * &term);
            term = &term * radius;
        }
        Self::assemble(coeffs, terms, offset, radius, prec.zero(), prec)
    }

    fn assemble(coeffs: Vec<Real>, terms: Vec<Real>, offset: usize, radius: &Real, tail: Real, prec: Precision) -> Self {
        let n = coeffs.len().saturating_sub(1);
        let mut s0 = prec.zero();
        let mut s1 = prec.zero();
        let mut largest = prec.zero();
        for (k, t) in terms.iter().enumerate() {
            s0 = &s0 + t;
            s1 = &s1 + t * prec.int((k + offset) as i64);
            largest = max_real(largest, t.clone());
        }
        // coefficient errors (4k + 8)u plus Horner's (6n + 8)u, with slack for the bound itself
        let u = prec.real(prec.unit_roundoff() * 1.01);
        let rounding = (&s0 * prec.int(6 * n as i64 + 16) + &s1 * prec.int(4)) * &u;
        Self {
            coeffs,
            radius: radius.clone(),
            tail_bound: tail,
            rounding_bound: rounding,
            largest_term: largest,
            abs_sum: s0,
            precision: prec,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn radius(&self) -> &Real {
        &self.radius
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn tail_bound(&self) -> &Real {
        &self.tail_bound
    }

    pub fn rounding_bound(&self) -> &Real {
        &self.rounding_bound
    }

    /// `max_k |a_k| radius^k` over the retained terms.
    pub fn largest_term(&self) -> &Real {
        &self.largest_term
    }

    /// `sum_k |a_k| radius^k` over the retained terms.
    pub fn abs_sum(&self) -> &Real {
        &self.abs_sum
    }

    /// Tail plus rounding.
    pub fn error_bound(&self) -> Real {
        &self.tail_bound + &self.rounding_bound
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        let mut acc = self.coeffs[self.degree()].clone();
        for c in self.coeffs[..self.degree()].iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval(&self, z: &Cplx) -> Cplx {
        let zero = self.precision.zero();
        let mut re = self.coeffs[self.degree()].clone();
        let mut im = zero;
        for c in self.coeffs[..self.degree()].iter().rev() {
            let nre = &re * &z.re - &im * &z.im + c;
            im = &re * &z.im + &im * &z.re;
            re = nre;
        }
        Cplx::new(re, im)
    }

    /// Value and first derivative of the retained polynomial.
    pub fn eval_with_derivative(&self, z: &Cplx) -> (Cplx, Cplx) {
        let zero = self.precision.zero();
        let mut val = Cplx::new(self.coeffs[self.degree()].clone(), zero.clone());
        let mut der = Cplx::new(zero.clone(), zero);
        for c in self.coeffs[..self.degree()].iter().rev() {
            der = &(&der * z) + &val;
            val = &val * z;
            val.re = &val.re + c;
        }
        (val, der)
    }
}

impl Analytic for CoefficientSequence {
    fn precision(&self) -> Precision {
        CoefficientSequence::precision(self)
    }

    fn plan(&self, radius: &Real, opts: &EvalOptions) -> Result<SeriesPlan> {
        let prec = self.precision();
        if let Some(last) = self.max_index() {
            return Ok(SeriesPlan::finite(self.coeffs(last)?, 0, radius, prec));
        }
        let start = self.at_least_one_from().expect("infinite families have a regular tail").saturating_sub(2);
        let half = prec.ratio(1, 2);
        let tol = prec.real(opts.rel_tol);
        let mut term = self.coeff(0)?;
        let mut terms = vec![term.clone()];
        let mut largest = term.clone();
        let mut n = 0usize;
        let tail = loop {
            // t_{n+1} = t_n * R / p_{n+1}; past `start` the ratios are non-increasing,
            // so the tail is dominated by a geometric series of ratio <= 1/2
            let ratio = radius / self.p(n + 1)?;
            let next = &term * &ratio;
            if n >= start && ratio <= half && &next * prec.int(2) <= &tol * &largest {
                // (1 + 2^-40) absorbs the few roundings in `next`
                let slack = prec.one() + prec.real(2f64.powi(-40));
                break next * prec.int(2) * slack;
            }
            n += 1;
            if n > opts.degree_cap {
                return Err(Error::Convergence { cap: opts.degree_cap, radius: to_f64(radius) });
            }
            largest = max_real(largest, next.clone());
            terms.push(next.clone());
            term = next;
        };
        Ok(SeriesPlan::assemble(self.coeffs(n)?, terms, 0, radius, tail, prec))
    }

    fn at_precision(&self, prec: Precision) -> Self {
        self.with_precision(prec)
    }
}

impl Analytic for TruncationPolynomial {
    fn precision(&self) -> Precision {
        TruncationPolynomial::precision(self)
    }

    fn plan(&self, radius: &Real, _opts: &EvalOptions) -> Result<SeriesPlan> {
        Ok(SeriesPlan::finite(self.coeffs().to_vec(), self.origin_multiplicity(), radius, self.precision()))
    }

    fn at_precision(&self, prec: Precision) -> Self {
        self.with_precision(prec)
    }

    fn origin_zeros(&self) -> usize {
        self.origin_multiplicity()
    }
}

/// Certified value of a series at a point.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: Cplx,
    pub tail_bound: Real,
    pub rounding_bound: Real,
    pub largest_term: Real,
    pub degree: usize,
    pub precision: Precision,
}

impl Evaluation {
    pub fn error_bound(&self) -> Real {
        &self.tail_bound + &self.rounding_bound
    }
}

/// Certified value at a real point.
#[derive(Clone, Debug)]
pub struct RealEvaluation {
    pub value: Real,
    pub tail_bound: Real,
    pub rounding_bound: Real,
    pub largest_term: Real,
    pub degree: usize,
    pub precision: Precision,
}

impl RealEvaluation {
    pub fn error_bound(&self) -> Real {
        &self.tail_bound + &self.rounding_bound
    }

    /// `+1` or `-1` when the sign is certified, `0` otherwise.
    pub fn certified_sign(&self) -> i8 {
        let b = self.error_bound();
        if self.value > b {
            1
        } else if self.value < -b {
            -1
        } else {
            0
        }
    }
}

fn needs_escalation(value_abs: &Real, rounding: &Real, largest: &Real, rel_tol: f64, prec: Precision) -> bool {
    let small = value_abs < &(largest * prec.real(CANCELLATION_RATIO));
    small && rounding > &(value_abs * prec.real(rel_tol))
}

/// `f(z)` with a certified tail and rounding bound; re-sums at doubled
/// precision while cancellation leaves the rounding bound above `rel_tol |f(z)|`.
pub fn evaluate<A: Analytic>(f: &A, z: &Cplx, rel_tol: f64) -> Result<Evaluation> {
    check_tol(rel_tol)?;
    let opts = EvalOptions::with_rel_tol(rel_tol);
    let radius = z.abs();
    let mut prec = f.precision();
    let mut owned: Option<A> = None;
    for round in 0..=Precision::MAX_ESCALATIONS {
        let g = owned.as_ref().unwrap_or(f);
        let zp = Cplx::new(prec.round(&z.re), prec.round(&z.im));
        let plan = g.plan(&prec.round(&radius), &opts)?;
        let value = plan.eval(&zp);
        let done = round == Precision::MAX_ESCALATIONS
            || !needs_escalation(&value.abs(), plan.rounding_bound(), plan.largest_term(), rel_tol, prec);
        if done {
            return Ok(Evaluation {
                value,
                tail_bound: plan.tail_bound().clone(),
                rounding_bound: plan.rounding_bound().clone(),
                largest_term: plan.largest_term().clone(),
                degree: plan.degree(),
                precision: prec,
            });
        }
        prec = prec.doubled();
        owned = Some(f.at_precision(prec));
    }
    unreachable!("loop returns on the last round")
}

/// Real-argument variant of [`evaluate`].
pub fn evaluate_real<A: Analytic>(f: &A, x: &Real, rel_tol: f64) -> Result<RealEvaluation> {
    check_tol(rel_tol)?;
    let opts = EvalOptions::with_rel_tol(rel_tol);
    let radius = x.clone().abs();
    let mut prec = f.precision();
    let mut owned: Option<A> = None;
    for round in 0..=Precision::MAX_ESCALATIONS {
        let g = owned.as_ref().unwrap_or(f);
        let plan = g.plan(&prec.round(&radius), &opts)?;
        let value = plan.eval_real(&prec.round(x));
        let done = round == Precision::MAX_ESCALATIONS
            || !needs_escalation(&value.clone().abs(), plan.rounding_bound(), plan.largest_term(), rel_tol, prec);
        if done {
            return Ok(RealEvaluation {
                value,
                tail_bound: plan.tail_bound().clone(),
                rounding_bound: plan.rounding_bound().clone(),
                largest_term: plan.largest_term().clone(),
                degree: plan.degree(),
                precision: prec,
            });
        }
        prec = prec.doubled();
        owned = Some(f.at_precision(prec));
    }
    unreachable!("loop returns on the last round")
}

fn check_tol(rel_tol: f64) -> Result<()> {
    if rel_tol > 0.0 && rel_tol < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("rel_tol", format!("must lie in (0, 1), got {rel_tol}")))
    }
}
