//! Bisection on a monotone predicate with exact dyadic brackets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{to_f64, Precision, Real};

/// Extra bits carried beyond the requested tolerance.
const GUARD_BITS: usize = 64;

/// Working precision for a bisection to absolute tolerance `tol` on values of order one.
pub fn precision_for(tol: f64) -> Precision {
    let bits = (-tol.log2()).ceil().max(0.0) as usize + GUARD_BITS;
    Precision::from_bits(bits.max(Precision::default().bits()))
}

#[derive(Clone, Debug, Serialize)]
pub struct BisectionResult {
    /// Bracket midpoint.
    pub value: f64,
    /// Midpoint in decimal, with enough digits to show the bracket width.
    pub value_decimal: String,
    pub lo: f64,
    pub hi: f64,
    /// Requested tolerance; `hi - lo <= tolerance`.
    pub tolerance: f64,
    pub width: f64,
    pub evaluations: usize,
    pub precision_bits: usize,
    /// Predicate is false at `lo_exact` and true at `hi_exact`.
    #[serde(skip)]
    pub lo_exact: Real,
    #[serde(skip)]
    pub hi_exact: Real,
}

impl BisectionResult {
    pub fn midpoint(&self) -> Real {
        (&self.lo_exact + &self.hi_exact) * Precision::from_bits(self.precision_bits).ratio(1, 2)
    }

    /// Continues bisecting until the bracket is narrower than `tol`.
    pub fn refine<P>(&self, tol: f64, predicate: P) -> Result<BisectionResult>
    where
        P: Fn(&Real, Precision) -> Result<bool>,
    {
        let prec = Precision::from_bits(precision_for(tol).bits().max(self.precision_bits));
        run(prec.round(&self.lo_exact), prec.round(&self.hi_exact), tol, prec, self.evaluations, predicate)
    }
}

/// Bisects `[lo, hi]` for the boundary of a predicate that is false at `lo`
/// and true at `hi`.
pub fn bisect<P>(lo: f64, hi: f64, tol: f64, predicate: P) -> Result<BisectionResult>
where
    P: Fn(&Real, Precision) -> Result<bool>,
{
    if !(tol > 0.0) || !(lo < hi) {
        return Err(Error::domain("tol", format!("need tol > 0 and lo < hi, got tol = {tol}, [{lo}, {hi}]")));
    }
    let prec = precision_for(tol);
    let (lo_r, hi_r) = (prec.real(lo), prec.real(hi));
    let at_lo = predicate(&lo_r, prec)?;
    let at_hi = predicate(&hi_r, prec)?;
    if at_lo == at_hi {
        return Err(Error::Bracket { lo, hi, value: at_lo });
    }
    if at_lo {
        return Err(Error::Inconsistent(format!("predicate true at {lo} and false at {hi}; expected the reverse")));
    }
    run(lo_r, hi_r, tol, prec, 2, predicate)
}

fn run<P>(mut lo: Real, mut hi: Real, tol: f64, prec: Precision, mut evaluations: usize, predicate: P) -> Result<BisectionResult>
where
    P: Fn(&Real, Precision) -> Result<bool>,
{
    let tol_r = prec.real(tol);
    let half = prec.ratio(1, 2);
    while &hi - &lo > tol_r {
        let mid = (&lo + &hi) * &half;
        evaluations += 1;
        if predicate(&mid, prec)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mid = (&lo + &hi) * &half;
    let width = &hi - &lo;
    let digits = ((-to_f64(&width).log10()).ceil().max(0.0) as usize + 3).max(10);
    Ok(BisectionResult {
        value: to_f64(&mid),
        value_decimal: decimal(&mid, digits),
        lo: to_f64(&lo),
        hi: to_f64(&hi),
        tolerance: tol,
        width: to_f64(&width),
        evaluations,
        precision_bits: prec.bits(),
        lo_exact: lo,
        hi_exact: hi,
    })
}

/// `x` with `digits` significant decimal digits.
pub fn decimal(x: &Real, digits: usize) -> String {
    let d = x.to_decimal().value().with_precision(digits).value();
    d.to_string()
}
