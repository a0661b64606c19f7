//! Membership tests and necessary conditions for class I.

pub mod hypotheses;
pub mod scan;
pub mod verdict;

pub use hypotheses::{criterion_hypotheses, monotone_from_floor, HypothesisCheck, DEFAULT_N_CHECK, HYPOTHESIS_TOL, QUOTIENT_THRESHOLD, RATIO_THRESHOLD};
pub use scan::{scan_sign, Layout, Sample, ScanOutcome, ScanPolicy, SignClass};
pub use verdict::{Criterion, Hypothesis, Location, Outcome, Verdict, Witness};

use crate::error::Result;
use crate::real::{to_f64, Real};
use crate::series::{quotients, CoefficientSequence};
use hypotheses::at_least;

/// Hutchinson's sufficient condition `q_n >= 4` for `2 <= n <= n_max`.
pub fn hutchinson_test(seq: &CoefficientSequence, n_max: usize) -> Result<Verdict> {
    let n_max = seq.max_index().map_or(n_max, |m| m.min(n_max));
    if n_max < 2 {
        let h = Hypothesis::new("q_2 computable", false, None);
        return Ok(Verdict::not_met(Criterion::Hutchinson, vec![h]));
    }
    let prof = quotients(seq, n_max)?;
    let q = prof.q_values();
    let violation = q.iter().position(|&x| !at_least(x, 4.0)).map(|i| i + 2);
    let mut v = Verdict::new(Criterion::Hutchinson, if violation.is_some() { Outcome::Fail } else { Outcome::Pass });
    if let Some(n) = violation {
        v.witness = Some(Witness::Index { n, value: q[n - 2] });
    }
    v.measure("min_q", prof.min_q.1).measure("min_q_index", prof.min_q.0).measure("n_max", n_max);
    Ok(v)
}

/// `q_3 (q_2 - 4) + 3 >= 0`, necessary for class I.
pub fn necessary_q2q3_test(seq: &CoefficientSequence) -> Result<Verdict> {
    if seq.max_index().is_some_and(|m| m < 3) {
        let h = Hypothesis::new("q_3 computable", false, None);
        return Ok(Verdict::not_met(Criterion::Lemma12, vec![h]));
    }
    let prec = seq.precision();
    let (q2, q3) = (seq.q(2)?, seq.q(3)?);
    let value = &q3 * (&q2 - prec.int(4)) + prec.int(3);
    let value = to_f64(&value);
    let pass = value >= -1e-12;
    let mut v = Verdict::new(Criterion::Lemma12, if pass { Outcome::Pass } else { Outcome::Fail });
    v.measure("q2", to_f64(&q2)).measure("q3", to_f64(&q3)).measure("value", value);
    if !pass {
        v.witness = Some(Witness::Index { n: 3, value });
    }
    Ok(v)
}

fn sign_scan_verdict(criterion: Criterion, seq: &CoefficientSequence, hyps: Vec<Hypothesis>, policy: &ScanPolicy) -> Result<Verdict> {
    let prec = seq.precision();
    // -a_1/a_2 = -p_2
    let left: Real = -seq.p(2)?;
    let out = scan_sign(seq, &left, &prec.zero(), policy)?;
    let (outcome, sample) = match &out.class {
        SignClass::NonPositive(s) => (Outcome::Pass, s),
        SignClass::Positive(s) => (Outcome::Fail, s),
    };
    let location = if sample.x == out.minimum.x { out.location } else { Location::Interior };
    let mut v = Verdict::new(criterion, outcome);
    v.hypotheses = hyps;
    v.witness = Some(Witness::SignPoint {
        z0: to_f64(&sample.x),
        value: to_f64(&sample.value),
        error_bound: to_f64(&sample.bound),
        location,
        point: sample.x.clone(),
    });
    v.measure("interval_left", to_f64(&left))
        .measure("min_value", to_f64(&out.minimum.value))
        .measure("argmin", to_f64(&out.minimum.x))
        .measure("evaluations", out.evaluations)
        .measure("precision_bits", out.precision.bits());
    Ok(v)
}

/// Necessary sign condition: under `q_2 <= q_3`, class I membership forces a
/// point of `[-a_1/a_2, 0]` where `f <= 0`.
pub fn necessary_sign_test(seq: &CoefficientSequence, policy: &ScanPolicy) -> Result<Verdict> {
    if seq.max_index().is_some_and(|m| m < 3) {
        let h = Hypothesis::new("q_2 <= q_3", false, None).with_detail("q_3 is not defined");
        return Ok(Verdict::not_met(Criterion::TheoremD, vec![h]));
    }
    let (q2, q3) = (to_f64(&seq.q(2)?), to_f64(&seq.q(3)?));
    let h = Hypothesis::new("q_2 <= q_3", at_least(q3, q2), Some(q3 - q2));
    if !h.satisfied {
        return Ok(Verdict::not_met(Criterion::TheoremD, vec![h]));
    }
    sign_scan_verdict(Criterion::TheoremD, seq, vec![h], policy)
}

/// The sufficient-and-necessary criterion for non-decreasing quotients
/// starting at 3: class I iff `f(z_0) <= 0` for some `z_0` in `[-a_1/a_2, 0]`.
pub fn mthm1_criterion(seq: &CoefficientSequence, n_check: usize, policy: &ScanPolicy) -> Result<Verdict> {
    let check = criterion_hypotheses(seq, n_check)?;
    if !check.holds() {
        let mut v = Verdict::not_met(Criterion::Mthm1, check.report);
        if let Some(j0) = check.crossing {
            v.measure("j0", j0);
        }
        return Ok(v);
    }
    let mut v = sign_scan_verdict(Criterion::Mthm1, seq, check.report, policy)?;
    v.measure("n_checked", check.checked_through);
    if let Some(j0) = check.crossing {
        v.measure("j0", j0);
    }
    Ok(v)
}
