//! Quotient hypotheses with tail extrapolation.

use super::verdict::Hypothesis;
use crate::error::Result;
use crate::real::to_f64;
use crate::series::CoefficientSequence;

/// Relative tolerance for every quotient inequality; boundary values pass.
pub const HYPOTHESIS_TOL: f64 = 1e-12;

/// Default number of quotients checked directly.
pub const DEFAULT_N_CHECK: usize = 200;

/// Ratio branch of the side condition at the first crossing of 4.
pub const RATIO_THRESHOLD: f64 = 0.525;

/// Quotient branch of the side condition.
pub const QUOTIENT_THRESHOLD: f64 = 3.4303;

/// Furthest index searched for a crossing of 4 on a proven monotone tail.
const CROSSING_SEARCH_LIMIT: usize = 100_000;

pub(crate) fn at_least(x: f64, t: f64) -> bool {
    x >= t * (1.0 - HYPOTHESIS_TOL)
}

#[derive(Clone, Debug)]
pub struct HypothesisCheck {
    pub report: Vec<Hypothesis>,
    /// Index `j_0` with `q_{j_0} < 4 <= q_{j_0+1}`, if any.
    pub crossing: Option<usize>,
    /// Number of quotients inspected directly.
    pub checked_through: usize,
}

impl HypothesisCheck {
    pub fn holds(&self) -> bool {
        self.report.iter().all(|h| h.satisfied)
    }
}

/// `floor <= q_2 <= q_3 <= ...` checked through `n_check`, extended by the
/// family's proven monotone tail.
pub fn monotone_from_floor(seq: &CoefficientSequence, floor: f64, n_check: usize) -> Result<HypothesisCheck> {
    let mut report = Vec::new();
    let tail = seq.monotone_tail();
    let Some(tail) = tail else {
        let finite = seq.max_index().is_some();
        report.push(
            Hypothesis::new("quotient tail rule", false, None).with_detail(if finite {
                "finite coefficient list: quotients beyond the list are undefined"
            } else {
                "no proven monotone rule beyond the checked range"
            }),
        );
        let q2 = seq.q(2).ok().map(|q| to_f64(&q));
        report.insert(0, Hypothesis::new(format!("q_2 >= {floor}"), q2.is_some_and(|q| at_least(q, floor)), q2));
        return Ok(HypothesisCheck { report, crossing: None, checked_through: 0 });
    };
    let n_eff = n_check.max(tail.from + 1).max(3);
    let q: Vec<f64> = (2..=n_eff).map(|n| seq.q(n).map(|x| to_f64(&x))).collect::<Result<_>>()?;
    report.push(Hypothesis::new(format!("q_2 >= {floor}"), at_least(q[0], floor), Some(q[0])));
    let descent = q.windows(2).position(|w| !at_least(w[1], w[0])).map(|i| i + 3);
    report.push(
        Hypothesis::new(format!("q_n non-decreasing for 2 <= n <= {n_eff}"), descent.is_none(), descent.map(|n| n as f64))
            .with_detail(match descent {
                Some(n) => format!("q_{n} < q_{}", n - 1),
                None => "checked directly".to_string(),
            }),
    );
    report.push(
        Hypothesis::new(format!("q_n non-decreasing for n > {n_eff}"), true, Some(tail.limit))
            .with_detail(format!("proven by the family rule from n = {}; measured value is the limit", tail.from)),
    );

    // first crossing of 4
    let mut crossing = q.windows(2).position(|w| !at_least(w[0], 4.0) && at_least(w[1], 4.0)).map(|i| i + 2);
    if crossing.is_none() && !at_least(q[q.len() - 1], 4.0) && tail.limit > 4.0 {
        let mut prev = q[q.len() - 1];
        for n in n_eff + 1..=CROSSING_SEARCH_LIMIT {
            let cur = to_f64(&seq.q(n)?);
            if at_least(cur, 4.0) {
                crossing = Some(n - 1);
                break;
            }
            prev = cur;
        }
        if crossing.is_none() {
            report.push(
                Hypothesis::new("crossing of 4 located", false, Some(prev))
                    .with_detail(format!("quotients approach {} but stay below 4 through n = {CROSSING_SEARCH_LIMIT}", tail.limit)),
            );
        }
    }
    Ok(HypothesisCheck { report, crossing, checked_through: n_eff })
}

/// Full hypothesis set of the sufficient-and-necessary criterion.
pub fn criterion_hypotheses(seq: &CoefficientSequence, n_check: usize) -> Result<HypothesisCheck> {
    let mut check = monotone_from_floor(seq, 3.0, n_check)?;
    if check.checked_through == 0 {
        return Ok(check);
    }
    let Some(j0) = check.crossing else {
        check.report.push(Hypothesis::new("side condition at the crossing of 4", true, None).with_detail("no index j_0 with q_{j_0} < 4 <= q_{j_0+1}"));
        return Ok(check);
    };
    let q = |n: usize| seq.q(n).map(|x| to_f64(&x));
    let qj0 = q(j0)?;
    let quotient_branch = at_least(qj0, QUOTIENT_THRESHOLD);
    if j0 >= 3 {
        let ratio = q(j0 - 1)? / q(j0 + 1)?;
        let ratio_branch = at_least(ratio, RATIO_THRESHOLD);
        check.report.push(
            Hypothesis::new(format!("q_{{j0-1}}/q_{{j0+1}} >= {RATIO_THRESHOLD} or q_{{j0}} >= {QUOTIENT_THRESHOLD}"), ratio_branch || quotient_branch, Some(ratio))
                .with_detail(format!("j0 = {j0}, ratio = {ratio}, q_j0 = {qj0}")),
        );
    } else {
        check.report.push(
            Hypothesis::new(format!("q_{{j0-1}}/q_{{j0+1}} >= {RATIO_THRESHOLD} or q_{{j0}} >= {QUOTIENT_THRESHOLD}"), quotient_branch, None)
                .with_detail(format!("j0 = 2: ratio branch needs q_1, which is undefined; q_j0 = {qj0}")),
        );
    }
    Ok(check)
}
