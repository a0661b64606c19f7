//! Signs of `f` at the negated disk radii.

use serde::Serialize;

use super::rho::disk_radius;
use crate::criteria::{criterion_hypotheses, Hypothesis, Outcome, DEFAULT_N_CHECK};
use crate::error::{Error, Result};
use crate::real::{log2_abs, to_f64, Precision};
use crate::series::{evaluate_real, CoefficientSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SignStatus {
    /// `(-1)^k f(-R_k)` exceeds its error bound.
    Certified,
    /// `(-1)^k f(-R_k)` is below minus its error bound.
    Violated,
    /// The error bound straddles zero at the highest precision tried.
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignRow {
    pub k: usize,
    /// Disk radius `R_k` in the coordinates of `f`.
    pub radius: f64,
    /// `log2 |f(-R_k)|`; the value itself can leave the `f64` range.
    pub log2_abs_value: f64,
    pub log2_error_bound: f64,
    /// Certified sign of `f(-R_k)`, `0` when unresolved.
    pub sign: i8,
    pub status: SignStatus,
    pub precision_bits: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignAlternation {
    pub outcome: Outcome,
    pub hypotheses: Vec<Hypothesis>,
    pub rows: Vec<SignRow>,
}

impl SignAlternation {
    pub fn all_certified(&self) -> bool {
        self.outcome == Outcome::Pass && self.rows.iter().all(|r| r.status == SignStatus::Certified)
    }
}

/// Checks `(-1)^k f(-R_k) >= 0` for `k = 2..=k_max`, where `R_k` is the
/// radius of the `k`-th disk. Only runs under the criterion's hypotheses.
pub fn sign_alternation_check(seq: &CoefficientSequence, k_max: usize) -> Result<SignAlternation> {
    if k_max < 2 {
        return Err(Error::domain("k_max", "must be at least 2"));
    }
    let check = criterion_hypotheses(seq, DEFAULT_N_CHECK)?;
    if !check.holds() {
        return Ok(SignAlternation { outcome: Outcome::HypothesesNotMet, hypotheses: check.report, rows: Vec::new() });
    }
    let mut rows = Vec::with_capacity(k_max - 1);
    for k in 2..=k_max {
        rows.push(sign_row(seq, k)?);
    }
    let outcome = if rows.iter().any(|r| r.status == SignStatus::Violated) { Outcome::Fail } else { Outcome::Pass };
    Ok(SignAlternation { outcome, hypotheses: check.report, rows })
}

fn sign_row(seq: &CoefficientSequence, k: usize) -> Result<SignRow> {
    let mut prec = seq.precision();
    let mut owned: Option<CoefficientSequence> = None;
    let expected: i8 = if k % 2 == 0 { 1 } else { -1 };
    for round in 0..=Precision::MAX_ESCALATIONS {
        let s = owned.as_ref().unwrap_or(seq);
        let radius = disk_radius(s, k)?;
        let ev = evaluate_real(s, &-radius.clone(), 1e-30)?;
        let sign = ev.certified_sign();
        if sign != 0 || round == Precision::MAX_ESCALATIONS {
            let status = match sign {
                0 => SignStatus::Unresolved,
                s if s == expected => SignStatus::Certified,
                _ => SignStatus::Violated,
            };
            return Ok(SignRow {
                k,
                radius: to_f64(&radius),
                log2_abs_value: log2_abs(&ev.value),
                log2_error_bound: log2_abs(&ev.error_bound()),
                sign,
                status,
                precision_bits: ev.precision.bits(),
            });
        }
        prec = prec.doubled();
        owned = Some(seq.with_precision(prec));
    }
    unreachable!("the last round returns")
}
