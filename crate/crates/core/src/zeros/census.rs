//! Counts of nonreal zeros inside the isolating disks.

use rayon::prelude::*;
use serde::Serialize;

use super::rho::disk_radius;
use super::roots::{locate_zeros, DEFAULT_REAL_TOL};
use super::winding::{count_zeros_disk, ContourPolicy};
use crate::criteria::{monotone_from_floor, Hypothesis, Outcome, DEFAULT_N_CHECK};
use crate::error::{Error, Result};
use crate::real::to_f64;
use crate::series::{truncate, Analytic, CoefficientSequence, EvalOptions, CUBE_ROOT_REGIME};

/// Relative tail tolerance a truncation must meet on the largest disk.
pub const CENSUS_TAIL_TOL: f64 = 1e-20;

/// Number of trailing rows that must agree for the census to count as stable.
pub const STABLE_ROWS: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub j: usize,
    pub radius: f64,
    /// Zeros of `f` in the disk.
    pub winding: usize,
    pub winding_residual: f64,
    /// Certified-real zeros of the truncation in the disk.
    pub real_inside: usize,
    /// Nonreal zeros of the truncation in the disk.
    pub nonreal_truncation: usize,
    /// `winding - real_inside`, the nonreal zeros of `f` left unaccounted for.
    pub nonreal: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub outcome: Outcome,
    pub hypotheses: Vec<Hypothesis>,
    pub degree: usize,
    pub rows: Vec<CensusRow>,
    /// Last rows share a nonreal count.
    pub stabilized: bool,
    /// Smallest `j` from which every disk holds exactly `j` zeros.
    pub empirical_j0: Option<usize>,
}

pub fn nonreal_census(seq: &CoefficientSequence, j_lo: usize, j_hi: usize, degree: usize) -> Result<Census> {
    if j_lo < 2 || j_lo > j_hi {
        return Err(Error::domain("j_range", format!("need 2 <= j_lo <= j_hi, got {j_lo}..{j_hi}")));
    }
    let check = monotone_from_floor(seq, CUBE_ROOT_REGIME, DEFAULT_N_CHECK.max(j_hi + 1))?;
    if !check.holds() {
        return Ok(Census { outcome: Outcome::HypothesesNotMet, hypotheses: check.report, degree, rows: vec![], stabilized: false, empirical_j0: None });
    }
    let top = disk_radius(seq, j_hi)?;
    let needed = seq.plan(&top, &EvalOptions::with_rel_tol(CENSUS_TAIL_TOL))?.degree();
    if needed > degree {
        return Err(Error::Degree { degree, radius: to_f64(&top), recommended: needed });
    }
    let poly = truncate(seq, degree)?;
    let report = locate_zeros(&poly, DEFAULT_REAL_TOL)?;
    if report.count_unresolved > 0 {
        return Err(Error::Unresolved { what: format!("{} truncation roots", report.count_unresolved), bits: report.precision_bits });
    }
    let rows: Vec<CensusRow> = (j_lo..=j_hi)
        .into_par_iter()
        .map(|j| {
            let radius = disk_radius(seq, j)?;
            let disk = count_zeros_disk(seq, &radius, &ContourPolicy::for_disk(j))?;
            let (real_inside, nonreal_truncation, _) = report.counts_inside(to_f64(&radius));
            Ok(CensusRow {
                j,
                radius: to_f64(&radius),
                winding: disk.count,
                winding_residual: disk.residual,
                real_inside,
                nonreal_truncation,
                nonreal: disk.count as i64 - real_inside as i64,
            })
        })
        .collect::<Result<_>>()?;
    let tail = &rows[rows.len().saturating_sub(STABLE_ROWS)..];
    let stabilized = rows.len() >= STABLE_ROWS && tail.iter().all(|r| r.nonreal == tail[0].nonreal);
    let empirical_j0 = rows.iter().rposition(|r| r.winding != r.j).map_or(Some(j_lo), |i| rows.get(i + 1).map(|r| r.j));
    Ok(Census { outcome: Outcome::Pass, hypotheses: check.report, degree, rows, stabilized, empirical_j0 })
}
