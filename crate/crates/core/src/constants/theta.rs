//! The partial theta threshold and the section constants.

use rayon::prelude::*;
use serde::Serialize;

use super::bisection::{bisect, BisectionResult};
use crate::criteria::{scan_sign, Layout, ScanPolicy};
use crate::error::{Error, Result};
use crate::real::{to_f64, Abs, Precision, Real, SquareRoot};
use crate::series::{truncate, CoefficientSequence};

/// Nodes of the geometric scan over `(-a^3, -a)`.
pub const THETA_SCAN_NODES: usize = 1024;

/// Narrowest bracket the interleaving check refines to.
pub const REFINEMENT_FLOOR: f64 = 1e-80;

fn policy_for(prec: Precision) -> ScanPolicy {
    let rel_tol = (-(prec.bits() as f64) - 16.0).exp2().max(1e-300);
    ScanPolicy { nodes: THETA_SCAN_NODES, layout: Layout::Geometric, rel_tol, ..ScanPolicy::default() }
}

/// `(-a^3, -a)` for `a = sqrt(a2)`.
fn witness_interval(a2: &Real) -> (Real, Real) {
    let a = a2.clone().sqrt();
    (-(a2 * &a), -a)
}

/// `g_a` takes a non-positive value on `(-a^3, -a)`.
pub fn theta_predicate(a2: &Real, prec: Precision) -> Result<bool> {
    let seq = CoefficientSequence::partial_theta(a2, prec)?;
    let (lo, hi) = witness_interval(&prec.round(a2));
    Ok(scan_sign(&seq, &lo, &hi, &policy_for(prec))?.is_nonpositive())
}

/// The degree-`n` section of `g_a` takes a non-positive value on `(-a^3, -a)`.
pub fn section_predicate(n: usize, a2: &Real, prec: Precision) -> Result<bool> {
    let poly = truncate(&CoefficientSequence::partial_theta(a2, prec)?, n)?;
    let (lo, hi) = witness_interval(&prec.round(a2));
    Ok(scan_sign(&poly, &lo, &hi, &policy_for(prec))?.is_nonpositive())
}

/// The `a^2` threshold above which the partial theta function has only real zeros.
pub fn q_infinity(tol: f64) -> Result<BisectionResult> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::domain("tol", format!("must lie in (0, 1e-3], got {tol}")));
    }
    bisect(3.0, 4.0, tol, theta_predicate)
}

/// Smallest `a^2` for which the degree-`n` section of `g_a` is real-rooted.
pub fn c_n(n: usize, tol: f64) -> Result<BisectionResult> {
    if n < 2 {
        return Err(Error::domain("n", "section degree must be at least 2"));
    }
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::domain("tol", format!("must lie in (0, 1e-3], got {tol}")));
    }
    bisect(2.5, 4.5, tol, |a2, p| section_predicate(n, a2, p))
}

fn refine(index: usize, r: &BisectionResult, tol: f64) -> Result<BisectionResult> {
    if index == 0 {
        r.refine(tol, theta_predicate)
    } else {
        r.refine(tol, |a2, p| section_predicate(index, a2, p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationStatus {
    Holds,
    Fails,
    /// Brackets still overlap at the refinement floor.
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    pub name: String,
    pub status: RelationStatus,
    /// Difference of bracket midpoints, oriented so that positive means the relation holds.
    pub margin: f64,
    /// Certified lower bound on the oriented difference.
    pub margin_lower: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionConstant {
    pub n: usize,
    pub c_n: BisectionResult,
    /// `c_n - q_inf` from the bracket midpoints.
    pub gap_to_qinf: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Interleaving {
    pub n_max: usize,
    pub tolerance: f64,
    pub q_infinity: BisectionResult,
    pub constants: Vec<SectionConstant>,
    pub relations: Vec<Relation>,
    pub all_hold: bool,
    /// Smallest certified margin among the ordering relations.
    pub min_margin: f64,
}

#[derive(Clone, Copy)]
enum Kind {
    /// `x_i > x_j`.
    Greater(usize, usize),
    /// `|x_i - q_inf| < |x_j - q_inf|`.
    CloserToLimit(usize, usize),
}

fn label(i: usize) -> String {
    if i == 0 {
        "q_inf".to_string()
    } else {
        format!("c_{i}")
    }
}

/// Interval of `|x - q|`.
fn gap_interval(x: &BisectionResult, q: &BisectionResult) -> (Real, Real) {
    let lo = &x.lo_exact - &q.hi_exact;
    let hi = &x.hi_exact - &q.lo_exact;
    let zero = Real::ZERO;
    if lo >= zero {
        (lo, hi)
    } else if hi <= zero {
        (-hi, -lo)
    } else {
        let m = if -lo.clone() > hi { -lo } else { hi };
        (zero, m)
    }
}

/// Lower and upper bounds on the oriented difference of a relation, and the midpoint difference.
fn bounds(kind: Kind, v: &[BisectionResult]) -> (Real, Real, Real) {
    match kind {
        Kind::Greater(i, j) => (
            &v[i].lo_exact - &v[j].hi_exact,
            &v[i].hi_exact - &v[j].lo_exact,
            v[i].midpoint() - v[j].midpoint(),
        ),
        Kind::CloserToLimit(i, j) => {
            let (a_lo, a_hi) = gap_interval(&v[i], &v[0]);
            let (b_lo, b_hi) = gap_interval(&v[j], &v[0]);
            let q = v[0].midpoint();
            let mid = (v[j].midpoint() - &q).abs() - (v[i].midpoint() - &q).abs();
            (&b_lo - &a_hi, &b_hi - &a_lo, mid)
        }
    }
}

fn involved(kind: Kind) -> Vec<usize> {
    match kind {
        Kind::Greater(i, j) => vec![i, j],
        Kind::CloserToLimit(i, j) => vec![0, i, j],
    }
}

/// Computes `q_inf` and `c_2..=c_{n_max}`, then checks the even chain
/// `c_2 > c_4 > ... > q_inf`, the odd chain `c_3 < c_5 < ... < q_inf` and
/// that each `|c_{n+1} - q_inf|` is below `|c_n - q_inf|`. Brackets are
/// refined until every relation is decided or the refinement floor is reached.
pub fn verify_c_interleaving(n_max: usize, tol: f64) -> Result<Interleaving> {
    if n_max < 5 {
        return Err(Error::domain("n_max", "must be at least 5"));
    }
    let mut values: Vec<BisectionResult> = (0..=n_max)
        .into_par_iter()
        .filter(|&i| i != 1)
        .map(|i| if i == 0 { q_infinity(tol) } else { c_n(i, tol) })
        .collect::<Result<_>>()?;
    // slot 1 is unused; keep indices aligned with n
    values.insert(1, values[0].clone());

    let mut kinds = Vec::new();
    let evens: Vec<usize> = (2..=n_max).filter(|n| n % 2 == 0).collect();
    let odds: Vec<usize> = (3..=n_max).filter(|n| n % 2 == 1).collect();
    for w in evens.windows(2) {
        kinds.push((format!("{} > {}", label(w[0]), label(w[1])), Kind::Greater(w[0], w[1])));
    }
    let last_even = *evens.last().unwrap();
    kinds.push((format!("{} > q_inf", label(last_even)), Kind::Greater(last_even, 0)));
    let last_odd = *odds.last().unwrap();
    kinds.push((format!("q_inf > {}", label(last_odd)), Kind::Greater(0, last_odd)));
    for w in odds.windows(2).rev() {
        kinds.push((format!("{} > {}", label(w[1]), label(w[0])), Kind::Greater(w[1], w[0])));
    }
    let ordering = kinds.len();
    for n in 2..n_max {
        kinds.push((format!("|c_{} - q_inf| < |c_{n} - q_inf|", n + 1), Kind::CloserToLimit(n + 1, n)));
    }

    let mut relations = Vec::with_capacity(kinds.len());
    for (name, kind) in &kinds {
        loop {
            let (lower, upper, mid) = bounds(*kind, &values);
            let zero = Real::ZERO;
            let status = if lower > zero {
                RelationStatus::Holds
            } else if upper < zero {
                RelationStatus::Fails
            } else {
                RelationStatus::Unresolved
            };
            let ids = involved(*kind);
            let widest = ids.iter().map(|&i| values[i].width).fold(0.0, f64::max);
            if status != RelationStatus::Unresolved || widest <= REFINEMENT_FLOOR {
                relations.push(Relation { name: name.clone(), status, margin: to_f64(&mid), margin_lower: to_f64(&lower) });
                break;
            }
            let target = (widest * 1e-6).max(REFINEMENT_FLOOR);
            let refined: Vec<(usize, BisectionResult)> = ids
                .par_iter()
                .filter(|&&i| values[i].width > target)
                .map(|&i| refine(i, &values[i], target).map(|r| (i, r)))
                .collect::<Result<_>>()?;
            for (i, r) in refined {
                if i == 0 {
                    values[1] = r.clone();
                }
                values[i] = r;
            }
        }
    }

    let q = values[0].clone();
    let constants = (2..=n_max)
        .map(|n| SectionConstant { n, gap_to_qinf: to_f64(&(values[n].midpoint() - q.midpoint())), c_n: values[n].clone() })
        .collect();
    let all_hold = relations.iter().all(|r| r.status == RelationStatus::Holds);
    let min_margin = relations[..ordering].iter().map(|r| r.margin_lower).fold(f64::INFINITY, f64::min);
    Ok(Interleaving { n_max, tolerance: tol, q_infinity: q, constants, relations, all_hold, min_margin })
}
