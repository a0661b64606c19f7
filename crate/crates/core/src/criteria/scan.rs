//! Certified minimum search for a series on a real interval.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::verdict::Location;
use crate::error::{Error, Result};
use crate::real::{max_real, to_f64, Abs, Precision, Real};
use crate::series::{Analytic, EvalOptions, SeriesPlan};

/// Node placement on the scan interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    /// Chebyshev points of the first kind plus both endpoints.
    Chebyshev,
    /// Geometric progression strictly inside a negative interval.
    Geometric,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPolicy {
    pub nodes: usize,
    pub layout: Layout,
    /// Number of smallest node values refined by golden-section search.
    pub refine_minima: usize,
    pub golden_iterations: usize,
    /// Tail tolerance relative to the largest term.
    pub rel_tol: f64,
}

impl Default for ScanPolicy {
    fn default() -> Self {
        Self { nodes: 512, layout: Layout::Chebyshev, refine_minima: 3, golden_iterations: 60, rel_tol: 1e-30 }
    }
}

impl ScanPolicy {
    pub fn geometric(nodes: usize) -> Self {
        Self { nodes, layout: Layout::Geometric, ..Self::default() }
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub x: Real,
    pub value: Real,
    pub bound: Real,
}

impl Sample {
    pub fn upper(&self) -> Real {
        &self.value + &self.bound
    }

    pub fn lower(&self) -> Real {
        &self.value - &self.bound
    }
}

/// Certified sign information about the minimum over the scanned points.
#[derive(Clone, Debug)]
pub enum SignClass {
    /// A point with `value + bound <= 0`.
    NonPositive(Sample),
    /// Every scanned value satisfies `value - bound > 0`; carries the smallest.
    Positive(Sample),
}

#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub class: SignClass,
    /// Smallest sampled value (ties toward the point closer to the origin).
    pub minimum: Sample,
    pub location: Location,
    pub evaluations: usize,
    pub precision: Precision,
}

impl ScanOutcome {
    pub fn is_nonpositive(&self) -> bool {
        matches!(self.class, SignClass::NonPositive(_))
    }
}

fn better(a: &Sample, b: &Sample) -> bool {
    // strictly smaller value, or equal value and closer to the origin
    a.value < b.value || (a.value == b.value && a.x.clone().abs() < b.x.clone().abs())
}

fn nodes(lo: &Real, hi: &Real, policy: &ScanPolicy, prec: Precision) -> Vec<Real> {
    let n = policy.nodes.max(2);
    match policy.layout {
        Layout::Chebyshev => {
            let mid = (lo + hi) * prec.ratio(1, 2);
            let half = (hi - lo) * prec.ratio(1, 2);
            let mut pts = vec![lo.clone()];
            // cos decreasing in i, so iterate in reverse for ascending order
            for i in (0..n).rev() {
                let c = ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
                pts.push(&mid + &half * prec.real(c));
            }
            pts.push(hi.clone());
            pts
        }
        Layout::Geometric => {
            // lo < hi < 0: x_i = hi * (lo/hi)^{(i + 1/2)/n}, ascending from lo
            let ratio = lo / hi;
            let lr = ratio.ln();
            (0..n)
                .rev()
                .map(|i| hi * (&lr * prec.real((i as f64 + 0.5) / n as f64)).exp())
                .collect()
        }
    }
}

fn sample(plan: &SeriesPlan, x: Real, bound: &Real) -> Sample {
    let value = plan.eval_real(&x);
    Sample { x, value, bound: bound.clone() }
}

/// Golden-section search for a minimum inside `[a, b]`.
fn golden(plan: &SeriesPlan, bound: &Real, a: &Real, b: &Real, iterations: usize, prec: Precision) -> Vec<Sample> {
    let inv_phi = prec.real(0.618_033_988_749_894_9);
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut c = &b - (&b - &a) * &inv_phi;
    let mut d = &a + (&b - &a) * &inv_phi;
    let mut fc = sample(plan, c.clone(), bound);
    let mut fd = sample(plan, d.clone(), bound);
    let mut seen = Vec::with_capacity(2 * iterations + 2);
    for _ in 0..iterations {
        if fc.value < fd.value {
            b = d;
            d = c;
            seen.push(fd);
            fd = fc;
            c = &b - (&b - &a) * &inv_phi;
            fc = sample(plan, c.clone(), bound);
        } else {
            a = c;
            c = d;
            seen.push(fc);
            fc = fd;
            d = &a + (&b - &a) * &inv_phi;
            fd = sample(plan, d.clone(), bound);
        }
    }
    seen.push(fc);
    seen.push(fd);
    seen
}

fn scan_once<A: Analytic>(f: &A, lo: &Real, hi: &Real, policy: &ScanPolicy) -> Result<(Vec<Sample>, Location, Sample)> {
    let prec = f.precision();
    let radius = max_real(lo.clone().abs(), hi.clone().abs());
    let plan = f.plan(&radius, &EvalOptions::with_rel_tol(policy.rel_tol))?;
    let bound = plan.error_bound();
    let xs = nodes(lo, hi, policy, prec);
    let coarse: Vec<Sample> = xs.into_par_iter().map(|x| sample(&plan, x, &bound)).collect();

    let mut order: Vec<usize> = (0..coarse.len()).collect();
    order.sort_by(|&i, &j| {
        if better(&coarse[i], &coarse[j]) {
            std::cmp::Ordering::Less
        } else if better(&coarse[j], &coarse[i]) {
            std::cmp::Ordering::Greater
        } else {
            i.cmp(&j)
        }
    });
    let picks: Vec<usize> = order.into_iter().take(policy.refine_minima).collect();
    let refined: Vec<Vec<Sample>> = picks
        .par_iter()
        .map(|&i| {
            let a = if i == 0 { lo.clone() } else { coarse[i - 1].x.clone() };
            let b = if i + 1 == coarse.len() { hi.clone() } else { coarse[i + 1].x.clone() };
            golden(&plan, &bound, &a, &b, policy.golden_iterations, prec)
        })
        .collect();

    let mut all = coarse;
    all.extend(refined.into_iter().flatten());
    let mut best = all[0].clone();
    for s in &all[1..] {
        if better(s, &best) {
            best = s.clone();
        }
    }
    let location = if best.x == *lo && policy.layout == Layout::Chebyshev {
        Location::LeftEndpoint
    } else if best.x == *hi && policy.layout == Layout::Chebyshev {
        Location::RightEndpoint
    } else {
        Location::Interior
    };
    Ok((all, location, best))
}

/// Scans `[lo, hi]` (or `(lo, hi)` for the geometric layout) and certifies the
/// sign of the sampled minimum, doubling precision while the bounds straddle zero.
pub fn scan_sign<A: Analytic>(f: &A, lo: &Real, hi: &Real, policy: &ScanPolicy) -> Result<ScanOutcome> {
    if lo >= hi {
        return Err(Error::domain("interval", format!("empty scan interval [{}, {}]", to_f64(lo), to_f64(hi))));
    }
    let mut prec = f.precision();
    let mut owned: Option<A> = None;
    for _ in 0..=Precision::MAX_ESCALATIONS {
        let g = owned.as_ref().unwrap_or(f);
        let (lo_p, hi_p) = (prec.round(lo), prec.round(hi));
        let (all, location, best) = scan_once(g, &lo_p, &hi_p, policy)?;
        let zero = prec.zero();
        let class = if best.upper() <= zero {
            Some(SignClass::NonPositive(best.clone()))
        } else if all.iter().all(|s| s.lower() > zero) {
            Some(SignClass::Positive(best.clone()))
        } else {
            // a different point may certify non-positivity even if the minimum does not
            all.iter().find(|s| s.upper() <= zero).map(|s| SignClass::NonPositive(s.clone()))
        };
        if let Some(class) = class {
            return Ok(ScanOutcome { class, minimum: best, location, evaluations: all.len(), precision: prec });
        }
        prec = prec.doubled();
        owned = Some(f.at_precision(prec));
    }
    Err(Error::Unresolved {
        what: format!("sign of the minimum on [{:e}, {:e}]", to_f64(lo), to_f64(hi)),
        bits: prec.bits() / 2,
    })
}
