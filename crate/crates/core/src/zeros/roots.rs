//! Simultaneous root iteration for truncation polynomials.
//!
//! Roots are found in two phases. An Aberth–Ehrlich iteration in `f64`
//! runs on the balanced polynomial with every evaluation scaled by its
//! largest term, so coefficients far outside the `f64` range are harmless.
//! The result is then polished by the same iteration in working precision
//! and each root receives an inclusion radius `n (|P| + E) / |P'|`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{log2_abs, to_f64, Abs, Cplx, Precision, Real};
use crate::series::TruncationPolynomial;

use super::winding::DiskCount;

/// Default relative tolerance for real classification.
pub const DEFAULT_REAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Required `|P(z)| / sum |c_k z^k|` at every root.
    pub residual_tol: f64,
    pub polish_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iterations: 1_000, residual_tol: 1e-12, polish_iterations: 12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootClass {
    RealNegative,
    RealPositive,
    /// Root at the origin from a removed factor `z^m`.
    Origin,
    NonrealPair,
    /// Uncertainty straddles the real-classification boundary.
    Unresolved,
}

impl RootClass {
    pub fn is_real(self) -> bool {
        matches!(self, RootClass::RealNegative | RootClass::RealPositive | RootClass::Origin)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    /// `|P(z)| / sum |c_k z^k|`.
    pub residual: f64,
    /// Radius of a disk around the root guaranteed to contain a zero.
    pub radius: f64,
    pub class: RootClass,
    pub simple: bool,
    #[serde(skip)]
    pub value: Cplx,
}

impl Root {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroReport {
    pub degree: usize,
    pub roots: Vec<Root>,
    pub count_real: usize,
    pub count_nonreal: usize,
    pub count_unresolved: usize,
    pub all_simple: bool,
    pub tol_rel: f64,
    pub precision_bits: usize,
    pub iterations: usize,
    pub disk_counts: Vec<DiskCount>,
}

impl ZeroReport {
    /// Every root certified real, negative and simple.
    pub fn all_real_negative_simple(&self) -> bool {
        self.roots.iter().all(|r| r.class == RootClass::RealNegative && r.simple)
    }

    pub fn all_real(&self) -> bool {
        self.roots.iter().all(|r| r.class.is_real())
    }

    /// `(real, nonreal, unresolved)` roots with modulus below `radius`.
    pub fn counts_inside(&self, radius: f64) -> (usize, usize, usize) {
        let mut out = (0, 0, 0);
        for r in self.roots.iter().filter(|r| r.modulus() < radius) {
            match r.class {
                c if c.is_real() => out.0 += 1,
                RootClass::NonrealPair => out.1 += 1,
                _ => out.2 += 1,
            }
        }
        out
    }
}

struct Scaled {
    logc: Vec<f64>,
    sign: Vec<f64>,
}

impl Scaled {
    /// Newton correction `P/P'` and relative residual at `z`, scaled by the largest term.
    fn newton(&self, z: C64) -> (C64, f64) {
        let r = z.norm();
        if r == 0.0 {
            return (C64::new(f64::INFINITY, 0.0), 1.0);
        }
        let lr = r.ln();
        let u = z / r;
        let m = self
            .logc
            .iter()
            .enumerate()
            .map(|(k, l)| l + k as f64 * lr)
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut s0, mut s1, mut abs) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), 0.0);
        let mut uk = C64::new(1.0, 0.0);
        for (k, (l, s)) in self.logc.iter().zip(&self.sign).enumerate() {
            let t = (l + k as f64 * lr - m).exp();
            let term = uk * (s * t);
            s0 += term;
            s1 += term * k as f64;
            abs += t;
            uk *= u;
        }
        (z * s0 / s1, s0.norm() / abs)
    }
}

/// Upper convex hull of `(k, logc[k])`, as indices.
fn upper_hull(logc: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..logc.len() {
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // remove j when it lies on or below the segment i..k
            let cross = (j - i) as f64 * (logc[k] - logc[i]) - (k - i) as f64 * (logc[j] - logc[i]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

/// Initial points: for each hull edge of width `d` and slope `s`, `d` points
/// on the circle of radius `e^{-s}`, rotated by a fixed offset.
fn initial_points(logc: &[f64]) -> Vec<C64> {
    let n = logc.len() - 1;
    let hull = upper_hull(logc);
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let offset = std::f64::consts::TAU * 0.5 / n as f64;
    let mut pts = Vec::with_capacity(n);
    for (e, w) in hull.windows(2).enumerate() {
        let (i, j) = (w[0], w[1]);
        let d = j - i;
        let radius = (-(logc[j] - logc[i]) / d as f64).exp();
        for m in 0..d {
            let theta = std::f64::consts::TAU * (m as f64 + 0.5) / d as f64 + offset + e as f64 * golden;
            pts.push(C64::from_polar(radius, theta));
        }
    }
    pts
}

/// Aberth corrections, skipping roots marked converged; returns the
/// largest relative correction.
fn aberth_f64(poly: &Scaled, z: &mut [C64], done: &mut [bool], residual_tol: f64) -> f64 {
    let n = z.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        if done[i] {
            continue;
        }
        let (ratio, res) = poly.newton(z[i]);
        let mut s = C64::new(0.0, 0.0);
        for j in 0..n {
            if j != i {
                s += (z[i] - z[j]).inv();
            }
        }
        let step = ratio / (C64::new(1.0, 0.0) - ratio * s);
        if step.is_finite() {
            z[i] -= step;
            let rel = step.norm() / z[i].norm().max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
            if res <= residual_tol * 1e-3 || rel <= 4.0 * f64::EPSILON {
                done[i] = true;
            }
        } else {
            // move off a critical point deterministically
            z[i] *= C64::from_polar(1.0 + 1e-3, 0.1);
            worst = worst.max(1.0);
        }
    }
    worst
}

fn inv(z: &Cplx) -> Cplx {
    let d = z.norm_sqr();
    Cplx::new(&z.re / &d, -(&z.im / &d))
}

/// `sum |c_k| |z|^k`.
fn abs_sum(poly: &TruncationPolynomial, modulus: &Real) -> Real {
    let n = poly.degree();
    let c = poly.coeffs();
    let mut acc = c[n].clone().abs();
    for ck in c[..n].iter().rev() {
        acc = acc * modulus + ck.clone().abs();
    }
    acc
}

/// Roots with residuals and inclusion radii, classified at the default tolerance.
pub fn roots_of_truncation(poly: &TruncationPolynomial) -> Result<ZeroReport> {
    roots_with_options(poly, &SolverOptions::default())
}

pub fn roots_with_options(poly: &TruncationPolynomial, opts: &SolverOptions) -> Result<ZeroReport> {
    let n = poly.degree();
    let prec = poly.precision();
    let mut roots: Vec<Root> = Vec::with_capacity(poly.total_degree());
    let mut iterations = 0;
    if n >= 1 {
        let logc = poly.balanced_log_coeffs();
        let sign: Vec<f64> = poly.signs().iter().map(|&s| f64::from(s)).collect();
        let scaled = Scaled { logc: logc.clone(), sign };
        let mut w = initial_points(&logc);
        let mut done = vec![false; n];
        while iterations < opts.max_iterations && !done.iter().all(|&d| d) {
            iterations += 1;
            let worst = aberth_f64(&scaled, &mut w, &mut done, opts.residual_tol);
            if worst <= 4.0 * f64::EPSILON {
                break;
            }
        }

        // back to z = rho w, then polish at working precision
        let rho = poly.balancing_radius();
        let mut z: Vec<Cplx> = w.iter().map(|c| Cplx::from_f64(prec, c.re, c.im).scale(&rho)).collect();
        let target = prec.real((-(prec.bits() as f64) + 8.0).exp2());
        for _ in 0..opts.polish_iterations {
            let mut worst = prec.zero();
            for i in 0..n {
                let (p, dp) = poly.eval_with_derivative(&z[i]);
                if dp.norm_sqr() == prec.zero() {
                    continue;
                }
                let ratio = p.div(&dp);
                let mut s = Cplx::real(prec.zero());
                for j in 0..n {
                    if j != i {
                        s = &s + &inv(&(&z[i] - &z[j]));
                    }
                }
                let denom = &Cplx::real(prec.one()) - &(&ratio * &s);
                if denom.norm_sqr() == prec.zero() {
                    continue;
                }
                let step = ratio.div(&denom);
                let zi_abs = z[i].abs();
                if zi_abs > prec.zero() {
                    let rel = step.abs() / zi_abs;
                    if rel > worst {
                        worst = rel;
                    }
                }
                z[i] = &z[i] - &step;
            }
            if worst <= target {
                break;
            }
        }

        let u = prec.real(prec.unit_roundoff() * 1.01);
        let mut unconverged = 0;
        for zi in z {
            let (p, dp) = poly.eval_with_derivative(&zi);
            let modulus = zi.abs();
            let total = abs_sum(poly, &modulus);
            let err = &total * prec.int(10 * n as i64 + 16) * &u;
            let p_abs = p.abs();
            let residual = to_f64(&(&p_abs / &total));
            let dp_abs = dp.abs();
            let radius = if dp_abs == prec.zero() {
                f64::INFINITY
            } else {
                let r = (p_abs + err) * prec.int(n as i64) / dp_abs;
                // clamp to the f64 range without losing tiny radii
                if log2_abs(&r) < -1070.0 {
                    0.0
                } else {
                    to_f64(&r)
                }
            };
            if !(residual <= opts.residual_tol) {
                unconverged += 1;
            }
            roots.push(Root {
                re: to_f64(&zi.re),
                im: to_f64(&zi.im),
                residual,
                radius,
                class: RootClass::Unresolved,
                simple: false,
                value: zi,
            });
        }
        if unconverged > 0 {
            return Err(Error::Solver { iterations, unconverged });
        }
    }
    for _ in 0..poly.origin_multiplicity() {
        roots.push(Root {
            re: 0.0,
            im: 0.0,
            residual: 0.0,
            radius: 0.0,
            class: RootClass::Origin,
            simple: poly.origin_multiplicity() == 1,
            value: Cplx::real(prec.zero()),
        });
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let report = ZeroReport {
        degree: poly.total_degree(),
        roots,
        count_real: 0,
        count_nonreal: 0,
        count_unresolved: 0,
        all_simple: false,
        tol_rel: DEFAULT_REAL_TOL,
        precision_bits: prec.bits(),
        iterations,
        disk_counts: Vec::new(),
    };
    Ok(classify_real(report, DEFAULT_REAL_TOL))
}

/// Real/nonreal classification and simplicity.
///
/// A root is real when `|Im z| <= tol |z|`, unless its inclusion disk clears
/// the real axis and a distinct conjugate partner exists. It is unresolved
/// when the disk straddles the tolerance boundary. A root is simple when
/// every other root is farther than twice the summed inclusion radii.
pub fn classify_real(mut report: ZeroReport, tol_rel: f64) -> ZeroReport {
    let n = report.roots.len();
    let pts: Vec<(f64, f64, f64)> = report.roots.iter().map(|r| (r.re, r.im, r.radius)).collect();
    for i in 0..n {
        if report.roots[i].class == RootClass::Origin {
            continue;
        }
        let (re, im, rad) = pts[i];
        let modulus = re.hypot(im);
        let boundary = tol_rel * modulus;
        let partner = (0..n).any(|j| {
            j != i && {
                let (rj, ij, radj) = pts[j];
                let conj_dist = (rj - re).hypot(ij + im);
                let self_dist = (rj - re).hypot(ij - im);
                conj_dist <= rad + radj && self_dist > 2.0 * (rad + radj)
            }
        });
        let straddles = (im.abs() - rad) <= boundary && boundary < im.abs() + rad;
        report.roots[i].class = if straddles {
            RootClass::Unresolved
        } else if im.abs() <= boundary && !(im.abs() > 2.0 * rad && partner) {
            if re < 0.0 {
                RootClass::RealNegative
            } else {
                RootClass::RealPositive
            }
        } else {
            RootClass::NonrealPair
        };
    }
    for i in 0..n {
        let (re, im, rad) = pts[i];
        let isolated = (0..n).all(|j| j == i || (pts[j].0 - re).hypot(pts[j].1 - im) > 2.0 * (rad + pts[j].2));
        report.roots[i].simple = isolated;
    }
    report.count_real = report.roots.iter().filter(|r| r.class.is_real()).count();
    report.count_nonreal = report.roots.iter().filter(|r| r.class == RootClass::NonrealPair).count();
    report.count_unresolved = report.roots.iter().filter(|r| r.class == RootClass::Unresolved).count();
    report.all_simple = report.roots.iter().all(|r| r.simple);
    report.tol_rel = tol_rel;
    report
}

/// Roots and classification, doubling precision while any root is unresolved.
pub fn locate_zeros(poly: &TruncationPolynomial, tol_rel: f64) -> Result<ZeroReport> {
    let mut prec = poly.precision();
    let mut report = classify_real(roots_of_truncation(poly)?, tol_rel);
    for _ in 0..Precision::MAX_ESCALATIONS {
        if report.count_unresolved == 0 {
            break;
        }
        prec = prec.doubled();
        report = classify_real(roots_of_truncation(&poly.with_precision(prec))?, tol_rel);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{make_family, truncate, FamilySpec};

    #[test]
    fn hull_of_a_concave_sequence_is_everything() {
        let l: Vec<f64> = (0..6).map(|k| -((k * k) as f64)).collect();
        assert_eq!(upper_hull(&l), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(upper_hull(&[0.0, -5.0, 0.0]), vec![0, 2]);
    }

    #[test]
    fn double_root_of_the_partial_theta_quadratic() {
        let s = make_family(&FamilySpec::PartialTheta { a2: 4.0 }).unwrap();
        let rep = roots_of_truncation(&truncate(&s, 2).unwrap()).unwrap();
        assert_eq!(rep.roots.len(), 2);
        for r in &rep.roots {
            assert!((r.re + 4.0).abs() < 1e-12, "{r:?}");
            assert_eq!(r.class, RootClass::RealNegative);
            assert!(!r.simple);
        }
    }

    #[test]
    fn known_cubic() {
        // (z + 1)(z + 2)(z^2 + 1) = z^4 + 3z^3 + 3z^2 + 3z + 2
        let p = Precision::default();
        let poly = TruncationPolynomial::from_f64(&[2.0, 3.0, 3.0, 3.0, 1.0], p).unwrap();
        let rep = roots_of_truncation(&poly).unwrap();
        assert_eq!(rep.count_real, 2);
        assert_eq!(rep.count_nonreal, 2);
        assert!(rep.all_simple);
        let re: Vec<f64> = rep.roots.iter().map(|r| r.re).collect();
        assert!((re[0] + 2.0).abs() < 1e-14 && (re[1] + 1.0).abs() < 1e-14);
        for r in &rep.roots {
            assert!(r.residual < 1e-30);
        }
    }

    #[test]
    fn classification_rules() {
        let p = Precision::default();
        let mk = |re: f64, im: f64, radius: f64| Root {
            re,
            im,
            residual: 0.0,
            radius,
            class: RootClass::Unresolved,
            simple: false,
            value: Cplx::from_f64(p, re, im),
        };
        let report = |roots| ZeroReport {
            degree: 2,
            roots,
            count_real: 0,
            count_nonreal: 0,
            count_unresolved: 0,
            all_simple: false,
            tol_rel: 0.0,
            precision_bits: p.bits(),
            iterations: 0,
            disk_counts: vec![],
        };
        let rep = classify_real(report(vec![mk(-1.0, 0.3, 1e-20), mk(-1.0, -0.3, 1e-20)]), 1e-8);
        assert_eq!(rep.count_nonreal, 2);
        let rep = classify_real(report(vec![mk(-1.0, 1e-15, 1e-13), mk(-5.0, 0.0, 1e-13)]), 1e-8);
        assert_eq!(rep.count_real, 2);
        let rep = classify_real(report(vec![mk(-1.0, 1e-8, 1e-9), mk(-5.0, 0.0, 1e-13)]), 1e-8);
        assert_eq!(rep.count_unresolved, 1);
    }

    #[test]
    fn huge_dynamic_range() {
        let s = make_family(&FamilySpec::PartialTheta { a2: 9.0 }).unwrap();
        let rep = roots_of_truncation(&truncate(&s, 40).unwrap()).unwrap();
        assert!(rep.all_real_negative_simple());
        // k-th root lies near -a^{2k-1}
        let last = rep.roots.first().unwrap();
        assert!((last.re.abs().log(3.0) - 79.0).abs() < 0.5);
    }
}
