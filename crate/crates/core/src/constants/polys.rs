//! Fixed auxiliary polynomials and their real roots.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{to_f64, Abs, Precision, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NamedPolynomial {
    /// `b^11 - 2b^10 + 2b^7 - b^4 + 2b^3 - 2b^2 - 2`.
    #[serde(rename = "deg11")]
    Deg11,
    /// `t^5 - 2t^4 + 1.525t - 2/9`.
    #[serde(rename = "quintic_A")]
    QuinticA,
    /// `t^5 - 2t^4 + t - 1/9`.
    #[serde(rename = "quintic_B")]
    QuinticB,
    /// `y^4 - 2y^3 + 2`.
    #[serde(rename = "quartic_g")]
    QuarticG,
}

impl NamedPolynomial {
    pub const ALL: [NamedPolynomial; 4] = [Self::Deg11, Self::QuinticA, Self::QuinticB, Self::QuarticG];

    pub fn name(self) -> &'static str {
        match self {
            Self::Deg11 => "deg11",
            Self::QuinticA => "quintic_A",
            Self::QuinticB => "quintic_B",
            Self::QuarticG => "quartic_g",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::domain("poly_id", format!("unknown polynomial '{s}'; expected deg11, quintic_A, quintic_B or quartic_g")))
    }

    /// Ascending rational coefficients `(numerator, denominator)`.
    pub fn coefficients(self) -> Vec<(i64, i64)> {
        let c = |v: &[i64]| v.iter().map(|&x| (x, 1)).collect();
        match self {
            Self::Deg11 => c(&[-2, 0, -2, 2, -1, 0, 0, 2, 0, 0, -2, 1]),
            Self::QuinticA => vec![(-2, 9), (61, 40), (0, 1), (0, 1), (-2, 1), (1, 1)],
            Self::QuinticB => vec![(-1, 9), (1, 1), (0, 1), (0, 1), (-2, 1), (1, 1)],
            Self::QuarticG => c(&[2, 0, 0, -2, 1]),
        }
    }

    /// Published upper bound on the largest real root, when one is quoted.
    pub fn quoted_bound(self) -> Option<f64> {
        match self {
            Self::Deg11 => Some(1.47),
            Self::QuinticA => Some(1.73051),
            Self::QuinticB => Some(1.8521),
            Self::QuarticG => None,
        }
    }
}

fn horner(c: &[Real], x: &Real) -> Real {
    let mut acc = c[c.len() - 1].clone();
    for ck in c[..c.len() - 1].iter().rev() {
        acc = acc * x + ck;
    }
    acc
}

fn derivative(c: &[Real], prec: Precision) -> Vec<Real> {
    c.iter().enumerate().skip(1).map(|(k, ck)| ck * prec.int(k as i64)).collect()
}

fn sign(x: &Real) -> i8 {
    if *x > Real::ZERO {
        1
    } else if *x < Real::ZERO {
        -1
    } else {
        0
    }
}

/// Distinct real roots in ascending order, isolated between consecutive
/// critical points and refined by bisection to full precision. Roots of
/// even multiplicity are found only when they are critical points hit exactly.
pub fn real_roots(c: &[Real], prec: Precision) -> Vec<Real> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-(&c[0] / &c[1])];
    }
    let lead = c[n].clone().abs();
    let bound = c[..n].iter().map(|x| x.clone().abs() / &lead).fold(prec.zero(), |m, x| if x > m { x } else { m }) + prec.one();
    let mut cuts = vec![-bound.clone()];
    cuts.extend(real_roots(&derivative(c, prec), prec));
    cuts.push(bound);
    let mut roots: Vec<Real> = Vec::new();
    let push = |roots: &mut Vec<Real>, r: Real| {
        if roots.last() != Some(&r) {
            roots.push(r);
        }
    };
    for w in cuts.windows(2) {
        let (fa, fb) = (horner(c, &w[0]), horner(c, &w[1]));
        let (sa, sb) = (sign(&fa), sign(&fb));
        if sa == 0 {
            push(&mut roots, w[0].clone());
        }
        if sa * sb < 0 {
            let (mut lo, mut hi) = (w[0].clone(), w[1].clone());
            let half = prec.ratio(1, 2);
            for _ in 0..prec.bits() + 64 {
                let mid = (&lo + &hi) * &half;
                if mid == lo || mid == hi {
                    break;
                }
                if sign(&horner(c, &mid)) == sa {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            push(&mut roots, (&lo + &hi) * &half);
        }
        if sb == 0 {
            push(&mut roots, w[1].clone());
        }
    }
    roots
}

#[derive(Clone, Debug, Serialize)]
pub struct RootBound {
    pub poly_id: NamedPolynomial,
    pub real_roots: Vec<f64>,
    pub largest_root: Option<f64>,
    /// `|P(root)|` at the largest root.
    pub residual: Option<f64>,
    /// `P(root + 1e-6)`, positive when the polynomial is positive beyond the root.
    pub value_beyond: Option<f64>,
    pub quoted_bound: Option<f64>,
    pub below_quoted_bound: Option<bool>,
    /// Minimum over `y >= 0` as `(argmin, value)`.
    pub minimum_nonnegative: (f64, f64),
}

/// Largest real root and the minimum over the non-negative axis.
pub fn largest_real_root(id: NamedPolynomial) -> RootBound {
    let prec = Precision::default();
    let c: Vec<Real> = id.coefficients().into_iter().map(|(n, d)| prec.ratio(n, d)).collect();
    let roots = real_roots(&c, prec);
    let largest = roots.last().cloned();
    let mut candidates = vec![prec.zero()];
    candidates.extend(real_roots(&derivative(&c, prec), prec).into_iter().filter(|x| *x >= Real::ZERO));
    let mut best = (candidates[0].clone(), horner(&c, &candidates[0]));
    for x in &candidates[1..] {
        let v = horner(&c, x);
        if v < best.1 {
            best = (x.clone(), v);
        }
    }
    let beyond = largest.as_ref().map(|r| to_f64(&horner(&c, &(r + prec.real(1e-6)))));
    RootBound {
        poly_id: id,
        real_roots: roots.iter().map(to_f64).collect(),
        largest_root: largest.as_ref().map(to_f64),
        residual: largest.as_ref().map(|r| to_f64(&horner(&c, r)).abs()),
        value_beyond: beyond,
        quoted_bound: id.quoted_bound(),
        below_quoted_bound: id.quoted_bound().zip(largest.as_ref()).map(|(b, r)| to_f64(r) < b),
        minimum_nonnegative: (to_f64(&best.0), to_f64(&best.1)),
    }
}
