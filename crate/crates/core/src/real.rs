//! Working-precision real and complex numbers.
//!
//! Everything that feeds a certified sign or a root classification is
//! computed in [`Real`], a correctly rounded binary float whose precision is
//! carried by a [`Precision`]. The exponent range is unbounded, which is what
//! lets coefficients like `a^{-k^2}` be materialised without underflow.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use serde::{Deserialize, Serialize};

pub use dashu_float::ops::{Abs, SquareRoot};

/// Binary big float with round-half-to-even.
pub type Real = FBig<HalfEven, 2>;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in significant bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Precision {
    bits: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Self::from_digits(Self::DEFAULT_DIGITS)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits (~{} digits)", self.bits, self.digits())
    }
}

impl Precision {
    /// Quad-equivalent default.
    pub const DEFAULT_DIGITS: u32 = 34;
    /// Number of doublings attempted before a computation is declared unresolved.
    pub const MAX_ESCALATIONS: u32 = 4;

    pub fn from_bits(bits: usize) -> Self {
        Self { bits: bits.max(53) }
    }

    pub fn from_digits(digits: u32) -> Self {
        Self::from_bits((f64::from(digits) * LOG2_10).ceil() as usize)
    }

    pub fn bits(self) -> usize {
        self.bits
    }

    pub fn digits(self) -> u32 {
        (self.bits as f64 / LOG2_10).floor() as u32
    }

    pub fn doubled(self) -> Self {
        Self::from_bits(self.bits * 2)
    }

    /// Bound on the relative error of one correctly rounded operation.
    pub fn unit_roundoff(self) -> f64 {
        (-(self.bits as f64)).exp2()
    }

    /// Exact conversion of a finite `f64`, then rounding to this precision.
    pub fn real(self, x: f64) -> Real {
        assert!(x.is_finite(), "non-finite value {x} cannot enter working precision");
        Real::try_from(x)
            .expect("finite f64 converts")
            .with_precision(self.bits)
            .value()
    }

    pub fn int(self, n: i64) -> Real {
        Real::from(IBig::from(n)).with_precision(self.bits).value()
    }

    pub fn zero(self) -> Real {
        self.int(0)
    }

    pub fn one(self) -> Real {
        self.int(1)
    }

    /// `num / den` rounded once.
    pub fn ratio(self, num: i64, den: i64) -> Real {
        self.int(num) / self.int(den)
    }

    /// Re-round `x` to this precision.
    pub fn round(self, x: &Real) -> Real {
        x.clone().with_precision(self.bits).value()
    }
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

pub fn is_zero(x: &Real) -> bool {
    x.repr().is_zero()
}

pub fn is_negative(x: &Real) -> bool {
    *x.repr().significand() < IBig::ZERO
}

/// `log2 |x|` as an `f64`, valid far outside the `f64` range; `-inf` for zero.
pub fn log2_abs(x: &Real) -> f64 {
    let repr = x.repr();
    if repr.is_zero() {
        return f64::NEG_INFINITY;
    }
    if repr.is_infinite() {
        return f64::INFINITY;
    }
    let digits = repr.digits() as isize;
    let keep = digits.min(60);
    let sig = repr.significand();
    let top: IBig = sig >> ((digits - keep) as usize);
    let top = i128::try_from(top).expect("at most 60 bits").unsigned_abs() as f64;
    top.log2() + (repr.exponent() + digits - keep) as f64
}

pub fn ln_abs(x: &Real) -> f64 {
    log2_abs(x) * std::f64::consts::LN_2
}

/// `x * 2^shift`, exact.
pub fn scale2(x: &Real, shift: isize) -> Real {
    if shift >= 0 {
        x.clone() << shift
    } else {
        x.clone() >> (-shift)
    }
}

pub fn max_real(a: Real, b: Real) -> Real {
    if a >= b {
        a
    } else {
        b
    }
}

/// Complex number over [`Real`].
#[derive(Clone, Debug, PartialEq)]
pub struct Cplx {
    pub re: Real,
    pub im: Real,
}

impl Cplx {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn real(re: Real) -> Self {
        let im = Real::ZERO.with_precision(re.precision().max(1)).value();
        Self { re, im }
    }

    pub fn from_f64(prec: Precision, re: f64, im: f64) -> Self {
        Self::new(prec.real(re), prec.real(im))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: &Real) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    pub fn div(&self, other: &Cplx) -> Cplx {
        let d = other.norm_sqr();
        let re = (&self.re * &other.re + &self.im * &other.im) / &d;
        let im = (&self.im * &other.re - &self.re * &other.im) / &d;
        Cplx::new(re, im)
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    /// `log2 |z|`, overflow-free.
    pub fn log2_abs(&self) -> f64 {
        let a = log2_abs(&self.re);
        let b = log2_abs(&self.im);
        let m = a.max(b);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + 0.5 * ((2.0 * (a - m)).exp2() + (2.0 * (b - m)).exp2()).log2()
    }

    /// Argument in `(-pi, pi]`, computed from an exponent-normalised copy.
    pub fn arg(&self) -> f64 {
        let shift = -(self.log2_abs().floor() as isize);
        if !self.log2_abs().is_finite() {
            return 0.0;
        }
        let re = to_f64(&scale2(&self.re, shift));
        let im = to_f64(&scale2(&self.im, shift));
        im.atan2(re)
    }
}

impl Add for &Cplx {
    type Output = Cplx;
    fn add(self, rhs: &Cplx) -> Cplx {
        Cplx::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Cplx {
    type Output = Cplx;
    fn sub(self, rhs: &Cplx) -> Cplx {
        Cplx::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Cplx {
    type Output = Cplx;
    fn mul(self, rhs: &Cplx) -> Cplx {
        Cplx::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx::new(-self.re, -self.im)
    }
}

/// `e^{2 pi i m / 2^level}` for `m < 2^level`, built from half-angle square
/// roots so that every sample point of a power-of-two contour is correctly
/// rounded at `prec`.
pub fn dyadic_root_of_unity(prec: Precision, level: u32) -> Cplx {
    // e^{2 pi i / 2^level}
    match level {
        0 => Cplx::new(prec.one(), prec.zero()),
        1 => Cplx::new(prec.int(-1), prec.zero()),
        _ => {
            // start from e^{i pi/2} = i and halve the angle
            let mut c = prec.zero();
            let mut s = prec.one();
            let half = prec.ratio(1, 2);
            for _ in 2..level {
                let c_new = ((prec.one() + &c) * &half).sqrt();
                s = &s / (prec.int(2) * &c_new);
                c = c_new;
            }
            Cplx::new(c, s)
        }
    }
}
