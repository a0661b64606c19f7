//! Exact rational oracles shared by the integration tests.
#![allow(dead_code)]

use std::str::FromStr;

use dashu_int::IBig;
use lp_certify::{Precision, Real};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_real(r: &BigRational, prec: Precision) -> Real {
    let num = IBig::from_str(&r.numer().to_string()).unwrap();
    let den = IBig::from_str(&r.denom().to_string()).unwrap();
    let p = prec.bits();
    Real::from(num).with_precision(p).value() / Real::from(den).with_precision(p).value()
}

/// `a_n = q^{-n(n-1)/2}` for `n = 0..=degree`.
pub fn constant_quotient_coeffs(q: &BigRational, degree: usize) -> Vec<BigRational> {
    (0..=degree).map(|n| q.recip().pow((n * (n.max(1) - 1) / 2) as i32)).collect()
}

/// `a_k = 1 / prod_{j<=k} (a^j + 1)` for integer `a`.
pub fn kummer_coeffs(a: i64, n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    let mut pow = BigInt::one();
    for _ in 1..=n {
        pow *= a;
        let last = out.last().unwrap().clone();
        out.push(last / BigRational::from_integer(&pow + 1));
    }
    out
}

fn integer_poly(coeffs: &[BigRational]) -> Vec<BigInt> {
    let l = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()
}

fn trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
}

fn primitive(p: Vec<BigInt>) -> Vec<BigInt> {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        p
    } else {
        p.into_iter().map(|c| c / &g).collect()
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let lc = &b[db];
    let mut r = a.to_vec();
    for i in (0..=da - db).rev() {
        let lead = r[db + i].clone();
        for c in r.iter_mut() {
            *c *= lc;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &lead * bc;
        }
    }
    r.truncate(db);
    trim(&mut r);
    r
}

fn sign_changes(signs: &[i32]) -> usize {
    let s: Vec<i32> = signs.iter().copied().filter(|&s| s != 0).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots by a Sturm sequence in exact integer arithmetic.
pub fn sturm_real_roots(coeffs: &[BigRational]) -> usize {
    let p0 = primitive(integer_poly(coeffs));
    let p1: Vec<BigInt> = primitive(p0.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect());
    let mut seq = vec![p0, p1];
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if b.len() == 1 {
            break;
        }
        let lc = b.last().unwrap().clone();
        // prem multiplies the true remainder by a power of lc: count the multiplications
        let mults = a.len() - b.len() + 1;
        let r = prem(a, b);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        let positive_factor = lc.is_positive() || mults % 2 == 0;
        let r: Vec<BigInt> = if positive_factor { r.into_iter().map(|c| -c).collect() } else { r };
        seq.push(primitive_signed(r));
    }
    let at_pos: Vec<i32> = seq.iter().map(|p| sgn(p.last().unwrap())).collect();
    let at_neg: Vec<i32> = seq.iter().map(|p| sgn(p.last().unwrap()) * if (p.len() - 1) % 2 == 0 { 1 } else { -1 }).collect();
    sign_changes(&at_neg) - sign_changes(&at_pos)
}

fn primitive_signed(p: Vec<BigInt>) -> Vec<BigInt> {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).abs();
    if g.is_zero() || g.is_one() {
        p
    } else {
        p.into_iter().map(|c| c / &g).collect()
    }
}

fn sgn(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Rational bracket `[lo, hi]` of `sqrt(q)` of width `1/(den 10^digits)`.
pub fn sqrt_bracket(q: &BigRational, digits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::from(10).pow(digits);
    let inner = q.numer() * q.denom() * &scale * &scale;
    let root = inner.sqrt();
    let den = q.denom() * &scale;
    let lo = BigRational::new(root.clone(), den.clone());
    let hi = BigRational::new(root + 1, den);
    (lo, hi)
}

/// Sign of `f(-q^{k-1} sqrt(q))` for constant quotient `q`, from exact
/// partial sums split into rational and `sqrt(q)` parts plus a geometric
/// tail bound. `None` if the enclosure contains zero.
pub fn sign_at_negated_rho(q: &BigRational, k: usize) -> Option<i32> {
    let k = k as i64;
    let (s_lo, s_hi) = sqrt_bracket(q, 120);
    let (mut a, mut b) = (BigRational::zero(), BigRational::zero());
    // past n = k + 1 the term ratio is at most q^{-3/2} < 1/2
    let last = 2 * k + 40;
    let pow = |e: i64| if e >= 0 { q.pow(e as i32) } else { q.recip().pow((-e) as i32) };
    for n in 0..=last + 1 {
        let e = n * (k - 1) - n * (n - 1) / 2 + n / 2;
        let term = pow(e);
        if n == last + 1 {
            let tail = term * &s_hi * BigRational::from_integer(BigInt::from(2));
            let ends = [&a + &b * &s_lo, &a + &b * &s_hi];
            let (lo, hi) = if ends[0] <= ends[1] { (ends[0].clone(), ends[1].clone()) } else { (ends[1].clone(), ends[0].clone()) };
            return if lo - &tail > BigRational::zero() {
                Some(1)
            } else if hi + &tail < BigRational::zero() {
                Some(-1)
            } else {
                None
            };
        }
        let signed = if n % 2 == 0 { term } else { -term };
        if n % 2 == 0 {
            a += signed;
        } else {
            b += signed;
        }
    }
    unreachable!()
}
