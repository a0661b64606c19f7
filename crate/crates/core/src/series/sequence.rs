//! Positive coefficient sequences with lazily materialised, cached values.

use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde_json::{json, Value};

use super::family::{FamilySpec, QuotientRule};
use crate::error::{Error, Result};
use crate::real::{is_negative, is_zero, to_f64, Precision, Real, SquareRoot};

#[derive(Clone)]
enum Rule {
    RepeatLast(Vec<Real>),
    LinearCapped { intercept: Real, slope: Real, cap: Real },
}

impl Rule {
    fn value(&self, n: usize, prec: Precision) -> Real {
        match self {
            Rule::RepeatLast(q) => q[(n - 2).min(q.len() - 1)].clone(),
            Rule::LinearCapped { intercept, slope, cap } => {
                let lin = intercept + slope * prec.int(n as i64);
                if lin < *cap {
                    lin
                } else {
                    cap.clone()
                }
            }
        }
    }
}

#[derive(Clone)]
enum Kind {
    PartialTheta { a2: Real, a: Real },
    QKummer { a: Real },
    Quotients { a0: Real, p1: Real, rule: Rule, float_rule: Option<QuotientRule> },
    Explicit { coeffs: Vec<Real> },
    Scaled { inner: Arc<CoefficientSequence>, c: Real, d: Real },
}

#[derive(Default)]
struct Cache {
    /// `a_0, a_1, ...`
    coeffs: Vec<Real>,
    /// `p[n] = p_n`; `p[0]` is unused.
    p: Vec<Real>,
    /// `q[n] = q_n`; `q[0]`, `q[1]` are unused.
    q: Vec<Real>,
    /// `a^n` for the q-Kummer family.
    power: Option<Real>,
}

/// Non-decreasing tail guarantee used to extrapolate quotient hypotheses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotoneTail {
    /// `q_n <= q_{n+1}` for every `n >= from`.
    pub from: usize,
    /// `q_n <= limit` and `q_n -> limit`; may be infinite.
    pub limit: f64,
}

/// A positive coefficient sequence `a_0, a_1, ...`.
///
/// Coefficients are materialised in working precision from `a_0` and the
/// first quotients `p_n = a_{n-1}/a_n`, which keeps values like `a^{-k^2}`
/// exact up to a few roundings. Values are cached on first use and the
/// object can be shared across threads.
pub struct CoefficientSequence {
    kind: Kind,
    spec: Option<FamilySpec>,
    precision: Precision,
    cache: RwLock<Cache>,
    ln_a: OnceLock<Real>,
}

impl Clone for CoefficientSequence {
    fn clone(&self) -> Self {
        Self::from_kind(self.kind.clone(), self.spec.clone(), self.precision)
    }
}

impl fmt::Debug for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSequence")
            .field("provenance", &self.provenance())
            .field("precision", &self.precision)
            .finish()
    }
}

/// Builds a sequence at the default precision.
pub fn make_family(spec: &FamilySpec) -> Result<CoefficientSequence> {
    CoefficientSequence::new(spec, Precision::default())
}

impl CoefficientSequence {
    fn from_kind(kind: Kind, spec: Option<FamilySpec>, precision: Precision) -> Self {
        Self { kind, spec, precision, cache: RwLock::new(Cache::default()), ln_a: OnceLock::new() }
    }

    pub fn new(spec: &FamilySpec, prec: Precision) -> Result<Self> {
        spec.validate()?;
        let kind = match spec {
            FamilySpec::PartialTheta { a2 } => {
                let a2 = prec.real(*a2);
                Kind::PartialTheta { a: a2.clone().sqrt(), a2 }
            }
            FamilySpec::QKummer { a } => Kind::QKummer { a: prec.real(*a) },
            FamilySpec::Quotients { a0, a1, rule } => {
                let (a0r, a1r) = (prec.real(*a0), prec.real(*a1));
                let real_rule = match rule {
                    QuotientRule::RepeatLast(q) => Rule::RepeatLast(q.iter().map(|&x| prec.real(x)).collect()),
                    QuotientRule::LinearCapped { intercept, slope, cap } => Rule::LinearCapped {
                        intercept: prec.real(*intercept),
                        slope: prec.real(*slope),
                        cap: prec.real(*cap),
                    },
                };
                Kind::Quotients { p1: &a0r / &a1r, a0: a0r, rule: real_rule, float_rule: Some(rule.clone()) }
            }
            FamilySpec::Explicit { coeffs } => Kind::Explicit { coeffs: coeffs.iter().map(|&c| prec.real(c)).collect() },
        };
        Ok(Self::from_kind(kind, Some(spec.clone()), prec))
    }

    /// Partial theta function with a working-precision parameter `a^2 > 1`.
    pub fn partial_theta(a2: &Real, prec: Precision) -> Result<Self> {
        let a2 = prec.round(a2);
        if a2 <= prec.one() {
            return Err(Error::domain("a2", format!("partial theta needs a > 1, got a^2 = {}", to_f64(&a2))));
        }
        let spec = FamilySpec::PartialTheta { a2: to_f64(&a2) };
        Ok(Self::from_kind(Kind::PartialTheta { a: a2.clone().sqrt(), a2 }, Some(spec), prec))
    }

    /// Quotient-specified family from working-precision values; `q[0]` is
    /// `q_2` and the last entry repeats.
    pub fn from_quotients(a0: &Real, a1: &Real, q: &[Real], prec: Precision) -> Result<Self> {
        let float_q: Vec<f64> = q.iter().map(to_f64).collect();
        let spec = FamilySpec::Quotients { a0: to_f64(a0), a1: to_f64(a1), rule: QuotientRule::RepeatLast(float_q) };
        spec.validate()?;
        if is_negative(a0) || is_zero(a0) || is_negative(a1) || is_zero(a1) {
            return Err(Error::domain("a0", "coefficients must be positive"));
        }
        let q: Vec<Real> = q.iter().map(|x| prec.round(x)).collect();
        let (a0, a1) = (prec.round(a0), prec.round(a1));
        let kind = Kind::Quotients { p1: &a0 / &a1, a0, rule: Rule::RepeatLast(q), float_rule: None };
        Ok(Self::from_kind(kind, Some(spec), prec))
    }

    /// The same family recomputed at another precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let r = |x: &Real| prec.round(x);
        let kind = match &self.kind {
            Kind::PartialTheta { a2, .. } => {
                let a2 = r(a2);
                Kind::PartialTheta { a: a2.clone().sqrt(), a2 }
            }
            Kind::QKummer { a } => Kind::QKummer { a: r(a) },
            Kind::Quotients { a0, p1, rule, float_rule } => {
                let a0n = r(a0);
                // recompute p_1 at the new precision when the parameters came from f64 input
                let p1n = match (&self.spec, float_rule) {
                    (Some(FamilySpec::Quotients { a0, a1, .. }), Some(_)) => prec.real(*a0) / prec.real(*a1),
                    _ => r(p1),
                };
                Kind::Quotients {
                    a0: a0n,
                    p1: p1n,
                    rule: match rule {
                        Rule::RepeatLast(q) => Rule::RepeatLast(q.iter().map(r).collect()),
                        Rule::LinearCapped { intercept, slope, cap } => {
                            Rule::LinearCapped { intercept: r(intercept), slope: r(slope), cap: r(cap) }
                        }
                    },
                    float_rule: float_rule.clone(),
                }
            }
            Kind::Explicit { coeffs } => Kind::Explicit { coeffs: coeffs.iter().map(r).collect() },
            Kind::Scaled { inner, c, d } => {
                Kind::Scaled { inner: Arc::new(inner.with_precision(prec)), c: r(c), d: r(d) }
            }
        };
        Self::from_kind(kind, self.spec.clone(), prec)
    }

    /// `c * f(d * z)` for `c, d > 0`.
    pub fn rescaled(&self, c: &Real, d: &Real) -> Result<Self> {
        for (name, v) in [("c", c), ("d", d)] {
            if is_negative(v) || is_zero(v) {
                return Err(Error::domain(name, "scale factors must be positive"));
            }
        }
        let prec = self.precision;
        let kind = Kind::Scaled { inner: Arc::new(self.clone()), c: prec.round(c), d: prec.round(d) };
        Ok(Self::from_kind(kind, None, prec))
    }

    /// `a_0^{-1} f(a_0 a_1^{-1} z)`, which has `a_0 = a_1 = 1` and the same quotients.
    pub fn normalized(&self) -> Result<Self> {
        let a0 = self.coeff(0)?;
        let a1 = self.coeff(1)?;
        self.rescaled(&(self.precision.one() / &a0), &(&a0 / &a1))
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Descriptor of the generating family, if the sequence was built from one.
    pub fn spec(&self) -> Option<&FamilySpec> {
        self.spec.as_ref()
    }

    pub fn provenance(&self) -> Value {
        match &self.kind {
            Kind::Scaled { inner, c, d } => json!({
                "family": "scaled", "c": to_f64(c), "d": to_f64(d), "inner": inner.provenance()
            }),
            _ => self.spec.as_ref().map_or(Value::Null, FamilySpec::to_json),
        }
    }

    /// Largest available index, or `None` for an infinite series.
    pub fn max_index(&self) -> Option<usize> {
        match &self.kind {
            Kind::Explicit { coeffs } => Some(coeffs.len() - 1),
            Kind::Scaled { inner, .. } => inner.max_index(),
            _ => None,
        }
    }

    fn check_index(&self, k: usize) -> Result<()> {
        match self.max_index() {
            Some(m) if k > m => Err(Error::Range(format!("coefficient index {k} beyond explicit list (last index {m})"))),
            _ => Ok(()),
        }
    }

    fn ensure(&self, n: usize) -> Result<()> {
        self.check_index(n)?;
        if self.cache.read().expect("cache lock").coeffs.len() > n {
            return Ok(());
        }
        let prec = self.precision;
        let mut cache = self.cache.write().expect("cache lock");
        if cache.coeffs.is_empty() {
            let a0 = match &self.kind {
                Kind::PartialTheta { .. } | Kind::QKummer { .. } => prec.one(),
                Kind::Quotients { a0, .. } => a0.clone(),
                Kind::Explicit { coeffs } => coeffs[0].clone(),
                Kind::Scaled { inner, c, .. } => c * inner.coeff(0)?,
            };
            cache.coeffs.push(a0);
            cache.p.push(prec.zero());
            cache.q.extend([prec.zero(), prec.zero()]);
        }
        while cache.coeffs.len() <= n {
            let m = cache.coeffs.len();
            let (p, q) = match &self.kind {
                Kind::PartialTheta { a2, a } => {
                    if m == 1 {
                        (a.clone(), None)
                    } else {
                        (&cache.p[m - 1] * a2, Some(a2.clone()))
                    }
                }
                Kind::QKummer { a } => {
                    let power = match &cache.power {
                        None => a.clone(),
                        Some(prev) => prev * a,
                    };
                    let p = &power + prec.one();
                    cache.power = Some(power);
                    let q = (m >= 2).then(|| &p / &cache.p[m - 1]);
                    (p, q)
                }
                Kind::Quotients { p1, rule, .. } => {
                    if m == 1 {
                        (p1.clone(), None)
                    } else {
                        let q = rule.value(m, prec);
                        (&cache.p[m - 1] * &q, Some(q))
                    }
                }
                Kind::Explicit { coeffs } => {
                    let p = &coeffs[m - 1] / &coeffs[m];
                    let q = (m >= 2)
                        .then(|| (&coeffs[m - 1] * &coeffs[m - 1]) / (&coeffs[m - 2] * &coeffs[m]));
                    (p, q)
                }
                Kind::Scaled { inner, d, .. } => {
                    let p = inner.p(m)? / d;
                    let q = if m >= 2 { Some(inner.q(m)?) } else { None };
                    (p, q)
                }
            };
            let a = match &self.kind {
                Kind::Explicit { coeffs } => coeffs[m].clone(),
                _ => &cache.coeffs[m - 1] / &p,
            };
            cache.coeffs.push(a);
            cache.p.push(p);
            if m >= 2 {
                cache.q.push(q.expect("quotient defined for m >= 2"));
            }
        }
        Ok(())
    }

    /// `a_k`.
    pub fn coeff(&self, k: usize) -> Result<Real> {
        self.ensure(k)?;
        Ok(self.cache.read().expect("cache lock").coeffs[k].clone())
    }

    /// `a_0, ..., a_n`.
    pub fn coeffs(&self, n: usize) -> Result<Vec<Real>> {
        self.ensure(n)?;
        Ok(self.cache.read().expect("cache lock").coeffs[..=n].to_vec())
    }

    /// `p_n = a_{n-1}/a_n` for `n >= 1`.
    pub fn p(&self, n: usize) -> Result<Real> {
        if n < 1 {
            return Err(Error::Range("p_n is defined for n >= 1".into()));
        }
        self.ensure(n)?;
        Ok(self.cache.read().expect("cache lock").p[n].clone())
    }

    /// `q_n = a_{n-1}^2/(a_{n-2} a_n)` for `n >= 2`.
    pub fn q(&self, n: usize) -> Result<Real> {
        if n < 2 {
            return Err(Error::Range("q_n is defined for n >= 2".into()));
        }
        self.ensure(n)?;
        Ok(self.cache.read().expect("cache lock").q[n].clone())
    }

    /// `p_1, ..., p_n` (index 0 of the result is `p_1`).
    pub fn p_values(&self, n: usize) -> Result<Vec<Real>> {
        self.ensure(n)?;
        Ok(self.cache.read().expect("cache lock").p[1..=n].to_vec())
    }

    /// Natural log of `a_k`.
    pub fn log_coeff(&self, k: usize) -> Result<Real> {
        self.check_index(k)?;
        match &self.kind {
            Kind::PartialTheta { a2, .. } => {
                let ln_a = self.ln_a.get_or_init(|| a2.ln() / self.precision.int(2));
                let k = k as i64;
                Ok(-(ln_a * self.precision.int(k * k)))
            }
            _ => Ok(self.coeff(k)?.ln()),
        }
    }

    /// Non-decreasing tail of the quotients, when the family proves one.
    pub fn monotone_tail(&self) -> Option<MonotoneTail> {
        match &self.kind {
            Kind::PartialTheta { a2, .. } => Some(MonotoneTail { from: 2, limit: to_f64(a2) }),
            // q_n = a - (a - 1)/(a^{n-1} + 1) increases to a
            Kind::QKummer { a } => Some(MonotoneTail { from: 2, limit: to_f64(a) }),
            Kind::Quotients { rule, .. } => match rule {
                Rule::RepeatLast(q) => Some(MonotoneTail { from: q.len() + 1, limit: to_f64(&q[q.len() - 1]) }),
                Rule::LinearCapped { .. } => match &self.spec {
                    Some(FamilySpec::Quotients { rule: r, .. }) => Some(MonotoneTail { from: 2, limit: r.limit() }),
                    _ => None,
                },
            },
            Kind::Explicit { .. } => None,
            Kind::Scaled { inner, .. } => inner.monotone_tail(),
        }
    }

    /// Smallest `m >= 2` with `q_n >= 1` for all `n >= m`; `None` for finite lists.
    pub fn at_least_one_from(&self) -> Option<usize> {
        match &self.kind {
            Kind::PartialTheta { .. } | Kind::QKummer { .. } => Some(2),
            Kind::Quotients { rule, .. } => {
                let one = self.precision.one();
                match rule {
                    Rule::RepeatLast(q) => Some(q.iter().rposition(|x| *x < one).map_or(2, |i| i + 3)),
                    Rule::LinearCapped { .. } => match &self.spec {
                        Some(FamilySpec::Quotients { rule: r, .. }) => Some(r.at_least_one_from()),
                        _ => None,
                    },
                }
            }
            Kind::Explicit { .. } => None,
            Kind::Scaled { inner, .. } => inner.at_least_one_from(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Abs;

    fn rel(a: &Real, b: &Real) -> f64 {
        to_f64(&((a - b) / b).abs())
    }

    #[test]
    fn partial_theta_coefficients_are_inverse_square_powers() {
        let p = Precision::default();
        let s = make_family(&FamilySpec::PartialTheta { a2: 4.0 }).unwrap();
        assert_eq!(s.coeffs(2).unwrap(), vec![p.one(), p.ratio(1, 2), p.ratio(1, 16)]);
        let a30 = s.coeff(30).unwrap();
        assert!(rel(&a30, &p.real(2.0).powi((-900).into())) < 1e-30);
    }

    #[test]
    fn log_coeff_of_partial_theta_is_exact_formula() {
        let p = Precision::default();
        let s = make_family(&FamilySpec::PartialTheta { a2: 3.24 }).unwrap();
        let ln_a = p.real(3.24).ln() / p.int(2);
        for k in [0usize, 1, 7, 40] {
            let expected = -(ln_a.clone() * p.int((k * k) as i64));
            let got = s.log_coeff(k).unwrap();
            assert!(to_f64(&(got - expected).abs()) < 1e-28 * (1.0 + (k * k) as f64));
        }
    }

    #[test]
    fn quotient_family_reproduces_supplied_quotients() {
        let q = [3.1, 3.3, 3.7];
        let s = make_family(&FamilySpec::Quotients {
            a0: 2.0,
            a1: 0.5,
            rule: QuotientRule::RepeatLast(q.to_vec()),
        })
        .unwrap();
        let p = Precision::default();
        for n in 2..10 {
            assert_eq!(s.q(n).unwrap(), p.real(q[(n - 2).min(2)]));
        }
        assert_eq!(s.p(1).unwrap(), p.real(4.0));
    }

    #[test]
    fn explicit_lists_are_finite() {
        let s = make_family(&FamilySpec::Explicit { coeffs: vec![1.0, 1.0, 0.25] }).unwrap();
        assert_eq!(s.max_index(), Some(2));
        assert!(matches!(s.coeff(3), Err(Error::Range(_))));
        assert_eq!(to_f64(&s.q(2).unwrap()), 4.0);
    }

    #[test]
    fn rescaling_keeps_quotients_bit_for_bit() {
        let p = Precision::default();
        let s = make_family(&FamilySpec::QKummer { a: 2.5 }).unwrap();
        let t = s.rescaled(&p.real(7.0), &p.real(0.3)).unwrap();
        for n in 2..20 {
            assert_eq!(s.q(n).unwrap(), t.q(n).unwrap());
        }
        let normal = s.normalized().unwrap();
        assert!(rel(&normal.coeff(0).unwrap(), &p.one()) < 1e-32);
        assert!(rel(&normal.coeff(1).unwrap(), &p.one()) < 1e-32);
        assert_eq!(t.monotone_tail(), s.monotone_tail());
    }

    #[test]
    fn partial_theta_working_precision_parameter() {
        let p = Precision::from_bits(200);
        let a2 = p.real(3.0) + p.real(2.0).powi((-120).into());
        let s = CoefficientSequence::partial_theta(&a2, p).unwrap();
        assert_eq!(s.q(5).unwrap(), a2);
        assert!(CoefficientSequence::partial_theta(&p.one(), p).is_err());
    }

    #[test]
    fn tails() {
        let lin = FamilySpec::Quotients {
            a0: 1.0,
            a1: 1.0,
            rule: QuotientRule::LinearCapped { intercept: 2.52, slope: 0.05, cap: 6.0 },
        };
        let s = make_family(&lin).unwrap();
        assert_eq!(s.monotone_tail(), Some(MonotoneTail { from: 2, limit: 6.0 }));
        assert!((to_f64(&s.q(10).unwrap()) - 3.02).abs() < 1e-15);
        assert_eq!(to_f64(&s.q(200).unwrap()), 6.0);
        let k = make_family(&FamilySpec::QKummer { a: 2.0 }).unwrap();
        assert_eq!(k.at_least_one_from(), Some(2));
        let e = make_family(&FamilySpec::Explicit { coeffs: vec![1.0, 2.0] }).unwrap();
        assert_eq!(e.monotone_tail(), None);
    }
}
