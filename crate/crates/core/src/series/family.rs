//! Family descriptors: the JSON-facing description of a coefficient sequence.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// How quotients of a quotient-specified family are generated.
#[derive(Clone, Debug, PartialEq)]
pub enum QuotientRule {
    /// `q_2, q_3, ...` as listed; every later quotient repeats the last entry.
    RepeatLast(Vec<f64>),
    /// `q_n = min(intercept + slope * n, cap)`.
    LinearCapped { intercept: f64, slope: f64, cap: f64 },
}

impl QuotientRule {
    pub fn value(&self, n: usize) -> f64 {
        assert!(n >= 2);
        match self {
            QuotientRule::RepeatLast(q) => q[(n - 2).min(q.len() - 1)],
            QuotientRule::LinearCapped { intercept, slope, cap } => (intercept + slope * n as f64).min(*cap),
        }
    }

    /// Index from which the quotient sequence is provably non-decreasing.
    pub fn monotone_from(&self) -> usize {
        match self {
            QuotientRule::RepeatLast(q) => q.len() + 1,
            QuotientRule::LinearCapped { .. } => 2,
        }
    }

    /// Supremum of the quotients from [`monotone_from`](Self::monotone_from) on.
    pub fn limit(&self) -> f64 {
        match self {
            QuotientRule::RepeatLast(q) => *q.last().expect("validated non-empty"),
            QuotientRule::LinearCapped { intercept, slope, cap } => {
                if *slope > 0.0 {
                    *cap
                } else {
                    intercept.min(*cap)
                }
            }
        }
    }

    /// Smallest `m >= 2` with `q_n >= 1` for every `n >= m`.
    pub fn at_least_one_from(&self) -> usize {
        match self {
            QuotientRule::RepeatLast(q) => q.iter().rposition(|&x| x < 1.0).map_or(2, |i| i + 3),
            QuotientRule::LinearCapped { intercept, slope, .. } => {
                if *intercept + 2.0 * slope >= 1.0 {
                    2
                } else {
                    ((1.0 - intercept) / slope).ceil().max(2.0) as usize
                }
            }
        }
    }
}

/// A generator family with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    /// `sum z^k a^{-k^2}`, parameterised by `a^2`.
    PartialTheta { a2: f64 },
    /// `sum z^k / prod_{j<=k} (a^j + 1)`.
    QKummer { a: f64 },
    /// `a_0`, `a_1` and the second quotients `q_n` for `n >= 2`.
    Quotients { a0: f64, a1: f64, rule: QuotientRule },
    /// A finite list of positive coefficients.
    Explicit { coeffs: Vec<f64> },
}

fn field_err(field: &str, reason: impl Into<String>) -> Error {
    Error::domain(field, reason)
}

fn number(obj: &Map<String, Value>, field: &str) -> Result<Option<f64>> {
    match obj.get(field) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .filter(|x| x.is_finite())
            .map(Some)
            .ok_or_else(|| field_err(field, format!("expected a finite number, got {v}"))),
    }
}

fn required(obj: &Map<String, Value>, field: &str) -> Result<f64> {
    number(obj, field)?.ok_or_else(|| field_err(field, "missing"))
}

fn positive(field: &str, x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(field_err(field, format!("must be positive, got {x}")))
    }
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(field_err(k, "unknown field")),
        None => Ok(()),
    }
}

impl FamilySpec {
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| field_err("function", format!("invalid JSON: {e}")))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| field_err("function", "expected a JSON object"))?;
        let family = obj
            .get("family")
            .ok_or_else(|| field_err("family", "missing"))?
            .as_str()
            .ok_or_else(|| field_err("family", "expected a string"))?;
        let spec = match family {
            "partial-theta" => {
                reject_unknown(obj, &["family", "a2"])?;
                FamilySpec::PartialTheta { a2: required(obj, "a2")? }
            }
            "q-kummer" => {
                reject_unknown(obj, &["family", "a"])?;
                FamilySpec::QKummer { a: required(obj, "a")? }
            }
            "quotients" => {
                reject_unknown(obj, &["family", "a0", "a1", "q", "tail", "rule"])?;
                let a0 = number(obj, "a0")?.unwrap_or(1.0);
                let a1 = number(obj, "a1")?.unwrap_or(1.0);
                let rule = match (obj.get("q"), obj.get("rule")) {
                    (Some(_), Some(_)) => return Err(field_err("rule", "give either `q` or `rule`, not both")),
                    (None, None) => return Err(field_err("q", "missing")),
                    (Some(q), None) => {
                        if let Some(tail) = obj.get("tail") {
                            if tail.as_str() != Some("repeat-last") {
                                return Err(field_err("tail", format!("only \"repeat-last\" is supported, got {tail}")));
                            }
                        }
                        let list = q.as_array().ok_or_else(|| field_err("q", "expected an array of numbers"))?;
                        let q = list
                            .iter()
                            .enumerate()
                            .map(|(i, v)| {
                                v.as_f64()
                                    .filter(|x| x.is_finite())
                                    .ok_or_else(|| field_err(&format!("q[{i}]"), format!("expected a finite number, got {v}")))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        QuotientRule::RepeatLast(q)
                    }
                    (None, Some(rule)) => {
                        if obj.contains_key("tail") {
                            return Err(field_err("tail", "only valid together with `q`"));
                        }
                        let r = rule.as_object().ok_or_else(|| field_err("rule", "expected an object"))?;
                        match r.get("kind").and_then(Value::as_str) {
                            Some("linear-capped") => {}
                            other => {
                                return Err(field_err("rule.kind", format!("expected \"linear-capped\", got {other:?}")))
                            }
                        }
                        reject_unknown(r, &["kind", "intercept", "slope", "cap"]).map_err(|e| match e {
                            Error::Domain { field, reason } => Error::Domain { field: format!("rule.{field}"), reason },
                            e => e,
                        })?;
                        let get = |f: &str| required(r, f).map_err(|_| field_err(&format!("rule.{f}"), "missing or not a finite number"));
                        QuotientRule::LinearCapped { intercept: get("intercept")?, slope: get("slope")?, cap: get("cap")? }
                    }
                };
                FamilySpec::Quotients { a0, a1, rule }
            }
            "explicit" => {
                reject_unknown(obj, &["family", "coeffs"])?;
                let list = obj
                    .get("coeffs")
                    .ok_or_else(|| field_err("coeffs", "missing"))?
                    .as_array()
                    .ok_or_else(|| field_err("coeffs", "expected an array of numbers"))?;
                let coeffs = list
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.as_f64()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| field_err(&format!("coeffs[{i}]"), format!("expected a finite number, got {v}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FamilySpec::Explicit { coeffs }
            }
            other => {
                return Err(field_err(
                    "family",
                    format!("unknown family {other:?}; expected partial-theta, q-kummer, quotients or explicit"),
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the domain of every parameter.
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::PartialTheta { a2 } => {
                if !(*a2 > 1.0) {
                    return Err(field_err("a2", format!("partial theta needs a > 1, got a^2 = {a2}")));
                }
            }
            FamilySpec::QKummer { a } => {
                if !(*a > 1.0) {
                    return Err(field_err("a", format!("q-Kummer needs a > 1, got {a}")));
                }
            }
            FamilySpec::Quotients { a0, a1, rule } => {
                positive("a0", *a0)?;
                positive("a1", *a1)?;
                match rule {
                    QuotientRule::RepeatLast(q) => {
                        if q.is_empty() {
                            return Err(field_err("q", "must contain at least one quotient"));
                        }
                        for (i, &x) in q.iter().enumerate() {
                            positive(&format!("q[{i}]"), x)?;
                        }
                        let last = q[q.len() - 1];
                        if last <= 1.0 {
                            return Err(field_err(
                                &format!("q[{}]", q.len() - 1),
                                format!("repeated tail quotient must exceed 1 for an entire function, got {last}"),
                            ));
                        }
                    }
                    QuotientRule::LinearCapped { intercept, slope, cap } => {
                        if *slope < 0.0 {
                            return Err(field_err("rule.slope", format!("must be non-negative, got {slope}")));
                        }
                        if !(*cap > 1.0) {
                            return Err(field_err("rule.cap", format!("must exceed 1 for an entire function, got {cap}")));
                        }
                        if *slope == 0.0 && !(*intercept > 1.0) {
                            return Err(field_err("rule.intercept", "constant rule must exceed 1 for an entire function"));
                        }
                        positive("rule.intercept", intercept + 2.0 * slope)
                            .map_err(|_| field_err("rule.intercept", "q_2 = intercept + 2 slope must be positive"))?;
                    }
                }
            }
            FamilySpec::Explicit { coeffs } => {
                if coeffs.is_empty() {
                    return Err(field_err("coeffs", "must contain at least one coefficient"));
                }
                for (i, &c) in coeffs.iter().enumerate() {
                    positive(&format!("coeffs[{i}]"), c)?;
                }
            }
        }
        Ok(())
    }

    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::PartialTheta { .. } => "partial-theta",
            FamilySpec::QKummer { .. } => "q-kummer",
            FamilySpec::Quotients { .. } => "quotients",
            FamilySpec::Explicit { .. } => "explicit",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FamilySpec::PartialTheta { a2 } => json!({"family": "partial-theta", "a2": a2}),
            FamilySpec::QKummer { a } => json!({"family": "q-kummer", "a": a}),
            FamilySpec::Quotients { a0, a1, rule: QuotientRule::RepeatLast(q) } => {
                json!({"family": "quotients", "a0": a0, "a1": a1, "q": q, "tail": "repeat-last"})
            }
            FamilySpec::Quotients { a0, a1, rule: QuotientRule::LinearCapped { intercept, slope, cap } } => json!({
                "family": "quotients", "a0": a0, "a1": a1,
                "rule": {"kind": "linear-capped", "intercept": intercept, "slope": slope, "cap": cap}
            }),
            FamilySpec::Explicit { coeffs } => json!({"family": "explicit", "coeffs": coeffs}),
        }
    }

    /// Constant-quotient family `q_n = q` with `a_0 = a_1 = 1`.
    pub fn constant_quotient(q: f64) -> Self {
        FamilySpec::Quotients { a0: 1.0, a1: 1.0, rule: QuotientRule::RepeatLast(vec![q]) }
    }
}
