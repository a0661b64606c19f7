use serde::Serialize;
use serde_json::{Map, Value};

use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub enum Criterion {
    #[serde(rename = "hutchinson")]
    Hutchinson,
    #[serde(rename = "lemma12")]
    Lemma12,
    #[serde(rename = "theoremD")]
    TheoremD,
    #[serde(rename = "mthm1")]
    Mthm1,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [Criterion::Hutchinson, Criterion::Lemma12, Criterion::TheoremD, Criterion::Mthm1];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Hutchinson => "hutchinson",
            Criterion::Lemma12 => "lemma12",
            Criterion::TheoremD => "theoremD",
            Criterion::Mthm1 => "mthm1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    Fail,
    HypothesesNotMet,
}

/// Where on the scan interval a sample lies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Location {
    Interior,
    /// The closed end `-a_1/a_2`.
    LeftEndpoint,
    /// The origin.
    RightEndpoint,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A real point with its certified value.
    SignPoint {
        z0: f64,
        value: f64,
        error_bound: f64,
        location: Location,
        /// The exact working-precision point.
        #[serde(skip)]
        point: Real,
    },
    /// A violating index.
    Index { n: usize, value: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub satisfied: bool,
    pub measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Hypothesis {
    pub fn new(name: impl Into<String>, satisfied: bool, measured: Option<f64>) -> Self {
        Self { name: name.into(), satisfied, measured, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub criterion: Criterion,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub hypotheses: Vec<Hypothesis>,
    /// Name of the first unsatisfied hypothesis, when the outcome is
    /// `HYPOTHESES_NOT_MET`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_hypothesis: Option<String>,
    pub measurements: Map<String, Value>,
}

impl Verdict {
    pub fn new(criterion: Criterion, outcome: Outcome) -> Self {
        Self {
            criterion,
            outcome,
            witness: None,
            hypotheses: Vec::new(),
            failed_hypothesis: None,
            measurements: Map::new(),
        }
    }

    pub fn not_met(criterion: Criterion, hypotheses: Vec<Hypothesis>) -> Self {
        let failed = hypotheses.iter().find(|h| !h.satisfied).map(|h| h.name.clone());
        Self { hypotheses, failed_hypothesis: failed, ..Self::new(criterion, Outcome::HypothesesNotMet) }
    }

    pub fn measure(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.measurements.insert(key.to_string(), value.into());
        self
    }

    pub fn witness_point(&self) -> Option<&Real> {
        match &self.witness {
            Some(Witness::SignPoint { point, .. }) => Some(point),
            _ => None,
        }
    }
}
