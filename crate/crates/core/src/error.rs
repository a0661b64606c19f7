use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter outside the domain of the requested object.
    #[error("domain error: {field}: {reason}")]
    Domain { field: String, reason: String },

    /// An index beyond what the object can provide.
    #[error("range error: {0}")]
    Range(String),

    /// No truncation point satisfied the tail criterion within the degree cap.
    #[error("series did not reach a certified truncation point by degree {cap} at |z| = {radius:e}")]
    Convergence { cap: usize, radius: f64 },

    /// Error bounds straddle zero even after precision escalation.
    #[error("unresolved after escalation to {bits} bits: {what}")]
    Unresolved { what: String, bits: usize },

    /// Root iteration failed to converge.
    #[error("root solver did not converge after {iterations} iterations ({unconverged} roots unconverged)")]
    Solver { iterations: usize, unconverged: usize },

    /// The contour passes too close to a zero to certify the winding count.
    #[error("contour too close to a zero: min |f| = {min_modulus:e} below 10x error bound {bound:e}; perturb the radius")]
    ContourTooClose { min_modulus: f64, bound: f64 },

    /// Bisection predicate did not change sign across the bracket.
    #[error("bracket error: predicate is {value} at both ends of [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64, value: bool },

    /// Truncation degree too small for the requested radius.
    #[error("truncation degree {degree} too small for radius {radius:e}; use at least {recommended}")]
    Degree { degree: usize, radius: f64, recommended: usize },

    /// A numerical result contradicts a proven identity.
    #[error("inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn domain(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Domain { field: field.into(), reason: reason.into() }
    }
}
