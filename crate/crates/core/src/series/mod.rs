//! Positive-coefficient series, their quotient sequences, and certified
//! evaluation.

pub mod eval;
pub mod family;
pub mod poly;
pub mod profile;
pub mod sequence;

pub use eval::{evaluate, evaluate_real, Analytic, EvalOptions, Evaluation, RealEvaluation, SeriesPlan};
pub use family::{FamilySpec, QuotientRule};
pub use poly::{section, truncate, Source, TruncationPolynomial};
pub use profile::{quotients, QuotientProfile, Thresholds, CUBE_ROOT_REGIME};
pub use sequence::{make_family, CoefficientSequence, MonotoneTail};
