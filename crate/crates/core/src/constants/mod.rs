//! Named constants, root bounds and explicit inequalities.

pub mod bisection;
pub mod inequalities;
pub mod polys;
pub mod theta;

pub use bisection::{bisect, precision_for, BisectionResult};
pub use inequalities::{check_estqq, check_nu_k, check_psi_positive, limit_margin, limit_threshold, verify_family, InequalityReport};
pub use polys::{largest_real_root, real_roots, NamedPolynomial, RootBound};
pub use theta::{c_n, q_infinity, section_predicate, theta_predicate, verify_c_interleaving, Interleaving, Relation, RelationStatus, SectionConstant};
