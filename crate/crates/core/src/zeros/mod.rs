//! Zero location, disk counts and sign alternation.

pub mod alternation;
pub mod census;
pub mod quartic;
pub mod rho;
pub mod roots;
pub mod winding;

pub use alternation::{sign_alternation_check, SignAlternation, SignRow, SignStatus};
pub use census::{nonreal_census, Census, CensusRow};
pub use quartic::{quartic_unit_disk_count, QuarticCheck};
pub use rho::{disk_radius, rho, rho_of};
pub use roots::{classify_real, locate_zeros, roots_of_truncation, roots_with_options, Root, RootClass, SolverOptions, ZeroReport, DEFAULT_REAL_TOL};
pub use winding::{count_zeros_disk, ContourPolicy, DiskCount};
