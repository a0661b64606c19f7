//! Radii of the disks that isolate the first `j` zeros.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::series::{CoefficientSequence, QuotientProfile};

/// `q_2 q_3 ... q_j sqrt(q_{j+1})`, accumulated as a sum of logarithms.
pub fn rho(profile: &QuotientProfile, j: usize) -> Result<Real> {
    if j < 2 {
        return Err(Error::domain("j", "disk index must be at least 2"));
    }
    if j + 1 > profile.n_max() {
        return Err(Error::Range(format!("rho_{j} needs q_{} but the profile ends at {}", j + 1, profile.n_max())));
    }
    let prec = profile.precision;
    let mut log = prec.zero();
    for n in 2..=j {
        log = log + profile.q(n)?.ln();
    }
    log = log + profile.q(j + 1)?.ln() * prec.ratio(1, 2);
    Ok(log.exp())
}

/// `rho_j` of the sequence, in normalized coordinates (`a_0 = a_1 = 1`).
pub fn rho_of(seq: &CoefficientSequence, j: usize) -> Result<Real> {
    if j < 2 {
        return Err(Error::domain("j", "disk index must be at least 2"));
    }
    let prec = seq.precision();
    let mut log = prec.zero();
    for n in 2..=j {
        log = log + seq.q(n)?.ln();
    }
    log = log + seq.q(j + 1)?.ln() * prec.ratio(1, 2);
    Ok(log.exp())
}

/// Radius of the `j`-th disk in the coordinates of `f` itself: `p_1 rho_j`.
pub fn disk_radius(seq: &CoefficientSequence, j: usize) -> Result<Real> {
    Ok(seq.p(1)? * rho_of(seq, j)?)
}
