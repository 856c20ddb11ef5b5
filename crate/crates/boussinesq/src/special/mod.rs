//! Special functions: complex log-gamma and parabolic cylinder functions,
//! implemented to the accuracy the local-parametrix identities require
//! (≈1e-13 relative for log-gamma, ≈5e-12 for the parabolic cylinder
//! function away from its crossover annulus).

pub mod gamma;
pub mod pcf;
