//! Exact genus, monodromy and lattice computations for iterated algebraic
//! correspondences on the projective line.

pub mod census;
pub mod cli;
pub mod constellation;
pub mod ellcorr;
pub mod exceptional;
pub mod friedgset;
pub mod permgroup;
pub mod polyexact;
pub mod quadorder;
pub mod ramcalc;
pub mod util;
