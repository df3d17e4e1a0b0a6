//! Local normal zeta functions of class-2 nilpotent groups: exact closed
//! forms, symbolic functional equations and brute-force lattice oracles.

pub mod error;
pub mod exactalg;
pub mod flagcomb;
pub mod fpgeom;
pub mod grouppres;
pub mod oracle;
pub mod zetacore;

pub use error::{Error, Result};
