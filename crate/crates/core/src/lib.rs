//! Exact verification engine for the melting-crystal model.
//!
//! Computes the 5D and 4D partition functions, their quantum curves and
//! Kac-Schwarz operators, the `R -> 0` limit statements and the Fay-type
//! bilinear identities with exact rational arithmetic, reporting every check
//! with an explicit trusted window.

pub mod bilinear;
pub mod error;
pub mod exactcore;
pub mod fock;
pub mod limit4d;
pub mod partfun;
pub mod partitions;
pub mod profile;
pub mod qcurve;
pub mod report;

pub use error::{Error, Result};
