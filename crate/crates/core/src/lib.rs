//! Exact-arithmetic computational Lie theory.
//!
//! The crate builds root systems and Chevalley bases for the simple types
//! A-G (and products), constructs irreducible highest-weight modules with
//! rational action matrices, computes characters and plethysms, and decides
//! whether a module carries an r-matrix Poisson bracket on its symmetric
//! algebra. A companion module handles parabolic nilradical combinatorics.

pub mod chars;
pub mod error;
pub mod lie_algebra;
pub mod linalg;
pub mod parabolic;
pub mod poisson;
pub mod repr;
pub mod root_data;

pub use error::{Error, Result};
pub use linalg::{qi, qr, Q};
pub use root_data::{build_root_system, RootSystem, SimpleType, Weight};
