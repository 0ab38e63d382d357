//! Singleton-type bounds for locally repairable codes: finite-field linear
//! algebra, repair-set combinatorics, closed-form bounds and the two optimal
//! constructions, each backed by brute-force oracles.

#![allow(clippy::int_plus_one)]

pub mod bounds;
pub mod code;
pub mod construct;
pub mod error;
pub mod gf;
pub mod io;
pub mod locality;
pub mod matgf;

pub use code::{Distance, DistanceMethod, LinearCode};
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use matgf::Matrix;
