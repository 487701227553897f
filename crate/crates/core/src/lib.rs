//! Stokes combinatorics, quasi-Hamiltonian dimension bookkeeping and numeric
//! moment-map checks for wild character varieties.

pub mod cartan;
pub mod deform;
pub mod error;
pub mod fission;
pub mod irregular;
pub mod matrix_real;
pub mod stokes;
pub mod sweep;

pub use cartan::{levi_of_vanishing, Group, GroupFactor, LeviDatum, Root, RootDatum};
pub use error::{Error, Result};
pub use irregular::{IrregularCurve, IrregularType, MarkedPoint};
pub use matrix_real::Execution;
