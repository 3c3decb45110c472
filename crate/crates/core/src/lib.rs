//! Programmable quantum processors for group-covariant channels.
//!
//! For a finite group with unitary representations `U` (input) and `V`
//! (output), the channels satisfying `T(U_g ρ U_g*) = V_g T(ρ) V_g*` are
//! exactly those whose Choi matrices commute with `Ū_g ⊗ V_g`. This crate
//! decomposes that commutant, builds processors that implement every
//! covariant channel from a program state, verifies them numerically and
//! evaluates program-dimension bounds.

pub mod bounds;
pub mod channel;
pub mod commutant;
pub mod error;
pub mod group;
pub mod matrix;
mod nnls;
pub mod processor;

pub use error::{Error, Result};
