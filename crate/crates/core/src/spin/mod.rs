//! Collective spin in the Dicke basis `|j, m⟩`, `j = N/2`, and its exact
//! evolution under dephasing and one-body loss.
//!
//! Basis index `i` stores `m = i − j`, so `m` runs from `−j` to `j`.

mod evolution;
mod operators;
mod state;

pub use evolution::{evolve, EvolutionInputs, MapExponents};
pub use operators::{collective_operator, magnetic_number, SpinComponent};
pub use state::DickeState;

pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
pub type CVector = nalgebra::DVector<num_complex::Complex64>;
