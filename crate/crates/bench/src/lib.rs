//! Shared fixtures for the benchmarks.

use dipsqueeze::{DickeState, EvolutionInputs, KernelSolver, QuadratureConfig, ReservoirParams};

/// `η = 5`, `Θ = 0.015` at the given dipolar strength.
pub fn standard_solver(epsilon_dd: f64) -> KernelSolver {
    let p = ReservoirParams::new(5.0, epsilon_dd, 0.015).expect("valid parameters");
    KernelSolver::new(&p, &QuadratureConfig::default()).expect("stable reservoir")
}

/// The `+x` coherent state after moderate twisting and dephasing.
pub fn twisted_state(n_atoms: usize) -> DickeState {
    let css = DickeState::css_plus_x(n_atoms).expect("n_atoms > 0");
    let inputs = EvolutionInputs::new(0.0, 0.0148, 3e-4, 1e-5, 50.0).expect("valid inputs");
    dipsqueeze::evolve(&css, &inputs).expect("evolution")
}
