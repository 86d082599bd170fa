//! Reservoir-engineered one-axis twisting in a quasi-1D dipolar Bose gas.
//!
//! The crate follows one pipeline end to end:
//!
//! 1. [`reservoir`]: dimensionless reservoir parameters, the effective 1D
//!    dipolar form factor, the Bogoliubov dispersion, the spectral density
//!    `J(ω)` and the time-dependent kernels `Δ(t)` (twisting rate) and
//!    `γ(t)` (dephasing function).
//! 2. [`spin`]: collective-spin density matrices in the Dicke basis and the
//!    closed-form dephasing-plus-loss map.
//! 3. [`metrology`]: Wineland squeezing, the quantum Fisher information
//!    matrix, cat-state fidelity and the closed-form oracles for each.
//! 4. [`runner`]: scenario configs, figure presets, parameter sweeps and CSV
//!    output.
//!
//! All quantities are dimensionless: energies in `ħω⊥`, times in `1/ω⊥`,
//! lengths in the reservoir transverse width `ℓ_B`.

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod interp;
pub mod metrology;
pub mod output;
pub mod quadrature;
pub mod reservoir;
pub mod runner;
pub mod special;
pub mod spin;

pub use error::{Error, Result};
pub use metrology::{
    cat_fidelity, lossy_moments_oracle, optimal_time, qfi_matrix, qfi_max, qfi_n2_analytic,
    squeezing_closed_form, squeezing_parameter, LossyMoments, MetrologyReport, QfiMax, QfiN2,
    SqueezingResult,
};
pub use quadrature::QuadratureConfig;
pub use reservoir::{
    KernelSolver, KernelTable, LabParams, ReservoirParams, SpectralBranch, StabilityReport,
};
pub use spin::{collective_operator, evolve, DickeState, EvolutionInputs, SpinComponent};

/// Crate version, written into CSV provenance headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
