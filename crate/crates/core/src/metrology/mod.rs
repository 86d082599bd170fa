//! Metrological figures of merit: Wineland squeezing, the quantum Fisher
//! information matrix, cat-state fidelity, and the closed forms they are
//! checked against.

mod fidelity;
mod moments;
mod qfi;
mod report;
mod squeezing;

pub use fidelity::{cat_fidelity, fidelity_with_pure, optimal_time};
pub use moments::{lossy_moments_oracle, lossy_trace_oracle, LossyMoments};
pub use qfi::{qfi_matrix, qfi_matrix_with_cutoff, qfi_max, qfi_n2_analytic, QfiMax, QfiN2, DEFAULT_EIGEN_CUTOFF};
pub use report::{MetrologyReport, Observables};
pub use squeezing::{
    squeezing_closed_form, squeezing_from_moments, squeezing_parameter, SqueezingResult,
};
