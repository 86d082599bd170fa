//! Reservoir side: effective 1D dipolar interaction, Bogoliubov modes,
//! spectral density and the dephasing kernels.

mod dispersion;
mod kernels;
mod params;
mod spectral;

pub use dispersion::{
    bogoliubov_energy, bogoliubov_uv, coupling_weight, dipole_form_factor, dipole_form_factor_slope,
    energy_slope, radicand, stability_scan, StabilityReport,
};
pub use kernels::{delta_infinity, delta_kernel, gamma_kernel, KernelSolver, KernelTable};
pub use params::{
    effective_epsilon_dd, lab_units_to_dimensionless, magic_angle, LabParams, ReservoirParams,
};
pub use spectral::{spectral_density, Dispersion, SpectralBranch, SpectralRoot};
