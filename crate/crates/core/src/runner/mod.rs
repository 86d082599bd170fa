//! Batch runs: config parsing, figure presets, parameter sweeps and CSV
//! datasets.

mod config;
mod presets;
mod scenario;
mod summary;

pub use config::{
    Outputs, ReservoirSpec, ScenarioConfig, Spacing, SpectralGrid, Sweep, SweepParameter, TimeGrid,
    KEYS,
};
pub use presets::{figure_preset, preset_text, PRESET_NAMES};
pub use scenario::{run_scenario, run_scenario_with, Dataset, RunOptions, SUMMARY_HEADER};
pub use summary::{log_log_slope, qfi_amplification_summary, refine_optimal_time, QfiPeak};
