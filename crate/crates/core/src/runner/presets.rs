//! Figure presets, written in the config format so they double as
//! examples of it.
//!
//! All presets use `η = 5`, `Θ = 0.015`, `ℓ_A = ℓ_B` at zero
//! temperature. Time grids are sized so that every preset runs in
//! seconds; tighten them for publication-quality curves.

use super::config::ScenarioConfig;
use crate::error::{Error, Result};

pub const PRESET_NAMES: &[&str] = &[
    "fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c", "fig5a", "fig5b", "fig5c", "fig6a", "fig6b",
];

const RESERVOIR: &str = "\
reservoir.eta = 5
reservoir.epsilon_dd = -1
reservoir.theta = 0.015
";

/// Config text of a preset.
pub fn preset_text(name: &str) -> Result<String> {
    let body = match name {
        // twisting rate and dephasing function
        "fig2" => "\
sweep.parameter = epsilon_dd
sweep.values = -1, 0, 1
time.t_min = 0.01
time.t_max = 1000
time.n_points = 120
time.spacing = log
outputs = kernels, spectral_density
",
        // squeezing against dipolar strength
        "fig3a" => "\
n_atoms = 100
sweep.parameter = epsilon_dd
sweep.values = -1, 0, 1
time.t_min = 0.1
time.t_max = 50
time.n_points = 80
time.spacing = log
outputs = xi2
",
        // squeezing against particle loss
        "fig3b" => "\
n_atoms = 100
sweep.parameter = gamma_loss_rel
sweep.values = 0, 0.002, 0.01
time.t_min = 0.1
time.t_max = 50
time.n_points = 80
time.spacing = log
outputs = xi2
",
        // QFI time series for a few atom numbers
        "fig4a" => "\
sweep.parameter = n_atoms
sweep.values = 10, 30, 50
time.t_min = 1
time.t_max = 150
time.n_points = 150
time.spacing = linear
outputs = qfi
",
        // maximal amplification rate against N
        "fig4b" => "\
sweep.parameter = n_atoms
sweep.values = 10, 20, 30, 40, 50, 60, 70, 80, 90, 100
time.t_min = 5
time.t_max = 150
time.n_points = 59
time.spacing = linear
outputs = qfi
output.timeseries = false
",
        // amplification rate and optimal time against dipolar strength
        "fig4c" => "\
n_atoms = 100
sweep.parameter = epsilon_dd
sweep.values = -1, -0.5, 0, 0.5, 1
time.t_min = 4
time.t_max = 200
time.n_points = 50
time.spacing = linear
outputs = qfi
output.timeseries = false
",
        // two atoms: numerical and closed-form QFI
        "fig5a" => "\
n_atoms = 2
sweep.parameter = gamma_loss_rel
sweep.values = 0, 0.001, 0.002, 0.005
time.t_min = 1
time.t_max = 300
time.n_points = 150
time.spacing = linear
outputs = qfi
overlay.n2_analytic = true
",
        // maximal QFI against N under loss
        "fig5b" => "\
sweep.parameter = gamma_loss_rel
sweep.values = 0, 0.001, 0.002, 0.005
sweep.inner.parameter = n_atoms
sweep.inner.values = 2, 5, 10, 20, 30, 40, 50
time.t_min = 5
time.t_max = 150
time.n_points = 30
time.spacing = linear
outputs = qfi
output.timeseries = false
",
        // maximal QFI over N² against N under loss, small N
        "fig5c" => "\
sweep.parameter = gamma_loss_rel
sweep.values = 0, 0.001, 0.002, 0.005
sweep.inner.parameter = n_atoms
sweep.inner.values = 2, 3, 4, 6, 8, 10, 15, 20
time.t_min = 5
time.t_max = 150
time.n_points = 30
time.spacing = linear
outputs = qfi
output.timeseries = false
",
        // cat fidelity against dipolar strength
        "fig6a" => "\
sweep.parameter = epsilon_dd
sweep.values = -1, -0.5, 0, 0.5, 1
sweep.inner.parameter = n_atoms
sweep.inner.values = 10, 30, 50
time.t_min = 1
time.t_max = 300
time.n_points = 40
time.spacing = log
outputs = fidelity
",
        // cat fidelity against N under loss; odd N twists into a cat
        // along y, so only even N are listed
        "fig6b" => "\
sweep.parameter = gamma_loss_rel
sweep.values = 0, 0.001, 0.002, 0.005
sweep.inner.parameter = n_atoms
sweep.inner.values = 2, 4, 10, 20, 30, 40, 50
time.t_min = 1
time.t_max = 300
time.n_points = 40
time.spacing = log
outputs = fidelity
",
        other => {
            return Err(Error::Config(format!(
                "unknown preset {other:?} (known: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(format!("# preset {name}\n{RESERVOIR}{body}"))
}

pub fn figure_preset(name: &str) -> Result<ScenarioConfig> {
    ScenarioConfig::parse(&preset_text(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::config::SweepParameter;

    #[test]
    fn every_preset_parses() {
        for name in PRESET_NAMES {
            let cfg = figure_preset(name).unwrap();
            let p = cfg.reservoir.dimensionless().unwrap();
            assert_eq!((p.eta, p.theta), (5.0, 0.015), "{name}");
        }
        assert!(figure_preset("fig7").unwrap_err().is_config());
    }

    #[test]
    fn preset_contents() {
        let f2 = figure_preset("fig2").unwrap();
        let s = f2.sweep.unwrap();
        assert_eq!(s.parameter, SweepParameter::EpsilonDd);
        assert_eq!(s.values, vec![-1.0, 0.0, 1.0]);
        assert!(f2.outputs.kernels);

        let f5 = figure_preset("fig5a").unwrap();
        assert_eq!(f5.n_atoms, 2);
        assert!(f5.n2_analytic);
        assert_eq!(f5.sweep.unwrap().values, vec![0.0, 0.001, 0.002, 0.005]);

        let f6 = figure_preset("fig6a").unwrap();
        assert!(f6.outputs.fidelity);
        assert_eq!(f6.gamma_loss_rel, 0.0);
        assert_eq!(f6.inner_sweep.unwrap().values, vec![10.0, 30.0, 50.0]);

        let f4 = figure_preset("fig4a").unwrap();
        assert_eq!(f4.sweep.unwrap().values, vec![10.0, 30.0, 50.0]);
    }
}
