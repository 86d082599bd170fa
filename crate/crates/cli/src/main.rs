//! `dipsqueeze` command-line front end.
//!
//! Exit status: 0 on success, 2 on a configuration error, 3 on a
//! numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dipsqueeze::reservoir::stability_scan;
use dipsqueeze::runner::{
    figure_preset, preset_text, run_scenario_with, Dataset, Outputs, ReservoirSpec, RunOptions,
    ScenarioConfig, Spacing, SpectralGrid, TimeGrid, PRESET_NAMES,
};
use dipsqueeze::{Error, QuadratureConfig, ReservoirParams};

#[derive(Parser)]
#[command(name = "dipsqueeze", version, about = "Spin squeezing by a dipolar Bose gas reservoir")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Absolute quadrature tolerance for the kernel integrals.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write its CSV files.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a figure preset, or print its config with --print.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
        name: String,
        #[arg(long, required_unless_present = "print")]
        out: Option<PathBuf>,
        #[arg(long)]
        print: bool,
    },
    /// Tabulate Δ(t) and γ(t).
    Kernels {
        #[command(flatten)]
        reservoir: ReservoirArgs,
        #[arg(long, default_value_t = 0.01)]
        t_min: f64,
        #[arg(long, default_value_t = 1000.0)]
        t_max: f64,
        #[arg(long, default_value_t = 400)]
        n_points: usize,
        #[arg(long, value_enum, default_value_t = SpacingArg::Log)]
        spacing: SpacingArg,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the spectral density J(ω) on a log grid.
    Spectral {
        #[command(flatten)]
        reservoir: ReservoirArgs,
        #[arg(long, default_value_t = 0.01)]
        omega_min: f64,
        #[arg(long, default_value_t = 10.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 200)]
        n_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the Bogoliubov dispersion for dynamical instability.
    Stability {
        #[command(flatten)]
        reservoir: ReservoirArgs,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
    },
}

#[derive(Args)]
struct ReservoirArgs {
    #[arg(long, default_value_t = 5.0)]
    eta: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    epsilon_dd: f64,
    #[arg(long, default_value_t = 0.015)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    ell_ratio: f64,
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
}

impl ReservoirArgs {
    fn params(&self) -> ReservoirParams {
        ReservoirParams {
            eta: self.eta,
            epsilon_dd: self.epsilon_dd,
            theta: self.theta,
            ell_ratio: self.ell_ratio,
            temperature: self.temperature,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
}

fn apply_tol(cfg: &mut ScenarioConfig, tol: Option<f64>) -> Result<(), Error> {
    if let Some(t) = tol {
        cfg.quadrature.abs_tol = t;
        cfg.validate()?;
    }
    Ok(())
}

fn emit_single(ds: &Dataset, out: Option<&Path>) -> Result<(), Error> {
    let (_, body) = ds
        .files
        .iter()
        .next()
        .ok_or_else(|| Error::Precondition("scenario produced no output".into()))?;
    match out {
        Some(p) => std::fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn report(ds: &Dataset, dir: &Path) -> Result<(), Error> {
    for p in ds.write_to(dir)? {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn single_reservoir(args: &ReservoirArgs, outputs: Outputs, tol: Option<f64>) -> Result<ScenarioConfig, Error> {
    let mut cfg = ScenarioConfig {
        reservoir: ReservoirSpec::Dimensionless(args.params()),
        outputs,
        ..ScenarioConfig::default()
    };
    if let Some(t) = tol {
        cfg.quadrature.abs_tol = t;
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<(), Error> {
    let opts = RunOptions { threads: cli.threads };
    match cli.command {
        Command::Run { config, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", config.display())))?;
            let mut cfg = ScenarioConfig::parse(&text)?;
            apply_tol(&mut cfg, cli.tol)?;
            report(&run_scenario_with(&cfg, opts)?, &out)
        }
        Command::Preset { name, out, print } => {
            if print {
                print!("{}", preset_text(&name)?);
                return Ok(());
            }
            let mut cfg = figure_preset(&name)?;
            apply_tol(&mut cfg, cli.tol)?;
            let out = out.expect("clap enforces --out");
            report(&run_scenario_with(&cfg, opts)?, &out)
        }
        Command::Kernels { reservoir, t_min, t_max, n_points, spacing, out } => {
            let mut cfg = single_reservoir(&reservoir, Outputs { kernels: true, ..Outputs::default() }, cli.tol)?;
            cfg.time_grid = TimeGrid {
                t_min,
                t_max,
                n_points,
                spacing: match spacing {
                    SpacingArg::Linear => Spacing::Linear,
                    SpacingArg::Log => Spacing::Log,
                },
            };
            emit_single(&run_scenario_with(&cfg, opts)?, out.as_deref())
        }
        Command::Spectral { reservoir, omega_min, omega_max, n_points, out } => {
            let mut cfg = single_reservoir(
                &reservoir,
                Outputs { spectral_density: true, ..Outputs::default() },
                cli.tol,
            )?;
            cfg.spectral = SpectralGrid { omega_min, omega_max, n_points };
            // the kernel table is not written; keep it tiny
            cfg.time_grid = TimeGrid { t_min: 1.0, t_max: 2.0, n_points: 2, spacing: Spacing::Linear };
            emit_single(&run_scenario_with(&cfg, opts)?, out.as_deref())
        }
        Command::Stability { reservoir, samples } => {
            let p = reservoir.params();
            p.validate()?;
            let k_max = QuadratureConfig::default().k_max_sigma / p.ell_ratio;
            let r = stability_scan(&p, k_max, samples);
            println!("stable = {}", r.stable);
            println!("k_max = {}", r.k_max);
            println!("samples = {}", r.samples);
            match r.first_unstable_k {
                Some(k) => {
                    println!("first_unstable_k = {k}");
                    Err(Error::Unstable { k, radicand: dipsqueeze::reservoir::radicand(k, &p) })
                }
                None => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
