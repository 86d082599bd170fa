//! Scenario configuration: a flat `key = value` text format.
//!
//! ```text
//! # comments run to the end of the line
//! reservoir.eta = 5
//! reservoir.epsilon_dd = -1
//! reservoir.theta = 0.015
//! n_atoms = 100
//! time.t_min = 0.1
//! time.t_max = 50
//! time.n_points = 80
//! time.spacing = log
//! sweep.parameter = gamma_loss_rel
//! sweep.values = 0, 0.002, 0.01
//! outputs = xi2
//! ```
//!
//! Every key is optional except `outputs`. Unknown or repeated keys are
//! errors. See [`KEYS`] for the complete schema.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::reservoir::{lab_units_to_dimensionless, LabParams, ReservoirParams};

/// Every accepted key, in canonical order.
pub const KEYS: &[&str] = &[
    "reservoir.eta",
    "reservoir.epsilon_dd",
    "reservoir.theta",
    "reservoir.ell_ratio",
    "reservoir.temperature",
    "lab.n0",
    "lab.a_b",
    "lab.a_ab",
    "lab.a_dd",
    "lab.m_a",
    "lab.m_b",
    "lab.omega_perp",
    "lab.omega_a",
    "lab.mu_m",
    "lab.tilt_angle",
    "lab.temperature",
    "n_atoms",
    "gamma_loss_rel",
    "gamma_loss_abs",
    "lambda_prime",
    "time.t_min",
    "time.t_max",
    "time.n_points",
    "time.spacing",
    "sweep.parameter",
    "sweep.values",
    "sweep.inner.parameter",
    "sweep.inner.values",
    "outputs",
    "output.timeseries",
    "quadrature.abs_tol",
    "quadrature.rel_tol",
    "quadrature.k_max_sigma",
    "spectral.omega_min",
    "spectral.omega_max",
    "spectral.n_points",
    "overlay.n2_analytic",
    "dephasing.force_zero",
    "cache.kernels",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReservoirSpec {
    Dimensionless(ReservoirParams),
    /// SI parameters, converted on use.
    Lab(LabParams),
}

impl ReservoirSpec {
    pub fn dimensionless(&self) -> Result<ReservoirParams> {
        match self {
            ReservoirSpec::Dimensionless(p) => Ok(*p),
            ReservoirSpec::Lab(lab) => Ok(lab_units_to_dimensionless(lab)?.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { t_min: 1e-2, t_max: 1e3, n_points: 400, spacing: Spacing::Log }
    }
}

impl TimeGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0) || !(self.t_max > self.t_min) || !self.t_max.is_finite() {
            return Err(Error::Config(format!(
                "time grid needs 0 < t_min < t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.n_points < 2 {
            return Err(Error::Config("time.n_points must be at least 2".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.n_points;
        let last = (n - 1) as f64;
        let mut ts: Vec<f64> = (0..n)
            .map(|i| {
                let s = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.t_min + s * (self.t_max - self.t_min),
                    Spacing::Log => (self.t_min.ln() + s * (self.t_max / self.t_min).ln()).exp(),
                }
            })
            .collect();
        // pin the end points against rounding
        ts[0] = self.t_min;
        ts[n - 1] = self.t_max;
        ts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepParameter {
    EpsilonDd,
    Theta,
    Eta,
    NAtoms,
    GammaLossRel,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::EpsilonDd => "epsilon_dd",
            SweepParameter::Theta => "theta",
            SweepParameter::Eta => "eta",
            SweepParameter::NAtoms => "n_atoms",
            SweepParameter::GammaLossRel => "gamma_loss_rel",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "epsilon_dd" => SweepParameter::EpsilonDd,
            "theta" => SweepParameter::Theta,
            "eta" => SweepParameter::Eta,
            "n_atoms" => SweepParameter::NAtoms,
            "gamma_loss_rel" => SweepParameter::GammaLossRel,
            other => {
                return Err(Error::Config(format!(
                    "unknown sweep parameter {other:?} (expected epsilon_dd, theta, eta, n_atoms or gamma_loss_rel)"
                )))
            }
        })
    }

    /// Short text for a value of this parameter, as used in file names.
    pub fn format_value(&self, v: f64) -> String {
        match self {
            SweepParameter::NAtoms => format!("{}", v as usize),
            _ if v == 0.0 => "0".into(),
            _ => format!("{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Outputs {
    pub xi2: bool,
    pub qfi: bool,
    pub fidelity: bool,
    pub kernels: bool,
    pub spectral_density: bool,
}

impl Outputs {
    pub fn metrology(&self) -> bool {
        self.xi2 || self.qfi || self.fidelity
    }

    fn parse(s: &str) -> Result<Self> {
        let mut out = Outputs::default();
        for item in list_items(s) {
            let flag = match item {
                "xi2" => &mut out.xi2,
                "qfi" => &mut out.qfi,
                "fidelity" => &mut out.fidelity,
                "kernels" => &mut out.kernels,
                "spectral_density" => &mut out.spectral_density,
                other => return Err(Error::Config(format!("unknown output {other:?}"))),
            };
            if *flag {
                return Err(Error::Config(format!("output {item:?} listed twice")));
            }
            *flag = true;
        }
        if out == Outputs::default() {
            return Err(Error::Config("outputs must name at least one output".into()));
        }
        Ok(out)
    }

    fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        for (on, name) in [
            (self.xi2, "xi2"),
            (self.qfi, "qfi"),
            (self.fidelity, "fidelity"),
            (self.kernels, "kernels"),
            (self.spectral_density, "spectral_density"),
        ] {
            if on {
                v.push(name);
            }
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_points: usize,
}

impl Default for SpectralGrid {
    fn default() -> Self {
        Self { omega_min: 1e-2, omega_max: 10.0, n_points: 200 }
    }
}

impl SpectralGrid {
    /// Log-spaced frequencies.
    pub fn points(&self) -> Vec<f64> {
        TimeGrid {
            t_min: self.omega_min,
            t_max: self.omega_max,
            n_points: self.n_points,
            spacing: Spacing::Log,
        }
        .points()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub reservoir: ReservoirSpec,
    pub n_atoms: usize,
    /// `Γ_loss` in units of `Δ(∞)`.
    pub gamma_loss_rel: f64,
    /// Absolute `Γ_loss`, overriding the relative value.
    pub gamma_loss_abs: Option<f64>,
    pub lambda_prime: f64,
    pub time_grid: TimeGrid,
    pub sweep: Option<Sweep>,
    /// Second sweep level, nested inside `sweep`.
    pub inner_sweep: Option<Sweep>,
    pub outputs: Outputs,
    /// Write per-time metrology files (the summary is always written).
    pub timeseries: bool,
    pub quadrature: QuadratureConfig,
    pub spectral: SpectralGrid,
    /// Add the closed-form two-atom QFI next to the numerical one.
    pub n2_analytic: bool,
    /// Set `γ(t) = 0`, leaving pure one-axis twisting.
    pub force_zero_dephasing: bool,
    pub cache_kernels: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            reservoir: ReservoirSpec::Dimensionless(ReservoirParams {
                eta: 5.0,
                epsilon_dd: -1.0,
                theta: 0.015,
                ell_ratio: 1.0,
                temperature: 0.0,
            }),
            n_atoms: 10,
            gamma_loss_rel: 0.0,
            gamma_loss_abs: None,
            lambda_prime: 0.0,
            time_grid: TimeGrid::default(),
            sweep: None,
            inner_sweep: None,
            outputs: Outputs { xi2: true, ..Outputs::default() },
            timeseries: true,
            quadrature: QuadratureConfig::default(),
            spectral: SpectralGrid::default(),
            n2_analytic: false,
            force_zero_dephasing: false,
            cache_kernels: true,
        }
    }
}

fn list_items(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a number, got {v:?}")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("{key}: value must be finite, got {v:?}")));
    }
    Ok(x)
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: expected a non-negative integer, got {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    let xs: Vec<f64> = list_items(v).map(|x| parse_f64(key, x)).collect::<Result<_>>()?;
    if xs.is_empty() {
        return Err(Error::Config(format!("{key}: empty list")));
    }
    Ok(xs)
}

fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(", ")
}

impl ScenarioConfig {
    /// Parse config text. The result is validated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<&str, (&str, usize)> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got {line:?}", lineno + 1))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key {key:?}", lineno + 1)));
            }
            if kv.insert(key, (value.trim(), lineno + 1)).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key {key:?}", lineno + 1)));
            }
        }
        let get = |k: &str| kv.get(k).map(|&(v, _)| v);
        let f = |k: &str| get(k).map(|v| parse_f64(k, v)).transpose();

        let mut cfg = ScenarioConfig::default();

        let has_dimless = kv.keys().any(|k| k.starts_with("reservoir."));
        let has_lab = kv.keys().any(|k| k.starts_with("lab."));
        if has_dimless && has_lab {
            return Err(Error::Config("reservoir.* and lab.* keys are mutually exclusive".into()));
        }
        if has_lab {
            let mut lab = LabParams::rb_in_dy();
            let fields: [(&str, &mut f64); 10] = [
                ("lab.n0", &mut lab.n0),
                ("lab.a_b", &mut lab.a_b),
                ("lab.a_ab", &mut lab.a_ab),
                ("lab.m_a", &mut lab.m_a),
                ("lab.m_b", &mut lab.m_b),
                ("lab.omega_perp", &mut lab.omega_perp),
                ("lab.omega_a", &mut lab.omega_a),
                ("lab.mu_m", &mut lab.mu_m),
                ("lab.tilt_angle", &mut lab.tilt_angle),
                ("lab.temperature", &mut lab.temperature),
            ];
            for (k, slot) in fields {
                if let Some(v) = f(k)? {
                    *slot = v;
                }
            }
            lab.a_dd = f("lab.a_dd")?;
            cfg.reservoir = ReservoirSpec::Lab(lab);
        } else if let ReservoirSpec::Dimensionless(ref mut p) = cfg.reservoir {
            let fields: [(&str, &mut f64); 5] = [
                ("reservoir.eta", &mut p.eta),
                ("reservoir.epsilon_dd", &mut p.epsilon_dd),
                ("reservoir.theta", &mut p.theta),
                ("reservoir.ell_ratio", &mut p.ell_ratio),
                ("reservoir.temperature", &mut p.temperature),
            ];
            for (k, slot) in fields {
                if let Some(v) = f(k)? {
                    *slot = v;
                }
            }
        }

        if let Some(v) = get("n_atoms") {
            cfg.n_atoms = parse_usize("n_atoms", v)?;
        }
        if let Some(v) = f("gamma_loss_rel")? {
            cfg.gamma_loss_rel = v;
        }
        cfg.gamma_loss_abs = f("gamma_loss_abs")?;
        if let Some(v) = f("lambda_prime")? {
            cfg.lambda_prime = v;
        }

        if let Some(v) = f("time.t_min")? {
            cfg.time_grid.t_min = v;
        }
        if let Some(v) = f("time.t_max")? {
            cfg.time_grid.t_max = v;
        }
        if let Some(v) = get("time.n_points") {
            cfg.time_grid.n_points = parse_usize("time.n_points", v)?;
        }
        if let Some(v) = get("time.spacing") {
            cfg.time_grid.spacing = match v {
                "linear" => Spacing::Linear,
                "log" => Spacing::Log,
                _ => return Err(Error::Config(format!("time.spacing: expected linear or log, got {v:?}"))),
            };
        }

        let sweep = |pk: &str, vk: &str| -> Result<Option<Sweep>> {
            match (get(pk), get(vk)) {
                (None, None) => Ok(None),
                (Some(p), Some(v)) => Ok(Some(Sweep {
                    parameter: SweepParameter::parse(p)?,
                    values: parse_list(vk, v)?,
                })),
                _ => Err(Error::Config(format!("{pk} and {vk} must be given together"))),
            }
        };
        cfg.sweep = sweep("sweep.parameter", "sweep.values")?;
        cfg.inner_sweep = sweep("sweep.inner.parameter", "sweep.inner.values")?;

        cfg.outputs = Outputs::parse(get("outputs").ok_or_else(|| Error::Config("missing required key \"outputs\"".into()))?)?;
        if let Some(v) = get("output.timeseries") {
            cfg.timeseries = parse_bool("output.timeseries", v)?;
        }

        if let Some(v) = f("quadrature.abs_tol")? {
            cfg.quadrature.abs_tol = v;
        }
        if let Some(v) = f("quadrature.rel_tol")? {
            cfg.quadrature.rel_tol = v;
        }
        if let Some(v) = f("quadrature.k_max_sigma")? {
            cfg.quadrature.k_max_sigma = v;
        }

        if let Some(v) = f("spectral.omega_min")? {
            cfg.spectral.omega_min = v;
        }
        if let Some(v) = f("spectral.omega_max")? {
            cfg.spectral.omega_max = v;
        }
        if let Some(v) = get("spectral.n_points") {
            cfg.spectral.n_points = parse_usize("spectral.n_points", v)?;
        }

        if let Some(v) = get("overlay.n2_analytic") {
            cfg.n2_analytic = parse_bool("overlay.n2_analytic", v)?;
        }
        if let Some(v) = get("dephasing.force_zero") {
            cfg.force_zero_dephasing = parse_bool("dephasing.force_zero", v)?;
        }
        if let Some(v) = get("cache.kernels") {
            cfg.cache_kernels = parse_bool("cache.kernels", v)?;
        }

        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.reservoir {
            ReservoirSpec::Dimensionless(p) => p.validate()?,
            ReservoirSpec::Lab(lab) => lab.validate()?,
        }
        if self.n_atoms == 0 {
            return Err(Error::Config("n_atoms must be positive".into()));
        }
        if !(self.gamma_loss_rel >= 0.0) {
            return Err(Error::Config(format!("gamma_loss_rel must be >= 0, got {}", self.gamma_loss_rel)));
        }
        if let Some(g) = self.gamma_loss_abs {
            if !(g >= 0.0) {
                return Err(Error::Config(format!("gamma_loss_abs must be >= 0, got {g}")));
            }
        }
        if !self.lambda_prime.is_finite() {
            return Err(Error::Config("lambda_prime must be finite".into()));
        }
        self.time_grid.validate()?;
        self.quadrature.validate()?;
        let sweeps: Vec<&Sweep> = self.sweep.iter().chain(self.inner_sweep.iter()).collect();
        if self.inner_sweep.is_some() && self.sweep.is_none() {
            return Err(Error::Config("sweep.inner requires an outer sweep".into()));
        }
        if let [a, b] = sweeps[..] {
            if a.parameter == b.parameter {
                return Err(Error::Config("inner and outer sweeps vary the same parameter".into()));
            }
        }
        for s in sweeps {
            let name = s.parameter.name();
            let mut sorted = s.values.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Config(format!("sweep over {name} repeats a value")));
            }
            for &v in &s.values {
                let ok = match s.parameter {
                    SweepParameter::NAtoms => v >= 1.0 && v.fract() == 0.0,
                    SweepParameter::GammaLossRel => v >= 0.0,
                    SweepParameter::EpsilonDd => (-1.0..=1.0).contains(&v),
                    SweepParameter::Theta | SweepParameter::Eta => v > 0.0,
                };
                if !ok {
                    return Err(Error::Config(format!("sweep value {v} out of range for {name}")));
                }
            }
            if s.parameter == SweepParameter::GammaLossRel && self.gamma_loss_abs.is_some() {
                return Err(Error::Config("gamma_loss_abs cannot be combined with a gamma_loss_rel sweep".into()));
            }
        }
        if self.outputs.spectral_density {
            let g = &self.spectral;
            if !(g.omega_min > 0.0) || !(g.omega_max > g.omega_min) || g.n_points < 2 {
                return Err(Error::Config("spectral grid needs 0 < omega_min < omega_max and n_points >= 2".into()));
            }
        }
        Ok(())
    }

    /// Fully explicit config text; parsing it gives back `self`.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        match &self.reservoir {
            ReservoirSpec::Dimensionless(p) => {
                kv("reservoir.eta", fmt_f64(p.eta));
                kv("reservoir.epsilon_dd", fmt_f64(p.epsilon_dd));
                kv("reservoir.theta", fmt_f64(p.theta));
                kv("reservoir.ell_ratio", fmt_f64(p.ell_ratio));
                kv("reservoir.temperature", fmt_f64(p.temperature));
            }
            ReservoirSpec::Lab(l) => {
                kv("lab.n0", fmt_f64(l.n0));
                kv("lab.a_b", fmt_f64(l.a_b));
                kv("lab.a_ab", fmt_f64(l.a_ab));
                if let Some(a) = l.a_dd {
                    kv("lab.a_dd", fmt_f64(a));
                }
                kv("lab.m_a", fmt_f64(l.m_a));
                kv("lab.m_b", fmt_f64(l.m_b));
                kv("lab.omega_perp", fmt_f64(l.omega_perp));
                kv("lab.omega_a", fmt_f64(l.omega_a));
                kv("lab.mu_m", fmt_f64(l.mu_m));
                kv("lab.tilt_angle", fmt_f64(l.tilt_angle));
                kv("lab.temperature", fmt_f64(l.temperature));
            }
        }
        kv("n_atoms", self.n_atoms.to_string());
        kv("gamma_loss_rel", fmt_f64(self.gamma_loss_rel));
        if let Some(g) = self.gamma_loss_abs {
            kv("gamma_loss_abs", fmt_f64(g));
        }
        kv("lambda_prime", fmt_f64(self.lambda_prime));
        let tg = &self.time_grid;
        kv("time.t_min", fmt_f64(tg.t_min));
        kv("time.t_max", fmt_f64(tg.t_max));
        kv("time.n_points", tg.n_points.to_string());
        kv("time.spacing", match tg.spacing {
            Spacing::Linear => "linear".into(),
            Spacing::Log => "log".into(),
        });
        if let Some(sw) = &self.sweep {
            kv("sweep.parameter", sw.parameter.name().into());
            kv("sweep.values", fmt_list(&sw.values));
        }
        if let Some(sw) = &self.inner_sweep {
            kv("sweep.inner.parameter", sw.parameter.name().into());
            kv("sweep.inner.values", fmt_list(&sw.values));
        }
        kv("outputs", self.outputs.names().join(", "));
        kv("output.timeseries", self.timeseries.to_string());
        kv("quadrature.abs_tol", fmt_f64(self.quadrature.abs_tol));
        kv("quadrature.rel_tol", fmt_f64(self.quadrature.rel_tol));
        kv("quadrature.k_max_sigma", fmt_f64(self.quadrature.k_max_sigma));
        kv("spectral.omega_min", fmt_f64(self.spectral.omega_min));
        kv("spectral.omega_max", fmt_f64(self.spectral.omega_max));
        kv("spectral.n_points", self.spectral.n_points.to_string());
        kv("overlay.n2_analytic", self.n2_analytic.to_string());
        kv("dephasing.force_zero", self.force_zero_dephasing.to_string());
        kv("cache.kernels", self.cache_kernels.to_string());
        s
    }

    /// SHA-256 of the canonical text, lower-case hex.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
