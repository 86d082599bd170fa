//! Time-dependent kernels: the twisting rate `Δ(t)` and the dephasing
//! function `γ(t)`, both integrated in k-space against `w̃(k)`.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use super::dispersion::{bogoliubov_energy, energy_slope, stability_scan, weight_given_energy};
use super::params::ReservoirParams;
use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::output::{fmt12, write_provenance};
use crate::quadrature::{integrate_panels, QuadratureConfig};

const STABILITY_SAMPLES: usize = 20_000;
const BASE_PANELS: usize = 16;

/// `(x − sin x)/x²`, with a series below `x = 0.1`.
pub(crate) fn twist_profile(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 5040.0 - x2 / 362_880.0)))
    } else {
        (x - x.sin()) / (x * x)
    }
}

/// `(1 − cos x)/x² = 2 sin²(x/2)/x²`.
pub(crate) fn dephasing_profile(x: f64) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    let s = (0.5 * x).sin();
    2.0 * s * s / (x * x)
}

fn thermal_factor(energy: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let y = energy / (2.0 * temperature);
    if y > 20.0 {
        1.0
    } else {
        1.0 / y.tanh()
    }
}

/// Evaluates `Δ(t)`, `γ(t)` and `Δ(∞)` for one reservoir.
///
/// The k-range `[0, k_max]` is checked for stability once, at
/// construction.
#[derive(Debug, Clone)]
pub struct KernelSolver {
    params: ReservoirParams,
    quad: QuadratureConfig,
    k_max: f64,
}

impl KernelSolver {
    pub fn new(params: &ReservoirParams, quad: &QuadratureConfig) -> Result<Self> {
        params.validate()?;
        quad.validate()?;
        let k_max = quad.k_max_sigma / params.ell_ratio;
        let scan = stability_scan(params, k_max, STABILITY_SAMPLES);
        if let Some(k) = scan.first_unstable_k {
            return Err(Error::Unstable { k, radicand: super::dispersion::radicand(k, params) });
        }
        Ok(Self { params: *params, quad: *quad, k_max })
    }

    pub fn params(&self) -> &ReservoirParams {
        &self.params
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    // Breakpoints in k: a fixed coarse split, refined to half-periods of
    // the phase ε̄(k)t wherever it oscillates.
    fn panels(&self, t: f64) -> Result<Vec<f64>> {
        let k_max = self.k_max;
        let cap = k_max / BASE_PANELS as f64;
        if bogoliubov_energy(k_max, &self.params)? * t <= 2.0 * PI {
            return Ok((0..=BASE_PANELS).map(|i| cap * i as f64).collect());
        }
        let p = &self.params;
        let mut out = vec![0.0];
        let mut k = 0.0;
        while k < k_max {
            let s0 = energy_slope(k, p)?.abs();
            let h0 = (PI / (t * s0.max(f64::MIN_POSITIVE))).min(cap);
            let s1 = energy_slope((k + h0).min(k_max), p)?.abs();
            let h = (PI / (t * s0.max(s1).max(f64::MIN_POSITIVE))).min(cap);
            k = (k + h).min(k_max);
            out.push(k);
        }
        Ok(out)
    }

    fn integrate_k<F: Fn(f64, f64) -> f64>(&self, t: f64, profile: F) -> Result<f64> {
        let p = &self.params;
        let breaks = self.panels(t)?;
        let mut failure = None;
        let est = integrate_panels(
            |k| match bogoliubov_energy(k, p) {
                Ok(e) if e > 0.0 => weight_given_energy(k, e, p) * profile(k, e),
                Ok(_) => 0.0,
                Err(err) => {
                    failure.get_or_insert(err);
                    f64::NAN
                }
            },
            &breaks,
            &self.quad,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(est?.value)
    }

    /// `Δ(t) = ∫ w̃(k) t (x − sin x)/x² dk`, `x = ε̄(k) t`.
    pub fn delta(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        self.integrate_k(t, |_, e| t * twist_profile(e * t))
    }

    /// `γ(t) = ∫ w̃(k) coth(ε̄/2T) t (1 − cos x)/x² dk`.
    pub fn gamma(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let temp = self.params.temperature;
        self.integrate_k(t, |_, e| thermal_factor(e, temp) * t * dephasing_profile(e * t))
    }

    /// `Δ(∞) = ∫ w̃(k)/ε̄(k) dk`. Diverges when the sound velocity
    /// vanishes (`ε_dd = 1`).
    pub fn delta_infinity(&self) -> Result<f64> {
        let p = &self.params;
        if p.eta * (1.0 - p.epsilon_dd) <= 0.0 {
            return Err(Error::Divergent(format!(
                "Δ(∞) diverges at vanishing sound velocity (ε_dd = {})",
                p.epsilon_dd
            )));
        }
        let cap = self.k_max / BASE_PANELS as f64;
        let breaks: Vec<f64> = (0..=BASE_PANELS).map(|i| cap * i as f64).collect();
        let mut failure = None;
        let est = integrate_panels(
            |k| match bogoliubov_energy(k, p) {
                Ok(e) if e > 0.0 => weight_given_energy(k, e, p) / e,
                Ok(_) => 0.0,
                Err(err) => {
                    failure.get_or_insert(err);
                    f64::NAN
                }
            },
            &breaks,
            &self.quad,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(est?.value)
    }

    /// Upper bound on the part of any kernel integral beyond `k_max`.
    ///
    /// Uses `(x − sin x)/x² ≤ 2/x`, `(1 − cos x)/x² ≤ 1/x` and
    /// `ε̄² ≥ k⁴(1 − η/k²)/4`.
    pub fn tail_bound(&self) -> f64 {
        let p = &self.params;
        let k = self.k_max;
        let l2 = p.ell_ratio * p.ell_ratio;
        let margin = 1.0 - p.eta / (k * k);
        if margin <= 0.0 {
            return f64::INFINITY;
        }
        let e_min = 0.5 * k * k * margin.sqrt();
        let coth = thermal_factor(e_min, p.temperature);
        8.0 * p.theta * coth * (-0.5 * k * k * l2).exp() / (k.powi(3) * l2 * margin)
    }

    /// Sample both kernels on `times`, in parallel.
    pub fn table(&self, times: &[f64]) -> Result<KernelTable> {
        let rows: Vec<(f64, f64)> = times
            .par_iter()
            .map(|&t| Ok((self.delta(t)?, self.gamma(t)?)))
            .collect::<Result<_>>()?;
        let delta_inf = match self.delta_infinity() {
            Ok(v) => Some(v),
            Err(Error::Divergent(_)) => None,
            Err(e) => return Err(e),
        };
        let (delta, gamma) = rows.into_iter().unzip();
        KernelTable::new(times.to_vec(), delta, gamma, delta_inf)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be > 0, got {t}")));
    }
    Ok(())
}

/// `Δ(t)` with the default quadrature settings.
pub fn delta_kernel(t: f64, params: &ReservoirParams) -> Result<f64> {
    KernelSolver::new(params, &QuadratureConfig::default())?.delta(t)
}

/// `γ(t)` with the default quadrature settings.
pub fn gamma_kernel(t: f64, params: &ReservoirParams) -> Result<f64> {
    KernelSolver::new(params, &QuadratureConfig::default())?.gamma(t)
}

/// `Δ(∞)` with the default quadrature settings.
pub fn delta_infinity(params: &ReservoirParams) -> Result<f64> {
    KernelSolver::new(params, &QuadratureConfig::default())?.delta_infinity()
}

/// `Δ(t)` and `γ(t)` sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub times: Vec<f64>,
    pub delta: Vec<f64>,
    pub gamma: Vec<f64>,
    /// `None` when the long-time limit diverges.
    pub delta_inf: Option<f64>,
}

impl KernelTable {
    pub fn new(times: Vec<f64>, delta: Vec<f64>, gamma: Vec<f64>, delta_inf: Option<f64>) -> Result<Self> {
        if delta.len() != times.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), got: delta.len() });
        }
        if gamma.len() != times.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), got: gamma.len() });
        }
        if times.iter().any(|t| !(*t > 0.0)) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("kernel times must be positive and strictly increasing".into()));
        }
        if let Some((t, g)) = times.iter().zip(&gamma).find(|(_, g)| !(**g >= 0.0)) {
            return Err(Error::Precondition(format!("γ({t}) = {g} is negative")));
        }
        Ok(Self { times, delta, gamma, delta_inf })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Interpolated `Δ(t)`, clamped to the table range.
    pub fn delta_at(&self, t: f64) -> Result<f64> {
        Ok(MonotoneCubic::new(&self.times, &self.delta)?.eval(t))
    }

    /// Interpolated `γ(t)`, clamped to the table range.
    pub fn gamma_at(&self, t: f64) -> Result<f64> {
        Ok(MonotoneCubic::new(&self.times, &self.gamma)?.eval(t))
    }

    pub fn write_csv<W: Write>(&self, w: &mut W, provenance: &[String]) -> std::io::Result<()> {
        write_provenance(w, provenance)?;
        match self.delta_inf {
            Some(d) => writeln!(w, "# delta_inf = {}", fmt12(d))?,
            None => writeln!(w, "# delta_inf = divergent")?,
        }
        writeln!(w, "t,delta,gamma")?;
        for i in 0..self.len() {
            writeln!(w, "{},{},{}", fmt12(self.times[i]), fmt12(self.delta[i]), fmt12(self.gamma[i]))?;
        }
        Ok(())
    }

    pub fn to_csv(&self, provenance: &[String]) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, provenance).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}
