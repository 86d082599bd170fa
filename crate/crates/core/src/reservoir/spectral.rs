//! Inversion of the dispersion: spectral density `J(ω)` and ω-space
//! integrals against it.

use std::f64::consts::PI;

use super::dispersion::{bogoliubov_energy, energy_slope, stability_scan, weight_given_energy};
use super::params::ReservoirParams;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, QuadratureConfig};

const SEGMENT_GRID: usize = 4096;
const SINGULAR_SLOPE: f64 = 1e-10;

/// One solution `k_i` of `ε̄(k) = ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRoot {
    pub k: f64,
    /// `1 / |dε̄/dk|` at the root.
    pub inverse_slope: f64,
}

/// `J(ω)` together with the roots it was assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBranch {
    pub omega: f64,
    pub value: f64,
    pub roots: Vec<SpectralRoot>,
}

impl SpectralBranch {
    pub fn branch_count(&self) -> usize {
        self.roots.len()
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    k_lo: f64,
    k_hi: f64,
    e_lo: f64,
    e_hi: f64,
}

/// The dispersion on `[0, k_max]`, split into monotone segments.
#[derive(Debug, Clone)]
pub struct Dispersion {
    params: ReservoirParams,
    k_max: f64,
    segments: Vec<Segment>,
}

impl Dispersion {
    pub fn new(params: &ReservoirParams, k_max: f64) -> Result<Self> {
        params.validate()?;
        if !(k_max > 0.0) {
            return Err(Error::Domain(format!("k_max must be > 0, got {k_max}")));
        }
        let scan = stability_scan(params, k_max, 4 * SEGMENT_GRID);
        if let Some(k) = scan.first_unstable_k {
            return Err(Error::Unstable { k, radicand: super::dispersion::radicand(k, params) });
        }

        let slope = |k: f64| energy_slope(k, params);
        let mut cuts = vec![0.0];
        let mut k_prev = 0.0;
        let mut s_prev = slope(0.0)?;
        for i in 1..=SEGMENT_GRID {
            let k = k_max * i as f64 / SEGMENT_GRID as f64;
            let s = slope(k)?;
            if s_prev != 0.0 && s != 0.0 && s.signum() != s_prev.signum() {
                let (mut lo, mut hi) = (k_prev, k);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if slope(mid)?.signum() == s_prev.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                cuts.push(0.5 * (lo + hi));
            }
            k_prev = k;
            if s != 0.0 {
                s_prev = s;
            }
        }
        cuts.push(k_max);

        let segments = cuts
            .windows(2)
            .map(|w| {
                Ok(Segment {
                    k_lo: w[0],
                    k_hi: w[1],
                    e_lo: bogoliubov_energy(w[0], params)?,
                    e_hi: bogoliubov_energy(w[1], params)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params: *params, k_max, segments })
    }

    pub fn params(&self) -> &ReservoirParams {
        &self.params
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn is_monotone(&self) -> bool {
        self.segments.len() == 1
    }

    /// Wavenumbers of interior extrema of `ε̄` (roton maximum/minimum).
    pub fn extrema(&self) -> Vec<f64> {
        self.segments[1..].iter().map(|s| s.k_lo).collect()
    }

    /// Largest energy reached on `[0, k_max]`.
    pub fn energy_max(&self) -> f64 {
        self.segments.iter().fold(0.0, |m, s| m.max(s.e_lo).max(s.e_hi))
    }

    /// Energies at segment boundaries, sorted; band edges of `J(ω)`.
    pub fn band_edges(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.segments.iter().flat_map(|s| [s.e_lo, s.e_hi]).collect();
        e.sort_by(f64::total_cmp);
        e.dedup();
        e
    }

    /// All roots of `ε̄(k) = ω` on `(0, k_max]`.
    pub fn roots(&self, omega: f64) -> Result<Vec<SpectralRoot>> {
        if !(omega > 0.0) {
            return Err(Error::Domain(format!("ω must be > 0, got {omega}")));
        }
        let mut roots = Vec::new();
        for seg in &self.segments {
            let rising = seg.e_hi > seg.e_lo;
            let inside = if rising {
                seg.e_lo < omega && omega <= seg.e_hi
            } else {
                seg.e_hi <= omega && omega < seg.e_lo
            };
            if !inside {
                continue;
            }
            let k = self.solve_in_segment(seg, omega, rising)?;
            let s = energy_slope(k, &self.params)?.abs();
            if s < SINGULAR_SLOPE {
                return Err(Error::ExtremumSingularity { k, slope: s });
            }
            roots.push(SpectralRoot { k, inverse_slope: 1.0 / s });
        }
        Ok(roots)
    }

    fn solve_in_segment(&self, seg: &Segment, omega: f64, rising: bool) -> Result<f64> {
        let p = &self.params;
        let (mut lo, mut hi) = (seg.k_lo, seg.k_hi);
        // g(k) = ε̄(k) − ω is negative at `lo` when rising.
        let below = |e: f64| if rising { e < omega } else { e > omega };
        let mut k = 0.5 * (lo + hi);
        if lo == 0.0 {
            // phonon or free-particle estimate near the origin
            let c = energy_slope(0.0, p)?;
            let guess = if c > 0.0 { omega / c } else { (2.0 * omega).sqrt() };
            if guess > 0.0 && guess < hi {
                k = guess;
            }
        }
        for _ in 0..400 {
            let e = bogoliubov_energy(k, p)?;
            if e == omega {
                return Ok(k);
            }
            if below(e) {
                lo = k;
            } else {
                hi = k;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                break;
            }
            let s = energy_slope(k, p)?;
            let step = (e - omega) / s;
            if s != 0.0 && step.abs() <= 2.0 * f64::EPSILON * k {
                return Ok(k - step);
            }
            let newton = k - step;
            k = if s != 0.0 && newton > lo && newton < hi {
                newton
            } else if lo == 0.0 {
                hi / 256.0
            } else if hi > 4.0 * lo {
                (lo * hi).sqrt()
            } else {
                0.5 * (lo + hi)
            };
        }
        Ok(k)
    }

    /// `J(ω) = Σ_i w̃(k_i) / |dε̄/dk|_{k_i}`.
    pub fn spectral_density(&self, omega: f64) -> Result<SpectralBranch> {
        let roots = self.roots(omega)?;
        let value = roots
            .iter()
            .map(|r| weight_given_energy(r.k, omega, &self.params) * r.inverse_slope)
            .sum();
        Ok(SpectralBranch { omega, value, roots })
    }

    /// `∫₀^{ε̄_max} J(ω) g(ω) dω`, with panels no wider than
    /// `panel_width` (when given) and breaks at every band edge.
    pub fn integrate_against<G: FnMut(f64) -> f64>(
        &self,
        mut g: G,
        panel_width: Option<f64>,
        quad: &QuadratureConfig,
    ) -> Result<f64> {
        let mut breaks = self.band_edges();
        if let Some(w) = panel_width {
            let top = self.energy_max();
            let n = (top / w).ceil() as usize;
            breaks.extend((1..n).map(|i| i as f64 * w));
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
        }
        let mut failure = None;
        let est = integrate_panels(
            |w| match self.spectral_density(w) {
                Ok(b) => b.value * g(w),
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            &breaks,
            quad,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(est?.value)
    }

    /// Twisting rate `Δ(t)` evaluated directly in frequency space,
    /// `(1/t) ∫ J(ω) (ωt − sin ωt)/ω² dω`.
    pub fn delta_omega_space(&self, t: f64, quad: &QuadratureConfig) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("t must be > 0, got {t}")));
        }
        self.integrate_against(|w| t * super::kernels::twist_profile(w * t), Some(PI / t), quad)
    }
}

/// `J(ω)` for a single frequency, with the default wavenumber cutoff.
pub fn spectral_density(omega: f64, params: &ReservoirParams) -> Result<f64> {
    let k_max = QuadratureConfig::default().k_max_sigma / params.ell_ratio;
    Ok(Dispersion::new(params, k_max)?.spectral_density(omega)?.value)
}
