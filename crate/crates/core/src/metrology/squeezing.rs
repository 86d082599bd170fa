use std::f64::consts::PI;

use num_complex::Complex64;

use super::moments::LossyMoments;
use crate::error::{Error, Result};
use crate::spin::DickeState;

const MEAN_SPIN_FLOOR: f64 = 1e-12;

/// Wineland squeezing together with the frame it was computed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingResult {
    /// `ξ_R² = N (ΔJ_⊥)²_min / |⟨J⟩|²`
    pub xi_squared: f64,
    /// `π + atan2(B, A)`
    pub phi_opt: f64,
    /// Polar angle `ϑ` of the mean spin.
    pub theta_mean: f64,
    /// Azimuth `φ` of the mean spin.
    pub phi_mean: f64,
    pub mean_spin: f64,
    pub min_variance: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `ξ_R²` from moments of a normalized state.
///
/// The transverse variance uses the frame `n₁ = (−sin φ, cos φ, 0)`,
/// `n₂ = (cos ϑ cos φ, cos ϑ sin φ, −sin ϑ)` around the mean spin, with
/// `(ΔJ_⊥)²_min = (C − √(A² + B²))/2`.
pub fn squeezing_from_moments(m: &LossyMoments, n_atoms: usize) -> Result<SqueezingResult> {
    if n_atoms < 2 {
        return Err(Error::Domain(format!("squeezing needs N >= 2, got {n_atoms}")));
    }
    let j = 0.5 * n_atoms as f64;
    let jx = m.jp.re;
    let jy = m.jp.im;
    let perp = (jx * jx + jy * jy).sqrt();
    let mean_spin = (perp * perp + m.jz * m.jz).sqrt();
    if !(mean_spin > MEAN_SPIN_FLOOR) {
        return Err(Error::UndefinedDirection(mean_spin));
    }
    let theta = perp.atan2(m.jz);
    let phi = jy.atan2(jx);
    let (st, ct) = theta.sin_cos();
    let e1 = Complex64::from_polar(1.0, -phi);
    let e2 = e1 * e1;
    let re2 = (m.jp2 * e2).re;
    let im2 = (m.jp2 * e2).im;
    let re3 = (m.jp_2jz1 * e1).re;
    let im3 = (m.jp_2jz1 * e1).im;
    let casimir = j * (j + 1.0);

    let a = 0.5 * st * st * (casimir - 3.0 * m.jz2) - 0.5 * (1.0 + ct * ct) * re2 + st * ct * re3;
    let b = -ct * im2 + st * im3;
    let c = casimir - m.jz2 - re2 - 0.5 * st * st * (casimir - 3.0 * m.jz2)
        + 0.5 * (1.0 + ct * ct) * re2
        - 0.5 * (2.0 * theta).sin() * re3;
    let min_variance = 0.5 * (c - a.hypot(b));
    Ok(SqueezingResult {
        xi_squared: n_atoms as f64 * min_variance / (mean_spin * mean_spin),
        phi_opt: PI + b.atan2(a),
        theta_mean: theta,
        phi_mean: phi,
        mean_spin,
        min_variance,
        a,
        b,
        c,
    })
}

/// `ξ_R²` of a state, computed from its trace-normalized moments.
pub fn squeezing_parameter(state: &DickeState) -> Result<SqueezingResult> {
    squeezing_from_moments(&LossyMoments::from_state(state, true)?, state.n_atoms())
}

/// Lossless closed form for the twisted `+x` coherent state.
///
/// Returns `(ξ_R², φ_opt)`; at `tΔ = 0` the angle takes its `tΔ → 0⁺`
/// limit `π/2`.
pub fn squeezing_closed_form(t: f64, delta_t: f64, gamma_t: f64, n_atoms: usize) -> Result<(f64, f64)> {
    if n_atoms < 2 {
        return Err(Error::Domain(format!("squeezing needs N >= 2, got {n_atoms}")));
    }
    let nf = n_atoms as f64;
    let a = t * delta_t;
    let g = t * gamma_t;
    let cos_a = a.cos();
    let denom = 4.0 * (-2.0 * g).exp() * cos_a.powi(2 * n_atoms as i32 - 2);
    if cos_a.abs() < 1e-15 || !(denom > 0.0) {
        return Err(Error::Divergent(format!("mean spin vanishes at tΔ = {a}")));
    }
    let at = 1.0 - (2.0 * a).cos().powi(n_atoms as i32 - 2) * (-4.0 * g).exp();
    let bt = -4.0 * a.sin() * cos_a.powi(n_atoms as i32 - 2) * (-g).exp();
    let xi = (4.0 + (nf - 1.0) * (at - at.hypot(bt))) / denom;
    let phi = if at == 0.0 && bt == 0.0 { 0.5 * PI } else { PI + bt.atan2(at) };
    Ok((xi, phi))
}
