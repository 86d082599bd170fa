use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::reservoir::KernelTable;
use crate::spin::{CVector, DickeState};

/// Uhlmann fidelity against a pure state, `√⟨ψ|ρ|ψ⟩`.
pub fn fidelity_with_pure(state: &DickeState, psi: &CVector) -> Result<f64> {
    if (state.trace() - 1.0).abs() > 1e-8 {
        return Err(Error::Precondition(format!("fidelity needs a unit-trace state, trace is {}", state.trace())));
    }
    if psi.len() != state.dim() {
        return Err(Error::DimensionMismatch { expected: state.dim(), got: psi.len() });
    }
    let overlap = (psi.adjoint() * state.rho() * psi)[(0, 0)].re;
    Ok(overlap.max(0.0).sqrt().min(1.0))
}

/// Fidelity with the cat state of the same atom number.
pub fn cat_fidelity(state: &DickeState) -> Result<f64> {
    fidelity_with_pure(state, &DickeState::cat_amplitudes(state.n_atoms())?)
}

/// First root of `tΔ(t) = π/2` on the table, with `Δ` interpolated
/// monotonically between samples.
pub fn optimal_time(kernels: &KernelTable) -> Result<f64> {
    if let Some(d) = kernels.delta_inf {
        if !(d > 0.0) {
            return Err(Error::Precondition(format!("Δ(∞) must be positive, got {d}")));
        }
    }
    let ts = &kernels.times;
    let (t_min, t_max) = match (ts.first(), ts.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::NoOptimalTime { t_min: f64::NAN, t_max: f64::NAN }),
    };
    let f = |i: usize| ts[i] * kernels.delta[i] - FRAC_PI_2;
    let idx = (0..ts.len()).find(|&i| f(i) >= 0.0).ok_or(Error::NoOptimalTime { t_min, t_max })?;
    if idx == 0 {
        if f(0) == 0.0 {
            return Ok(ts[0]);
        }
        return Err(Error::NoOptimalTime { t_min, t_max });
    }
    let spline = MonotoneCubic::new(ts, &kernels.delta)?;
    let g = |t: f64| t * spline.eval(t) - FRAC_PI_2;
    let (mut lo, mut hi) = (ts[idx - 1], ts[idx]);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
