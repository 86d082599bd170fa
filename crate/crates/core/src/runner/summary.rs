//! Per-run scalar summaries: QFI peak, optimal time, scaling fits.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::reservoir::KernelSolver;

/// Peak of a QFI time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiPeak {
    pub t_grid_max: f64,
    pub grid_max: f64,
    /// Vertex of the parabola through the grid maximum and its neighbours,
    /// or the grid maximum itself at an end point. Never below `grid_max`.
    pub refined_max: f64,
    pub over_n: f64,
    pub over_n2: f64,
}

/// Grid maximum of `F_Q(t)` plus a local quadratic correction.
pub fn qfi_amplification_summary(times: &[f64], fq: &[f64], n_atoms: usize) -> Result<QfiPeak> {
    if times.len() != fq.len() || times.is_empty() {
        return Err(Error::DimensionMismatch { expected: times.len(), got: fq.len() });
    }
    let mut i = 0;
    for (j, &v) in fq.iter().enumerate() {
        if v > fq[i] {
            i = j;
        }
    }
    let grid_max = fq[i];
    let mut refined_max = grid_max;
    if i > 0 && i + 1 < fq.len() {
        let (x0, x1, x2) = (times[i - 1], times[i], times[i + 1]);
        let (y0, y1, y2) = (fq[i - 1], fq[i], fq[i + 1]);
        // Newton form: y = y0 + d1 (x - x0) + d2 (x - x0)(x - x1)
        let d1 = (y1 - y0) / (x1 - x0);
        let d2 = ((y2 - y1) / (x2 - x1) - d1) / (x2 - x0);
        if d2 < 0.0 {
            let xv = 0.5 * (x0 + x1 - d1 / d2);
            if (x0..=x2).contains(&xv) {
                let yv = y0 + d1 * (xv - x0) + d2 * (xv - x0) * (xv - x1);
                refined_max = yv.max(grid_max);
            }
        }
    }
    let n = n_atoms as f64;
    Ok(QfiPeak {
        t_grid_max: times[i],
        grid_max,
        refined_max,
        over_n: grid_max / n,
        over_n2: grid_max / (n * n),
    })
}

/// Solve `tΔ(t) = π/2` on `[lo, hi]` with exact kernel evaluations
/// (Illinois false position). The bracket must straddle the root.
pub fn refine_optimal_time(solver: &KernelSolver, lo: f64, hi: f64) -> Result<f64> {
    let f = |t: f64| -> Result<f64> { Ok(t * solver.delta(t)? - FRAC_PI_2) };
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoOptimalTime { t_min: lo, t_max: hi });
    }
    let mut side = 0i8;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) || (b - a).abs() <= 1e-14 * c.abs() {
            break;
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if fc.abs() <= 4.0 * f64::EPSILON {
            break;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Precondition("log_log_slope needs two or more paired points".into()));
    }
    if x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("log_log_slope needs positive data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureConfig;
    use crate::reservoir::ReservoirParams;

    #[test]
    fn parabola_vertex_recovered() {
        let ts: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let fq: Vec<f64> = ts.iter().map(|t| 50.0 - (t - 4.3) * (t - 4.3)).collect();
        let p = qfi_amplification_summary(&ts, &fq, 5).unwrap();
        assert_eq!(p.t_grid_max, 4.0);
        assert!((p.refined_max - 50.0).abs() < 1e-12);
        assert!(p.grid_max <= p.refined_max);
        assert!((p.over_n - p.grid_max / 5.0).abs() < 1e-15);
        assert!((p.over_n2 - p.grid_max / 25.0).abs() < 1e-15);
    }

    #[test]
    fn refinement_tightens_grid_maximum() {
        let g = |t: f64| 10.0 * (-(t - 3.7).powi(2) / 4.0).exp();
        let ts: Vec<f64> = (0..15).map(|i| 0.5 * i as f64).collect();
        let fq: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
        let p = qfi_amplification_summary(&ts, &fq, 2).unwrap();
        assert!(p.grid_max <= p.refined_max && p.refined_max <= 10.0);
        assert!(10.0 - p.refined_max < 0.2 * (10.0 - p.grid_max));
    }

    #[test]
    fn end_point_maximum_is_not_extrapolated() {
        let ts = [1.0, 2.0, 3.0];
        let p = qfi_amplification_summary(&ts, &[1.0, 2.0, 3.0], 1).unwrap();
        assert_eq!(p.refined_max, 3.0);
        assert_eq!(p.t_grid_max, 3.0);
    }

    #[test]
    fn slope_of_power_law() {
        let x = [4.0, 8.0, 16.0, 32.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.9)).collect();
        assert!((log_log_slope(&x, &y).unwrap() - 1.9).abs() < 1e-12);
        assert!(log_log_slope(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn optimal_time_root() {
        let p = ReservoirParams::new(5.0, -1.0, 0.015).unwrap();
        let s = KernelSolver::new(&p, &QuadratureConfig::default()).unwrap();
        let t = refine_optimal_time(&s, 80.0, 130.0).unwrap();
        let r = t * s.delta(t).unwrap() - FRAC_PI_2;
        assert!(r.abs() < 1e-12, "residual {r}");
        assert!((t - 106.45).abs() < 0.1, "t_opt = {t}");
        assert!(refine_optimal_time(&s, 1.0, 2.0).is_err());
    }
}
