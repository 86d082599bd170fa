//! Upper incomplete gamma function of order zero, `Γ(0, x) = E₁(x)`.
//!
//! Two regimes: the convergent power series below `x = 1` and a continued
//! fraction (modified Lentz) above. The continued fraction yields
//! `e^x Γ(0, x)` directly, which is the combination the dipolar form factor
//! needs and which stays finite for large `x`.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_CROSSOVER: f64 = 1.0;
const MAX_ITER: usize = 500;

/// `Γ(0, x) = ∫_x^∞ e^{−u}/u du` for `x > 0`.
pub fn incomplete_gamma0(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x < SERIES_CROSSOVER {
        Ok(series(x))
    } else {
        Ok(continued_fraction_scaled(x) * (-x).exp())
    }
}

/// `e^x Γ(0, x)` for `x > 0`, evaluated without overflow for large `x`.
pub fn scaled_incomplete_gamma0(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x < SERIES_CROSSOVER {
        Ok(series(x) * x.exp())
    } else {
        Ok(continued_fraction_scaled(x))
    }
}

fn check_domain(x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Γ(0, x) requires x > 0, got {x}")))
    }
}

// −γ − ln x − Σ_{n≥1} (−x)^n / (n·n!)
fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for n in 1..MAX_ITER {
        let nf = n as f64;
        term *= -x / nf;
        let contrib = term / nf;
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// e^x E₁(x) = 1/(x + 1 − 1²/(x + 3 − 2²/(x + 5 − …)))
fn continued_fraction_scaled(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}
