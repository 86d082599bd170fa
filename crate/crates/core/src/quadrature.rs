//! Globally adaptive Gauss–Kronrod (10/21) quadrature over a set of panels.
//!
//! All panels enter one priority queue; the panel with the largest error
//! estimate is bisected until the summed error meets the tolerance. Error
//! estimates use the QUADPACK rescaling of `|K21 − G10|`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

// Weights of the embedded 10-point Gauss rule at XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

/// Tolerances and limits shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Wavenumber cutoff in units of the Gaussian coupling width `1/ℓ_A`.
    pub k_max_sigma: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            // e^{-k²ℓ_A²/2} < 1e-16 beyond this point
            k_max_sigma: (2.0 * 16.0 * std::f64::consts::LN_10).sqrt(),
            max_intervals: 2_000_000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if !(self.k_max_sigma > 0.0) || !self.k_max_sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "k_max_sigma must be positive, got {}",
                self.k_max_sigma
            )));
        }
        Ok(())
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One 21-point Gauss–Kronrod evaluation on `[a, b]`.
pub fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    let fc = eval(f, center)?;
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let err = rescale_error((res_k - res_g) * half, res_abs * half.abs(), res_asc * half.abs());
    Ok((value, err))
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Domain(format!("non-finite integrand value {y} at x = {x}")))
    }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    config: &QuadratureConfig,
) -> Result<Estimate> {
    integrate_panels(f, &[a, b], config)
}

/// Integrate `f` over consecutive panels `[p₀, p₁], [p₁, p₂], …`.
///
/// Breakpoints must be non-decreasing; zero-width panels are skipped.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    config: &QuadratureConfig,
) -> Result<Estimate> {
    if breakpoints.len() < 2 {
        return Ok(Estimate { value: 0.0, error: 0.0, intervals: 0 });
    }
    if breakpoints.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::Domain("quadrature breakpoints must be non-decreasing".into()));
    }

    let mut heap = BinaryHeap::with_capacity(breakpoints.len() * 2);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breakpoints.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (value, error) = gk21(&mut f, w[0], w[1])?;
        total += value;
        total_err += error;
        heap.push(Interval { a: w[0], b: w[1], value, error });
    }

    let tolerance = |total: f64| config.abs_tol.max(config.rel_tol * total.abs());
    while total_err > tolerance(total) {
        if heap.len() >= config.max_intervals {
            return Err(Error::Quadrature { achieved: total_err, requested: tolerance(total) });
        }
        let worst = heap.pop().expect("heap holds at least one interval");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval is at machine resolution; further bisection is meaningless.
            return Err(Error::Quadrature { achieved: total_err, requested: tolerance(total) });
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid)?;
        let (v2, e2) = gk21(&mut f, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Interval { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Interval { a: mid, b: worst.b, value: v2, error: e2 });
    }

    // Re-sum from the final partition, left to right, so the result does not
    // carry the running-update rounding.
    let mut parts = heap.into_vec();
    parts.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = parts.iter().map(|p| p.value).sum();
    let error = parts.iter().map(|p| p.error).sum();
    Ok(Estimate { value, error, intervals: parts.len() })
}
