//! Effective 1D dipolar form factor and the Bogoliubov dispersion.
//!
//! Wavenumbers are `kℓ_B`, energies `ħω⊥`, and the free-particle energy is
//! `E_k = k²/2`.

use super::params::ReservoirParams;
use crate::error::{Error, Result};
use crate::special::scaled_incomplete_gamma0;

/// `ν̃(k) = 1 − (3/2) k² e^{k²/2} Γ(0, k²/2)`, decreasing from 1 to −2.
pub fn dipole_form_factor(k: f64) -> f64 {
    1.0 - one_minus_form_factor(k)
}

/// `dν̃/dk = −3k [(1 + x) e^x Γ(0, x) − 1]` with `x = k²/2`.
pub fn dipole_form_factor_slope(k: f64) -> f64 {
    let x = 0.5 * k * k;
    if x == 0.0 {
        return 0.0;
    }
    -3.0 * k * ((1.0 + x) * scaled_incomplete_gamma0(x).expect("x > 0") - 1.0)
}

/// `k⁴ + η k² (1 − ε_dd ν̃(k))`; the dispersion is `ε̄ = √radicand / 2`.
pub fn radicand(k: f64, params: &ReservoirParams) -> f64 {
    let k2 = k * k;
    k2 * reduced_radicand(k, params)
}

// radicand / k², finite and sign-equivalent at k = 0
// written as (1 − ε_dd) + ε_dd (1 − ν̃) to avoid cancellation at small k
fn reduced_radicand(k: f64, p: &ReservoirParams) -> f64 {
    k * k + p.eta * ((1.0 - p.epsilon_dd) + p.epsilon_dd * one_minus_form_factor(k))
}

/// `1 − ν̃(k) = 3x e^x Γ(0, x)`, accurate as `k → 0`.
fn one_minus_form_factor(k: f64) -> f64 {
    let x = 0.5 * k * k;
    if x == 0.0 {
        return 0.0;
    }
    3.0 * x * scaled_incomplete_gamma0(x).expect("x > 0")
}

/// Bogoliubov energy `ε̄(k) = ½ √(k⁴ + η k² [1 − ε_dd ν̃(k)])`.
pub fn bogoliubov_energy(k: f64, params: &ReservoirParams) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("wavenumber must be >= 0, got {k}")));
    }
    if k == 0.0 {
        return Ok(0.0);
    }
    let q = reduced_radicand(k, params);
    if q < 0.0 {
        return Err(Error::Unstable { k, radicand: q * k * k });
    }
    // ½ k √q rather than ½ √(k² q): no underflow at tiny k
    Ok(0.5 * k * q.sqrt())
}

/// `dε̄/dk`, analytic. At `k = 0` this is the sound velocity.
pub fn energy_slope(k: f64, params: &ReservoirParams) -> Result<f64> {
    let p = params;
    if k == 0.0 {
        let c2 = p.eta * (1.0 - p.epsilon_dd);
        return Ok(0.5 * c2.max(0.0).sqrt());
    }
    let dnu = dipole_form_factor_slope(k);
    let q = reduced_radicand(k, p);
    if q < 0.0 {
        return Err(Error::Unstable { k, radicand: q * k * k });
    }
    // d/dk [k² q] = 2k q + k² q', and ε̄ = ½ k √q
    let dq = 2.0 * k - p.eta * p.epsilon_dd * dnu;
    Ok(0.5 * (q.sqrt() + k * dq / (2.0 * q.sqrt())))
}

/// Bogoliubov amplitudes `(u_k, v_k)`.
///
/// `u² − v² = 1` always; `v ≥ 0` only where `ε̄ ≥ k²/2`, i.e. where the
/// effective 1D interaction is repulsive at that `k`.
pub fn bogoliubov_uv(k: f64, params: &ReservoirParams) -> Result<(f64, f64)> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("u_k, v_k diverge at k = 0 (got k = {k})")));
    }
    let e = bogoliubov_energy(k, params)?;
    let free = 0.5 * k * k;
    // √(ε/E) = √q / k with q the reduced radicand
    let a = (e / free).sqrt();
    let b = 1.0 / a;
    Ok((0.5 * (a + b), 0.5 * (a - b)))
}

/// Spectral weight per unit wavenumber, `w̃(k) = Θ k² e^{−k²ℓ²/2} / ε̄(k)`
/// with `ℓ = ℓ_A/ℓ_B`.
///
/// Defined so that `∫ w̃(k) g(ε̄(k)) dk = ∫ J(ω) g(ω) dω`.
pub fn coupling_weight(k: f64, params: &ReservoirParams) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!(
            "coupling weight is a 0/0 limit at k = 0 (got k = {k})"
        )));
    }
    let e = bogoliubov_energy(k, params)?;
    Ok(weight_given_energy(k, e, params))
}

pub(crate) fn weight_given_energy(k: f64, energy: f64, p: &ReservoirParams) -> f64 {
    let l = p.ell_ratio;
    p.theta * k * (k / energy) * (-0.5 * k * k * l * l).exp()
}

/// Outcome of a dense scan of the dispersion radicand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Smallest `k` with a negative radicand, bisected to `1e-8`.
    pub first_unstable_k: Option<f64>,
    pub k_max: f64,
    pub samples: usize,
}

/// Sample `(0, k_max]` for a negative dispersion radicand.
pub fn stability_scan(params: &ReservoirParams, k_max: f64, n_samples: usize) -> StabilityReport {
    let n = n_samples.max(1);
    let mut prev = 0.0;
    for i in 1..=n {
        let k = k_max * i as f64 / n as f64;
        if reduced_radicand(k, params) < 0.0 {
            let (mut lo, mut hi) = (prev, k);
            if reduced_radicand(lo, params) < 0.0 {
                hi = lo;
                lo = 0.0;
            }
            while hi - lo > 1e-8 {
                let mid = 0.5 * (lo + hi);
                if reduced_radicand(mid, params) < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return StabilityReport { stable: false, first_unstable_k: Some(hi), k_max, samples: n };
        }
        prev = k;
    }
    StabilityReport { stable: true, first_unstable_k: None, k_max, samples: n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::incomplete_gamma0;

    fn p(eta: f64, edd: f64) -> ReservoirParams {
        ReservoirParams::new(eta, edd, 0.015).unwrap()
    }

    #[test]
    fn form_factor_limits() {
        assert_eq!(dipole_form_factor(0.0), 1.0);
        // ν̃ ≈ −2 + 3/x − 6/x² for large x = k²/2
        assert!((dipole_form_factor(50.0) + 2.0 - 3.0 / 1250.0).abs() < 1e-5);
        assert!((dipole_form_factor(1000.0) + 2.0).abs() < 1e-5);
        let expect = 1.0 - 1.5 * 0.5f64.exp() * incomplete_gamma0(0.5).unwrap();
        assert!((dipole_form_factor(1.0) - expect).abs() < 1e-14);
        assert!((dipole_form_factor(1.0) + 0.3844).abs() < 1e-4);
    }

    #[test]
    fn form_factor_monotone_decreasing() {
        let mut prev = dipole_form_factor(0.0);
        for i in 1..=20_000 {
            let k = i as f64 * 1e-3 * 3.0;
            let v = dipole_form_factor(k);
            assert!(v < prev, "not decreasing at k = {k}");
            assert!(v > -2.0);
            prev = v;
        }
    }

    #[test]
    fn form_factor_slope_matches_finite_difference() {
        for &k in &[0.05, 0.3, 1.0, 1.4, 2.5, 7.0] {
            let h = 1e-6;
            let fd = (dipole_form_factor(k + h) - dipole_form_factor(k - h)) / (2.0 * h);
            assert!((dipole_form_factor_slope(k) - fd).abs() < 1e-7, "k = {k}");
        }
    }

    #[test]
    fn energy_values() {
        assert_eq!(bogoliubov_energy(0.0, &p(5.0, 0.0)).unwrap(), 0.0);
        let e = bogoliubov_energy(1.0, &p(5.0, 0.0)).unwrap();
        assert!((e - 6.0f64.sqrt() / 2.0).abs() < 1e-15);
        let e = bogoliubov_energy(1.0, &p(5.0, -1.0)).unwrap();
        let expect = 0.5 * (1.0 + 5.0 * (1.0 + dipole_form_factor(1.0))).sqrt();
        assert!((e - expect).abs() < 1e-15);
        assert!(bogoliubov_energy(-1.0, &p(5.0, 0.0)).is_err());
    }

    #[test]
    fn energy_limits() {
        for &edd in &[-1.0, 0.0, 0.5] {
            let params = p(5.0, edd);
            let c = 0.5 * (5.0 * (1.0 - edd)).sqrt();
            let k = 1e-5;
            let ratio = bogoliubov_energy(k, &params).unwrap() / k;
            assert!((ratio - c).abs() < 1e-3 * c, "edd {edd}: {ratio} vs {c}");
            assert!((energy_slope(0.0, &params).unwrap() - c).abs() < 1e-15);
            let k = 2e3;
            let ratio = bogoliubov_energy(k, &params).unwrap() / (k * k);
            assert!((ratio - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn slope_matches_finite_difference() {
        for &edd in &[-1.0, 0.0, 1.0] {
            let params = p(5.0, edd);
            for &k in &[0.01f64, 0.2, 1.0, 3.0, 8.0] {
                let h = 1e-6 * k.max(1.0);
                let fd = (bogoliubov_energy(k + h, &params).unwrap()
                    - bogoliubov_energy(k - h, &params).unwrap())
                    / (2.0 * h);
                let an = energy_slope(k, &params).unwrap();
                assert!((an - fd).abs() < 1e-6 * an.abs().max(1.0), "edd {edd} k {k}: {an} vs {fd}");
            }
        }
    }

    #[test]
    fn uv_identity_and_limits() {
        for &edd in &[-1.0, 0.0, 1.0] {
            let params = p(5.0, edd);
            for i in 1..=400 {
                let k = 0.01 * i as f64 * 2.0;
                let (u, v) = bogoliubov_uv(k, &params).unwrap();
                assert!((u * u - v * v - 1.0).abs() < 1e-12, "k {k}");
                assert!(u >= 1.0);
                if edd >= 0.0 {
                    assert!(v >= 0.0);
                }
            }
        }
        let (u, v) = bogoliubov_uv(200.0, &p(5.0, 0.0)).unwrap();
        assert!((u - 1.0).abs() < 1e-8 && v.abs() < 1e-4);
        let e = 6.0f64.sqrt() / 2.0;
        let (u, v) = bogoliubov_uv(1.0, &p(5.0, 0.0)).unwrap();
        assert!((u - 0.5 * ((e / 0.5).sqrt() + (0.5 / e).sqrt())).abs() < 1e-15);
        assert!((v - 0.5 * ((e / 0.5).sqrt() - (0.5 / e).sqrt())).abs() < 1e-15);
        assert!(bogoliubov_uv(0.0, &p(5.0, 0.0)).is_err());
    }

    #[test]
    fn coupling_weight_values() {
        let params = p(5.0, 0.0);
        let w = coupling_weight(1.0, &params).unwrap();
        assert!((w - 0.015 * (-0.5f64).exp() / (6.0f64.sqrt() / 2.0)).abs() < 1e-16);
        assert!(coupling_weight(0.0, &params).is_err());
        let k = 1e-6;
        let small = coupling_weight(k, &params).unwrap();
        let phonon = 0.015 * k * 2.0 / 5.0f64.sqrt();
        assert!((small - phonon).abs() < 1e-6 * phonon);
        assert!(coupling_weight(40.0, &params).unwrap() < 1e-300);
    }

    #[test]
    fn stability() {
        for &edd in &[0.0, -1.0, 1.0] {
            let r = stability_scan(&p(5.0, edd), 50.0, 50_000);
            assert!(r.stable, "edd {edd}");
            assert_eq!(r.first_unstable_k, None);
        }
        // Strong contact interaction with repulsive dipoles softens the
        // spectrum below zero around k ≈ 2.
        let r = stability_scan(&p(100.0, -1.0), 50.0, 5_000);
        assert!(!r.stable);
        let k = r.first_unstable_k.unwrap();
        assert!(reduced_radicand(k, &p(100.0, -1.0)) < 0.0);
        assert!(reduced_radicand(k - 2e-8, &p(100.0, -1.0)) >= 0.0);
        match bogoliubov_energy(k + 1e-3, &p(100.0, -1.0)) {
            Err(Error::Unstable { k: kk, .. }) => assert!((kk - k - 1e-3).abs() < 1e-12),
            other => panic!("expected instability, got {other:?}"),
        }
    }
}
