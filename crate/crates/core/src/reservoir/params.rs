use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Dimensionless description of the dipolar Bose gas reservoir.
///
/// Energies in `ħω⊥`, lengths in `ℓ_B`, temperature in `ħω⊥/k_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirParams {
    /// Contact strength `η = 8 n₀ a_B`.
    pub eta: f64,
    /// Effective relative dipolar strength after tilt-angle tuning.
    pub epsilon_dd: f64,
    /// Coupling prefactor `Θ`.
    pub theta: f64,
    /// `ℓ_A / ℓ_B`.
    pub ell_ratio: f64,
    pub temperature: f64,
}

impl ReservoirParams {
    pub fn new(eta: f64, epsilon_dd: f64, theta: f64) -> Result<Self> {
        let p = Self { eta, epsilon_dd, theta, ell_ratio: 1.0, temperature: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_ell_ratio(mut self, ell_ratio: f64) -> Result<Self> {
        self.ell_ratio = ell_ratio;
        self.validate()?;
        Ok(self)
    }

    pub fn with_temperature(mut self, temperature: f64) -> Result<Self> {
        self.temperature = temperature;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(Error::InvalidParameter(format!("{what} out of range: {v}")))
        };
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return bad("eta (must be > 0)", self.eta);
        }
        if !(-1.0..=1.0).contains(&self.epsilon_dd) {
            return bad("epsilon_dd (must lie in [-1, 1])", self.epsilon_dd);
        }
        if !(self.theta > 0.0) || !self.theta.is_finite() {
            return bad("theta (must be > 0)", self.theta);
        }
        if !(self.ell_ratio > 0.0) || !self.ell_ratio.is_finite() {
            return bad("ell_ratio (must be > 0)", self.ell_ratio);
        }
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return bad("temperature (must be >= 0)", self.temperature);
        }
        Ok(())
    }
}

/// Tilt angle `φ` with `sin²φ = 2/3`, where the effective 1D dipolar
/// interaction vanishes (≈ 54.74°).
pub fn magic_angle() -> f64 {
    (2.0f64 / 3.0).sqrt().asin()
}

/// `ε_dd (1 − 3/2 sin²φ)` for dipoles tilted by `φ` from the trap axis.
pub fn effective_epsilon_dd(epsilon_dd_bare: f64, tilt_angle: f64) -> f64 {
    let s = tilt_angle.sin();
    epsilon_dd_bare * (1.0 - 1.5 * s * s)
}

pub mod constants {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const MU0: f64 = 1.256_637_062_12e-6;
    pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
    pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
    pub const ATOMIC_MASS: f64 = 1.660_539_066_60e-27;
    pub const BOLTZMANN: f64 = 1.380_649e-23;
}

/// Laboratory (SI) description of the impurity atoms and the reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabParams {
    /// Linear condensate density (1/m).
    pub n0: f64,
    /// Reservoir contact scattering length (m).
    pub a_b: f64,
    /// Impurity–reservoir scattering length (m).
    pub a_ab: f64,
    /// Dipolar length (m); derived from `mu_m` when absent.
    pub a_dd: Option<f64>,
    /// Impurity mass (kg).
    pub m_a: f64,
    /// Reservoir atom mass (kg).
    pub m_b: f64,
    /// Transverse reservoir trap frequency (rad/s).
    pub omega_perp: f64,
    /// Impurity trap frequency (rad/s).
    pub omega_a: f64,
    /// Magnetic moment in Bohr magnetons.
    pub mu_m: f64,
    /// Dipole tilt from the trap axis (rad).
    pub tilt_angle: f64,
    /// Reservoir temperature (K).
    pub temperature: f64,
}

impl LabParams {
    /// ⁸⁷Rb impurities in a ¹⁶²Dy reservoir at `n₀ = 10⁸ m⁻¹`,
    /// `ω⊥ = 2π × 1 kHz`, `a_AB = 5 nm`, with equal oscillator widths.
    pub fn rb_in_dy() -> Self {
        use constants::*;
        let m_a = 87.0 * ATOMIC_MASS;
        let m_b = 162.0 * ATOMIC_MASS;
        let omega_perp = 2.0 * PI * 1e3;
        Self {
            n0: 1e8,
            a_b: 112.0 * BOHR_RADIUS,
            a_ab: 5e-9,
            a_dd: None,
            m_a,
            m_b,
            omega_perp,
            // ℓ_A = ℓ_B
            omega_a: omega_perp * m_b / m_a,
            mu_m: 9.9,
            tilt_angle: 0.0,
            temperature: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("n0", self.n0),
            ("a_b", self.a_b),
            ("a_ab", self.a_ab),
            ("m_a", self.m_a),
            ("m_b", self.m_b),
            ("omega_perp", self.omega_perp),
            ("omega_a", self.omega_a),
            ("mu_m", self.mu_m),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        if let Some(a_dd) = self.a_dd {
            if !(a_dd > 0.0) {
                return Err(Error::InvalidParameter(format!("a_dd must be > 0, got {a_dd}")));
            }
        }
        if !(self.temperature >= 0.0) {
            return Err(Error::InvalidParameter("temperature must be >= 0".into()));
        }
        Ok(())
    }

    /// `a_dd = μ₀ μ_m² m_B / (12π ħ²)` unless given explicitly.
    pub fn dipolar_length(&self) -> f64 {
        use constants::*;
        self.a_dd.unwrap_or_else(|| {
            let mu = self.mu_m * BOHR_MAGNETON;
            MU0 * mu * mu * self.m_b / (12.0 * PI * HBAR * HBAR)
        })
    }

    pub fn ell_a(&self) -> f64 {
        (constants::HBAR / (self.m_a * self.omega_a)).sqrt()
    }

    pub fn ell_b(&self) -> f64 {
        (constants::HBAR / (self.m_b * self.omega_perp)).sqrt()
    }
}

/// Convert laboratory parameters to reservoir parameters plus the static
/// level shift `δ_↑` (in units of `ħω⊥`).
///
/// Note that the returned `epsilon_dd` can fall outside `[-1, 1]` for an
/// untilted strongly dipolar gas; the caller decides whether to validate.
pub fn lab_units_to_dimensionless(lab: &LabParams) -> Result<(ReservoirParams, f64)> {
    use constants::*;
    lab.validate()?;
    let ell_a = lab.ell_a();
    let ell_b = lab.ell_b();
    let ell2 = ell_a * ell_a + ell_b * ell_b;
    let eta = 8.0 * lab.n0 * lab.a_b;
    let mass_factor = (lab.m_a + lab.m_b) / lab.m_a;
    let theta = lab.n0 * ell_b.powi(3) * lab.a_ab * lab.a_ab * mass_factor * mass_factor
        / (PI * ell2 * ell2);
    let epsilon_dd = effective_epsilon_dd(lab.dipolar_length() / lab.a_b, lab.tilt_angle);
    let m_ab = lab.m_a * lab.m_b / (lab.m_a + lab.m_b);
    let delta_up = 2.0 * HBAR * HBAR * lab.a_ab * lab.n0 / (m_ab * ell2);
    let params = ReservoirParams {
        eta,
        epsilon_dd,
        theta,
        ell_ratio: ell_a / ell_b,
        temperature: BOLTZMANN * lab.temperature / (HBAR * lab.omega_perp),
    };
    Ok((params, delta_up / (HBAR * lab.omega_perp)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ReservoirParams::new(5.0, -1.0, 0.015).is_ok());
        assert!(ReservoirParams::new(0.0, 0.0, 0.015).is_err());
        assert!(ReservoirParams::new(5.0, 1.5, 0.015).is_err());
        assert!(ReservoirParams::new(5.0, 0.0, -1.0).is_err());
        let p = ReservoirParams::new(5.0, 0.0, 0.015).unwrap();
        assert!(p.with_temperature(-1.0).is_err());
        assert!(p.with_ell_ratio(0.0).is_err());
    }

    #[test]
    fn tilt_tuning() {
        assert_eq!(effective_epsilon_dd(1.0, 0.0), 1.0);
        assert!((effective_epsilon_dd(1.0, 54.7356f64.to_radians())).abs() < 1e-4);
        assert!((effective_epsilon_dd(1.0, magic_angle())).abs() < 1e-15);
        assert!((effective_epsilon_dd(1.0, PI / 2.0) + 0.5).abs() < 1e-15);
        assert!((magic_angle().to_degrees() - 54.7356).abs() < 1e-4);
    }

    #[test]
    fn magic_angle_cancels_dipolar_term() {
        let lab = LabParams { tilt_angle: magic_angle(), ..LabParams::rb_in_dy() };
        let (p, _) = lab_units_to_dimensionless(&lab).unwrap();
        assert!(p.epsilon_dd.abs() < 1e-12);
    }

    #[test]
    fn dysprosium_dipolar_length() {
        // 131 a₀ / 112 a₀ ≈ 1.17; CODATA constants give a_dd ≈ 128.4 a₀.
        let lab = LabParams::rb_in_dy();
        let ratio = lab.dipolar_length() / lab.a_b;
        assert!((ratio - 131.0 / 112.0).abs() < 0.03 * 1.17, "ratio {ratio}");
    }

    #[test]
    fn rb_dy_setup() {
        let lab = LabParams::rb_in_dy();
        assert!((lab.ell_b() - 2.5e-7).abs() < 0.05 * 2.5e-7);
        assert!((lab.ell_a() / lab.ell_b() - 1.0).abs() < 1e-12);
        let (p, delta_up) = lab_units_to_dimensionless(&lab).unwrap();
        assert!((p.eta - 5.0).abs() < 0.5, "eta {}", p.eta);
        // n₀ a_AB² ℓ_B³ (m_A+m_B)² / (π m_A² (2ℓ_B²)²) evaluated by hand
        let ell = lab.ell_b();
        let by_hand = 1e8 * 25e-18 / (4.0 * ell) * (249.0f64 / 87.0).powi(2) / PI;
        assert!((p.theta - by_hand).abs() < 1e-12 * by_hand);
        assert!((p.theta - 6.5e-3).abs() < 2e-4, "theta {}", p.theta);
        assert!(delta_up > 0.0);
        assert!((p.ell_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lab_validation() {
        let lab = LabParams { n0: -1.0, ..LabParams::rb_in_dy() };
        assert!(lab_units_to_dimensionless(&lab).is_err());
    }
}
