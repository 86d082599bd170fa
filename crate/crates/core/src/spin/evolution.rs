use num_complex::Complex64;

use super::operators::magnetic_number;
use super::state::DickeState;
use crate::error::{Error, Result};

/// Everything the closed-form map needs at one time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionInputs {
    /// `λ′ = λ + δ_↑ − NΔ(t)`.
    pub lambda_prime: f64,
    /// `Δ(t)`.
    pub delta_t: f64,
    /// `γ(t)`.
    pub gamma_t: f64,
    pub gamma_loss: f64,
    pub t: f64,
}

impl EvolutionInputs {
    pub fn new(lambda_prime: f64, delta_t: f64, gamma_t: f64, gamma_loss: f64, t: f64) -> Result<Self> {
        let me = Self { lambda_prime, delta_t, gamma_t, gamma_loss, t };
        me.validate()?;
        Ok(me)
    }

    /// Pure one-axis twisting with dephasing, no loss, `λ′ = 0`.
    pub fn twisting(delta_t: f64, gamma_t: f64, t: f64) -> Result<Self> {
        Self::new(0.0, delta_t, gamma_t, 0.0, t)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.lambda_prime, self.delta_t, self.gamma_t, self.gamma_loss, self.t];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite evolution input: {self:?}")));
        }
        if self.gamma_t < 0.0 || self.gamma_loss < 0.0 || self.t < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "γ(t), Γ_loss and t must be >= 0 (got {}, {}, {})",
                self.gamma_t, self.gamma_loss, self.t
            )));
        }
        Ok(())
    }

    pub fn exponents(&self) -> MapExponents {
        MapExponents {
            linear_phase: self.t * self.lambda_prime,
            twist_phase: self.t * self.delta_t,
            loss: self.t * self.gamma_loss,
            dephasing: self.t * self.gamma_t,
        }
    }
}

/// The four time-integrated rates of the map. Applying two maps in a row
/// is the same as applying the map with the exponents added.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MapExponents {
    /// `tλ′`
    pub linear_phase: f64,
    /// `tΔ(t)`
    pub twist_phase: f64,
    /// `tΓ_loss`
    pub loss: f64,
    /// `tγ(t)`
    pub dephasing: f64,
}

impl std::ops::Add for MapExponents {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            linear_phase: self.linear_phase + o.linear_phase,
            twist_phase: self.twist_phase + o.twist_phase,
            loss: self.loss + o.loss,
            dephasing: self.dephasing + o.dephasing,
        }
    }
}

impl MapExponents {
    /// `ρ_mn ← ρ_mn e^{−i tλ′(m−n)} e^{i tΔ(m²−n²)} e^{−tΓ(m+n+N)} e^{−tγ(m−n)²}`.
    pub fn apply(&self, rho0: &DickeState) -> DickeState {
        let n_atoms = rho0.n_atoms();
        let nf = n_atoms as f64;
        let mut rho = rho0.rho().clone();
        let d = rho.nrows();
        for i in 0..d {
            let m = magnetic_number(i, n_atoms);
            for k in 0..d {
                let n = magnetic_number(k, n_atoms);
                let diff = m - n;
                let phase = -self.linear_phase * diff + self.twist_phase * (m * m - n * n);
                let decay = -self.loss * (m + n + nf) - self.dephasing * diff * diff;
                rho[(i, k)] *= Complex64::from_polar(decay.exp(), phase);
            }
        }
        DickeState::from_parts_unchecked(n_atoms, rho)
    }
}

/// Evolve a Dicke state with the closed-form dephasing-plus-loss map.
pub fn evolve(rho0: &DickeState, inputs: &EvolutionInputs) -> Result<DickeState> {
    inputs.validate()?;
    Ok(inputs.exponents().apply(rho0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{collective_operator, SpinComponent};

    #[test]
    fn identity_map() {
        let s = DickeState::css_plus_x(5).unwrap();
        let out = evolve(&s, &EvolutionInputs::new(0.0, 0.0, 0.0, 0.0, 3.0).unwrap()).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn pure_loss_diagonal() {
        let n = 6;
        let s = DickeState::css_plus_x(n).unwrap();
        let (g, t) = (0.03, 2.0);
        let out = evolve(&s, &EvolutionInputs::new(0.7, 0.1, 0.0, g, t).unwrap()).unwrap();
        for i in 0..=n {
            let m = magnetic_number(i, n);
            let expect = (-2.0 * g * t * (m + 0.5 * n as f64)).exp() * s.rho()[(i, i)].re;
            assert!((out.rho()[(i, i)].re - expect).abs() < 1e-15);
        }
        assert!(out.trace() < 1.0);
    }

    #[test]
    fn normalized_loss_is_boltzmann_reweighting() {
        let n = 8;
        let s = DickeState::css_plus_x(n).unwrap();
        let x = 0.05;
        let out = evolve(&s, &EvolutionInputs::new(0.0, 0.0, 0.0, x, 1.0).unwrap()).unwrap().normalize().unwrap();
        let c = DickeState::css_plus_x_amplitudes(n).unwrap();
        for i in 0..n {
            let ratio = out.rho()[(i + 1, i + 1)].re / out.rho()[(i, i)].re;
            let expect = c[i + 1].norm_sqr() / c[i].norm_sqr() * (-2.0 * x).exp();
            assert!((ratio - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn dephasing_lowers_purity() {
        let s = DickeState::css_plus_x(2).unwrap();
        let mut last = s.purity();
        for &g in &[0.01, 0.1, 0.5, 2.0] {
            let p = evolve(&s, &EvolutionInputs::twisting(0.3, g, 1.0).unwrap()).unwrap().purity();
            assert!(p < last);
            last = p;
        }
    }

    #[test]
    fn lossless_trace_conserved() {
        let s = DickeState::cat_state(11).unwrap();
        let out = evolve(&s, &EvolutionInputs::new(2.0, 0.4, 0.2, 0.0, 7.0).unwrap()).unwrap();
        assert!((out.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn linear_phase_is_a_z_rotation() {
        let s = DickeState::css_plus_x(9).unwrap();
        let a = evolve(&s, &EvolutionInputs::new(0.0, 0.02, 0.01, 0.001, 5.0).unwrap()).unwrap();
        let b = evolve(&s, &EvolutionInputs::new(3.3, 0.02, 0.01, 0.001, 5.0).unwrap()).unwrap();
        for (x, y) in a.rho().iter().zip(b.rho().iter()) {
            assert!((x.norm() - y.norm()).abs() < 1e-12);
        }
        // and ⟨J_z⟩, a z-invariant, is unchanged
        let jz = collective_operator(9, SpinComponent::Jz).unwrap();
        let d = a.expectation(&jz, true).unwrap() - b.expectation(&jz, true).unwrap();
        assert!(d.norm() < 1e-12);
    }

    #[test]
    fn composition_adds_exponents() {
        let s = DickeState::css_plus_x(7).unwrap();
        let a = EvolutionInputs::new(0.2, 0.05, 0.01, 0.002, 3.0).unwrap();
        let b = EvolutionInputs::new(-0.1, 0.03, 0.02, 0.001, 4.0).unwrap();
        let two = b.exponents().apply(&a.exponents().apply(&s));
        let one = (a.exponents() + b.exponents()).apply(&s);
        assert!((two.rho() - one.rho()).norm() < 1e-13);
    }

    #[test]
    fn rejects_negative_rates() {
        assert!(EvolutionInputs::new(0.0, 0.0, -1e-3, 0.0, 1.0).is_err());
        assert!(EvolutionInputs::new(0.0, 0.0, 0.0, -1.0, 1.0).is_err());
        assert!(EvolutionInputs::new(0.0, f64::NAN, 0.0, 0.0, 1.0).is_err());
    }
}
