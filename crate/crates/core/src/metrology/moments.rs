use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{collective_operator, CMatrix, DickeState, SpinComponent};

/// The five collective-spin moments that fix `ξ_R²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyMoments {
    /// `⟨J₊⟩`
    pub jp: Complex64,
    /// `⟨J₊²⟩`
    pub jp2: Complex64,
    /// `⟨J_z⟩`
    pub jz: f64,
    /// `⟨J_z²⟩`
    pub jz2: f64,
    /// `⟨J₊(2J_z + 1)⟩`
    pub jp_2jz1: Complex64,
}

impl LossyMoments {
    /// Traces against `ρ`; divided by `tr ρ` when `normalized`.
    pub fn from_state(state: &DickeState, normalized: bool) -> Result<Self> {
        let n = state.n_atoms();
        let jp = collective_operator(n, SpinComponent::Jplus)?;
        let jz = collective_operator(n, SpinComponent::Jz)?;
        let id = CMatrix::identity(n + 1, n + 1);
        let two_jz1 = &jz * Complex64::new(2.0, 0.0) + id;
        let ev = |op: &CMatrix| state.expectation(op, normalized);
        Ok(Self {
            jp: ev(&jp)?,
            jp2: ev(&(&jp * &jp))?,
            jz: ev(&jz)?.re,
            jz2: ev(&(&jz * &jz))?.re,
            jp_2jz1: ev(&(&jp * &two_jz1))?,
        })
    }

    /// Every moment divided by `w`.
    pub fn scaled(&self, w: f64) -> Self {
        Self {
            jp: self.jp / w,
            jp2: self.jp2 / w,
            jz: self.jz / w,
            jz2: self.jz2 / w,
            jp_2jz1: self.jp_2jz1 / w,
        }
    }

    /// Largest componentwise deviation, each scaled by `max(1, |other|)`.
    pub fn max_relative_deviation(&self, other: &Self) -> f64 {
        let c = |a: Complex64, b: Complex64| (a - b).norm() / b.norm().max(1.0);
        let r = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
        c(self.jp, other.jp)
            .max(c(self.jp2, other.jp2))
            .max(r(self.jz, other.jz))
            .max(r(self.jz2, other.jz2))
            .max(c(self.jp_2jz1, other.jp_2jz1))
    }
}

/// Closed-form moments of the evolved `+x` coherent state, unnormalized
/// (they carry the survival weight).
///
/// With `L = Γ_loss t`, `D = tΔ(t)`, `G = tγ(t)`:
/// `⟨J₊(2J_z+1)⟩ = 2j(j−½) e^{itλ′} e^{−NL} e^{−G} cosh(L+iD)^{2j−2} · (−sinh(L+iD))`.
pub fn lossy_moments_oracle(
    t: f64,
    delta_t: f64,
    gamma_t: f64,
    gamma_loss: f64,
    lambda_prime: f64,
    n_atoms: usize,
) -> Result<LossyMoments> {
    if n_atoms < 2 {
        return Err(Error::Domain(format!("moment closed forms need N >= 2, got {n_atoms}")));
    }
    let nf = n_atoms as f64;
    let j = 0.5 * nf;
    let a = t * delta_t;
    let g = t * gamma_t;
    let x = gamma_loss * t;
    let i = Complex64::i();
    let decay = (-nf * x).exp();

    // cosh(x + i a) and cosh(x + 2i a)
    let ch1 = Complex64::new(a.cos() * x.cosh(), a.sin() * x.sinh());
    let ch2 = Complex64::new((2.0 * a).cos() * x.cosh(), (2.0 * a).sin() * x.sinh());
    // −sinh(x + i a)
    let msh1 = Complex64::new(-a.cos() * x.sinh(), -a.sin() * x.cosh());
    let rot1 = (i * t * lambda_prime).exp();
    let rot2 = (i * 2.0 * t * lambda_prime).exp();

    let jp = rot1 * j * decay * (-g).exp() * ch1.powi(n_atoms as i32 - 1);
    let jp2 = rot2 * j * (j - 0.5) * decay * (-4.0 * g).exp() * ch2.powi(n_atoms as i32 - 2);
    let jz = -j / 2f64.powf(j) * decay * (2.0 * x).sinh() * (1.0 + (2.0 * x).cosh()).powf(j - 1.0);
    let e2x = (2.0 * x).exp();
    let jz2 = j * decay / (2f64.powf(j) * (1.0 + e2x).powi(2))
        * (1.0 + (2.0 * x).cosh()).powf(j)
        * (2.0 * e2x + j * (1.0 - e2x).powi(2));
    let jp_2jz1 = rot1 * 2.0 * j * (j - 0.5) * decay * (-g).exp() * ch1.powi(n_atoms as i32 - 2) * msh1;
    Ok(LossyMoments { jp, jp2, jz, jz2, jp_2jz1 })
}

/// `tr ρ(t) = e^{−NΓt} cosh^N(Γt)` for the evolved `+x` coherent state.
pub fn lossy_trace_oracle(t: f64, gamma_loss: f64, n_atoms: usize) -> f64 {
    let x = gamma_loss * t;
    let n = n_atoms as i32;
    (-(n as f64) * x).exp() * x.cosh().powi(n)
}
