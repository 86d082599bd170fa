use std::f64::consts::PI;
use std::io::Write;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::operators::{collective_operator, magnetic_number, SpinComponent};
use super::{CMatrix, CVector};
use crate::error::{Error, Result};
use crate::output::{fmt12, write_provenance};

const HERMITIAN_TOL: f64 = 1e-12;

/// Collective-spin density matrix in the Dicke basis.
///
/// The trace is cached; it equals 1 for pure and lossless states and
/// decays under one-body loss.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeState {
    n_atoms: usize,
    rho: CMatrix,
    trace: f64,
}

fn binomial_sqrt_amplitudes(n: usize) -> Vec<f64> {
    // 2^{-j} √C(2j, j+m) computed in log space
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    (0..=n)
        .map(|k| (0.5 * (ln_fact[n] - ln_fact[k] - ln_fact[n - k]) - 0.5 * n as f64 * 2f64.ln()).exp())
        .collect()
}

impl DickeState {
    /// Wrap a density matrix, checking dimensions, Hermiticity and trace.
    pub fn from_matrix(n_atoms: usize, rho: CMatrix) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::Domain("Dicke states need N >= 1".into()));
        }
        let dim = n_atoms + 1;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: rho.nrows().max(rho.ncols()) });
        }
        let scale = rho.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let herm = (&rho - rho.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if herm > HERMITIAN_TOL * scale {
            return Err(Error::Precondition(format!("ρ is not Hermitian (deviation {herm:e})")));
        }
        let trace = rho.trace().re;
        if !(trace > 0.0) || trace > 1.0 + 1e-12 {
            return Err(Error::Precondition(format!("trace {trace} outside (0, 1]")));
        }
        Ok(Self { n_atoms, rho, trace })
    }

    /// `|ψ⟩⟨ψ|` for a normalized amplitude vector.
    pub fn pure(n_atoms: usize, psi: &CVector) -> Result<Self> {
        if psi.len() != n_atoms + 1 {
            return Err(Error::DimensionMismatch { expected: n_atoms + 1, got: psi.len() });
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Precondition(format!("state vector norm {norm} is not 1")));
        }
        Self::from_matrix(n_atoms, psi * psi.adjoint())
    }

    /// Coherent spin state along `+x`, `c_m = 2^{−j} √C(2j, j+m)`.
    pub fn css_plus_x(n_atoms: usize) -> Result<Self> {
        Self::pure(n_atoms, &Self::css_plus_x_amplitudes(n_atoms)?)
    }

    pub fn css_plus_x_amplitudes(n_atoms: usize) -> Result<CVector> {
        if n_atoms == 0 {
            return Err(Error::Domain("CSS needs N >= 1".into()));
        }
        let c = binomial_sqrt_amplitudes(n_atoms);
        Ok(CVector::from_iterator(n_atoms + 1, c.into_iter().map(|v| Complex64::new(v, 0.0))))
    }

    /// `e^{iθ₀(J_x sin φ₀ − J_y cos φ₀)} |j, j⟩`, by exact
    /// eigendecomposition of the generator.
    pub fn css_general_amplitudes(n_atoms: usize, theta0: f64, phi0: f64) -> Result<CVector> {
        let jx = collective_operator(n_atoms, SpinComponent::Jx)?;
        let jy = collective_operator(n_atoms, SpinComponent::Jy)?;
        let g = jx * Complex64::new(phi0.sin(), 0.0) - jy * Complex64::new(phi0.cos(), 0.0);
        let eig = SymmetricEigen::new(g);
        let v = &eig.eigenvectors;
        let phases = CVector::from_iterator(
            n_atoms + 1,
            eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, theta0 * l)),
        );
        // U |j,j⟩ = V e^{iθ₀Λ} V† e_top
        let top = v.row(n_atoms).adjoint();
        let inner = top.component_mul(&phases);
        Ok(v * inner)
    }

    pub fn css_general(n_atoms: usize, theta0: f64, phi0: f64) -> Result<Self> {
        let mut psi = Self::css_general_amplitudes(n_atoms, theta0, phi0)?;
        let norm = psi.norm();
        psi /= Complex64::new(norm, 0.0);
        Self::pure(n_atoms, &psi)
    }

    /// Cat state `(|π/2, 0⟩ − e^{iπ(N+1)/2} |π/2, π⟩)/√2`.
    ///
    /// The relative phase makes this the state reached by pure one-axis
    /// twisting at `tΔ = π/2` under the evolution convention of
    /// [`super::evolve`]. That holds for even `N`; for odd `N` twisting
    /// to `π/2` produces the cat along `±y` instead, which is nearly
    /// orthogonal to this one.
    pub fn cat_amplitudes(n_atoms: usize) -> Result<CVector> {
        let a = Self::css_general_amplitudes(n_atoms, 0.5 * PI, 0.0)?;
        let b = Self::css_general_amplitudes(n_atoms, 0.5 * PI, PI)?;
        let phase = Complex64::from_polar(1.0, 0.5 * PI * (n_atoms as f64 + 1.0));
        let psi = a - b * phase;
        let norm = psi.norm();
        Ok(psi / Complex64::new(norm, 0.0))
    }

    pub fn cat_state(n_atoms: usize) -> Result<Self> {
        Self::pure(n_atoms, &Self::cat_amplitudes(n_atoms)?)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        self.n_atoms + 1
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    /// Cached `tr ρ`; the survival weight under loss.
    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// `ρ / tr ρ`.
    pub fn normalize(&self) -> Result<Self> {
        if !(self.trace > 1e-300) {
            return Err(Error::Precondition(format!("cannot normalize: trace {}", self.trace)));
        }
        if (self.trace - 1.0).abs() <= f64::EPSILON {
            return Ok(self.clone());
        }
        let rho = &self.rho / Complex64::new(self.trace, 0.0);
        let trace = rho.trace().re;
        Ok(Self { n_atoms: self.n_atoms, rho, trace })
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.trace - 1.0).abs() <= tol
    }

    /// `tr(O ρ)`, divided by `tr ρ` when `normalized`.
    pub fn expectation(&self, op: &CMatrix, normalized: bool) -> Result<Complex64> {
        let d = self.dim();
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: op.nrows().max(op.ncols()) });
        }
        // tr(Oρ) = Σ_ij O_ij ρ_ji
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += op[(i, j)] * self.rho[(j, i)];
            }
        }
        Ok(if normalized { acc / self.trace } else { acc })
    }

    /// `tr(ρ²)/tr(ρ)²`.
    pub fn purity(&self) -> f64 {
        let s: f64 = self.rho.iter().map(|z| z.norm_sqr()).sum();
        s / (self.trace * self.trace)
    }

    /// Eigenvalues of `ρ`, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.rho.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn write_csv<W: Write>(&self, w: &mut W, provenance: &[String]) -> std::io::Result<()> {
        write_provenance(w, provenance)?;
        writeln!(w, "# N = {}", self.n_atoms)?;
        writeln!(w, "# trace = {}", fmt12(self.trace))?;
        writeln!(w, "m,n,re,im")?;
        let d = self.dim();
        for i in 0..d {
            for k in 0..d {
                let z = self.rho[(i, k)];
                writeln!(
                    w,
                    "{},{},{},{}",
                    magnetic_number(i, self.n_atoms),
                    magnetic_number(k, self.n_atoms),
                    fmt12(z.re),
                    fmt12(z.im)
                )?;
            }
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(n_atoms: usize, rho: CMatrix) -> Self {
        let trace = rho.trace().re;
        Self { n_atoms, rho, trace }
    }
}
