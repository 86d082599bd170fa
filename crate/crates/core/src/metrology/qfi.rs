use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{collective_operator, CMatrix, DickeState, SpinComponent};

/// Pairs of eigenvalues with `p_i + p_j` at or below this are skipped.
pub const DEFAULT_EIGEN_CUTOFF: f64 = 1e-12;

const TRACE_TOL: f64 = 1e-8;
const PSD_TOL: f64 = 1e-10;
const DEGENERACY_TOL: f64 = 1e-9;

/// `C_kl = Σ_{i≠j} (p_i − p_j)²/(p_i + p_j) · 2 Re(⟨i|J_k|j⟩⟨j|J_l|i⟩)`.
pub fn qfi_matrix_with_cutoff(state: &DickeState, eigen_cutoff: f64) -> Result<Matrix3<f64>> {
    if (state.trace() - 1.0).abs() > TRACE_TOL {
        return Err(Error::Precondition(format!(
            "QFI needs a unit-trace state, trace is {}",
            state.trace()
        )));
    }
    let n = state.n_atoms();
    let eig = SymmetricEigen::new(state.rho().clone());
    let min = eig.eigenvalues.min();
    if min < -PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    let mut p: Vec<f64> = eig.eigenvalues.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);

    let v = &eig.eigenvectors;
    let vh = v.adjoint();
    let rotated: Vec<CMatrix> = [SpinComponent::Jx, SpinComponent::Jy, SpinComponent::Jz]
        .iter()
        .map(|&c| Ok(&vh * collective_operator(n, c)? * v))
        .collect::<Result<_>>()?;

    let d = p.len();
    let mut c = Matrix3::zeros();
    for a in 0..d {
        for b in 0..d {
            let s = p[a] + p[b];
            if a == b || s <= eigen_cutoff {
                continue;
            }
            let w = (p[a] - p[b]).powi(2) / s;
            if w == 0.0 {
                continue;
            }
            let elems: [Complex64; 3] = [rotated[0][(a, b)], rotated[1][(a, b)], rotated[2][(a, b)]];
            for k in 0..3 {
                for l in k..3 {
                    // ⟨b|J_l|a⟩ = conj(⟨a|J_l|b⟩)
                    let v = 2.0 * w * (elems[k] * elems[l].conj()).re;
                    c[(k, l)] += v;
                }
            }
        }
    }
    for k in 0..3 {
        for l in 0..k {
            c[(k, l)] = c[(l, k)];
        }
    }
    Ok(c)
}

/// QFI matrix with the default eigenvalue-pair cutoff.
pub fn qfi_matrix(state: &DickeState) -> Result<Matrix3<f64>> {
    qfi_matrix_with_cutoff(state, DEFAULT_EIGEN_CUTOFF)
}

/// Largest eigenvalue of the QFI matrix and its direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiMax {
    pub value: f64,
    /// Unit vector; within a degenerate top eigenspace, the
    /// lexicographically largest one.
    pub direction: [f64; 3],
    pub matrix: Matrix3<f64>,
}

impl QfiMax {
    pub fn from_matrix(c: Matrix3<f64>) -> Self {
        let eig = SymmetricEigen::new(c);
        let top = eig.eigenvalues.max();
        let tol = DEGENERACY_TOL * top.abs().max(1.0);
        let basis: Vec<Vector3<f64>> = (0..3)
            .filter(|&i| eig.eigenvalues[i] >= top - tol)
            .map(|i| eig.eigenvectors.column(i).into_owned())
            .collect();
        let mut direction = Vector3::zeros();
        for axis in [Vector3::x(), Vector3::y(), Vector3::z()] {
            let proj: Vector3<f64> = basis.iter().map(|b| b * b.dot(&axis)).sum();
            if proj.norm() > 1e-8 {
                direction = proj.normalize();
                break;
            }
        }
        Self { value: top, direction: [direction.x, direction.y, direction.z], matrix: c }
    }
}

/// `F_Q^max` and its rotation axis.
pub fn qfi_max(state: &DickeState) -> Result<QfiMax> {
    Ok(QfiMax::from_matrix(qfi_matrix(state)?))
}

/// Closed-form QFI matrix elements for two atoms without loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiN2 {
    pub c_xx: f64,
    pub c_yy: f64,
    pub c_zz: f64,
    pub c_yz: f64,
    pub c_perp: f64,
    pub f_q_max: f64,
}

/// Two-atom QFI from the eigen-structure of the evolved state.
///
/// `ρ` has eigenvalues `p = (1 − e^{−4G})/4` and
/// `p_± = e^{−4G}(1 + 3e^{4G} ± Ξ)/8`, `Ξ = √((1 − e^{4G})² + 16e^{6G})`,
/// with `G = tγ`, `D = tΔ`. The `yz` block is assembled from
/// `α_± = 2√2 / √(16 + e^{−6G}(1 − e^{4G} ± Ξ)²)` and
/// `β_± = −e^{iD} e^{−3G}(1 − e^{4G} ± Ξ) / √(16 + e^{−6G}(1 − e^{4G} ± Ξ)²)`.
pub fn qfi_n2_analytic(t: f64, delta_t: f64, gamma_t: f64) -> QfiN2 {
    let d = t * delta_t;
    let g = t * gamma_t;
    let e = |x: f64| x.exp();

    let c_xx = (4.0 * (2.0 * g).sinh().powi(2) + 16.0 * e(2.0 * g)) / (1.0 + 3.0 * e(4.0 * g))
        * (1.0 - 16.0 * d.cos().powi(2) / (e(-6.0 * g) * (1.0 - e(4.0 * g)).powi(2) + 16.0));

    let p = 0.25 * (1.0 - e(-4.0 * g));
    let xi = ((1.0 - e(4.0 * g)).powi(2) + 16.0 * e(6.0 * g)).sqrt();
    let p_plus = 0.125 * e(-4.0 * g) * (1.0 + 3.0 * e(4.0 * g) + xi);
    let p_minus = 0.125 * e(-4.0 * g) * (1.0 + 3.0 * e(4.0 * g) - xi);
    let branch = |s: f64| 1.0 - e(4.0 * g) + s * xi;
    let norm = |s: f64| (16.0 + e(-6.0 * g) * branch(s).powi(2)).sqrt();
    let alpha = |s: f64| 2.0 * 2f64.sqrt() / norm(s);
    let beta = |s: f64| -Complex64::from_polar(1.0, d) * e(-3.0 * g) * branch(s) / norm(s);
    let weight = |q: f64| {
        let s = p + q;
        if s <= DEFAULT_EIGEN_CUTOFF {
            0.0
        } else {
            (p - q).powi(2) / s
        }
    };
    let (w_minus, w_plus) = (weight(p_minus), weight(p_plus));

    let c_yy = 4.0 * (beta(1.0).norm_sqr() * w_minus + beta(-1.0).norm_sqr() * w_plus);
    let c_zz = 8.0 * (alpha(1.0).powi(2) * w_minus + alpha(-1.0).powi(2) * w_plus);
    let c_yz = 4.0 * 2f64.sqrt() * (w_minus * alpha(1.0) * beta(1.0).im + w_plus * alpha(-1.0) * beta(-1.0).im);
    let c_perp = 0.5 * (c_yy + c_zz + ((c_yy - c_zz).powi(2) + 4.0 * c_yz * c_yz).sqrt());
    QfiN2 { c_xx, c_yy, c_zz, c_yz, c_perp, f_q_max: c_xx.max(c_perp) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{evolve, EvolutionInputs};
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn css_is_shot_noise() {
        for n in 1..=30 {
            let q = qfi_max(&DickeState::css_plus_x(n).unwrap()).unwrap();
            assert!((q.value - n as f64).abs() < 1e-10, "N {n}: {}", q.value);
        }
    }

    #[test]
    fn cat_reaches_heisenberg_limit_along_x() {
        for n in [2, 6, 10, 21] {
            let q = qfi_max(&DickeState::cat_state(n).unwrap()).unwrap();
            let n2 = (n * n) as f64;
            assert!(rel(q.value, n2) < 1e-10);
            assert!((q.matrix[(0, 0)] - n2).abs() < 1e-8 * n2);
        }
    }

    #[test]
    fn maximally_mixed_has_zero_qfi() {
        let n = 5;
        let rho = CMatrix::identity(n + 1, n + 1) / Complex64::new((n + 1) as f64, 0.0);
        let c = qfi_matrix(&DickeState::from_matrix(n, rho).unwrap()).unwrap();
        assert!(c.norm() < 1e-12);
    }

    #[test]
    fn pure_state_is_four_times_covariance() {
        // deterministic pseudo-random pure states
        let mut seed = 0x2545f4914f6cdd1du64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [2, 4, 7, 10] {
            let mut psi = crate::spin::CVector::from_fn(n + 1, |_, _| Complex64::new(next(), next()));
            let nrm = psi.norm();
            psi /= Complex64::new(nrm, 0.0);
            let s = DickeState::pure(n, &psi).unwrap();
            let ops = [SpinComponent::Jx, SpinComponent::Jy, SpinComponent::Jz].map(|c| collective_operator(n, c).unwrap());
            let mut cov = Matrix3::zeros();
            for k in 0..3 {
                for l in 0..3 {
                    let sym = 0.5 * s.expectation(&(&ops[k] * &ops[l] + &ops[l] * &ops[k]), true).unwrap().re;
                    let mk = s.expectation(&ops[k], true).unwrap().re;
                    let ml = s.expectation(&ops[l], true).unwrap().re;
                    cov[(k, l)] = sym - mk * ml;
                }
            }
            let q = qfi_max(&s).unwrap();
            let expect = 4.0 * cov.symmetric_eigenvalues().max();
            assert!(rel(q.value, expect) < 1e-8, "N {n}: {} vs {expect}", q.value);
        }
    }

    #[test]
    fn n2_closed_form_matches_numerics() {
        for &(d, g) in &[(0.7, 0.05), (1.2, 0.3), (0.3, 0.5), (PI / 2.0, 0.0), (2.9, 0.21), (0.0, 0.1)] {
            let s = evolve(&DickeState::css_plus_x(2).unwrap(), &EvolutionInputs::twisting(d, g, 1.0).unwrap()).unwrap();
            let c = qfi_matrix(&s).unwrap();
            let a = qfi_n2_analytic(1.0, d, g);
            let tol = 1e-10;
            assert!((c[(0, 0)] - a.c_xx).abs() < tol, "xx {d} {g}: {} vs {}", c[(0, 0)], a.c_xx);
            assert!((c[(1, 1)] - a.c_yy).abs() < tol, "yy {d} {g}: {} vs {}", c[(1, 1)], a.c_yy);
            assert!((c[(2, 2)] - a.c_zz).abs() < tol, "zz {d} {g}: {} vs {}", c[(2, 2)], a.c_zz);
            // the off-diagonal element enters only squared
            assert!((c[(1, 2)].abs() - a.c_yz.abs()).abs() < tol, "yz {d} {g}: {} vs {}", c[(1, 2)], a.c_yz);
            let q = QfiMax::from_matrix(c);
            assert!(rel(q.value, a.f_q_max) < 1e-10);
        }
    }

    #[test]
    fn n2_limits() {
        let a = qfi_n2_analytic(1.0, PI / 2.0, 0.0);
        assert!((a.c_xx - 4.0).abs() < 1e-14);
        assert!((qfi_n2_analytic(0.0, 0.3, 0.2).f_q_max - 2.0).abs() < 1e-14);
    }

    #[test]
    fn dephasing_never_increases_qfi() {
        for n in [2usize, 10] {
            let mut last = f64::INFINITY;
            for k in 0..12 {
                let g = 0.02 * k as f64;
                let s = evolve(&DickeState::css_plus_x(n).unwrap(), &EvolutionInputs::twisting(0.3, g, 1.0).unwrap()).unwrap();
                let f = qfi_max(&s).unwrap().value;
                assert!(f <= last + 1e-10, "N {n} γt {g}: {f} > {last}");
                last = f;
            }
        }
    }

    #[test]
    fn direction_tie_break() {
        let q = QfiMax::from_matrix(Matrix3::from_diagonal(&Vector3::new(1.0, 3.0, 3.0)));
        assert_eq!(q.direction, [0.0, 1.0, 0.0]);
        let q = QfiMax::from_matrix(Matrix3::from_diagonal(&Vector3::new(2.0, 1.0, 2.0)));
        assert_eq!(q.direction, [1.0, 0.0, 0.0]);
        let q = QfiMax::from_matrix(Matrix3::from_diagonal(&Vector3::new(0.0, 0.0, 5.0)));
        assert_eq!(q.direction, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn preconditions() {
        let s = DickeState::css_plus_x(3).unwrap();
        let half = DickeState::from_matrix(3, s.rho() * Complex64::new(0.5, 0.0)).unwrap();
        assert!(matches!(qfi_matrix(&half), Err(Error::Precondition(_))));
    }
}
