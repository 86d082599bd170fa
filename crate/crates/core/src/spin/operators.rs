use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinComponent {
    Jx,
    Jy,
    Jz,
    Jplus,
    Jminus,
}

/// `m` for basis index `i` with `N` atoms.
#[inline]
pub fn magnetic_number(i: usize, n_atoms: usize) -> f64 {
    i as f64 - 0.5 * n_atoms as f64
}

/// Matrix of a collective spin operator in the `(N+1)`-dimensional Dicke
/// basis.
pub fn collective_operator(n_atoms: usize, which: SpinComponent) -> Result<CMatrix> {
    if n_atoms == 0 {
        return Err(Error::Domain("collective operators need N >= 1".into()));
    }
    let dim = n_atoms + 1;
    let j = 0.5 * n_atoms as f64;
    let raise = |i: usize| {
        let m = magnetic_number(i, n_atoms);
        (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
    };
    let mut out = CMatrix::zeros(dim, dim);
    match which {
        SpinComponent::Jz => {
            for i in 0..dim {
                out[(i, i)] = Complex64::new(magnetic_number(i, n_atoms), 0.0);
            }
        }
        SpinComponent::Jplus => {
            for i in 0..dim - 1 {
                out[(i + 1, i)] = Complex64::new(raise(i), 0.0);
            }
        }
        SpinComponent::Jminus => {
            for i in 0..dim - 1 {
                out[(i, i + 1)] = Complex64::new(raise(i), 0.0);
            }
        }
        SpinComponent::Jx => {
            for i in 0..dim - 1 {
                let v = Complex64::new(0.5 * raise(i), 0.0);
                out[(i + 1, i)] = v;
                out[(i, i + 1)] = v;
            }
        }
        SpinComponent::Jy => {
            // (J₊ − J₋)/2i
            for i in 0..dim - 1 {
                let v = 0.5 * raise(i);
                out[(i + 1, i)] = Complex64::new(0.0, -v);
                out[(i, i + 1)] = Complex64::new(0.0, v);
            }
        }
    }
    Ok(out)
}
