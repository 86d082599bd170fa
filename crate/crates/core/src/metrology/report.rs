use super::fidelity::cat_fidelity;
use super::qfi::{qfi_max, QfiMax};
use super::squeezing::squeezing_parameter;
use crate::error::{Error, Result};
use crate::output::fmt12;
use crate::spin::DickeState;

/// Which figures of merit to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Observables {
    pub xi2: bool,
    pub qfi: bool,
    pub fidelity: bool,
}

impl Observables {
    pub fn all() -> Self {
        Self { xi2: true, qfi: true, fidelity: true }
    }

    pub fn any(&self) -> bool {
        self.xi2 || self.qfi || self.fidelity
    }
}

/// Figures of merit of one evolved state. Quantities that were not
/// requested, or are undefined (no mean spin), are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetrologyReport {
    pub t: f64,
    pub xi_squared: Option<f64>,
    pub phi_opt: Option<f64>,
    pub qfi: Option<QfiMax>,
    pub cat_fidelity: Option<f64>,
    /// `tr ρ` before normalization.
    pub survival_trace: f64,
}

impl MetrologyReport {
    pub const CSV_HEADER: &'static str = "t,xi2,phi_opt,fq_max,nx,ny,nz,fidelity,trace";

    /// Evaluate on the (possibly trace-decayed) evolved state; all
    /// observables use its normalized version.
    pub fn evaluate(t: f64, state: &DickeState, what: Observables) -> Result<Self> {
        let rho = state.normalize()?;
        let (xi_squared, phi_opt) = if what.xi2 {
            match squeezing_parameter(&rho) {
                Ok(s) => (Some(s.xi_squared), Some(s.phi_opt)),
                Err(Error::UndefinedDirection(_)) => (None, None),
                Err(e) => return Err(e),
            }
        } else {
            (None, None)
        };
        let qfi = if what.qfi { Some(qfi_max(&rho)?) } else { None };
        let cat_fidelity = if what.fidelity { Some(cat_fidelity(&rho)?) } else { None };
        Ok(Self { t, xi_squared, phi_opt, qfi, cat_fidelity, survival_trace: state.trace() })
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| fmt12(v.unwrap_or(f64::NAN));
        let (fq, dir) = match &self.qfi {
            Some(q) => (Some(q.value), q.direction.map(Some)),
            None => (None, [None; 3]),
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            fmt12(self.t),
            opt(self.xi_squared),
            opt(self.phi_opt),
            opt(fq),
            opt(dir[0]),
            opt(dir[1]),
            opt(dir[2]),
            opt(self.cat_fidelity),
            fmt12(self.survival_trace)
        )
    }
}
