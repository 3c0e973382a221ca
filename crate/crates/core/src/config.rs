//! Numerical tolerances shared by every module.
//!
//! A single [`Tolerances`] record is installed process-wide. The library uses
//! the defaults unless a caller installs another record with [`install`]; the
//! CLI builds one from the `ENTBOUND_TOL` environment variable.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Name of the environment variable read by [`Tolerances::from_env`].
pub const ENV_VAR: &str = "ENTBOUND_TOL";

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Hermiticity required of anything flagged as a state.
    pub hermitian: f64,
    /// Hermiticity accepted on input to the eigensolvers.
    pub hermitian_input: f64,
    /// Allowed |Tr(rho) - 1|, and the normalization slack of an X-state.
    pub trace: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm falls below this
    /// (scaled by the matrix norm when that exceeds one).
    pub jacobi_offdiag: f64,
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues in `[-psd_clamp, 0)` are roundoff and are set to zero.
    pub psd_clamp: f64,
    /// Eigenvalues below `-psd_error` make an operation fail with `NotPsd`.
    /// Values between the two thresholds are clamped with a warning.
    pub psd_error: f64,
    /// Largest modulus tolerated off the diagonal and anti-diagonal of an X-state.
    pub x_offdiag: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            hermitian_input: 1e-10,
            trace: 1e-12,
            jacobi_offdiag: 1e-12,
            jacobi_max_sweeps: 100,
            psd_clamp: 1e-10,
            psd_error: 1e-8,
            x_offdiag: 1e-10,
        }
    }
}

impl Tolerances {
    /// Parses overrides of the form `key=value[,key=value...]` on top of the
    /// defaults. Keys are the field names of this struct.
    pub fn parse_overrides(spec: &str) -> Result<Self> {
        let mut tol = Self::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("{ENV_VAR}: expected key=value, got {item:?}"))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = || Error::InvalidArgument(format!("{ENV_VAR}: bad value for {key}: {value:?}"));
            if key == "jacobi_max_sweeps" {
                tol.jacobi_max_sweeps = value.parse().map_err(|_| bad())?;
                continue;
            }
            let v: f64 = value.parse().map_err(|_| bad())?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(bad());
            }
            match key {
                "hermitian" => tol.hermitian = v,
                "hermitian_input" => tol.hermitian_input = v,
                "trace" => tol.trace = v,
                "jacobi_offdiag" => tol.jacobi_offdiag = v,
                "psd_clamp" => tol.psd_clamp = v,
                "psd_error" => tol.psd_error = v,
                "x_offdiag" => tol.x_offdiag = v,
                _ => {
                    return Err(Error::InvalidArgument(format!("{ENV_VAR}: unknown key {key:?}")))
                }
            }
        }
        Ok(tol)
    }

    /// Defaults with `ENTBOUND_TOL` overrides applied, if the variable is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(spec) => Self::parse_overrides(&spec),
            Err(_) => Ok(Self::default()),
        }
    }
}

static INSTALLED: OnceLock<Tolerances> = OnceLock::new();

/// Installs the process-wide tolerances. Returns `false` if a record was
/// already installed (or the defaults were already read).
pub fn install(tol: Tolerances) -> bool {
    INSTALLED.set(tol).is_ok()
}

/// The active tolerance record.
pub fn tolerances() -> &'static Tolerances {
    INSTALLED.get_or_init(Tolerances::default)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply_on_top_of_defaults() {
        let tol = Tolerances::parse_overrides("psd_clamp=1e-9, jacobi_max_sweeps=20").unwrap();
        assert_eq!(tol.psd_clamp, 1e-9);
        assert_eq!(tol.jacobi_max_sweeps, 20);
        assert_eq!(tol.trace, 1e-12);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(Tolerances::parse_overrides("nope=1").is_err());
        assert!(Tolerances::parse_overrides("trace=abc").is_err());
        assert!(Tolerances::parse_overrides("trace=-1").is_err());
        assert!(Tolerances::parse_overrides("trace").is_err());
        assert_eq!(Tolerances::parse_overrides("").unwrap(), Tolerances::default());
    }
}
