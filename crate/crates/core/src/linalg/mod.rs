//! Dense complex linear algebra: eigendecomposition, trace distance, PSD square
//! root and Uhlmann fidelity.

mod eig;
mod matrix;

pub use eig::{hermitian_eig, hermitian_eigvals, householder_ql, jacobi, HermitianEigen, JACOBI_MAX_DIM};
pub use matrix::ComplexMatrix;

use crate::config::tolerances;
use crate::{Error, Result};

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

/// Clamps roundoff-sized negative eigenvalues to zero; fails below `-psd_error`.
pub(crate) fn clamp_psd(values: &mut [f64]) -> Result<()> {
    let tol = tolerances();
    for v in values.iter_mut() {
        if *v < 0.0 {
            if *v < -tol.psd_error {
                return Err(Error::NotPsd { eigenvalue: *v });
            }
            if *v < -tol.psd_clamp {
                log::warn!("clamping eigenvalue {:.3e} to zero", *v);
            }
            *v = 0.0;
        }
    }
    Ok(())
}

/// Zeroes eigenvalues indistinguishable from zero at double precision. Their
/// square roots would otherwise add `sqrt(eps)`-sized noise to rank-deficient
/// inputs such as pure states.
fn drop_roundoff(values: &mut [f64]) {
    let largest = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 8.0 * f64::EPSILON * values.len() as f64 * largest;
    for v in values.iter_mut() {
        if *v < floor {
            *v = 0.0;
        }
    }
}

/// `||A||_1 = sum |lambda_k|` for Hermitian `A`.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigvals(a)?.iter().map(|l| l.abs()).sum())
}

/// `D(rho, tau) = Tr|rho - tau| / 2`.
pub fn trace_distance(rho: &ComplexMatrix, tau: &ComplexMatrix) -> Result<f64> {
    check_same_dim(rho, tau)?;
    Ok(0.5 * trace_norm(&(rho - tau))?)
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut eig = hermitian_eig(m)?;
    clamp_psd(&mut eig.values)?;
    drop_roundoff(&mut eig.values);
    Ok(eig.reconstruct_with(f64::sqrt).hermitized())
}

/// Uhlmann fidelity `F = Tr sqrt(sqrt(rho) sigma sqrt(rho))`, so that
/// `F^2 = <psi|rho|psi>` when `sigma = |psi><psi|`.
pub fn fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let root = psd_sqrt(rho)?;
    let inner = (&(&root * sigma) * &root).hermitized();
    let mut values = hermitian_eigvals(&inner)?;
    clamp_psd(&mut values)?;
    drop_roundoff(&mut values);
    let f: f64 = values.iter().map(|l| l.sqrt()).sum();
    Ok(f.min(1.0))
}

/// `sum_k K_k rho K_k^H`.
pub fn apply_kraus(rho: &ComplexMatrix, kraus: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(rho.dim());
    for k in kraus {
        check_same_dim(rho, k)?;
        let term = &(k * rho) * &k.adjoint();
        out = &out + &term;
    }
    Ok(out)
}

/// `max |sum_k K_k^H K_k - I|`; zero for a trace-preserving Kraus set.
pub fn kraus_completeness_deviation(kraus: &[ComplexMatrix]) -> f64 {
    let Some(first) = kraus.first() else {
        return f64::INFINITY;
    };
    let mut acc = ComplexMatrix::zeros(first.dim());
    for k in kraus {
        acc = &acc + &(&k.adjoint() * k);
    }
    acc.max_abs_diff(&ComplexMatrix::identity(first.dim()))
}
