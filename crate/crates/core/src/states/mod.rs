//! State representations and builders.

mod noise;
mod xstate;

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C64;

pub use noise::{apply_noise, dephasing_kraus, Channel};
pub use xstate::{dense_to_xstate, xstate_to_dense, XState, MAX_XSTATE_QUBITS};

use crate::config::tolerances;
use crate::linalg::{hermitian_eigvals, ComplexMatrix};
use crate::{Error, Result};

/// Largest qubit count for the dense 2^N x 2^N representation.
pub const MAX_DENSE_QUBITS: usize = 10;

pub(crate) fn qubits_for_dim(dim: usize) -> Option<usize> {
    (dim >= 2 && dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

pub(crate) fn check_dense_qubits(n_qubits: usize, min: usize) -> Result<()> {
    if n_qubits < min {
        return Err(Error::QubitCount { n_qubits, reason: "too few qubits" });
    }
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::QubitCount { n_qubits, reason: "beyond the dense range (at most 10)" });
    }
    Ok(())
}

/// A validated N-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n_qubits = qubits_for_dim(matrix.dim()).ok_or_else(|| {
            Error::InvalidState(format!("dimension {} is not a power of two >= 2", matrix.dim()))
        })?;
        let tol = tolerances();
        let deviation = matrix.hermitian_deviation();
        if deviation > tol.hermitian {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > tol.trace {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let values = hermitian_eigvals(&matrix)?;
        if let Some(&min) = values.last() {
            if min < -tol.psd_clamp {
                return Err(Error::NotPsd { eigenvalue: min });
            }
        }
        Ok(Self { n_qubits, matrix: matrix.hermitized() })
    }

    /// For builders whose output is valid by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let n_qubits = qubits_for_dim(matrix.dim()).expect("power-of-two dimension");
        Self { n_qubits, matrix: matrix.hermitized() }
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > tolerances().trace {
            return Err(Error::InvalidState(format!("state vector has squared norm {norm}")));
        }
        if qubits_for_dim(psi.len()).is_none() {
            return Err(Error::InvalidState(format!("length {} is not a power of two >= 2", psi.len())));
        }
        Ok(Self::from_trusted(ComplexMatrix::outer(psi)))
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_dense_qubits(n_qubits, 1)?;
        let dim = 1usize << n_qubits;
        Ok(Self::from_trusted(ComplexMatrix::identity(dim).scale(1.0 / dim as f64)))
    }

    /// Convex combination `sum_k w_k rho_k`.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidArgument("empty mixture".into()));
        };
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > tolerances().trace {
            return Err(Error::InvalidArgument("mixture weights must be a probability vector".into()));
        }
        let mut acc = ComplexMatrix::zeros(first.dim());
        for (w, rho) in parts {
            if rho.dim() != first.dim() {
                return Err(Error::DimensionMismatch { left: first.dim(), right: rho.dim() });
            }
            acc = &acc + &rho.matrix.scale(*w);
        }
        Ok(Self::from_trusted(acc))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigvals(&self.matrix)?.last().copied().unwrap_or(0.0))
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Weighting angle of `cos(theta)|0...0> + sin(theta)|1...1>`, in `[0, pi/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhzWeight(f64);

impl GhzWeight {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidArgument(format!("GHZ angle {theta} outside [0, pi/2]")));
        }
        Ok(Self(theta))
    }

    /// `theta = pi/4`, the standard GHZ state.
    pub fn balanced() -> Self {
        Self(FRAC_PI_4)
    }

    pub fn theta(self) -> f64 {
        self.0
    }
}

impl Default for GhzWeight {
    fn default() -> Self {
        Self::balanced()
    }
}

/// State vector `cos(theta)|0...0> + sin(theta)|1...1>`.
pub fn ghz_vector(n_qubits: usize, weight: GhzWeight) -> Result<Vec<C64>> {
    check_dense_qubits(n_qubits, 2)?;
    let dim = 1usize << n_qubits;
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    psi[0] = C64::new(weight.theta().cos(), 0.0);
    psi[dim - 1] = C64::new(weight.theta().sin(), 0.0);
    Ok(psi)
}

/// Dense projector onto the weighted GHZ state.
pub fn ghz_state(n_qubits: usize, weight: GhzWeight) -> Result<DensityMatrix> {
    let psi = ghz_vector(n_qubits, weight)?;
    Ok(DensityMatrix::from_trusted(ComplexMatrix::outer(&psi)))
}

/// The weighted GHZ state in compact X-state form (any N up to
/// [`MAX_XSTATE_QUBITS`]).
pub fn ghz_xstate(n_qubits: usize, weight: GhzWeight) -> Result<XState> {
    if n_qubits < 2 {
        return Err(Error::QubitCount { n_qubits, reason: "GHZ states need at least 2 qubits" });
    }
    let (c, s) = (weight.theta().cos(), weight.theta().sin());
    let n = XState::pairs_for(n_qubits)?;
    let mut z = vec![C64::new(0.0, 0.0); n];
    z[0] = C64::new(c * s, 0.0);
    XState::new(n_qubits, c * c, s * s, vec![0.0; n - 1], z)
}

/// Mixture of the GHZ basis `(|k> +/- |~k>)/sqrt(2)`, `k < 2^(N-1)`, `~k` the
/// bitwise complement. `weights[2k]` is the `+` state of pair `k`,
/// `weights[2k + 1]` the `-` state. The result is canonicalized, so a mixture
/// dominated by a pair other than `k = 0` comes back relabeled by local bit
/// flips (see [`XState::relabel_mask`]).
pub fn ghz_diagonal(n_qubits: usize, weights: &[f64]) -> Result<XState> {
    if !(1..=MAX_XSTATE_QUBITS).contains(&n_qubits) {
        return Err(Error::QubitCount { n_qubits, reason: "outside 1..=30" });
    }
    let dim = 1usize << n_qubits;
    if weights.len() != dim {
        return Err(Error::InvalidArgument(format!(
            "expected {dim} GHZ-basis weights, got {}",
            weights.len()
        )));
    }
    if let Some(bad) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::InvalidArgument(format!("GHZ-basis weight {bad} is not a probability")));
    }
    let total = xstate::compensated_sum(weights.iter().copied());
    if (total - 1.0).abs() > tolerances().trace {
        return Err(Error::InvalidArgument(format!("GHZ-basis weights sum to {total}, expected 1")));
    }
    let n = dim / 2;
    let mut pops = Vec::with_capacity(n);
    let mut z = Vec::with_capacity(n);
    for k in 0..n {
        let (plus, minus) = (weights[2 * k], weights[2 * k + 1]);
        pops.push(0.5 * (plus + minus));
        z.push(C64::new(0.5 * (plus - minus), 0.0));
    }
    let a1 = pops[0];
    XState::new(n_qubits, a1, a1, pops[1..].to_vec(), z)?.canonicalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_state_projector() {
        let rho = ghz_state(2, GhzWeight::balanced()).unwrap();
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((rho.matrix()[(i, j)].re - 0.5).abs() < 1e-15);
        }
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        assert_eq!(rho.matrix()[(1, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn zero_angle_is_the_all_zero_product_state() {
        let rho = ghz_state(3, GhzWeight::new(0.0).unwrap()).unwrap();
        let mut expected = ComplexMatrix::zeros(8);
        expected[(0, 0)] = C64::new(1.0, 0.0);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn dense_range_is_enforced() {
        assert!(ghz_state(1, GhzWeight::balanced()).is_err());
        assert!(ghz_state(11, GhzWeight::balanced()).is_err());
        assert!(GhzWeight::new(2.0).is_err());
        assert!(GhzWeight::new(-0.1).is_err());
    }

    #[test]
    fn ghz_xstate_reads_off_corner() {
        let x = ghz_xstate(3, GhzWeight::balanced()).unwrap();
        assert!((x.a1() - 0.5).abs() < 1e-15);
        assert!((x.b1() - 0.5).abs() < 1e-15);
        assert!((x.z1().re - 0.5).abs() < 1e-15);
        assert!(x.b().iter().all(|&b| b == 0.0));
        assert!(x.z()[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn equal_ghz_weights_give_maximally_mixed() {
        let n = 3;
        let x = ghz_diagonal(n, &vec![1.0 / 8.0; 8]).unwrap();
        assert!(x.z().iter().all(|z| z.norm() == 0.0));
        assert_eq!(x.a1(), 0.125);
        assert!(x.b().iter().all(|&b| b == 0.125));
    }

    #[test]
    fn ghz_plus_minus_mixture() {
        let mut w = vec![0.0; 8];
        w[0] = 0.75;
        w[1] = 0.25;
        let x = ghz_diagonal(3, &w).unwrap();
        assert_eq!((x.a1(), x.b1()), (0.5, 0.5));
        assert_eq!(x.z1(), C64::new(0.25, 0.0));
        assert!(x.b().iter().all(|&b| b == 0.0));
    }

    #[test]
    fn invalid_probability_vectors_are_rejected() {
        assert!(ghz_diagonal(2, &[0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(ghz_diagonal(2, &[0.5, 0.5, 0.5]).is_err());
        assert!(ghz_diagonal(2, &[0.5, 0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn non_hermitian_or_unnormalized_matrices_are_not_states() {
        let mut m = ComplexMatrix::diagonal(&[0.5, 0.5]);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian { .. })));
        assert!(DensityMatrix::new(ComplexMatrix::diagonal(&[0.5, 0.6])).is_err());
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::diagonal(&[1.5, -0.5])),
            Err(Error::NotPsd { .. })
        ));
        assert!(DensityMatrix::new(ComplexMatrix::diagonal(&[0.5, 0.25, 0.25])).is_err());
    }
}
