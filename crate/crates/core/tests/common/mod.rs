#![allow(dead_code)]

use entbound::linalg::ComplexMatrix;
use entbound::C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of eigenvalues of the Hermitian `a` below `sigma`, from the signs of
/// the LDL^H pivots of `a - sigma I` (Sylvester's law of inertia).
pub fn count_below(a: &ComplexMatrix, sigma: f64) -> usize {
    let n = a.dim();
    let mut m: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)] - if i == j { C64::new(sigma, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();
    let mut negatives = 0;
    for k in 0..n {
        let mut pivot = m[k][k].re;
        if pivot == 0.0 {
            pivot = -1e-300;
        }
        if pivot < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let factor = m[i][k] / pivot;
            for j in k + 1..n {
                let mkj = m[k][j];
                m[i][j] -= factor * mkj;
            }
        }
    }
    negatives
}

/// Eigenvalues in descending order by bisection on [`count_below`].
pub fn eigenvalues_by_bisection(a: &ComplexMatrix, tol: f64) -> Vec<f64> {
    let n = a.dim();
    let radius = a.frobenius_norm() + 1.0;
    let mut out: Vec<f64> = (0..n)
        .map(|k| {
            // k-th smallest eigenvalue: smallest x with count_below(x) > k
            let (mut lo, mut hi) = (-radius, radius);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if count_below(a, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    out.reverse();
    out
}

/// `|<phi|psi>|^2` for vectors.
pub fn overlap_sq(phi: &[C64], psi: &[C64]) -> f64 {
    phi.iter().zip(psi).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr()
}

/// `<psi| m |psi>`.
pub fn expectation(m: &ComplexMatrix, psi: &[C64]) -> C64 {
    m.sandwich(psi, psi)
}

/// Absolute closeness with a message.
#[track_caller]
pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: got {actual}, expected {expected} (tolerance {tol}, off by {:e})",
        (actual - expected).abs()
    );
}
