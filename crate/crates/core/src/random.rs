//! Seeded random states, channels and biseparable samples.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::states::{DensityMatrix, XState, MAX_DENSE_QUBITS};
use crate::{Error, Result};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn dirichlet<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let g: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = g.iter().sum();
    g.into_iter().map(|x| x / total).collect()
}

/// Hermitian matrix with i.i.d. Gaussian entries (GUE up to scale).
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
    (&g + &g.adjoint()).scale(0.5)
}

/// Normalized complex Gaussian vector: a Haar-random pure state.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}

/// `G G^H / Tr(G G^H)` with `G` a `dim x rank` Ginibre matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(n_qubits: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if n_qubits == 0 || n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::QubitCount { n_qubits, reason: "outside the dense range" });
    }
    let dim = 1usize << n_qubits;
    let rank = rank.clamp(1, dim);
    let cols: Vec<Vec<C64>> = (0..rank).map(|_| (0..dim).map(|_| gaussian(rng)).collect()).collect();
    let mut m = ComplexMatrix::zeros(dim);
    for col in &cols {
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += col[i] * col[j].conj();
            }
        }
    }
    let tr = m.trace().re;
    Ok(DensityMatrix::from_trusted(m.scale(1.0 / tr)))
}

/// Random unitary from Gram-Schmidt on Ginibre columns.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|c| c / norm).collect());
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// `count` Ginibre operators rescaled by `(sum K^H K)^(-1/2)`, so the set is
/// trace preserving.
pub fn random_kraus<R: Rng + ?Sized>(dim: usize, count: usize, rng: &mut R) -> Result<Vec<ComplexMatrix>> {
    let raw: Vec<ComplexMatrix> =
        (0..count.max(1)).map(|_| ComplexMatrix::from_fn(dim, |_, _| gaussian(rng))).collect();
    let mut s = ComplexMatrix::zeros(dim);
    for k in &raw {
        s = &s + &(&k.adjoint() * k);
    }
    let inv_sqrt = hermitian_eig(&s.hermitized())?.reconstruct_with(|l| 1.0 / l.sqrt());
    Ok(raw.iter().map(|k| k * &inv_sqrt).collect())
}

/// Random X-state: Dirichlet populations with the corner pair holding a
/// uniform share, coherences at a random fraction of their positivity limit
/// and capped at `|z_1|`, so the result is canonical.
pub fn random_xstate<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<XState> {
    let n = XState::pairs_for(n_qubits)?;
    let corner: f64 = rng.random();
    let split: f64 = rng.random_range(0.05..0.95);
    let a1 = corner * split;
    let b1 = corner * (1.0 - split);
    let rest = if n > 1 { dirichlet(n - 1, rng) } else { Vec::new() };
    let b: Vec<f64> = rest.iter().map(|w| 0.5 * (1.0 - corner) * w).collect();

    let phase = |rng: &mut R| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let z1 = phase(rng) * (a1 * b1).sqrt() * rng.random::<f64>();
    let mut z = vec![z1];
    for &bi in &b {
        // strictly below |z_1| so rounding in the phase cannot make pair i dominant
        let r = (bi * rng.random::<f64>()).min(z1.norm() * (1.0 - 1e-12));
        z.push(phase(rng) * r);
    }
    // normalization is exact up to roundoff; renormalize the corner to absorb it
    let total = a1 + b1 + 2.0 * b.iter().sum::<f64>();
    let fix = (1.0 - total) / 2.0;
    XState::new(n_qubits, a1 + fix, b1 + fix, b, z)
}

/// [`random_xstate`] conditioned on `|z_1| > w_1` (rejection sampling with a
/// heavier corner).
pub fn random_entangled_xstate<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<XState> {
    let n = XState::pairs_for(n_qubits)?;
    loop {
        let corner: f64 = rng.random_range(0.6..1.0);
        let split: f64 = rng.random_range(0.2..0.8);
        let a1 = corner * split;
        let b1 = corner * (1.0 - split);
        let rest = if n > 1 { dirichlet(n - 1, rng) } else { Vec::new() };
        let b: Vec<f64> = rest.iter().map(|w| 0.5 * (1.0 - corner) * w).collect();
        let phase = |rng: &mut R| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let z1 = phase(rng) * (a1 * b1).sqrt() * rng.random_range(0.3..1.0);
        let mut z = vec![z1];
        for &bi in &b {
            z.push(phase(rng) * (bi * rng.random::<f64>()).min(z1.norm() * (1.0 - 1e-12)));
        }
        let total = a1 + b1 + 2.0 * b.iter().sum::<f64>();
        let fix = (1.0 - total) / 2.0;
        let x = XState::new(n_qubits, a1 + fix, b1 + fix, b, z)?;
        if x.z1().norm() > x.w1() + 1e-6 {
            return Ok(x);
        }
    }
}

/// Qubits of `mask` in the basis-label bit order (qubit `j` <-> bit `N-1-j`).
fn scatter(bits: usize, positions: &[usize]) -> usize {
    positions.iter().enumerate().fold(0, |acc, (k, &pos)| acc | ((bits >> k) & 1) << pos)
}

/// `|psi_A> (x) |psi_B>` across the bipartition given by `mask` (bits of the
/// basis label belonging to part A), both factors Haar random.
pub fn random_product_state<R: Rng + ?Sized>(n_qubits: usize, mask: usize, rng: &mut R) -> Result<Vec<C64>> {
    let dim = 1usize << n_qubits;
    if mask == 0 || mask >= dim - 1 {
        return Err(Error::InvalidArgument(format!("mask {mask} is not a proper bipartition")));
    }
    let part_a: Vec<usize> = (0..n_qubits).filter(|b| mask >> b & 1 == 1).collect();
    let part_b: Vec<usize> = (0..n_qubits).filter(|b| mask >> b & 1 == 0).collect();
    let psi_a = haar_state(1 << part_a.len(), rng);
    let psi_b = haar_state(1 << part_b.len(), rng);
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    for (ia, &amp_a) in psi_a.iter().enumerate() {
        let ra = scatter(ia, &part_a);
        for (ib, &amp_b) in psi_b.iter().enumerate() {
            psi[ra | scatter(ib, &part_b)] = amp_a * amp_b;
        }
    }
    Ok(psi)
}

/// Dirichlet-weighted mixture of up to `max_terms` pure product states, each
/// across a uniformly chosen one of the `2^(N-1) - 1` bipartitions.
pub fn random_biseparable<R: Rng + ?Sized>(n_qubits: usize, max_terms: usize, rng: &mut R) -> Result<DensityMatrix> {
    if !(2..=MAX_DENSE_QUBITS).contains(&n_qubits) {
        return Err(Error::QubitCount { n_qubits, reason: "biseparable sampling needs 2..=10 qubits" });
    }
    let dim = 1usize << n_qubits;
    let terms = rng.random_range(1..=max_terms.max(1));
    let weights = dirichlet(terms, rng);
    let mut acc = ComplexMatrix::zeros(dim);
    for w in weights {
        // masks below 2^(N-1) never contain the top qubit: one per bipartition
        let mask = rng.random_range(1..dim / 2);
        let psi = random_product_state(n_qubits, mask, rng)?;
        acc = &acc + &ComplexMatrix::outer(&psi).scale(w);
    }
    Ok(DensityMatrix::from_trusted(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_xstates_are_valid_and_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            for _ in 0..50 {
                let x = random_xstate(n, &mut rng).unwrap();
                assert!(x.is_canonical());
                let e = random_entangled_xstate(n.max(2), &mut rng).unwrap();
                assert!(e.z1().norm() > e.w1());
            }
        }
    }

    #[test]
    fn product_states_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = random_product_state(3, 0b101, &mut rng).unwrap();
        let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(random_product_state(3, 0, &mut rng).is_err());
        assert!(random_product_state(3, 7, &mut rng).is_err());
    }

    #[test]
    fn kraus_sets_are_trace_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = random_kraus(4, 3, &mut rng).unwrap();
        assert!(crate::linalg::kraus_completeness_deviation(&k) < 1e-12);
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_unitary(8, &mut rng);
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(8)) < 1e-12);
    }
}
