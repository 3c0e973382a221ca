//! Hermitian eigensolvers.
//!
//! Two independent routes:
//!
//! - [`jacobi`]: cyclic complex Jacobi. Each rotation solves a 2x2 Hermitian
//!   sub-problem exactly; unconditionally stable, quadratically convergent,
//!   but O(n^3) per sweep with a large constant.
//! - [`householder_ql`]: unitary reduction to a real symmetric tridiagonal
//!   matrix followed by implicit QL with Wilkinson shifts.
//!
//! [`hermitian_eig`] uses Jacobi up to [`JACOBI_MAX_DIM`] and the tridiagonal
//! route above it; at dimension 1024 Jacobi needs minutes per decomposition.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::ComplexMatrix;
use crate::config::tolerances;
use crate::{Error, Result};

/// Largest dimension handled by the Jacobi route in [`hermitian_eig`].
pub const JACOBI_MAX_DIM: usize = 32;

/// Implicit-QL iteration cap per eigenvalue.
const QL_MAX_ITER: usize = 64;

const PAR_MIN: usize = 128;

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V f(Λ) V^H`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let vh = v.adjoint();
        // (V diag(f)) V^H
        let mut scaled = v.clone();
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= fv[j];
            }
        }
        &scaled * &vh
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let deviation = m.hermitian_deviation();
    if deviation > tolerances().hermitian_input {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix (Hermitian within the input
/// tolerance; the anti-Hermitian residue is discarded).
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if m.dim() <= JACOBI_MAX_DIM {
        jacobi(m)
    } else {
        householder_ql(m)
    }
}

/// Eigenvalues only, descending. Skips all eigenvector accumulation.
pub fn hermitian_eigvals(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.dim() <= JACOBI_MAX_DIM {
        return Ok(jacobi(m)?.values);
    }
    check_hermitian(m)?;
    let mut work = m.hermitized();
    let (mut d, mut e) = tridiagonalize(&mut work, None);
    tql_implicit(&mut d, &mut e, None)?;
    d.sort_by(|a, b| b.total_cmp(a));
    Ok(d)
}

fn offdiag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn sorted_descending(values: Vec<f64>, vectors: ComplexMatrix) -> HermitianEigen {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors = ComplexMatrix::from_fn(n, |i, j| vectors[(i, order[j])]);
    HermitianEigen { values: sorted_values, vectors: sorted_vectors }
}

/// Cyclic Jacobi eigendecomposition.
pub fn jacobi(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let tol = tolerances();
    let n = m.dim();
    let mut a = m.hermitized();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol.jacobi_offdiag * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = offdiag_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps >= tol.jacobi_max_sweeps {
            return Err(Error::NoConvergence { iterations: sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(sorted_descending(values, v))
}

/// Annihilates `a[p][q]` with the unitary `G = diag(1, e^{-i phi}) R(theta)`
/// acting on coordinates p and q: `a <- G^H a G`, `v <- v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let n = a.dim();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / g; // e^{i phi}

    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let gpp = C64::new(c, 0.0);
    let gpq = C64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(app - t * g, 0.0);
    a[(q, q)] = C64::new(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Householder tridiagonalization followed by implicit QL.
pub fn householder_ql(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let n = m.dim();
    if n == 0 {
        return Ok(HermitianEigen { values: Vec::new(), vectors: ComplexMatrix::zeros(0) });
    }
    let mut work = m.hermitized();
    let mut q = ComplexMatrix::identity(n);
    let (mut d, mut e) = tridiagonalize(&mut work, Some(&mut q));

    // Real tridiagonal eigenvectors, stored transposed: zt row j = column j of Z.
    let mut zt = vec![0.0f64; n * n];
    for i in 0..n {
        zt[i * n + i] = 1.0;
    }
    tql_implicit(&mut d, &mut e, Some(&mut zt))?;

    // V = Q' Z, where Q' already carries the phase normalization.
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    let qs = q.as_slice();
    let kernel = |(r, out): (usize, &mut [C64])| {
        let qrow = &qs[r * n..(r + 1) * n];
        for (c, o) in out.iter_mut().enumerate() {
            let zcol = &zt[c * n..(c + 1) * n];
            let mut acc = C64::new(0.0, 0.0);
            for (qv, &zv) in qrow.iter().zip(zcol) {
                acc += qv * zv;
            }
            *o = acc;
        }
    };
    if n >= PAR_MIN {
        v.par_chunks_mut(n).enumerate().for_each(kernel);
    } else {
        v.chunks_mut(n).enumerate().for_each(kernel);
    }
    let vectors = ComplexMatrix::from_vec(n, v)?;
    Ok(sorted_descending(d, vectors))
}

/// Reduces the Hermitian `a` (destroyed) to real symmetric tridiagonal form
/// `T = Q^H a Q`. Returns the diagonal and the sub-diagonal (`e[i]` couples
/// `i` and `i + 1`, `e[n-1] = 0`). When `q` is given it receives `Q`, with the
/// diagonal phase that makes the sub-diagonal real folded in.
fn tridiagonalize(a: &mut ComplexMatrix, mut q: Option<&mut ComplexMatrix>) -> (Vec<f64>, Vec<f64>) {
    let n = a.dim();
    let mut sub = vec![C64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|c| c.norm_sqr()).sum();
        if tail == 0.0 {
            sub[k] = x[0];
            continue;
        }
        let alpha = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let mut v = x;
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;
        sub[k] = -phase * alpha;

        // p = tau * A22 v
        let off = k + 1;
        let a_ref: &ComplexMatrix = a;
        let row_dot = |i: usize| -> C64 {
            let row = &a_ref.row(off + i)[off..];
            let mut acc = C64::new(0.0, 0.0);
            for (x, y) in row.iter().zip(&v) {
                acc += x * y;
            }
            acc * tau
        };
        let p: Vec<C64> = if m >= PAR_MIN {
            (0..m).into_par_iter().map(row_dot).collect()
        } else {
            (0..m).map(row_dot).collect()
        };
        // w = p - (tau/2)(v^H p) v ; A22 <- A22 - v w^H - w v^H
        let vhp: C64 = v.iter().zip(&p).map(|(a, b)| a.conj() * b).sum();
        let kfac = 0.5 * tau * vhp.re;
        let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kfac).collect();
        let update = |(i, row): (usize, &mut [C64])| {
            let (vi, wi) = (v[i], w[i]);
            for ((x, vj), wj) in row[off..].iter_mut().zip(&v).zip(&w) {
                *x -= vi * wj.conj() + wi * vj.conj();
            }
        };
        {
            let data = &mut a.as_mut_slice()[off * n..];
            if m >= PAR_MIN {
                data.par_chunks_mut(n).enumerate().for_each(update);
            } else {
                data.chunks_mut(n).enumerate().for_each(update);
            }
        }

        if let Some(q) = q.as_deref_mut() {
            // Q <- Q H = Q - tau (Q v) v^H on columns off..n
            let apply = |row: &mut [C64]| {
                let mut t = C64::new(0.0, 0.0);
                for (x, vj) in row[off..].iter().zip(&v) {
                    t += x * vj;
                }
                t *= tau;
                for (x, vj) in row[off..].iter_mut().zip(&v) {
                    *x -= t * vj.conj();
                }
            };
            if n >= PAR_MIN {
                q.as_mut_slice().par_chunks_mut(n).for_each(apply);
            } else {
                q.as_mut_slice().chunks_mut(n).for_each(apply);
            }
        }
    }
    if n >= 2 {
        sub[n - 2] = a[(n - 1, n - 2)];
    }

    let d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    // Diagonal unitary D with D_{k+1} = D_k e_k / |e_k| makes the sub-diagonal real.
    let mut e = vec![0.0; n];
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let mag = sub[k].norm();
        e[k] = mag;
        phases[k + 1] = if mag == 0.0 { phases[k] } else { phases[k] * sub[k] / mag };
    }
    if let Some(q) = q {
        for row in q.as_mut_slice().chunks_mut(n) {
            for (x, ph) in row.iter_mut().zip(&phases) {
                *x *= ph;
            }
        }
    }
    (d, e)
}

/// Implicit QL with shifts on a real symmetric tridiagonal matrix. `zt`, when
/// given, holds the transposed eigenvector matrix and is rotated in place.
fn tql_implicit(d: &mut [f64], e: &mut [f64], mut zt: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::NoConvergence { iterations: iter, residual: e[l].abs() });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = zt.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *b;
                        *b = s * *a + c * f;
                        *a = c * *a - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
