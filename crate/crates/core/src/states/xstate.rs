//! Compact X-states.
//!
//! An N-qubit X-state has nonzero entries only on the diagonal and the
//! anti-diagonal. With `n = 2^(N-1)` the basis splits into `n` anti-diagonal
//! pairs: pair `i` (1-based) couples rows `i` and `2n + 1 - i`, i.e. the basis
//! states `|i-1>` and its bitwise complement. Pair 1 carries the populations
//! `a1`, `b1` of `|0...0>` and `|1...1>`; every other pair carries the same
//! population `b_i` on both ends. `z_i` sits at row `i`, column `2n + 1 - i`.
//!
//! Storage is O(2^N); `w1 = sum_{i>=2} b_i` and the dominant pair are cached at
//! construction so the closed-form measure is O(1).

use num_complex::Complex64 as C64;

use super::{check_dense_qubits, Channel, DensityMatrix};
use crate::config::tolerances;
use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

/// Largest qubit count accepted by [`XState`] (2^29 pairs).
pub const MAX_XSTATE_QUBITS: usize = 30;

/// Neumaier-compensated summation.
pub(crate) fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Clone, Debug, PartialEq)]
pub struct XState {
    n_qubits: usize,
    a1: f64,
    b1: f64,
    /// b_2..b_n
    b: Vec<f64>,
    /// z_1..z_n
    z: Vec<C64>,
    w1: f64,
    /// 0-based index of the first pair with maximal |z|.
    dominant: usize,
    relabel_mask: u64,
}

impl XState {
    /// Number of anti-diagonal pairs, `2^(N-1)`.
    pub fn pairs_for(n_qubits: usize) -> Result<usize> {
        if !(1..=MAX_XSTATE_QUBITS).contains(&n_qubits) {
            return Err(Error::QubitCount { n_qubits, reason: "outside 1..=30" });
        }
        Ok(1usize << (n_qubits - 1))
    }

    /// Validates lengths, non-negativity, normalization
    /// `a1 + b1 + 2 sum_{i>=2} b_i = 1` and positivity (`|z_i| <= b_i`,
    /// `|z_1|^2 <= a1 b1`).
    pub fn new(n_qubits: usize, a1: f64, b1: f64, b: Vec<f64>, z: Vec<C64>) -> Result<Self> {
        let n = Self::pairs_for(n_qubits)?;
        if b.len() != n - 1 {
            return Err(Error::InvalidState(format!("expected {} pair populations, got {}", n - 1, b.len())));
        }
        if z.len() != n {
            return Err(Error::InvalidState(format!("expected {n} coherences, got {}", z.len())));
        }
        let tol = tolerances().trace;
        let bad_pop = |v: f64| !(v.is_finite() && v >= -tol);
        if bad_pop(a1) || bad_pop(b1) {
            return Err(Error::InvalidState(format!("populations a1 = {a1}, b1 = {b1} must be >= 0")));
        }
        if let Some((i, v)) = b.iter().enumerate().find(|(_, v)| bad_pop(**v)) {
            return Err(Error::InvalidState(format!("population b_{} = {v} must be >= 0", i + 2)));
        }
        if let Some(i) = z.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidState(format!("coherence z_{} is not finite", i + 1)));
        }

        let w1 = compensated_sum(b.iter().copied());
        let total = a1 + b1 + 2.0 * w1;
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("a1 + b1 + 2 sum b_i = {total}, expected 1")));
        }
        for (i, (zi, bi)) in z[1..].iter().zip(&b).enumerate() {
            if zi.norm() > bi + tol {
                return Err(Error::InvalidState(format!(
                    "|z_{}| = {} exceeds b_{} = {bi}",
                    i + 2,
                    zi.norm(),
                    i + 2
                )));
            }
        }
        let z1_sq = z[0].norm_sqr();
        if z1_sq > a1 * b1 + tol {
            return Err(Error::InvalidState(format!(
                "|z_1|^2 = {z1_sq} exceeds a1 b1 = {}",
                a1 * b1
            )));
        }
        if z1_sq > 0.0 && (a1 * b1 - z1_sq).abs() <= tol {
            log::debug!("X-state sits on the positivity boundary |z_1|^2 = a1 b1 (rank-deficient corner block)");
        }

        let mut dominant = 0;
        let mut best = z[0].norm();
        for (i, zi) in z.iter().enumerate().skip(1) {
            if zi.norm() > best {
                best = zi.norm();
                dominant = i;
            }
        }
        Ok(Self { n_qubits, a1, b1, b, z, w1, dominant, relabel_mask: 0 })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `n = 2^(N-1)`.
    pub fn n_pairs(&self) -> usize {
        self.z.len()
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    /// Populations `b_2..b_n`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Coherences `z_1..z_n`.
    pub fn z(&self) -> &[C64] {
        &self.z
    }

    pub fn z1(&self) -> C64 {
        self.z[0]
    }

    /// `w1 = sum_{i>=2} b_i`.
    pub fn w1(&self) -> f64 {
        self.w1
    }

    /// 1-based index of the first pair with the largest `|z_i|`.
    pub fn dominant_pair(&self) -> usize {
        self.dominant + 1
    }

    /// `|z_1| >= |z_i|` for every pair.
    pub fn is_canonical(&self) -> bool {
        self.dominant == 0
    }

    /// Bit-flip mask (qubit `j` <-> bit `N-1-j`) relating this state to the
    /// one it was canonicalized from; zero if it was never relabeled.
    pub fn relabel_mask(&self) -> u64 {
        self.relabel_mask
    }

    /// Applies `X^mask` (bit flips on the qubits set in `mask`) by conjugation.
    /// On X-states this permutes pairs `k -> k ^ mask`. `mask` must not touch
    /// the first qubit, so that orientation within each pair is kept, and a
    /// nonzero mask needs `a1 = b1`, since pair 1 then moves to a slot that
    /// holds one population.
    pub fn relabel(&self, mask: u64) -> Result<Self> {
        let n = self.n_pairs();
        if mask as usize >= n {
            return Err(Error::InvalidArgument(format!("relabel mask {mask} must be below {n}")));
        }
        if mask == 0 {
            return Ok(self.clone());
        }
        let m = mask as usize;
        if (self.a1 - self.b1).abs() > tolerances().trace {
            return Err(Error::NotCanonicalizable { dominant: m + 1, a1: self.a1, b1: self.b1 });
        }
        let pop = |k: usize| if k == 0 { 0.5 * (self.a1 + self.b1) } else { self.b[k - 1] };
        let a1 = pop(m);
        let mut b = vec![0.0; n - 1];
        let mut z = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let target = k ^ m;
            z[target] = self.z[k];
            if target != 0 {
                b[target - 1] = pop(k);
            }
        }
        let mut out = Self::new(self.n_qubits, a1, a1, b, z)?;
        out.relabel_mask = self.relabel_mask ^ mask;
        Ok(out)
    }

    /// Moves the dominant coherence into pair 1 with a local bit-flip
    /// relabeling. Fails when that would separate unequal `a1`, `b1`.
    pub fn canonicalize(&self) -> Result<Self> {
        if self.is_canonical() {
            return Ok(self.clone());
        }
        self.relabel(self.dominant as u64)
    }

    /// Copy with `z_1` replaced.
    pub fn with_z1(&self, z1: C64) -> Result<Self> {
        let mut z = self.z.clone();
        z[0] = z1;
        let mut out = Self::new(self.n_qubits, self.a1, self.b1, self.b.clone(), z)?;
        out.relabel_mask = self.relabel_mask;
        Ok(out)
    }

    /// Same noise channels as [`super::apply_noise`], on the compact form.
    pub fn apply_noise(&self, channel: Channel) -> Result<Self> {
        channel.validate()?;
        let (pop_map, coherence): (Box<dyn Fn(f64) -> f64>, f64) = match channel {
            Channel::Depolarizing(p) => {
                let floor = p / (1u64 << self.n_qubits) as f64;
                (Box::new(move |v| (1.0 - p) * v + floor), 1.0 - p)
            }
            Channel::Dephasing(p) => (Box::new(|v| v), (1.0 - p).powi(self.n_qubits as i32)),
        };
        let b = self.b.iter().map(|&v| pop_map(v)).collect();
        let z = self.z.iter().map(|&v| v * coherence).collect();
        let mut out = Self::new(self.n_qubits, pop_map(self.a1), pop_map(self.b1), b, z)?;
        out.relabel_mask = self.relabel_mask;
        Ok(out)
    }

    pub fn to_dense(&self) -> Result<DensityMatrix> {
        xstate_to_dense(self)
    }
}

/// Dense `2^N x 2^N` matrix of an X-state (N at most 10).
pub fn xstate_to_dense(x: &XState) -> Result<DensityMatrix> {
    check_dense_qubits(x.n_qubits, 1)?;
    let n = x.n_pairs();
    let dim = 2 * n;
    let mut m = ComplexMatrix::zeros(dim);
    for k in 0..n {
        let partner = dim - 1 - k;
        let (upper, lower) = if k == 0 { (x.a1, x.b1) } else { (x.b[k - 1], x.b[k - 1]) };
        m[(k, k)] = C64::new(upper, 0.0);
        m[(partner, partner)] = C64::new(lower, 0.0);
        m[(k, partner)] = x.z[k];
        m[(partner, k)] = x.z[k].conj();
    }
    Ok(DensityMatrix::from_trusted(m))
}

/// Extracts X-state parameters from a dense matrix and canonicalizes.
///
/// Fails with [`Error::NotXState`] (naming the largest offending entry) if any
/// entry off the diagonal and anti-diagonal exceeds the X-state tolerance, and
/// with [`Error::UnequalPairPopulations`] if a pair other than the first has
/// different populations on its two ends.
pub fn dense_to_xstate(rho: &DensityMatrix) -> Result<XState> {
    let m = rho.matrix();
    let dim = m.dim();
    let tol = tolerances().x_offdiag;

    let mut worst: Option<(usize, usize, f64)> = None;
    for r in 0..dim {
        for (c, v) in m.row(r).iter().enumerate() {
            if c == r || c == dim - 1 - r {
                continue;
            }
            let modulus = v.norm();
            if modulus > tol && worst.is_none_or(|(_, _, w)| modulus > w) {
                worst = Some((r, c, modulus));
            }
        }
    }
    if let Some((row, col, modulus)) = worst {
        return Err(Error::NotXState { row: row + 1, col: col + 1, modulus });
    }

    let n = dim / 2;
    let mut b = Vec::with_capacity(n - 1);
    for k in 1..n {
        let upper = m[(k, k)].re;
        let lower = m[(dim - 1 - k, dim - 1 - k)].re;
        if (upper - lower).abs() > tol {
            return Err(Error::UnequalPairPopulations { pair: k + 1, upper, lower });
        }
        b.push(0.5 * (upper + lower));
    }
    let z = (0..n).map(|k| m[(k, dim - 1 - k)]).collect();
    XState::new(rho.n_qubits(), m[(0, 0)].re, m[(dim - 1, dim - 1)].re, b, z)?.canonicalize()
}
