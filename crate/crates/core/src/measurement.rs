//! The four experimentally accessible numbers: the populations of `|0...0>`
//! and `|1...1>` and the real and imaginary parts of the coherence between
//! them.
//!
//! They are the expectations of four observables supported on the corner
//! block spanned by `|0...0>` and `|1...1>`:
//!
//! | observable | operator                         | reading            |
//! |------------|----------------------------------|--------------------|
//! | `P0`       | `|0..0><0..0|`                   | `p00`              |
//! | `P1`       | `|1..1><1..1|`                   | `p11`              |
//! | `X`        | `|0..0><1..1| + h.c.`            | `z_re = <X> / 2`   |
//! | `Y`        | `i(|1..1><0..0| - |0..0><1..1|)` | `z_im = -<Y> / 2`  |
//!
//! so that `z_re + i z_im = rho[0][2^N - 1]`.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::config::tolerances;
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::states::{DensityMatrix, XState};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub p00: f64,
    pub p11: f64,
    pub z_re: f64,
    pub z_im: f64,
    /// Shots per observable; `None` for exact expectations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

/// Which physical constraint a record breaks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Violation {
    PopulationRange,
    PopulationSum,
    CornerPositivity,
}

impl MeasurementRecord {
    pub fn exact(p00: f64, p11: f64, z_re: f64, z_im: f64) -> Self {
        Self { p00, p11, z_re, z_im, shots: None }
    }

    pub fn coherence(&self) -> C64 {
        C64::new(self.z_re, self.z_im)
    }

    /// Slack allowed on a single estimate: roundoff for exact records, three
    /// binomial standard deviations (worst case `1 / (2 sqrt(shots))`) for
    /// sampled ones. The population sum gets `sqrt(2)` times this and the
    /// quadratic positivity constraint twice this.
    pub fn slack(&self) -> f64 {
        match self.shots {
            None => tolerances().trace,
            Some(s) => 3.0 * 0.5 / (s.max(1) as f64).sqrt(),
        }
    }

    /// Constraints violated beyond zero slack.
    fn violations_with(&self, slack: f64) -> Vec<(Violation, String)> {
        let mut out = Vec::new();
        for (name, p) in [("p00", self.p00), ("p11", self.p11)] {
            if !(p.is_finite() && p >= -slack && p <= 1.0 + slack) {
                out.push((Violation::PopulationRange, format!("{name} = {p} outside [0, 1]")));
            }
        }
        if !(self.z_re.is_finite() && self.z_im.is_finite()) {
            out.push((Violation::CornerPositivity, "coherence is not finite".into()));
        }
        let sum = self.p00 + self.p11;
        if sum > 1.0 + std::f64::consts::SQRT_2 * slack {
            out.push((Violation::PopulationSum, format!("p00 + p11 = {sum} exceeds 1")));
        }
        let z2 = self.coherence().norm_sqr();
        let bound = self.p00.max(0.0) * self.p11.max(0.0);
        if z2 > bound + 2.0 * slack {
            out.push((Violation::CornerPositivity, format!("|z|^2 = {z2} exceeds p00 p11 = {bound}")));
        }
        out
    }

    /// Errors if any constraint is broken beyond [`Self::slack`].
    pub fn check(&self) -> Result<()> {
        let v = self.violations_with(self.slack());
        if let Some((_, msg)) = v.into_iter().next() {
            return Err(Error::InconsistentRecord(msg));
        }
        Ok(())
    }

    /// Checks the record and projects it onto the physical region: populations
    /// clipped to `[0, 1]`, rescaled if their sum exceeds one, and the
    /// coherence shrunk to `sqrt(p00 p11)` if needed. Returns the projected
    /// record and whether anything changed.
    pub fn to_consistent(&self) -> Result<(Self, bool)> {
        self.check()?;
        if self.violations_with(0.0).is_empty() {
            return Ok((*self, false));
        }
        let mut r = *self;
        r.p00 = r.p00.clamp(0.0, 1.0);
        r.p11 = r.p11.clamp(0.0, 1.0);
        let sum = r.p00 + r.p11;
        if sum > 1.0 {
            r.p00 /= sum;
            r.p11 /= sum;
        }
        let cap = (r.p00 * r.p11).sqrt();
        let modulus = r.coherence().norm();
        if modulus > cap {
            let shrink = if modulus > 0.0 { cap / modulus } else { 0.0 };
            r.z_re *= shrink;
            r.z_im *= shrink;
        }
        log::warn!("measurement record projected onto the physical region: {self:?} -> {r:?}");
        Ok((r, true))
    }

    /// The 2x2 corner block `[[p00, z], [z*, p11]]`.
    pub fn corner_block(&self) -> ComplexMatrix {
        let z = self.coherence();
        ComplexMatrix::from_rows(&[vec![C64::new(self.p00, 0.0), z], vec![z.conj(), C64::new(self.p11, 0.0)]])
            .expect("2x2")
    }
}

/// Exact expectations of the four observables.
pub fn extract_record(rho: &DensityMatrix) -> MeasurementRecord {
    let m = rho.matrix();
    let last = rho.dim() - 1;
    let z = m[(0, last)];
    MeasurementRecord::exact(m[(0, 0)].re, m[(last, last)].re, z.re, z.im)
}

/// Exact record read from the corner pair of an X-state.
pub fn record_from_xstate(x: &XState) -> MeasurementRecord {
    let z = x.z1();
    MeasurementRecord::exact(x.a1(), x.b1(), z.re, z.im)
}

/// The four observables restricted to the corner block, in table order.
fn corner_observables() -> [ComplexMatrix; 4] {
    let c = |re: f64, im: f64| C64::new(re, im);
    let m = |rows: [[C64; 2]; 2]| ComplexMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).expect("2x2");
    [
        m([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]),
        m([[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]),
        m([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
        m([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
    ]
}

/// Simulates `shots` single-shot measurements of each observable on a state
/// with the given exact record. Outcome probabilities come from the
/// observable's eigenbasis on the corner block; the rest of the space yields
/// outcome 0.
pub fn sample_from_record(exact: &MeasurementRecord, shots: u64, seed: u64) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    exact.check()?;
    let block = exact.corner_block();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut estimates = [0.0; 4];
    for (est, obs) in estimates.iter_mut().zip(corner_observables()) {
        let eig = hermitian_eig(&obs)?;
        let mut remaining = shots;
        let mut left = 1.0f64;
        let mut total = 0.0;
        for (k, &value) in eig.values.iter().enumerate() {
            let v: Vec<C64> = (0..2).map(|i| eig.vectors[(i, k)]).collect();
            let prob = block.sandwich(&v, &v).re.clamp(0.0, 1.0);
            // sequential binomials realize the multinomial draw
            let cond = if left > 0.0 { (prob / left).clamp(0.0, 1.0) } else { 0.0 };
            let count = Binomial::new(remaining, cond)
                .map_err(|e| Error::InvalidArgument(format!("binomial sampler: {e}")))?
                .sample(&mut rng);
            total += value * count as f64;
            remaining -= count;
            left -= prob;
        }
        *est = total / shots as f64;
    }
    let [p00, p11, x, y] = estimates;
    Ok(MeasurementRecord { p00, p11, z_re: 0.5 * x, z_im: -0.5 * y, shots: Some(shots) })
}

/// [`sample_from_record`] on the exact record of `rho`.
pub fn sample_record(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<MeasurementRecord> {
    sample_from_record(&extract_record(rho), shots, seed)
}
