//! Trace-distance measure of all-party entanglement and its bounds.
//!
//! `E(rho)` is the trace distance from `rho` to the closest biseparable state.
//! On a canonical X-state (`|z_1| >= |z_i|`) it is `max(0, |z_1| - w_1)`, and
//! the closest biseparable state is the same matrix with `z_1` shrunk to
//! modulus `w_1`. For any other state, a reference state with known `E` gives
//!
//! ```text
//! E(ref) - D(rho, ref) <= E(rho) <= min(D(rho, sigma_ref), E(ref) + D(rho, ref))
//! ```
//!
//! and `D <= sqrt(1 - F^2)` turns both sides into fidelity bounds. With the GHZ
//! state as reference only the corner block of `rho` enters, which is what
//! [`four_measurement_bounds`] exploits.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use serde::Serialize;

use crate::linalg::trace_distance;
use crate::measurement::MeasurementRecord;
use crate::states::{dense_to_xstate, DensityMatrix, XState};
use crate::{Error, Result};

/// Entanglement of the GHZ state.
pub const GHZ_ENTANGLEMENT: f64 = 0.5;

/// Grid size of the coarse scan in [`optimized_lower_bound`].
pub const THETA_GRID: usize = 1024;

/// Bracket width at which the golden-section refinement stops.
pub const THETA_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntanglementValue {
    pub value: f64,
    pub w1: f64,
    pub z1_abs: f64,
}

fn require_canonical(x: &XState) -> Result<()> {
    if !x.is_canonical() {
        let k = x.dominant_pair();
        return Err(Error::NotCanonical {
            dominant: k,
            dominant_abs: x.z()[k - 1].norm(),
            z1_abs: x.z1().norm(),
        });
    }
    Ok(())
}

/// `max(0, |z_1| - w_1)` for a canonical X-state. O(1): `w_1` is cached.
pub fn entanglement_x(x: &XState) -> Result<EntanglementValue> {
    require_canonical(x)?;
    let z1_abs = x.z1().norm();
    let w1 = x.w1();
    Ok(EntanglementValue { value: (z1_abs - w1).max(0.0), w1, z1_abs })
}

/// All-party concurrence `2 max(0, |z_1| - w_1)`.
pub fn concurrence_x(x: &XState) -> Result<f64> {
    Ok(2.0 * entanglement_x(x)?.value)
}

/// Closest biseparable state: `z_1 -> w_1 z_1 / |z_1|` when `|z_1| > w_1`,
/// otherwise the input itself.
pub fn closest_biseparable(x: &XState) -> Result<XState> {
    require_canonical(x)?;
    let z1 = x.z1();
    let z1_abs = z1.norm();
    if z1_abs <= x.w1() {
        return Ok(x.clone());
    }
    // z1_abs > w1 >= 0, so the phase is well defined
    x.with_z1(z1 * (x.w1() / z1_abs))
}

/// Canonicalizes a dense X-state and evaluates the closed form.
pub fn entanglement_dense(rho: &DensityMatrix) -> Result<EntanglementValue> {
    entanglement_x(&dense_to_xstate(rho)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerSource {
    /// `E(GHZ) - sqrt(1 - F(rho, GHZ)^2)`.
    GhzFidelity,
    /// `E(ref) - D(rho, ref)`.
    ReferenceDistance,
    /// Best weighted-GHZ fidelity bound over the angle.
    ThetaOptimized,
    TrivialZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperSource {
    /// `sqrt(1 - F(rho, sigma)^2)` with `sigma` closest biseparable to GHZ.
    SigmaFidelity,
    /// `D(rho, sigma_ref)`.
    ClosestBiseparableDistance,
    /// `E(ref) + D(rho, ref)`.
    ReferenceDistance,
    TrivialMax,
}

impl fmt::Display for LowerSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LowerSource::GhzFidelity => "ghz-fidelity",
            LowerSource::ReferenceDistance => "reference-distance",
            LowerSource::ThetaOptimized => "theta-optimized",
            LowerSource::TrivialZero => "trivial-zero",
        })
    }
}

impl fmt::Display for UpperSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UpperSource::SigmaFidelity => "sigma-fidelity",
            UpperSource::ClosestBiseparableDistance => "closest-biseparable-distance",
            UpperSource::ReferenceDistance => "reference-distance",
            UpperSource::TrivialMax => "trivial-max",
        })
    }
}

/// Lower and upper bounds on `E`, clamped to `[0, 1]`, with the inequality
/// that produced each.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    pub lower: f64,
    pub upper: f64,
    pub lower_source: LowerSource,
    pub upper_source: UpperSource,
    pub reference: String,
}

/// Smallest candidate wins; ties go to the earlier entry.
fn pick_upper(candidates: &[(f64, UpperSource)]) -> (f64, UpperSource) {
    candidates
        .iter()
        .copied()
        .fold((1.0, UpperSource::TrivialMax), |best, c| if c.0 < best.0 { c } else { best })
}

fn lower_from(raw: f64, source: LowerSource) -> (f64, LowerSource) {
    if raw > 0.0 {
        (raw.min(1.0), source)
    } else {
        (0.0, LowerSource::TrivialZero)
    }
}

/// Bounds on `E(rho)` from the distance to a canonical X-state reference and
/// to its closest biseparable state.
pub fn bounds_from_reference(rho: &DensityMatrix, reference: &XState) -> Result<BoundResult> {
    if rho.n_qubits() != reference.n_qubits() {
        return Err(Error::DimensionMismatch { left: rho.n_qubits(), right: reference.n_qubits() });
    }
    let e_ref = entanglement_x(reference)?.value;
    let sigma = closest_biseparable(reference)?;
    let d_ref = trace_distance(rho.matrix(), reference.to_dense()?.matrix())?;
    let d_sigma = trace_distance(rho.matrix(), sigma.to_dense()?.matrix())?;

    let (lower, lower_source) = lower_from(e_ref - d_ref, LowerSource::ReferenceDistance);
    let (upper, upper_source) = pick_upper(&[
        (d_sigma, UpperSource::ClosestBiseparableDistance),
        (e_ref + d_ref, UpperSource::ReferenceDistance),
    ]);
    Ok(BoundResult {
        lower,
        upper,
        lower_source,
        upper_source,
        reference: format!("X-state reference, N = {}, E(ref) = {e_ref:.6}", reference.n_qubits()),
    })
}

fn check_fidelity(name: &str, f: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(f.is_finite() && (-SLACK..=1.0 + SLACK).contains(&f)) {
        return Err(Error::InvalidArgument(format!("{name} = {f} is not a fidelity in [0, 1]")));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// `max(0, 1/2 - sqrt(1 - F^2))` for a fidelity `F` with the GHZ state.
pub fn ghz_lower_bound(f_ref: f64) -> f64 {
    let f = f_ref.clamp(0.0, 1.0);
    (GHZ_ENTANGLEMENT - (1.0 - f * f).sqrt()).max(0.0)
}

/// `1/2 - sqrt(1 - F_ref^2) <= E <= sqrt(1 - F_sigma^2)`, where `F_ref` is the
/// fidelity with the GHZ state and `F_sigma` the fidelity with its closest
/// biseparable state.
pub fn fidelity_bounds(f_ref: f64, f_sigma: f64) -> Result<BoundResult> {
    let f_ref = check_fidelity("F_ref", f_ref)?;
    let f_sigma = check_fidelity("F_sigma", f_sigma)?;
    bounds_from_infidelities(1.0 - f_ref * f_ref, 1.0 - f_sigma * f_sigma)
}

/// [`fidelity_bounds`] in terms of `1 - F_ref^2` and `1 - F_sigma^2`.
fn bounds_from_infidelities(ref_infidelity: f64, sigma_infidelity: f64) -> Result<BoundResult> {
    let (lower, lower_source) =
        lower_from(GHZ_ENTANGLEMENT - ref_infidelity.max(0.0).sqrt(), LowerSource::GhzFidelity);
    let (upper, upper_source) = pick_upper(&[(sigma_infidelity.max(0.0).sqrt(), UpperSource::SigmaFidelity)]);
    if lower > upper + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "1 - F_ref^2 = {ref_infidelity}, 1 - F_sigma^2 = {sigma_infidelity} give lower bound {lower} above upper bound {upper}"
        )));
    }
    Ok(BoundResult { lower, upper, lower_source, upper_source, reference: "GHZ".into() })
}

/// `1 - F_ref^2 = (1 - t) + (t/2 - Re z)`, with `t = p00 + p11`; both terms
/// are nonnegative on consistent records.
fn ghz_infidelity(record: &MeasurementRecord) -> f64 {
    let t = record.p00 + record.p11;
    ((1.0 - t) + (0.5 * t - record.z_re)).clamp(0.0, 1.0)
}

/// `1 - F_sigma^2 = 1 - t/2 - sqrt(d)`, rearranged as
/// `((1 - t) + (p00 - p11)^2 / 4 + |z|^2) / (1 - t/2 + sqrt(d))` so that
/// nothing cancels when `F_sigma` is close to one.
/// `p00 p11 - |z|^2`, zeroed when it is at the roundoff level of the product.
fn corner_determinant(record: &MeasurementRecord) -> f64 {
    let product = record.p00 * record.p11;
    let d = product - record.coherence().norm_sqr();
    if d < 8.0 * f64::EPSILON * product {
        0.0
    } else {
        d
    }
}

fn sigma_infidelity(record: &MeasurementRecord) -> f64 {
    let t = record.p00 + record.p11;
    let z2 = record.coherence().norm_sqr();
    let d = corner_determinant(record);
    let num = (1.0 - t).max(0.0) + 0.25 * (record.p00 - record.p11).powi(2) + z2;
    let den = 1.0 - 0.5 * t + d.sqrt();
    if den <= 0.0 {
        return 0.0;
    }
    (num / den).clamp(0.0, 1.0)
}

/// Squared fidelity with `cos(theta)|0..0> + sin(theta)|1..1>`:
/// `p00 cos^2 + p11 sin^2 + Re(z) sin(2 theta)`.
pub fn weighted_ghz_fidelity_sq(record: &MeasurementRecord, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    record.p00 * c * c + record.p11 * s * s + record.z_re * (2.0 * theta).sin()
}

/// Fidelity with the GHZ state.
pub fn ghz_fidelity(record: &MeasurementRecord) -> f64 {
    (1.0 - ghz_infidelity(record)).sqrt()
}

/// Fidelity with `(|0..0><0..0| + |1..1><1..1|) / 2`: `sqrt((t + 2 sqrt(d)) / 2)`
/// with `t` and `d` the trace and determinant of the corner block.
pub fn sigma_fidelity(record: &MeasurementRecord) -> f64 {
    let t = record.p00 + record.p11;
    let d = corner_determinant(record);
    (0.5 * (t + 2.0 * d.sqrt())).clamp(0.0, 1.0).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourMeasurementBounds {
    pub f_ref: f64,
    pub f_sigma: f64,
    /// Set when the lower bound came from the angle optimization.
    pub theta_star: Option<f64>,
    pub bounds: BoundResult,
    /// The record had to be projected onto the physical region first.
    pub projected: bool,
}

/// Bounds from the GHZ and closest-biseparable fidelities, both computed from
/// the four-number record.
pub fn four_measurement_bounds(record: &MeasurementRecord, n_qubits: usize) -> Result<FourMeasurementBounds> {
    let (record, projected) = record.to_consistent()?;
    let f_ref = ghz_fidelity(&record);
    let f_sigma = sigma_fidelity(&record);
    let mut bounds = bounds_from_infidelities(ghz_infidelity(&record), sigma_infidelity(&record))?;
    bounds.reference = format!("GHZ, N = {n_qubits}");
    Ok(FourMeasurementBounds { f_ref, f_sigma, theta_star: None, bounds, projected })
}

/// As [`four_measurement_bounds`], with the lower bound replaced by the
/// angle-optimized one.
pub fn four_measurement_bounds_optimized(
    record: &MeasurementRecord,
    n_qubits: usize,
) -> Result<FourMeasurementBounds> {
    let mut out = four_measurement_bounds(record, n_qubits)?;
    let opt = optimized_lower_bound(record)?;
    out.theta_star = Some(opt.theta_star);
    if opt.lower >= out.bounds.lower {
        out.bounds.lower = opt.lower;
        out.bounds.lower_source = opt.source;
    }
    out.bounds.reference = format!("weighted GHZ, N = {n_qubits}, theta* = {:.10}", opt.theta_star);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaBound {
    pub theta_star: f64,
    /// Objective at `theta_star`; may be negative.
    pub objective: f64,
    /// `max(0, objective)`.
    pub lower: f64,
    pub source: LowerSource,
}

/// `E(psi_theta) - sqrt(1 - F(rho, psi_theta)^2)` with `E(psi_theta) = |sin 2 theta| / 2`.
pub fn theta_objective(record: &MeasurementRecord, theta: f64) -> f64 {
    let f2 = weighted_ghz_fidelity_sq(record, theta).clamp(0.0, 1.0);
    0.5 * (2.0 * theta).sin().abs() - (1.0 - f2).sqrt()
}

/// Maximizes [`theta_objective`] over `(0, pi/2)`: a coarse scan followed by
/// golden-section refinement. Never returns less than the `theta = pi/4`
/// value.
pub fn optimized_lower_bound(record: &MeasurementRecord) -> Result<ThetaBound> {
    let (record, _) = record.to_consistent()?;
    let g = |t: f64| theta_objective(&record, t);

    let h = FRAC_PI_2 / (THETA_GRID + 1) as f64;
    // same arithmetic as the unoptimized bound, so the result never falls below it
    let (mut best_t, mut best_v) = (FRAC_PI_4, GHZ_ENTANGLEMENT - ghz_infidelity(&record).sqrt());
    let mut grid_best = (h, g(h));
    for k in 1..=THETA_GRID {
        let t = k as f64 * h;
        let v = g(t);
        if v > grid_best.1 {
            grid_best = (t, v);
        }
    }

    let (mut lo, mut hi) = ((grid_best.0 - h).max(0.0), (grid_best.0 + h).min(FRAC_PI_2));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    while hi - lo > THETA_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        }
    }
    let refined_t = 0.5 * (lo + hi);
    for (t, v) in [grid_best, (refined_t, g(refined_t))] {
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    let (lower, source) = lower_from(best_v, LowerSource::ThetaOptimized);
    Ok(ThetaBound { theta_star: best_t, objective: best_v, lower, source })
}
