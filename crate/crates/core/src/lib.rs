//! Trace-distance measure of all-party (genuinely N-partite) entanglement for
//! N-qubit states.
//!
//! The measure is the distance from a state to the closest biseparable state.
//! For X-states (and so for every GHZ-diagonal state) it has the closed form
//! `max(0, |z_1| - w_1)`; for arbitrary states the crate produces lower and
//! upper bounds from fidelities with a GHZ reference, and those fidelities only
//! need four measured numbers.
//!
//! Layout:
//!
//! - [`linalg`]: dense complex matrices, Hermitian eigensolvers, trace
//!   distance, PSD square root and Uhlmann fidelity.
//! - [`states`]: density matrices, compact [`states::XState`], GHZ builders
//!   and noise channels.
//! - [`pauli`]: Pauli strings, the even-Z commutant and the X-part channel.
//! - [`entanglement`]: closed-form measure, closest biseparable state and
//!   the bound family.
//! - [`measurement`]: the four-number [`measurement::MeasurementRecord`],
//!   exact extraction and shot sampling.
//! - [`io`]: JSON state files.

pub mod config;
pub mod entanglement;
mod error;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod pauli;
pub mod random;
pub mod states;
pub mod table;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
