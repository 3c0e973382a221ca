//! JSON state files.
//!
//! ```json
//! {"format": "dense", "n_qubits": N, "re": [[...]], "im": [[...]]}
//! {"format": "xstate", "n_qubits": N, "a1": r, "b1": r, "z1_re": r, "z1_im": r,
//!  "pairs": [{"b": r, "z_re": r, "z_im": r}, ...]}          // pairs i = 2..n
//! {"format": "ghz-diagonal", "n_qubits": N, "weights": [...]} // (k, +/-) order
//! {"format": "record", "n_qubits": N, "p00": r, "p11": r, "z_re": r, "z_im": r, "shots": s}
//! ```
//!
//! Numbers are written with 17 significant digits, so `save(load(f))`
//! reproduces a file written by this module byte for byte. Loading validates
//! the payload and rejects invalid states instead of repairing them.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::linalg::ComplexMatrix;
use crate::measurement::MeasurementRecord;
use crate::states::{ghz_diagonal, DensityMatrix, XState};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub b: f64,
    pub z_re: f64,
    pub z_im: f64,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateFile {
    Dense {
        n_qubits: usize,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
    Xstate {
        n_qubits: usize,
        a1: f64,
        b1: f64,
        z1_re: f64,
        z1_im: f64,
        pairs: Vec<PairEntry>,
    },
    GhzDiagonal {
        n_qubits: usize,
        weights: Vec<f64>,
    },
    Record {
        n_qubits: usize,
        p00: f64,
        p11: f64,
        z_re: f64,
        z_im: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shots: Option<u64>,
    },
}

/// A validated file payload.
#[derive(Clone, Debug)]
pub enum LoadedState {
    Dense(DensityMatrix),
    X(XState),
    Record { n_qubits: usize, record: MeasurementRecord },
}

impl LoadedState {
    pub fn n_qubits(&self) -> usize {
        match self {
            LoadedState::Dense(rho) => rho.n_qubits(),
            LoadedState::X(x) => x.n_qubits(),
            LoadedState::Record { n_qubits, .. } => *n_qubits,
        }
    }
}

impl StateFile {
    pub fn from_dense(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let dim = m.dim();
        let re = (0..dim).map(|i| m.row(i).iter().map(|c| c.re).collect()).collect();
        let im = (0..dim).map(|i| m.row(i).iter().map(|c| c.im).collect()).collect();
        StateFile::Dense { n_qubits: rho.n_qubits(), re, im }
    }

    pub fn from_xstate(x: &XState) -> Self {
        let pairs = x
            .b()
            .iter()
            .zip(&x.z()[1..])
            .map(|(&b, z)| PairEntry { b, z_re: z.re, z_im: z.im })
            .collect();
        StateFile::Xstate {
            n_qubits: x.n_qubits(),
            a1: x.a1(),
            b1: x.b1(),
            z1_re: x.z1().re,
            z1_im: x.z1().im,
            pairs,
        }
    }

    pub fn from_record(n_qubits: usize, r: &MeasurementRecord) -> Self {
        StateFile::Record { n_qubits, p00: r.p00, p11: r.p11, z_re: r.z_re, z_im: r.z_im, shots: r.shots }
    }

    pub fn format_tag(&self) -> &'static str {
        match self {
            StateFile::Dense { .. } => "dense",
            StateFile::Xstate { .. } => "xstate",
            StateFile::GhzDiagonal { .. } => "ghz-diagonal",
            StateFile::Record { .. } => "record",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision::default());
        self.serialize(&mut ser).expect("serializing to memory cannot fail");
        buf.push(b'\n');
        String::from_utf8(buf).expect("serde_json writes UTF-8")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_json().as_bytes())?;
        Ok(())
    }

    /// Validates the payload against the type invariants of its format.
    pub fn into_state(self) -> Result<LoadedState> {
        let declared = match &self {
            StateFile::Dense { n_qubits, .. }
            | StateFile::Xstate { n_qubits, .. }
            | StateFile::GhzDiagonal { n_qubits, .. }
            | StateFile::Record { n_qubits, .. } => *n_qubits,
        };
        let check_n = |actual: usize| {
            if actual != declared {
                return Err(Error::InvalidState(format!("n_qubits = {declared} but payload has {actual} qubits")));
            }
            Ok(())
        };
        match self {
            StateFile::Dense { re, im, .. } => {
                let dim = re.len();
                if im.len() != dim {
                    return Err(Error::InvalidState(format!("re has {dim} rows, im has {}", im.len())));
                }
                let mut rows = Vec::with_capacity(dim);
                for (r, i) in re.iter().zip(&im) {
                    if r.len() != dim || i.len() != dim {
                        return Err(Error::InvalidState(format!("matrix rows must have length {dim}")));
                    }
                    rows.push(r.iter().zip(i).map(|(&a, &b)| C64::new(a, b)).collect());
                }
                let rho = DensityMatrix::new(ComplexMatrix::from_rows(&rows)?)?;
                check_n(rho.n_qubits())?;
                Ok(LoadedState::Dense(rho))
            }
            StateFile::Xstate { n_qubits, a1, b1, z1_re, z1_im, pairs } => {
                let b = pairs.iter().map(|p| p.b).collect();
                let mut z = vec![C64::new(z1_re, z1_im)];
                z.extend(pairs.iter().map(|p| C64::new(p.z_re, p.z_im)));
                Ok(LoadedState::X(XState::new(n_qubits, a1, b1, b, z)?))
            }
            StateFile::GhzDiagonal { n_qubits, weights } => {
                Ok(LoadedState::X(ghz_diagonal(n_qubits, &weights)?))
            }
            StateFile::Record { n_qubits, p00, p11, z_re, z_im, shots } => {
                let record = MeasurementRecord { p00, p11, z_re, z_im, shots };
                record.check()?;
                Ok(LoadedState::Record { n_qubits, record })
            }
        }
    }
}

/// Pretty JSON with every float written as `d.ddddddddddddddddde±x`.
#[derive(Default)]
struct FullPrecision(PrettyFormatter<'static>);

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(writer)
    }
}
