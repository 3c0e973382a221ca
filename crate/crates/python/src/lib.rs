//! Python bindings. Matrices cross the boundary as lists of rows of
//! `complex`; errors surface as `ValueError`.

use entbound::entanglement::{self as ent, BoundResult, FourMeasurementBounds};
use entbound::linalg::{self, ComplexMatrix};
use entbound::measurement::{self, MeasurementRecord};
use entbound::pauli::{self, PauliString};
use entbound::states::{self, Channel, GhzWeight};
use entbound::C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: entbound::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Vec<Vec<C64>>) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(err)
}

fn from_matrix(m: &ComplexMatrix) -> Vec<Vec<C64>> {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

fn channel(kind: &str, p: f64) -> PyResult<Channel> {
    match kind {
        "depolarizing" => Ok(Channel::Depolarizing(p)),
        "dephasing" => Ok(Channel::Dephasing(p)),
        other => Err(PyValueError::new_err(format!("unknown noise channel {other:?}"))),
    }
}

#[pyclass(name = "DensityMatrix", module = "entbound", frozen)]
struct PyDensityMatrix(states::DensityMatrix);

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(rows: Vec<Vec<C64>>) -> PyResult<Self> {
        Ok(Self(states::DensityMatrix::new(to_matrix(rows)?).map_err(err)?))
    }

    #[staticmethod]
    fn from_pure(psi: Vec<C64>) -> PyResult<Self> {
        Ok(Self(states::DensityMatrix::from_pure(&psi).map_err(err)?))
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn to_list(&self) -> Vec<Vec<C64>> {
        from_matrix(self.0.matrix())
    }

    fn min_eigenvalue(&self) -> PyResult<f64> {
        self.0.min_eigenvalue().map_err(err)
    }

    fn apply_noise(&self, kind: &str, p: f64) -> PyResult<Self> {
        Ok(Self(states::apply_noise(&self.0, channel(kind, p)?).map_err(err)?))
    }

    fn to_xstate(&self) -> PyResult<PyXState> {
        Ok(PyXState(states::dense_to_xstate(&self.0).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(n_qubits={})", self.0.n_qubits())
    }
}

#[pyclass(name = "XState", module = "entbound", frozen)]
struct PyXState(states::XState);

#[pymethods]
impl PyXState {
    #[new]
    fn new(n_qubits: usize, a1: f64, b1: f64, b: Vec<f64>, z: Vec<C64>) -> PyResult<Self> {
        Ok(Self(states::XState::new(n_qubits, a1, b1, b, z).map_err(err)?))
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    #[getter]
    fn a1(&self) -> f64 {
        self.0.a1()
    }

    #[getter]
    fn b1(&self) -> f64 {
        self.0.b1()
    }

    #[getter]
    fn b(&self) -> Vec<f64> {
        self.0.b().to_vec()
    }

    #[getter]
    fn z(&self) -> Vec<C64> {
        self.0.z().to_vec()
    }

    #[getter]
    fn w1(&self) -> f64 {
        self.0.w1()
    }

    fn is_canonical(&self) -> bool {
        self.0.is_canonical()
    }

    fn canonicalize(&self) -> PyResult<Self> {
        Ok(Self(self.0.canonicalize().map_err(err)?))
    }

    fn apply_noise(&self, kind: &str, p: f64) -> PyResult<Self> {
        Ok(Self(self.0.apply_noise(channel(kind, p)?).map_err(err)?))
    }

    fn to_dense(&self) -> PyResult<PyDensityMatrix> {
        Ok(PyDensityMatrix(self.0.to_dense().map_err(err)?))
    }

    fn record(&self) -> PyRecord {
        PyRecord(measurement::record_from_xstate(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("XState(n_qubits={}, a1={}, b1={}, |z1|={})", self.0.n_qubits(), self.0.a1(), self.0.b1(), self.0.z1().norm())
    }
}

#[pyclass(name = "MeasurementRecord", module = "entbound", frozen)]
struct PyRecord(MeasurementRecord);

#[pymethods]
impl PyRecord {
    #[new]
    #[pyo3(signature = (p00, p11, z_re, z_im, shots = None))]
    fn new(p00: f64, p11: f64, z_re: f64, z_im: f64, shots: Option<u64>) -> Self {
        Self(MeasurementRecord { p00, p11, z_re, z_im, shots })
    }

    #[getter]
    fn p00(&self) -> f64 {
        self.0.p00
    }

    #[getter]
    fn p11(&self) -> f64 {
        self.0.p11
    }

    #[getter]
    fn z_re(&self) -> f64 {
        self.0.z_re
    }

    #[getter]
    fn z_im(&self) -> f64 {
        self.0.z_im
    }

    #[getter]
    fn shots(&self) -> Option<u64> {
        self.0.shots
    }

    fn check(&self) -> PyResult<()> {
        self.0.check().map_err(err)
    }

    fn __repr__(&self) -> String {
        let r = &self.0;
        format!("MeasurementRecord(p00={}, p11={}, z_re={}, z_im={}, shots={:?})", r.p00, r.p11, r.z_re, r.z_im, r.shots)
    }
}

fn bound_dict<'py>(py: Python<'py>, b: &BoundResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("lower", b.lower)?;
    d.set_item("upper", b.upper)?;
    d.set_item("lower_source", b.lower_source.to_string())?;
    d.set_item("upper_source", b.upper_source.to_string())?;
    d.set_item("reference", &b.reference)?;
    Ok(d)
}

fn four_dict<'py>(py: Python<'py>, b: &FourMeasurementBounds) -> PyResult<Bound<'py, PyDict>> {
    let d = bound_dict(py, &b.bounds)?;
    d.set_item("f_ref", b.f_ref)?;
    d.set_item("f_sigma", b.f_sigma)?;
    d.set_item("theta_star", b.theta_star)?;
    d.set_item("projected", b.projected)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (n_qubits, theta = std::f64::consts::FRAC_PI_4))]
fn ghz_state(n_qubits: usize, theta: f64) -> PyResult<PyDensityMatrix> {
    let w = GhzWeight::new(theta).map_err(err)?;
    Ok(PyDensityMatrix(states::ghz_state(n_qubits, w).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (n_qubits, theta = std::f64::consts::FRAC_PI_4))]
fn ghz_xstate(n_qubits: usize, theta: f64) -> PyResult<PyXState> {
    let w = GhzWeight::new(theta).map_err(err)?;
    Ok(PyXState(states::ghz_xstate(n_qubits, w).map_err(err)?))
}

#[pyfunction]
fn ghz_diagonal(n_qubits: usize, weights: Vec<f64>) -> PyResult<PyXState> {
    Ok(PyXState(states::ghz_diagonal(n_qubits, &weights).map_err(err)?))
}

/// `E` of a canonical X-state, or of a dense X-state.
#[pyfunction]
fn entanglement(state: &Bound<'_, PyAny>) -> PyResult<f64> {
    if let Ok(x) = state.cast::<PyXState>() {
        return Ok(ent::entanglement_x(&x.get().0).map_err(err)?.value);
    }
    let rho = state.cast::<PyDensityMatrix>()?;
    Ok(ent::entanglement_dense(&rho.get().0).map_err(err)?.value)
}

#[pyfunction]
fn concurrence(x: &PyXState) -> PyResult<f64> {
    ent::concurrence_x(&x.0).map_err(err)
}

#[pyfunction]
fn closest_biseparable(x: &PyXState) -> PyResult<PyXState> {
    Ok(PyXState(ent::closest_biseparable(&x.0).map_err(err)?))
}

#[pyfunction]
fn trace_distance(a: &PyDensityMatrix, b: &PyDensityMatrix) -> PyResult<f64> {
    linalg::trace_distance(a.0.matrix(), b.0.matrix()).map_err(err)
}

#[pyfunction]
fn fidelity(a: &PyDensityMatrix, b: &PyDensityMatrix) -> PyResult<f64> {
    linalg::fidelity(a.0.matrix(), b.0.matrix()).map_err(err)
}

#[pyfunction]
fn extract_record(rho: &PyDensityMatrix) -> PyRecord {
    PyRecord(measurement::extract_record(&rho.0))
}

#[pyfunction]
fn sample_record(rho: &PyDensityMatrix, shots: u64, seed: u64) -> PyResult<PyRecord> {
    Ok(PyRecord(measurement::sample_record(&rho.0, shots, seed).map_err(err)?))
}

#[pyfunction]
fn bounds_from_reference<'py>(
    py: Python<'py>,
    rho: &PyDensityMatrix,
    reference: &PyXState,
) -> PyResult<Bound<'py, PyDict>> {
    bound_dict(py, &ent::bounds_from_reference(&rho.0, &reference.0).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (record, n_qubits, theta_opt = false))]
fn four_measurement_bounds<'py>(
    py: Python<'py>,
    record: &PyRecord,
    n_qubits: usize,
    theta_opt: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let b = if theta_opt {
        ent::four_measurement_bounds_optimized(&record.0, n_qubits)
    } else {
        ent::four_measurement_bounds(&record.0, n_qubits)
    };
    four_dict(py, &b.map_err(err)?)
}

#[pyfunction]
fn chi_zero(rho: &PyDensityMatrix) -> PyDensityMatrix {
    PyDensityMatrix(pauli::chi_zero(&rho.0))
}

#[pyfunction]
fn chi_kraus(rho: &PyDensityMatrix) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix(pauli::chi_kraus(&rho.0).map_err(err)?))
}

/// `(commuting, anticommuting)` counts of the even-Z commutant against a
/// Pauli word such as `"XXYZ"`.
#[pyfunction]
fn commutation_census(word: &str) -> PyResult<(usize, usize)> {
    let a = PauliString::parse(word).map_err(err)?;
    let c = pauli::build_commutant(a.n_qubits()).map_err(err)?;
    let census = pauli::commutation_census(&a, &c).map_err(err)?;
    Ok((census.commuting, census.anticommuting))
}

#[pyfunction]
fn table1(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    entbound::table::table1()
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("n_ions", row.n_ions)?;
            d.set_item("fidelity", row.fidelity)?;
            d.set_item("lower", row.lower)?;
            d.set_item("percent_of_ghz", row.percent_of_ghz)?;
            d.set_item("published", &row.published)?;
            d.set_item("published_percent", row.published_percent)?;
            d.set_item("flag", row.flag.clone())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "entbound")]
fn entbound_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyXState>()?;
    m.add_class::<PyRecord>()?;
    m.add_function(wrap_pyfunction!(ghz_state, m)?)?;
    m.add_function(wrap_pyfunction!(ghz_xstate, m)?)?;
    m.add_function(wrap_pyfunction!(ghz_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(closest_biseparable, m)?)?;
    m.add_function(wrap_pyfunction!(trace_distance, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(extract_record, m)?)?;
    m.add_function(wrap_pyfunction!(sample_record, m)?)?;
    m.add_function(wrap_pyfunction!(bounds_from_reference, m)?)?;
    m.add_function(wrap_pyfunction!(four_measurement_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(chi_zero, m)?)?;
    m.add_function(wrap_pyfunction!(chi_kraus, m)?)?;
    m.add_function(wrap_pyfunction!(commutation_census, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    Ok(())
}
