//! Python bindings: `import pyholonomy`.
//!
//! Matrices cross the boundary as lists of lists of Python `complex`.

use holonomy::composite::{build_correlated, theorem_check};
use holonomy::evolution::{is_global_cyclic, propagate, Segment, DEFAULT_SAMPLES_PER_SEGMENT};
use holonomy::phases::{self, GaugePhaseInterpolation};
use holonomy::scenarios::{self, ScenarioSpec};
use holonomy::states::{bloch_of, qubit_state};
use holonomy::transport::{counterexample_lift, parallel_lift, sjoqvist_phase, TransportedPath};
use holonomy::{
    ComplexMatrix, DensityOperator, Error, HamiltonianSchedule, PhaseReport, UnitaryPath,
};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(
    pyholonomy,
    HolonomyError,
    PyValueError,
    "Any error raised by the phase engine."
);
create_exception!(
    pyholonomy,
    NotCyclicError,
    HolonomyError,
    "ρ(0) does not commute with U(τ)."
);
create_exception!(
    pyholonomy,
    NodalPointError,
    HolonomyError,
    "Tr[ρ(0)U(τ)] vanishes; the phase is undefined."
);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NotCyclic { .. } => NotCyclicError::new_err(e.to_string()),
        Error::NodalPoint { .. } => NodalPointError::new_err(e.to_string()),
        _ => HolonomyError::new_err(e.to_string()),
    }
}

type Rows = Vec<Vec<Complex64>>;
type BlochSamples = Vec<(f64, (f64, f64, f64))>;

fn to_matrix(rows: &Rows) -> holonomy::Result<ComplexMatrix> {
    ComplexMatrix::from_rows(rows)
}

fn parse_interpolation(name: &str) -> holonomy::Result<GaugePhaseInterpolation> {
    match name {
        "linear" => Ok(GaugePhaseInterpolation::Linear),
        "cubic" => Ok(GaugePhaseInterpolation::Cubic),
        "smoothstep" => Ok(GaugePhaseInterpolation::SmoothStep),
        other => Err(Error::InvalidSchedule(format!(
            "unknown interpolation '{other}' (expected linear, cubic or smoothstep)"
        ))),
    }
}

/// A validated density operator.
#[pyclass(
    name = "DensityOperator",
    module = "pyholonomy",
    frozen,
    from_py_object
)]
#[derive(Clone)]
struct PyDensity {
    inner: DensityOperator,
}

#[pymethods]
impl PyDensity {
    #[new]
    fn new(matrix: Rows) -> PyResult<Self> {
        let m = to_matrix(&matrix).map_err(py_err)?;
        Ok(Self {
            inner: DensityOperator::new(m).map_err(py_err)?,
        })
    }

    /// Qubit state with Bloch vector r(sinθ cosφ, sinθ sinφ, cosθ).
    #[staticmethod]
    #[pyo3(signature = (r, theta, phi = 0.0))]
    fn qubit(r: f64, theta: f64, phi: f64) -> PyResult<Self> {
        Ok(Self {
            inner: qubit_state(r, theta, phi).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn maximally_mixed(dim: usize) -> Self {
        Self {
            inner: DensityOperator::maximally_mixed(dim),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn matrix(&self) -> Rows {
        self.inner.matrix().to_rows()
    }

    /// Bloch vector (qubits only).
    fn bloch(&self) -> PyResult<(f64, f64, f64)> {
        let b = bloch_of(&self.inner).map_err(py_err)?;
        Ok((b.x(), b.y(), b.z()))
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityOperator(dim={}, purity={:.6})",
            self.inner.dim(),
            self.inner.purity()
        )
    }
}

/// A piecewise-constant or sampled Hamiltonian schedule (ħ = 1).
#[pyclass(
    name = "HamiltonianSchedule",
    module = "pyholonomy",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PySchedule {
    inner: HamiltonianSchedule,
}

#[pymethods]
impl PySchedule {
    /// `segments` is a list of `(duration, h)` pairs.
    #[staticmethod]
    fn piecewise(segments: Vec<(f64, Rows)>) -> PyResult<Self> {
        let segments = segments
            .iter()
            .map(|(d, h)| to_matrix(h).map(|h| Segment::new(*d, h)))
            .collect::<holonomy::Result<Vec<_>>>()
            .map_err(py_err)?;
        Ok(Self {
            inner: HamiltonianSchedule::piecewise(segments).map_err(py_err)?,
        })
    }

    /// H sampled on a uniform grid over [0, τ], endpoints included.
    #[staticmethod]
    fn sampled(tau: f64, h: Vec<Rows>) -> PyResult<Self> {
        let h = h
            .iter()
            .map(to_matrix)
            .collect::<holonomy::Result<Vec<_>>>()
            .map_err(py_err)?;
        Ok(Self {
            inner: HamiltonianSchedule::sampled(tau, h).map_err(py_err)?,
        })
    }

    #[getter]
    fn duration(&self) -> f64 {
        self.inner.duration()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Time-ordered propagator on a grid with `samples_per_segment` intervals per segment.
    #[pyo3(signature = (samples_per_segment = DEFAULT_SAMPLES_PER_SEGMENT))]
    fn propagate(&self, samples_per_segment: usize) -> PyResult<PyPath> {
        Ok(PyPath {
            inner: propagate(&self.inner, samples_per_segment).map_err(py_err)?,
        })
    }

    fn propagator_at(&self, t: f64) -> Rows {
        self.inner.propagator_at(t).to_rows()
    }
}

/// U(t) sampled on a grid, with the generator at each node.
#[pyclass(
    name = "UnitaryPath",
    module = "pyholonomy",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyPath {
    inner: UnitaryPath,
}

#[pymethods]
impl PyPath {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn duration(&self) -> f64 {
        self.inner.duration()
    }

    fn times(&self) -> Vec<f64> {
        self.inner.times()
    }

    fn unitary(&self, n: usize) -> PyResult<Rows> {
        Ok(self.inner.unitary(n).map_err(py_err)?.to_rows())
    }

    fn final_unitary(&self) -> Rows {
        self.inner.final_unitary().to_rows()
    }

    fn max_unitarity_defect(&self) -> f64 {
        self.inner.max_unitarity_defect()
    }

    /// The phase φ when U(τ) = e^{iφ}I, otherwise None.
    fn global_phase(&self) -> Option<f64> {
        is_global_cyclic(&self.inner)
    }
}

/// Total, dynamical and geometric phases of one cyclic evolution.
#[pyclass(
    name = "PhaseReport",
    module = "pyholonomy",
    frozen,
    get_all,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyPhaseReport {
    total: f64,
    dynamical: f64,
    geometric: f64,
    geometric_mod: f64,
    trace_magnitude: f64,
    cyclicity_residual: f64,
    nodal: bool,
}

impl From<PhaseReport> for PyPhaseReport {
    fn from(r: PhaseReport) -> Self {
        Self {
            total: r.total,
            dynamical: r.dynamical,
            geometric: r.geometric,
            geometric_mod: r.geometric_mod,
            trace_magnitude: r.trace_magnitude,
            cyclicity_residual: r.cyclicity_residual,
            nodal: r.nodal,
        }
    }
}

#[pymethods]
impl PyPhaseReport {
    fn __repr__(&self) -> String {
        format!(
            "PhaseReport(total={}, dynamical={}, geometric={})",
            self.total, self.dynamical, self.geometric
        )
    }
}

/// A path lifted by the U(1) factor that makes it parallel for ρ(0).
#[pyclass(name = "TransportedPath", module = "pyholonomy", frozen)]
struct PyTransported {
    inner: TransportedPath,
}

#[pymethods]
impl PyTransported {
    fn xi(&self) -> Vec<f64> {
        self.inner.xi().to_vec()
    }

    #[getter]
    fn xi_final(&self) -> f64 {
        self.inner.xi_final()
    }

    fn residual(&self) -> f64 {
        self.inner.residual()
    }

    fn sjoqvist_phase(&self) -> PyResult<f64> {
        sjoqvist_phase(self.inner.rho0(), &self.inner).map_err(py_err)
    }

    fn lifted(&self) -> PyPath {
        PyPath {
            inner: self.inner.lifted().clone(),
        }
    }
}

/// A built-in scenario with its closed-form expectations.
#[pyclass(name = "Scenario", module = "pyholonomy", frozen)]
struct PyScenario {
    inner: ScenarioSpec,
}

#[pymethods]
impl PyScenario {
    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn rho0(&self) -> PyDensity {
        PyDensity {
            inner: self.inner.rho0.clone(),
        }
    }

    #[getter]
    fn schedule(&self) -> PySchedule {
        PySchedule {
            inner: self.inner.schedule.clone(),
        }
    }

    /// `(total, dynamical, geometric)` from the closed form, if any.
    #[getter]
    fn expected(&self) -> Option<(f64, f64, f64)> {
        self.inner
            .expected
            .map(|e| (e.total, e.dynamical, e.geometric))
    }

    /// Bloch trajectory as a list of `(t, (rx, ry, rz))`.
    #[pyo3(signature = (samples = 100))]
    fn bloch_path(&self, samples: usize) -> PyResult<BlochSamples> {
        let pts = scenarios::bloch_path(&self.inner, samples).map_err(py_err)?;
        Ok(pts
            .into_iter()
            .map(|(t, b)| (t, (b.x(), b.y(), b.z())))
            .collect())
    }
}

#[pyfunction]
#[pyo3(signature = (r, theta, omega = 1.0))]
fn example_one(r: f64, theta: f64, omega: f64) -> PyResult<PyScenario> {
    Ok(PyScenario {
        inner: scenarios::example_one(r, theta, omega).map_err(py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (r, theta, phi, omega = 1.0))]
fn example_two(r: f64, theta: f64, phi: f64, omega: f64) -> PyResult<PyScenario> {
    Ok(PyScenario {
        inner: scenarios::example_two(r, theta, phi, omega).map_err(py_err)?,
    })
}

#[pyfunction]
fn random_cyclic(dim: usize, seed: u64) -> PyResult<PyScenario> {
    Ok(PyScenario {
        inner: scenarios::random_cyclic(dim, seed).map_err(py_err)?,
    })
}

#[pyfunction]
fn geometric_phase(rho0: &PyDensity, path: &PyPath) -> PyResult<PyPhaseReport> {
    Ok(phases::geometric_phase(&rho0.inner, &path.inner)
        .map_err(py_err)?
        .into())
}

#[pyfunction]
#[pyo3(signature = (rho0, path, interpolation = "linear"))]
fn one_form_integral(rho0: &PyDensity, path: &PyPath, interpolation: &str) -> PyResult<f64> {
    let interp = parse_interpolation(interpolation).map_err(py_err)?;
    phases::one_form_integral(&rho0.inner, &path.inner, interp).map_err(py_err)
}

#[pyfunction]
fn weighted_decomposition_phase(rho0: &PyDensity, path: &PyPath) -> PyResult<f64> {
    phases::weighted_decomposition_phase(&rho0.inner, &path.inner).map_err(py_err)
}

#[pyfunction]
fn phase_distance(a: f64, b: f64) -> f64 {
    phases::phase_distance(a, b)
}

#[pyfunction(name = "parallel_lift")]
fn py_parallel_lift(rho0: &PyDensity, path: &PyPath) -> PyResult<PyTransported> {
    Ok(PyTransported {
        inner: parallel_lift(&rho0.inner, &path.inner).map_err(py_err)?,
    })
}

/// Returns a dict with `residual_plus`, `residual_minus`, `phase` and `geometric`.
#[pyfunction(name = "counterexample_lift")]
fn py_counterexample_lift(py: Python<'_>, r: f64, theta: f64) -> PyResult<Py<pyo3::types::PyDict>> {
    let ce = counterexample_lift(r, theta).map_err(py_err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("residual_plus", ce.residual_plus)?;
    d.set_item("residual_minus", ce.residual_minus)?;
    d.set_item("phase", ce.phase)?;
    d.set_item("geometric", ce.geometric)?;
    Ok(d.unbind())
}

/// Geometric phases of Σ wᵢ |i⟩⟨i| ⊗ ρᵢ under I ⊗ U and of Tr_A under U.
///
/// Returns `(composite_report, reduced_report, agreement)`.
#[pyfunction(name = "theorem_check")]
fn py_theorem_check(
    weights: Vec<f64>,
    states_b: Vec<PyDensity>,
    path: &PyPath,
) -> PyResult<(PyPhaseReport, PyPhaseReport, f64)> {
    let states: Vec<DensityOperator> = states_b.into_iter().map(|s| s.inner).collect();
    let state = build_correlated(&weights, &states).map_err(py_err)?;
    let c = theorem_check(&state, &path.inner).map_err(py_err)?;
    Ok((c.composite.into(), c.reduced.into(), c.agreement))
}

/// Module initialiser; also usable with `pyo3::append_to_inittab!` when embedding.
#[pymodule]
pub fn pyholonomy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("HolonomyError", py.get_type::<HolonomyError>())?;
    m.add("NotCyclicError", py.get_type::<NotCyclicError>())?;
    m.add("NodalPointError", py.get_type::<NodalPointError>())?;
    m.add_class::<PyDensity>()?;
    m.add_class::<PySchedule>()?;
    m.add_class::<PyPath>()?;
    m.add_class::<PyPhaseReport>()?;
    m.add_class::<PyTransported>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(example_one, m)?)?;
    m.add_function(wrap_pyfunction!(example_two, m)?)?;
    m.add_function(wrap_pyfunction!(random_cyclic, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_phase, m)?)?;
    m.add_function(wrap_pyfunction!(one_form_integral, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_decomposition_phase, m)?)?;
    m.add_function(wrap_pyfunction!(phase_distance, m)?)?;
    m.add_function(wrap_pyfunction!(py_parallel_lift, m)?)?;
    m.add_function(wrap_pyfunction!(py_counterexample_lift, m)?)?;
    m.add_function(wrap_pyfunction!(py_theorem_check, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_names() {
        assert_eq!(
            parse_interpolation("cubic").unwrap(),
            GaugePhaseInterpolation::Cubic
        );
        assert_eq!(
            parse_interpolation("smoothstep").unwrap(),
            GaugePhaseInterpolation::SmoothStep
        );
        assert!(parse_interpolation("quartic").is_err());
    }

    #[test]
    fn matrix_rows_round_trip() {
        let rows = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -2.0)],
            vec![Complex64::new(0.0, 2.0), Complex64::new(-1.0, 0.0)],
        ];
        assert_eq!(to_matrix(&rows).unwrap().to_rows(), rows);
        assert!(to_matrix(&vec![vec![Complex64::new(1.0, 0.0)], vec![]]).is_err());
    }
}
