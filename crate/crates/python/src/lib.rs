//! Python bindings: models, analytic levels, numeric spectra and the
//! verification summary.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pseudospec_core::analytic::{self, Picture};
use pseudospec_core::params::{check_constraints, SwansonParams};
use pseudospec_core::superpotential::Superpotential;
use pseudospec_core::tables::{audit_tables, CellStatus};
use pseudospec_core::verify::{run_full_verification, Model, Tolerances};
use pseudospec_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidSuperpotential(_)
        | Error::SingularGauge
        | Error::ComplexFrequency
        | Error::NoBoundStates(_)
        | Error::Constraint(_)
        | Error::Domain { .. }
        | Error::Grid(_)
        | Error::LevelOutOfRange { .. }
        | Error::FamilyMismatch { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// (n, ε, E, valid, marginal).
type LevelTuple = (usize, f64, f64, bool, bool);

/// Superpotential W of one family.
#[pyclass(name = "Superpotential", frozen)]
struct PySuperpotential(Superpotential);

#[pymethods]
impl PySuperpotential {
    /// W = −A1 cot x − B1/A1 on (0, π).
    #[staticmethod]
    fn rm1(a1: f64, b1: f64) -> PyResult<Self> {
        Superpotential::rm1(a1, b1).map(Self).map_err(py_err)
    }

    /// W = A2 tanh x + B2/A2 on the real line.
    #[staticmethod]
    fn rm2(a2: f64, b2: f64) -> PyResult<Self> {
        Superpotential::rm2(a2, b2).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn harmonic() -> Self {
        Self(Superpotential::Harmonic)
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.0.family().name()
    }

    fn w(&self, x: f64) -> PyResult<f64> {
        self.0.eval_w(x).map_err(py_err)
    }

    fn w_prime(&self, x: f64) -> PyResult<f64> {
        self.0.eval_w_prime(x).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// A Swanson model: (α, β) together with a superpotential.
#[pyclass(name = "Model", frozen)]
struct PyModel(Model);

#[pymethods]
impl PyModel {
    #[new]
    fn new(alpha: f64, beta: f64, superpotential: &PySuperpotential) -> PyResult<Self> {
        Model::new(SwansonParams::new(alpha, beta), superpotential.0).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn table1_row1() -> Self {
        Self(Model::table1_row1())
    }

    #[staticmethod]
    fn table2_row1() -> Self {
        Self(Model::table2_row1())
    }

    #[staticmethod]
    fn harmonic_swanson() -> Self {
        Self(Model::harmonic_swanson())
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.0.family().name()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.params.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.params.beta
    }

    /// Derived transformation and partner-potential parameters.
    fn derived<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = &self.0.derived;
        let out = PyDict::new(py);
        for (k, v) in [
            ("mu", d.mu),
            ("mu1", d.mu1),
            ("mu2", d.mu2),
            ("strength", d.strength),
            ("cap_a", d.cap_a),
            ("cap_b", d.cap_b),
            ("scale", d.scale),
            ("coupling", d.coupling),
            ("offset", d.offset),
        ] {
            out.set_item(k, v)?;
        }
        Ok(out)
    }

    /// Constraint name to pass flag.
    fn constraints<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        for (c, ok) in check_constraints(&self.0.params, &self.0.superpotential).0 {
            out.set_item(c.name(), ok)?;
        }
        Ok(out)
    }

    fn admissible(&self) -> bool {
        self.0.derived.admissible()
    }

    /// The first `count` levels.
    fn levels(&self, count: usize) -> PyResult<Vec<LevelTuple>> {
        let recs = analytic::levels(&self.0.derived, count).map_err(py_err)?;
        Ok(recs.iter().map(|r| (r.n, r.eps, r.energy, r.valid, r.marginal)).collect())
    }

    /// Lowest `k` eigenvalues of the discretized partner Hamiltonian.
    #[pyo3(signature = (n_interior, k, half_width=None))]
    fn numeric_spectrum(&self, py: Python<'_>, n_interior: usize, k: usize, half_width: Option<f64>) -> PyResult<Vec<f64>> {
        let m = &self.0;
        py.detach(|| {
            let g = m.grid(n_interior, half_width)?;
            Ok(m.numeric_spectrum(&g, k)?.eigenvalues)
        })
        .map_err(py_err)
    }

    /// Grid nodes and the normalized analytic eigenfunction of level n.
    #[pyo3(signature = (n, n_interior, half_width=None, hermitian=false))]
    fn wavefunction(&self, n: usize, n_interior: usize, half_width: Option<f64>, hermitian: bool) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let g = self.0.grid(n_interior, half_width).map_err(py_err)?;
        let picture = if hermitian { Picture::Hermitian } else { Picture::NonHermitian };
        let v = self.0.wavefunction(n, picture, &g).map_err(py_err)?;
        Ok((g.nodes(), v))
    }

    /// Verification summary: all_pass, pass flags and residuals.
    #[pyo3(signature = (n_interior, levels=5, half_width=None))]
    fn verify<'py>(&self, py: Python<'py>, n_interior: usize, levels: usize, half_width: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let m = &self.0;
        let report = py
            .detach(|| {
                let g = m.grid(n_interior, half_width)?;
                run_full_verification(m, &g, levels, &Tolerances::default())
            })
            .map_err(py_err)?;
        let out = PyDict::new(py);
        out.set_item("all_pass", report.all_pass)?;
        out.set_item("hermitian_limit", report.hermitian_limit)?;
        out.set_item("pass", report.pass)?;
        out.set_item("residuals", report.residuals)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Model(alpha={}, beta={}, {:?})", self.0.params.alpha, self.0.params.beta, self.0.superpotential)
    }
}

/// (table, row, column, printed, formula, match) for every audited cell.
#[pyfunction]
fn table_audit() -> Vec<(usize, usize, &'static str, String, String, bool)> {
    audit_tables()
        .cells
        .into_iter()
        .map(|c| (c.table, c.row, c.column, c.printed, c.formula, c.status == CellStatus::Match))
        .collect()
}

/// Physicists' Hermite polynomial.
#[pyfunction]
fn hermite(n: usize, x: f64) -> f64 {
    pseudospec_core::specfun::hermite(n, x)
}

#[pymodule]
fn pseudospec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySuperpotential>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(table_audit, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    Ok(())
}
