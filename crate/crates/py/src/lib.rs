//! Python bindings for `tsl-core`, importable as the `tsl` module.
//!
//! Matrices cross the boundary as lists of rows; symbols as [`PySymbol`].

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tsl_core::symbol::default_quad_points;
use tsl_core::{
    Builtin, DenseMatrix, DistributionOptions, HankelSign, MatrixFamily, MinresOptions, SpectrumMode, Symbol,
};

fn py_err(e: tsl_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<DenseMatrix> {
    DenseMatrix::from_rows(&rows).map_err(py_err)
}

/// Laurent polynomial symbol `f(theta) = sum_k a_k e^{ik theta}`.
#[pyclass(name = "Symbol", module = "tsl", frozen, skip_from_py_object)]
pub struct PySymbol {
    inner: Symbol,
}

#[pymethods]
impl PySymbol {
    /// Build from a `{k: a_k}` mapping; values may be real or complex.
    #[new]
    #[pyo3(signature = (coeffs, label = None))]
    fn new(coeffs: BTreeMap<i64, Complex64>, label: Option<String>) -> Self {
        let f = Symbol::new(coeffs);
        PySymbol { inner: match label { Some(l) => f.with_label(l), None => f } }
    }

    /// One of `bidiagonal`, `grcar`, `fourth_diff`, `cosine6`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(PySymbol { inner: tsl_core::builtin_symbol(name).map_err(py_err)? })
    }

    #[staticmethod]
    fn builtins() -> Vec<&'static str> {
        Builtin::ALL.iter().map(|b| b.name()).collect()
    }

    /// Parse the `k=value` / `k=re,im` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PySymbol { inner: Symbol::parse(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn coeffs(&self) -> BTreeMap<i64, Complex64> {
        self.inner.coeffs().collect()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn is_real_valued(&self) -> bool {
        self.inner.is_real_valued()
    }

    fn evaluate(&self, theta: f64) -> Complex64 {
        self.inner.evaluate(theta)
    }

    /// Multiply by `e^{i s theta}`.
    fn shift(&self, s: i64) -> Self {
        PySymbol { inner: self.inner.shift(s) }
    }

    fn __repr__(&self) -> String {
        format!("Symbol({})", self.inner)
    }
}

#[pyfunction]
fn toeplitz(f: &PySymbol, n: usize) -> PyResult<Vec<Vec<f64>>> {
    Ok(tsl_core::toeplitz(&f.inner, n).map_err(py_err)?.to_rows())
}

#[pyfunction]
fn flipped_toeplitz(f: &PySymbol, n: usize) -> PyResult<Vec<Vec<f64>>> {
    Ok(tsl_core::flipped_toeplitz(&f.inner, n).map_err(py_err)?.to_rows())
}

/// The anti-identity `Y_n`.
#[pyfunction]
fn flip(n: usize) -> PyResult<Vec<Vec<f64>>> {
    Ok(tsl_core::flip(n).map_err(py_err)?.to_rows())
}

/// `H_nu[f, +]` (sign `"+"`) or `H_nu[f, -]` (sign `"-"`).
#[pyfunction]
#[pyo3(signature = (f, nu, sign = "+"))]
fn hankel_block(f: &PySymbol, nu: usize, sign: &str) -> PyResult<Vec<Vec<f64>>> {
    let sign = match sign {
        "+" | "plus" => HankelSign::Plus,
        "-" | "minus" => HankelSign::Minus,
        other => return Err(PyValueError::new_err(format!("sign must be '+' or '-', got {other:?}"))),
    };
    Ok(tsl_core::hankel_block(&f.inner, nu, sign).map_err(py_err)?.to_rows())
}

/// Ascending eigenvalues of a symmetric matrix.
#[pyfunction]
fn sym_eig(a: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    Ok(tsl_core::sym_eig(&matrix(a)?).map_err(py_err)?.values)
}

/// Ascending singular values.
#[pyfunction]
fn singular_values(a: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    Ok(tsl_core::singular_values(&matrix(a)?).map_err(py_err)?.values)
}

/// `(n_plus, n_minus, n_zero)` with the automatic zero tolerance.
#[pyfunction]
fn inertia(a: Vec<Vec<f64>>) -> PyResult<(usize, usize, usize)> {
    let i = tsl_core::sym_eig(&matrix(a)?).map_err(py_err)?.inertia;
    Ok((i.plus, i.minus, i.zero))
}

/// Rows `(n, plus, minus, zero, diff)` for `Y_n T_n[f]`.
#[pyfunction]
fn inertia_asymptotics(f: &PySymbol, sizes: Vec<usize>) -> PyResult<Vec<(usize, usize, usize, usize, usize)>> {
    let table = tsl_core::inertia_asymptotics(&f.inner, &sizes).map_err(py_err)?;
    Ok(table.rows.iter().map(|r| (r.n, r.plus, r.minus, r.zero, r.diff)).collect())
}

#[pyfunction]
fn acs_split_check<'py>(py: Python<'py>, f: &PySymbol, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let s = tsl_core::acs_split_check(&f.inner, n).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("n", s.n)?;
    d.set_item("m", s.m)?;
    d.set_item("rank", s.rank_term_rank)?;
    d.set_item("flipped_rank", s.flipped_rank_term_rank)?;
    d.set_item("rank_bound", s.rank_bound)?;
    d.set_item("norm_term_norm", s.norm_term_norm)?;
    d.set_item("c_m", s.c_m)?;
    d.set_item("omega_m", s.omega_m)?;
    d.set_item("reconstruction_exact", s.reconstruction_exact)?;
    Ok(d)
}

/// `(Q, A)` with `Y_n C_n[p] = Q A`, `Q` symmetric orthogonal, `A = |C_n[p]|`.
#[pyfunction]
fn factorize_flip_circulant(f: &PySymbol, n: usize) -> PyResult<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let fac = tsl_core::factorize_flip_circulant(&f.inner, n).map_err(py_err)?;
    Ok((fac.q.to_rows(), fac.a.to_rows()))
}

/// Eigenvalues of `|C_n|^{-1} Y_n T_n[f]`.
#[pyfunction]
fn preconditioned_spectrum(f: &PySymbol, n: usize) -> PyResult<Vec<f64>> {
    Ok(tsl_core::preconditioned_spectrum(&f.inner, n).map_err(py_err)?.values)
}

/// Fraction of values farther than `radius` from every center.
#[pyfunction]
fn cluster_measure(values: Vec<f64>, centers: Vec<f64>, radius: f64) -> PyResult<f64> {
    tsl_core::cluster_measure(&values, &centers, radius).map_err(py_err)
}

/// MINRES on `Y_n T_n[f] x = Y_n b`; returns a dict with the solution and the report fields.
#[pyfunction]
#[pyo3(signature = (f, b, precondition = true, rtol = 1e-8, maxit = None, seed = 0))]
fn solve<'py>(
    py: Python<'py>,
    f: &PySymbol,
    b: Vec<f64>,
    precondition: bool,
    rtol: f64,
    maxit: Option<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let options = MinresOptions { rtol, maxit, seed, ..Default::default() };
    let out = tsl_core::solve_flipped_system(&f.inner, &b, precondition, &options).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("x", out.solution)?;
    d.set_item("iterations", out.report.iterations)?;
    d.set_item("converged", out.report.converged)?;
    d.set_item("breakdown", out.report.breakdown)?;
    d.set_item("residual_history", out.report.residual_history)?;
    d.set_item("true_relative_residual", out.report.true_relative_residual)?;
    Ok(d)
}

/// Rows `(n, test_function, empirical, analytic, residual)`.
#[pyfunction]
#[pyo3(signature = (f, sizes, family = "flipped_toeplitz", mode = "singular", quad_points = None))]
fn distribution_check(
    f: &PySymbol,
    sizes: Vec<usize>,
    family: &str,
    mode: &str,
    quad_points: Option<usize>,
) -> PyResult<Vec<(usize, String, f64, f64, f64)>> {
    let family: MatrixFamily = family.parse().map_err(py_err)?;
    let mode: SpectrumMode = mode.parse().map_err(py_err)?;
    let options = DistributionOptions { quad_points: quad_points.unwrap_or_else(default_quad_points), ..Default::default() };
    let check = tsl_core::distribution_check(&f.inner, family, &sizes, mode, &options).map_err(py_err)?;
    Ok(check
        .entries
        .into_iter()
        .map(|e| (e.n, e.test_function, e.empirical, e.analytic, e.residual))
        .collect())
}

#[pymodule]
#[pyo3(name = "tsl")]
fn tsl_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySymbol>()?;
    m.add_function(wrap_pyfunction!(toeplitz, m)?)?;
    m.add_function(wrap_pyfunction!(flipped_toeplitz, m)?)?;
    m.add_function(wrap_pyfunction!(flip, m)?)?;
    m.add_function(wrap_pyfunction!(hankel_block, m)?)?;
    m.add_function(wrap_pyfunction!(sym_eig, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    m.add_function(wrap_pyfunction!(inertia, m)?)?;
    m.add_function(wrap_pyfunction!(inertia_asymptotics, m)?)?;
    m.add_function(wrap_pyfunction!(acs_split_check, m)?)?;
    m.add_function(wrap_pyfunction!(factorize_flip_circulant, m)?)?;
    m.add_function(wrap_pyfunction!(preconditioned_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_measure, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(distribution_check, m)?)?;
    Ok(())
}
