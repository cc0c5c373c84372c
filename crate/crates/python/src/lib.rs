//! Python bindings. Elements cross the boundary as display strings or JSON text.

use hallsym_core::hall_classical::{self as hc, HallBasis};
use hallsym_core::hall_cyclic as hn;
use hallsym_core::hall_engine::HallEngine;
use hallsym_core::partitions::{MultiPartition, Partition};
use hallsym_core::symfunc::{self as sf, Basis, SymFunc};
use hallsym_core::Error;
use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::BoundExceeded(_) => PyOverflowError::new_err(e.to_string()),
        Error::Parse(_) | Error::InvalidArgument(_) | Error::RankMismatch(..) | Error::WeightMismatch(..) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

/// Expand the basis element `from[lam]` in basis `to`, as JSON text.
#[pyfunction]
fn sym_convert(from: &str, to: &str, lam: &str) -> PyResult<String> {
    let (from, to): (Basis, Basis) = (parse(from)?, parse(to)?);
    let f = SymFunc::basis_element(from, parse(lam)?).convert(to).map_err(py_err)?;
    Ok(f.to_json().to_string())
}

/// The t-pairing of two basis elements, rendered in t.
#[pyfunction]
#[pyo3(signature = (basis, lam, mu, basis2=None, plain=false))]
fn sym_pair(basis: &str, lam: &str, mu: &str, basis2: Option<&str>, plain: bool) -> PyResult<String> {
    let b: Basis = parse(basis)?;
    let b2: Basis = match basis2 {
        Some(s) => parse(s)?,
        None => b,
    };
    let (f, g) = (SymFunc::basis_element(b, parse(lam)?), SymFunc::basis_element(b2, parse(mu)?));
    let r = if plain { sf::pairing(&f, &g) } else { sf::pairing_t(&f, &g) }.map_err(py_err)?;
    Ok(r.display_asc("t"))
}

/// The Hall polynomial `F^xi_{lam mu}` for the cyclic quiver with `n` vertices.
#[pyfunction]
#[pyo3(signature = (lam, mu, xi, n=1))]
fn hall_poly(lam: &str, mu: &str, xi: &str, n: usize) -> PyResult<String> {
    let f = if n == 1 {
        hc::hall_polynomial(&parse::<Partition>(lam)?, &parse(mu)?, &parse(xi)?)
    } else {
        let (a, b, x): (MultiPartition, MultiPartition, MultiPartition) = (parse(lam)?, parse(mu)?, parse(xi)?);
        HallEngine::shared(n).hall_polynomial(&a, &b, &x)
    };
    Ok(f.map_err(py_err)?.display_desc("T"))
}

/// Canonical basis element; for `n = 1` returns the u-form and the ũ-form.
#[pyfunction]
#[pyo3(signature = (lam, n=1))]
fn canonical(lam: &str, n: usize) -> PyResult<(String, String)> {
    if n == 1 {
        let b = hc::canonical_basis(&parse(lam)?).map_err(py_err)?;
        return Ok((b.display_in(HallBasis::U).map_err(py_err)?, b.display_in(HallBasis::Pbw).map_err(py_err)?));
    }
    let m: MultiPartition = parse(lam)?;
    if m.rank() != n {
        return Err(PyValueError::new_err(format!("{m} does not have {n} components")));
    }
    let b = hn::canonical_basis_n(&m).map_err(py_err)?;
    Ok((b.to_string(), b.display_pbw()))
}

/// Dual canonical basis element for `n >= 2`, as JSON text.
#[pyfunction]
fn dual_canonical(lam: &str) -> PyResult<String> {
    let b = hn::dual_canonical_basis_n(&parse(lam)?).map_err(py_err)?;
    Ok(b.to_json().to_string())
}

/// The central element `x_r` of the Hall algebra with `n` vertices.
#[pyfunction]
fn centre(n: usize, r: u32) -> PyResult<String> {
    if n == 0 || r == 0 {
        return Err(PyValueError::new_err("n and r must be positive"));
    }
    Ok(hn::central_x(n, r).to_string())
}

/// Conjecture report for `(lam, n)` as JSON text.
#[pyfunction]
fn conjecture(lam: &str, n: usize) -> PyResult<String> {
    Ok(hn::conjecture_report(&parse(lam)?, n).to_json().to_string())
}

/// Run one property suite; returns `(passed, report json)`.
#[pyfunction]
fn verify(suite: &str) -> PyResult<(bool, String)> {
    let r = hallsym_core::verify::run_suite(suite).map_err(py_err)?;
    Ok((r.passed(), r.to_json().to_string()))
}

/// Run the command line with `args` and return `(exit code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("hallsym".to_string()).chain(args);
    let code = hallsym_core::cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[pymodule]
fn hallsym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(sym_convert, m)?)?;
    m.add_function(wrap_pyfunction!(sym_pair, m)?)?;
    m.add_function(wrap_pyfunction!(hall_poly, m)?)?;
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(dual_canonical, m)?)?;
    m.add_function(wrap_pyfunction!(centre, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
