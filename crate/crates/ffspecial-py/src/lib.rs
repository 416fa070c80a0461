//! Python bindings: JSON in, JSON out, plus a few direct helpers returning canonical strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ffspecial::canon::parse_series;
use ffspecial::config::JobConfig;
use ffspecial::harness;
use ffspecial::power_sums::q_poly_interpolate;
use ffspecial::report::TOOL_VERSION;
use ffspecial::selftest::{selftest as run_selftest, SelftestConfig};
use ffspecial::{Context, Error, FieldParams, Precision};

fn to_py(e: Error) -> PyErr {
    match e.exit_code() {
        2 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn context(p: u32, m: u32) -> PyResult<std::sync::Arc<Context>> {
    Context::new(FieldParams::new(p, 1, m), Precision::default()).map_err(to_py)
}

#[pyfunction]
fn version() -> &'static str {
    TOOL_VERSION
}

/// Runs a task from a JSON config string and returns the JSON report.
#[pyfunction]
fn run_task(config_json: &str) -> PyResult<String> {
    let cfg = JobConfig::from_json(config_json).map_err(to_py)?;
    Ok(harness::run(&cfg).to_json())
}

/// Runs the acceptance criteria (all, or the listed ids) and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (seed=0, floor=40, only=None))]
fn selftest(seed: u64, floor: i64, only: Option<Vec<u32>>) -> PyResult<String> {
    let rep = run_selftest(SelftestConfig { seed, v_floor: floor }, only.as_deref()).map_err(to_py)?;
    Ok(rep.to_json())
}

/// Canonical text of `Q_{U,N}` (times its denominator when that is not 1).
#[pyfunction]
#[pyo3(signature = (p, u, n, m=1))]
fn q_poly(p: u32, u: Vec<usize>, n: u32, m: u32) -> PyResult<String> {
    let k = context(p, m)?;
    let qp = q_poly_interpolate(&k, &u, n).map_err(to_py)?;
    Ok(qp.qtilde.to_string())
}

/// The power sum `S_d(U; N)` known to `floor` theta-digits.
#[pyfunction]
#[pyo3(signature = (p, u, n, d, floor=40, m=1))]
fn power_sum(p: u32, u: Vec<usize>, n: u32, d: u32, floor: i64, m: u32) -> PyResult<String> {
    let k = context(p, m)?;
    let qp = q_poly_interpolate(&k, &u, n).map_err(to_py)?;
    Ok(qp.power_sum(d, k.vnum(floor)).map_err(to_py)?.to_string())
}

/// Parses a series and prints it back in canonical form.
#[pyfunction]
#[pyo3(signature = (text, p, m=1))]
fn canonical_series(text: &str, p: u32, m: u32) -> PyResult<String> {
    let k = context(p, m)?;
    Ok(parse_series(&k, text).map_err(to_py)?.to_string())
}

#[pymodule]
fn ffspecial_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(version, m)?)?;
    m.add_function(wrap_pyfunction!(run_task, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add_function(wrap_pyfunction!(q_poly, m)?)?;
    m.add_function(wrap_pyfunction!(power_sum, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_series, m)?)?;
    Ok(())
}
