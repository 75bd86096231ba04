//! Python bindings. Rationals cross the boundary as `"p/q"` strings,
//! enclosures as `Interval` objects, verification reports as dicts.

use clap::ValueEnum;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use harmonic_bounds::approx::{self, ApproxMethod, Side, Theorem};
use harmonic_bounds::cli::{self, VerifyTarget};
use harmonic_bounds::enclosure::{self, Precision};
use harmonic_bounds::exact;

fn err(e: harmonic_bounds::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rational(s: &str) -> PyResult<exact::Rational> {
    s.parse().map_err(err)
}

fn precision(digits: u32) -> PyResult<Precision> {
    if digits == 0 {
        return Err(PyValueError::new_err("digits must be at least 1"));
    }
    Ok(Precision::digits(digits))
}

fn method(name: &str) -> PyResult<ApproxMethod> {
    name.parse().map_err(err)
}

fn theorem(name: &str) -> PyResult<Theorem> {
    name.parse().map_err(err)
}

fn side(s: Side) -> &'static str {
    match s {
        Side::Lower => "lower",
        Side::Upper => "upper",
    }
}

/// Exact rational number.
#[pyclass(frozen, eq, skip_from_py_object, module = "pyharmonic")]
#[derive(Clone, PartialEq)]
struct Rational {
    inner: exact::Rational,
}

#[pymethods]
impl Rational {
    /// Accepts `"p/q"`, integers and finite decimals such as `"1e-12"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Rational {
            inner: parse_rational(text)?,
        })
    }

    #[getter]
    fn numerator(&self) -> String {
        self.inner.numer().to_string()
    }

    #[getter]
    fn denominator(&self) -> String {
        self.inner.denom().to_string()
    }

    fn __float__(&self) -> f64 {
        self.inner.to_f64()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Rational('{}')", self.inner.to_ratio_string())
    }
}

/// Closed interval with exact rational endpoints.
#[pyclass(frozen, eq, skip_from_py_object, module = "pyharmonic")]
#[derive(Clone, PartialEq)]
struct Interval {
    inner: enclosure::Interval,
}

impl From<enclosure::Interval> for Interval {
    fn from(inner: enclosure::Interval) -> Self {
        Interval { inner }
    }
}

#[pymethods]
impl Interval {
    #[new]
    fn new(lo: &str, hi: &str) -> PyResult<Self> {
        let inner = enclosure::Interval::new(parse_rational(lo)?, parse_rational(hi)?).map_err(err)?;
        Ok(inner.into())
    }

    #[getter]
    fn lo(&self) -> Rational {
        Rational {
            inner: self.inner.lo().clone(),
        }
    }

    #[getter]
    fn hi(&self) -> Rational {
        Rational {
            inner: self.inner.hi().clone(),
        }
    }

    #[getter]
    fn width(&self) -> Rational {
        Rational {
            inner: self.inner.width(),
        }
    }

    fn contains(&self, x: &str) -> PyResult<bool> {
        Ok(self.inner.contains(&parse_rational(x)?))
    }

    fn encloses(&self, other: &Interval) -> bool {
        self.inner.encloses(&other.inner)
    }

    fn overlaps(&self, other: &Interval) -> bool {
        self.inner.overlaps(&other.inner)
    }

    /// Faithful decimal text with `digits` fractional digits.
    #[pyo3(signature = (digits=10))]
    fn render(&self, digits: u32) -> String {
        cli::render_decimal(&self.inner, digits)
    }

    fn __float__(&self) -> f64 {
        self.inner.midpoint().to_f64()
    }

    fn __repr__(&self) -> String {
        format!(
            "Interval('{}', '{}')",
            self.inner.lo().to_ratio_string(),
            self.inner.hi().to_ratio_string()
        )
    }
}

/// Set of reals denoted by a rendered decimal.
#[pyfunction]
fn parse_rendered(text: &str) -> PyResult<Interval> {
    cli::parse_rendered(text).map(Interval::from).map_err(err)
}

/// `H_n` as an exact rational.
#[pyfunction]
fn harmonic(n: u64) -> PyResult<Rational> {
    Ok(Rational {
        inner: exact::harmonic_exact(n).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (digits=20))]
fn euler_gamma(digits: u32) -> PyResult<Interval> {
    Ok(enclosure::gamma_enclosure(&precision(digits)?).into())
}

#[pyfunction]
#[pyo3(signature = (theorem_id, digits=20))]
fn sharp_constant(theorem_id: &str, digits: u32) -> PyResult<Interval> {
    Ok(approx::sharp_constant(theorem(theorem_id)?, &precision(digits)?).into())
}

/// Limit of the correction sequence for `method`.
#[pyfunction]
fn limit(method_name: &str) -> PyResult<Rational> {
    Ok(Rational {
        inner: method(method_name)?.limit(),
    })
}

#[pyfunction]
#[pyo3(signature = (method_name, n, digits=20))]
fn approx_value(method_name: &str, n: u64, digits: u32) -> PyResult<Interval> {
    approx::approx_value(n, method(method_name)?, &precision(digits)?)
        .map(Interval::from)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (method_name, n, digits=20))]
fn correction(method_name: &str, n: u64, digits: u32) -> PyResult<Interval> {
    approx::correction(method(method_name)?, n, &precision(digits)?)
        .map(Interval::from)
        .map_err(err)
}

/// `Lambda_x` at rational `x > 0`; half of `lambda_n` at integers.
#[pyfunction]
#[pyo3(signature = (x, digits=20))]
fn lambda_cont(x: &str, digits: u32) -> PyResult<Interval> {
    approx::lambda_cont(&parse_rational(x)?, &precision(digits)?)
        .map(Interval::from)
        .map_err(err)
}

/// `{"lower", "upper", "equality_at_one"}` bounding `T_n`.
#[pyfunction]
#[pyo3(signature = (theorem_id, n, digits=20))]
fn sharp_bounds<'py>(py: Python<'py>, theorem_id: &str, n: u64, digits: u32) -> PyResult<Bound<'py, PyDict>> {
    let b = approx::sharp_bounds(n, theorem(theorem_id)?, &precision(digits)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("lower", Interval::from(b.lower))?;
    d.set_item("upper", Interval::from(b.upper))?;
    d.set_item("equality_at_one", b.equality_at_one.map(side))?;
    Ok(d)
}

/// Runs a verification target and returns its report as a dict.
/// The GIL is released while the check runs.
#[pyfunction]
#[pyo3(signature = (target, n_max=1000, eps="1e-12"))]
fn verify<'py>(py: Python<'py>, target: &str, n_max: u64, eps: &str) -> PyResult<Bound<'py, PyAny>> {
    let target = VerifyTarget::from_str(target, true).map_err(PyValueError::new_err)?;
    let eps = parse_rational(eps)?;
    if !eps.is_positive() {
        return Err(PyValueError::new_err("eps must be positive"));
    }
    let report = py.detach(|| cli::cmd_verify(target, n_max, &eps)).map_err(err)?;
    let text = serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pymodule]
fn pyharmonic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Rational>()?;
    m.add_class::<Interval>()?;
    m.add_function(wrap_pyfunction!(parse_rendered, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(euler_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_constant, m)?)?;
    m.add_function(wrap_pyfunction!(limit, m)?)?;
    m.add_function(wrap_pyfunction!(approx_value, m)?)?;
    m.add_function(wrap_pyfunction!(correction, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_cont, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
