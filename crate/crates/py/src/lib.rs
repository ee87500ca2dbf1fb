//! Python bindings: special functions, kernel evaluation, solving, and
//! far-field extraction.  Complex values cross the boundary as Python
//! complex numbers; errors map to ValueError (input) or RuntimeError
//! (numerical failure).

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use relscat::config::RunConfig;
use relscat::farfield::{far_amplitude, log_spaced_radii, planewave_diff_scan, remainder_scan};
use relscat::kernel::g_radial;
use relscat::solver::{evaluate_offgrid, ScatteringField, TailParams};
use relscat::specfun::{h0_real, j0_real, n0_real};
use relscat::verify::fit_power_law;
use relscat::{Error, SignChoice};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NearSingular(_) | Error::NonConvergent(_) | Error::Linalg(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_sign(sign: &str) -> PyResult<SignChoice> {
    match sign {
        "plus" | "+" => Ok(SignChoice::Plus),
        "minus" | "-" => Ok(SignChoice::Minus),
        other => Err(PyValueError::new_err(format!(
            "sign must be 'plus' or 'minus', got {other:?}"
        ))),
    }
}

#[pyfunction]
fn j0(rho: f64) -> PyResult<f64> {
    Ok(j0_real(rho).map_err(to_py_err)?.0)
}

#[pyfunction]
fn n0(rho: f64) -> PyResult<f64> {
    Ok(n0_real(rho).map_err(to_py_err)?.0)
}

#[pyfunction]
fn h0(rho: f64) -> PyResult<f64> {
    Ok(h0_real(rho).map_err(to_py_err)?.0)
}

/// Boundary kernel g(lambda, r) for the given limiting sign.
#[pyfunction]
fn kernel_g(lambda: f64, r: f64, sign: &str) -> PyResult<Complex64> {
    let sign = parse_sign(sign)?;
    Ok(g_radial(lambda, r, sign).map_err(to_py_err)?.value)
}

/// Least-squares log-log slope of (r, value) samples inside [rmin, rmax].
/// Returns (exponent, r_squared, degenerate).
#[pyfunction]
fn power_law_slope(points: Vec<(f64, f64)>, rmin: f64, rmax: f64) -> PyResult<(f64, f64, bool)> {
    let fit = fit_power_law(&points, (rmin, rmax)).map_err(to_py_err)?;
    Ok((fit.exponent, fit.r_squared, fit.degenerate))
}

/// A solved generalized eigenfunction on its grid.
#[pyclass]
struct Field {
    inner: ScatteringField,
}

#[pymethods]
impl Field {
    #[getter]
    fn residual_norm(&self) -> f64 {
        self.inner.residual_norm
    }

    /// |k|, named to avoid the Python keyword `lambda`.
    #[getter]
    fn wavenumber(&self) -> f64 {
        self.inner.k.lambda
    }

    #[getter]
    fn branch(&self) -> &'static str {
        match self.inner.branch {
            SignChoice::Plus => "plus",
            SignChoice::Minus => "minus",
        }
    }

    /// Grid nodes as a list of (x, y).
    fn nodes(&self) -> Vec<(f64, f64)> {
        self.inner.grid.nodes.iter().map(|&[x, y]| (x, y)).collect()
    }

    /// Field samples at the grid nodes, row-major.
    fn values(&self) -> Vec<Complex64> {
        self.inner.values.clone()
    }

    /// Evaluate phi at an arbitrary point via the integral representation.
    fn value_at(&self, x: f64, y: f64) -> Complex64 {
        evaluate_offgrid(&self.inner, [x, y])
    }

    /// Far-field amplitude in the observation direction theta (radians).
    fn far_amplitude(&self, theta: f64) -> Complex64 {
        far_amplitude(&self.inner, [theta.cos(), theta.sin()])
    }

    /// |phi - phi0| along the ray theta at n log-spaced radii in [rmin, rmax].
    fn diff_scan(&self, theta: f64, rmin: f64, rmax: f64, n: usize) -> Vec<(f64, f64)> {
        let radii = log_spaced_radii(rmin, rmax, n);
        planewave_diff_scan(&self.inner, [theta.cos(), theta.sin()], &radii)
    }

    /// Far-field remainder |phi - phi0 - f e^{ib lambda r} / sqrt(r)| along a ray.
    fn remainder_scan(&self, theta: f64, rmin: f64, rmax: f64, n: usize) -> Vec<(f64, f64)> {
        let radii = log_spaced_radii(rmin, rmax, n);
        remainder_scan(&self.inner, [theta.cos(), theta.sin()], &radii)
    }

    /// Attach the Born tail cloud out to the given radius and return self.
    fn with_born_tail(mut slf: PyRefMut<'_, Self>, r_max: f64) -> PyResult<PyRefMut<'_, Self>> {
        if !(r_max > slf.inner.grid.half_width) {
            return Err(PyValueError::new_err("tail radius must exceed the grid half-width"));
        }
        let field = slf.inner.clone().with_born_tail(TailParams {
            r_max,
            ..TailParams::default()
        });
        slf.inner = field;
        Ok(slf)
    }
}

/// Solve the Lippmann-Schwinger system described by a JSON config string.
#[pyfunction]
fn solve(config_json: &str) -> PyResult<Field> {
    let config = RunConfig::from_json(config_json).map_err(to_py_err)?;
    Ok(Field {
        inner: config.solve().map_err(to_py_err)?,
    })
}

#[pymodule]
fn relscat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(j0, m)?)?;
    m.add_function(wrap_pyfunction!(n0, m)?)?;
    m.add_function(wrap_pyfunction!(h0, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_g, m)?)?;
    m.add_function(wrap_pyfunction!(power_law_slope, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_class::<Field>()?;
    Ok(())
}
