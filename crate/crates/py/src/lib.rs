//! Python bindings: domains, exact and mollified counts, Fourier transforms
//! of the indicator, differencing helpers and the experiment runner.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use latdisc::experiments::{fit_exponent, run_mode, ExperimentConfig};
use latdisc::{counting, expsum, fourier, poisson, DomainSpec, Error, RotatedDomain, Superellipse, Vec2};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::OutOfRange(_) | Error::Parse(_) | Error::Usage(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn vec2(v: (f64, f64)) -> Vec2 {
    Vec2::new(v.0, v.1)
}

/// Exact count of `tB_θ ∩ ℤ²`.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct CountResult {
    t: f64,
    count: u64,
    area_term: f64,
    remainder: f64,
    ambiguous: bool,
}

impl From<counting::CountResult> for CountResult {
    fn from(r: counting::CountResult) -> Self {
        Self {
            t: r.t,
            count: r.count,
            area_term: r.area_term,
            remainder: r.remainder,
            ambiguous: r.ambiguous,
        }
    }
}

#[pymethods]
impl CountResult {
    fn __repr__(&self) -> String {
        format!(
            "CountResult(t={}, count={}, remainder={}, ambiguous={})",
            self.t, self.count, self.remainder, self.ambiguous
        )
    }
}

/// Rotated superellipse `{|x₁/a|^ω + |x₂/b|^ω ≤ 1}` turned by `theta`.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Domain {
    inner: RotatedDomain,
}

#[pymethods]
impl Domain {
    #[new]
    #[pyo3(signature = (omega, a=1.0, b=1.0, theta=0.0))]
    fn new(omega: u32, a: f64, b: f64, theta: f64) -> PyResult<Self> {
        let base = Superellipse::new(omega, a, b).map_err(to_py)?;
        Ok(Self {
            inner: RotatedDomain::new(base, theta),
        })
    }

    /// Parses `"superellipse:omega=4,a=1,b=1,theta=0.73"`.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        let s: DomainSpec = spec.parse().map_err(to_py)?;
        Ok(Self {
            inner: s.domain().map_err(to_py)?,
        })
    }

    #[getter]
    fn omega(&self) -> u32 {
        self.inner.omega()
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta()
    }

    fn area(&self) -> f64 {
        self.inner.base().area()
    }

    fn perimeter(&self) -> f64 {
        self.inner.base().perimeter()
    }

    fn curvature(&self, xi: (f64, f64)) -> PyResult<f64> {
        self.inner.curvature(vec2(xi)).map_err(to_py)
    }

    fn support(&self, xi: (f64, f64)) -> PyResult<f64> {
        self.inner.support(vec2(xi)).map_err(to_py)
    }

    /// Eigenvalues of the finite-difference Hessian of the support function.
    fn support_hessian_eigenvalues(&self, xi: (f64, f64)) -> PyResult<(f64, f64)> {
        let h = self.inner.support_hessian(vec2(xi), None, 0.0).map_err(to_py)?;
        let [a, b] = h.eigenvalues();
        Ok((a, b))
    }

    /// Unit outer normals at the flat points.
    fn flat_normals(&self) -> Vec<(f64, f64)> {
        self.inner
            .flat_points()
            .iter()
            .map(|f| (f.normal.x, f.normal.y))
            .collect()
    }

    fn count_exact(&self, t: f64) -> PyResult<CountResult> {
        counting::count_exact(&self.inner, t).map(Into::into).map_err(to_py)
    }

    fn count_brute(&self, t: f64) -> PyResult<CountResult> {
        counting::count_brute(&self.inner, t).map(Into::into).map_err(to_py)
    }

    /// `χ̂(λξ)` by boundary quadrature.
    fn ft_numeric(&self, xi: (f64, f64), lam: f64) -> PyResult<Complex64> {
        fourier::ft_numeric(&self.inner, vec2(xi), lam).map_err(to_py)
    }

    /// Two-point stationary-phase approximation of `χ̂(λξ)`.
    fn ft_asymptotic(&self, xi: (f64, f64), lam: f64) -> PyResult<Complex64> {
        fourier::ft_asymptotic(&self.inner, vec2(xi), lam)
            .map(|a| a.value)
            .map_err(to_py)
    }

    /// Log-log slope of the flat-point profile and its standard error.
    #[pyo3(signature = (n_angles=12))]
    fn randol_slope(&self, n_angles: usize) -> PyResult<(f64, f64)> {
        let f = fourier::randol_slope(&self.inner, n_angles).map_err(to_py)?;
        Ok((f.slope, f.slope_se))
    }

    /// Mollified count `(value, k_max, tail_bound)`.
    fn mollified_count(&self, t: f64, epsilon: f64) -> PyResult<(f64, usize, f64)> {
        let c = poisson::mollified_count(&self.inner, t, epsilon).map_err(to_py)?;
        Ok((c.value, c.k_max, c.tail_bound))
    }

    /// `(lower, count, upper, holds)` of the smoothed bracketing chain.
    fn sandwich(&self, t: f64, epsilon: f64) -> PyResult<(f64, u64, f64, bool)> {
        let (r, _) = poisson::sandwich_report(&self.inner, t, epsilon).map_err(to_py)?;
        Ok((r.lower, r.count_exact, r.upper, r.holds))
    }

    /// `h_q(y, v₁, v₂)` from exact Taylor coefficients.
    fn hq_determinant(&self, y: (f64, f64), v1: (f64, f64), v2: (f64, f64), q: usize) -> PyResult<f64> {
        expsum::hq_determinant(&self.inner, vec2(y), vec2(v1), vec2(v2), q).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let (a, b) = self.inner.base().semi_axes();
        format!(
            "Domain(omega={}, a={a}, b={b}, theta={})",
            self.inner.omega(),
            self.inner.theta()
        )
    }
}

/// `(v1, v2, L)` for direction `xi`.
#[pyfunction]
#[pyo3(signature = (xi, q, k, n=None))]
fn construct_vstar(xi: (f64, f64), q: u32, k: f64, n: Option<i64>) -> PyResult<((i64, i64), (i64, i64), i128)> {
    let v = expsum::construct_vstar(vec2(xi), q, k, n).map_err(to_py)?;
    Ok((v.v1, v.v2, v.l))
}

/// Slope and standard error of a least-squares fit to `(log t, log sup)` pairs.
#[pyfunction]
#[pyo3(name = "fit_exponent")]
fn fit_exponent_py(pairs: Vec<(f64, f64)>) -> PyResult<(f64, f64)> {
    let f = fit_exponent(&pairs).map_err(to_py)?;
    Ok((f.slope, f.slope_se))
}

/// Runs an experiment described by `key = value` lines; returns `(csv, passed)`.
#[pyfunction]
fn run_experiment(config: &str) -> PyResult<(String, bool)> {
    let mut c = ExperimentConfig::default();
    c.apply_config_text(config).map_err(to_py)?;
    let out = run_mode(&c).map_err(to_py)?;
    Ok((out.csv, out.passed))
}

#[pymodule]
fn latdisc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Domain>()?;
    m.add_class::<CountResult>()?;
    m.add_function(wrap_pyfunction!(construct_vstar, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponent_py, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add("__version__", latdisc::VERSION)?;
    Ok(())
}
