//! Python bindings for `ogmr`. Vectors cross the boundary as lists of floats.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use ogmr::engine::{self, Monitor, Restart, Status};
use ogmr::experiments::{self, Experiment, ExperimentSpec, SolverSpec};
use ogmr::oracles::{self, CompositeProblem, SmoothOracle};
use ogmr::schedules::Coefficients;
use ogmr::{analysis, schedules, Vector};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(err: ogmr::Error) -> PyErr {
    match err {
        ogmr::Error::Io(e) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_vec(x: &Vector) -> Vec<f64> {
    x.iter().copied().collect()
}

fn check_dim(x: Vec<f64>, dim: usize) -> PyResult<Vector> {
    if x.len() != dim {
        return Err(PyValueError::new_err(format!(
            "expected a vector of length {dim}, got {}",
            x.len()
        )));
    }
    Ok(Vector::from_vec(x))
}

/// A test problem. Smooth problems also accept the smooth methods.
#[pyclass(frozen)]
struct Problem {
    composite: CompositeProblem,
    smooth: Option<Arc<dyn SmoothOracle>>,
    q: Option<f64>,
    optimum: Option<f64>,
}

impl Problem {
    fn smooth(oracle: Arc<dyn SmoothOracle>, optimum: Option<f64>) -> Self {
        let q = oracle.strong_convexity().map(|mu| mu / oracle.lipschitz());
        Problem {
            composite: CompositeProblem::smooth_only(oracle.clone()),
            smooth: Some(oracle),
            q,
            optimum,
        }
    }

    fn composite(composite: CompositeProblem) -> Self {
        Problem {
            composite,
            smooth: None,
            q: None,
            optimum: None,
        }
    }
}

#[pymethods]
impl Problem {
    #[staticmethod]
    #[pyo3(signature = (d, q, seed=0))]
    fn quadratic(d: usize, q: f64, seed: u64) -> PyResult<Self> {
        let p = oracles::gen_quadratic(d, q, seed).map_err(py_err)?;
        let f_star = p.optimal_value();
        Ok(Problem::smooth(Arc::new(p), f_star))
    }

    /// The two-dimensional quadratic with `mu = 0`.
    #[staticmethod]
    fn case2() -> Self {
        Problem::smooth(Arc::new(oracles::fixed_quadratic_case2()), Some(0.0))
    }

    #[staticmethod]
    #[pyo3(signature = (m, d, eta, seed=0))]
    fn logsumexp(m: usize, d: usize, eta: f64, seed: u64) -> PyResult<Self> {
        let p = oracles::gen_logsumexp(m, d, eta, seed).map_err(py_err)?;
        Ok(Problem::smooth(Arc::new(p), None))
    }

    #[staticmethod]
    #[pyo3(signature = (m, d, s, tau, noise_var=0.1, seed=0))]
    fn lasso(m: usize, d: usize, s: usize, tau: f64, noise_var: f64, seed: u64) -> PyResult<Self> {
        let inst = oracles::gen_lasso(m, d, s, tau, noise_var, seed).map_err(py_err)?;
        Ok(Problem::composite(inst.problem))
    }

    #[staticmethod]
    #[pyo3(signature = (d, cond, p_scale=0.01, seed=0))]
    fn boxqp(d: usize, cond: f64, p_scale: f64, seed: u64) -> PyResult<Self> {
        let p = oracles::gen_boxqp_scaled(d, cond, p_scale, seed).map_err(py_err)?;
        Ok(Problem::composite(p))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.composite.dim()
    }

    #[getter]
    fn lipschitz(&self) -> f64 {
        self.composite.smooth.lipschitz()
    }

    /// `mu / L`, when the problem is strongly convex with known `mu`.
    #[getter]
    fn q(&self) -> Option<f64> {
        self.q
    }

    #[getter]
    fn is_smooth(&self) -> bool {
        self.smooth.is_some()
    }

    /// Closed-form optimum value, when available.
    #[getter]
    fn optimum(&self) -> Option<f64> {
        self.optimum.or(self.composite.reference)
    }

    /// `F(x) = f(x) + phi(x)`.
    fn objective(&self, x: Vec<f64>) -> PyResult<f64> {
        Ok(self.composite.objective(&check_dim(x, self.dim())?))
    }

    fn gradient(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(to_vec(&self.composite.smooth.gradient(&check_dim(x, self.dim())?)))
    }

    fn prox(&self, z: Vec<f64>, zeta: f64) -> PyResult<Vec<f64>> {
        Ok(to_vec(&self.composite.nonsmooth.prox(&check_dim(z, self.dim())?, zeta)))
    }

    /// Best objective value seen by a long restarted POGM run.
    #[pyo3(signature = (iters=5000))]
    fn reference_value(&self, iters: usize) -> PyResult<f64> {
        let x0 = Vector::zeros(self.dim());
        engine::reference_value(&self.composite, &x0, iters).map_err(py_err)
    }
}

#[pyclass(frozen)]
struct Trace {
    inner: engine::Trace,
}

#[pymethods]
impl Trace {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn status(&self) -> &'static str {
        match self.inner.status {
            Status::Converged => "converged",
            Status::MaxIters => "max_iters",
            Status::NonFinite => "non_finite",
        }
    }

    /// `"primary"` (`F(y_k)`) or `"secondary"` (`F(x_k)`).
    #[getter]
    fn monitor(&self) -> &'static str {
        match self.inner.monitor {
            Monitor::Primary => "primary",
            Monitor::Secondary => "secondary",
        }
    }

    #[getter]
    fn f_y(&self) -> Vec<f64> {
        self.inner.f_y()
    }

    #[getter]
    fn f_x(&self) -> Vec<f64> {
        self.inner.f_x()
    }

    #[getter]
    fn monitored(&self) -> Vec<f64> {
        self.inner.monitored()
    }

    #[getter]
    fn grad_norm(&self) -> Vec<f64> {
        self.inner.records.iter().map(|r| r.grad_norm).collect()
    }

    /// Record indices carrying a restart flag.
    #[getter]
    fn restarts(&self) -> Vec<usize> {
        self.inner.records.iter().filter(|r| r.restart).map(|r| r.k).collect()
    }

    #[getter]
    fn gd_gamma(&self) -> Vec<usize> {
        self.inner.records.iter().filter(|r| r.gd_gamma).map(|r| r.k).collect()
    }

    #[getter]
    fn sigma(&self) -> Vec<f64> {
        self.inner.records.iter().map(|r| r.sigma).collect()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
}

/// Runs a solver named with the CLI grammar `method[+fr|+gr|+fixed][@sigma_bar]`.
#[pyfunction]
#[pyo3(signature = (problem, solver, iters, x0=None, grad_tol=0.0, sigma_bar=engine::DEFAULT_SIGMA_BAR))]
fn solve(
    problem: &Problem,
    solver: &str,
    iters: usize,
    x0: Option<Vec<f64>>,
    grad_tol: f64,
    sigma_bar: f64,
) -> PyResult<Trace> {
    let spec = SolverSpec::parse(solver).map_err(py_err)?;
    let cfg = experiments::solver_config_for(&spec, iters, problem.q, None, sigma_bar)
        .map_err(py_err)?
        .with_grad_tol(grad_tol);
    let x0 = match x0 {
        Some(x) => check_dim(x, problem.dim())?,
        None => Vector::zeros(problem.dim()),
    };
    let inner = experiments::dispatch_solver(&spec, &cfg, &problem.composite, problem.smooth.as_deref(), &x0)
        .map_err(py_err)?;
    Ok(Trace { inner })
}

/// Runs an experiment family and returns its summary rows. `overrides`
/// takes the same keys as a config file.
#[pyfunction]
#[pyo3(signature = (name, out, overrides=None))]
fn run_experiment(
    name: &str,
    out: PathBuf,
    overrides: Option<HashMap<String, String>>,
) -> PyResult<Vec<HashMap<String, Py<PyAny>>>> {
    let exp: Experiment = name.parse().map_err(py_err)?;
    let mut spec = ExperimentSpec::defaults(exp);
    let mut pairs: Vec<_> = overrides.unwrap_or_default().into_iter().collect();
    pairs.sort();
    for (key, value) in &pairs {
        spec.set(key, value).map_err(py_err)?;
    }
    spec.out = out;
    let output = experiments::run_experiment(&spec).map_err(py_err)?;
    Python::attach(|py| {
        output
            .rows
            .into_iter()
            .map(|row| {
                let mut map: HashMap<String, Py<PyAny>> = HashMap::new();
                map.insert("problem".into(), row.problem.into_pyobject(py)?.into_any().unbind());
                map.insert("solver".into(), row.solver.into_pyobject(py)?.into_any().unbind());
                map.insert("records".into(), row.records.into_pyobject(py)?.into_any().unbind());
                map.insert("restarts".into(), row.restarts.into_pyobject(py)?.into_any().unbind());
                map.insert(
                    "iters_to_tol".into(),
                    row.iters_to_tol.into_pyobject(py)?.into_any().unbind(),
                );
                map.insert(
                    "final_rel_gap".into(),
                    row.final_rel_gap.into_pyobject(py)?.into_any().unbind(),
                );
                Ok(map)
            })
            .collect()
    })
}

/// `(beta, gamma, rho)` of the tuned constant-coefficient method.
#[pyfunction]
fn ogm_q_coeffs(q: f64) -> PyResult<(f64, f64, f64)> {
    let c = analysis::ogm_q_coeffs(q).map_err(py_err)?;
    Ok((c.beta, c.gamma, c.rho))
}

/// Both roots as `(re, im)` pairs.
#[pyfunction]
fn char_roots(alpha: f64, beta: f64, gamma: f64, lam: f64) -> ((f64, f64), (f64, f64)) {
    let (r1, r2) = analysis::char_roots(alpha, beta, gamma, lam);
    ((r1.re, r1.im), (r2.re, r2.im))
}

#[pyfunction]
fn rho_t_lambda(alpha: f64, beta: f64, gamma: f64, lam: f64) -> f64 {
    analysis::rho_t_lambda(alpha, beta, gamma, lam)
}

/// `(lambda, rho)` samples on `[q, 1]`.
#[pyfunction]
#[pyo3(signature = (q, alpha, beta, gamma, n=201))]
fn rho_curve(q: f64, alpha: f64, beta: f64, gamma: f64, n: usize) -> PyResult<Vec<(f64, f64)>> {
    let pts = analysis::rho_curve(q, Coefficients::new(alpha, beta, gamma), n).map_err(py_err)?;
    Ok(pts.into_iter().map(|p| (p.lambda, p.rho)).collect())
}

type Table3Tuple = (&'static str, f64, f64, f64, f64);

/// Rows `(method, alpha, beta, gamma, rho)` for the four tuned methods.
#[pyfunction]
fn table3(q: f64) -> PyResult<Vec<Table3Tuple>> {
    let rows = analysis::table3_summary(q).map_err(py_err)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.method, r.alpha, r.beta, r.gamma, r.rho))
        .collect())
}

#[pyfunction]
fn k_fixed(q: f64) -> PyResult<f64> {
    engine::k_fixed(q).map_err(py_err)
}

#[pyfunction]
fn fixed_restart_interval(q: f64) -> PyResult<usize> {
    engine::fixed_restart_interval(q).map_err(py_err)
}

#[pyfunction]
fn t_next(t: f64) -> f64 {
    schedules::t_next(t)
}

#[pyfunction]
fn soft_threshold(z: Vec<f64>, thresh: f64) -> Vec<f64> {
    to_vec(&oracles::soft_threshold(&Vector::from_vec(z), thresh))
}

#[pyfunction]
fn box_projection(z: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> PyResult<Vec<f64>> {
    let p = oracles::box_projection(&Vector::from_vec(z), &Vector::from_vec(lower), &Vector::from_vec(upper))
        .map_err(py_err)?;
    Ok(to_vec(&p))
}

#[pyfunction]
fn parse_restart(name: &str) -> PyResult<&'static str> {
    Ok(match experiments::parse_restart(name).map_err(py_err)? {
        Restart::None => "none",
        Restart::Function => "function",
        Restart::Gradient => "gradient",
    })
}

#[pymodule]
fn ogmr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<Trace>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(ogm_q_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(char_roots, m)?)?;
    m.add_function(wrap_pyfunction!(rho_t_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(rho_curve, m)?)?;
    m.add_function(wrap_pyfunction!(table3, m)?)?;
    m.add_function(wrap_pyfunction!(k_fixed, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_restart_interval, m)?)?;
    m.add_function(wrap_pyfunction!(t_next, m)?)?;
    m.add_function(wrap_pyfunction!(soft_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(box_projection, m)?)?;
    m.add_function(wrap_pyfunction!(parse_restart, m)?)?;
    m.add("DEFAULT_SIGMA_BAR", engine::DEFAULT_SIGMA_BAR)?;
    Ok(())
}
