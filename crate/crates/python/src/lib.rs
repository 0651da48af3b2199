use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use kicktop::classical::{stroboscopic_map as strobe, ClassicalPoint};
use kicktop::{DenseOperator, EntropyKind, FloquetSpec, KappaClass, SpinParams, StateVector};

fn to_py(e: kicktop::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spin(j: f64) -> PyResult<SpinParams> {
    SpinParams::new(j).map_err(to_py)
}

fn state(amps: Vec<Complex64>) -> PyResult<StateVector> {
    StateVector::normalized(amps).map_err(to_py)
}

/// Floquet operator of the kicked top.
#[pyclass(name = "Floquet", frozen)]
struct PyFloquet {
    spec: FloquetSpec,
    u: DenseOperator,
}

#[pymethods]
impl PyFloquet {
    #[new]
    #[pyo3(signature = (j, kappa=None, kappa_class=None, p=std::f64::consts::FRAC_PI_2))]
    fn new(j: f64, kappa: Option<f64>, kappa_class: Option<&str>, p: f64) -> PyResult<Self> {
        let s = spin(j)?;
        let kappa = match (kappa, kappa_class) {
            (Some(k), None) => k,
            (None, Some(c)) => c.parse::<KappaClass>().map_err(to_py)?.kappa(s),
            _ => {
                return Err(PyValueError::new_err(
                    "give exactly one of kappa, kappa_class",
                ))
            }
        };
        let spec = FloquetSpec::new(s, kappa).with_p(p);
        Ok(Self {
            u: kicktop::build_floquet(&spec),
            spec,
        })
    }

    #[getter]
    fn j(&self) -> f64 {
        self.spec.spin.j()
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.spec.kappa
    }

    #[getter]
    fn dim(&self) -> usize {
        self.u.dim()
    }

    /// Row-major nested lists.
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        (0..self.u.dim()).map(|r| self.u.row(r).to_vec()).collect()
    }

    /// `(period, phase, error_series)`; period and phase are None without recurrence.
    #[pyo3(signature = (n_max=500, tol=kicktop::DEFAULT_TOLERANCE))]
    fn detect_period(&self, n_max: usize, tol: f64) -> (Option<usize>, Option<f64>, Vec<f64>) {
        let r = kicktop::detect_period(&self.u, n_max, tol);
        (r.period, r.phase, r.error_series)
    }

    fn identity_error_of_power(&self, n: u64) -> f64 {
        kicktop::identity_error(&kicktop::matrix_power(&self.u, n))
    }

    /// States after 0..=n kicks.
    fn evolve(&self, amps: Vec<Complex64>, n: usize) -> PyResult<Vec<Vec<Complex64>>> {
        let traj = kicktop::apply_kicks(&self.u, &state(amps)?, n).map_err(to_py)?;
        Ok(traj.into_iter().map(|s| s.amplitudes().to_vec()).collect())
    }

    #[pyo3(signature = (amps, n, kind="vn"))]
    fn entropy_series(&self, amps: Vec<Complex64>, n: usize, kind: &str) -> PyResult<Vec<f64>> {
        let kind: EntropyKind = kind.parse().map_err(to_py)?;
        kicktop::observables::entropy_series(&self.u, &state(amps)?, n, kind).map_err(to_py)
    }
}

#[pyfunction]
fn coherent_state(j: f64, theta: f64, phi: f64) -> PyResult<Vec<Complex64>> {
    let psi = kicktop::coherent_state(spin(j)?, kicktop::CoherentParams::new(theta, phi));
    Ok(psi.amplitudes().to_vec())
}

#[pyfunction]
#[pyo3(signature = (amps, kind="vn"))]
fn entropy(amps: Vec<Complex64>, kind: &str) -> PyResult<f64> {
    let kind: EntropyKind = kind.parse().map_err(to_py)?;
    kind.of(&state(amps)?).map_err(to_py)
}

type HusimiGrid = (Vec<f64>, Vec<f64>, Vec<f64>, f64);
type TableEntry = (f64, String, Option<usize>, Option<usize>);

/// `(thetas, phis, values, normalization)` with values row-major in theta.
#[pyfunction]
fn husimi(amps: Vec<Complex64>, theta_count: usize, phi_count: usize) -> PyResult<HusimiGrid> {
    let q = kicktop::husimi(&state(amps)?, theta_count, phi_count).map_err(to_py)?;
    let norm = q.normalization();
    Ok((q.thetas, q.phis, q.values, norm))
}

#[pyfunction]
fn dogra_linear_entropy(n: u64, kappa: f64) -> PyResult<f64> {
    kicktop::dogra_linear_entropy(n, kappa).map_err(to_py)
}

#[pyfunction]
fn classical_step(point: (f64, f64, f64), kappa: f64) -> (f64, f64, f64) {
    let q = kicktop::classical_step(ClassicalPoint::new(point.0, point.1, point.2), kappa);
    (q.x, q.y, q.z)
}

/// One `(theta, phi)` list per initial point given as angles.
#[pyfunction]
fn stroboscopic_map(
    initials: Vec<(f64, f64)>,
    kappa: f64,
    kicks: usize,
) -> PyResult<Vec<Vec<(f64, f64)>>> {
    let pts: Vec<ClassicalPoint> = initials
        .iter()
        .map(|&(t, p)| ClassicalPoint::from_angles(t, p))
        .collect();
    strobe(&pts, kappa, kicks).map_err(to_py)
}

/// `(j, kappa_class, period, expected)` for every spin in `[j_min, j_max]`.
#[pyfunction]
#[pyo3(signature = (j_min, j_max, n_max=500, tol=kicktop::DEFAULT_TOLERANCE))]
fn period_table(j_min: f64, j_max: f64, n_max: usize, tol: f64) -> PyResult<Vec<TableEntry>> {
    let spins = SpinParams::range(j_min, j_max).map_err(to_py)?;
    Ok(kicktop::recurrence::compute_table(&spins, n_max, tol)
        .into_iter()
        .map(|r| (r.j, r.kappa_class.to_string(), r.period, r.expected))
        .collect())
}

/// `(name, j, max_deviation, pass)` for every identity check entry.
#[pyfunction]
#[pyo3(signature = (j_max, tol=kicktop::DEFAULT_TOLERANCE))]
fn verify_identities(j_max: f64, tol: f64) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let checks = kicktop::verify::run_all(j_max, tol).map_err(to_py)?;
    Ok(kicktop::verify::report_entries(&checks)
        .into_iter()
        .map(|e| (e.name, e.j, e.max_deviation, e.pass))
        .collect())
}

#[pymodule]
fn kicktop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFloquet>()?;
    m.add_function(wrap_pyfunction!(coherent_state, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(husimi, m)?)?;
    m.add_function(wrap_pyfunction!(dogra_linear_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(classical_step, m)?)?;
    m.add_function(wrap_pyfunction!(stroboscopic_map, m)?)?;
    m.add_function(wrap_pyfunction!(period_table, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identities, m)?)?;
    Ok(())
}
