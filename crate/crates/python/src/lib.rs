//! Python bindings: module `qcherenkov`.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qcherenkov::amplitude::{self, OracleOptions, TriangleSides};
use qcherenkov::beam::{self, QuadratureSpec};
use qcherenkov::dispersion::{self, DispersionModel};
use qcherenkov::kinematics::{self, CylindricalElectronState, Spin};
use qcherenkov::rates::{self, RateChannel, SpectrumTable};
use qcherenkov::{angles, scan, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Numerical(m) => PyRuntimeError::new_err(m),
        Error::Io(m) => PyOSError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn channel(name: &str) -> PyResult<RateChannel> {
    name.parse().map_err(|_| PyValueError::new_err(format!("unknown channel {name:?}")))
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

#[pyfunction]
fn energy_from_beta(beta: f64) -> PyResult<f64> {
    kinematics::energy_from_beta(beta).map_err(py_err)
}

#[pyfunction]
fn beta_from_energy(energy: f64) -> PyResult<f64> {
    kinematics::beta_from_energy(energy).map_err(py_err)
}

/// Conventional Cherenkov angle in rad, or None below threshold.
#[pyfunction]
fn conventional_angle(beta: f64, n: f64) -> Option<f64> {
    angles::conventional_angle(beta, n)
}

/// Recoil-corrected angle in rad, or None below threshold / beyond cutoff.
#[pyfunction]
fn quantum_angle(beta: f64, n: f64, hbar_omega: f64) -> Option<f64> {
    angles::quantum_angle(beta, n, hbar_omega)
}

#[pyfunction]
fn cutoff_energy(beta: f64, n: f64) -> PyResult<f64> {
    angles::cutoff_energy(beta, n).map_err(py_err)
}

/// (inner, outer, backward) for spread angle theta_i and cone angle theta_cr.
#[pyfunction]
fn double_cone(theta_i: f64, theta_cr: f64) -> (f64, f64, bool) {
    let c = angles::double_cone(theta_i, theta_cr);
    (c.inner, c.outer, c.backward)
}

#[pyfunction]
fn frank_tamm(beta: f64, n: f64) -> f64 {
    rates::frank_tamm(beta, n).gamma_omega
}

#[pyfunction]
fn rate_flip_azimuthal(e_i: f64, theta_i: f64, n: f64, hbar_omega: f64) -> PyResult<f64> {
    rates::rate_flip_azimuthal(e_i, theta_i, n, hbar_omega).map(|r| r.gamma_omega).map_err(py_err)
}

#[pyfunction]
fn rate_total(e_i: f64, n: f64, hbar_omega: f64) -> PyResult<f64> {
    rates::rate_total(e_i, n, hbar_omega).map(|r| r.gamma_omega).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (e_i, theta_i, n, channel_name = "total"))]
fn discontinuity_at_cutoff(e_i: f64, theta_i: f64, n: f64, channel_name: &str) -> PyResult<f64> {
    rates::discontinuity_at_cutoff(e_i, theta_i, n, channel(channel_name)?).map_err(py_err)
}

#[pyfunction]
fn bessel_j(order: i32, x: f64) -> f64 {
    qcherenkov::bessel::bessel_j(order, x)
}

/// Closed-form triple-Bessel integral: 0 outside the triangle, None on its divergent boundary.
#[pyfunction]
fn closed_form_amplitude(l_i: i32, l_f: i32, s_i: f64, s_f: f64, s_ph: f64) -> PyResult<Option<f64>> {
    let sides = TriangleSides::new(s_i, s_f, s_ph).map_err(py_err)?;
    Ok(amplitude::closed_form_amplitude(l_i, l_f, &sides).finite())
}

/// Tail-averaged quadrature of the same integral: (value, spread, reliable).
#[pyfunction]
fn oracle_triple_bessel(l_i: i32, l_f: i32, s_i: f64, s_f: f64, s_ph: f64) -> PyResult<(f64, f64, bool)> {
    let sides = TriangleSides::new(s_i, s_f, s_ph).map_err(py_err)?;
    let r = amplitude::oracle_triple_bessel(l_i, l_f, l_i - l_f, &sides, &OracleOptions::default()).map_err(py_err)?;
    Ok((r.value, r.spread, r.reliable))
}

/// Runs a JSON scan config and returns {"metadata": ..., "data": ...}.
#[pyfunction]
fn run_scan<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let cfg = scan::ScanConfig::from_json(config_json).map_err(py_err)?;
    let result = py.detach(|| scan::run_scan(&cfg)).map_err(py_err)?;
    let (_, text) = scan::render(&result, scan::OutputFormat::Json)
        .map_err(py_err)?
        .remove(0);
    json_to_py(py, &text)
}

#[pyclass(name = "Dispersion", frozen)]
struct PyDispersion {
    model: DispersionModel,
}

#[pymethods]
impl PyDispersion {
    #[staticmethod]
    fn constant(n: f64) -> PyResult<Self> {
        Ok(Self { model: DispersionModel::constant(n).map_err(py_err)? })
    }

    #[staticmethod]
    fn silica() -> Self {
        Self { model: DispersionModel::silica() }
    }

    #[staticmethod]
    fn table(points: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Self { model: DispersionModel::tabulated(points).map_err(py_err)? })
    }

    fn n_at(&self, lambda_nm: f64) -> PyResult<f64> {
        dispersion::n_at(&self.model, lambda_nm).map_err(py_err)
    }

    fn dispersion_cutoff(&self, beta: f64, lo: f64, hi: f64) -> PyResult<Option<f64>> {
        dispersion::dispersion_cutoff_wavelength(&self.model, beta, (lo, hi)).map_err(py_err)
    }

    fn quantum_cutoff(&self, beta: f64, lo: f64, hi: f64) -> PyResult<Option<f64>> {
        angles::quantum_cutoff_wavelength(&self.model, beta, (lo, hi)).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Dispersion({})", self.model.label())
    }
}

#[pyclass(name = "ElectronState", frozen)]
struct PyElectronState {
    inner: CylindricalElectronState,
}

#[pymethods]
impl PyElectronState {
    #[new]
    #[pyo3(signature = (energy, spread_angle, oam = 0, spin_up = true))]
    fn new(energy: f64, spread_angle: f64, oam: i32, spin_up: bool) -> PyResult<Self> {
        let spin = if spin_up { Spin::Up } else { Spin::Down };
        Ok(Self { inner: CylindricalElectronState::new(energy, spin, spread_angle, oam).map_err(py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (beta, spread_angle, oam = 0))]
    fn from_beta(beta: f64, spread_angle: f64, oam: i32) -> PyResult<Self> {
        Ok(Self { inner: CylindricalElectronState::from_beta(beta, Spin::Up, spread_angle, oam).map_err(py_err)? })
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy()
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }
    #[getter]
    fn spread_angle(&self) -> f64 {
        self.inner.spread_angle()
    }
    #[getter]
    fn oam(&self) -> i32 {
        self.inner.oam()
    }
    #[getter]
    fn p_z(&self) -> f64 {
        self.inner.p_z()
    }
    #[getter]
    fn p_r(&self) -> f64 {
        self.inner.p_r()
    }

    /// Amplitude map over (lambda, theta_ph) as a dict of flat row-major lists.
    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (dispersion, l_ph, lambda_range, theta_range, grid, spin_flip = false))]
    fn amplitude_map<'py>(
        &self,
        py: Python<'py>,
        dispersion: &PyDispersion,
        l_ph: i32,
        lambda_range: (f64, f64),
        theta_range: (f64, f64),
        grid: (usize, usize),
        spin_flip: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let req = amplitude::MapRequest {
            beam: self.inner,
            model: dispersion.model.clone(),
            channel: amplitude::ChannelSelection::new(
                l_ph,
                spin_flip,
                kinematics::Polarization::Azimuthal,
                amplitude::FlipSign::Plus,
            ),
            lambda_range,
            theta_range,
            grid,
        };
        let map = py.detach(|| amplitude::amplitude_map(&req)).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("lambdas", map.lambdas.clone())?;
        d.set_item("thetas", map.thetas.clone())?;
        d.set_item("amplitude", map.cells.iter().map(|c| c.amplitude).collect::<Vec<_>>())?;
        d.set_item("zone", map.cells.iter().map(|c| c.zone.as_str()).collect::<Vec<_>>())?;
        d.set_item("quantum_cutoff_nm", map.quantum_cutoff_nm)?;
        d.set_item("l_f", map.l_f)?;
        Ok(d)
    }
}

fn table_dict<'py>(py: Python<'py>, t: &SpectrumTable) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("lambda_nm", t.lambdas())?;
    d.set_item("frank_tamm", t.rows.iter().map(|r| r.frank_tamm).collect::<Vec<_>>())?;
    for &c in &t.channels {
        d.set_item(c.name(), t.column(c))?;
        if t.rows.iter().any(|r| !r.averaged.is_empty()) {
            d.set_item(format!("avg_{}", c.name()), t.averaged_column(c))?;
        }
    }
    Ok(d)
}

/// Bessel-beam spectrum as a dict of columns.
#[pyfunction]
fn spectrum_scan<'py>(
    py: Python<'py>,
    e_i: f64,
    theta_i: f64,
    dispersion: &PyDispersion,
    lambda_range: (f64, f64),
    n_points: usize,
    channels: Vec<String>,
) -> PyResult<Bound<'py, PyDict>> {
    let chans = channels.iter().map(|c| channel(c)).collect::<PyResult<Vec<_>>>()?;
    let t = py
        .detach(|| rates::spectrum_scan(e_i, theta_i, &dispersion.model, lambda_range, n_points, &chans))
        .map_err(py_err)?;
    table_dict(py, &t)
}

#[pyclass(name = "GaussianBeam", frozen)]
struct PyGaussianBeam {
    inner: beam::GaussianBeam,
}

#[pymethods]
impl PyGaussianBeam {
    #[new]
    #[pyo3(signature = (mean_energy, energy_sigma, theta_fwhm, n_theta = 32, n_energy = 32, span_sigmas = 4.0))]
    fn new(mean_energy: f64, energy_sigma: f64, theta_fwhm: f64, n_theta: usize, n_energy: usize, span_sigmas: f64) -> PyResult<Self> {
        let q = QuadratureSpec { n_theta, n_energy, span_sigmas };
        Ok(Self { inner: beam::GaussianBeam::new(mean_energy, energy_sigma, theta_fwhm, q).map_err(py_err)? })
    }

    fn average_rate(&self, channel_name: &str, n: f64, hbar_omega: f64) -> PyResult<f64> {
        beam::average_rate(channel(channel_name)?, &self.inner, n, hbar_omega)
            .map(|r| r.gamma_omega)
            .map_err(py_err)
    }

    fn spectrum<'py>(
        &self,
        py: Python<'py>,
        dispersion: &PyDispersion,
        lambda_range: (f64, f64),
        n_points: usize,
        channels: Vec<String>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let chans = channels.iter().map(|c| channel(c)).collect::<PyResult<Vec<_>>>()?;
        let t = py
            .detach(|| beam::averaged_spectrum_scan(&self.inner, &dispersion.model, lambda_range, n_points, &chans))
            .map_err(py_err)?;
        table_dict(py, &t)
    }
}

#[pymodule]
#[pyo3(name = "qcherenkov")]
fn qcherenkov_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ELECTRON_REST_ENERGY_EV", qcherenkov::constants::ELECTRON_REST_ENERGY_EV)?;
    m.add("HC_EV_NM", qcherenkov::constants::HC_EV_NM)?;
    m.add("FINE_STRUCTURE", qcherenkov::constants::FINE_STRUCTURE)?;
    m.add_function(wrap_pyfunction!(energy_from_beta, m)?)?;
    m.add_function(wrap_pyfunction!(beta_from_energy, m)?)?;
    m.add_function(wrap_pyfunction!(conventional_angle, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_angle, m)?)?;
    m.add_function(wrap_pyfunction!(cutoff_energy, m)?)?;
    m.add_function(wrap_pyfunction!(double_cone, m)?)?;
    m.add_function(wrap_pyfunction!(frank_tamm, m)?)?;
    m.add_function(wrap_pyfunction!(rate_flip_azimuthal, m)?)?;
    m.add_function(wrap_pyfunction!(rate_total, m)?)?;
    m.add_function(wrap_pyfunction!(discontinuity_at_cutoff, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_triple_bessel, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_scan, m)?)?;
    m.add_function(wrap_pyfunction!(run_scan, m)?)?;
    m.add_class::<PyDispersion>()?;
    m.add_class::<PyElectronState>()?;
    m.add_class::<PyGaussianBeam>()?;
    Ok(())
}
