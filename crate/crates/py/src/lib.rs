//! Python bindings. Vectors cross the boundary as plain lists/tuples of floats;
//! units follow the Rust API (km, km/s, s).

use nalgebra::Vector3;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use rpod_core::campaign::{self, CampaignConfig as CoreConfig, ManeuverKind, TruthModel};
use rpod_core::dynamics::{self, StepControl, MU_EARTH};
use rpod_core::guidance::{self, ImpulseRecord as CoreImpulse, Waypoint as CoreWaypoint};
use rpod_core::{frames, RpodError};

create_exception!(rpod, RpodException, PyException, "Error raised by the rpod core.");

fn err(e: RpodError) -> PyErr {
    RpodException::new_err(e.to_string())
}

fn vec3(v: Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

#[pyclass(name = "InertialState", module = "rpod", from_py_object)]
#[derive(Clone)]
struct PyInertial(frames::InertialState);

#[pymethods]
impl PyInertial {
    #[new]
    fn new(epoch: f64, position: [f64; 3], velocity: [f64; 3]) -> Self {
        PyInertial(frames::InertialState::new(epoch, Vector3::from(position), Vector3::from(velocity)))
    }

    #[getter]
    fn epoch(&self) -> f64 {
        self.0.epoch
    }

    #[getter]
    fn position(&self) -> [f64; 3] {
        vec3(self.0.position)
    }

    #[getter]
    fn velocity(&self) -> [f64; 3] {
        vec3(self.0.velocity)
    }

    #[pyo3(signature = (mu = MU_EARTH))]
    fn specific_energy(&self, mu: f64) -> f64 {
        self.0.specific_energy(mu)
    }

    fn angular_momentum(&self) -> [f64; 3] {
        vec3(self.0.angular_momentum())
    }

    fn __repr__(&self) -> String {
        format!(
            "InertialState(epoch={}, position={:?}, velocity={:?})",
            self.0.epoch,
            self.position(),
            self.velocity()
        )
    }
}

#[pyclass(name = "RelativeState", module = "rpod", from_py_object)]
#[derive(Clone)]
struct PyRelative(frames::RelativeState);

#[pymethods]
impl PyRelative {
    #[new]
    #[pyo3(signature = (x, y, z = 0.0, vx = 0.0, vy = 0.0, vz = 0.0))]
    fn new(x: f64, y: f64, z: f64, vx: f64, vy: f64, vz: f64) -> Self {
        PyRelative(frames::RelativeState::new(x, y, z, vx, vy, vz))
    }

    #[getter]
    fn x(&self) -> f64 {
        self.0.x
    }
    #[getter]
    fn y(&self) -> f64 {
        self.0.y
    }
    #[getter]
    fn z(&self) -> f64 {
        self.0.z
    }
    #[getter]
    fn vx(&self) -> f64 {
        self.0.vx
    }
    #[getter]
    fn vy(&self) -> f64 {
        self.0.vy
    }
    #[getter]
    fn vz(&self) -> f64 {
        self.0.vz
    }

    fn to_list(&self) -> [f64; 6] {
        self.0.to_array()
    }

    fn __repr__(&self) -> String {
        let s = &self.0;
        format!(
            "RelativeState(x={}, y={}, z={}, vx={}, vy={}, vz={})",
            s.x, s.y, s.z, s.vx, s.vy, s.vz
        )
    }
}

#[pyclass(name = "TargetOrbit", module = "rpod", from_py_object)]
#[derive(Clone)]
struct PyOrbit(dynamics::TargetOrbit);

#[pymethods]
impl PyOrbit {
    /// Circular, equatorial chief at `altitude_km`.
    #[new]
    #[pyo3(signature = (altitude_km, mu = MU_EARTH))]
    fn new(altitude_km: f64, mu: f64) -> PyResult<Self> {
        Ok(PyOrbit(dynamics::TargetOrbit::from_altitude(mu, altitude_km).map_err(err)?))
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.0.mu()
    }
    #[getter]
    fn radius(&self) -> f64 {
        self.0.radius()
    }
    #[getter]
    fn n(&self) -> f64 {
        self.0.n()
    }
    #[getter]
    fn period(&self) -> f64 {
        self.0.period()
    }

    fn state_at(&self, t: f64) -> PyInertial {
        PyInertial(self.0.state_at(t))
    }
}

#[pyclass(name = "Waypoint", module = "rpod", from_py_object)]
#[derive(Clone)]
struct PyWaypoint(CoreWaypoint);

#[pymethods]
impl PyWaypoint {
    #[new]
    fn new(t: f64, x: f64, y: f64) -> Self {
        PyWaypoint(CoreWaypoint::new(t, x, y))
    }
    #[getter]
    fn t(&self) -> f64 {
        self.0.t
    }
    #[getter]
    fn x(&self) -> f64 {
        self.0.x
    }
    #[getter]
    fn y(&self) -> f64 {
        self.0.y
    }
    fn __repr__(&self) -> String {
        format!("Waypoint(t={}, x={}, y={})", self.0.t, self.0.x, self.0.y)
    }
}

#[pyclass(name = "ImpulseRecord", module = "rpod", frozen)]
struct PyImpulse(CoreImpulse);

#[pymethods]
impl PyImpulse {
    #[getter]
    fn t(&self) -> f64 {
        self.0.t
    }
    #[getter]
    fn dv(&self) -> [f64; 3] {
        self.0.dv
    }
    #[getter]
    fn magnitude(&self) -> f64 {
        self.0.magnitude
    }
    fn __repr__(&self) -> String {
        format!("ImpulseRecord(t={}, dv={:?}, magnitude={})", self.0.t, self.0.dv, self.0.magnitude)
    }
}

#[pyclass(name = "CampaignConfig", module = "rpod", from_py_object)]
#[derive(Clone)]
struct PyConfig(CoreConfig);

#[pymethods]
impl PyConfig {
    /// `kind` is one of nmc_unforced, circle_forced, intercept_forced,
    /// intercept_unforced; `truth` is two_body or cw.
    #[new]
    #[pyo3(signature = (
        kind, size_km, impulse_count, altitude_km = campaign::DEFAULT_ALTITUDE, *,
        truth = "two_body", count_insertion = false, laps = 1, duration_s = None,
        circle_period_s = None, start_km = None, rendezvous_km = (0.0, 0.0), mu = MU_EARTH, tol = 1e-12,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        kind: &str,
        size_km: f64,
        impulse_count: usize,
        altitude_km: f64,
        truth: &str,
        count_insertion: bool,
        laps: usize,
        duration_s: Option<f64>,
        circle_period_s: Option<f64>,
        start_km: Option<(f64, f64)>,
        rendezvous_km: (f64, f64),
        mu: f64,
        tol: f64,
    ) -> PyResult<Self> {
        let kind: ManeuverKind = kind.parse().map_err(|e: RpodError| PyValueError::new_err(e.to_string()))?;
        let truth: TruthModel = truth.parse().map_err(|e: RpodError| PyValueError::new_err(e.to_string()))?;
        let mut cfg = CoreConfig::new(kind, altitude_km, size_km, impulse_count).with_truth(truth);
        cfg.count_insertion_dv = count_insertion;
        cfg.laps = laps;
        if duration_s.is_some() {
            cfg.duration = duration_s;
        }
        cfg.circle_period = circle_period_s;
        cfg.intercept_start = start_km;
        cfg.rendezvous = rendezvous_km;
        cfg.mu = mu;
        cfg.step_control = StepControl::with_tolerance(tol);
        cfg.validate().map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyConfig(cfg))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.maneuver_kind.as_str()
    }
    #[getter]
    fn size_km(&self) -> f64 {
        self.0.size
    }
    #[getter]
    fn impulse_count(&self) -> usize {
        self.0.impulse_count
    }
    #[getter]
    fn altitude_km(&self) -> f64 {
        self.0.chief_altitude
    }
    #[getter]
    fn truth(&self) -> &'static str {
        self.0.truth_model.as_str()
    }
}

#[pyclass(name = "CampaignResult", module = "rpod", frozen)]
struct PyResult_(campaign::CampaignResult);

#[pymethods]
impl PyResult_ {
    #[getter]
    fn kind(&self) -> &'static str {
        self.0.config.maneuver_kind.as_str()
    }
    #[getter]
    fn size_km(&self) -> f64 {
        self.0.config.size
    }
    #[getter]
    fn impulse_count(&self) -> usize {
        self.0.config.impulse_count
    }
    #[getter]
    fn total_dv(&self) -> f64 {
        self.0.total_dv
    }
    #[getter]
    fn insertion_dv(&self) -> f64 {
        self.0.insertion_dv
    }
    #[getter]
    fn max_waypoint_miss(&self) -> f64 {
        self.0.max_waypoint_miss
    }
    #[getter]
    fn final_miss(&self) -> f64 {
        self.0.final_miss
    }
    #[getter]
    fn duration(&self) -> f64 {
        self.0.duration
    }

    fn impulses(&self) -> Vec<PyImpulse> {
        self.0.impulses.iter().map(|i| PyImpulse(*i)).collect()
    }

    fn lap_dv(&self) -> Vec<f64> {
        self.0.lap_dv()
    }

    /// Recorded samples as `(t, [x, y, z, vx, vy, vz])` in the Hill frame.
    fn trajectory(&self) -> Vec<(f64, [f64; 6])> {
        self.0.samples.iter().map(|s| (s.t, s.rel.to_array())).collect()
    }

    /// The CSV row as `(kind, size_km, impulse_count, altitude_km, total_dv_km_s,
    /// insertion_dv_km_s, max_miss_km, duration_s)`.
    fn row(&self) -> (&'static str, f64, usize, f64, f64, f64, f64, f64) {
        let r = self.0.row();
        (
            r.kind.as_str(),
            r.size_km,
            r.impulse_count,
            r.altitude_km,
            r.total_dv_km_s,
            r.insertion_dv_km_s,
            r.max_miss_km,
            r.duration_s,
        )
    }

    fn __repr__(&self) -> String {
        format!(
            "CampaignResult(kind={}, size_km={}, impulse_count={}, total_dv={:e})",
            self.kind(),
            self.0.config.size,
            self.0.config.impulse_count,
            self.0.total_dv
        )
    }
}

#[pyfunction]
fn eci_to_hill(target: &PyInertial, chaser: &PyInertial) -> PyResult<PyRelative> {
    Ok(PyRelative(frames::eci_to_hill(&target.0, &chaser.0).map_err(err)?))
}

#[pyfunction]
fn hill_to_eci(target: &PyInertial, rel: &PyRelative) -> PyResult<PyInertial> {
    Ok(PyInertial(frames::hill_to_eci(&target.0, &rel.0).map_err(err)?))
}

/// Rows of the ECI-to-Hill rotation and the frame rate about i_h.
#[pyfunction]
fn hill_basis(target: &PyInertial) -> PyResult<([[f64; 3]; 3], f64, f64)> {
    let b = frames::hill_basis(&target.0).map_err(err)?;
    let rows = [vec3(b.radial()), vec3(b.along_track()), vec3(b.cross_track())];
    Ok((rows, b.angular_velocity.z, b.angular_acceleration.z))
}

#[pyfunction]
fn cw_stm(n: f64, dt: f64) -> [[f64; 6]; 6] {
    let m = dynamics::cw_stm(n, dt).stm;
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

#[pyfunction]
fn propagate_cw(rel: &PyRelative, n: f64, dt: f64) -> PyRelative {
    PyRelative(dynamics::propagate_cw(&rel.0, n, dt))
}

/// Uncontrolled two-body propagation; returns the states at `sample_times`
/// (absolute) followed by the end state.
#[pyfunction]
#[pyo3(signature = (state, duration, mu = MU_EARTH, sample_times = Vec::new(), tol = 1e-12))]
fn propagate_two_body(
    py: Python<'_>,
    state: &PyInertial,
    duration: f64,
    mu: f64,
    sample_times: Vec<f64>,
    tol: f64,
) -> PyResult<Vec<PyInertial>> {
    let s = state.0;
    let out = py
        .detach(|| {
            dynamics::propagate_two_body(&s, mu, duration, None, &sample_times, &StepControl::with_tolerance(tol))
        })
        .map_err(err)?;
    Ok(out.into_iter().map(PyInertial).collect())
}

#[pyfunction]
fn nmc_initial_state(x0: f64, n: f64) -> PyResult<PyRelative> {
    Ok(PyRelative(guidance::nmc_initial_state(x0, n).map_err(err)?))
}

/// Burn toward `waypoint` over `ts` seconds: `(impulse, (vx_plus, vy_plus))`.
#[pyfunction]
fn cw_target_impulse(rel: &PyRelative, waypoint: &PyWaypoint, ts: f64, n: f64) -> PyResult<(PyImpulse, (f64, f64))> {
    let (imp, v) = guidance::cw_target_impulse(&rel.0, &waypoint.0, ts, n).map_err(err)?;
    Ok((PyImpulse(imp), (v.x, v.y)))
}

fn wrap_points(points: Vec<CoreWaypoint>) -> Vec<PyWaypoint> {
    points.into_iter().map(PyWaypoint).collect()
}

#[pyfunction]
#[pyo3(signature = (radius, count, period, start_time = 0.0))]
fn waypoints_circle(radius: f64, count: usize, period: f64, start_time: f64) -> PyResult<Vec<PyWaypoint>> {
    Ok(wrap_points(guidance::waypoints_circle(radius, count, period, start_time).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (x0, n, count, start_time = 0.0))]
fn waypoints_nmc(x0: f64, n: f64, count: usize, start_time: f64) -> PyResult<Vec<PyWaypoint>> {
    Ok(wrap_points(guidance::waypoints_nmc(x0, n, count, start_time).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (start, end, count, duration, start_time = 0.0))]
fn waypoints_line(
    start: (f64, f64),
    end: (f64, f64),
    count: usize,
    duration: f64,
    start_time: f64,
) -> PyResult<Vec<PyWaypoint>> {
    Ok(wrap_points(guidance::waypoints_line(start, end, count, duration, start_time).map_err(err)?))
}

#[pyfunction]
fn run_campaign(py: Python<'_>, config: &PyConfig) -> PyResult<PyResult_> {
    let cfg = config.0.clone();
    Ok(PyResult_(py.detach(|| campaign::run_campaign(&cfg)).map_err(err)?))
}

/// NMC vs forced circle for every (size, count) cell; size outer, count inner.
#[pyfunction]
#[pyo3(signature = (sizes_km, impulse_counts, altitude_km = campaign::DEFAULT_ALTITUDE))]
fn sweep_circumnavigation(
    py: Python<'_>,
    sizes_km: Vec<f64>,
    impulse_counts: Vec<usize>,
    altitude_km: f64,
) -> PyResult<Vec<PyResult_>> {
    let rows = py
        .detach(|| campaign::sweep_circumnavigation(&sizes_km, &impulse_counts, altitude_km))
        .map_err(err)?;
    Ok(rows.into_iter().map(PyResult_).collect())
}

/// Returns `(forced, unforced)`.
#[pyfunction]
#[pyo3(signature = (
    start_km = (10.0, 0.0), rendezvous_km = (0.0, 0.0), duration_s = campaign::DEFAULT_INTERCEPT_DURATION,
    impulse_count = 8, altitude_km = campaign::DEFAULT_ALTITUDE,
))]
fn intercept_experiment(
    py: Python<'_>,
    start_km: (f64, f64),
    rendezvous_km: (f64, f64),
    duration_s: f64,
    impulse_count: usize,
    altitude_km: f64,
) -> PyResult<(PyResult_, PyResult_)> {
    let pair = py
        .detach(|| campaign::intercept_experiment(start_km, rendezvous_km, duration_s, impulse_count, altitude_km))
        .map_err(err)?;
    Ok((PyResult_(pair.forced), PyResult_(pair.unforced)))
}

/// Largest CW vs two-body position gap over `duration_s`, divided by `separation_km`.
#[pyfunction]
#[pyo3(signature = (altitude_km, separation_km, duration_s, samples = 200))]
fn free_drift_divergence(altitude_km: f64, separation_km: f64, duration_s: f64, samples: usize) -> PyResult<f64> {
    let d = campaign::free_drift_divergence(altitude_km, separation_km, duration_s, samples, &StepControl::default())
        .map_err(err)?;
    Ok(d.relative_to_initial())
}

#[pymodule]
fn rpod(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RpodError", m.py().get_type::<RpodException>())?;
    m.add("MU_EARTH", MU_EARTH)?;
    m.add("EARTH_RADIUS", dynamics::EARTH_RADIUS)?;
    m.add_class::<PyInertial>()?;
    m.add_class::<PyRelative>()?;
    m.add_class::<PyOrbit>()?;
    m.add_class::<PyWaypoint>()?;
    m.add_class::<PyImpulse>()?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PyResult_>()?;
    m.add_function(wrap_pyfunction!(eci_to_hill, m)?)?;
    m.add_function(wrap_pyfunction!(hill_to_eci, m)?)?;
    m.add_function(wrap_pyfunction!(hill_basis, m)?)?;
    m.add_function(wrap_pyfunction!(cw_stm, m)?)?;
    m.add_function(wrap_pyfunction!(propagate_cw, m)?)?;
    m.add_function(wrap_pyfunction!(propagate_two_body, m)?)?;
    m.add_function(wrap_pyfunction!(nmc_initial_state, m)?)?;
    m.add_function(wrap_pyfunction!(cw_target_impulse, m)?)?;
    m.add_function(wrap_pyfunction!(waypoints_circle, m)?)?;
    m.add_function(wrap_pyfunction!(waypoints_nmc, m)?)?;
    m.add_function(wrap_pyfunction!(waypoints_line, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_circumnavigation, m)?)?;
    m.add_function(wrap_pyfunction!(intercept_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(free_drift_divergence, m)?)?;
    Ok(())
}
