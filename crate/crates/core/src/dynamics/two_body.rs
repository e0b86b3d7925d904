//! Restricted two-body truth model with optional control acceleration.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::integrator::{integrate, StepControl};
use crate::error::{Result, RpodError};
use crate::frames::InertialState;

/// Earth gravitational parameter, km³/s².
pub const MU_EARTH: f64 = 398600.4418;
/// Earth equatorial radius, km.
pub const EARTH_RADIUS: f64 = 6378.137;
/// Radius below which gravity evaluation is refused, km.
pub const SINGULAR_RADIUS: f64 = 1.0;

/// Circular chief orbit. `n` is always derived from `mu` and `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OrbitParams", into = "OrbitParams")]
pub struct TargetOrbit {
    mu: f64,
    radius: f64,
    n: f64,
}

#[derive(Serialize, Deserialize)]
struct OrbitParams {
    mu: f64,
    radius: f64,
}

impl TryFrom<OrbitParams> for TargetOrbit {
    type Error = RpodError;
    fn try_from(p: OrbitParams) -> Result<Self> {
        TargetOrbit::new(p.mu, p.radius)
    }
}

impl From<TargetOrbit> for OrbitParams {
    fn from(o: TargetOrbit) -> Self {
        OrbitParams {
            mu: o.mu,
            radius: o.radius,
        }
    }
}

impl TargetOrbit {
    pub fn new(mu: f64, radius: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(RpodError::InvalidOrbit(format!(
                "gravitational parameter must be positive, got {mu}"
            )));
        }
        if !(radius > EARTH_RADIUS) || !radius.is_finite() {
            return Err(RpodError::InvalidOrbit(format!(
                "radius {radius} km is not above the Earth radius {EARTH_RADIUS} km"
            )));
        }
        Ok(Self {
            mu,
            radius,
            n: (mu / (radius * radius * radius)).sqrt(),
        })
    }

    pub fn from_altitude(mu: f64, altitude: f64) -> Result<Self> {
        Self::new(mu, EARTH_RADIUS + altitude)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Mean motion, rad/s.
    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n
    }

    pub fn altitude(&self) -> f64 {
        self.radius - EARTH_RADIUS
    }

    pub fn circular_speed(&self) -> f64 {
        self.n * self.radius
    }

    /// Exact chief state at time `t`: equatorial, prograde, at +X when t = 0.
    pub fn state_at(&self, t: f64) -> InertialState {
        let (s, c) = (self.n * t).sin_cos();
        let v = self.circular_speed();
        InertialState::new(
            t,
            Vector3::new(self.radius * c, self.radius * s, 0.0),
            Vector3::new(-v * s, v * c, 0.0),
        )
    }
}

/// Velocity and acceleration of a satellite under point-mass gravity plus control.
pub fn two_body_derivative(
    state: &InertialState,
    mu: f64,
    control_accel: Vector3<f64>,
) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let accel = gravity(&state.position, mu)? + control_accel;
    Ok((state.velocity, accel))
}

fn gravity(r: &Vector3<f64>, mu: f64) -> Result<Vector3<f64>> {
    let r2 = r.norm_squared();
    let radius = r2.sqrt();
    if !(radius >= SINGULAR_RADIUS) {
        return Err(RpodError::SingularRadius { radius });
    }
    Ok(-(mu / (r2 * radius)) * r)
}

/// Piecewise-constant control acceleration: `(start_time, accel)` pairs sorted by time.
/// Each entry holds until the next one starts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ControlSchedule {
    pub segments: Vec<(f64, Vector3<f64>)>,
}

impl ControlSchedule {
    pub fn accel_at(&self, t: f64) -> Vector3<f64> {
        let idx = self.segments.partition_point(|(start, _)| *start <= t);
        if idx == 0 {
            Vector3::zeros()
        } else {
            self.segments[idx - 1].1
        }
    }
}

/// Integrate the two-body equations from `initial` for `duration` seconds.
///
/// `sample_times` are absolute epochs inside `[initial.epoch, initial.epoch + duration]`;
/// the end state is always appended when not already requested. Impulses are not
/// handled here: callers split propagation at each burn.
pub fn propagate_two_body(
    initial: &InertialState,
    mu: f64,
    duration: f64,
    control: Option<&ControlSchedule>,
    sample_times: &[f64],
    step_control: &StepControl,
) -> Result<Vec<InertialState>> {
    if !(duration >= 0.0) {
        return Err(RpodError::InvalidConfig(format!(
            "propagation duration must be non-negative, got {duration}"
        )));
    }
    let t0 = initial.epoch;
    let t_end = t0 + duration;
    let mut outputs: Vec<f64> = sample_times.to_vec();
    if outputs.last().map_or(true, |&last| last < t_end) {
        outputs.push(t_end);
    }
    if outputs.iter().any(|&t| t > t_end) {
        return Err(RpodError::InvalidConfig(
            "sample time beyond the propagation window".into(),
        ));
    }

    let rhs = |t: f64, y: &[f64; 6]| -> Result<[f64; 6]> {
        let r = Vector3::new(y[0], y[1], y[2]);
        let mut a = gravity(&r, mu)?;
        if let Some(schedule) = control {
            a += schedule.accel_at(t);
        }
        Ok([y[3], y[4], y[5], a.x, a.y, a.z])
    };

    let out = integrate(&rhs, t0, initial.to_array(), &outputs, step_control)?;
    Ok(out
        .times
        .iter()
        .zip(&out.states)
        .map(|(&t, s)| InertialState::from_array(t, s))
        .collect())
}
