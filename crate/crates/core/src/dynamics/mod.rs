//! Truth (two-body) and linear (Clohessy–Wiltshire) propagation.

pub mod cw;
pub mod integrator;
pub mod two_body;

pub use cw::{cw_derivative, cw_stm, propagate_cw, CwStm};
pub use integrator::{integrate, integrate_to, Integration, OdeSystem, StepControl};
pub use two_body::{
    propagate_two_body, two_body_derivative, ControlSchedule, TargetOrbit, EARTH_RADIUS,
    MU_EARTH,
};

use crate::frames::{InertialState, RelativeState};

/// One point of an executed trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub target: InertialState,
    pub chaser: InertialState,
    pub rel: RelativeState,
}
