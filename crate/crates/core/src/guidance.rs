//! Impulsive guidance from the CW model.
//!
//! Targeting solves the in-plane two-point boundary problem
//!
//! ```text
//! r_f = Φrr(ts)·r_0 + Φrv(ts)·v_0⁺
//! ```
//!
//! for the post-burn velocity `v_0⁺`. Waypoint generators produce the plans the
//! campaigns fly: the natural 2:1 ellipse, a forced circle and a straight line.

use std::f64::consts::TAU;

use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::dynamics::{cw_stm, propagate_cw};
use crate::error::{Result, RpodError};
use crate::frames::RelativeState;

/// Relative determinant threshold of the targeting velocity block.
pub const SINGULARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    /// Absolute campaign time, s.
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: Option<f64>,
}

impl Waypoint {
    pub fn new(t: f64, x: f64, y: f64) -> Self {
        Self { t, x, y, z: None }
    }

    pub fn in_plane(&self) -> Vector2<f64> {
        Vector2::new(self.x, self.y)
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z.unwrap_or(0.0))
    }
}

/// An instantaneous velocity change, Hill axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpulseRecord {
    pub t: f64,
    /// km/s
    pub dv: [f64; 3],
    /// km/s, always `|dv|`
    pub magnitude: f64,
}

impl ImpulseRecord {
    pub fn new(t: f64, dv: Vector3<f64>) -> Self {
        Self {
            t,
            dv: [dv.x, dv.y, dv.z],
            magnitude: dv.norm(),
        }
    }

    pub fn dv(&self) -> Vector3<f64> {
        Vector3::from(self.dv)
    }
}

/// Initial state of a natural-motion circumnavigation with radial offset `x0`.
pub fn nmc_initial_state(x0: f64, n: f64) -> Result<RelativeState> {
    if x0 == 0.0 {
        return Err(RpodError::ZeroOffset);
    }
    if !(n > 0.0) {
        return Err(RpodError::InvalidConfig(format!("mean motion must be positive, got {n}")));
    }
    Ok(RelativeState::new(x0, 0.0, 0.0, 0.0, -2.0 * n * x0, 0.0))
}

/// Determinant of the targeting velocity block divided by its squared Frobenius norm.
///
/// Dimensionless and scale free; it vanishes at `n·ts = 2πk` and at the other
/// roots of `8(1 − cos τ) = 3τ sin τ`.
pub fn transfer_determinant(n: f64, ts: f64) -> f64 {
    let m = cw_stm(n, ts).in_plane_rv();
    m.determinant() / m.norm_squared()
}

/// Burn that takes `rel_now` to `waypoint` in `ts` seconds under CW motion.
///
/// Returns the impulse (stamped at `waypoint.t - ts`) and the post-burn
/// in-plane velocity. The cross-track channel is left alone.
pub fn cw_target_impulse(
    rel_now: &RelativeState,
    waypoint: &Waypoint,
    ts: f64,
    n: f64,
) -> Result<(ImpulseRecord, Vector2<f64>)> {
    if !(ts > 0.0) || !ts.is_finite() {
        return Err(RpodError::InvalidConfig(format!("transfer time must be positive, got {ts}")));
    }
    if !(n > 0.0) {
        return Err(RpodError::InvalidConfig(format!("mean motion must be positive, got {n}")));
    }
    let stm = cw_stm(n, ts);
    let rv = stm.in_plane_rv();
    if !((rv.determinant() / rv.norm_squared()).abs() >= SINGULARITY_TOL) {
        return Err(RpodError::SingularTransferTime {
            ts,
            phase: n * ts,
            segment: None,
        });
    }
    let r0 = Vector2::new(rel_now.x, rel_now.y);
    let rhs = waypoint.in_plane() - stm.in_plane_rr() * r0;
    let v_plus = rv
        .lu()
        .solve(&rhs)
        .ok_or(RpodError::SingularTransferTime {
            ts,
            phase: n * ts,
            segment: None,
        })?;
    let dv = Vector3::new(v_plus.x - rel_now.vx, v_plus.y - rel_now.vy, 0.0);
    Ok((ImpulseRecord::new(waypoint.t - ts, dv), v_plus))
}

fn check_count(count: usize, min: usize) -> Result<()> {
    if count < min {
        return Err(RpodError::InsufficientWaypoints { count, min });
    }
    Ok(())
}

/// Points on the circle of `radius`, traversed clockwise in x-y from `(radius, 0)`
/// (the same sense as an NMC with positive offset), one lap per `period`.
pub fn waypoints_circle(
    radius: f64,
    count: usize,
    period: f64,
    start_time: f64,
) -> Result<Vec<Waypoint>> {
    check_count(count, 3)?;
    if !(radius > 0.0) {
        return Err(RpodError::InvalidConfig(format!("circle radius must be positive, got {radius}")));
    }
    if !(period > 0.0) {
        return Err(RpodError::InvalidConfig(format!("circle period must be positive, got {period}")));
    }
    Ok((0..count)
        .map(|k| {
            let frac = k as f64 / count as f64;
            let (s, c) = (-TAU * frac).sin_cos();
            Waypoint::new(start_time + period * frac, radius * c, radius * s)
        })
        .collect())
}

/// Samples of the CW natural-motion ellipse seeded at radial offset `x0`,
/// evenly spaced in time over one orbit of the chief.
pub fn waypoints_nmc(x0: f64, n: f64, count: usize, start_time: f64) -> Result<Vec<Waypoint>> {
    check_count(count, 3)?;
    let initial = nmc_initial_state(x0, n)?;
    let period = TAU / n;
    Ok((0..count)
        .map(|k| {
            let dt = period * k as f64 / count as f64;
            let s = propagate_cw(&initial, n, dt);
            Waypoint::new(start_time + dt, s.x, s.y)
        })
        .collect())
}

/// Evenly spaced points on the segment `start -> end`, endpoints included.
pub fn waypoints_line(
    start: (f64, f64),
    end: (f64, f64),
    count: usize,
    duration: f64,
    start_time: f64,
) -> Result<Vec<Waypoint>> {
    check_count(count, 2)?;
    if !(duration > 0.0) {
        return Err(RpodError::InvalidConfig(format!("duration must be positive, got {duration}")));
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|k| {
            if k == count - 1 {
                return Waypoint::new(start_time + duration, end.0, end.1);
            }
            let f = k as f64 / last;
            Waypoint::new(
                start_time + duration * f,
                start.0 + (end.0 - start.0) * f,
                start.1 + (end.1 - start.1) * f,
            )
        })
        .collect())
}
