//! Inertial and Hill (radial / along-track / cross-track) frames.
//!
//! The Hill frame is centred on the target. Its rows are built from the
//! target's inertial position and velocity:
//!
//! ```text
//! i_r = r / |r|,   i_h = (r x v) / |r x v|,   i_theta = i_h x i_r
//! ```
//!
//! Relative velocity is taken in the rotating frame, so the transport term
//! `omega x rho` is removed when going ECI -> Hill and restored on the way back.

use nalgebra::{Matrix3, Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Result, RpodError};

/// Position and velocity of a satellite in the Earth-centred inertial frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertialState {
    /// Seconds since campaign start.
    pub epoch: f64,
    /// km
    pub position: Vector3<f64>,
    /// km/s
    pub velocity: Vector3<f64>,
}

impl InertialState {
    pub fn new(epoch: f64, position: Vector3<f64>, velocity: Vector3<f64>) -> Self {
        Self {
            epoch,
            position,
            velocity,
        }
    }

    pub fn radius(&self) -> f64 {
        self.position.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.epoch.is_finite()
            && self.position.iter().all(|v| v.is_finite())
            && self.velocity.iter().all(|v| v.is_finite())
    }

    /// Specific orbital energy v²/2 − μ/r (km²/s²).
    pub fn specific_energy(&self, mu: f64) -> f64 {
        0.5 * self.velocity.norm_squared() - mu / self.radius()
    }

    /// Specific angular momentum r × v (km²/s).
    pub fn angular_momentum(&self) -> Vector3<f64> {
        self.position.cross(&self.velocity)
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.position.x,
            self.position.y,
            self.position.z,
            self.velocity.x,
            self.velocity.y,
            self.velocity.z,
        ]
    }

    pub fn from_array(epoch: f64, s: &[f64; 6]) -> Self {
        Self {
            epoch,
            position: Vector3::new(s[0], s[1], s[2]),
            velocity: Vector3::new(s[3], s[4], s[5]),
        }
    }
}

/// Chaser state relative to the target, resolved in Hill axes.
///
/// `vx, vy, vz` are rates seen from the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RelativeState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

impl RelativeState {
    pub const ZERO: RelativeState = RelativeState {
        x: 0.0,
        y: 0.0,
        z: 0.0,
        vx: 0.0,
        vy: 0.0,
        vz: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64, vx: f64, vy: f64, vz: f64) -> Self {
        Self {
            x,
            y,
            z,
            vx,
            vy,
            vz,
        }
    }

    pub fn from_vectors(position: Vector3<f64>, velocity: Vector3<f64>) -> Self {
        Self::new(
            position.x, position.y, position.z, velocity.x, velocity.y, velocity.z,
        )
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn velocity(&self) -> Vector3<f64> {
        Vector3::new(self.vx, self.vy, self.vz)
    }

    pub fn to_vector(&self) -> Vector6<f64> {
        Vector6::new(self.x, self.y, self.z, self.vx, self.vy, self.vz)
    }

    pub fn from_vector(v: &Vector6<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.x, self.y, self.z, self.vx, self.vy, self.vz]
    }

    pub fn from_array(s: &[f64; 6]) -> Self {
        Self::new(s[0], s[1], s[2], s[3], s[4], s[5])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Orientation and rotation rate of the Hill frame relative to inertial space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillBasis {
    /// Rows are i_r, i_theta, i_h in ECI components; maps ECI vectors to Hill.
    pub rotation: Matrix3<f64>,
    /// omega_{I/R} in Hill axes (rad/s).
    pub angular_velocity: Vector3<f64>,
    /// d(omega_{I/R})/dt in Hill axes (rad/s²).
    pub angular_acceleration: Vector3<f64>,
}

impl HillBasis {
    pub fn radial(&self) -> Vector3<f64> {
        self.rotation.row(0).transpose()
    }

    pub fn along_track(&self) -> Vector3<f64> {
        self.rotation.row(1).transpose()
    }

    pub fn cross_track(&self) -> Vector3<f64> {
        self.rotation.row(2).transpose()
    }
}

/// Relative tolerance on |r x v| / (|r| |v|) below which the orbit is treated as radial.
const DEGENERACY_TOL: f64 = 1e-12;

/// Build the Hill frame of a target from its inertial state.
///
/// The frame rate assumes the target moves on a Keplerian orbit, which gives
/// `omega = |h| / r²` about `i_h` and `omega_dot = -2 (r·v) |h| / r⁴`.
pub fn hill_basis(target: &InertialState) -> Result<HillBasis> {
    let r = target.position;
    let v = target.velocity;
    let r_norm = r.norm();
    if !target.is_finite() || r_norm == 0.0 {
        return Err(RpodError::DegenerateOrbit);
    }
    let h = r.cross(&v);
    let h_norm = h.norm();
    if !(h_norm > DEGENERACY_TOL * r_norm * v.norm()) {
        return Err(RpodError::DegenerateOrbit);
    }

    let i_r = r / r_norm;
    let i_h = h / h_norm;
    let i_theta = i_h.cross(&i_r);
    let rotation = Matrix3::from_rows(&[i_r.transpose(), i_theta.transpose(), i_h.transpose()]);

    let r2 = r_norm * r_norm;
    let rate = h_norm / r2;
    let rate_dot = -2.0 * r.dot(&v) * h_norm / (r2 * r2);

    Ok(HillBasis {
        rotation,
        angular_velocity: Vector3::new(0.0, 0.0, rate),
        angular_acceleration: Vector3::new(0.0, 0.0, rate_dot),
    })
}

fn check_epochs(target: &InertialState, chaser: &InertialState) -> Result<()> {
    let scale = 1.0_f64.max(target.epoch.abs());
    if (target.epoch - chaser.epoch).abs() > 1e-9 * scale {
        return Err(RpodError::EpochMismatch {
            target: target.epoch,
            chaser: chaser.epoch,
        });
    }
    Ok(())
}

/// Express the chaser relative to the target in Hill coordinates.
pub fn eci_to_hill(target: &InertialState, chaser: &InertialState) -> Result<RelativeState> {
    check_epochs(target, chaser)?;
    let basis = hill_basis(target)?;
    Ok(eci_to_hill_with(&basis, target, chaser))
}

/// Same as [`eci_to_hill`] with a precomputed basis and no epoch check.
pub fn eci_to_hill_with(
    basis: &HillBasis,
    target: &InertialState,
    chaser: &InertialState,
) -> RelativeState {
    let c = &basis.rotation;
    // Chaser minus target, held exactly as hi + lo so coincident states map to 0.
    let dr = exact_diff(&chaser.position, &target.position);
    let dv = exact_diff(&chaser.velocity, &target.velocity);
    let rho = Vector3::from_fn(|k, _| {
        dot2(&[
            (c[(k, 0)], dr[0].0),
            (c[(k, 1)], dr[1].0),
            (c[(k, 2)], dr[2].0),
            (c[(k, 0)], dr[0].1),
            (c[(k, 1)], dr[1].1),
            (c[(k, 2)], dr[2].1),
        ])
    });
    let w = cross2(&basis.angular_velocity, &rho);
    let vel = Vector3::from_fn(|k, _| {
        dot2(&[
            (c[(k, 0)], dv[0].0),
            (c[(k, 1)], dv[1].0),
            (c[(k, 2)], dv[2].0),
            (c[(k, 0)], dv[0].1),
            (c[(k, 1)], dv[1].1),
            (c[(k, 2)], dv[2].1),
            (-1.0, w[k]),
        ])
    });
    RelativeState::from_vectors(rho, vel)
}

/// Inverse of [`eci_to_hill`]: rebuild the chaser's inertial state.
pub fn hill_to_eci(target: &InertialState, rel: &RelativeState) -> Result<InertialState> {
    let basis = hill_basis(target)?;
    Ok(hill_to_eci_with(&basis, target, rel))
}

pub fn hill_to_eci_with(
    basis: &HillBasis,
    target: &InertialState,
    rel: &RelativeState,
) -> InertialState {
    let c = &basis.rotation;
    let rho = rel.position();
    let w = cross2(&basis.angular_velocity, &rho);
    let position = Vector3::from_fn(|i, _| {
        dot2(&[
            (1.0, target.position[i]),
            (c[(0, i)], rho.x),
            (c[(1, i)], rho.y),
            (c[(2, i)], rho.z),
        ])
    });
    let velocity = Vector3::from_fn(|i, _| {
        dot2(&[
            (1.0, target.velocity[i]),
            (c[(0, i)], rel.vx),
            (c[(1, i)], rel.vy),
            (c[(2, i)], rel.vz),
            (c[(0, i)], w.x),
            (c[(1, i)], w.y),
            (c[(2, i)], w.z),
        ])
    });
    InertialState {
        epoch: target.epoch,
        position,
        velocity,
    }
}

fn cross2(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(
        dot2(&[(a.y, b.z), (-a.z, b.y)]),
        dot2(&[(a.z, b.x), (-a.x, b.z)]),
        dot2(&[(a.x, b.y), (-a.y, b.x)]),
    )
}

/// Compensated dot product (Ogita–Rump–Oishi Dot2): as accurate as if computed
/// in twice the working precision, then rounded once.
///
/// Chaser and target ECI coordinates differ from their Hill offsets by several
/// orders of magnitude, so plain summation loses the last bits of the offset.
fn exact_diff(a: &Vector3<f64>, b: &Vector3<f64>) -> [(f64, f64); 3] {
    std::array::from_fn(|k| {
        let d = a[k] - b[k];
        let z = d - a[k];
        (d, (a[k] - (d - z)) + (-b[k] - z))
    })
}

fn dot2(terms: &[(f64, f64)]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &(a, b) in terms {
        let p = a * b;
        let p_err = a.mul_add(b, -p);
        let t = sum + p;
        let z = t - sum;
        let s_err = (sum - (t - z)) + (p - z);
        sum = t;
        comp += p_err + s_err;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    const MU: f64 = 398600.4418;

    fn circular(radius: f64, phase: f64) -> InertialState {
        let vc = (MU / radius).sqrt();
        InertialState::new(
            0.0,
            Vector3::new(radius * phase.cos(), radius * phase.sin(), 0.0),
            Vector3::new(-vc * phase.sin(), vc * phase.cos(), 0.0),
        )
    }

    fn assert_vec(a: Vector3<f64>, b: Vector3<f64>, tol: f64) {
        assert!((a - b).amax() < tol, "{a:?} != {b:?}");
    }

    #[test]
    fn axis_aligned_basis() {
        let b = hill_basis(&circular(8378.137, 0.0)).unwrap();
        assert_vec(b.radial(), Vector3::x(), 1e-15);
        assert_vec(b.along_track(), Vector3::y(), 1e-15);
        assert_vec(b.cross_track(), Vector3::z(), 1e-15);
    }

    #[test]
    fn quarter_orbit_basis() {
        let r = 7000.0;
        let vc = (MU / r).sqrt();
        let s = InertialState::new(0.0, Vector3::new(0.0, r, 0.0), Vector3::new(-vc, 0.0, 0.0));
        let b = hill_basis(&s).unwrap();
        assert_vec(b.radial(), Vector3::y(), 1e-15);
        assert_vec(b.along_track(), -Vector3::x(), 1e-15);
        assert_vec(b.cross_track(), Vector3::z(), 1e-15);
    }

    #[test]
    fn radial_trajectory_is_degenerate() {
        let s = InertialState::new(0.0, Vector3::new(7000.0, 0.0, 0.0), Vector3::new(1.0, 0.0, 0.0));
        assert_eq!(hill_basis(&s), Err(RpodError::DegenerateOrbit));
        let zero = InertialState::new(0.0, Vector3::zeros(), Vector3::new(0.0, 7.0, 0.0));
        assert_eq!(hill_basis(&zero), Err(RpodError::DegenerateOrbit));
    }

    #[test]
    fn circular_frame_rate() {
        let r = 8378.137;
        let b = hill_basis(&circular(r, 1.234)).unwrap();
        let n = (MU / (r * r * r)).sqrt();
        assert!(((b.angular_velocity.z - n) / n).abs() < 1e-12);
        assert_eq!(b.angular_velocity.x, 0.0);
        assert_eq!(b.angular_velocity.y, 0.0);
        assert!(b.angular_acceleration.norm() < 1e-20);
    }

    #[test]
    fn coincident_satellites_give_zero() {
        let t = circular(8378.137, 0.3);
        assert_eq!(eci_to_hill(&t, &t).unwrap(), RelativeState::ZERO);
    }

    #[test]
    fn epoch_mismatch_is_rejected() {
        let t = circular(8378.137, 0.0);
        let mut c = t;
        c.epoch = 1.0;
        assert!(matches!(
            eci_to_hill(&t, &c),
            Err(RpodError::EpochMismatch { .. })
        ));
    }

    #[test]
    fn zero_relative_state_maps_onto_target() {
        let t = circular(8378.137, 2.0);
        let c = hill_to_eci(&t, &RelativeState::ZERO).unwrap();
        assert_eq!(c.position, t.position);
        assert_eq!(c.velocity, t.velocity);
    }

    #[test]
    fn nmc_state_round_trip() {
        let r = 8378.137;
        let n = (MU / (r * r * r)).sqrt();
        let t = circular(r, 0.7);
        let rel = RelativeState::new(3.0, 0.0, 0.0, 0.0, -2.0 * n * 3.0, 0.0);
        let back = eci_to_hill(&t, &hill_to_eci(&t, &rel).unwrap()).unwrap();
        assert!((back.position() - rel.position()).amax() < 1e-12);
        assert!((back.velocity() - rel.velocity()).amax() < 1e-15);
    }
}
