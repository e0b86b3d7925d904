//! Clohessy–Wiltshire relative dynamics about a circular chief.
//!
//! ```text
//! x'' - 3n²x - 2n y' = ux
//! y'' + 2n x'        = uy
//! z'' + n²z          = uz
//! ```

use nalgebra::{Matrix2, Matrix6, Vector3};

use crate::frames::RelativeState;

/// Time derivative of a relative state under the CW equations.
pub fn cw_derivative(rel: &RelativeState, n: f64, control_accel: Vector3<f64>) -> RelativeState {
    let n2 = n * n;
    RelativeState::new(
        rel.vx,
        rel.vy,
        rel.vz,
        3.0 * n2 * rel.x + 2.0 * n * rel.vy + control_accel.x,
        -2.0 * n * rel.vx + control_accel.y,
        -n2 * rel.z + control_accel.z,
    )
}

/// Closed-form CW state-transition matrix over `dt` seconds.
///
/// Ordering of the state is `(x, y, z, vx, vy, vz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CwStm {
    pub stm: Matrix6<f64>,
    pub dt: f64,
    pub n: f64,
}

impl CwStm {
    pub fn apply(&self, rel: &RelativeState) -> RelativeState {
        RelativeState::from_vector(&(self.stm * rel.to_vector()))
    }

    /// In-plane position-from-position block (rows x, y; columns x, y).
    pub fn in_plane_rr(&self) -> Matrix2<f64> {
        Matrix2::new(self.stm[(0, 0)], self.stm[(0, 1)], self.stm[(1, 0)], self.stm[(1, 1)])
    }

    /// In-plane position-from-velocity block (rows x, y; columns vx, vy).
    pub fn in_plane_rv(&self) -> Matrix2<f64> {
        Matrix2::new(self.stm[(0, 3)], self.stm[(0, 4)], self.stm[(1, 3)], self.stm[(1, 4)])
    }
}

pub fn cw_stm(n: f64, dt: f64) -> CwStm {
    let tau = n * dt;
    let (s, c) = tau.sin_cos();
    // 1 - cos written via the half angle to keep precision near tau = 0.
    let one_minus_c = 2.0 * (0.5 * tau).sin().powi(2);

    #[rustfmt::skip]
    let stm = Matrix6::new(
        4.0 - 3.0 * c,            0.0, 0.0,    s / n,                    2.0 * one_minus_c / n,     0.0,
        6.0 * (s - tau),          1.0, 0.0,    -2.0 * one_minus_c / n,   (4.0 * s - 3.0 * tau) / n, 0.0,
        0.0,                      0.0, c,      0.0,                      0.0,                       s / n,
        3.0 * n * s,              0.0, 0.0,    c,                        2.0 * s,                   0.0,
        -6.0 * n * one_minus_c,   0.0, 0.0,    -2.0 * s,                 4.0 * c - 3.0,             0.0,
        0.0,                      0.0, -n * s, 0.0,                      0.0,                       c,
    );
    CwStm { stm, dt, n }
}

/// Uncontrolled CW propagation of `rel` over `dt` seconds.
pub fn propagate_cw(rel: &RelativeState, n: f64, dt: f64) -> RelativeState {
    if dt == 0.0 {
        return *rel;
    }
    cw_stm(n, dt).apply(rel)
}
