//! Relative-motion toolkit for rendezvous and proximity operations.
//!
//! Guidance is computed with the Clohessy–Wiltshire model and flown against a
//! restricted two-body truth model, so the fuel spent on corrections measures
//! how far the linear model is from reality.
//!
//! - [`frames`]: Hill frame construction and ECI <-> Hill conversion.
//! - [`dynamics`]: two-body integrator and closed-form CW propagation.
//! - [`guidance`]: NMC insertion, in-plane impulse targeting, waypoint plans.
//! - [`campaign`]: closed-loop forced/unforced experiments and sweeps.

pub mod campaign;
pub mod dynamics;
pub mod error;
pub mod frames;
pub mod guidance;

pub use error::{Result, RpodError};
pub use frames::{eci_to_hill, hill_basis, hill_to_eci, HillBasis, InertialState, RelativeState};
