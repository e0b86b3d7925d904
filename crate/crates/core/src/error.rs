use thiserror::Error;

/// Errors raised by frame construction, propagation, guidance and campaigns.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RpodError {
    #[error("degenerate orbit: r x v vanishes, Hill frame undefined")]
    DegenerateOrbit,

    #[error("epoch mismatch: target at {target} s, chaser at {chaser} s")]
    EpochMismatch { target: f64, chaser: f64 },

    #[error("radius {radius} km is inside the singularity guard")]
    SingularRadius { radius: f64 },

    #[error("integrator step size underflow at t = {t} s (h = {step} s)")]
    StepSizeUnderflow { t: f64, step: f64 },

    #[error("radial offset must be non-zero")]
    ZeroOffset,

    #[error("singular transfer time ts = {ts} s (n*ts = {phase} rad){}", segment_suffix(*.segment))]
    SingularTransferTime {
        ts: f64,
        phase: f64,
        segment: Option<usize>,
    },

    #[error("{count} waypoints requested, at least {min} required")]
    InsufficientWaypoints { count: usize, min: usize },

    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

fn segment_suffix(segment: Option<usize>) -> String {
    match segment {
        Some(i) => format!(" in segment {i}"),
        None => String::new(),
    }
}

impl RpodError {
    /// Tag a targeting failure with the campaign segment it occurred in.
    pub fn in_segment(self, index: usize) -> Self {
        match self {
            RpodError::SingularTransferTime { ts, phase, .. } => RpodError::SingularTransferTime {
                ts,
                phase,
                segment: Some(index),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, RpodError>;
