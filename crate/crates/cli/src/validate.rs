//! Built-in self-test: model-match baselines and conservation laws.

use std::f64::consts::TAU;

use nalgebra::Matrix6;
use rpod_core::campaign::{run_campaign, CampaignConfig, ManeuverKind, TruthModel};
use rpod_core::dynamics::{cw_stm, propagate_two_body, StepControl, TargetOrbit};
use rpod_core::{eci_to_hill, hill_to_eci, RelativeState, Result};
use serde::{Deserialize, Serialize};

const ALTITUDE: f64 = 2000.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Measured residual; NaN when the check could not run.
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Check {
    fn measure(name: &str, tolerance: f64, value: Result<f64>) -> Self {
        let (residual, detail) = match value {
            Ok(r) => (r, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        Check {
            name: name.to_string(),
            residual,
            tolerance,
            // NaN never passes.
            passed: residual < tolerance,
            detail,
        }
    }

    pub fn line(&self) -> String {
        let mut s = format!(
            "{} {:<34} residual={:.3e} tolerance={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        );
        if let Some(d) = &self.detail {
            s.push_str(&format!(" ({d})"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub mu: f64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

fn cw_baseline(mu: f64) -> Result<f64> {
    let cfg = CampaignConfig {
        mu,
        ..CampaignConfig::new(ManeuverKind::NmcUnforced, ALTITUDE, 10.0, 16).with_truth(TruthModel::Cw)
    };
    Ok(run_campaign(&cfg)?.total_dv)
}

fn kepler_closure(mu: f64) -> Result<f64> {
    let orbit = TargetOrbit::from_altitude(mu, ALTITUDE)?;
    let s0 = orbit.state_at(0.0);
    let out = propagate_two_body(&s0, mu, orbit.period(), None, &[], &StepControl::default())?;
    Ok((out[out.len() - 1].position - s0.position).norm())
}

/// Largest relative drift of (energy, |h|) over ten periods.
fn invariants_drift(mu: f64) -> Result<(f64, f64)> {
    let orbit = TargetOrbit::from_altitude(mu, ALTITUDE)?;
    let s0 = orbit.state_at(0.0);
    let span = 10.0 * orbit.period();
    let times: Vec<f64> = (1..=100).map(|i| span * i as f64 / 100.0).collect();
    let states = propagate_two_body(&s0, mu, span, None, &times, &StepControl::default())?;
    let e0 = s0.specific_energy(mu);
    let h0 = s0.angular_momentum();
    let mut drift = (0.0f64, 0.0f64);
    for s in &states {
        drift.0 = drift.0.max(((s.specific_energy(mu) - e0) / e0).abs());
        drift.1 = drift.1.max((s.angular_momentum() - h0).norm() / h0.norm());
    }
    Ok(drift)
}

fn stm_identity(mu: f64) -> Result<f64> {
    let n = TargetOrbit::from_altitude(mu, ALTITUDE)?.n();
    Ok((cw_stm(n, 0.0).stm - Matrix6::identity()).amax())
}

fn stm_composition(mu: f64) -> Result<f64> {
    let orbit = TargetOrbit::from_altitude(mu, ALTITUDE)?;
    let n = orbit.n();
    let mut worst: f64 = 0.0;
    for k in 1..=8 {
        let t1 = orbit.period() * k as f64 / 11.0;
        let t2 = orbit.period() * k as f64 / 7.0;
        let lhs = cw_stm(n, t1 + t2).stm;
        let diff = lhs - cw_stm(n, t2).stm * cw_stm(n, t1).stm;
        worst = worst.max(diff.amax() / lhs.amax().max(1.0));
    }
    Ok(worst)
}

/// (position, velocity) residuals of ECI -> Hill -> ECI around the chief orbit.
fn frame_round_trip(mu: f64) -> Result<(f64, f64)> {
    let orbit = TargetOrbit::from_altitude(mu, ALTITUDE)?;
    let mut worst = (0.0f64, 0.0f64);
    for k in 0..12 {
        let t = orbit.period() * k as f64 / 12.0;
        let target = orbit.state_at(t);
        let phase = TAU * k as f64 / 12.0;
        let rel = RelativeState::new(
            300.0 * phase.cos(),
            -250.0 * phase.sin(),
            40.0,
            0.1 * phase.sin(),
            -0.2 * phase.cos(),
            0.01,
        );
        let chaser = hill_to_eci(&target, &rel)?;
        let again = hill_to_eci(&target, &eci_to_hill(&target, &chaser)?)?;
        worst.0 = worst.0.max((again.position - chaser.position).amax());
        worst.1 = worst.1.max((again.velocity - chaser.velocity).amax());
    }
    Ok(worst)
}

/// Run every check with gravitational parameter `mu`.
pub fn validate_suite(mu: f64) -> ValidationReport {
    let drift = invariants_drift(mu);
    let frames = frame_round_trip(mu);
    let checks = vec![
        Check::measure("cw_truth_nmc_zero_dv_km_s", 1e-9, cw_baseline(mu)),
        Check::measure("kepler_closure_one_period_km", 1e-6, kepler_closure(mu)),
        Check::measure("energy_drift_ten_periods", 1e-10, drift.clone().map(|d| d.0)),
        Check::measure("angular_momentum_drift_ten_periods", 1e-10, drift.map(|d| d.1)),
        Check::measure("stm_identity_at_zero", 1e-15, stm_identity(mu)),
        Check::measure("stm_composition", 1e-10, stm_composition(mu)),
        Check::measure("frame_round_trip_position_km", 1e-12, frames.clone().map(|f| f.0)),
        Check::measure("frame_round_trip_velocity_km_s", 1e-15, frames.map(|f| f.1)),
    ];
    ValidationReport { mu, checks }
}
