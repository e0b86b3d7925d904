//! Closed-loop forced vs unforced experiments.
//!
//! Every burn is planned with the CW model from the chaser's *current truth*
//! relative state, then executed as a velocity discontinuity in the truth model.
//! Whatever Δv is spent beyond the plan measures the CW model mismatch.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Vector2, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    propagate_cw, propagate_two_body, StepControl, TargetOrbit, TrajectorySample, MU_EARTH,
};
use crate::error::{Result, RpodError};
use crate::frames::{eci_to_hill_with, hill_basis, hill_to_eci_with, InertialState, RelativeState};
use crate::guidance::{
    cw_target_impulse, nmc_initial_state, waypoints_circle, waypoints_line, waypoints_nmc,
    ImpulseRecord, Waypoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManeuverKind {
    NmcUnforced,
    CircleForced,
    InterceptForced,
    InterceptUnforced,
}

impl ManeuverKind {
    pub const ALL: [ManeuverKind; 4] = [
        ManeuverKind::NmcUnforced,
        ManeuverKind::CircleForced,
        ManeuverKind::InterceptForced,
        ManeuverKind::InterceptUnforced,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ManeuverKind::NmcUnforced => "nmc_unforced",
            ManeuverKind::CircleForced => "circle_forced",
            ManeuverKind::InterceptForced => "intercept_forced",
            ManeuverKind::InterceptUnforced => "intercept_unforced",
        }
    }

    pub fn is_forced(&self) -> bool {
        matches!(self, ManeuverKind::CircleForced | ManeuverKind::InterceptForced)
    }

    pub fn is_circumnavigation(&self) -> bool {
        matches!(self, ManeuverKind::NmcUnforced | ManeuverKind::CircleForced)
    }
}

impl fmt::Display for ManeuverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ManeuverKind {
    type Err = RpodError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| RpodError::InvalidConfig(format!("unknown maneuver kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthModel {
    TwoBody,
    Cw,
}

impl TruthModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TruthModel::TwoBody => "two_body",
            TruthModel::Cw => "cw",
        }
    }
}

impl FromStr for TruthModel {
    type Err = RpodError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_body" | "two-body" => Ok(TruthModel::TwoBody),
            "cw" => Ok(TruthModel::Cw),
            _ => Err(RpodError::InvalidConfig(format!("unknown truth model '{s}'"))),
        }
    }
}

/// Default intercept window, s.
pub const DEFAULT_INTERCEPT_DURATION: f64 = 3600.0;
/// Default chief altitude, km.
pub const DEFAULT_ALTITUDE: f64 = 2000.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignConfig {
    pub maneuver_kind: ManeuverKind,
    /// km above the Earth radius.
    pub chief_altitude: f64,
    /// NMC semi-minor axis / circle radius / intercept radial start offset, km.
    pub size: f64,
    /// Burns per lap (circumnavigation) or targeting legs (forced intercept).
    pub impulse_count: usize,
    /// Intercept window, s. Circumnavigation durations are derived from the lap period.
    pub duration: Option<f64>,
    pub truth_model: TruthModel,
    pub count_insertion_dv: bool,
    pub laps: usize,
    /// Lap period of the forced circle, s. Defaults to the chief orbital period.
    pub circle_period: Option<f64>,
    /// Intercept start point (x, y) km. Defaults to (size, 0).
    pub intercept_start: Option<(f64, f64)>,
    pub rendezvous: (f64, f64),
    pub mu: f64,
    /// Trajectory samples recorded inside each coast arc.
    pub samples_per_segment: usize,
    pub step_control: StepControl,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            maneuver_kind: ManeuverKind::NmcUnforced,
            chief_altitude: DEFAULT_ALTITUDE,
            size: 1.0,
            impulse_count: 8,
            duration: None,
            truth_model: TruthModel::TwoBody,
            count_insertion_dv: false,
            laps: 1,
            circle_period: None,
            intercept_start: None,
            rendezvous: (0.0, 0.0),
            mu: MU_EARTH,
            samples_per_segment: 4,
            step_control: StepControl::default(),
        }
    }
}

impl CampaignConfig {
    pub fn new(kind: ManeuverKind, chief_altitude: f64, size: f64, impulse_count: usize) -> Self {
        let mut cfg = Self {
            maneuver_kind: kind,
            chief_altitude,
            size,
            impulse_count,
            ..Self::default()
        };
        if !kind.is_circumnavigation() {
            cfg.duration = Some(DEFAULT_INTERCEPT_DURATION);
        }
        cfg
    }

    pub fn with_truth(mut self, truth: TruthModel) -> Self {
        self.truth_model = truth;
        self
    }

    pub fn orbit(&self) -> Result<TargetOrbit> {
        TargetOrbit::from_altitude(self.mu, self.chief_altitude)
    }

    /// Period of one lap for circumnavigation kinds.
    pub fn lap_period(&self, orbit: &TargetOrbit) -> f64 {
        match self.maneuver_kind {
            ManeuverKind::CircleForced => self.circle_period.unwrap_or_else(|| orbit.period()),
            _ => orbit.period(),
        }
    }

    /// Total simulated time, s.
    pub fn effective_duration(&self, orbit: &TargetOrbit) -> f64 {
        if self.maneuver_kind.is_circumnavigation() {
            self.lap_period(orbit) * self.laps as f64
        } else {
            self.duration.unwrap_or(DEFAULT_INTERCEPT_DURATION)
        }
    }

    pub fn intercept_start_point(&self) -> (f64, f64) {
        self.intercept_start.unwrap_or((self.size, 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(RpodError::InvalidConfig(msg));
        if !(self.chief_altitude > 0.0) || !self.chief_altitude.is_finite() {
            return bad(format!("chief altitude must be positive, got {}", self.chief_altitude));
        }
        if !(self.size > 0.0) || !self.size.is_finite() {
            return bad(format!("size must be positive, got {}", self.size));
        }
        self.orbit()?;
        match self.maneuver_kind {
            ManeuverKind::NmcUnforced | ManeuverKind::CircleForced => {
                if self.impulse_count < 3 {
                    return Err(RpodError::InsufficientWaypoints {
                        count: self.impulse_count,
                        min: 3,
                    });
                }
                if self.laps == 0 {
                    return bad("at least one lap is required".into());
                }
                if self.duration.is_some() {
                    return bad(
                        "circumnavigation duration is derived from laps and the lap period".into(),
                    );
                }
                if let Some(p) = self.circle_period {
                    if !(p > 0.0) {
                        return bad(format!("circle period must be positive, got {p}"));
                    }
                }
            }
            ManeuverKind::InterceptForced | ManeuverKind::InterceptUnforced => {
                let min = if self.maneuver_kind.is_forced() { 2 } else { 1 };
                if self.impulse_count < min {
                    return Err(RpodError::InsufficientWaypoints {
                        count: self.impulse_count,
                        min,
                    });
                }
                match self.duration {
                    Some(d) if d > 0.0 && d.is_finite() => {}
                    other => return bad(format!("intercept duration must be positive, got {other:?}")),
                }
            }
        }
        Ok(())
    }
}

/// One CSV/JSON row summarising a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub kind: ManeuverKind,
    pub size_km: f64,
    pub impulse_count: usize,
    pub altitude_km: f64,
    pub total_dv_km_s: f64,
    pub insertion_dv_km_s: f64,
    pub max_miss_km: f64,
    pub duration_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub samples: Vec<TrajectorySample>,
    /// Correction / targeting burns in time order, insertion excluded.
    pub impulses: Vec<ImpulseRecord>,
    pub insertion: Option<ImpulseRecord>,
    pub total_dv: f64,
    pub insertion_dv: f64,
    /// Largest arrival miss over all waypoints, km.
    pub max_waypoint_miss: f64,
    /// Distance from the final truth position to the final waypoint, km.
    pub final_miss: f64,
    /// Largest uncorrected cross-track speed seen at a burn, km/s.
    pub max_cross_track_speed: f64,
    pub duration: f64,
    pub config: CampaignConfig,
}

impl CampaignResult {
    /// Sum of impulse magnitudes in time order, insertion first when counted.
    pub fn accumulated_dv(&self) -> f64 {
        let mut total = 0.0;
        if self.config.count_insertion_dv {
            total += self.insertion_dv;
        }
        for imp in &self.impulses {
            total += imp.magnitude;
        }
        total
    }

    /// Δv of each complete lap (circumnavigation kinds).
    pub fn lap_dv(&self) -> Vec<f64> {
        if !self.config.maneuver_kind.is_circumnavigation() {
            return vec![self.impulses.iter().map(|i| i.magnitude).sum()];
        }
        self.impulses
            .chunks(self.config.impulse_count)
            .map(|c| c.iter().map(|i| i.magnitude).sum())
            .collect()
    }

    pub fn row(&self) -> ResultRow {
        ResultRow {
            kind: self.config.maneuver_kind,
            size_km: self.config.size,
            impulse_count: self.config.impulse_count,
            altitude_km: self.config.chief_altitude,
            total_dv_km_s: self.total_dv,
            insertion_dv_km_s: self.insertion_dv,
            max_miss_km: self.max_waypoint_miss,
            duration_s: self.duration,
        }
    }
}

/// Chaser state carried by whichever truth model is in use.
enum Chaser {
    Inertial(InertialState),
    Relative(RelativeState),
}

struct Flight<'a> {
    cfg: &'a CampaignConfig,
    orbit: TargetOrbit,
    chaser: Chaser,
    t: f64,
    samples: Vec<TrajectorySample>,
}

impl<'a> Flight<'a> {
    fn new(cfg: &'a CampaignConfig, orbit: TargetOrbit, rel: RelativeState) -> Result<Self> {
        let chaser = match cfg.truth_model {
            TruthModel::Cw => Chaser::Relative(rel),
            TruthModel::TwoBody => {
                let target = orbit.state_at(0.0);
                Chaser::Inertial(hill_to_eci_with(&hill_basis(&target)?, &target, &rel))
            }
        };
        Ok(Self {
            cfg,
            orbit,
            chaser,
            t: 0.0,
            samples: Vec::new(),
        })
    }

    fn relative(&self) -> Result<RelativeState> {
        match &self.chaser {
            Chaser::Relative(rel) => Ok(*rel),
            Chaser::Inertial(c) => {
                let target = self.orbit.state_at(self.t);
                Ok(eci_to_hill_with(&hill_basis(&target)?, &target, c))
            }
        }
    }

    fn apply_dv(&mut self, dv: Vector3<f64>) -> Result<()> {
        match &mut self.chaser {
            Chaser::Relative(rel) => {
                rel.vx += dv.x;
                rel.vy += dv.y;
                rel.vz += dv.z;
            }
            Chaser::Inertial(c) => {
                let basis = hill_basis(&self.orbit.state_at(self.t))?;
                c.velocity += basis.rotation.transpose() * dv;
            }
        }
        Ok(())
    }

    fn sample(&self, t: f64, chaser: &Chaser) -> Result<TrajectorySample> {
        let target = self.orbit.state_at(t);
        let basis = hill_basis(&target)?;
        Ok(match chaser {
            Chaser::Relative(rel) => TrajectorySample {
                t,
                target,
                chaser: hill_to_eci_with(&basis, &target, rel),
                rel: *rel,
            },
            Chaser::Inertial(c) => TrajectorySample {
                t,
                target,
                chaser: *c,
                rel: eci_to_hill_with(&basis, &target, c),
            },
        })
    }

    /// Coast to absolute time `t_end`, recording samples on `[t, t_end)`.
    fn coast(&mut self, t_end: f64) -> Result<()> {
        let dt = t_end - self.t;
        let k = self.cfg.samples_per_segment;
        let times: Vec<f64> = (0..k).map(|i| self.t + dt * i as f64 / k as f64).collect();
        match &self.chaser {
            Chaser::Relative(rel) => {
                let n = self.orbit.n();
                for &ts in &times {
                    let s = propagate_cw(rel, n, ts - self.t);
                    self.samples.push(self.sample(ts, &Chaser::Relative(s))?);
                }
                self.chaser = Chaser::Relative(propagate_cw(rel, n, dt));
            }
            Chaser::Inertial(c) => {
                let mut start = *c;
                start.epoch = self.t;
                let states = propagate_two_body(
                    &start,
                    self.orbit.mu(),
                    dt,
                    None,
                    &times,
                    &self.cfg.step_control,
                )?;
                let (last, inner) = states.split_last().expect("end state always present");
                for s in inner {
                    self.samples.push(self.sample(s.epoch, &Chaser::Inertial(*s))?);
                }
                let mut end = *last;
                end.epoch = t_end;
                self.chaser = Chaser::Inertial(end);
            }
        }
        self.t = t_end;
        Ok(())
    }

    fn finish(mut self) -> Result<Vec<TrajectorySample>> {
        let end = self.sample(self.t, &self.chaser)?;
        self.samples.push(end);
        Ok(self.samples)
    }
}

/// A plan to fly: waypoints in time order starting at the insertion point.
struct Plan {
    points: Vec<Waypoint>,
    /// Target of a final burn at the last point (loop closure), if any.
    closing: Option<Waypoint>,
    /// Post-insertion velocity overriding the targeting solve on the first leg.
    insertion_velocity: Option<Vector2<f64>>,
    /// Whether the first burn is an insertion (reported separately).
    first_is_insertion: bool,
}

fn build_plan(cfg: &CampaignConfig, orbit: &TargetOrbit) -> Result<Plan> {
    let n = orbit.n();
    match cfg.maneuver_kind {
        ManeuverKind::NmcUnforced | ManeuverKind::CircleForced => {
            let count = cfg.impulse_count;
            let lap = cfg.lap_period(orbit);
            let base = if cfg.maneuver_kind == ManeuverKind::NmcUnforced {
                waypoints_nmc(cfg.size, n, count, 0.0)?
            } else {
                waypoints_circle(cfg.size, count, lap, 0.0)?
            };
            let total = count * cfg.laps;
            let at = |k: usize| {
                let w = base[k % count];
                Waypoint {
                    t: lap * k as f64 / count as f64,
                    ..w
                }
            };
            let insertion_velocity = if cfg.maneuver_kind == ManeuverKind::NmcUnforced {
                let s = nmc_initial_state(cfg.size, n)?;
                Some(Vector2::new(s.vx, s.vy))
            } else {
                None
            };
            Ok(Plan {
                points: (0..=total).map(at).collect(),
                closing: Some(at(total + 1)),
                insertion_velocity,
                first_is_insertion: true,
            })
        }
        ManeuverKind::InterceptForced => {
            let duration = cfg.effective_duration(orbit);
            Ok(Plan {
                points: waypoints_line(
                    cfg.intercept_start_point(),
                    cfg.rendezvous,
                    cfg.impulse_count + 1,
                    duration,
                    0.0,
                )?,
                closing: None,
                insertion_velocity: None,
                first_is_insertion: false,
            })
        }
        ManeuverKind::InterceptUnforced => {
            let duration = cfg.effective_duration(orbit);
            Ok(Plan {
                points: waypoints_line(cfg.intercept_start_point(), cfg.rendezvous, 2, duration, 0.0)?,
                closing: None,
                insertion_velocity: None,
                first_is_insertion: false,
            })
        }
    }
}

/// Fly one campaign against the configured truth model.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    config.validate()?;
    let orbit = config.orbit()?;
    let n = orbit.n();
    let plan = build_plan(config, &orbit)?;
    let points = &plan.points;

    // Chaser holds station at the first waypoint before the first burn.
    let start = points[0];
    let pre = RelativeState::new(start.x, start.y, start.z.unwrap_or(0.0), 0.0, 0.0, 0.0);

    let (first_dv, first_rel) = match plan.insertion_velocity {
        Some(v) => {
            let dv = Vector3::new(v.x - pre.vx, v.y - pre.vy, 0.0);
            (ImpulseRecord::new(start.t, dv), RelativeState { vx: v.x, vy: v.y, ..pre })
        }
        None => {
            let (imp, v) =
                cw_target_impulse(&pre, &points[1], points[1].t - start.t, n).map_err(|e| e.in_segment(0))?;
            (imp, RelativeState { vx: v.x, vy: v.y, ..pre })
        }
    };

    let mut flight = Flight::new(config, orbit, first_rel)?;
    let mut impulses = Vec::new();
    let mut insertion = None;
    if plan.first_is_insertion {
        insertion = Some(first_dv);
    } else {
        impulses.push(first_dv);
    }

    let mut max_miss: f64 = 0.0;
    let mut max_cross: f64 = pre.vz.abs();
    let last = points.len() - 1;
    for seg in 1..=last {
        flight.coast(points[seg].t)?;
        let rel = flight.relative()?;
        let miss = (rel.position() - points[seg].position()).norm();
        max_miss = max_miss.max(miss);

        let next = if seg < last { Some(points[seg + 1]) } else { plan.closing };
        if let Some(next) = next {
            let (imp, _) =
                cw_target_impulse(&rel, &next, next.t - points[seg].t, n).map_err(|e| e.in_segment(seg))?;
            max_cross = max_cross.max(rel.vz.abs());
            flight.apply_dv(imp.dv())?;
            impulses.push(imp);
        }
    }

    let final_rel = flight.relative()?;
    let final_miss = (final_rel.position() - points[last].position()).norm();
    let samples = flight.finish()?;

    let insertion_dv = insertion.map_or(0.0, |i| i.magnitude);
    let mut result = CampaignResult {
        samples,
        impulses,
        insertion,
        total_dv: 0.0,
        insertion_dv,
        max_waypoint_miss: max_miss,
        final_miss,
        max_cross_track_speed: max_cross,
        duration: config.effective_duration(&orbit),
        config: config.clone(),
    };
    result.total_dv = result.accumulated_dv();
    Ok(result)
}

/// Run independent campaigns in parallel; output order follows `configs`.
pub fn run_all(configs: &[CampaignConfig]) -> Result<Vec<CampaignResult>> {
    configs.par_iter().map(run_campaign).collect()
}

/// Forced and unforced arms of one comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub forced: CampaignResult,
    pub unforced: CampaignResult,
}

impl Comparison {
    /// Name of the arm that used less Δv ("forced" or "unforced"; ties go to unforced).
    pub fn lower_arm(&self) -> &'static str {
        if self.unforced.total_dv <= self.forced.total_dv {
            "unforced"
        } else {
            "forced"
        }
    }

    /// Δv of the costlier arm divided by Δv of the cheaper one.
    pub fn ratio(&self) -> f64 {
        let (a, b) = (self.forced.total_dv, self.unforced.total_dv);
        a.max(b) / a.min(b)
    }

    pub fn summary(&self) -> String {
        let f = &self.forced.config;
        format!(
            "{} vs {} size_km={} impulses={}: {} arm used less dv (forced {:.6e} km/s, unforced {:.6e} km/s, ratio {:.4})",
            self.forced.config.maneuver_kind,
            self.unforced.config.maneuver_kind,
            f.size,
            f.impulse_count,
            self.lower_arm(),
            self.forced.total_dv,
            self.unforced.total_dv,
            self.ratio()
        )
    }
}

/// NMC vs forced circle for every (size, count) cell, two-body truth.
///
/// Rows come back in grid order: size outer, count inner, unforced before forced.
pub fn sweep_circumnavigation(
    sizes: &[f64],
    impulse_counts: &[usize],
    chief_altitude: f64,
) -> Result<Vec<CampaignResult>> {
    let base = CampaignConfig {
        chief_altitude,
        ..CampaignConfig::default()
    };
    sweep_with(sizes, impulse_counts, &base)
}

/// Sweep using `base` for every setting other than kind, size and count.
pub fn sweep_with(
    sizes: &[f64],
    impulse_counts: &[usize],
    base: &CampaignConfig,
) -> Result<Vec<CampaignResult>> {
    if sizes.is_empty() || impulse_counts.is_empty() {
        return Err(RpodError::InvalidConfig("sweep grids must be non-empty".into()));
    }
    let cells: Vec<CampaignConfig> = sizes
        .iter()
        .flat_map(|&size| {
            impulse_counts.iter().flat_map(move |&count| {
                [ManeuverKind::NmcUnforced, ManeuverKind::CircleForced].map(|kind| CampaignConfig {
                    maneuver_kind: kind,
                    size,
                    impulse_count: count,
                    duration: None,
                    ..base.clone()
                })
            })
        })
        .collect();
    run_all(&cells)
}

/// Pair up sweep output into forced/unforced comparisons.
pub fn pair_comparisons(results: &[CampaignResult]) -> Vec<Comparison> {
    let mut out = Vec::new();
    for (i, r) in results.iter().enumerate() {
        if r.config.maneuver_kind.is_forced() {
            continue;
        }
        let partner = results[i + 1..].iter().chain(results[..i].iter()).find(|o| {
            o.config.maneuver_kind.is_forced()
                && o.config.size == r.config.size
                && o.config.impulse_count == r.config.impulse_count
                && o.config.maneuver_kind.is_circumnavigation() == r.config.maneuver_kind.is_circumnavigation()
        });
        if let Some(f) = partner {
            out.push(Comparison {
                forced: f.clone(),
                unforced: r.clone(),
            });
        }
    }
    out
}

/// Forced straight-line approach vs a single CW transfer burn over the same window.
pub fn intercept_experiment(
    start_offset: (f64, f64),
    rendezvous_point: (f64, f64),
    duration: f64,
    impulse_count: usize,
    chief_altitude: f64,
) -> Result<Comparison> {
    let base = CampaignConfig {
        chief_altitude,
        size: start_offset.0.hypot(start_offset.1).max(f64::MIN_POSITIVE),
        intercept_start: Some(start_offset),
        rendezvous: rendezvous_point,
        duration: Some(duration),
        impulse_count,
        ..CampaignConfig::default()
    };
    intercept_with(&base)
}

/// Run both intercept arms from `base` (its kind is overridden).
pub fn intercept_with(base: &CampaignConfig) -> Result<Comparison> {
    let forced = run_campaign(&CampaignConfig {
        maneuver_kind: ManeuverKind::InterceptForced,
        ..base.clone()
    })?;
    let unforced = run_campaign(&CampaignConfig {
        maneuver_kind: ManeuverKind::InterceptUnforced,
        ..base.clone()
    })?;
    Ok(Comparison { forced, unforced })
}

/// Gap between two-body and CW free drift from the same natural-motion state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftDivergence {
    /// Largest |rho_truth - rho_cw| over the sampled arc, km.
    pub max_divergence: f64,
    pub initial_separation: f64,
    /// Largest |rho_cw| over the sampled arc, km.
    pub peak_separation: f64,
}

impl DriftDivergence {
    pub fn relative_to_initial(&self) -> f64 {
        self.max_divergence / self.initial_separation
    }

    pub fn relative_to_peak(&self) -> f64 {
        self.max_divergence / self.peak_separation
    }
}

/// Free-drift CW vs two-body comparison from an NMC state of radial offset `separation`.
pub fn free_drift_divergence(
    chief_altitude: f64,
    separation: f64,
    duration: f64,
    samples: usize,
    step_control: &StepControl,
) -> Result<DriftDivergence> {
    let orbit = TargetOrbit::from_altitude(MU_EARTH, chief_altitude)?;
    let rel0 = nmc_initial_state(separation, orbit.n())?;
    let target0 = orbit.state_at(0.0);
    let chaser0 = hill_to_eci_with(&hill_basis(&target0)?, &target0, &rel0);
    let count = samples.max(1);
    let times: Vec<f64> = (1..=count)
        .map(|i| (duration * i as f64 / count as f64).min(duration))
        .collect();
    let states = propagate_two_body(&chaser0, orbit.mu(), duration, None, &times, step_control)?;
    let mut out = DriftDivergence {
        max_divergence: 0.0,
        initial_separation: rel0.position().norm(),
        peak_separation: rel0.position().norm(),
    };
    for s in &states {
        let target = orbit.state_at(s.epoch);
        let truth = eci_to_hill_with(&hill_basis(&target)?, &target, s);
        let cw = propagate_cw(&rel0, orbit.n(), s.epoch);
        out.max_divergence = out.max_divergence.max((truth.position() - cw.position()).norm());
        out.peak_separation = out.peak_separation.max(cw.position().norm());
    }
    Ok(out)
}
