//! Acceptance checks, one line per criterion. Exits nonzero if any fail.
//!
//! Run with `cargo test -p rpod-cli --test acceptance --release`.

use std::f64::consts::TAU;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpod_core::campaign::{
    free_drift_divergence, intercept_experiment, run_campaign, sweep_circumnavigation, CampaignConfig,
    CampaignResult, ManeuverKind, TruthModel,
};
use rpod_core::dynamics::{
    cw_derivative, integrate_to, propagate_cw, propagate_two_body, StepControl, TargetOrbit, MU_EARTH,
};
use rpod_core::guidance::{cw_target_impulse, transfer_determinant, Waypoint, SINGULARITY_TOL};
use rpod_core::RelativeState;

const ALT: f64 = 2000.0;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Outcome {
            passed,
            summary: summary.into(),
            details: Vec::new(),
        }
    }
}

fn sci(xs: &[f64], digits: usize) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.digits$e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn orbit() -> TargetOrbit {
    TargetOrbit::from_altitude(MU_EARTH, ALT).unwrap()
}

fn zero_mismatch_baseline() -> Outcome {
    let cfg = CampaignConfig::new(ManeuverKind::NmcUnforced, ALT, 10.0, 16).with_truth(TruthModel::Cw);
    let r = run_campaign(&cfg).unwrap();
    Outcome::new(
        r.total_dv < 1e-9,
        format!("CW-truth NMC 10 km x 16 burns: correction dv {:.3e} km/s (< 1e-9)", r.total_dv),
    )
}

fn propagator_fidelity() -> Outcome {
    let o = TargetOrbit::new(MU_EARTH, 8378.137).unwrap();
    let s0 = o.state_at(0.0);
    let control = StepControl::default();
    let one = propagate_two_body(&s0, MU_EARTH, o.period(), None, &[], &control).unwrap();
    let closure = (one[one.len() - 1].position - s0.position).norm();

    let span = 10.0 * o.period();
    let times: Vec<f64> = (1..=500).map(|i| span * i as f64 / 500.0).collect();
    let states = propagate_two_body(&s0, MU_EARTH, span, None, &times, &control).unwrap();
    let (e0, h0) = (s0.specific_energy(MU_EARTH), s0.angular_momentum());
    let mut de: f64 = 0.0;
    let mut dh: f64 = 0.0;
    for s in &states {
        de = de.max(((s.specific_energy(MU_EARTH) - e0) / e0).abs());
        dh = dh.max((s.angular_momentum() - h0).norm() / h0.norm());
    }
    Outcome::new(
        closure < 1e-6 && de < 1e-10 && dh < 1e-10,
        format!("one-period closure {closure:.3e} km (< 1e-6); 10-period drift energy {de:.3e}, |h| {dh:.3e} (< 1e-10)"),
    )
}

fn cw_vs_ode_oracle() -> Outcome {
    let n = orbit().n();
    let period = TAU / n;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rhs = |_t: f64, y: &[f64; 6]| Ok(cw_derivative(&RelativeState::from_array(y), n, Vector3::zeros()).to_array());
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s0 = RelativeState::new(
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-0.1..0.1),
            rng.random_range(-0.1..0.1),
            rng.random_range(-0.1..0.1),
        );
        // The oracle runs tighter than the 1e-12 default so its own error sits well under the bound.
        let ode = integrate_to(&rhs, 0.0, s0.to_array(), period, &StepControl::with_tolerance(1e-14)).unwrap();
        let closed = propagate_cw(&s0, n, period);
        worst = worst.max((RelativeState::from_array(&ode).to_vector() - closed.to_vector()).amax());
    }
    Outcome::new(worst < 1e-10, format!("100 random states, one period: max |stm - ode| {worst:.3e} (< 1e-10)"))
}

fn targeting_round_trip() -> Outcome {
    let n = orbit().n();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_hit: f64 = 0.0;
    let mut worst_zero: f64 = 0.0;
    let mut solved = 0;
    while solved < 1000 {
        let ts = rng.random_range(0.01..2.0) * TAU / n;
        if transfer_determinant(n, ts).abs() < 1e3 * SINGULARITY_TOL {
            continue;
        }
        let rel = RelativeState::new(
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            0.0,
            rng.random_range(-0.05..0.05),
            rng.random_range(-0.05..0.05),
            0.0,
        );
        let wp = Waypoint::new(ts, rng.random_range(-100.0..100.0), rng.random_range(-100.0..100.0));
        let (_, v) = cw_target_impulse(&rel, &wp, ts, n).unwrap();
        let arrived = propagate_cw(&RelativeState { vx: v.x, vy: v.y, ..rel }, n, ts);
        worst_hit = worst_hit.max((arrived.x - wp.x).hypot(arrived.y - wp.y));

        let img = propagate_cw(&rel, n, ts);
        let (imp, _) = cw_target_impulse(&rel, &Waypoint::new(ts, img.x, img.y), ts, n).unwrap();
        worst_zero = worst_zero.max(imp.magnitude);
        solved += 1;
    }
    Outcome::new(
        worst_hit < 1e-9 && worst_zero < 1e-12,
        format!("1000 problems: max miss {worst_hit:.3e} km (< 1e-9), fixed-point dv {worst_zero:.3e} km/s (< 1e-12)"),
    )
}

fn sweep_reproduction() -> Outcome {
    let sizes = [1.0, 10.0, 50.0, 100.0, 250.0, 500.0, 750.0, 1000.0];
    let counts = [4usize, 8, 16, 32, 64];
    let rows = sweep_circumnavigation(&sizes, &counts, ALT).unwrap();
    let dv = |kind: ManeuverKind, size: f64, count: usize| -> f64 {
        rows.iter()
            .find(|r: &&CampaignResult| {
                r.config.maneuver_kind == kind && r.config.size == size && r.config.impulse_count == count
            })
            .unwrap()
            .total_dv
    };

    let mut details = Vec::new();
    let mut a_ok = true;
    for &c in &counts {
        let col: Vec<f64> = sizes.iter().map(|&s| dv(ManeuverKind::CircleForced, s, c)).collect();
        if !col.windows(2).all(|w| w[1] > w[0]) {
            a_ok = false;
            details.push(format!("(a) forced not increasing in size at count {c}: {}", sci(&col, 4)));
        }
    }
    let mut b_ok = true;
    for &s in &sizes {
        let row: Vec<f64> = counts.iter().map(|&c| dv(ManeuverKind::NmcUnforced, s, c)).collect();
        let bad: Vec<String> = counts
            .windows(2)
            .zip(row.windows(2))
            .filter(|(_, w)| w[1] > w[0])
            .map(|(c, w)| format!("{}->{}: {:.4e} -> {:.4e}", c[0], c[1], w[0], w[1]))
            .collect();
        if !bad.is_empty() {
            b_ok = false;
            details.push(format!("(b) unforced rises with count at {s} km: {}", bad.join(", ")));
        }
    }
    let mut c_ok = true;
    for &s in sizes.iter().filter(|&&s| s >= 750.0) {
        for c in [4usize, 8] {
            let (u, f) = (dv(ManeuverKind::NmcUnforced, s, c), dv(ManeuverKind::CircleForced, s, c));
            let holds = u > f;
            c_ok &= holds;
            details.push(format!(
                "(c) {s} km, count {c}: unforced {u:.4e} {} forced {f:.4e} km/s",
                if holds { ">" } else { "<=" }
            ));
        }
    }
    let flag = |ok: bool| if ok { "pass" } else { "fail" };
    Outcome {
        passed: a_ok && b_ok && c_ok,
        summary: format!(
            "40-cell grid: (a) forced monotone in size {}; (b) unforced non-increasing in count {}; (c) crossover at >= 750 km for counts 4 and 8 {}",
            flag(a_ok),
            flag(b_ok),
            flag(c_ok)
        ),
        details,
    }
}

fn intercept_reproduction() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for count in [4, 8, 16] {
        let pair = intercept_experiment((10.0, 0.0), (0.0, 0.0), 3600.0, count, ALT).unwrap();
        let cheaper = pair.unforced.total_dv < pair.forced.total_dv;
        let close = pair.forced.final_miss < 0.1 && pair.unforced.final_miss < 0.1;
        ok &= cheaper && close;
        details.push(format!(
            "count {count}: forced {:.4e} km/s (miss {:.2e} km), unforced {:.4e} km/s (miss {:.2e} km)",
            pair.forced.total_dv, pair.forced.final_miss, pair.unforced.total_dv, pair.unforced.final_miss
        ));
    }
    Outcome {
        passed: ok,
        summary: "10 km radial offset, 60 min: unforced dv < forced dv at 4, 8, 16 legs; both misses < 100 m".into(),
        details,
    }
}

fn linearization_trend() -> Outcome {
    let period = orbit().period();
    let seps = [1.0, 10.0, 100.0, 500.0];
    let rel: Vec<f64> = seps
        .iter()
        .map(|&s| {
            free_drift_divergence(ALT, s, period, 400, &StepControl::default())
                .unwrap()
                .relative_to_initial()
        })
        .collect();
    Outcome::new(
        rel.windows(2).all(|w| w[1] > w[0]),
        format!("divergence / separation over 1, 10, 100, 500 km: {}", sci(&rel, 3)),
    )
}

fn run_cli(args: &[&str], threads: Option<&str>) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rpod"));
    cmd.args(args).arg("--out").arg(&path);
    if let Some(t) = threads {
        cmd.env("RAYON_NUM_THREADS", t);
    }
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(&path).unwrap()
}

fn determinism() -> Outcome {
    let manifests: [&[&str]; 3] = [
        &["sweep", "--sizes-km", "1,10,100,500,1000", "--impulses", "4,8,16,32,64"],
        &["intercept", "--altitude-km", "2000", "--duration-min", "60", "--impulses", "4,8,16"],
        &["circumnav", "--size-km", "750", "--impulses", "4", "--laps", "2", "--count-insertion"],
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for args in manifests {
        let a = run_cli(args, None);
        let b = run_cli(args, None);
        let one_thread = run_cli(args, Some("1"));
        let same = a == b && a == one_thread;
        ok &= same;
        details.push(format!("{}: {} bytes, identical across reruns and 1 thread: {same}", args[0], a.len()));
    }
    Outcome {
        passed: ok,
        summary: "repeated CLI runs give byte-identical CSV".into(),
        details,
    }
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("zero-mismatch baseline", Duration::from_secs(1), zero_mismatch_baseline),
        ("propagator fidelity", Duration::from_secs(5), propagator_fidelity),
        ("CW closed form vs ODE oracle", Duration::from_secs(10), cw_vs_ode_oracle),
        ("targeting round trip", Duration::from_secs(60), targeting_round_trip),
        ("circumnavigation sweep trends", Duration::from_secs(300), sweep_reproduction),
        ("intercept comparison", Duration::from_secs(30), intercept_reproduction),
        ("linearization-validity trend", Duration::from_secs(60), linearization_trend),
        ("determinism", Duration::from_secs(120), determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let passed = outcome.passed && elapsed <= *budget;
        if !passed {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {} [{:.3} s, budget {} s]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.summary,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        for d in &outcome.details {
            println!("    {d}");
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
