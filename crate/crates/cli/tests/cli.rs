use std::path::Path;
use std::process::Command as Process;

use rpod_cli::{
    emit_results, execute, main_with_args, parse_args, read_csv, run_manifest, Command, OutputFormat,
    RunManifest, CSV_HEADER, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION,
};
use rpod_core::campaign::{CampaignResult, ManeuverKind, ResultRow, TruthModel};

fn argv(line: &str) -> Vec<String> {
    std::iter::once("rpod".to_string())
        .chain(line.split_whitespace().map(str::to_string))
        .collect()
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_rpod"))
}

#[test]
fn sweep_example_parses_to_five_by_five_grid() {
    let m = parse_args(argv(
        "sweep --sizes-km 1,10,100,500,1000 --impulses 4,8,16,32,64 --altitude-km 2000 --out results.csv",
    ))
    .unwrap();
    assert_eq!(m.subcommand, Command::Sweep);
    assert_eq!(m.grid.sizes_km, vec![1.0, 10.0, 100.0, 500.0, 1000.0]);
    assert_eq!(m.grid.impulse_counts, vec![4, 8, 16, 32, 64]);
    assert_eq!(m.config.chief_altitude, 2000.0);
    assert_eq!(m.output_path.as_deref(), Some(Path::new("results.csv")));
    assert_eq!(m.format, OutputFormat::Csv);
    assert!(m.seedless);
    assert_eq!(m.cells().len(), 50);
}

#[test]
fn intercept_example_is_the_sixty_minute_scenario() {
    let m = parse_args(argv("intercept --altitude-km 2000 --duration-min 60 --impulses 8 --out i.csv")).unwrap();
    assert_eq!(m.subcommand, Command::Intercept);
    assert_eq!(m.config.duration, Some(3600.0));
    assert_eq!(m.config.chief_altitude, 2000.0);
    assert_eq!(m.config.intercept_start, Some((10.0, 0.0)));
    assert_eq!(m.config.rendezvous, (0.0, 0.0));
    let kinds: Vec<(ManeuverKind, usize)> = m.cells().iter().map(|c| (c.maneuver_kind, c.impulse_count)).collect();
    assert_eq!(kinds, vec![(ManeuverKind::InterceptForced, 8), (ManeuverKind::InterceptUnforced, 1)]);
}

#[test]
fn missing_out_names_the_flag() {
    for line in [
        "sweep --sizes-km 1 --impulses 4",
        "intercept --altitude-km 2000 --duration-min 60 --impulses 8",
        "circumnav --size-km 10",
    ] {
        let err = parse_args(argv(line)).unwrap_err();
        assert_eq!(err.flag.as_deref(), Some("--out"), "{line}: {err}");
        assert!(!err.is_help);
    }
}

#[test]
fn bad_values_name_their_flags() {
    let cases = [
        ("sweep --sizes-km 1,-5 --impulses 4 --out a.csv", "--sizes-km"),
        ("sweep --sizes-km 1 --impulses 2 --out a.csv", "--impulses"),
        ("sweep --sizes-km 1 --impulses 4 --altitude-km 0 --out a.csv", "--altitude-km"),
        ("intercept --duration-min -3 --out a.csv", "--duration-min"),
        ("intercept --impulses 1 --out a.csv", "--impulses"),
        ("circumnav --size-km 5 --laps 0 --out a.csv", "--laps"),
        ("sweep --sizes-km abc --impulses 4 --out a.csv", "--sizes-km"),
        ("sweep --sizes-km 1 --impulses 4 --truth newton --out a.csv", "--truth"),
    ];
    for (line, flag) in cases {
        let err = parse_args(argv(line)).unwrap_err();
        assert_eq!(err.flag.as_deref(), Some(flag), "{line}: {err}");
    }
}

#[test]
fn manifests_round_trip_through_json() {
    for line in [
        "sweep --sizes-km 1,10,100 --impulses 4,8 --altitude-km 1500.5 --truth cw --count-insertion --out r.csv",
        "circumnav --size-km 0.1,750 --impulses 16 --shape circle --laps 3 --circle-period-min 97.3 --tol 1e-10 --format json --out c.json",
        "intercept --start-km 3.3,-7.1 --rendezvous-km 0.2,0 --duration-min 45 --impulses 4,16 --out i.csv",
        "validate --mu-km3-s2 398600.4418",
        "validate --mu-km3-s2 -1 --out report.json",
    ] {
        let m = parse_args(argv(line)).unwrap();
        let text = m.to_json().unwrap();
        let back = RunManifest::from_json(&text).unwrap();
        assert_eq!(back, m, "{line}");
        assert_eq!(back.to_json().unwrap(), text);
    }
}

#[test]
fn fifty_campaign_sweep_writes_fifty_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let line = format!(
        "sweep --sizes-km 1,10,100,500,1000 --impulses 4,8,16,32,64 --out {}",
        path.display()
    );
    let m = parse_args(argv(&line)).unwrap();
    let mut stdout = Vec::new();
    execute(&m, &mut stdout).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 51);
    assert_eq!(lines[0], CSV_HEADER.join(","));
    let summary = String::from_utf8(stdout).unwrap();
    assert_eq!(summary.lines().filter(|l| l.contains(" arm used less dv")).count(), 25);
}

#[test]
fn csv_rows_parse_back_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let m = parse_args(argv(&format!(
        "circumnav --size-km 3.7,412.9 --impulses 4,32 --out {}",
        path.display()
    )))
    .unwrap();
    let results = run_manifest(&m).unwrap();
    emit_results(&results, &m).unwrap();
    let expected: Vec<ResultRow> = results.iter().map(CampaignResult::row).collect();
    let back = read_csv(&path).unwrap();
    assert_eq!(back.len(), expected.len());
    for (a, b) in back.iter().zip(&expected) {
        assert_eq!(a.kind, b.kind);
        assert_eq!(a.impulse_count, b.impulse_count);
        for (x, y) in [
            (a.size_km, b.size_km),
            (a.altitude_km, b.altitude_km),
            (a.total_dv_km_s, b.total_dv_km_s),
            (a.insertion_dv_km_s, b.insertion_dv_km_s),
            (a.max_miss_km, b.max_miss_km),
            (a.duration_s, b.duration_s),
        ] {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn json_output_mirrors_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.json");
    let m = parse_args(argv(&format!(
        "circumnav --size-km 25 --impulses 8 --truth cw --format json --out {}",
        path.display()
    )))
    .unwrap();
    assert_eq!(m.config.truth_model, TruthModel::Cw);
    let results = run_manifest(&m).unwrap();
    emit_results(&results, &m).unwrap();
    let rows: Vec<ResultRow> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let expected: Vec<ResultRow> = results.iter().map(CampaignResult::row).collect();
    assert_eq!(rows, expected);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let status = bin()
            .args(["sweep", "--sizes-km", "1,250,1000", "--impulses", "4,16", "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(status.status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn default_intercept_summary_favours_unforced() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.csv");
    let out = bin()
        .args(["intercept", "--altitude-km", "2000", "--duration-min", "60", "--impulses", "4,8,16", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let summaries: Vec<&str> = text.lines().filter(|l| l.contains("arm used less dv")).collect();
    assert_eq!(summaries.len(), 3);
    assert!(summaries.iter().all(|l| l.contains(": unforced arm used less dv")), "{text}");
}

#[test]
fn validate_passes_and_fails_on_poisoned_mu() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    assert_eq!(main_with_args(argv("validate"), &mut out, &mut err), EXIT_OK);
    let report = String::from_utf8(out).unwrap();
    assert!(report.lines().count() >= 6);
    assert!(report.lines().all(|l| l.starts_with("PASS") && l.contains("residual=")));

    let status = bin().args(["validate", "--mu-km3-s2", "-398600.4418"]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_VALIDATION));
    let text = String::from_utf8(status.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("FAIL kepler_closure")));
}

#[test]
fn exit_codes() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(main_with_args(argv("sweep --sizes-km 1"), &mut out, &mut err), EXIT_USAGE);
    assert_eq!(main_with_args(argv("--help"), &mut out, &mut err), EXIT_OK);
    // A singular intercept window is a physics error.
    let dir = tempfile::tempdir().unwrap();
    let period_min = 2.0 * std::f64::consts::PI * (8378.137f64.powi(3) / 398600.4418).sqrt() / 60.0;
    let status = bin()
        .args(["intercept", "--impulses", "2", "--duration-min", &format!("{period_min}"), "--out"])
        .arg(dir.path().join("x.csv"))
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2), "{}", String::from_utf8_lossy(&status.stderr));
}
