//! Command-line grammar and its translation into a [`RunManifest`].

use std::path::PathBuf;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rpod_core::campaign::{CampaignConfig, ManeuverKind, TruthModel, DEFAULT_ALTITUDE};
use rpod_core::dynamics::{StepControl, EARTH_RADIUS, MU_EARTH};

use crate::manifest::{Command, OutputFormat, RunManifest, SweepGrid};
use crate::UsageError;

#[derive(Debug, Parser)]
#[command(name = "rpod", version, about = "Forced vs unforced RPOD fuel experiments under two-body truth")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// NMC and forced-circle campaigns at one or more sizes.
    #[command(allow_negative_numbers = true)]
    Circumnav(CircumnavArgs),
    /// Straight-line forced approach vs a single CW transfer burn.
    #[command(allow_negative_numbers = true)]
    Intercept(InterceptArgs),
    /// Full size x impulse-count grid of NMC vs forced circle.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Self-test of the zero-mismatch baselines and conservation laws.
    #[command(allow_negative_numbers = true)]
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Truth {
    TwoBody,
    Cw,
}

impl From<Truth> for TruthModel {
    fn from(t: Truth) -> Self {
        match t {
            Truth::TwoBody => TruthModel::TwoBody,
            Truth::Cw => TruthModel::Cw,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Shape {
    Both,
    Nmc,
    Circle,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long = "altitude-km", default_value_t = DEFAULT_ALTITUDE)]
    altitude_km: f64,
    #[arg(long, value_enum, default_value = "two-body")]
    truth: Truth,
    /// Add the insertion burn to total Δv.
    #[arg(long = "count-insertion")]
    count_insertion: bool,
    /// Integrator absolute and relative tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, required = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CircumnavArgs {
    #[arg(long = "size-km", required = true, value_delimiter = ',')]
    size_km: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "8")]
    impulses: Vec<usize>,
    #[arg(long, value_enum, default_value = "both")]
    shape: Shape,
    #[arg(long, default_value_t = 1)]
    laps: usize,
    /// Lap period of the forced circle; defaults to the chief period.
    #[arg(long = "circle-period-min")]
    circle_period_min: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct InterceptArgs {
    #[arg(long = "duration-min", default_value_t = 60.0)]
    duration_min: f64,
    /// Forced-arm leg counts; the unforced arm always flies one burn.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    impulses: Vec<usize>,
    /// Start point x,y in the Hill frame.
    #[arg(long = "start-km", value_delimiter = ',', default_values_t = [10.0, 0.0])]
    start_km: Vec<f64>,
    #[arg(long = "rendezvous-km", value_delimiter = ',', default_values_t = [0.0, 0.0])]
    rendezvous_km: Vec<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long = "sizes-km", required = true, value_delimiter = ',')]
    sizes_km: Vec<f64>,
    #[arg(long, required = true, value_delimiter = ',')]
    impulses: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    laps: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Gravitational parameter used by every check.
    #[arg(long = "mu-km3-s2", default_value_t = MU_EARTH)]
    mu_km3_s2: f64,
    /// Optional JSON report file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn usage(flag: &str, message: impl Into<String>) -> UsageError {
    UsageError {
        flag: Some(flag.to_string()),
        message: message.into(),
        rendered: None,
        is_help: false,
    }
}

fn from_clap(err: clap::Error) -> UsageError {
    let is_help = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion)
        || err.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand;
    let flag = match err.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => Some(s.clone()),
        Some(ContextValue::Strings(v)) => v.first().cloned(),
        _ => None,
    }
    .map(|s| s.split([' ', '=']).next().unwrap_or_default().to_string());
    let message = err
        .to_string()
        .lines()
        .next()
        .unwrap_or_default()
        .trim_start_matches("error: ")
        .to_string();
    UsageError {
        flag,
        message,
        rendered: Some(err.render().to_string()),
        is_help,
    }
}

fn base_config(common: &Common) -> Result<CampaignConfig, UsageError> {
    if !(common.altitude_km > 0.0) || !common.altitude_km.is_finite() {
        return Err(usage("--altitude-km", format!("altitude must be positive, got {}", common.altitude_km)));
    }
    if EARTH_RADIUS + common.altitude_km == EARTH_RADIUS {
        return Err(usage("--altitude-km", "altitude too small to resolve"));
    }
    if !(common.tol > 0.0 && common.tol < 1.0) {
        return Err(usage("--tol", format!("tolerance must lie in (0, 1), got {}", common.tol)));
    }
    Ok(CampaignConfig {
        chief_altitude: common.altitude_km,
        truth_model: common.truth.into(),
        count_insertion_dv: common.count_insertion,
        step_control: StepControl::with_tolerance(common.tol),
        ..CampaignConfig::default()
    })
}

fn positive_sizes(flag: &str, sizes: &[f64]) -> Result<(), UsageError> {
    match sizes.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
        Some(s) => Err(usage(flag, format!("sizes must be positive, got {s}"))),
        None => Ok(()),
    }
}

fn min_count(counts: &[usize], min: usize) -> Result<(), UsageError> {
    match counts.iter().find(|&&c| c < min) {
        Some(c) => Err(usage("--impulses", format!("at least {min} impulses are required, got {c}"))),
        None => Ok(()),
    }
}

fn output(format: Format) -> OutputFormat {
    match format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    }
}

/// Parse a full argument vector (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<RunManifest, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(from_clap)?;
    let manifest = match cli.command {
        Sub::Circumnav(a) => {
            positive_sizes("--size-km", &a.size_km)?;
            min_count(&a.impulses, 3)?;
            if a.laps == 0 {
                return Err(usage("--laps", "at least one lap is required"));
            }
            let circle_period = match a.circle_period_min {
                Some(m) if !(m > 0.0) => return Err(usage("--circle-period-min", "period must be positive")),
                other => other.map(|m| m * 60.0),
            };
            let kinds = match a.shape {
                Shape::Both => vec![ManeuverKind::NmcUnforced, ManeuverKind::CircleForced],
                Shape::Nmc => vec![ManeuverKind::NmcUnforced],
                Shape::Circle => vec![ManeuverKind::CircleForced],
            };
            RunManifest {
                subcommand: Command::Circumnav,
                config: CampaignConfig {
                    laps: a.laps,
                    circle_period,
                    ..base_config(&a.common)?
                },
                grid: SweepGrid {
                    sizes_km: a.size_km,
                    impulse_counts: a.impulses,
                },
                kinds,
                output_path: a.common.out,
                format: output(a.common.format),
                seedless: true,
            }
        }
        Sub::Intercept(a) => {
            if !(a.duration_min > 0.0) || !a.duration_min.is_finite() {
                return Err(usage("--duration-min", format!("duration must be positive, got {}", a.duration_min)));
            }
            min_count(&a.impulses, 2)?;
            for (flag, v) in [("--start-km", &a.start_km), ("--rendezvous-km", &a.rendezvous_km)] {
                if v.len() != 2 || v.iter().any(|c| !c.is_finite()) {
                    return Err(usage(flag, "expected two finite coordinates x,y"));
                }
            }
            let start = (a.start_km[0], a.start_km[1]);
            let rendezvous = (a.rendezvous_km[0], a.rendezvous_km[1]);
            let offset = (start.0 - rendezvous.0).hypot(start.1 - rendezvous.1);
            RunManifest {
                subcommand: Command::Intercept,
                config: CampaignConfig {
                    maneuver_kind: ManeuverKind::InterceptForced,
                    size: if offset > 0.0 { offset } else { f64::MIN_POSITIVE },
                    duration: Some(a.duration_min * 60.0),
                    intercept_start: Some(start),
                    rendezvous,
                    ..base_config(&a.common)?
                },
                grid: SweepGrid {
                    sizes_km: vec![offset],
                    impulse_counts: a.impulses,
                },
                kinds: vec![ManeuverKind::InterceptForced, ManeuverKind::InterceptUnforced],
                output_path: a.common.out,
                format: output(a.common.format),
                seedless: true,
            }
        }
        Sub::Sweep(a) => {
            positive_sizes("--sizes-km", &a.sizes_km)?;
            min_count(&a.impulses, 3)?;
            if a.laps == 0 {
                return Err(usage("--laps", "at least one lap is required"));
            }
            RunManifest {
                subcommand: Command::Sweep,
                config: CampaignConfig {
                    laps: a.laps,
                    ..base_config(&a.common)?
                },
                grid: SweepGrid {
                    sizes_km: a.sizes_km,
                    impulse_counts: a.impulses,
                },
                kinds: vec![ManeuverKind::NmcUnforced, ManeuverKind::CircleForced],
                output_path: a.common.out,
                format: output(a.common.format),
                seedless: true,
            }
        }
        Sub::Validate(a) => {
            if a.mu_km3_s2.is_nan() {
                return Err(usage("--mu-km3-s2", "not a number"));
            }
            RunManifest {
                subcommand: Command::Validate,
                config: CampaignConfig {
                    mu: a.mu_km3_s2,
                    ..CampaignConfig::default()
                },
                grid: SweepGrid::default(),
                kinds: Vec::new(),
                output_path: a.out,
                format: OutputFormat::Json,
                seedless: true,
            }
        }
    };
    Ok(manifest)
}
