//! Library half of the `rpod` command: argument parsing, manifests, result
//! files and the self-test, kept out of `main` so they can be tested directly.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;

use rpod_core::campaign::{pair_comparisons, run_all, CampaignResult, Comparison, ManeuverKind};
use rpod_core::RpodError;
use thiserror::Error;

mod args;
mod manifest;
mod output;
mod validate;

pub use args::parse_args;
pub use manifest::{Command, OutputFormat, RunManifest, SweepGrid};
pub use output::{emit_results, fmt_f64, read_csv, write_csv, write_json, CSV_HEADER};
pub use validate::{validate_suite, Check, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// Bad command line. `flag` names the offending option when one is known.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub flag: Option<String>,
    pub message: String,
    /// Full clap rendering (usage text, hints), when the error came from clap.
    pub rendered: Option<String>,
    /// `--help` / `--version`: not an error, just print `rendered`.
    pub is_help: bool,
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.flag {
            Some(flag) => write!(f, "{flag}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(#[from] UsageError),
    #[error(transparent)]
    Physics(#[from] RpodError),
    #[error("{0}")]
    Runtime(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("validation failed: {failed} of {total} checks")]
    Validation { failed: usize, total: usize },
}

impl CliError {
    pub(crate) fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation { .. } => EXIT_VALIDATION,
            _ => EXIT_RUNTIME,
        }
    }
}

/// Run every campaign a manifest describes, in manifest order.
pub fn run_manifest(manifest: &RunManifest) -> Result<Vec<CampaignResult>, CliError> {
    Ok(run_all(&manifest.cells())?)
}

/// Forced/unforced pairs for the summary lines.
pub fn comparisons(manifest: &RunManifest, results: &[CampaignResult]) -> Vec<Comparison> {
    match manifest.subcommand {
        Command::Intercept => {
            let Some(unforced) = results
                .iter()
                .find(|r| r.config.maneuver_kind == ManeuverKind::InterceptUnforced)
            else {
                return Vec::new();
            };
            results
                .iter()
                .filter(|r| r.config.maneuver_kind == ManeuverKind::InterceptForced)
                .map(|f| Comparison {
                    forced: f.clone(),
                    unforced: unforced.clone(),
                })
                .collect()
        }
        _ => pair_comparisons(results),
    }
}

/// Execute a manifest, writing its result file and human summaries to `out`.
pub fn execute(manifest: &RunManifest, out: &mut dyn Write) -> Result<(), CliError> {
    let stdout_err = |e| CliError::io("<stdout>", e);
    if manifest.subcommand == Command::Validate {
        let report = validate_suite(manifest.config.mu);
        for check in &report.checks {
            writeln!(out, "{}", check.line()).map_err(stdout_err)?;
        }
        if let Some(path) = &manifest.output_path {
            let text = serde_json::to_string_pretty(&report)?;
            std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))?;
        }
        if !report.passed() {
            return Err(CliError::Validation {
                failed: report.failures(),
                total: report.checks.len(),
            });
        }
        return Ok(());
    }

    let results = run_manifest(manifest)?;
    let rows = emit_results(&results, manifest)?;
    for cmp in comparisons(manifest, &results) {
        writeln!(out, "{}", cmp.summary()).map_err(stdout_err)?;
    }
    if let Some(path) = &manifest.output_path {
        writeln!(out, "wrote {rows} rows to {}", path.display()).map_err(stdout_err)?;
    }
    Ok(())
}

/// Parse, execute and map the outcome to an exit code.
pub fn main_with_args<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let manifest = match parse_args(argv) {
        Ok(m) => m,
        Err(e) if e.is_help => {
            let _ = write!(out, "{}", e.rendered.as_deref().unwrap_or_default());
            return EXIT_OK;
        }
        Err(e) => {
            let _ = match &e.rendered {
                Some(text) => write!(err, "{text}"),
                None => writeln!(err, "error: {e}"),
            };
            return EXIT_USAGE;
        }
    };
    match execute(&manifest, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
