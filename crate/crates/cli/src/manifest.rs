use std::path::PathBuf;

use rpod_core::campaign::{CampaignConfig, ManeuverKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Circumnav,
    Intercept,
    Sweep,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub sizes_km: Vec<f64>,
    pub impulse_counts: Vec<usize>,
}

/// Everything needed to reproduce one invocation.
///
/// `config` is the base campaign; kind, size and impulse count are filled in
/// per cell from `kinds` and `grid`. The pipeline draws no random numbers, so
/// `seedless` is always true.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: Command,
    pub config: CampaignConfig,
    pub grid: SweepGrid,
    pub kinds: Vec<ManeuverKind>,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub seedless: bool,
}

impl RunManifest {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Campaign configurations in output order: size outer, count inner, kind innermost.
    ///
    /// Intercept manifests give one forced run per count, then a single
    /// one-burn unforced run.
    pub fn cells(&self) -> Vec<CampaignConfig> {
        let base = &self.config;
        match self.subcommand {
            Command::Validate => Vec::new(),
            Command::Intercept => {
                let mut cells: Vec<CampaignConfig> = self
                    .grid
                    .impulse_counts
                    .iter()
                    .map(|&c| CampaignConfig {
                        maneuver_kind: ManeuverKind::InterceptForced,
                        impulse_count: c,
                        ..base.clone()
                    })
                    .collect();
                cells.push(CampaignConfig {
                    maneuver_kind: ManeuverKind::InterceptUnforced,
                    impulse_count: 1,
                    ..base.clone()
                });
                cells
            }
            Command::Circumnav | Command::Sweep => {
                let mut cells = Vec::new();
                for &size in &self.grid.sizes_km {
                    for &count in &self.grid.impulse_counts {
                        for &kind in &self.kinds {
                            cells.push(CampaignConfig {
                                maneuver_kind: kind,
                                size,
                                impulse_count: count,
                                duration: None,
                                ..base.clone()
                            });
                        }
                    }
                }
                cells
            }
        }
    }
}
