//! Experiment configuration, deserialized from TOML.

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::group::GroupModel;
use crate::records::StepLaw;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Master seed; all randomness derives from it through fixed stream ids.
    #[serde(default)]
    pub seed: u64,
    pub scale: ScaleSpec,
    #[serde(default)]
    pub law: LawSpec,
    #[serde(default)]
    pub alpha: AlphaSpec,
    #[serde(default)]
    pub walk: WalkSpec,
    #[serde(default)]
    pub checks: CheckToggles,
    #[serde(default)]
    pub params: ParamSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

/// Where the scale comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleSpec {
    /// One of `preset`, `file`, `builder`, `tower`.
    pub source: String,
    /// Preset name for `source = "preset"`.
    #[serde(default)]
    pub preset: Option<String>,
    /// Path to a scale file for `source = "file"`.
    #[serde(default)]
    pub path: Option<String>,
    /// Group for the builder and tower sources: `free`, `lamplighter`,
    /// `free-product`.
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub modulus: Option<u32>,
    #[serde(default)]
    pub orders: Option<Vec<u32>>,
    /// Gauge table for the builder and tower sources.
    #[serde(default)]
    pub gauge: Option<Vec<u64>>,
    /// Filling sets (element strings) for the builder source.
    #[serde(default)]
    pub filling: Option<Vec<Vec<String>>>,
    /// Tower filling style: `minimal` or `generating`.
    #[serde(default)]
    pub tower_filling: Option<String>,
}

impl ScaleSpec {
    pub fn preset(name: &str) -> Self {
        ScaleSpec {
            source: "preset".into(),
            preset: Some(name.into()),
            path: None,
            group: None,
            rank: None,
            modulus: None,
            orders: None,
            gauge: None,
            filling: None,
            tower_filling: None,
        }
    }

    pub fn group_model(&self) -> Result<GroupModel, ExperimentError> {
        match self.group.as_deref() {
            Some("free") => Ok(GroupModel::free(self.rank.unwrap_or(2))?),
            Some("lamplighter") => Ok(GroupModel::lamplighter(self.modulus.unwrap_or(2))?),
            Some("free-product") => {
                let orders = self.orders.clone().ok_or_else(|| {
                    ExperimentError::Config("free-product needs `orders`".into())
                })?;
                Ok(GroupModel::free_product(orders)?)
            }
            Some(other) => Err(ExperimentError::Config(format!(
                "unknown group kind `{other}`"
            ))),
            None => Err(ExperimentError::Config(
                "scale source needs a `group` field".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    /// `power`, `geometric` or `table`.
    pub kind: String,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    /// Table laws: `true` marks the table as a truncation of an unknown law.
    #[serde(default)]
    pub truncated: bool,
}

fn default_truncation() -> usize {
    512
}

impl Default for LawSpec {
    fn default() -> Self {
        LawSpec {
            kind: "power".into(),
            s: Some(3.0),
            q: None,
            weights: None,
            truncation: default_truncation(),
            truncated: false,
        }
    }
}

impl LawSpec {
    pub fn build(&self) -> Result<StepLaw, ExperimentError> {
        let law = match self.kind.as_str() {
            "power" => StepLaw::power(
                self.s
                    .ok_or_else(|| ExperimentError::Config("power law needs `s`".into()))?,
                self.truncation,
            )?,
            "geometric" => StepLaw::geometric(
                self.q
                    .ok_or_else(|| ExperimentError::Config("geometric law needs `q`".into()))?,
                self.truncation,
            )?,
            "table" => {
                let weights = self
                    .weights
                    .clone()
                    .ok_or_else(|| ExperimentError::Config("table law needs `weights`".into()))?;
                if self.truncated {
                    StepLaw::truncated(weights)?
                } else {
                    StepLaw::finite(weights)?
                }
            }
            other => {
                return Err(ExperimentError::Config(format!(
                    "unknown law kind `{other}`"
                )))
            }
        };
        Ok(law)
    }
}

/// `α_i = base / (i+1)^exponent`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSpec {
    pub base: f64,
    pub exponent: f64,
}

impl Default for AlphaSpec {
    fn default() -> Self {
        AlphaSpec {
            base: 0.2,
            exponent: 2.0,
        }
    }
}

impl AlphaSpec {
    pub fn value(&self, i: u32) -> f64 {
        self.base / ((i + 1) as f64).powf(self.exponent)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSpec {
    pub length: usize,
    pub paths: u64,
    /// Starting element, textual; `e` by default.
    #[serde(default = "default_start")]
    pub start: String,
    /// How many paths dump full per-epoch CSV logs.
    #[serde(default = "default_epoch_csv")]
    pub epoch_csv_paths: u64,
}

fn default_start() -> String {
    "e".into()
}

fn default_epoch_csv() -> u64 {
    2
}

impl Default for WalkSpec {
    fn default() -> Self {
        WalkSpec {
            length: 1_000,
            paths: 100,
            start: default_start(),
            epoch_csv_paths: default_epoch_csv(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CheckToggles {
    #[serde(default)]
    pub ladder: bool,
    #[serde(default)]
    pub forest: bool,
    #[serde(default)]
    pub markov_oracle: bool,
    #[serde(default)]
    pub records: bool,
    #[serde(default)]
    pub walk: bool,
    #[serde(default)]
    pub stabilizer: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    #[serde(default = "d_ladder_radius")]
    pub ladder_ball_radius: u64,
    #[serde(default = "d_forest_radius")]
    pub forest_ball_radius: u64,
    #[serde(default = "d_ray_depth")]
    pub ray_depth: usize,
    #[serde(default = "d_ball_budget")]
    pub ball_budget: usize,
    #[serde(default = "d_records_runs")]
    pub records_runs: u64,
    #[serde(default = "d_records_j_max")]
    pub records_j_max: u64,
    #[serde(default = "d_records_transitions")]
    pub records_transitions: u64,
    #[serde(default = "d_stab_rays")]
    pub stabilizer_rays: usize,
    #[serde(default = "d_stab_depth")]
    pub stabilizer_ray_depth: usize,
    #[serde(default = "d_stab_radius")]
    pub stabilizer_probe_radius: u64,
    #[serde(default = "d_stab_window")]
    pub stabilizer_window: usize,
    #[serde(default = "d_stab_path_budget")]
    pub stabilizer_path_budget: u64,
    /// Epoch index from which constrained-envelope violations count.
    #[serde(default = "d_constrained_from")]
    pub constrained_from_epoch: usize,
}

fn d_ladder_radius() -> u64 {
    3
}
fn d_forest_radius() -> u64 {
    3
}
fn d_ray_depth() -> usize {
    2
}
fn d_ball_budget() -> usize {
    crate::group::DEFAULT_BALL_BUDGET
}
fn d_records_runs() -> u64 {
    20_000
}
fn d_records_j_max() -> u64 {
    8
}
fn d_records_transitions() -> u64 {
    50_000
}
fn d_stab_rays() -> usize {
    5
}
fn d_stab_depth() -> usize {
    8
}
fn d_stab_radius() -> u64 {
    2
}
fn d_stab_window() -> usize {
    4
}
fn d_stab_path_budget() -> u64 {
    500
}
fn d_constrained_from() -> usize {
    10
}

impl Default for ParamSpec {
    fn default() -> Self {
        toml::from_str("").expect("all params have defaults")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: "out".into() }
    }
}
