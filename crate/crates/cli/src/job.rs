use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub const DEFAULT_BITS: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    Zeros,
    Census,
    RectCount,
    Derive,
    FeSearch,
    VerifyBounds,
    PlotData,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Zeros => "zeros",
            Command::Census => "census",
            Command::RectCount => "rect-count",
            Command::Derive => "derive",
            Command::FeSearch => "fe-search",
            Command::VerifyBounds => "verify-bounds",
            Command::PlotData => "plot-data",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    CriticalLine,
    RealAxis,
    RectGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsKind {
    /// `|g(1-s)/g(s)|` on the region left of `sigma = 20`.
    Prop32,
    /// Product inequality at the exceptional zero of `f`.
    Lemma39,
    /// `|R1|, |R2|, |R3|` against 0.5, 0.1, 0.3.
    Remainders,
}

/// A complete, replayable description of one CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    /// Evaluation point, `a+bi`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    /// `re_min,re_max,im_min,im_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rect: Option<String>,
    /// `t0,t1` (or `x0,x1` on the real axis, `c_min,c_max` for fe-search).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<String>,
    /// `sigma_first,sigma_last` for verify-bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<BoundsKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_bits")]
    pub bits: u32,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_path: Option<PathBuf>,
}

fn default_bits() -> u32 {
    DEFAULT_BITS
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            function: None,
            s: None,
            rect: None,
            range: None,
            sigma: None,
            step: None,
            height: None,
            samples: None,
            axis: None,
            kind: None,
            n: None,
            seed: None,
            bits: DEFAULT_BITS,
            output: OutputFormat::Json,
            out_path: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job spec serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
