//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! variant = focused
//! bit_widths = 1..16
//! densities = 0.1..0.9:0.1
//! threshold_range = 4,8
//! ```
//!
//! Lists are comma separated; `start..end:step` is an inclusive range.
//! `variant` is applied first wherever it appears, then the remaining keys
//! in file order.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use intsnn_core::dynamics::DEFAULT_STATE_BUDGET;
use intsnn_core::{OverflowMode, ResetMode, Signedness, SweepGrid};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {value}")]
    Value { key: String, value: String },
    #[error("unknown variant `{0}` (expected global, focused or variant-k8)")]
    Variant(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Named starting points for a configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Variant {
    /// The full size x density x bit-width grid.
    #[default]
    Global,
    /// N = 64, density 0.5, five initial conditions per bit width.
    Focused,
    /// Global grid at k = 8 and density 0.2.
    VariantK8,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Global => "global",
            Variant::Focused => "focused",
            Variant::VariantK8 => "variant-k8",
        }
    }

    pub fn grid(self) -> SweepGrid {
        match self {
            Variant::Global => SweepGrid::global(),
            Variant::Focused => SweepGrid::focused((1..=16).collect()),
            Variant::VariantK8 => SweepGrid::variant_k8(),
        }
    }
}

impl FromStr for Variant {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "global" => Ok(Variant::Global),
            "focused" => Ok(Variant::Focused),
            "variant-k8" | "k8" => Ok(Variant::VariantK8),
            other => Err(ConfigError::Variant(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub variant: Variant,
    pub grid: SweepGrid,
    pub output_dir: PathBuf,
    pub workers: Option<usize>,
    pub figures: bool,
    /// Neurons drawn in the membrane-trace figure.
    pub trace_neurons: Vec<usize>,
    pub embed_neuron: usize,
    pub embed_tau: usize,
    /// Rows kept by the top-recurrent table.
    pub top_count: usize,
    pub state_budget: u128,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::for_variant(Variant::Global)
    }
}

impl RunConfig {
    pub fn for_variant(variant: Variant) -> Self {
        Self {
            variant,
            grid: variant.grid(),
            output_dir: PathBuf::from("out"),
            workers: None,
            figures: true,
            trace_neurons: vec![0, 1, 2, 3],
            embed_neuron: 0,
            embed_tau: 1,
            top_count: 10,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Like [`RunConfig::load`] with a variant used when the file names none.
    pub fn load_with_default(path: &Path, default: Variant) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_with_default(&text, default)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::parse_with_default(text, Variant::Global)
    }

    pub fn parse_with_default(text: &str, default: Variant) -> Result<Self, ConfigError> {
        let pairs = parse_pairs(text)?;
        let variant = match pairs.iter().rev().find(|(k, _)| k == "variant") {
            Some((_, v)) => v.parse()?,
            None => default,
        };
        let mut cfg = Self::for_variant(variant);
        for (k, v) in pairs.iter().filter(|(k, _)| k != "variant") {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    /// Apply `key=value` overrides; `variant` resets the grid first.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), ConfigError> {
        let text = overrides.join("\n");
        for (k, v) in parse_pairs(&text)? {
            if k == "variant" {
                *self = Self::for_variant(v.parse()?);
            } else {
                self.set(&k, &v)?;
            }
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::Value {
            key: key.to_string(),
            value: value.to_string(),
        };
        let g = &mut self.grid;
        match key {
            "sizes" => g.sizes = parse_int_list(value).ok_or_else(bad)?,
            "densities" => g.densities = parse_float_list(value).ok_or_else(bad)?,
            "bit_widths" => g.bit_widths = parse_int_list(value).ok_or_else(bad)?,
            "horizon" => g.horizon = value.parse().map_err(|_| bad())?,
            "threshold_range" => g.threshold_range = parse_pair(value).ok_or_else(bad)?,
            "weight_range" => g.weight_range = parse_pair(value).ok_or_else(bad)?,
            "leak_k" => g.leak_k = value.parse().map_err(|_| bad())?,
            "seeds_per_cell" => g.seeds_per_cell = value.parse().map_err(|_| bad())?,
            "master_seed" => g.master_seed = parse_u64(value).ok_or_else(bad)?,
            "signedness" => {
                g.signedness = match value {
                    "unsigned" => Signedness::Unsigned,
                    "signed" => Signedness::Signed,
                    _ => return Err(bad()),
                }
            }
            "overflow_mode" => {
                g.overflow_mode = match value {
                    "saturate" => OverflowMode::Saturate,
                    "wrap" => OverflowMode::Wrap,
                    _ => return Err(bad()),
                }
            }
            "reset_mode" => {
                g.reset_mode = match value {
                    "none" => ResetMode::None,
                    "subtract_threshold" => ResetMode::SubtractThreshold,
                    _ => return Err(bad()),
                }
            }
            "window" => {
                g.window = match value {
                    "auto" | "" => None,
                    v => Some(v.parse().map_err(|_| bad())?),
                }
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            "workers" => self.workers = Some(value.parse().map_err(|_| bad())?),
            "figures" => self.figures = parse_bool(value).ok_or_else(bad)?,
            "trace_neurons" => self.trace_neurons = parse_int_list(value).ok_or_else(bad)?,
            "embed_neuron" => self.embed_neuron = value.parse().map_err(|_| bad())?,
            "embed_tau" => self.embed_tau = value.parse().map_err(|_| bad())?,
            "top_count" => self.top_count = value.parse().map_err(|_| bad())?,
            "state_budget" => self.state_budget = value.parse().map_err(|_| bad())?,
            "variant" => return Err(bad()),
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or(ConfigError::Syntax { line: idx + 1 })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(ConfigError::Syntax { line: idx + 1 });
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

fn parse_u64(s: &str) -> Option<u64> {
    match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

fn parse_pair(s: &str) -> Option<(i64, i64)> {
    let (a, b) = s.split_once(',').or_else(|| s.split_once(".."))?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Split `start..end[:step]` into its parts.
fn split_range(s: &str) -> Option<(&str, &str, Option<&str>)> {
    let (start, rest) = s.split_once("..")?;
    match rest.split_once(':') {
        Some((end, step)) => Some((start.trim(), end.trim(), Some(step.trim()))),
        None => Some((start.trim(), rest.trim(), None)),
    }
}

/// Nonempty list of integers; items may be inclusive ranges.
pub fn parse_int_list<T>(s: &str) -> Option<Vec<T>>
where
    T: TryFrom<i64>,
{
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        if let Some((a, b, step)) = split_range(item) {
            let (a, b): (i64, i64) = (a.parse().ok()?, b.parse().ok()?);
            let step: i64 = step.map_or(Some(1), |s| s.parse().ok())?;
            if step <= 0 || b < a {
                return None;
            }
            let mut x = a;
            while x <= b {
                out.push(T::try_from(x).ok()?);
                x += step;
            }
        } else {
            out.push(T::try_from(item.parse::<i64>().ok()?).ok()?);
        }
    }
    (!out.is_empty()).then_some(out)
}

/// Nonempty list of floats; range items are rounded to six decimals so that
/// `0.1..0.9:0.1` yields exactly `0.1, 0.2, ..., 0.9`.
pub fn parse_float_list(s: &str) -> Option<Vec<f64>> {
    let round = |x: f64| (x * 1e6).round() / 1e6;
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        if let Some((a, b, step)) = split_range(item) {
            let (a, b): (f64, f64) = (a.parse().ok()?, b.parse().ok()?);
            let step: f64 = step.map_or(Some(1.0), |s| s.parse().ok())?;
            if step.is_nan() || step <= 0.0 || b < a {
                return None;
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            out.extend((0..=count).map(|i| round(a + i as f64 * step)));
        } else {
            out.push(item.parse().ok()?);
        }
    }
    (!out.is_empty()).then_some(out)
}
