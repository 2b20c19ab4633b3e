//! Run configuration: a flat `key = value` text file plus overrides.
//!
//! Recognised keys are `truncation`, `radii`, `angles`, `tolerance`, `seed`,
//! `format` and `sweeps.<name>`. Lists are comma separated; `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::membership::{SamplingGrid, DEFAULT_ANGLES, DEFAULT_RADII, DEFAULT_TOLERANCE};

/// Truncation order used by the verification suites.
pub const DEFAULT_TRUNCATION: usize = 512;
pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?} (expected json or csv)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

/// Sweep lists and their defaults.
pub const SWEEP_DEFAULTS: &[(&str, &[f64])] = &[
    ("theorem1_alpha", &[0.1, 0.5, 1.0]),
    ("n", &[0.0, 1.0, 2.0]),
    ("alpha", &[0.5, 1.0]),
    ("beta", &[0.0, 0.25, 0.5]),
    ("pair_beta", &[0.25, 0.5, 0.25]),
    ("pair_lambda", &[0.5, 0.5, 0.75]),
    ("m", &[0.0, 1.0, 2.0]),
    ("improved_alpha", &[0.5, 0.9]),
    ("improved_m", &[1.0, 2.0]),
    ("improved_n", &[0.0, 1.0]),
    ("c", &[0.0, 1.0, 2.0]),
    ("sigma", &[0.5, 1.0, 2.0]),
    ("gamma", &[0.5, 1.0, 2.0]),
    ("kernel_alpha", &[0.5, 1.0]),
    ("shift", &[0.3]),
    ("sequence_alpha", &[0.5, 1.0, 2.0, 5.0]),
    ("sequence_m", &[1.0, 2.0, 3.0]),
    ("sequence_length", &[200.0]),
    ("psi_alpha", &[0.25, 0.5, 1.0]),
    ("psi_control_alpha", &[2.0]),
    ("samples", &[10000.0]),
    ("region_alpha", &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.5, 2.0]),
    ("region_m", &[1.0, 2.0, 3.0]),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub truncation: usize,
    pub radii: Vec<f64>,
    pub angles: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub format: OutputFormat,
    pub sweeps: BTreeMap<String, Vec<f64>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            truncation: DEFAULT_TRUNCATION,
            radii: DEFAULT_RADII.to_vec(),
            angles: DEFAULT_ANGLES,
            tolerance: DEFAULT_TOLERANCE,
            seed: DEFAULT_SEED,
            format: OutputFormat::Json,
            sweeps: SWEEP_DEFAULTS.iter().map(|(k, v)| (k.to_string(), v.to_vec())).collect(),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value {raw:?} for key {key:?}")))
}

fn parse_list(key: &str, raw: &str) -> Result<Vec<f64>> {
    raw.split(',').map(|item| parse_value(key, item)).collect()
}

impl RunConfig {
    /// Parses a config document on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key = value, got {line:?}", lineno + 1))
            })?;
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "truncation" => self.truncation = parse_value(key, value)?,
            "radii" => self.radii = parse_list(key, value)?,
            "angles" => self.angles = parse_value(key, value)?,
            "tolerance" => self.tolerance = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "format" => self.format = value.parse()?,
            _ => match key.strip_prefix("sweeps.") {
                Some(name) if self.sweeps.contains_key(name) => {
                    let list = parse_list(key, value)?;
                    if list.is_empty() {
                        return Err(Error::Parse(format!("sweep {name:?} is empty")));
                    }
                    self.sweeps.insert(name.to_string(), list);
                }
                Some(name) => return Err(Error::Parse(format!("unknown sweep {name:?}"))),
                None => return Err(Error::Parse(format!("unknown config key {key:?}"))),
            },
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation < 2 {
            return Err(Error::Parse(format!("truncation must be at least 2, got {}", self.truncation)));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Parse(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        let pairs = (self.sweep("pair_beta").len(), self.sweep("pair_lambda").len());
        if pairs.0 != pairs.1 {
            return Err(Error::Parse("sweeps.pair_beta and sweeps.pair_lambda differ in length".into()));
        }
        self.grid().map(|_| ()).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Keeps radii up to `r_max` and makes `r_max` the outermost radius.
    pub fn restrict_radius(&mut self, r_max: f64) {
        self.radii.retain(|&r| r < r_max);
        self.radii.push(r_max);
    }

    pub fn grid(&self) -> Result<SamplingGrid> {
        SamplingGrid::new(self.radii.clone(), self.angles)
    }

    /// The named sweep; panics on a name outside [`SWEEP_DEFAULTS`].
    pub fn sweep(&self, name: &str) -> &[f64] {
        self.sweeps
            .get(name)
            .unwrap_or_else(|| panic!("no sweep named {name:?}"))
    }

    /// A sweep read as nonnegative integers.
    pub fn int_sweep(&self, name: &str) -> Result<Vec<u32>> {
        self.sweep(name)
            .iter()
            .map(|&v| {
                if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                    Ok(v as u32)
                } else {
                    Err(Error::Parse(format!("sweeps.{name} needs nonnegative integers, got {v}")))
                }
            })
            .collect()
    }

    /// The flat text form, which parses back to the same config.
    pub fn to_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut out = format!(
            "truncation = {}\nradii = {}\nangles = {}\ntolerance = {}\nseed = {}\nformat = {}\n",
            self.truncation,
            join(&self.radii),
            self.angles,
            self.tolerance,
            self.seed,
            self.format
        );
        for (k, v) in &self.sweeps {
            out.push_str(&format!("sweeps.{k} = {}\n", join(v)));
        }
        out
    }
}
