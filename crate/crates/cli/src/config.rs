//! Flat `key = value` run configuration: parsing, merging and dumping.
//!
//! Precedence, lowest to highest: preset defaults, config-file keys, command
//! line flags. Dumping the merged effective configuration and re-running
//! from it reproduces the outputs byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lase_kk_core::PresetName;

use crate::error::{CliError, CliResult};

/// One optional scalar per recognised key; `None` means "not set here".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub preset: Option<PresetName>,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,
    pub oracles: Option<bool>,
    pub seed: Option<u64>,
    pub random: Option<usize>,
    pub deltas: Option<usize>,
    pub kk_window_mult: Option<f64>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_n: Option<usize>,
    pub gamma: Option<f64>,
    pub gamma_ba: Option<f64>,
    pub r_op: Option<f64>,
    pub delta_pump: Option<f64>,
    pub omega1: Option<f64>,
    pub q: Option<f64>,
    pub gq: Option<f64>,
}

impl RunConfig {
    /// Overlays `higher` on top of `self`: any key set in `higher` wins.
    pub fn merged_with(&self, higher: &RunConfig) -> RunConfig {
        macro_rules! pick {
            ($field:ident) => {
                higher.$field.clone().or_else(|| self.$field.clone())
            };
        }
        RunConfig {
            preset: pick!(preset),
            input: pick!(input),
            out: pick!(out),
            svg: pick!(svg),
            oracles: pick!(oracles),
            seed: pick!(seed),
            random: pick!(random),
            deltas: pick!(deltas),
            kk_window_mult: pick!(kk_window_mult),
            grid_min: pick!(grid_min),
            grid_max: pick!(grid_max),
            grid_n: pick!(grid_n),
            gamma: pick!(gamma),
            gamma_ba: pick!(gamma_ba),
            r_op: pick!(r_op),
            delta_pump: pick!(delta_pump),
            omega1: pick!(omega1),
            q: pick!(q),
            gq: pick!(gq),
        }
    }

    /// Parses the flat text format: one `key = value` per line, `#` comments.
    pub fn from_text(text: &str, origin: &Path) -> CliResult<RunConfig> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Validation(format!(
                    "{}:{}: expected 'key = value', got '{line}'",
                    origin.display(),
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let fail = |what: &str| {
                CliError::Validation(format!(
                    "{}:{}: bad {what} value '{value}' for key '{key}'",
                    origin.display(),
                    lineno + 1
                ))
            };
            match key {
                "command" => {} // informational; the subcommand governs
                "preset" => {
                    cfg.preset = Some(PresetName::from_str(value).map_err(CliError::Validation)?);
                }
                "input" => cfg.input = Some(PathBuf::from(value)),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "svg" => cfg.svg = Some(value.parse().map_err(|_| fail("bool"))?),
                "oracles" => cfg.oracles = Some(value.parse().map_err(|_| fail("bool"))?),
                "seed" => cfg.seed = Some(value.parse().map_err(|_| fail("integer"))?),
                "random" => cfg.random = Some(value.parse().map_err(|_| fail("integer"))?),
                "deltas" => cfg.deltas = Some(value.parse().map_err(|_| fail("integer"))?),
                "kk_window_mult" => {
                    cfg.kk_window_mult = Some(value.parse().map_err(|_| fail("number"))?)
                }
                "grid_min" => cfg.grid_min = Some(value.parse().map_err(|_| fail("number"))?),
                "grid_max" => cfg.grid_max = Some(value.parse().map_err(|_| fail("number"))?),
                "grid_n" => cfg.grid_n = Some(value.parse().map_err(|_| fail("integer"))?),
                "gamma" => cfg.gamma = Some(value.parse().map_err(|_| fail("number"))?),
                "gamma_ba" => cfg.gamma_ba = Some(value.parse().map_err(|_| fail("number"))?),
                "r_op" => cfg.r_op = Some(value.parse().map_err(|_| fail("number"))?),
                "delta_pump" => cfg.delta_pump = Some(value.parse().map_err(|_| fail("number"))?),
                "omega1" => cfg.omega1 = Some(value.parse().map_err(|_| fail("number"))?),
                "q" => cfg.q = Some(value.parse().map_err(|_| fail("number"))?),
                "gq" => cfg.gq = Some(value.parse().map_err(|_| fail("number"))?),
                other => {
                    return Err(CliError::Validation(format!(
                        "{}:{}: unknown configuration key '{other}'",
                        origin.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        Self::from_text(&text, path)
    }

    /// Serializes every set key in a fixed order, prefixed by the command.
    pub fn dump(&self, command: &str) -> String {
        let mut pairs: BTreeMap<&'static str, String> = BTreeMap::new();
        macro_rules! put {
            ($field:ident) => {
                if let Some(v) = &self.$field {
                    pairs.insert(stringify!($field), format!("{v}"));
                }
            };
        }
        if let Some(p) = self.preset {
            pairs.insert("preset", p.to_string());
        }
        if let Some(p) = &self.input {
            pairs.insert("input", p.display().to_string());
        }
        if let Some(p) = &self.out {
            pairs.insert("out", p.display().to_string());
        }
        put!(svg);
        put!(oracles);
        put!(seed);
        put!(random);
        put!(deltas);
        put!(kk_window_mult);
        put!(grid_min);
        put!(grid_max);
        put!(grid_n);
        put!(gamma);
        put!(gamma_ba);
        put!(r_op);
        put!(delta_pump);
        put!(omega1);
        put!(q);
        put!(gq);

        let mut text = String::new();
        let _ = writeln!(text, "command = {command}");
        for (key, value) in pairs {
            let _ = writeln!(text, "{key} = {value}");
        }
        text
    }
}
