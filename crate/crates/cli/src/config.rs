use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("unknown format '{other}'"))),
        }
    }
}

/// Parameters shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid_size: usize,
    pub j_min: u32,
    pub j_max: u32,
    pub symbol_spec: String,
    pub exponents: Vec<(f64, f64)>,
    pub seed: u64,
    pub output_path: Option<String>,
    pub format: Format,
    /// Random trials per randomized check.
    pub trials: usize,
    /// Cutoff bridge of the Littlewood-Paley family ("smooth" or "raised-cosine").
    pub bridge: String,
    /// Deepest dyadic level scanned by `carleson`; defaults to `j_max - 1`.
    pub max_level: Option<u32>,
    /// Restarts of the bilinear norm estimator.
    pub restarts: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_size: 512,
            j_min: 1,
            j_max: 6,
            symbol_spec: "cos:1".into(),
            exponents: vec![(4.0, 4.0), (3.0, 6.0), (6.0, 3.0)],
            seed: 0,
            output_path: None,
            format: Format::Json,
            trials: 32,
            bridge: "smooth".into(),
            max_level: None,
            restarts: 4,
        }
    }
}

/// Parses `"p:q,p:q"`.
pub fn parse_exponents(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (p, q) = part
                .split_once(':')
                .ok_or_else(|| CliError::Config(format!("exponent pair '{part}' is not p:q")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Config(format!("bad exponent '{v}'")))
            };
            Ok((parse(p)?, parse(q)?))
        })
        .collect()
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.grid_size;
        if n < 16 || !n.is_power_of_two() {
            return Err(CliError::Config(format!(
                "grid size {n} must be a power of two >= 16"
            )));
        }
        if self.j_min >= self.j_max || self.j_max >= 62 || (1usize << self.j_max) > n / 4 {
            return Err(CliError::Config(format!(
                "scales {}..={} do not fit grid {n} (need j_min < j_max and 2^j_max <= N/4)",
                self.j_min, self.j_max
            )));
        }
        for &(p, q) in &self.exponents {
            let ok = p > 1.0
                && q > 1.0
                && p.is_finite()
                && q.is_finite()
                && (1.0 / p + 1.0 / q - 0.5).abs() <= 1e-12;
            if !ok {
                return Err(CliError::Config(format!(
                    "exponent pair ({p}, {q}) needs 1 < p, q < inf and 1/p + 1/q = 1/2"
                )));
            }
        }
        if self.trials == 0 {
            return Err(CliError::Config("trials must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(CliError::Config("restarts must be >= 1".into()));
        }
        self.bridge()?;
        if let Some(level) = self.max_level {
            if level > self.j_max {
                return Err(CliError::Config(format!(
                    "max level {level} exceeds j_max {}",
                    self.j_max
                )));
            }
        }
        Ok(())
    }

    pub fn bridge(&self) -> Result<paralab_core::Bridge> {
        self.bridge
            .parse()
            .map_err(|e: paralab_core::Error| CliError::Config(e.to_string()))
    }

    /// Applies the keys of a JSON config file on top of `self`.
    pub fn overridden_by_file(&self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.overridden_by_json(&text)
    }

    pub fn overridden_by_json(&self, text: &str) -> Result<Self> {
        let file: serde_json::Value = serde_json::from_str(text)?;
        let serde_json::Value::Object(file) = file else {
            return Err(CliError::Config(
                "config file must hold a JSON object".into(),
            ));
        };
        let mut merged = serde_json::to_value(self)?;
        let obj = merged
            .as_object_mut()
            .expect("RunConfig serializes to an object");
        for (k, v) in file {
            obj.insert(k, v);
        }
        Ok(serde_json::from_value(merged)?)
    }
}
