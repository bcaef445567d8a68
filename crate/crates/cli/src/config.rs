//! Run configuration shared by `validate` and `mesh`.

use polarmap_core::gallery::registry;
use serde_json::Value;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Validator {
    Curvature,
    Structure,
    Ruling,
    Locus,
    Regularity,
}

impl Validator {
    pub const ALL: [Validator; 5] = [
        Validator::Curvature,
        Validator::Structure,
        Validator::Ruling,
        Validator::Locus,
        Validator::Regularity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Validator::Curvature => "curvature",
            Validator::Structure => "structure",
            Validator::Ruling => "ruling",
            Validator::Locus => "locus",
            Validator::Regularity => "regularity",
        }
    }
}

impl FromStr for Validator {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Validator::ALL
            .into_iter()
            .find(|v| v.name() == s.trim())
            .ok_or_else(|| ConfigError(format!("unknown validator {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub example: String,
    pub params: Value,
    /// `(n_z, n_t)`: `n_z × n_z × n_t` cell centres.
    pub grid: (usize, usize),
    /// Replaces every bound when set.
    pub tol: Option<f64>,
    pub validators: Vec<Validator>,
    pub out: Option<PathBuf>,
    pub stereo: bool,
}

impl RunConfig {
    pub fn new(example: impl Into<String>) -> Self {
        RunConfig {
            example: example.into(),
            params: Value::Null,
            grid: (16, 8),
            tol: None,
            validators: Validator::ALL.to_vec(),
            out: None,
            stereo: false,
        }
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if registry::find(&self.example).is_none() {
            return Err(ConfigError(format!("unknown example {:?}", self.example)));
        }
        if self.grid.0 < 4 || self.grid.1 < 4 {
            return Err(ConfigError(format!(
                "grid {}x{} is below 4",
                self.grid.0, self.grid.1
            )));
        }
        if let Some(t) = self.tol {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(ConfigError(format!(
                    "tolerance {t} must be a finite non-negative number"
                )));
            }
        }
        if self.validators.is_empty() {
            return Err(ConfigError("no validators selected".into()));
        }
        if !matches!(self.params, Value::Null | Value::Object(_)) {
            return Err(ConfigError("parameters must be a JSON object".into()));
        }
        Ok(())
    }
}

/// `"NZ,NT"`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), ConfigError> {
    let bad = || ConfigError(format!("grid {s:?} is not NZ,NT"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

/// Comma-separated validator names; `all` selects every validator.
pub fn parse_validators(s: &str) -> Result<Vec<Validator>, ConfigError> {
    if s.trim() == "all" {
        return Ok(Validator::ALL.to_vec());
    }
    let mut v = s
        .split(',')
        .map(Validator::from_str)
        .collect::<Result<Vec<_>, _>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}
