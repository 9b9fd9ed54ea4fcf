//! Run configuration: one TOML file with a section per model input.
//!
//! ```toml
//! format = "markdown"
//! t_bell = ["2", "5", "10"]
//!
//! [hardware]
//! gridsynth_a = "9.19"
//!
//! [topology]
//! num_groups = 64
//! nodes_per_group = 12
//! offsets = [1, 2, 4, 8, 16, 32]
//!
//! [av]
//! av2 = "scenarios/av2.toml"   # relative to this file
//! ```
//!
//! Every section and key is optional. Rationals may be written as integers
//! or as `"p/q"` / decimal strings.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{DqiInstance, QaoaInstance};
use crate::baseline::{AvScenario, BaselineError};
use crate::cost::{format_rational, int, Rational};
use crate::hardware::{validate_profile, HardwareProfile, Severity};
use crate::report::{Format, SubroutineParams};
use crate::serde_rational;
use crate::topology::{QFlyTopology, TopologyError, TopologySpec};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
    #[error("{field} refers to missing file {path}")]
    MissingFile { field: &'static str, path: String },
    #[error("evaluation point t = {t} outside domain {domain}")]
    OutOfDomain { t: String, domain: String },
    #[error("no evaluation points given")]
    NoPoints,
    #[error("invalid hardware profile: {0}")]
    Hardware(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
}

/// Baseline scenario files; the shipped tables are used for absent entries.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AvPaths {
    pub av2: Option<PathBuf>,
    pub av10: Option<PathBuf>,
    /// Skip the baseline columns entirely.
    pub disabled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub format: Format,
    #[serde(with = "serde_rational::vec")]
    pub t_bell: Vec<Rational>,
    pub hardware: HardwareProfile,
    pub topology: TopologySpec,
    pub qaoa: QaoaInstance,
    pub dqi: DqiInstance,
    pub subroutines: SubroutineParams,
    pub av: AvPaths,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            format: Format::Markdown,
            t_bell: default_points(),
            hardware: HardwareProfile::default(),
            topology: TopologySpec::default(),
            qaoa: QaoaInstance::default(),
            dqi: DqiInstance::default(),
            subroutines: SubroutineParams::default(),
            av: AvPaths::default(),
        }
    }
}

pub fn default_points() -> Vec<Rational> {
    vec![int(2), int(5), int(10)]
}

impl RunConfig {
    /// Parses `text`; relative scenario paths resolve against `base_dir`.
    pub fn from_toml(text: &str, origin: &str, base_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config: RunConfig = toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: origin.to_string(),
            source,
        })?;
        if let Some(base) = base_dir {
            for path in [&mut config.av.av2, &mut config.av.av10].into_iter().flatten() {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text, &path.display().to_string(), path.parent())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks invariants and builds the derived objects.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let violations: Vec<String> = validate_profile(&self.hardware)
            .into_iter()
            .filter(|f| f.severity == Severity::Violation)
            .map(|f| f.message)
            .collect();
        if !violations.is_empty() {
            return Err(ConfigError::Hardware(violations.join("; ")));
        }
        check_points(&self.t_bell, &self.hardware)?;
        let topology = QFlyTopology::from_spec(&self.topology)?;
        let scenarios = if self.av.disabled {
            Vec::new()
        } else {
            vec![
                load_scenario("av.av2", self.av.av2.as_deref(), AvScenario::av2)?,
                load_scenario("av.av10", self.av.av10.as_deref(), AvScenario::av10)?,
            ]
        };
        Ok(Resolved {
            config: self.clone(),
            topology,
            scenarios,
        })
    }
}

pub fn check_points(points: &[Rational], hw: &HardwareProfile) -> Result<(), ConfigError> {
    if points.is_empty() {
        return Err(ConfigError::NoPoints);
    }
    if let Some(t) = points.iter().find(|t| !hw.domain().contains(t)) {
        return Err(ConfigError::OutOfDomain {
            t: format_rational(t),
            domain: hw.domain().to_string(),
        });
    }
    Ok(())
}

fn load_scenario(
    field: &'static str,
    path: Option<&Path>,
    shipped: fn() -> AvScenario,
) -> Result<AvScenario, ConfigError> {
    match path {
        None => Ok(shipped()),
        Some(p) if !p.is_file() => Err(ConfigError::MissingFile {
            field,
            path: p.display().to_string(),
        }),
        Some(p) => Ok(AvScenario::load(p)?),
    }
}

/// A validated configuration with its topology and baseline scenarios.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub topology: QFlyTopology,
    pub scenarios: Vec<AvScenario>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::rat;

    #[test]
    fn empty_file_gives_defaults() {
        let c = RunConfig::from_toml("", "mem", None).unwrap();
        assert_eq!(c, RunConfig::default());
        let r = c.resolve().unwrap();
        assert_eq!(r.scenarios.len(), 2);
        assert_eq!(r.topology.num_groups(), 64);
    }

    #[test]
    fn round_trip_is_exact() {
        let mut c = RunConfig {
            t_bell: vec![rat(7, 3), int(4)],
            ..RunConfig::default()
        };
        c.hardware.distillation_yield = rat(2, 7);
        let back = RunConfig::from_toml(&c.to_toml(), "mem", None).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_points_outside_domain() {
        let c = RunConfig::from_toml("t_bell = [\"1\"]", "mem", None).unwrap();
        assert!(matches!(c.resolve(), Err(ConfigError::OutOfDomain { .. })));
        let c = RunConfig::from_toml("t_bell = []", "mem", None).unwrap();
        assert!(matches!(c.resolve(), Err(ConfigError::NoPoints)));
    }

    #[test]
    fn missing_scenario_names_the_file() {
        let c = RunConfig::from_toml("[av]\nav2 = \"nowhere.toml\"", "mem", Some(Path::new("/tmp/cfg"))).unwrap();
        let err = c.resolve().unwrap_err().to_string();
        assert!(err.contains("/tmp/cfg/nowhere.toml"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("colour = 1", "mem", None).is_err());
        assert!(RunConfig::from_toml("[qaoa]\nn_var = 3", "mem", None).is_err());
    }

    #[test]
    fn decimal_and_fraction_inputs() {
        let c = RunConfig::from_toml("t_bell = [2, \"5/2\", \"7.5\"]", "mem", None).unwrap();
        assert_eq!(c.t_bell, vec![int(2), rat(5, 2), rat(15, 2)]);
    }
}
