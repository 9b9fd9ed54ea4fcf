//! Active-volume surface-code baseline.
//!
//! The surface code is granted a fixed block throughput per cycle and one
//! active-volume cycle costs `t` of our logical cycles, so a workload of `B`
//! blocks takes `B / blocks_per_cycle · t` cycles. Block counts per stage are
//! scenario data loaded from TOML.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::keys;
use crate::cost::{format_rational, int, round_cycles, CycleCount, Rational};
use crate::serde_rational;
use crate::topology::QFlyTopology;

pub const AV2_TOML: &str = include_str!("../scenarios/av2.toml");
pub const AV10_TOML: &str = include_str!("../scenarios/av10.toml");

pub const GIDNEY_KEY: &str = "gidney_adder";
pub const GRIDSYNTH_KEY: &str = "gridsynth_rotation";

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("scenario {label}: no block count for stage {stage}")]
    MissingStage { label: String, stage: String },
    #[error("scenario {label}: {message}")]
    Invalid { label: String, message: String },
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse scenario file {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Qaoa,
    Dqi,
}

impl Algorithm {
    /// Stages with a baseline figure, in reporting order.
    pub fn av_stages(self) -> &'static [&'static str] {
        match self {
            Algorithm::Qaoa => &[keys::QAOA_CLAUSE, keys::QAOA_MIXER],
            Algorithm::Dqi => &[keys::DQI_SETUP, keys::DQI_DICKE, keys::DQI_CONSTRAINT, keys::DQI_DECODE],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvScenario {
    pub label: String,
    #[serde(with = "serde_rational")]
    pub t_bell: Rational,
    #[serde(with = "serde_rational")]
    pub blocks_per_cycle: Rational,
    #[serde(rename = "blocks", with = "serde_rational::map")]
    pub block_table: BTreeMap<String, Rational>,
}

impl AvScenario {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, BaselineError> {
        let scenario: AvScenario = toml::from_str(text).map_err(|source| BaselineError::Parse {
            path: origin.to_string(),
            source,
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, BaselineError> {
        let text = std::fs::read_to_string(path).map_err(|source| BaselineError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text, &path.display().to_string())
    }

    /// Shipped scenario at `t = 2`.
    pub fn av2() -> Self {
        Self::from_toml(AV2_TOML, "av2.toml").expect("embedded scenario parses")
    }

    /// Shipped scenario at `t = 10`.
    pub fn av10() -> Self {
        Self::from_toml(AV10_TOML, "av10.toml").expect("embedded scenario parses")
    }

    fn validate(&self) -> Result<(), BaselineError> {
        let invalid = |message: String| BaselineError::Invalid {
            label: self.label.clone(),
            message,
        };
        if !self.blocks_per_cycle.is_positive() {
            return Err(invalid("blocks_per_cycle must be positive".into()));
        }
        if !self.t_bell.is_positive() {
            return Err(invalid("t_bell must be positive".into()));
        }
        if let Some((k, v)) = self.block_table.iter().find(|(_, v)| v.is_negative()) {
            return Err(invalid(format!("negative block count {} for {k}", format_rational(v))));
        }
        Ok(())
    }

    pub fn blocks(&self, stage: &str) -> Result<&Rational, BaselineError> {
        self.block_table.get(stage).ok_or_else(|| BaselineError::MissingStage {
            label: self.label.clone(),
            stage: stage.to_string(),
        })
    }

    /// Exact (unrounded) cycles for `blocks`.
    pub fn exact_time(&self, blocks: &Rational) -> Rational {
        blocks / &self.blocks_per_cycle * &self.t_bell
    }
}

/// Half the logical qubits of a group row form the compute region:
/// `nodes_per_group / 2 · num_groups` blocks per cycle.
pub fn default_blocks_per_cycle(topo: &QFlyTopology) -> Rational {
    int(topo.nodes_per_group() as i64) * int(topo.num_groups() as i64) / int(2)
}

pub fn av_time(blocks: &Rational, scenario: &AvScenario) -> CycleCount {
    let exact = if blocks.is_zero() {
        Rational::zero()
    } else {
        scenario.exact_time(blocks)
    };
    CycleCount::new(exact).expect("non-negative blocks and positive throughput")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvRow {
    pub stage: String,
    pub cycles: u64,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub exact: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvStageTable {
    pub label: String,
    pub rows: Vec<AvRow>,
    /// Rounded exact sum of the stage times.
    pub total: AvRow,
}

impl AvStageTable {
    pub fn cycles(&self, stage: &str) -> Option<u64> {
        self.rows.iter().find(|r| r.stage == stage).map(|r| r.cycles)
    }
}

pub fn av_stage_table(scenario: &AvScenario, algorithm: Algorithm) -> Result<AvStageTable, BaselineError> {
    let mut rows = Vec::new();
    let mut total = Rational::zero();
    for &stage in algorithm.av_stages() {
        let exact = av_time(scenario.blocks(stage)?, scenario).into_inner();
        total += &exact;
        rows.push(AvRow {
            stage: stage.to_string(),
            cycles: round_cycles(&exact),
            exact,
        });
    }
    let total_key = match algorithm {
        Algorithm::Qaoa => keys::QAOA_TOTAL,
        Algorithm::Dqi => keys::DQI_TOTAL,
    };
    Ok(AvStageTable {
        label: scenario.label.clone(),
        rows,
        total: AvRow {
            stage: total_key.to_string(),
            cycles: round_cycles(&total),
            exact: total,
        },
    })
}

/// The same scenario on `multiplier` times the hardware: throughput scales,
/// times shrink proportionally.
pub fn av_scale_scenario(scenario: &AvScenario, multiplier: &Rational) -> Result<AvScenario, BaselineError> {
    if !multiplier.is_positive() {
        return Err(BaselineError::Invalid {
            label: scenario.label.clone(),
            message: format!("hardware multiplier {} must be positive", format_rational(multiplier)),
        });
    }
    Ok(AvScenario {
        label: format!("{}×{}", scenario.label, format_rational(multiplier)),
        blocks_per_cycle: &scenario.blocks_per_cycle * multiplier,
        ..scenario.clone()
    })
}
