//! Hardware and code-layer timing constants.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{format_decimal, format_rational, int, rat, Domain, Rational};
use crate::serde_rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardwareError {
    #[error("code distance must be positive")]
    ZeroDistance,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("routing ratio {0} outside [0, 1]")]
    RoutingRatio(String),
}

/// Timing constants of a node-level qLDPC architecture, in logical cycles
/// unless stated otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HardwareProfile {
    /// Admissible range of the Bell-pair consumption time.
    #[serde(with = "serde_rational::domain")]
    pub t_bell_domain: Domain,
    /// Cycles per Toffoli under one-T-state-per-cycle delivery.
    pub t_toff: u32,
    #[serde(with = "serde_rational")]
    pub gridsynth_a: Rational,
    #[serde(with = "serde_rational")]
    pub gridsynth_b: Rational,
    #[serde(with = "serde_rational")]
    pub code_cycle_us: Rational,
    pub code_distance: u32,
    #[serde(with = "serde_rational")]
    pub raw_bell_rate_hz: Rational,
    #[serde(with = "serde_rational")]
    pub distillation_yield: Rational,
    pub t_states_per_node_per_cycle: u32,
}

impl Default for HardwareProfile {
    fn default() -> Self {
        Self {
            t_bell_domain: Domain::default(),
            t_toff: 4,
            gridsynth_a: rat(919, 100),
            gridsynth_b: int(3),
            code_cycle_us: int(1),
            code_distance: 5,
            raw_bell_rate_hz: int(100_000),
            distillation_yield: rat(1, 3),
            t_states_per_node_per_cycle: 1,
        }
    }
}

impl HardwareProfile {
    pub fn t_toff(&self) -> Rational {
        int(self.t_toff as i64)
    }

    pub fn domain(&self) -> &Domain {
        &self.t_bell_domain
    }

    /// Logical Bell pairs per second after distillation.
    pub fn logical_bell_rate_hz(&self) -> Rational {
        &self.raw_bell_rate_hz * &self.distillation_yield
    }

    /// Unrounded `a + b·m`.
    pub fn gridsynth_exact(&self, precision_m: u32) -> Rational {
        &self.gridsynth_a + &self.gridsynth_b * int(precision_m as i64)
    }
}

/// Ratio of local logical-operation rate to logical Bell-pair rate.
///
/// A local logical operation takes `d` code cycles; a remote one waits for a
/// distilled Bell pair. With the default rates this is exactly `30 / d`.
pub fn network_penalty(profile: &HardwareProfile) -> Result<Rational, HardwareError> {
    if profile.code_distance == 0 {
        return Err(HardwareError::ZeroDistance);
    }
    for (name, value) in [
        ("raw_bell_rate_hz", &profile.raw_bell_rate_hz),
        ("distillation_yield", &profile.distillation_yield),
        ("code_cycle_us", &profile.code_cycle_us),
    ] {
        if !value.is_positive() {
            return Err(HardwareError::NonPositive(name));
        }
    }
    let remote_us = int(1_000_000) / profile.logical_bell_rate_hz();
    let remote_in_code_cycles = remote_us / &profile.code_cycle_us;
    Ok(remote_in_code_cycles / int(profile.code_distance as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Violation,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Violation => "violation",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

/// Collects invariant violations and out-of-range warnings; never fails.
pub fn validate_profile(profile: &HardwareProfile) -> Vec<Finding> {
    let mut findings = Vec::new();
    let mut violation = |message: String| {
        findings.push(Finding {
            severity: Severity::Violation,
            message,
        })
    };

    if profile.t_toff == 0 {
        violation("t_toff must be positive".into());
    }
    for (name, value) in [
        ("gridsynth_a", &profile.gridsynth_a),
        ("gridsynth_b", &profile.gridsynth_b),
        ("code_cycle_us", &profile.code_cycle_us),
        ("raw_bell_rate_hz", &profile.raw_bell_rate_hz),
        ("distillation_yield", &profile.distillation_yield),
    ] {
        if !value.is_positive() {
            violation(format!("{name} must be positive"));
        }
    }
    if profile.distillation_yield > Rational::one() {
        violation("distillation_yield must not exceed 1".into());
    }
    if profile.code_distance < 3 {
        violation(format!(
            "code_distance {} below the minimum of 3",
            profile.code_distance
        ));
    }
    if profile.t_states_per_node_per_cycle != 1 {
        violation(format!(
            "t_states_per_node_per_cycle = {} but the cost model assumes exactly 1",
            profile.t_states_per_node_per_cycle
        ));
    }
    if profile.t_bell_domain.lo() <= &Rational::zero() {
        violation("t_bell domain must be strictly positive".into());
    }

    if let Ok(penalty) = network_penalty(profile) {
        let modeled = Domain::default();
        if !modeled.contains(&penalty) {
            findings.push(Finding {
                severity: Severity::Warning,
                message: format!(
                    "penalty {} outside modeled domain {}",
                    format_decimal(&penalty, 4),
                    modeled
                ),
            });
        }
    }
    findings
}

/// Bell pairs consumed per Toffoli for cross-node operation, in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoutingRatio(Rational);

impl RoutingRatio {
    pub fn new(r: Rational) -> Result<Self, HardwareError> {
        if r.is_negative() || r > Rational::one() {
            return Err(HardwareError::RoutingRatio(format_rational(&r)));
        }
        Ok(Self(r))
    }

    /// `r = 1`, the carry-lookahead layout.
    pub fn one() -> Self {
        Self(Rational::one())
    }

    /// `r = 1/3`, the average case for every other subroutine.
    pub fn third() -> Self {
        Self(rat(1, 3))
    }

    pub fn zero() -> Self {
        Self(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for RoutingRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}
