//! Logical-cycle cost models for the building blocks: adders, rotation
//! synthesis, phase-gradient phasing, controlled rotations, fan-out and the
//! Dicke state unitary.
//!
//! Every model is expressed as a [`CostExpr`] in `t`, the number of logical
//! cycles spent per serialized Bell-pair consumption.

use serde::Serialize;
use thiserror::Error;

use crate::cost::{ceil_log2, format_rational, int, round_cycles, CostError, CostExpr, Rational};
use crate::hardware::{HardwareProfile, RoutingRatio};
use crate::topology::QFlyTopology;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubroutineError {
    #[error("{name} requires {what} >= {min}, got {got}")]
    BelowMinimum {
        name: &'static str,
        what: &'static str,
        min: u64,
        got: u64,
    },
    #[error("no precision up to {guard} bits where phase-gradient phasing beats gridsynth")]
    NoCrossover { guard: u32 },
    #[error(transparent)]
    Cost(#[from] CostError),
}

fn require(name: &'static str, what: &'static str, got: u64, min: u64) -> Result<(), SubroutineError> {
    if got < min {
        return Err(SubroutineError::BelowMinimum { name, what, min, got });
    }
    Ok(())
}

/// A named cost with its closed form and counting metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubroutineCost {
    pub name: String,
    pub formula: String,
    #[serde(serialize_with = "crate::report::serialize_cost")]
    pub cost: CostExpr,
    pub toffoli_count: Option<u64>,
    pub bell_pairs: Option<u64>,
    /// Slope of `cost` at the domain midpoint: serialized Bell consumptions.
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub bell_slope: Rational,
    pub notes: String,
}

impl SubroutineCost {
    fn new(name: &str, formula: String, cost: CostExpr) -> Self {
        let bell_slope = cost.slope_at(&cost.domain().midpoint());
        Self {
            name: name.to_string(),
            formula,
            cost,
            toffoli_count: None,
            bell_slope,
            bell_pairs: None,
            notes: String::new(),
        }
    }

    fn with_toffolis(mut self, count: u64) -> Self {
        self.toffoli_count = Some(count);
        self
    }

    fn with_notes(mut self, notes: &str) -> Self {
        self.notes = notes.to_string();
        self
    }

    /// Rounded cycles at `t`.
    pub fn cycles_at(&self, t_bell: &Rational) -> Result<u64, CostError> {
        Ok(self.cost.eval(t_bell)?.rounded())
    }
}

/// `T_Toff + r·t`: one Toffoli plus its share of cross-node Bell pairs.
pub fn toffoli_step(r: &RoutingRatio, hw: &HardwareProfile) -> Result<CostExpr, CostError> {
    CostExpr::affine_on(hw.t_toff(), r.value().clone(), hw.domain().clone())
}

/// Ripple-carry adder with temporary-AND carries: `(n - 1)(T_Toff + r·t)`.
pub fn gidney_adder(n: u32, r: &RoutingRatio, hw: &HardwareProfile) -> Result<SubroutineCost, SubroutineError> {
    require("gidney_adder", "n", n as u64, 1)?;
    let carries = (n - 1) as u64;
    let cost = toffoli_step(r, hw)?.scale(&int(carries as i64))?;
    Ok(SubroutineCost::new("Gidney adder", format!("({n} - 1)(T_Toff + {r}·T_Bell)"), cost).with_toffolis(carries))
}

/// Sklansky-tree carry-lookahead adder: `(ceil(log2 n) + 4)(T_Toff + r·t)`.
pub fn qcla_adder(n: u32, r: &RoutingRatio, hw: &HardwareProfile) -> Result<SubroutineCost, SubroutineError> {
    require("qcla_adder", "n", n as u64, 1)?;
    let layers = ceil_log2(n as u64) + 4;
    let cost = toffoli_step(r, hw)?.scale(&int(layers as i64))?;
    Ok(
        SubroutineCost::new("QCLA adder", format!("(ceil(log2 {n}) + 4)(T_Toff + {r}·T_Bell)"), cost)
            .with_notes(&format!("Toffoli depth {layers}")),
    )
}

/// Rounded gridsynth cost `a + b·m` in whole cycles.
pub fn gridsynth_cycles(precision_m: u32, hw: &HardwareProfile) -> u64 {
    round_cycles(&hw.gridsynth_exact(precision_m))
}

/// Sequential Clifford+T synthesis of one Z rotation; independent of `t`.
pub fn gridsynth_rotation(precision_m: u32, hw: &HardwareProfile) -> Result<SubroutineCost, SubroutineError> {
    require("gridsynth_rotation", "m", precision_m as u64, 1)?;
    let cycles = gridsynth_cycles(precision_m, hw);
    let cost = CostExpr::constant(int(cycles as i64), hw.domain().clone())?;
    Ok(SubroutineCost::new(
        "Gridsynth rotation",
        format!(
            "round({} + {}·{precision_m})",
            format_rational(&hw.gridsynth_a),
            format_rational(&hw.gridsynth_b)
        ),
        cost,
    )
    .with_notes(&format!(
        "exact {} rounded half-up",
        format_rational(&hw.gridsynth_exact(precision_m))
    )))
}

/// Rotation by addition into a catalytic phase-gradient register. The
/// controlled write and the measurement-based uncompute are free, so the
/// whole rotation costs one carry-lookahead addition.
pub fn phase_gradient_rotation(
    precision_m: u32,
    r: &RoutingRatio,
    hw: &HardwareProfile,
) -> Result<SubroutineCost, SubroutineError> {
    require("phase_gradient_rotation", "m", precision_m as u64, 1)?;
    let adder = qcla_adder(precision_m, r, hw)?;
    Ok(
        SubroutineCost::new("Phase-gradient rotation", format!("T_QCLA({precision_m})"), adder.cost)
            .with_notes("controlled write and uncompute charged zero"),
    )
}

/// Smallest precision `m` (scanning up from 1, at most `guard`) for which
/// `(ceil(log2 m) + 4)(T_Toff + r·t) < a + b·m`.
pub fn rotation_crossover_with_guard(
    r: &RoutingRatio,
    t_bell: &Rational,
    hw: &HardwareProfile,
    guard: u32,
) -> Result<u32, SubroutineError> {
    let step = toffoli_step(r, hw)?;
    let per_layer = step.eval(t_bell)?.into_inner();
    (1..=guard)
        .find(|&m| int((ceil_log2(m as u64) + 4) as i64) * &per_layer < hw.gridsynth_exact(m))
        .ok_or(SubroutineError::NoCrossover { guard })
}

pub const CROSSOVER_GUARD: u32 = 4096;

pub fn rotation_crossover(r: &RoutingRatio, t_bell: &Rational, hw: &HardwareProfile) -> Result<u32, SubroutineError> {
    rotation_crossover_with_guard(r, t_bell, hw, CROSSOVER_GUARD)
}

/// Phasing by a constant multiple of a register value. With the scaled
/// gradient state already prepared it is a plain phase-gradient rotation;
/// otherwise the one-time preparation is charged as one gridsynth synthesis.
pub fn linear_phasing(
    precision_m: u32,
    r: &RoutingRatio,
    hw: &HardwareProfile,
    custom_gradient_prepared: bool,
) -> Result<SubroutineCost, SubroutineError> {
    require("linear_phasing", "m", precision_m as u64, 1)?;
    let rotation = phase_gradient_rotation(precision_m, r, hw)?;
    if custom_gradient_prepared {
        return Ok(SubroutineCost::new("Linear phasing", rotation.formula, rotation.cost)
            .with_notes("custom gradient state already prepared"));
    }
    let prep = gridsynth_rotation(precision_m, hw)?;
    Ok(SubroutineCost::new(
        "Linear phasing",
        format!("T_QCLA({precision_m}) + T_Grid({precision_m})"),
        rotation.cost.add(&prep.cost)?,
    )
    .with_notes("includes one-time custom gradient preparation"))
}

/// Multi-controlled rotation through a temporary AND: one Toffoli into an
/// ancilla, the single-controlled rotation, then a free X-basis uncompute.
pub fn ccr_tacu(
    r: &RoutingRatio,
    hw: &HardwareProfile,
    rotation: &SubroutineCost,
) -> Result<SubroutineCost, SubroutineError> {
    let cost = toffoli_step(r, hw)?.add(&rotation.cost)?;
    Ok(SubroutineCost::new(
        "CCR via TACU",
        format!("(T_Toff + {r}·T_Bell) + [{}]", rotation.formula),
        cost,
    )
    .with_toffolis(1)
    .with_notes("measurement-based uncompute charged zero"))
}

/// What a node-local multi-controlled Toffoli is computing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MctWorkload {
    /// Plain Toffoli staircase over `controls` controls.
    Staircase { controls: u32 },
    /// Partial 8-SAT clause over the ~7 variables a node holds; average case.
    QaoaPartialClause,
}

pub fn local_mct(workload: MctWorkload) -> Result<u32, SubroutineError> {
    match workload {
        MctWorkload::QaoaPartialClause => Ok(5),
        MctWorkload::Staircase { controls } => {
            require("local_mct", "num_controls", controls as u64, 2)?;
            Ok(controls - 1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanOutKind {
    /// GHZ fan-out inside one group's non-blocking switch.
    IntraGroup,
    /// Point-to-point sends from one group to `num_targets` other groups.
    InterGroup,
}

pub fn fan_out(
    kind: FanOutKind,
    num_targets: u32,
    topo: &QFlyTopology,
    hw: &HardwareProfile,
) -> Result<SubroutineCost, SubroutineError> {
    let domain = hw.domain().clone();
    let (name, formula, slope) = match kind {
        _ if num_targets == 0 => ("Fan-out", "0".to_string(), 0),
        FanOutKind::IntraGroup => ("Intra-group fan-out", "2·T_Bell".to_string(), 2),
        FanOutKind::InterGroup => {
            let k = topo.num_offsets();
            (
                "Inter-group fan-out",
                format!("ceil({num_targets} / {k})·T_Bell"),
                num_targets.div_ceil(k),
            )
        }
    };
    let mut cost = SubroutineCost::new(name, formula, CostExpr::per_bell(int(slope as i64), domain)?);
    cost.bell_pairs = Some(num_targets as u64);
    Ok(cost)
}

/// Sequential `CCR_Y` depth of the short-depth Dicke construction:
/// `k(k+1)/2 · ceil(log2 k)`, with `ceil(log2 1)` taken as 1.
pub fn dicke_depth(weight_k: u32) -> u64 {
    let k = weight_k as u64;
    let layers = ceil_log2(k.max(1)).max(1) as u64;
    k * (k + 1) / 2 * layers
}

/// `D · (T_Grid + 2(T_Toff + r·t))` where `D` is [`dicke_depth`].
///
/// `double_rotation` charges two gridsynth rotations per ladder step (the
/// two half-angle rotations of a textbook `CR_Y`); off by default.
pub fn dicke_unitary(
    weight_k: u32,
    precision_m: u32,
    r: &RoutingRatio,
    hw: &HardwareProfile,
    double_rotation: bool,
) -> Result<SubroutineCost, SubroutineError> {
    require("dicke_unitary", "k", weight_k as u64, 1)?;
    let depth = dicke_depth(weight_k);
    let rotations: i64 = if double_rotation { 2 } else { 1 };
    let grid = CostExpr::constant(
        int(gridsynth_cycles(precision_m, hw) as i64 * rotations),
        hw.domain().clone(),
    )?;
    let step = grid.add(&toffoli_step(r, hw)?.scale(&int(2))?)?;
    let cost = step.scale(&int(depth as i64))?;
    let grid_term = if double_rotation { "2·T_Grid" } else { "T_Grid" };
    Ok(SubroutineCost::new(
        "Dicke state unitary",
        format!("{depth}({grid_term} + 2(T_Toff + {r}·T_Bell))"),
        cost,
    )
    .with_toffolis(2 * depth)
    .with_notes(&format!("CCR_Y depth {depth}")))
}
