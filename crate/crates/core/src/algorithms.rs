//! Stage-by-stage cost composition for one 8-SAT QAOA iteration and a full
//! DQI run.

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{self, format_rational, int, CostError, CostExpr, Rational};
use crate::hardware::{HardwareProfile, RoutingRatio};
use crate::serde_rational;
use crate::subroutines::{self, MctWorkload, SubroutineError};
use crate::topology::QFlyTopology;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgorithmError {
    #[error("infeasible layout: {0}")]
    Layout(String),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error(transparent)]
    Subroutine(#[from] SubroutineError),
    #[error(transparent)]
    Cost(#[from] CostError),
}

/// Random 8-SAT at the satisfiability threshold, one variable per group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QaoaInstance {
    pub n_vars: u32,
    /// Clauses per variable.
    #[serde(with = "serde_rational")]
    pub clause_ratio: Rational,
    pub precision_m: u32,
    pub p_iterations: u32,
    pub vars_per_node: u32,
    /// Nodes whose partial clause results are gathered each round.
    pub gather_nodes: u32,
    /// Free ancillas each node keeps next to its variables.
    pub ancillas_per_node: u32,
}

impl Default for QaoaInstance {
    fn default() -> Self {
        Self {
            n_vars: 64,
            clause_ratio: int(176),
            precision_m: 64,
            p_iterations: 1,
            vars_per_node: 7,
            gather_nodes: 7,
            ancillas_per_node: 2,
        }
    }
}

impl QaoaInstance {
    pub fn n_clauses(&self) -> Rational {
        int(self.n_vars as i64) * &self.clause_ratio
    }

    /// Sequential clause rounds per group, rounded up.
    pub fn clause_rounds(&self, topo: &QFlyTopology) -> u64 {
        let per_group = self.n_clauses() / int(topo.num_groups() as i64);
        per_group.ceil().to_integer().to_u64().unwrap_or(0)
    }

    pub fn check_layout(&self, topo: &QFlyTopology) -> Result<(), AlgorithmError> {
        if self.n_vars == 0 {
            return Err(AlgorithmError::Instance("n_vars must be positive".into()));
        }
        if self.clause_ratio.is_negative() {
            return Err(AlgorithmError::Instance("clause_ratio must be non-negative".into()));
        }
        if self.p_iterations == 0 {
            return Err(AlgorithmError::Instance("p_iterations must be positive".into()));
        }
        if self.n_vars > topo.num_groups() {
            return Err(AlgorithmError::Layout(format!(
                "{} variables but only {} home groups",
                self.n_vars,
                topo.num_groups()
            )));
        }
        if self.vars_per_node * topo.nodes_per_group() < self.n_vars {
            return Err(AlgorithmError::Layout(format!(
                "{} variables do not fit {} nodes of {}",
                self.n_vars,
                topo.nodes_per_group(),
                self.vars_per_node
            )));
        }
        if self.vars_per_node + self.ancillas_per_node > topo.logical_compute_per_node {
            return Err(AlgorithmError::Layout(format!(
                "{} variables plus {} ancillas exceed {} logical qubits per node",
                self.vars_per_node, self.ancillas_per_node, topo.logical_compute_per_node
            )));
        }
        Ok(())
    }
}

/// Max-LINSAT over GF(2) solved with decoded quantum interferometry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DqiInstance {
    pub n_vars: u32,
    pub m_clauses: u32,
    /// Maximum Hamming weight of the Dicke superposition.
    pub weight_l: u32,
    pub precision_m: u32,
    /// Error-register qubits packed per node during decoding.
    pub clause_qubits_per_node: u32,
}

impl Default for DqiInstance {
    fn default() -> Self {
        Self {
            n_vars: 50,
            m_clauses: 200,
            weight_l: 25,
            precision_m: 64,
            clause_qubits_per_node: 9,
        }
    }
}

impl DqiInstance {
    pub fn check(&self) -> Result<(), AlgorithmError> {
        if self.weight_l == 0 {
            return Err(AlgorithmError::Instance("weight_l must be at least 1".into()));
        }
        if 2 * self.weight_l >= self.m_clauses {
            return Err(AlgorithmError::Instance(format!(
                "weight_l = {} must be below m_clauses / 2 = {}",
                self.weight_l,
                format_rational(&cost::rat(self.m_clauses as i64, 2))
            )));
        }
        if self.clause_qubits_per_node == 0 {
            return Err(AlgorithmError::Instance(
                "clause_qubits_per_node must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One row of an algorithm breakdown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    /// Stable identifier, e.g. `qaoa.clause_evaluation`.
    pub key: String,
    pub name: String,
    pub formula: String,
    pub cost: CostExpr,
    pub notes: String,
}

impl StageReport {
    fn new(key: &str, name: &str, formula: String, cost: CostExpr) -> Self {
        Self {
            key: key.into(),
            name: name.into(),
            formula,
            cost,
            notes: String::new(),
        }
    }

    fn with_notes(mut self, notes: &str) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn cycles_at(&self, t_bell: &Rational) -> Result<u64, CostError> {
        Ok(self.cost.eval(t_bell)?.rounded())
    }

    pub fn bell_slope(&self) -> Rational {
        self.cost.slope_at(&self.cost.domain().midpoint())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmReport {
    pub name: String,
    pub stages: Vec<StageReport>,
    pub total: StageReport,
}

impl AlgorithmReport {
    pub fn stage(&self, key: &str) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.key == key)
    }
}

pub mod keys {
    pub const QAOA_FANOUT: &str = "qaoa.fanout";
    pub const QAOA_CLAUSE: &str = "qaoa.clause_evaluation";
    pub const QAOA_MIXER: &str = "qaoa.mixer";
    pub const QAOA_TOTAL: &str = "qaoa.total";
    pub const DQI_SETUP: &str = "dqi.setup_unary";
    pub const DQI_DICKE: &str = "dqi.dicke";
    pub const DQI_CONSTRAINT: &str = "dqi.constraint_encoding";
    pub const DQI_DECODE: &str = "dqi.syndrome_decoding";
    pub const DQI_HADAMARD: &str = "dqi.hadamard";
    pub const DQI_TOTAL: &str = "dqi.total";
}

/// Intra-group GHZ, source-limited inter-group broadcast, worst-case
/// rearrangement onto nodes, and the 2·t clause-evaluation start-up.
pub fn qaoa_fanout_stage(
    inst: &QaoaInstance,
    topo: &QFlyTopology,
    hw: &HardwareProfile,
) -> Result<StageReport, AlgorithmError> {
    inst.check_layout(topo)?;
    let broadcast = topo.analytic_broadcast_cost(hw.domain())?;
    let startup = CostExpr::per_bell(int(2), hw.domain().clone())?;
    let cost = broadcast.add(&startup)?;
    let slope = format_rational(&cost.slope_at(hw.domain().lo()));
    Ok(StageReport::new(
        keys::QAOA_FANOUT,
        "Intra/Inter-Group Fan-out",
        format!(
            "(2 + ceil({}/{}) + {} + 2)·T_Bell = {slope}·T_Bell",
            topo.num_groups() - 1,
            topo.num_offsets(),
            topo.num_groups()
        ),
        cost,
    )
    .with_notes("includes the 2·T_Bell clause-evaluation start-up; duplicate copies removed by measurement"))
}

/// Per-round cost `max(g·t, c·T_Toff) + T_Grid`: gather partial results from
/// `g` nodes while `c` local Toffolis run, then phase with gridsynth.
pub fn clause_round_cost(inst: &QaoaInstance, hw: &HardwareProfile) -> Result<CostExpr, AlgorithmError> {
    let domain = hw.domain().clone();
    let toffolis = subroutines::local_mct(MctWorkload::QaoaPartialClause)?;
    let gather = CostExpr::per_bell(int(inst.gather_nodes as i64), domain.clone())?;
    let mct = CostExpr::constant(int(toffolis as i64) * hw.t_toff(), domain.clone())?;
    let grid = subroutines::gridsynth_rotation(inst.precision_m, hw)?;
    Ok(gather.max_of(&mct)?.add(&grid.cost)?)
}

pub fn qaoa_clause_stage(
    inst: &QaoaInstance,
    topo: &QFlyTopology,
    hw: &HardwareProfile,
) -> Result<StageReport, AlgorithmError> {
    let rounds = inst.clause_rounds(topo);
    let cost = clause_round_cost(inst, hw)?.scale(&int(rounds as i64))?;
    let toffolis = subroutines::local_mct(MctWorkload::QaoaPartialClause)?;
    Ok(StageReport::new(
        keys::QAOA_CLAUSE,
        "Clause Evaluation",
        format!(
            "{rounds}(max({}·T_Bell, {toffolis}·T_Toff) + T_Grid)",
            inst.gather_nodes
        ),
        cost,
    )
    .with_notes(
        "cross-node ANDs uncomputed by measurement; node clean-up hidden by pipelining; MCT count is the average case",
    ))
}

pub fn qaoa_mixer_stage(inst: &QaoaInstance, hw: &HardwareProfile) -> Result<StageReport, AlgorithmError> {
    let grid = subroutines::gridsynth_rotation(inst.precision_m, hw)?;
    Ok(
        StageReport::new(keys::QAOA_MIXER, "Mixer Rotations", "T_Grid".into(), grid.cost)
            .with_notes("all mixer rotations local and parallel"),
    )
}

pub fn qaoa_iteration(
    inst: &QaoaInstance,
    topo: &QFlyTopology,
    hw: &HardwareProfile,
) -> Result<AlgorithmReport, AlgorithmError> {
    let stages = vec![
        qaoa_fanout_stage(inst, topo, hw)?,
        qaoa_clause_stage(inst, topo, hw)?,
        qaoa_mixer_stage(inst, hw)?,
    ];
    let per_iteration = cost::sum(stages.iter().map(|s| &s.cost), hw.domain())?;
    let p = inst.p_iterations;
    let (formula, cost) = if p > 1 {
        (
            format!("{p} × (sum of QAOA stages)"),
            per_iteration.scale(&int(p as i64))?,
        )
    } else {
        ("Sum of QAOA stages".to_string(), per_iteration)
    };
    Ok(AlgorithmReport {
        name: "QAOA".into(),
        stages,
        total: StageReport::new(keys::QAOA_TOTAL, "Total QAOA Iteration", formula, cost),
    })
}

/// Gradient-state preparation plus the unary amplitude-encoding staircase.
pub fn dqi_setup_unary_stage(inst: &DqiInstance, hw: &HardwareProfile) -> Result<StageReport, AlgorithmError> {
    inst.check()?;
    let domain = hw.domain().clone();
    let prep = subroutines::gridsynth_rotation(inst.precision_m, hw)?;
    let qcla = subroutines::qcla_adder(inst.precision_m, &RoutingRatio::one(), hw)?;
    let per_rotation = CostExpr::per_bell(int(2), domain)?.add(&qcla.cost)?;
    let steps = inst.weight_l - 1;
    let cost = prep.cost.add(&per_rotation.scale(&int(steps as i64))?)?;
    Ok(StageReport::new(
        keys::DQI_SETUP,
        "Setup & Unary Encoding",
        format!("T_Grid + {steps}(2·T_Bell + T_QCLA)"),
        cost,
    )
    .with_notes("CR_y by phase kickback with a GHZ-distributed control; angle uncompute free"))
}

pub fn dqi_dicke_stage(inst: &DqiInstance, hw: &HardwareProfile) -> Result<StageReport, AlgorithmError> {
    inst.check()?;
    let dicke = subroutines::dicke_unitary(inst.weight_l, inst.precision_m, &RoutingRatio::third(), hw, false)?;
    Ok(StageReport::new(
        keys::DQI_DICKE,
        "Dicke Preparation",
        dicke.formula,
        dicke.cost,
    ))
}

pub fn dqi_constraint_stage(inst: &DqiInstance, hw: &HardwareProfile) -> Result<StageReport, AlgorithmError> {
    let slope = 2 * inst.m_clauses as i64;
    Ok(StageReport::new(
        keys::DQI_CONSTRAINT,
        "Constraint Encoding",
        format!("2m·T_Bell = {slope}·T_Bell"),
        CostExpr::per_bell(int(slope), hw.domain().clone())?,
    ))
}

/// Coherent Gauss-Jordan elimination, its uncompute, and the codeword
/// uncompute: `(2(2n + n·ceil(m/q)) + n)·t`.
pub fn dqi_decode_stage(inst: &DqiInstance, hw: &HardwareProfile) -> Result<StageReport, AlgorithmError> {
    inst.check()?;
    let n = inst.n_vars as i64;
    let blocks = (inst.m_clauses as i64 + inst.clause_qubits_per_node as i64 - 1) / inst.clause_qubits_per_node as i64;
    let slope = 2 * (2 * n + n * blocks) + n;
    Ok(StageReport::new(
        keys::DQI_DECODE,
        "Syndrome Decoding",
        format!(
            "(2(2n + n·ceil(m/{})) + n)·T_Bell = {slope}·T_Bell",
            inst.clause_qubits_per_node
        ),
        CostExpr::per_bell(int(slope), hw.domain().clone())?,
    ))
}

/// Binary inverse QFT: a transversal layer of Hadamards.
pub fn dqi_hadamard_stage(_inst: &DqiInstance, hw: &HardwareProfile) -> StageReport {
    StageReport::new(
        keys::DQI_HADAMARD,
        "Hadamard Transform",
        "0".into(),
        CostExpr::zero(hw.domain().clone()),
    )
}

pub fn dqi_total(inst: &DqiInstance, hw: &HardwareProfile) -> Result<AlgorithmReport, AlgorithmError> {
    let stages = vec![
        dqi_setup_unary_stage(inst, hw)?,
        dqi_dicke_stage(inst, hw)?,
        dqi_constraint_stage(inst, hw)?,
        dqi_decode_stage(inst, hw)?,
        dqi_hadamard_stage(inst, hw),
    ];
    let cost = cost::sum(stages.iter().map(|s| &s.cost), hw.domain())?;
    Ok(AlgorithmReport {
        name: "DQI".into(),
        stages,
        total: StageReport::new(keys::DQI_TOTAL, "Total DQI Execution", "Sum of DQI stages".into(), cost),
    })
}

/// Alternative closed-form QAOA total that disagrees with the stage sum; kept
/// for comparison only and never used in reports:
/// `79·t + 176·max(7·t, 5·T_Toff) + 176·max(156·T_Toff, 19·t) + T_Grid`.
pub fn qaoa_alternative_total(hw: &HardwareProfile) -> Result<CostExpr, AlgorithmError> {
    let d = hw.domain().clone();
    let toff = hw.t_toff();
    let a = CostExpr::per_bell(int(79), d.clone())?;
    let b = CostExpr::per_bell(int(7), d.clone())?
        .max_of(&CostExpr::constant(int(5) * &toff, d.clone())?)?
        .scale(&int(176))?;
    let c = CostExpr::constant(int(156) * &toff, d.clone())?
        .max_of(&CostExpr::per_bell(int(19), d.clone())?)?
        .scale(&int(176))?;
    let grid = CostExpr::constant(int(subroutines::gridsynth_cycles(64, hw) as i64), d)?;
    Ok(a.add(&b)?.add(&c)?.add(&grid)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::rat;

    fn defaults() -> (QaoaInstance, DqiInstance, QFlyTopology, HardwareProfile) {
        (
            QaoaInstance::default(),
            DqiInstance::default(),
            QFlyTopology::default(),
            HardwareProfile::default(),
        )
    }

    fn at(s: &StageReport, t: i64) -> u64 {
        s.cycles_at(&int(t)).unwrap()
    }

    #[test]
    fn qaoa_fanout_examples() {
        let (q, _, topo, hw) = defaults();
        let s = qaoa_fanout_stage(&q, &topo, &hw).unwrap();
        assert_eq!(at(&s, 2), 158);
        assert_eq!(at(&s, 5), 395);
        assert_eq!(at(&s, 10), 790);
        let tiny = QFlyTopology::build(2, 12, &[1]).unwrap();
        let q2 = QaoaInstance { n_vars: 2, ..q.clone() };
        assert_eq!(qaoa_fanout_stage(&q2, &tiny, &hw).unwrap().bell_slope(), int(7));
        assert!(matches!(
            qaoa_fanout_stage(&q, &tiny, &hw),
            Err(AlgorithmError::Layout(_))
        ));
    }

    #[test]
    fn qaoa_clause_examples() {
        let (q, _, topo, hw) = defaults();
        assert_eq!(q.n_clauses(), int(11_264));
        assert_eq!(q.clause_rounds(&topo), 176);
        let s = qaoa_clause_stage(&q, &topo, &hw).unwrap();
        assert_eq!(at(&s, 2), 38_896);
        assert_eq!(at(&s, 5), 41_536);
        assert_eq!(at(&s, 10), 47_696);
        assert_eq!(s.cost.slope_at(&int(2)), int(0));
        assert_eq!(s.cost.slope_at(&rat(20, 7)), int(1232));
        assert_eq!(s.cost.breakpoints(), vec![rat(20, 7)]);
    }

    #[test]
    fn fractional_rounds_round_up() {
        let (mut q, _, topo, hw) = defaults();
        q.clause_ratio = rat(1761, 10);
        assert_eq!(q.clause_rounds(&topo), 177);
        assert!(qaoa_clause_stage(&q, &topo, &hw).is_ok());
    }

    #[test]
    fn qaoa_mixer_examples() {
        let (q, _, _, hw) = defaults();
        assert_eq!(at(&qaoa_mixer_stage(&q, &hw).unwrap(), 3), 201);
        let q44 = QaoaInstance {
            precision_m: 44,
            ..q.clone()
        };
        assert_eq!(at(&qaoa_mixer_stage(&q44, &hw).unwrap(), 3), 141);
        let q1 = QaoaInstance { precision_m: 1, ..q };
        assert_eq!(at(&qaoa_mixer_stage(&q1, &hw).unwrap(), 3), 12);
    }

    #[test]
    fn qaoa_iteration_examples() {
        let (q, _, topo, hw) = defaults();
        let r = qaoa_iteration(&q, &topo, &hw).unwrap();
        assert_eq!(at(&r.total, 2), 39_255);
        assert_eq!(at(&r.total, 5), 42_132);
        assert_eq!(at(&r.total, 10), 48_687);

        let q3 = QaoaInstance { p_iterations: 3, ..q };
        let r3 = qaoa_iteration(&q3, &topo, &hw).unwrap();
        assert_eq!(at(&r3.total, 2), 3 * 39_255);
    }

    #[test]
    fn dqi_stage_examples() {
        let (_, d, _, hw) = defaults();
        let setup = dqi_setup_unary_stage(&d, &hw).unwrap();
        assert_eq!([at(&setup, 2), at(&setup, 5), at(&setup, 10)], [1737, 2601, 4041]);
        let dicke = dqi_dicke_stage(&d, &hw).unwrap();
        assert_eq!(
            [at(&dicke, 2), at(&dicke, 5), at(&dicke, 10)],
            [341_792, 345_042, 350_458]
        );
        let cons = dqi_constraint_stage(&d, &hw).unwrap();
        assert_eq!([at(&cons, 2), at(&cons, 10)], [800, 4000]);
        let zero = DqiInstance {
            m_clauses: 0,
            ..d.clone()
        };
        assert!(dqi_constraint_stage(&zero, &hw).unwrap().cost.is_zero());
        let dec = dqi_decode_stage(&d, &hw).unwrap();
        assert_eq!([at(&dec, 2), at(&dec, 5)], [5100, 12_750]);
        assert_eq!(dec.bell_slope(), int(2550));
        let h = dqi_hadamard_stage(&d, &hw);
        assert_eq!(at(&h, 10), 0);
    }

    #[test]
    fn dqi_total_examples() {
        let (_, d, _, hw) = defaults();
        let r = dqi_total(&d, &hw).unwrap();
        assert_eq!(at(&r.total, 2), 349_429);
        assert_eq!(at(&r.total, 5), 362_393);
        assert_eq!(at(&r.total, 10), 383_999);
    }

    #[test]
    fn unit_weight_collapses_setup() {
        let (_, d, _, hw) = defaults();
        let d1 = DqiInstance { weight_l: 1, ..d };
        let s = dqi_setup_unary_stage(&d1, &hw).unwrap();
        assert_eq!(s.cost, CostExpr::constant(int(201), hw.domain().clone()).unwrap());
    }

    #[test]
    fn dqi_instance_checks() {
        let bad = DqiInstance {
            weight_l: 100,
            ..DqiInstance::default()
        };
        assert!(dqi_total(&bad, &HardwareProfile::default()).is_err());
    }

    #[test]
    fn alternative_total_differs_from_stage_sum() {
        let (q, _, topo, hw) = defaults();
        let staged = qaoa_iteration(&q, &topo, &hw).unwrap().total.cost;
        let alt = qaoa_alternative_total(&hw).unwrap();
        assert_ne!(staged.eval(&int(2)).unwrap(), alt.eval(&int(2)).unwrap());
    }
}
