//! Resource-constrained list scheduling of small job DAGs, used to check
//! that the analytic clause-evaluation pipeline is actually achievable.
//!
//! Time is in whole logical cycles. The scheduler is a serial schedule
//! generator: among jobs whose predecessors are all placed, the lowest id is
//! placed next at the earliest start that respects precedence and every pool
//! capacity. It is deterministic, not optimal.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::algorithms::{self, AlgorithmError, QaoaInstance};
use crate::cost::{format_rational, int, CostError, Rational};
use crate::hardware::HardwareProfile;
use crate::subroutines::{self, MctWorkload};
use crate::topology::QFlyTopology;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("dependency cycle among jobs {0:?}")]
    Cycle(Vec<usize>),
    #[error("duplicate job id {0}")]
    DuplicateJob(usize),
    #[error("job {job} depends on unknown job {missing}")]
    UnknownPredecessor { job: usize, missing: usize },
    #[error("job {job} uses unknown pool {pool}")]
    UnknownPool { job: usize, pool: String },
    #[error("job {job} demands {demand} of pool {pool} with capacity {capacity}")]
    OverCapacity {
        job: usize,
        pool: String,
        demand: u32,
        capacity: u32,
    },
    #[error("pool {0} has zero capacity")]
    EmptyPool(String),
    #[error("simulated per-round cost {simulated} exceeds analytic {analytic} at t = {t}")]
    AnalyticViolated {
        t: String,
        simulated: u64,
        analytic: String,
    },
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Cost(#[from] CostError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Job {
    pub id: usize,
    pub name: String,
    pub duration: u64,
    /// `(pool, amount)` held for the whole duration.
    pub demands: Vec<(String, u32)>,
    pub preds: Vec<usize>,
}

impl Job {
    pub fn new(id: usize, name: impl Into<String>, duration: u64) -> Self {
        Self {
            id,
            name: name.into(),
            duration,
            demands: Vec::new(),
            preds: Vec::new(),
        }
    }

    pub fn uses(mut self, pool: &str, amount: u32) -> Self {
        self.demands.push((pool.to_string(), amount));
        self
    }

    pub fn after(mut self, preds: impl IntoIterator<Item = usize>) -> Self {
        self.preds.extend(preds);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourcePool {
    pub name: String,
    pub capacity: u32,
}

impl ResourcePool {
    pub fn new(name: &str, capacity: u32) -> Self {
        Self {
            name: name.to_string(),
            capacity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub starts: BTreeMap<usize, u64>,
    pub finishes: BTreeMap<usize, u64>,
    pub makespan: u64,
}

/// Step function of pool usage: each key holds the usage from that cycle up
/// to the next key.
#[derive(Debug, Default)]
struct Profile {
    steps: BTreeMap<u64, u32>,
}

impl Profile {
    fn usage_at(&self, t: u64) -> u32 {
        self.steps.range(..=t).next_back().map(|(_, &u)| u).unwrap_or(0)
    }

    /// First cycle in `[start, end)` where adding `demand` would overflow.
    fn first_conflict(&self, start: u64, end: u64, demand: u32, capacity: u32) -> Option<u64> {
        if self.usage_at(start) + demand > capacity {
            return Some(start);
        }
        self.steps
            .range(start + 1..end)
            .find(|(_, &u)| u + demand > capacity)
            .map(|(&t, _)| t)
    }

    /// Next cycle after `t` at which usage changes.
    fn next_change(&self, t: u64) -> Option<u64> {
        self.steps.range(t + 1..).next().map(|(&k, _)| k)
    }

    fn reserve(&mut self, start: u64, end: u64, amount: u32) {
        let at_end = self.usage_at(end);
        self.steps.entry(end).or_insert(at_end);
        let at_start = self.usage_at(start);
        self.steps.entry(start).or_insert(at_start);
        for (_, usage) in self.steps.range_mut(start..end) {
            *usage += amount;
        }
    }
}

pub fn simulate(jobs: &[Job], pools: &[ResourcePool]) -> Result<Schedule, PipelineError> {
    let mut capacity: BTreeMap<&str, u32> = BTreeMap::new();
    for pool in pools {
        if pool.capacity == 0 {
            return Err(PipelineError::EmptyPool(pool.name.clone()));
        }
        capacity.insert(&pool.name, pool.capacity);
    }

    let mut by_id: BTreeMap<usize, &Job> = BTreeMap::new();
    for job in jobs {
        if by_id.insert(job.id, job).is_some() {
            return Err(PipelineError::DuplicateJob(job.id));
        }
    }
    let mut waiting_on: BTreeMap<usize, usize> = BTreeMap::new();
    let mut successors: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for job in jobs {
        for &p in &job.preds {
            if !by_id.contains_key(&p) {
                return Err(PipelineError::UnknownPredecessor {
                    job: job.id,
                    missing: p,
                });
            }
            successors.entry(p).or_default().push(job.id);
        }
        waiting_on.insert(job.id, job.preds.len());
        for (pool, demand) in &job.demands {
            let cap = *capacity.get(pool.as_str()).ok_or_else(|| PipelineError::UnknownPool {
                job: job.id,
                pool: pool.clone(),
            })?;
            if *demand > cap {
                return Err(PipelineError::OverCapacity {
                    job: job.id,
                    pool: pool.clone(),
                    demand: *demand,
                    capacity: cap,
                });
            }
        }
    }

    let mut ready: BTreeSet<usize> = waiting_on.iter().filter(|(_, &n)| n == 0).map(|(&id, _)| id).collect();
    let mut profiles: BTreeMap<&str, Profile> = BTreeMap::new();
    let mut starts = BTreeMap::new();
    let mut finishes: BTreeMap<usize, u64> = BTreeMap::new();

    while let Some(id) = ready.pop_first() {
        let job = by_id[&id];
        let earliest = job.preds.iter().map(|p| finishes[p]).max().unwrap_or(0);
        let start = if job.duration == 0 {
            earliest
        } else {
            let mut t = earliest;
            loop {
                let end = t + job.duration;
                let conflict = job.demands.iter().find_map(|(pool, demand)| {
                    let profile = profiles.get(pool.as_str())?;
                    profile
                        .first_conflict(t, end, *demand, capacity[pool.as_str()])
                        .map(|at| profile.next_change(at).expect("a conflict ends eventually"))
                });
                match conflict {
                    Some(next) => t = next,
                    None => break t,
                }
            }
        };
        let end = start + job.duration;
        if job.duration > 0 {
            for (pool, demand) in &job.demands {
                profiles.entry(pool.as_str()).or_default().reserve(start, end, *demand);
            }
        }
        starts.insert(id, start);
        finishes.insert(id, end);
        for &succ in successors.get(&id).map(Vec::as_slice).unwrap_or(&[]) {
            let n = waiting_on.get_mut(&succ).expect("known job");
            *n -= 1;
            if *n == 0 {
                ready.insert(succ);
            }
        }
    }

    if finishes.len() != jobs.len() {
        let stuck = by_id.keys().filter(|id| !finishes.contains_key(id)).copied().collect();
        return Err(PipelineError::Cycle(stuck));
    }
    let makespan = finishes.values().copied().max().unwrap_or(0);
    Ok(Schedule {
        starts,
        finishes,
        makespan,
    })
}

/// Longest duration-weighted path through the DAG.
pub fn critical_path(jobs: &[Job]) -> Result<u64, PipelineError> {
    // a pool-free run is exactly the earliest-start schedule
    let free: Vec<Job> = jobs
        .iter()
        .map(|j| Job {
            demands: Vec::new(),
            ..j.clone()
        })
        .collect();
    Ok(simulate(&free, &[])?.makespan)
}

/// `max over pools of ceil(sum(duration · demand) / capacity)`.
pub fn resource_bound(jobs: &[Job], pools: &[ResourcePool]) -> u64 {
    pools
        .iter()
        .map(|pool| {
            let work: u64 = jobs
                .iter()
                .flat_map(|j| {
                    j.demands
                        .iter()
                        .filter(|(p, _)| p == &pool.name)
                        .map(move |(_, d)| j.duration * *d as u64)
                })
                .sum();
            work.div_ceil(pool.capacity as u64)
        })
        .max()
        .unwrap_or(0)
}

pub mod pools {
    /// T-state delivery at a clause-evaluating node (one per cycle).
    pub const MCT_FACTORY: &str = "t_factory_mct";
    /// T-state delivery at the node that applies the phase rotation.
    pub const PHASE_FACTORY: &str = "t_factory_phase";
    /// Serialized Bell-pair consumption at the gathering node.
    pub const BELL_PORT: &str = "bell_port";
    /// Background Bell-pair generation for the gathering node.
    pub const BELL_LINK: &str = "bell_link";
}

#[derive(Debug, Clone)]
pub struct ClausePipeline {
    pub jobs: Vec<Job>,
    pub pools: Vec<ResourcePool>,
    pub startup_job: usize,
    /// Phase job of each round, in order.
    pub phase_jobs: Vec<usize>,
    pub startup_cycles: u64,
}

/// `ceil(t)`: a fractional Bell consumption occupies whole cycles here.
pub fn bell_cycles(t_bell: &Rational) -> u64 {
    t_bell.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// Job DAG for `rounds` clause-evaluation rounds of one group.
///
/// Each round runs the local MCT Toffolis on one node's T-state factory while
/// the gathering node consumes one Bell pair per contributing node, then
/// applies the gridsynth phase rotation. Bell pairs for the next round are
/// generated into the memory slot freed by the matching consumption and may
/// overlap the current phasing. The next round's MCT and gather reuse the
/// round's ancillas and wait for its phasing.
pub fn build_clause_pipeline(
    inst: &QaoaInstance,
    hw: &HardwareProfile,
    t_bell: &Rational,
    rounds: u64,
) -> ClausePipeline {
    let bell = bell_cycles(t_bell);
    let toffolis = subroutines::local_mct(MctWorkload::QaoaPartialClause).expect("fixed workload") as usize;
    let phase = subroutines::gridsynth_cycles(inst.precision_m, hw);
    let gather = inst.gather_nodes as usize;
    let startup_cycles = 2 * bell;

    let pools = vec![
        ResourcePool::new(pools::MCT_FACTORY, 1),
        ResourcePool::new(pools::PHASE_FACTORY, 1),
        ResourcePool::new(pools::BELL_PORT, 1),
        ResourcePool::new(pools::BELL_LINK, 1),
    ];
    if rounds == 0 {
        return ClausePipeline {
            jobs: Vec::new(),
            pools,
            startup_job: 0,
            phase_jobs: Vec::new(),
            startup_cycles: 0,
        };
    }

    let mut jobs = Vec::new();
    let mut next_id = 0usize;
    let mut push = |jobs: &mut Vec<Job>, job: Job| {
        jobs.push(job);
        next_id += 1;
        next_id - 1
    };

    let startup = push(&mut jobs, Job::new(0, "startup", startup_cycles));
    let mut phase_jobs = Vec::new();
    let mut round_gate = startup;
    let mut prev_gathers: Vec<usize> = Vec::new();
    let mut prev_prep: Option<usize> = None;

    for round in 0..rounds {
        let mut preps = Vec::with_capacity(gather);
        for k in 0..gather {
            let id = jobs.len();
            let mut job = Job::new(id, format!("r{round}.bell_prep{k}"), bell).uses(pools::BELL_LINK, 1);
            job = job.after(prev_prep);
            if let Some(&slot) = prev_gathers.get(k) {
                job = job.after([slot]);
            }
            let id = push(&mut jobs, job);
            preps.push(id);
            prev_prep = Some(id);
        }

        let mut last_mct = round_gate;
        for j in 0..toffolis {
            let id = jobs.len();
            let job = Job::new(id, format!("r{round}.mct{j}"), hw.t_toff as u64)
                .uses(pools::MCT_FACTORY, 1)
                .after([last_mct]);
            last_mct = push(&mut jobs, job);
        }

        let mut gathers = Vec::with_capacity(gather);
        let mut last_gather = round_gate;
        for (k, &prep) in preps.iter().enumerate() {
            let id = jobs.len();
            let job = Job::new(id, format!("r{round}.gather{k}"), bell)
                .uses(pools::BELL_PORT, 1)
                .after([last_gather, prep]);
            last_gather = push(&mut jobs, job);
            gathers.push(last_gather);
        }

        let id = jobs.len();
        let job = Job::new(id, format!("r{round}.phase"), phase)
            .uses(pools::PHASE_FACTORY, 1)
            .after([last_mct, last_gather]);
        let phase_id = push(&mut jobs, job);
        phase_jobs.push(phase_id);
        round_gate = phase_id;
        prev_gathers = gathers;
    }

    ClausePipeline {
        jobs,
        pools,
        startup_job: startup,
        phase_jobs,
        startup_cycles,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationRow {
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub t_bell: Rational,
    pub rounds: u64,
    pub simulated_per_round: u64,
    pub analytic_per_round: u64,
    pub slack: i64,
    pub simulated_makespan: u64,
    pub analytic_stage: u64,
    pub startup: u64,
    /// Every round took the same number of cycles.
    pub uniform_rounds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
}

/// Simulates the full clause stage at each `t` and compares its steady-state
/// round time with the analytic `max(g·t, c·T_Toff) + T_Grid`.
pub fn validate_analytic(
    inst: &QaoaInstance,
    topo: &QFlyTopology,
    hw: &HardwareProfile,
    t_points: &[Rational],
) -> Result<ValidationReport, PipelineError> {
    let rounds = inst.clause_rounds(topo).max(1);
    let per_round = algorithms::clause_round_cost(inst, hw)?;
    let stage = algorithms::qaoa_clause_stage(inst, topo, hw)?;
    let mut rows = Vec::new();
    for t in t_points {
        let analytic_round = per_round.eval(t)?;
        let analytic_stage = stage.cycles_at(t)?;
        let pipeline = build_clause_pipeline(inst, hw, t, rounds.max(2));
        let schedule = simulate(&pipeline.jobs, &pipeline.pools)?;
        let phase_ends: Vec<u64> = pipeline.phase_jobs.iter().map(|id| schedule.finishes[id]).collect();
        let gaps: Vec<u64> = phase_ends.windows(2).map(|w| w[1] - w[0]).collect();
        let simulated = *gaps.last().expect("at least two rounds");
        let uniform = gaps.iter().all(|&g| g == simulated);
        let makespan = if rounds == pipeline.phase_jobs.len() as u64 {
            schedule.makespan
        } else {
            phase_ends[rounds as usize - 1]
        };
        if int(simulated as i64) > *analytic_round.exact() {
            return Err(PipelineError::AnalyticViolated {
                t: format_rational(t),
                simulated,
                analytic: format_rational(analytic_round.exact()),
            });
        }
        rows.push(ValidationRow {
            t_bell: t.clone(),
            rounds,
            simulated_per_round: simulated,
            analytic_per_round: analytic_round.rounded(),
            slack: analytic_round.rounded() as i64 - simulated as i64,
            simulated_makespan: makespan,
            analytic_stage,
            startup: pipeline.startup_cycles,
            uniform_rounds: uniform,
        });
    }
    Ok(ValidationReport { rows })
}

/// Checks precedence and per-cycle capacity of a schedule.
pub fn verify_schedule(jobs: &[Job], pools: &[ResourcePool], schedule: &Schedule) -> Result<(), String> {
    for job in jobs {
        let start = schedule.starts[&job.id];
        for p in &job.preds {
            if schedule.finishes[p] > start {
                return Err(format!("job {} starts before predecessor {p} finishes", job.id));
            }
        }
    }
    for pool in pools {
        let mut events: BTreeMap<u64, i64> = BTreeMap::new();
        for job in jobs.iter().filter(|j| j.duration > 0) {
            for (_, d) in job.demands.iter().filter(|(p, _)| p == &pool.name) {
                let s = schedule.starts[&job.id];
                *events.entry(s).or_default() += *d as i64;
                *events.entry(s + job.duration).or_default() -= *d as i64;
            }
        }
        let mut usage = 0i64;
        for (t, delta) in events {
            usage += delta;
            if usage > pool.capacity as i64 {
                return Err(format!("pool {} over capacity at cycle {t}", pool.name));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw() -> HardwareProfile {
        HardwareProfile::default()
    }

    #[test]
    fn independent_unit_jobs() {
        let jobs = vec![Job::new(0, "a", 1).uses("p", 1), Job::new(1, "b", 1).uses("p", 1)];
        let wide = simulate(&jobs, &[ResourcePool::new("p", 2)]).unwrap();
        assert_eq!(wide.makespan, 1);
        let narrow = simulate(&jobs, &[ResourcePool::new("p", 1)]).unwrap();
        assert_eq!(narrow.makespan, 2);
    }

    #[test]
    fn backfills_idle_capacity() {
        // job 2 is ready immediately but listed after a long chain
        let jobs = vec![
            Job::new(0, "a", 3).uses("p", 1),
            Job::new(1, "b", 3).uses("p", 1).after([0]),
            Job::new(2, "c", 2),
        ];
        let s = simulate(&jobs, &[ResourcePool::new("p", 1)]).unwrap();
        assert_eq!(s.starts[&2], 0);
        assert_eq!(s.makespan, 6);
    }

    #[test]
    fn cycle_is_rejected() {
        let jobs = vec![Job::new(0, "a", 1).after([1]), Job::new(1, "b", 1).after([0])];
        assert_eq!(simulate(&jobs, &[]), Err(PipelineError::Cycle(vec![0, 1])));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            simulate(&[Job::new(0, "a", 1).after([7])], &[]),
            Err(PipelineError::UnknownPredecessor { .. })
        ));
        assert!(matches!(
            simulate(&[Job::new(0, "a", 1).uses("x", 1)], &[]),
            Err(PipelineError::UnknownPool { .. })
        ));
        assert!(matches!(
            simulate(&[Job::new(0, "a", 1).uses("p", 2)], &[ResourcePool::new("p", 1)]),
            Err(PipelineError::OverCapacity { .. })
        ));
        assert!(matches!(
            simulate(&[Job::new(0, "a", 1), Job::new(0, "b", 1)], &[]),
            Err(PipelineError::DuplicateJob(0))
        ));
    }

    #[test]
    fn single_round_pipeline() {
        let p = build_clause_pipeline(&QaoaInstance::default(), &hw(), &int(10), 1);
        let s = simulate(&p.jobs, &p.pools).unwrap();
        assert_eq!(s.makespan, 2 * 10 + 70 + 201);
        verify_schedule(&p.jobs, &p.pools, &s).unwrap();
    }

    #[test]
    fn empty_pipeline() {
        let p = build_clause_pipeline(&QaoaInstance::default(), &hw(), &int(10), 0);
        assert!(p.jobs.is_empty());
        assert_eq!(simulate(&p.jobs, &p.pools).unwrap().makespan, 0);
    }

    #[test]
    fn full_stage_pipeline() {
        let p = build_clause_pipeline(&QaoaInstance::default(), &hw(), &int(10), 176);
        let s = simulate(&p.jobs, &p.pools).unwrap();
        assert_eq!(s.makespan, 47_716);
        assert_eq!(s.makespan - 47_696, p.startup_cycles);
    }

    #[test]
    fn validation_rows() {
        let report = validate_analytic(
            &QaoaInstance::default(),
            &QFlyTopology::default(),
            &hw(),
            &[int(2), int(5), int(10)],
        )
        .unwrap();
        let per_round: Vec<u64> = report.rows.iter().map(|r| r.simulated_per_round).collect();
        assert_eq!(per_round, vec![221, 236, 271]);
        for row in &report.rows {
            assert_eq!(row.slack, 0);
            assert!(row.uniform_rounds);
            assert_eq!(row.simulated_makespan - row.analytic_stage, row.startup);
        }
    }

    #[test]
    fn fractional_t_rounds_up_per_consumption() {
        assert_eq!(bell_cycles(&crate::cost::rat(5, 2)), 3);
        let p = build_clause_pipeline(&QaoaInstance::default(), &hw(), &crate::cost::rat(5, 2), 1);
        let s = simulate(&p.jobs, &p.pools).unwrap();
        assert_eq!(s.makespan, 6 + 21 + 201);
    }
}
