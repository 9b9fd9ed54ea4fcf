//! Two-level Q-Fly topology: switched all-to-all groups joined by a
//! circulant (chordal-ring) inter-group graph.
//!
//! Offsets are usable in both directions, so group `j` is adjacent to
//! `j ± o (mod g)` for every offset `o`.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{int, CostError, CostExpr, Domain};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("need at least 2 groups, got {0}")]
    TooFewGroups(u32),
    #[error("need at least 1 node per group")]
    NoNodes,
    #[error("offset set is empty")]
    NoOffsets,
    #[error("offset {offset} outside [1, {max}]")]
    OffsetOutOfRange { offset: u32, max: u32 },
    #[error("duplicate offset {0}")]
    DuplicateOffset(u32),
    #[error("group {group} out of range for {num_groups} groups")]
    InvalidGroup { group: u32, num_groups: u32 },
    #[error("group {0} is unreachable from group {1}")]
    Unreachable(u32, u32),
    #[error("inter-group graph is disconnected")]
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    pub num_groups: u32,
    pub nodes_per_group: u32,
    pub offsets: Vec<u32>,
    #[serde(default = "default_compute")]
    pub logical_compute_per_node: u32,
    #[serde(default = "default_extractor")]
    pub logical_extractor_per_node: u32,
    #[serde(default = "default_physical")]
    pub physical_per_node: u32,
}

fn default_compute() -> u32 {
    9
}
fn default_extractor() -> u32 {
    1
}
fn default_physical() -> u32 {
    1000
}

impl Default for TopologySpec {
    fn default() -> Self {
        Self {
            num_groups: 64,
            nodes_per_group: 12,
            offsets: vec![1, 2, 4, 8, 16, 32],
            logical_compute_per_node: default_compute(),
            logical_extractor_per_node: default_extractor(),
            physical_per_node: default_physical(),
        }
    }
}

/// A validated Q-Fly configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFlyTopology {
    num_groups: u32,
    nodes_per_group: u32,
    offsets: Vec<u32>,
    pub logical_compute_per_node: u32,
    pub logical_extractor_per_node: u32,
    pub physical_per_node: u32,
}

impl Default for QFlyTopology {
    fn default() -> Self {
        Self::from_spec(&TopologySpec::default()).expect("default topology is valid")
    }
}

impl QFlyTopology {
    pub fn build(num_groups: u32, nodes_per_group: u32, offsets: &[u32]) -> Result<Self, TopologyError> {
        Self::from_spec(&TopologySpec {
            num_groups,
            nodes_per_group,
            offsets: offsets.to_vec(),
            ..TopologySpec::default()
        })
    }

    pub fn from_spec(spec: &TopologySpec) -> Result<Self, TopologyError> {
        if spec.num_groups < 2 {
            return Err(TopologyError::TooFewGroups(spec.num_groups));
        }
        if spec.nodes_per_group == 0 {
            return Err(TopologyError::NoNodes);
        }
        if spec.offsets.is_empty() {
            return Err(TopologyError::NoOffsets);
        }
        let mut seen = BTreeSet::new();
        for &offset in &spec.offsets {
            if offset == 0 || offset >= spec.num_groups {
                return Err(TopologyError::OffsetOutOfRange {
                    offset,
                    max: spec.num_groups - 1,
                });
            }
            if !seen.insert(offset) {
                return Err(TopologyError::DuplicateOffset(offset));
            }
        }
        Ok(Self {
            num_groups: spec.num_groups,
            nodes_per_group: spec.nodes_per_group,
            offsets: seen.into_iter().collect(),
            logical_compute_per_node: spec.logical_compute_per_node,
            logical_extractor_per_node: spec.logical_extractor_per_node,
            physical_per_node: spec.physical_per_node,
        })
    }

    pub fn to_spec(&self) -> TopologySpec {
        TopologySpec {
            num_groups: self.num_groups,
            nodes_per_group: self.nodes_per_group,
            offsets: self.offsets.clone(),
            logical_compute_per_node: self.logical_compute_per_node,
            logical_extractor_per_node: self.logical_extractor_per_node,
            physical_per_node: self.physical_per_node,
        }
    }

    pub fn num_groups(&self) -> u32 {
        self.num_groups
    }

    pub fn nodes_per_group(&self) -> u32 {
        self.nodes_per_group
    }

    /// Ascending offsets.
    pub fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    pub fn num_offsets(&self) -> u32 {
        self.offsets.len() as u32
    }

    /// Offsets with `2o ≡ 0 (mod g)`: a single link serves both directions.
    pub fn duplex_offsets(&self) -> Vec<u32> {
        self.offsets
            .iter()
            .copied()
            .filter(|o| (2 * o) % self.num_groups == 0)
            .collect()
    }

    pub fn total_nodes(&self) -> u32 {
        self.num_groups * self.nodes_per_group
    }

    pub fn total_logical_compute(&self) -> u32 {
        self.total_nodes() * self.logical_compute_per_node
    }

    /// Inter-group ports plus one port per node in the group.
    pub fn switch_ports(&self) -> u32 {
        self.nodes_per_group + self.num_offsets()
    }

    fn check_group(&self, group: u32) -> Result<(), TopologyError> {
        if group >= self.num_groups {
            return Err(TopologyError::InvalidGroup {
                group,
                num_groups: self.num_groups,
            });
        }
        Ok(())
    }

    /// Neighbors in routing-preference order: larger offsets first, `+o`
    /// before `-o`. Duplicates (duplex offsets, `o` and `g - o`) are dropped.
    pub fn neighbors(&self, group: u32) -> Vec<(u32, u32)> {
        let g = self.num_groups;
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(2 * self.offsets.len());
        for &o in self.offsets.iter().rev() {
            for next in [(group + o) % g, (group + g - o) % g] {
                if !out.iter().any(|&(n, _)| n == next) {
                    out.push((next, o));
                }
            }
        }
        out
    }

    /// Hop distances from `src` to every group (`None` if unreachable).
    pub fn distances_from(&self, src: u32) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.num_groups as usize];
        dist[src as usize] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize].expect("visited");
            for (w, _) in self.neighbors(v) {
                if dist[w as usize].is_none() {
                    dist[w as usize] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest shortest-path hop count over all ordered pairs.
    pub fn diameter(&self) -> Result<u32, TopologyError> {
        let mut diameter = 0;
        for src in 0..self.num_groups {
            for d in self.distances_from(src) {
                diameter = diameter.max(d.ok_or(TopologyError::Disconnected)?);
            }
        }
        Ok(diameter)
    }

    /// A shortest group path. At each hop the largest usable offset wins,
    /// with the smaller group index breaking `±o` ties.
    pub fn route(&self, src: u32, dst: u32) -> Result<RoutePath, TopologyError> {
        self.check_group(src)?;
        self.check_group(dst)?;
        let to_dst = self.distances_from(dst);
        let mut remaining = to_dst[src as usize].ok_or(TopologyError::Unreachable(dst, src))?;
        let mut groups = vec![src];
        let mut offsets_used = Vec::new();
        let mut here = src;
        while remaining > 0 {
            let mut best: Option<(u32, u32)> = None;
            for (next, o) in self.neighbors(here) {
                if to_dst[next as usize] != Some(remaining - 1) {
                    continue;
                }
                best = match best {
                    None => Some((next, o)),
                    Some((bn, bo)) if o == bo && next < bn => Some((next, o)),
                    keep => keep,
                };
            }
            let (next, o) = best.expect("BFS guarantees a predecessor on a shortest path");
            groups.push(next);
            offsets_used.push(o);
            here = next;
            remaining -= 1;
        }
        Ok(RoutePath {
            groups,
            offsets: offsets_used,
        })
    }

    pub fn broadcast_rounds(&self, mode: BroadcastMode) -> BroadcastSchedule {
        self.broadcast_rounds_from(0, mode)
    }

    /// Round-by-round fan-out of one group's variable to every other group.
    ///
    /// Each sender uses at most `|offsets|` outgoing links per round. In
    /// source-limited mode only `root` sends; in relaying mode every group
    /// already holding the value sends too.
    pub fn broadcast_rounds_from(&self, root: u32, mode: BroadcastMode) -> BroadcastSchedule {
        let g = self.num_groups as usize;
        let per_round = self.offsets.len();
        let mut reached = vec![false; g];
        reached[root as usize] = true;
        let mut rounds: Vec<Vec<Send>> = Vec::new();

        match mode {
            BroadcastMode::SourceLimited => {
                let dist = self.distances_from(root);
                let mut targets: Vec<u32> = (0..self.num_groups).filter(|&v| v != root).collect();
                targets.sort_by_key(|&v| (dist[v as usize], v));
                for chunk in targets.chunks(per_round) {
                    rounds.push(
                        chunk
                            .iter()
                            .map(|&dst| Send {
                                src: root,
                                dst,
                                hops: dist[dst as usize].unwrap_or(0),
                            })
                            .collect(),
                    );
                }
            }
            BroadcastMode::Relaying => {
                let mut holders = vec![root];
                while holders.len() < g {
                    let mut round = Vec::new();
                    let mut fresh = Vec::new();
                    for &src in &holders {
                        let mut budget = per_round;
                        for (dst, _) in self.neighbors(src) {
                            if budget == 0 {
                                break;
                            }
                            if !reached[dst as usize] {
                                reached[dst as usize] = true;
                                round.push(Send { src, dst, hops: 1 });
                                fresh.push(dst);
                                budget -= 1;
                            }
                        }
                        if budget > 0 {
                            let dist = self.distances_from(src);
                            let mut far: Vec<u32> = (0..self.num_groups).filter(|&v| !reached[v as usize]).collect();
                            far.sort_by_key(|&v| (dist[v as usize], v));
                            for dst in far.into_iter().take(budget) {
                                reached[dst as usize] = true;
                                round.push(Send {
                                    src,
                                    dst,
                                    hops: dist[dst as usize].unwrap_or(0),
                                });
                                fresh.push(dst);
                            }
                        }
                    }
                    if round.is_empty() {
                        break;
                    }
                    holders.extend(fresh);
                    holders.sort_unstable();
                    rounds.push(round);
                }
            }
        }
        BroadcastSchedule { root, mode, rounds }
    }

    /// `ceil((g - 1) / |offsets|)`: root-only inter-group broadcast depth.
    pub fn source_limited_rounds(&self) -> u32 {
        (self.num_groups - 1).div_ceil(self.num_offsets())
    }

    /// Fan-out cost in units of `t`: two for the intra-group GHZ, one per
    /// source-limited broadcast round, and a worst-case `g` for rearranging
    /// the received copies onto nodes.
    pub fn analytic_broadcast_cost(&self, domain: &Domain) -> Result<CostExpr, CostError> {
        let slope = 2 + self.source_limited_rounds() + self.num_groups;
        CostExpr::per_bell(int(slope as i64), domain.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoutePath {
    pub groups: Vec<u32>,
    /// Offset traversed on each hop (direction is implied by `groups`).
    pub offsets: Vec<u32>,
}

impl RoutePath {
    pub fn hop_count(&self) -> u32 {
        (self.groups.len() - 1) as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BroadcastMode {
    SourceLimited,
    Relaying,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Send {
    pub src: u32,
    pub dst: u32,
    /// Group-graph hops of the routed send.
    pub hops: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BroadcastSchedule {
    pub root: u32,
    pub mode: BroadcastMode,
    pub rounds: Vec<Vec<Send>>,
}

impl BroadcastSchedule {
    pub fn num_rounds(&self) -> u32 {
        self.rounds.len() as u32
    }

    /// Checks coverage, single delivery, per-round fan-out limits and that
    /// every sender already held the value.
    pub fn verify(&self, topo: &QFlyTopology) -> Result<(), String> {
        let g = topo.num_groups() as usize;
        let mut holds = vec![false; g];
        holds[self.root as usize] = true;
        for (r, round) in self.rounds.iter().enumerate() {
            let before = holds.clone();
            let mut per_src = vec![0u32; g];
            for send in round {
                if !before[send.src as usize] {
                    return Err(format!("round {r}: group {} sends before receiving", send.src));
                }
                if self.mode == BroadcastMode::SourceLimited && send.src != self.root {
                    return Err(format!("round {r}: non-root sender {}", send.src));
                }
                if holds[send.dst as usize] {
                    return Err(format!("round {r}: group {} receives twice", send.dst));
                }
                holds[send.dst as usize] = true;
                per_src[send.src as usize] += 1;
                if per_src[send.src as usize] > topo.num_offsets() {
                    return Err(format!("round {r}: group {} exceeds its link budget", send.src));
                }
            }
        }
        if let Some(missing) = holds.iter().position(|h| !h) {
            return Err(format!("group {missing} never receives"));
        }
        Ok(())
    }

    pub fn max_hops(&self) -> u32 {
        self.rounds
            .iter()
            .flatten()
            .map(|s| s.hops)
            .max()
            .unwrap_or_else(Zero::zero)
    }
}
