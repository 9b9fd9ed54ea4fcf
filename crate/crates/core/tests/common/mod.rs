#![allow(dead_code)]

use std::collections::BTreeMap;

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use qfly_pbc::cost::{rat, AffineTerm, CostExpr, Domain, Rational};
use qfly_pbc::pipeline::{Job, ResourcePool};
use qfly_pbc::topology::QFlyTopology;
use rand::Rng;

pub fn random_term<R: Rng>(rng: &mut R) -> AffineTerm {
    AffineTerm {
        intercept: rat(rng.gen_range(0..2000), rng.gen_range(1..8)),
        slope: rat(rng.gen_range(0..300), rng.gen_range(1..8)),
    }
}

pub fn random_terms<R: Rng>(rng: &mut R) -> Vec<AffineTerm> {
    let n = rng.gen_range(1..6);
    (0..n).map(|_| random_term(rng)).collect()
}

pub fn random_expr<R: Rng>(rng: &mut R) -> (CostExpr, Vec<AffineTerm>) {
    let terms = random_terms(rng);
    (CostExpr::from_terms(terms.clone(), Domain::default()).unwrap(), terms)
}

/// A random rational in `[2, 10]`.
pub fn random_t<R: Rng>(rng: &mut R) -> Rational {
    let q = rng.gen_range(1..50i64);
    rat(rng.gen_range(2 * q..=10 * q), q)
}

/// Plain maximum over unpruned terms.
pub fn naive_max(terms: &[AffineTerm], t: &Rational) -> Rational {
    terms
        .iter()
        .map(|term| &term.intercept + &term.slope * t)
        .max()
        .unwrap()
}

/// Hop distances from a unit-weight petgraph search; `None` if unreachable.
pub fn petgraph_distances(groups: u32, offsets: &[u32]) -> Vec<Vec<Option<u32>>> {
    let mut g = UnGraph::<(), ()>::new_undirected();
    let nodes: Vec<NodeIndex> = (0..groups).map(|_| g.add_node(())).collect();
    for j in 0..groups {
        for &s in offsets {
            let k = (j + s) % groups;
            if k != j && g.find_edge(nodes[j as usize], nodes[k as usize]).is_none() {
                g.add_edge(nodes[j as usize], nodes[k as usize], ());
            }
        }
    }
    (0..groups)
        .map(|src| {
            let d = dijkstra(&g, nodes[src as usize], None, |_| 1u32);
            (0..groups).map(|dst| d.get(&nodes[dst as usize]).copied()).collect()
        })
        .collect()
}

/// True if every step of `path` moves by one of the topology's offsets.
pub fn path_uses_offsets(topo: &QFlyTopology, path: &[u32]) -> bool {
    let g = topo.num_groups();
    path.windows(2).all(|w| {
        let fwd = (w[1] + g - w[0]) % g;
        topo.offsets().iter().any(|&s| s % g == fwd || (g - s % g) % g == fwd)
    })
}

pub fn random_dag<R: Rng>(rng: &mut R) -> (Vec<Job>, Vec<ResourcePool>) {
    let pool_count = rng.gen_range(1..4);
    let pools: Vec<ResourcePool> = (0..pool_count)
        .map(|i| ResourcePool::new(&format!("p{i}"), rng.gen_range(1..4)))
        .collect();
    let n = rng.gen_range(1..40);
    let jobs = (0..n)
        .map(|id| {
            let mut job = Job::new(id, format!("j{id}"), rng.gen_range(0..12));
            for pool in &pools {
                if rng.gen_bool(0.5) {
                    job = job.uses(&pool.name, rng.gen_range(1..=pool.capacity));
                }
            }
            let preds: Vec<usize> = (0..id).filter(|_| rng.gen_bool(0.15)).collect();
            job.after(preds)
        })
        .collect();
    (jobs, pools)
}

/// Longest duration-weighted path by dynamic programming over ids
/// (predecessors always have lower ids in [`random_dag`]).
pub fn longest_path(jobs: &[Job]) -> u64 {
    let mut finish: BTreeMap<usize, u64> = BTreeMap::new();
    for job in jobs {
        let start = job.preds.iter().map(|p| finish[p]).max().unwrap_or(0);
        finish.insert(job.id, start + job.duration);
    }
    finish.values().copied().max().unwrap_or(0)
}
