mod common;

use common::*;
use qfly_pbc::topology::{BroadcastMode, QFlyTopology, TopologyError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn routes_match_bfs_on_random_pairs() {
    let topo = QFlyTopology::default();
    let oracle = petgraph_distances(64, topo.offsets());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let (s, d) = (rng.gen_range(0..64), rng.gen_range(0..64));
        let route = topo.route(s, d).unwrap();
        assert_eq!(Some(route.hop_count()), oracle[s as usize][d as usize], "{s} -> {d}");
        assert_eq!(route.groups.first(), Some(&s));
        assert_eq!(route.groups.last(), Some(&d));
        assert!(path_uses_offsets(&topo, &route.groups));
    }
}

#[test]
fn random_circulants_match_bfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 40 {
        let g = rng.gen_range(3..40u32);
        let mut offsets: Vec<u32> = (1..g).filter(|_| rng.gen_bool(0.2)).collect();
        offsets.dedup();
        let topo = match QFlyTopology::build(g, 4, &offsets) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let oracle = petgraph_distances(g, topo.offsets());
        let connected = oracle.iter().flatten().all(Option::is_some);
        if !connected {
            assert!(matches!(topo.diameter(), Err(TopologyError::Disconnected)));
            continue;
        }
        let expected_diameter = oracle.iter().flatten().flatten().copied().max().unwrap();
        assert_eq!(topo.diameter().unwrap(), expected_diameter, "g={g} offsets={offsets:?}");
        for src in 0..g {
            let dist = topo.distances_from(src);
            for dst in 0..g {
                assert_eq!(dist[dst as usize], oracle[src as usize][dst as usize]);
            }
        }
        for mode in [BroadcastMode::SourceLimited, BroadcastMode::Relaying] {
            let s = topo.broadcast_rounds(mode);
            s.verify(&topo).unwrap();
        }
        checked += 1;
    }
}

#[test]
fn small_examples() {
    let ring = QFlyTopology::build(8, 12, &[1]).unwrap();
    assert_eq!(ring.diameter().unwrap(), 4);
    assert_eq!(ring.switch_ports(), 13);
    let complete = QFlyTopology::build(64, 12, &(1..64).collect::<Vec<_>>()).unwrap();
    assert_eq!(complete.diameter().unwrap(), 1);
    let split = QFlyTopology::build(8, 12, &[2]).unwrap();
    assert!(matches!(split.diameter(), Err(TopologyError::Disconnected)));
}

#[test]
fn broadcast_reaches_everyone_once() {
    let topo = QFlyTopology::default();
    for root in [0, 17, 63] {
        for mode in [BroadcastMode::SourceLimited, BroadcastMode::Relaying] {
            let s = topo.broadcast_rounds_from(root, mode);
            let mut reached: Vec<u32> = s.rounds.iter().flatten().map(|send| send.dst).collect();
            reached.sort_unstable();
            let expected: Vec<u32> = (0..64).filter(|&g| g != root).collect();
            assert_eq!(reached, expected);
            assert!(s.max_hops() <= 3);
        }
    }
}
