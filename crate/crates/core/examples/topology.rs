//! Inspect a Q-Fly inter-group graph: diameter, ports, routes, broadcasts.

use qfly_pbc::topology::{BroadcastMode, QFlyTopology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let topo = QFlyTopology::default();
    println!("groups {}, nodes/group {}", topo.num_groups(), topo.nodes_per_group());
    println!("diameter {}, switch ports {}", topo.diameter()?, topo.switch_ports());
    let route = topo.route(0, 21)?;
    println!("route 0 -> 21: {:?} ({} hops)", route.groups, route.hop_count());
    for mode in [BroadcastMode::SourceLimited, BroadcastMode::Relaying] {
        let schedule = topo.broadcast_rounds(mode);
        schedule.verify(&topo)?;
        println!(
            "{mode:?} broadcast: {} rounds, max {} hops",
            schedule.num_rounds(),
            schedule.max_hops()
        );
    }

    let ring = QFlyTopology::build(8, 12, &[1])?;
    println!(
        "\nplain ring of 8: diameter {}, ports {}",
        ring.diameter()?,
        ring.switch_ports()
    );
    Ok(())
}
