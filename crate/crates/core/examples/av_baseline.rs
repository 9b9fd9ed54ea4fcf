//! Compare the distributed estimates with the active-volume baseline.

use qfly_pbc::algorithms::{self, DqiInstance, QaoaInstance};
use qfly_pbc::baseline::{av_scale_scenario, av_stage_table, Algorithm, AvScenario};
use qfly_pbc::cost::{format_decimal, int};
use qfly_pbc::hardware::HardwareProfile;
use qfly_pbc::topology::QFlyTopology;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hw = HardwareProfile::default();
    let topo = QFlyTopology::default();
    let qaoa = algorithms::qaoa_iteration(&QaoaInstance::default(), &topo, &hw)?;
    let dqi = algorithms::dqi_total(&DqiInstance::default(), &hw)?;

    for scenario in [AvScenario::av2(), AvScenario::av10()] {
        let t = &scenario.t_bell;
        for (alg, ours) in [(Algorithm::Qaoa, &qaoa), (Algorithm::Dqi, &dqi)] {
            let av = av_stage_table(&scenario, alg)?;
            let mine = ours.total.cycles_at(t)?;
            let ratio = av.total.exact.clone() / int(mine as i64);
            println!(
                "{} {:?}: baseline {} vs {} cycles, ratio {}",
                scenario.label,
                alg,
                av.total.cycles,
                mine,
                format_decimal(&ratio, 2)
            );
        }
    }

    println!("\nbaseline granted ten times the hardware:");
    for scenario in [AvScenario::av2(), AvScenario::av10()] {
        let scaled = av_scale_scenario(&scenario, &int(10))?;
        let av = av_stage_table(&scaled, Algorithm::Qaoa)?;
        let mine = qaoa.total.cycles_at(&scenario.t_bell)?;
        println!("{} QAOA: {} vs {mine}", scaled.label, av.total.cycles);
    }
    Ok(())
}
