//! Stage-by-stage QAOA and DQI estimates, including a custom instance.

use qfly_pbc::algorithms::{self, DqiInstance, QaoaInstance};
use qfly_pbc::cost::int;
use qfly_pbc::hardware::HardwareProfile;
use qfly_pbc::report::{self, Format};
use qfly_pbc::topology::QFlyTopology;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hw = HardwareProfile::default();
    let topo = QFlyTopology::default();
    let points = [int(2), int(5), int(10)];

    let qaoa = algorithms::qaoa_iteration(&QaoaInstance::default(), &topo, &hw)?;
    print!(
        "{}",
        report::render_table(&report::estimate_table(&qaoa, &points)?, Format::Markdown)?
    );
    println!();
    let dqi = algorithms::dqi_total(&DqiInstance::default(), &hw)?;
    print!(
        "{}",
        report::render_table(&report::estimate_table(&dqi, &points)?, Format::Markdown)?
    );

    let three_layers = QaoaInstance {
        p_iterations: 3,
        ..QaoaInstance::default()
    };
    let deep = algorithms::qaoa_iteration(&three_layers, &topo, &hw)?;
    println!("\np = 3 QAOA at t = 5: {} cycles", deep.total.cycles_at(&int(5))?);
    Ok(())
}
