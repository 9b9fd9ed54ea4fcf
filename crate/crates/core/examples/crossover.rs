//! Precision above which phase-gradient phasing beats gridsynth synthesis.

use qfly_pbc::cost::int;
use qfly_pbc::hardware::{HardwareProfile, RoutingRatio};
use qfly_pbc::report::{self, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hw = HardwareProfile::default();
    for t in [2, 5, 10] {
        for r in [RoutingRatio::zero(), RoutingRatio::third(), RoutingRatio::one()] {
            let report = report::crossover(&r, &int(t), &hw)?;
            println!("t = {t:>2}, r = {r:<3} -> m* = {}", report.crossover_m);
        }
    }
    println!();
    let at_ten = report::crossover(&RoutingRatio::one(), &int(10), &hw)?;
    print!("{}", report::render_crossover(&at_ten, Format::Markdown)?);
    Ok(())
}
