//! Cost of the building blocks at a few values of T_Bell.

use qfly_pbc::cost::int;
use qfly_pbc::hardware::{HardwareProfile, RoutingRatio};
use qfly_pbc::subroutines;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hw = HardwareProfile::default();
    let third = RoutingRatio::third();
    let costs = [
        subroutines::gidney_adder(64, &third, &hw)?,
        subroutines::qcla_adder(64, &RoutingRatio::one(), &hw)?,
        subroutines::gridsynth_rotation(64, &hw)?,
        subroutines::phase_gradient_rotation(64, &RoutingRatio::one(), &hw)?,
        subroutines::linear_phasing(64, &RoutingRatio::one(), &hw, false)?,
        subroutines::dicke_unitary(25, 64, &third, &hw, false)?,
    ];
    println!("{:<28} {:>8} {:>8} {:>8}  formula", "subroutine", "t=2", "t=5", "t=10");
    for c in &costs {
        println!(
            "{:<28} {:>8} {:>8} {:>8}  {}",
            c.name,
            c.cycles_at(&int(2))?,
            c.cycles_at(&int(5))?,
            c.cycles_at(&int(10))?,
            c.formula
        );
    }
    let grid = subroutines::gridsynth_rotation(64, &hw)?;
    let pg = subroutines::phase_gradient_rotation(64, &RoutingRatio::one(), &hw)?;
    let ccr = subroutines::ccr_tacu(&third, &hw, &pg)?;
    println!("\nCCR via TACU at t = 10: {} cycles", ccr.cycles_at(&int(10))?);
    println!(
        "phase gradient saves {} cycles over gridsynth at t = 10",
        grid.cycles_at(&int(10))? - pg.cycles_at(&int(10))?
    );
    Ok(())
}
