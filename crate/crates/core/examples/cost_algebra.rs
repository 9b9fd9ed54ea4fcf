//! Build costs as functions of T_Bell, combine them, and find where they cross.

use qfly_pbc::cost::{crossover_t, format_rational, int, CostExpr, Domain};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domain = Domain::default();
    let gather = CostExpr::per_bell(int(7), domain.clone())?;
    let toffolis = CostExpr::constant(int(20), domain.clone())?;
    let round = gather
        .max_of(&toffolis)?
        .add(&CostExpr::constant(int(201), domain.clone())?)?;
    println!("per round: {round}");
    for t in [2, 5, 10] {
        println!("  t = {t:>2}: {} cycles", round.eval(&int(t))?);
    }
    println!(
        "breakpoints: {:?}",
        round.breakpoints().iter().map(format_rational).collect::<Vec<_>>()
    );
    if let Some(t) = crossover_t(&toffolis, &gather)? {
        println!("Bell-bound from t = {}", format_rational(&t));
    }
    let stage = round.scale(&int(176))?;
    println!("176 rounds at t = 10: {}", stage.eval(&int(10))?.rounded());
    Ok(())
}
