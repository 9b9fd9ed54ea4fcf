//! Reproduce the full results table and check it against the expected values.

use qfly_pbc::config::RunConfig;
use qfly_pbc::report::{self, Format, TableInputs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let resolved = RunConfig::default().resolve()?;
    let cfg = &resolved.config;
    let table = report::build_table(&TableInputs {
        hardware: &cfg.hardware,
        topology: &resolved.topology,
        qaoa: &cfg.qaoa,
        dqi: &cfg.dqi,
        subroutines: &cfg.subroutines,
        scenarios: &resolved.scenarios,
        t_points: &cfg.t_bell,
    })?;
    print!("{}", report::render_table(&table, Format::Markdown)?);
    let check = report::check_table(&table);
    println!(
        "\n{} cells checked, {} mismatches",
        check.checked,
        check.mismatches.len()
    );
    Ok(())
}
