//! Load a run configuration from TOML, tweak the hardware, and sweep T_Bell.

use qfly_pbc::algorithms;
use qfly_pbc::config::RunConfig;
use qfly_pbc::report::{self, Format};

const CONFIG: &str = r#"
format = "csv"
t_bell = ["2", "7/2", "5"]

[hardware]
t_toff = 3
gridsynth_a = "9.19"

[qaoa]
clause_ratio = "88"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let resolved = RunConfig::from_toml(CONFIG, "inline", None)?.resolve()?;
    let cfg = &resolved.config;
    let qaoa = algorithms::qaoa_iteration(&cfg.qaoa, &resolved.topology, &cfg.hardware)?;
    print!(
        "{}",
        report::render_table(&report::estimate_table(&qaoa, &cfg.t_bell)?, cfg.format)?
    );

    let domain = cfg.hardware.domain();
    let points = report::sweep_points(domain.lo(), domain.hi(), &qfly_pbc::cost::int(2), domain)?;
    print!(
        "\n{}",
        report::render_sweep(&report::sweep(&qaoa, &points)?, Format::Markdown)?
    );
    Ok(())
}
