//! Simulate the clause-evaluation pipeline and compare with the analytic cost.

use qfly_pbc::algorithms::QaoaInstance;
use qfly_pbc::cost::int;
use qfly_pbc::hardware::HardwareProfile;
use qfly_pbc::pipeline::{self, build_clause_pipeline, simulate};
use qfly_pbc::topology::QFlyTopology;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = QaoaInstance::default();
    let hw = HardwareProfile::default();

    let p = build_clause_pipeline(&inst, &hw, &int(10), 3);
    let schedule = simulate(&p.jobs, &p.pools)?;
    pipeline::verify_schedule(&p.jobs, &p.pools, &schedule)?;
    for job in &p.jobs {
        println!(
            "{:>5} .. {:>5}  {}",
            schedule.starts[&job.id], schedule.finishes[&job.id], job.name
        );
    }
    println!(
        "makespan {} (critical path {}, resource bound {})",
        schedule.makespan,
        pipeline::critical_path(&p.jobs)?,
        pipeline::resource_bound(&p.jobs, &p.pools)
    );

    let report = pipeline::validate_analytic(&inst, &QFlyTopology::default(), &hw, &[int(2), int(5), int(10)])?;
    for row in &report.rows {
        println!(
            "t = {:>2}: simulated {} per round, analytic {}, makespan {} = stage {} + start-up {}",
            row.t_bell,
            row.simulated_per_round,
            row.analytic_per_round,
            row.simulated_makespan,
            row.analytic_stage,
            row.startup
        );
    }
    Ok(())
}
