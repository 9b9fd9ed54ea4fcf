//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::time::Instant;

use common::*;
use qfly_pbc::algorithms::{self, keys, DqiInstance, QaoaInstance};
use qfly_pbc::baseline::{av_scale_scenario, av_stage_table, Algorithm, AvScenario};
use qfly_pbc::cost::{int, rat, round_cycles, CostExpr, Domain, Rational};
use qfly_pbc::hardware::{HardwareProfile, RoutingRatio};
use qfly_pbc::pipeline::{self, resource_bound, simulate, verify_schedule};
use qfly_pbc::report::{self, TableInputs};
use qfly_pbc::subroutines;
use qfly_pbc::topology::{BroadcastMode, QFlyTopology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// `p / q` rounded half-up, for non-negative integers.
fn round_div(p: i64, q: i64) -> u64 {
    ((2 * p + q) / (2 * q)) as u64
}

fn default_table() -> report::Table {
    let scenarios = [AvScenario::av2(), AvScenario::av10()];
    report::build_table(&TableInputs {
        hardware: &HardwareProfile::default(),
        topology: &QFlyTopology::default(),
        qaoa: &QaoaInstance::default(),
        dqi: &DqiInstance::default(),
        subroutines: &report::SubroutineParams::default(),
        scenarios: &scenarios,
        t_points: &[int(2), int(5), int(10)],
    })
    .unwrap()
}

/// Expected values at t = 2, 5, 10.
const EXPECTED: &[(&str, [u64; 3])] = &[
    ("gidney_adder", [294, 357, 462]),
    ("qcla_adder", [60, 90, 140]),
    ("gridsynth_rotation", [201, 201, 201]),
    ("dicke_unitary", [341_792, 345_042, 350_458]),
    (keys::QAOA_FANOUT, [158, 395, 790]),
    (keys::QAOA_CLAUSE, [38_896, 41_536, 47_696]),
    (keys::QAOA_MIXER, [201, 201, 201]),
    (keys::QAOA_TOTAL, [39_255, 42_132, 48_687]),
    (keys::DQI_SETUP, [1737, 2601, 4041]),
    (keys::DQI_DICKE, [341_792, 345_042, 350_458]),
    (keys::DQI_CONSTRAINT, [800, 2000, 4000]),
    (keys::DQI_DECODE, [5100, 12_750, 25_500]),
    (keys::DQI_TOTAL, [349_429, 362_393, 383_999]),
];

/// Closed forms in integer arithmetic, independent of the cost algebra.
fn oracle(key: &str, t: i64) -> u64 {
    let dicke3 = 1625 * (627 + 2 * t); // 3 · 1625 (209 + 2t/3)
    let qcla = 10 * (4 + t);
    let setup = 201 + 24 * (2 * t + qcla);
    match key {
        "gidney_adder" => (21 * (12 + t)) as u64,
        "qcla_adder" => qcla as u64,
        "gridsynth_rotation" | keys::QAOA_MIXER => 201,
        "dicke_unitary" | keys::DQI_DICKE => round_div(dicke3, 3),
        keys::QAOA_FANOUT => (79 * t) as u64,
        keys::QAOA_CLAUSE => (176 * ((7 * t).max(20) + 201)) as u64,
        keys::QAOA_TOTAL => (79 * t + 176 * ((7 * t).max(20) + 201) + 201) as u64,
        keys::DQI_SETUP => setup as u64,
        keys::DQI_CONSTRAINT => (400 * t) as u64,
        keys::DQI_DECODE => (2550 * t) as u64,
        keys::DQI_TOTAL => round_div(3 * (setup + 400 * t + 2550 * t) + dicke3, 3),
        _ => unreachable!("{key}"),
    }
}

fn criterion_1() -> Outcome {
    let table = default_table();
    let mut cells = 0;
    for (key, values) in EXPECTED {
        for (i, t) in [2i64, 5, 10].into_iter().enumerate() {
            let label = format!("T_Bell = {t}");
            let got = table.value(key, &label);
            ensure(
                got == Some(values[i]),
                format!("{key} at t={t}: got {got:?}, expected {}", values[i]),
            )?;
            let o = oracle(key, t);
            ensure(
                o == values[i],
                format!("{key} at t={t}: closed form {o}, expected {}", values[i]),
            )?;
            cells += 1;
        }
    }
    // rounded totals equal sums of rounded stages on these instances
    for (total, stages) in [
        (
            keys::QAOA_TOTAL,
            &[keys::QAOA_FANOUT, keys::QAOA_CLAUSE, keys::QAOA_MIXER][..],
        ),
        (
            keys::DQI_TOTAL,
            &[keys::DQI_SETUP, keys::DQI_DICKE, keys::DQI_CONSTRAINT, keys::DQI_DECODE][..],
        ),
    ] {
        for t in ["T_Bell = 2", "T_Bell = 5", "T_Bell = 10"] {
            let sum: u64 = stages.iter().map(|k| table.value(k, t).unwrap()).sum();
            ensure(
                table.value(total, t) == Some(sum),
                format!("{total} at {t} is not the stage sum"),
            )?;
        }
    }
    Ok(format!("{cells} analytic cells exact"))
}

fn criterion_2() -> Outcome {
    let table = default_table();
    let rows = [
        "gidney_adder",
        "gridsynth_rotation",
        keys::QAOA_CLAUSE,
        keys::QAOA_MIXER,
        keys::QAOA_TOTAL,
        keys::DQI_SETUP,
        keys::DQI_DICKE,
        keys::DQI_CONSTRAINT,
        keys::DQI_DECODE,
        keys::DQI_TOTAL,
    ];
    let av2 = [19, 32, 396_294, 2048, 398_342, 1633, 873_077, 208, 208, 875_126];
    let av10 = [
        94, 156, 1_936_410, 9984, 1_946_394, 7962, 4_256_369, 1042, 1042, 4_266_415,
    ];
    for (label, expected) in [("AV_2", av2), ("AV_10", av10)] {
        for (key, want) in rows.iter().zip(expected) {
            let got = table.value(key, label);
            ensure(
                got == Some(want),
                format!("{label} {key}: got {got:?}, expected {want}"),
            )?;
        }
    }
    for scenario in [AvScenario::av2(), AvScenario::av10()] {
        for alg in [Algorithm::Qaoa, Algorithm::Dqi] {
            let st = av_stage_table(&scenario, alg).unwrap();
            let exact: Rational = st.rows.iter().map(|r| r.exact.clone()).sum();
            ensure(
                exact == st.total.exact,
                format!("{} {alg:?} total is not the exact stage sum", scenario.label),
            )?;
            let rounded: u64 = st.rows.iter().map(|r| r.cycles).sum();
            ensure(
                rounded == st.total.cycles,
                format!("{} {alg:?} rounded total differs", scenario.label),
            )?;
        }
    }
    let check = report::check_table(&table);
    ensure(
        check.passed() && check.checked == 59,
        format!("fixture check: {check:?}"),
    )?;
    Ok("20 baseline cells exact, totals are stage sums; 59 populated cells in all".into())
}

fn criterion_3() -> Outcome {
    let hw = HardwareProfile::default();
    let one = RoutingRatio::one();
    let m = subroutines::rotation_crossover(&one, &int(10), &hw).map_err(|e| e.to_string())?;
    ensure(m == 44, format!("crossover {m}"))?;
    // (ceil(log2 m) + 4)(4 + 10) < 9.19 + 3m, checked by hand on integers ×100
    let holds = |m: i64| {
        let layers = 64 - ((m - 1) as u64).leading_zeros() as i64;
        (layers + 4) * 14 * 100 < 919 + 300 * m
    };
    ensure(!holds(43) && holds(44), "inequality boundary is not 43/44")?;
    let pg = subroutines::phase_gradient_rotation(64, &one, &hw)
        .unwrap()
        .cycles_at(&int(10))
        .unwrap();
    let grid = subroutines::gridsynth_rotation(64, &hw)
        .unwrap()
        .cycles_at(&int(10))
        .unwrap();
    ensure(
        pg == 140 && grid - pg == 61,
        format!("phase gradient {pg}, gridsynth {grid}"),
    )?;
    Ok("m* = 44 (false at 43, true at 44); 201 - 140 = 61".into())
}

fn criterion_4() -> Outcome {
    let topo = QFlyTopology::default();
    let d = topo.diameter().map_err(|e| e.to_string())?;
    ensure(d == 3, format!("diameter {d}"))?;
    ensure(topo.switch_ports() == 18, format!("ports {}", topo.switch_ports()))?;
    let sl = topo.broadcast_rounds(BroadcastMode::SourceLimited);
    ensure(
        sl.num_rounds() == 11,
        format!("source-limited rounds {}", sl.num_rounds()),
    )?;
    let rl = topo.broadcast_rounds(BroadcastMode::Relaying);
    ensure(rl.num_rounds() <= 11, format!("relaying rounds {}", rl.num_rounds()))?;
    sl.verify(&topo)?;
    rl.verify(&topo)?;
    let oracle = petgraph_distances(64, topo.offsets());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let (s, t) = (rng.gen_range(0..64u32), rng.gen_range(0..64u32));
        let hops = topo.route(s, t).map_err(|e| e.to_string())?.hop_count();
        ensure(
            Some(hops) == oracle[s as usize][t as usize],
            format!("route {s} -> {t}: {hops} hops"),
        )?;
    }
    Ok(format!(
        "diameter 3, 18 ports, 11 / {} broadcast rounds, 1000 routes = BFS",
        rl.num_rounds()
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checks = 0u32;
    let mut failures = Vec::new();
    let mut record = |ok: bool, what: &str, failures: &mut Vec<String>| {
        checks += 1;
        if !ok && failures.len() < 5 {
            failures.push(what.to_string());
        }
    };
    for _ in 0..2000 {
        let (a, raw_a) = random_expr(&mut rng);
        let (b, _) = random_expr(&mut rng);
        let t1 = random_t(&mut rng);
        let t2 = random_t(&mut rng);
        let k = rat(rng.gen_range(0..100), rng.gen_range(1..9));
        let (fa, fb) = (a.eval_unchecked(&t1), b.eval_unchecked(&t1));

        record(
            a.add(&b).unwrap().eval_unchecked(&t1) == &fa + &fb,
            "add",
            &mut failures,
        );
        record(
            a.scale(&k).unwrap().eval_unchecked(&t1) == &fa * &k,
            "scale",
            &mut failures,
        );
        record(
            a.max_of(&b).unwrap().eval_unchecked(&t1) == fa.clone().max(fb),
            "max",
            &mut failures,
        );
        record(fa == naive_max(&raw_a, &t1), "prune", &mut failures);
        let mid = (&t1 + &t2) / int(2);
        let convex = a.eval_unchecked(&mid) <= (a.eval_unchecked(&t1) + a.eval_unchecked(&t2)) / int(2);
        let (lo, hi) = if t1 <= t2 { (&t1, &t2) } else { (&t2, &t1) };
        let monotone = a.eval_unchecked(lo) <= a.eval_unchecked(hi);
        record(convex && monotone, "convexity/monotonicity", &mut failures);
    }
    // pinned examples from the algebra
    let d = Domain::default();
    let clause = CostExpr::per_bell(int(7), d.clone())
        .unwrap()
        .max_of(&CostExpr::constant(int(20), d.clone()).unwrap())
        .unwrap()
        .add(&CostExpr::constant(int(201), d).unwrap())
        .unwrap()
        .scale(&int(176))
        .unwrap();
    record(
        clause.eval(&int(10)).unwrap().rounded() == 47_696,
        "clause example",
        &mut failures,
    );
    record(
        round_cycles(&rat(1_025_375, 3)) == 341_792,
        "rounding example",
        &mut failures,
    );
    if failures.is_empty() {
        Ok(format!(
            "{} randomized checks and 2 pinned examples, 0 failures",
            checks - 2
        ))
    } else {
        Err(format!("failed: {failures:?}"))
    }
}

fn criterion_6() -> Outcome {
    let hw = HardwareProfile::default();
    let report = pipeline::validate_analytic(
        &QaoaInstance::default(),
        &QFlyTopology::default(),
        &hw,
        &[int(2), int(5), int(10)],
    )
    .map_err(|e| e.to_string())?;
    let per_round: Vec<u64> = report.rows.iter().map(|r| r.simulated_per_round).collect();
    ensure(per_round == [221, 236, 271], format!("per round {per_round:?}"))?;
    for (row, t) in report.rows.iter().zip([2u64, 5, 10]) {
        ensure(
            row.simulated_makespan == row.analytic_stage + 2 * t,
            format!(
                "t={t}: makespan {} vs stage {}",
                row.simulated_makespan, row.analytic_stage
            ),
        )?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..500 {
        let (jobs, pools) = random_dag(&mut rng);
        let s = simulate(&jobs, &pools).map_err(|e| e.to_string())?;
        verify_schedule(&jobs, &pools, &s).map_err(|e| format!("dag {i}: {e}"))?;
        ensure(
            s.makespan >= longest_path(&jobs),
            format!("dag {i} beats its critical path"),
        )?;
        ensure(
            s.makespan >= resource_bound(&jobs, &pools),
            format!("dag {i} beats its resource bound"),
        )?;
    }
    Ok("221/236/271 per round, makespan = stage + 2t, 500 random DAGs within bounds".into())
}

fn criterion_7() -> Outcome {
    let hw = HardwareProfile::default();
    let topo = QFlyTopology::default();
    let qaoa = algorithms::qaoa_iteration(&QaoaInstance::default(), &topo, &hw).unwrap();
    let dqi = algorithms::dqi_total(&DqiInstance::default(), &hw).unwrap();
    let av10 = AvScenario::av10();
    let av2 = AvScenario::av2();
    let ours = |alg: Algorithm, t: i64| -> Rational {
        let r = match alg {
            Algorithm::Qaoa => &qaoa,
            Algorithm::Dqi => &dqi,
        };
        int(r.total.cycles_at(&int(t)).unwrap() as i64)
    };
    let mut notes = Vec::new();
    for alg in [Algorithm::Qaoa, Algorithm::Dqi] {
        let ratio = av_stage_table(&av10, alg).unwrap().total.exact / ours(alg, 10);
        ensure(ratio >= int(10), format!("{alg:?} AV_10 ratio {ratio}"))?;
        notes.push(format!(
            "{alg:?} {:.2}x",
            num_traits::ToPrimitive::to_f64(&ratio).unwrap()
        ));
    }
    // ten times the hardware: AV_2 catches up or overtakes at t = 2
    let scaled = av_scale_scenario(&av2, &int(10)).unwrap();
    for alg in [Algorithm::Qaoa, Algorithm::Dqi] {
        let ratio = av_stage_table(&scaled, alg).unwrap().total.exact / ours(alg, 2);
        ensure(
            ratio <= rat(105, 100),
            format!("scaled {alg:?} ratio {ratio} above 1.05"),
        )?;
        notes.push(format!(
            "scaled {alg:?} {:.3}",
            num_traits::ToPrimitive::to_f64(&ratio).unwrap()
        ));
    }
    Ok(notes.join(", "))
}

fn main() {
    let start = Instant::now();
    let criteria: [Criterion; 7] = [
        ("table regression", criterion_1),
        ("active-volume baseline regression", criterion_2),
        ("rotation crossover", criterion_3),
        ("topology", criterion_4),
        ("cost-algebra properties", criterion_5),
        ("pipeline validation", criterion_6),
        ("order-of-magnitude advantage", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  criterion {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {}: {name} ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
