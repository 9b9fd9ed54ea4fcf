//! Report assembly and rendering: the results table, per-algorithm
//! estimates, sweeps, crossover, topology and validation summaries.
//!
//! Values are exact until rendering. Markdown and CSV show rounded cycles;
//! JSON carries the exact rational and the formula behind every cell.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::algorithms::{self, keys, AlgorithmError, AlgorithmReport, DqiInstance, QaoaInstance};
use crate::baseline::{self, Algorithm, AvScenario, BaselineError, GIDNEY_KEY, GRIDSYNTH_KEY};
use crate::cost::{format_rational, int, round_cycles, CostError, CostExpr, Domain, Rational};
use crate::hardware::{self, Finding, HardwareProfile, RoutingRatio};
use crate::pipeline::{self, PipelineError, ValidationReport};
use crate::serde_rational;
use crate::subroutines::{self, SubroutineCost, SubroutineError};
use crate::topology::{BroadcastMode, BroadcastSchedule, QFlyTopology};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Subroutine(#[from] SubroutineError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Topology(#[from] crate::topology::TopologyError),
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv encoding failed: {0}")]
    Csv(String),
}

/// Serializes a cost as its canonical `max(a + b·t, ...)` string.
pub fn serialize_cost<S: Serializer>(cost: &CostExpr, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(cost)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Json,
}

/// `1234567` as `1,234,567`.
pub fn group_thousands(value: u64) -> String {
    let digits = value.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Parameters of the subroutine rows of the results table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SubroutineParams {
    pub adder_bits: u32,
    pub precision_m: u32,
    pub dicke_k: u32,
}

impl Default for SubroutineParams {
    fn default() -> Self {
        Self {
            adder_bits: 64,
            precision_m: 64,
            dicke_k: 25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Analytic,
    ActiveVolume,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Column {
    pub kind: ColumnKind,
    pub label: String,
    #[serde(with = "serde_rational")]
    pub t_bell: Rational,
}

impl Column {
    pub fn analytic(t_bell: &Rational) -> Self {
        Self {
            kind: ColumnKind::Analytic,
            label: format!("T_Bell = {}", format_rational(t_bell)),
            t_bell: t_bell.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub value: u64,
    #[serde(with = "serde_rational")]
    pub exact: Rational,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub key: String,
    pub section: String,
    pub name: String,
    pub formula: String,
    #[serde(serialize_with = "serialize_cost")]
    pub cost: CostExpr,
    #[serde(with = "serde_rational")]
    pub bell_slope: Rational,
    /// One entry per column; `None` renders as `---`.
    pub cells: Vec<Option<Cell>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub schema_version: u32,
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn row(&self, key: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.key == key)
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.label == label)
    }

    /// Rounded value at `(row key, column label)`.
    pub fn value(&self, key: &str, label: &str) -> Option<u64> {
        let col = self.column_index(label)?;
        self.row(key)?.cells[col].as_ref().map(|c| c.value)
    }
}

pub mod sections {
    pub const SUBROUTINES: &str = "Core Subroutines";
    pub const QAOA: &str = "QAOA Iteration Stages";
    pub const DQI: &str = "DQI Execution Stages";
}

/// Where a row's active-volume figure comes from.
#[derive(Debug, Clone, Copy)]
enum AvSource {
    None,
    Blocks(&'static str),
    Total(Algorithm),
}

struct RowSpec {
    key: String,
    section: &'static str,
    name: String,
    formula: String,
    cost: CostExpr,
    av: AvSource,
}

impl RowSpec {
    fn subroutine(key: &str, name: String, sub: SubroutineCost, av: AvSource) -> Self {
        Self {
            key: key.into(),
            section: sections::SUBROUTINES,
            name,
            formula: sub.formula,
            cost: sub.cost,
            av,
        }
    }

    fn stage(section: &'static str, stage: &algorithms::StageReport, av: AvSource) -> Self {
        Self {
            key: stage.key.clone(),
            section,
            name: stage.name.clone(),
            formula: stage.formula.clone(),
            cost: stage.cost.clone(),
            av,
        }
    }
}

pub struct TableInputs<'a> {
    pub hardware: &'a HardwareProfile,
    pub topology: &'a QFlyTopology,
    pub qaoa: &'a QaoaInstance,
    pub dqi: &'a DqiInstance,
    pub subroutines: &'a SubroutineParams,
    pub scenarios: &'a [AvScenario],
    pub t_points: &'a [Rational],
}

fn table_rows(inputs: &TableInputs) -> Result<Vec<RowSpec>, ReportError> {
    let hw = inputs.hardware;
    let p = inputs.subroutines;
    let third = RoutingRatio::third();
    let one = RoutingRatio::one();
    let mut rows = vec![
        RowSpec::subroutine(
            GIDNEY_KEY,
            format!("Gidney Adder ({}-bit)", p.adder_bits),
            subroutines::gidney_adder(p.adder_bits, &third, hw)?,
            AvSource::Blocks(GIDNEY_KEY),
        ),
        RowSpec::subroutine(
            "qcla_adder",
            format!("QCLA (Sklansky, {}-bit)", p.adder_bits),
            subroutines::qcla_adder(p.adder_bits, &one, hw)?,
            AvSource::None,
        ),
        RowSpec::subroutine(
            GRIDSYNTH_KEY,
            format!("Gridsynth Rotation ({}-bit)", p.precision_m),
            subroutines::gridsynth_rotation(p.precision_m, hw)?,
            AvSource::Blocks(GRIDSYNTH_KEY),
        ),
        RowSpec::subroutine(
            "dicke_unitary",
            format!("Dicke State Unitary (k={}, {}-bit phasing)", p.dicke_k, p.precision_m),
            subroutines::dicke_unitary(p.dicke_k, p.precision_m, &third, hw, false)?,
            AvSource::None,
        ),
    ];

    let qaoa = algorithms::qaoa_iteration(inputs.qaoa, inputs.topology, hw)?;
    push_algorithm(&mut rows, sections::QAOA, &qaoa, Algorithm::Qaoa);
    let dqi = algorithms::dqi_total(inputs.dqi, hw)?;
    push_algorithm(&mut rows, sections::DQI, &dqi, Algorithm::Dqi);
    Ok(rows)
}

fn push_algorithm(rows: &mut Vec<RowSpec>, section: &'static str, report: &AlgorithmReport, alg: Algorithm) {
    for stage in &report.stages {
        // a transversal layer has no row of its own
        if stage.key == keys::DQI_HADAMARD {
            continue;
        }
        let av = alg
            .av_stages()
            .iter()
            .find(|&&k| k == stage.key)
            .map(|&k| AvSource::Blocks(k))
            .unwrap_or(AvSource::None);
        rows.push(RowSpec::stage(section, stage, av));
    }
    rows.push(RowSpec::stage(section, &report.total, AvSource::Total(alg)));
}

/// Analytic columns at each `t`, each preceded by the baseline scenarios
/// evaluated at that same `t`.
fn table_columns<'a>(scenarios: &'a [AvScenario], t_points: &[Rational]) -> Vec<(Column, Option<&'a AvScenario>)> {
    let mut columns = Vec::new();
    for t in t_points {
        for s in scenarios.iter().filter(|s| &s.t_bell == t) {
            columns.push((
                Column {
                    kind: ColumnKind::ActiveVolume,
                    label: s.label.clone(),
                    t_bell: t.clone(),
                },
                Some(s),
            ));
        }
        columns.push((Column::analytic(t), None));
    }
    columns
}

fn analytic_cell(cost: &CostExpr, t: &Rational) -> Result<Cell, CostError> {
    let value = cost.eval(t)?;
    Ok(Cell {
        value: value.rounded(),
        exact: value.into_inner(),
        formula: format!("{cost} at t = {}", format_rational(t)),
    })
}

fn av_cell(source: AvSource, scenario: &AvScenario) -> Result<Option<Cell>, BaselineError> {
    let per_cycle = format_rational(&scenario.blocks_per_cycle);
    let t = format_rational(&scenario.t_bell);
    match source {
        AvSource::None => Ok(None),
        AvSource::Blocks(key) => {
            let Some(blocks) = scenario.block_table.get(key) else {
                return Ok(None);
            };
            let exact = baseline::av_time(blocks, scenario).into_inner();
            Ok(Some(Cell {
                value: round_cycles(&exact),
                exact,
                formula: format!("{} blocks / {per_cycle} · {t}", format_rational(blocks)),
            }))
        }
        AvSource::Total(alg) => {
            if alg.av_stages().iter().any(|k| !scenario.block_table.contains_key(*k)) {
                return Ok(None);
            }
            let table = baseline::av_stage_table(scenario, alg)?;
            Ok(Some(Cell {
                value: table.total.cycles,
                exact: table.total.exact,
                formula: "sum of stage times".into(),
            }))
        }
    }
}

/// The full results table: core subroutines, QAOA stages and DQI stages at
/// every evaluation point, with baseline columns where a scenario matches.
pub fn build_table(inputs: &TableInputs) -> Result<Table, ReportError> {
    let specs = table_rows(inputs)?;
    let columns = table_columns(inputs.scenarios, inputs.t_points);
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        let mut cells = Vec::with_capacity(columns.len());
        for (column, scenario) in &columns {
            let cell = match scenario {
                Some(s) => av_cell(spec.av, s)?,
                None => Some(analytic_cell(&spec.cost, &column.t_bell)?),
            };
            cells.push(cell);
        }
        rows.push(Row {
            bell_slope: spec.cost.slope_at(&spec.cost.domain().midpoint()),
            key: spec.key,
            section: spec.section.into(),
            name: spec.name,
            formula: spec.formula,
            cost: spec.cost,
            cells,
        });
    }
    Ok(Table {
        schema_version: SCHEMA_VERSION,
        title: "Resource estimation of core subroutines and algorithms (logical cycles)".into(),
        columns: columns.into_iter().map(|(c, _)| c).collect(),
        rows,
    })
}

/// Breakdown of one algorithm at each `t`, including zero-cost stages.
pub fn estimate_table(report: &AlgorithmReport, t_points: &[Rational]) -> Result<Table, ReportError> {
    let columns: Vec<Column> = t_points.iter().map(Column::analytic).collect();
    let mut rows = Vec::new();
    for stage in report.stages.iter().chain(std::iter::once(&report.total)) {
        let cells = t_points
            .iter()
            .map(|t| analytic_cell(&stage.cost, t).map(Some))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(Row {
            key: stage.key.clone(),
            section: report.name.clone(),
            name: stage.name.clone(),
            formula: stage.formula.clone(),
            bell_slope: stage.bell_slope(),
            cost: stage.cost.clone(),
            cells,
        });
    }
    Ok(Table {
        schema_version: SCHEMA_VERSION,
        title: format!("{} estimate (logical cycles)", report.name),
        columns,
        rows,
    })
}

fn cell_text(cell: &Option<Cell>) -> String {
    cell.as_ref()
        .map(|c| group_thousands(c.value))
        .unwrap_or_else(|| "---".into())
}

fn md_escape(text: &str) -> String {
    text.replace('|', "\\|")
}

pub fn table_markdown(table: &Table) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "**{}**\n", table.title);
    out.push_str("| Subroutine / Algorithm Stage | Analytical Formula |");
    for c in &table.columns {
        let _ = write!(out, " {} |", c.label);
    }
    out.push_str("\n|---|---|");
    out.push_str(&"---:|".repeat(table.columns.len()));
    out.push('\n');
    let mut section = "";
    for row in &table.rows {
        if row.section != section {
            section = &row.section;
            let _ = writeln!(
                out,
                "| **{}** |{}",
                md_escape(section),
                " |".repeat(table.columns.len() + 1)
            );
        }
        let _ = write!(out, "| {} | {} |", md_escape(&row.name), md_escape(&row.formula));
        for cell in &row.cells {
            let _ = write!(out, " {} |", cell_text(cell));
        }
        out.push('\n');
    }
    out
}

fn write_csv(header: Vec<String>, records: Vec<Vec<String>>) -> Result<String, ReportError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(&header)
        .map_err(|e| ReportError::Csv(e.to_string()))?;
    for record in records {
        writer
            .write_record(&record)
            .map_err(|e| ReportError::Csv(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| ReportError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ReportError::Csv(e.to_string()))
}

pub fn table_csv(table: &Table) -> Result<String, ReportError> {
    let mut header: Vec<String> = ["section", "key", "name", "formula"].map(String::from).to_vec();
    header.extend(table.columns.iter().map(|c| c.label.clone()));
    let records = table
        .rows
        .iter()
        .map(|row| {
            let mut rec = vec![
                row.section.clone(),
                row.key.clone(),
                row.name.clone(),
                row.formula.clone(),
            ];
            rec.extend(
                row.cells
                    .iter()
                    .map(|c| c.as_ref().map(|c| c.value.to_string()).unwrap_or_default()),
            );
            rec
        })
        .collect();
    write_csv(header, records)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, ReportError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn render_table(table: &Table, format: Format) -> Result<String, ReportError> {
    match format {
        Format::Markdown => Ok(table_markdown(table)),
        Format::Csv => table_csv(table),
        Format::Json => to_json(table),
    }
}

/// One row of the expected results table:
/// `[AV_2, t=2, t=5, AV_10, t=10]`, `None` where the table shows `---`.
pub struct FixtureRow {
    pub key: &'static str,
    pub cells: [Option<u64>; 5],
}

const fn fx(key: &'static str, cells: [Option<u64>; 5]) -> FixtureRow {
    FixtureRow { key, cells }
}

/// Expected values for the default configuration.
pub const EXPECTED_TABLE: &[FixtureRow] = &[
    fx(GIDNEY_KEY, [Some(19), Some(294), Some(357), Some(94), Some(462)]),
    fx("qcla_adder", [None, Some(60), Some(90), None, Some(140)]),
    fx(GRIDSYNTH_KEY, [Some(32), Some(201), Some(201), Some(156), Some(201)]),
    fx(
        "dicke_unitary",
        [None, Some(341_792), Some(345_042), None, Some(350_458)],
    ),
    fx(keys::QAOA_FANOUT, [None, Some(158), Some(395), None, Some(790)]),
    fx(
        keys::QAOA_CLAUSE,
        [Some(396_294), Some(38_896), Some(41_536), Some(1_936_410), Some(47_696)],
    ),
    fx(
        keys::QAOA_MIXER,
        [Some(2048), Some(201), Some(201), Some(9984), Some(201)],
    ),
    fx(
        keys::QAOA_TOTAL,
        [Some(398_342), Some(39_255), Some(42_132), Some(1_946_394), Some(48_687)],
    ),
    fx(
        keys::DQI_SETUP,
        [Some(1633), Some(1737), Some(2601), Some(7962), Some(4041)],
    ),
    fx(
        keys::DQI_DICKE,
        [
            Some(873_077),
            Some(341_792),
            Some(345_042),
            Some(4_256_369),
            Some(350_458),
        ],
    ),
    fx(
        keys::DQI_CONSTRAINT,
        [Some(208), Some(800), Some(2000), Some(1042), Some(4000)],
    ),
    fx(
        keys::DQI_DECODE,
        [Some(208), Some(5100), Some(12_750), Some(1042), Some(25_500)],
    ),
    fx(
        keys::DQI_TOTAL,
        [
            Some(875_126),
            Some(349_429),
            Some(362_393),
            Some(4_266_415),
            Some(383_999),
        ],
    ),
];

/// Fixture column index for a table column, if the fixture covers it.
fn fixture_column(column: &Column) -> Option<usize> {
    let t = &column.t_bell;
    match column.kind {
        ColumnKind::ActiveVolume if column.label == "AV_2" && *t == int(2) => Some(0),
        ColumnKind::ActiveVolume if column.label == "AV_10" && *t == int(10) => Some(3),
        ColumnKind::Analytic if *t == int(2) => Some(1),
        ColumnKind::Analytic if *t == int(5) => Some(2),
        ColumnKind::Analytic if *t == int(10) => Some(4),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub row: String,
    pub column: String,
    pub expected: u64,
    pub actual: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares every populated fixture cell whose column appears in `table`.
pub fn check_table(table: &Table) -> CheckReport {
    let mut report = CheckReport::default();
    for (col_idx, column) in table.columns.iter().enumerate() {
        let Some(fx_idx) = fixture_column(column) else {
            continue;
        };
        for fixture in EXPECTED_TABLE {
            let Some(expected) = fixture.cells[fx_idx] else {
                continue;
            };
            report.checked += 1;
            let actual = table
                .row(fixture.key)
                .and_then(|r| r.cells[col_idx].as_ref())
                .map(|c| c.value);
            if actual != Some(expected) {
                report.mismatches.push(Mismatch {
                    row: fixture.key.into(),
                    column: column.label.clone(),
                    expected,
                    actual,
                });
            }
        }
    }
    report
}

/// Evaluation points `from, from + step, ...` up to `to`, inside `domain`.
pub fn sweep_points(
    from: &Rational,
    to: &Rational,
    step: &Rational,
    domain: &Domain,
) -> Result<Vec<Rational>, ReportError> {
    use num_traits::Signed;
    if !step.is_positive() {
        return Err(ReportError::Sweep("step must be positive".into()));
    }
    if from > to {
        return Err(ReportError::Sweep(format!(
            "range start {} exceeds end {}",
            format_rational(from),
            format_rational(to)
        )));
    }
    if !domain.contains(from) || !domain.contains(to) {
        return Err(ReportError::Sweep(format!(
            "range [{}, {}] outside domain {domain}",
            format_rational(from),
            format_rational(to)
        )));
    }
    let mut points = Vec::new();
    let mut t = from.clone();
    while &t <= to {
        points.push(t.clone());
        t += step;
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    #[serde(with = "serde_rational")]
    pub t_bell: Rational,
    /// Rounded cycles per stage, then the total, in `keys` order.
    pub cycles: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sweep {
    pub schema_version: u32,
    pub algorithm: String,
    pub keys: Vec<String>,
    pub formulas: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    pub fn series(&self, key: &str) -> Option<Vec<u64>> {
        let idx = self.keys.iter().position(|k| k == key)?;
        Some(self.rows.iter().map(|r| r.cycles[idx]).collect())
    }
}

pub fn sweep(report: &AlgorithmReport, points: &[Rational]) -> Result<Sweep, ReportError> {
    let stages: Vec<_> = report.stages.iter().chain(std::iter::once(&report.total)).collect();
    let mut rows = Vec::with_capacity(points.len());
    for t in points {
        let cycles = stages.iter().map(|s| s.cycles_at(t)).collect::<Result<_, _>>()?;
        rows.push(SweepRow {
            t_bell: t.clone(),
            cycles,
        });
    }
    Ok(Sweep {
        schema_version: SCHEMA_VERSION,
        algorithm: report.name.clone(),
        keys: stages.iter().map(|s| s.key.clone()).collect(),
        formulas: stages.iter().map(|s| s.cost.to_string()).collect(),
        rows,
    })
}

pub fn render_sweep(sweep: &Sweep, format: Format) -> Result<String, ReportError> {
    let mut header = vec!["t_bell".to_string()];
    header.extend(sweep.keys.iter().cloned());
    let records: Vec<Vec<String>> = sweep
        .rows
        .iter()
        .map(|r| {
            let mut rec = vec![format_rational(&r.t_bell)];
            rec.extend(r.cycles.iter().map(u64::to_string));
            rec
        })
        .collect();
    match format {
        Format::Json => to_json(sweep),
        Format::Csv => write_csv(header, records),
        Format::Markdown => {
            let mut out = format!("**{} sweep (logical cycles)**\n\n", sweep.algorithm);
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let _ = writeln!(out, "|{}", "---:|".repeat(header.len()));
            for rec in records {
                let _ = writeln!(out, "| {} |", rec.join(" | "));
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossoverPoint {
    pub precision_m: u32,
    #[serde(with = "serde_rational")]
    pub phase_gradient: Rational,
    #[serde(with = "serde_rational")]
    pub gridsynth: Rational,
    pub phase_gradient_wins: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossoverReport {
    pub schema_version: u32,
    #[serde(with = "serde_rational")]
    pub routing_ratio: Rational,
    #[serde(with = "serde_rational")]
    pub t_bell: Rational,
    pub crossover_m: u32,
    /// `m* - 1`, absent when `m* = 1`.
    pub before: Option<CrossoverPoint>,
    pub at: CrossoverPoint,
}

fn crossover_point(
    m: u32,
    r: &RoutingRatio,
    t: &Rational,
    hw: &HardwareProfile,
) -> Result<CrossoverPoint, ReportError> {
    let step = subroutines::toffoli_step(r, hw)?.eval_unchecked(t);
    let phase_gradient = int((crate::cost::ceil_log2(m as u64) + 4) as i64) * step;
    let gridsynth = hw.gridsynth_exact(m);
    Ok(CrossoverPoint {
        precision_m: m,
        phase_gradient_wins: phase_gradient < gridsynth,
        phase_gradient,
        gridsynth,
    })
}

pub fn crossover(r: &RoutingRatio, t_bell: &Rational, hw: &HardwareProfile) -> Result<CrossoverReport, ReportError> {
    let m = subroutines::rotation_crossover(r, t_bell, hw)?;
    let before = if m > 1 {
        Some(crossover_point(m - 1, r, t_bell, hw)?)
    } else {
        None
    };
    Ok(CrossoverReport {
        schema_version: SCHEMA_VERSION,
        routing_ratio: r.value().clone(),
        t_bell: t_bell.clone(),
        crossover_m: m,
        before,
        at: crossover_point(m, r, t_bell, hw)?,
    })
}

pub fn render_crossover(report: &CrossoverReport, format: Format) -> Result<String, ReportError> {
    let header = ["m", "phase_gradient", "gridsynth", "phase_gradient_wins"]
        .map(String::from)
        .to_vec();
    let records: Vec<Vec<String>> = report
        .before
        .iter()
        .chain(std::iter::once(&report.at))
        .map(|p| {
            vec![
                p.precision_m.to_string(),
                crate::cost::format_decimal(&p.phase_gradient, 2),
                crate::cost::format_decimal(&p.gridsynth, 2),
                p.phase_gradient_wins.to_string(),
            ]
        })
        .collect();
    match format {
        Format::Json => to_json(report),
        Format::Csv => write_csv(header, records),
        Format::Markdown => {
            let mut out = format!(
                "crossover precision m* = {} (r = {}, T_Bell = {})\n\n",
                report.crossover_m,
                format_rational(&report.routing_ratio),
                format_rational(&report.t_bell)
            );
            let _ = writeln!(out, "| {} |", header.join(" | "));
            out.push_str("|---:|---:|---:|---|\n");
            for rec in records {
                let _ = writeln!(out, "| {} |", rec.join(" | "));
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BroadcastSummary {
    pub mode: BroadcastMode,
    pub rounds: u32,
    pub max_hops: u32,
    pub schedule: BroadcastSchedule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub schema_version: u32,
    pub num_groups: u32,
    pub nodes_per_group: u32,
    pub offsets: Vec<u32>,
    pub duplex_offsets: Vec<u32>,
    pub total_nodes: u32,
    pub diameter: u32,
    pub switch_ports: u32,
    pub broadcasts: Vec<BroadcastSummary>,
    #[serde(serialize_with = "serialize_cost")]
    pub analytic_broadcast: CostExpr,
}

pub fn topology_report(topo: &QFlyTopology, domain: &Domain) -> Result<TopologyReport, ReportError> {
    let broadcasts = [BroadcastMode::SourceLimited, BroadcastMode::Relaying]
        .into_iter()
        .map(|mode| {
            let schedule = topo.broadcast_rounds(mode);
            BroadcastSummary {
                mode,
                rounds: schedule.num_rounds(),
                max_hops: schedule.max_hops(),
                schedule,
            }
        })
        .collect();
    Ok(TopologyReport {
        schema_version: SCHEMA_VERSION,
        num_groups: topo.num_groups(),
        nodes_per_group: topo.nodes_per_group(),
        offsets: topo.offsets().to_vec(),
        duplex_offsets: topo.duplex_offsets(),
        total_nodes: topo.total_nodes(),
        diameter: topo.diameter()?,
        switch_ports: topo.switch_ports(),
        broadcasts,
        analytic_broadcast: topo.analytic_broadcast_cost(domain)?,
    })
}

fn join_u32(values: &[u32]) -> String {
    values.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

pub fn render_topology(report: &TopologyReport, format: Format) -> Result<String, ReportError> {
    let mut pairs = vec![
        ("num_groups", report.num_groups.to_string()),
        ("nodes_per_group", report.nodes_per_group.to_string()),
        ("offsets", join_u32(&report.offsets)),
        ("duplex_offsets", join_u32(&report.duplex_offsets)),
        ("total_nodes", report.total_nodes.to_string()),
        ("diameter", report.diameter.to_string()),
        ("switch_ports", report.switch_ports.to_string()),
    ];
    let mode_names = ["source_limited", "relaying"];
    for (b, name) in report.broadcasts.iter().zip(mode_names) {
        pairs.push((name, format!("{} rounds, max {} hops", b.rounds, b.max_hops)));
    }
    let broadcast = report.analytic_broadcast.to_string();
    pairs.push(("analytic_broadcast", broadcast));
    match format {
        Format::Json => to_json(report),
        Format::Csv => write_csv(
            vec!["property".into(), "value".into()],
            pairs.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect(),
        ),
        Format::Markdown => {
            let mut out = String::from("| property | value |\n|---|---|\n");
            for (k, v) in pairs {
                let _ = writeln!(out, "| {k} | {v} |");
            }
            for b in &report.broadcasts {
                let _ = writeln!(out, "\n{:?} broadcast from group {}:", b.mode, b.schedule.root);
                for (i, round) in b.schedule.rounds.iter().enumerate() {
                    let sends: Vec<String> = round.iter().map(|s| format!("{}->{}", s.src, s.dst)).collect();
                    let _ = writeln!(out, "- round {}: {}", i + 1, sends.join(", "));
                }
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidateSummary {
    pub schema_version: u32,
    pub findings: Vec<Finding>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub network_penalty: Option<Rational>,
    pub pipeline: ValidationReport,
}

fn serialize_opt_rational<S: Serializer>(value: &Option<Rational>, serializer: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => serde_rational::serialize(v, serializer),
        None => serializer.serialize_none(),
    }
}

impl ValidateSummary {
    pub fn has_violations(&self) -> bool {
        self.findings
            .iter()
            .any(|f| f.severity == hardware::Severity::Violation)
    }
}

pub fn validate_summary(
    hw: &HardwareProfile,
    topo: &QFlyTopology,
    qaoa: &QaoaInstance,
    t_points: &[Rational],
) -> Result<ValidateSummary, ReportError> {
    Ok(ValidateSummary {
        schema_version: SCHEMA_VERSION,
        findings: hardware::validate_profile(hw),
        network_penalty: hardware::network_penalty(hw).ok(),
        pipeline: pipeline::validate_analytic(qaoa, topo, hw, t_points)?,
    })
}

pub fn render_validate(summary: &ValidateSummary, format: Format) -> Result<String, ReportError> {
    let header = [
        "t_bell",
        "rounds",
        "simulated_per_round",
        "analytic_per_round",
        "slack",
        "simulated_makespan",
        "analytic_stage",
        "startup",
    ]
    .map(String::from)
    .to_vec();
    let records: Vec<Vec<String>> = summary
        .pipeline
        .rows
        .iter()
        .map(|r| {
            vec![
                format_rational(&r.t_bell),
                r.rounds.to_string(),
                r.simulated_per_round.to_string(),
                r.analytic_per_round.to_string(),
                r.slack.to_string(),
                r.simulated_makespan.to_string(),
                r.analytic_stage.to_string(),
                r.startup.to_string(),
            ]
        })
        .collect();
    match format {
        Format::Json => to_json(summary),
        Format::Csv => write_csv(header, records),
        Format::Markdown => {
            let mut out = String::new();
            match &summary.network_penalty {
                Some(p) => {
                    let _ = writeln!(
                        out,
                        "network penalty: {} logical cycles",
                        crate::cost::format_decimal(p, 3)
                    );
                }
                None => out.push_str("network penalty: undefined\n"),
            }
            if summary.findings.is_empty() {
                out.push_str("hardware profile: ok\n");
            }
            for f in &summary.findings {
                let _ = writeln!(out, "{f}");
            }
            out.push_str("\nclause pipeline, simulated vs analytic:\n\n");
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let _ = writeln!(out, "|{}", "---:|".repeat(header.len()));
            for rec in records {
                let _ = writeln!(out, "| {} |", rec.join(" | "));
            }
            Ok(out)
        }
    }
}
