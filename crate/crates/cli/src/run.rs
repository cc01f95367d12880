//! Experiment execution and output files.

use std::fs;
use std::io;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use quasirisk::acceptance::{check_lemma1, sample_non_member, AcceptanceSet};
use quasirisk::duality::{trace_csv, TracePoint};
use quasirisk::risk::{check_continuity, check_monotonicity, check_quasiconvexity};
use quasirisk::space::pairing;
use quasirisk::{check_norm_axioms, dual_representation, sampling, separate, AxiomReport, RiskMeasure, Space};

use crate::config::{ExperimentConfig, ExperimentKind, ExperimentSpec};
use crate::svg;

/// Column order of `results.csv`; frozen.
pub const RESULTS_HEADER: [&str; 9] = ["experiment", "measure", "n", "d", "seed", "primal", "dual", "gap", "status"];

/// Half-width of the box seeded positions are drawn from.
const POSITION_SCALE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// One `(experiment, measure, seed)` instance.
#[derive(Debug, Clone)]
pub struct Row {
    pub experiment: usize,
    pub measure: String,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub primal: Option<f64>,
    pub dual: Option<f64>,
    pub gap: Option<f64>,
    pub status: Status,
    /// Sampled property checks run and failed (property suites only).
    pub checks: usize,
    pub violations: usize,
    /// Weak duality broken beyond tolerance.
    pub hard_failure: bool,
    pub message: Option<String>,
    pub trace: Vec<TracePoint>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSummary {
    pub name: String,
    pub kind: ExperimentKind,
    pub rows: usize,
    pub passed_rows: usize,
    pub failed_rows: usize,
    pub error_rows: usize,
    pub pass_fraction: f64,
    pub min_pass_fraction: f64,
    pub checks: usize,
    pub violations: usize,
    pub weak_duality_violations: usize,
    pub max_abs_gap: Option<f64>,
    pub passed: bool,
    pub errors: Vec<String>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub passed: bool,
    pub experiments: Vec<ExperimentSummary>,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` lets the pool decide.
    pub jobs: Option<usize>,
}

struct Task<'a> {
    experiment: usize,
    spec: &'a ExperimentSpec,
    measure: Option<&'a RiskMeasure>,
    seed: u64,
}

/// Runs every configured experiment. The config must have passed
/// [`crate::config::check`]; rows come back in config order whatever the
/// completion order was.
pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport, String> {
    let space = Space::from_descriptor(&config.space).map_err(|e| e.to_string())?;
    let measures = config
        .measures
        .iter()
        .map(RiskMeasure::from_descriptor)
        .collect::<quasirisk::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;

    let mut tasks = Vec::new();
    for (e, spec) in config.experiments.iter().enumerate() {
        let selected: Vec<Option<&RiskMeasure>> = if spec.kind.uses_measures() {
            spec.measure_indices(measures.len()).into_iter().map(|j| Some(&measures[j])).collect()
        } else {
            vec![None]
        };
        for m in selected {
            for k in 0..spec.trials {
                tasks.push(Task { experiment: e, spec, measure: m, seed: spec.seed.wrapping_add(k as u64) });
            }
        }
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| e.to_string())?;
    let rows: Vec<Row> = pool.install(|| {
        use rayon::prelude::*;
        tasks.par_iter().map(|t| run_task(t, &space)).collect()
    });

    let experiments: Vec<ExperimentSummary> = config
        .experiments
        .iter()
        .enumerate()
        .map(|(e, spec)| summarize(spec, rows.iter().filter(|r| r.experiment == e)))
        .collect();
    Ok(RunReport { passed: experiments.iter().all(|s| s.passed), experiments, rows })
}

fn run_task(task: &Task<'_>, space: &Space) -> Row {
    let start = Instant::now();
    let mut row = Row {
        experiment: task.experiment,
        measure: task.measure.map_or_else(|| "-".to_string(), |m| m.to_string()),
        n: space.n(),
        d: space.d(),
        seed: task.seed,
        primal: None,
        dual: None,
        gap: None,
        status: Status::Pass,
        checks: 0,
        violations: 0,
        hard_failure: false,
        message: None,
        trace: Vec::new(),
        wall_ms: 0.0,
    };
    if let Err(msg) = execute(task, space, &mut row) {
        row.status = Status::Error;
        row.message = Some(msg);
    }
    row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

fn record_suite(row: &mut Row, reports: &[AxiomReport]) {
    row.checks = reports.iter().map(|r| r.trials).sum();
    row.violations = reports.iter().map(|r| r.violations).sum();
    if row.violations > 0 {
        row.status = Status::Fail;
    }
}

fn execute(task: &Task<'_>, space: &Space, row: &mut Row) -> Result<(), String> {
    let spec = task.spec;
    let tol = spec.tolerances.solver;
    let samples = spec.samples();
    let seed = task.seed;
    let position = || sampling::position(&mut sampling::rng(seed), space.n(), space.d(), POSITION_SCALE);
    let rm = || task.measure.ok_or_else(|| "experiment needs a measure".to_string());

    match spec.kind {
        ExperimentKind::AxiomSuite => {
            let rm = rm()?;
            rm.validate(&space.cone).map_err(|e| e.to_string())?;
            let reports = [
                check_monotonicity(rm, space, samples, seed),
                check_quasiconvexity(rm, space, samples, seed),
                check_continuity(rm, space, samples, seed),
            ];
            record_suite(row, &reports);
        }
        ExperimentKind::NormSuite => {
            let report = check_norm_axioms(space, samples, seed, tol).map_err(|e| e.to_string())?;
            record_suite(row, &[report.unit_modular, report.homogeneity, report.triangle, report.holder]);
        }
        ExperimentKind::Lemma1Suite => {
            let rm = rm()?;
            let f = position();
            row.primal = Some(rm.evaluate(&f, &space.measure).map_err(|e| e.to_string())?);
            let a = AcceptanceSet::new(rm, space, spec.level()).map_err(|e| e.to_string())?;
            let report = check_lemma1(&a, &f, samples, seed).map_err(|e| e.to_string())?;
            record_suite(row, &[report]);
        }
        ExperimentKind::SeparationSuite => {
            let rm = rm()?;
            let a = AcceptanceSet::new(rm, space, spec.level()).map_err(|e| e.to_string())?;
            let f = sample_non_member(&a, &mut sampling::rng(seed), POSITION_SCALE)
                .ok_or_else(|| format!("no position outside the acceptance set at level {}", spec.level()))?;
            let cert = separate(&a, &f, tol, spec.budget).map_err(|e| e.to_string())?;
            let p = pairing(&cert.h, &f, &space.measure).map_err(|e| e.to_string())?;
            row.primal = Some(p);
            row.dual = Some(p - cert.margin);
            row.gap = Some(cert.margin);
            row.checks = 1;
            if !cert.is_valid() {
                row.violations = 1;
                row.status = Status::Fail;
                row.message = Some(cert.diagnostics.join("; "));
            }
        }
        ExperimentKind::DualitySweep => {
            let rm = rm()?;
            let f = position();
            let r = dual_representation(rm, space, &f, spec.budget, seed, tol).map_err(|e| e.to_string())?;
            row.primal = Some(r.primal);
            row.dual = Some(r.dual);
            row.gap = Some(r.gap);
            row.trace = r.trace;
            let t = &spec.tolerances;
            if r.gap < -t.weak {
                row.hard_failure = true;
                row.status = Status::Fail;
                row.message = Some(format!("weak duality violated: gap {}", r.gap));
            } else if !(r.gap <= t.gap * (1.0 + r.primal.abs())) {
                row.status = Status::Fail;
            }
        }
    }
    Ok(())
}

fn summarize<'a>(spec: &ExperimentSpec, rows: impl Iterator<Item = &'a Row>) -> ExperimentSummary {
    let rows: Vec<&Row> = rows.collect();
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let passed_rows = count(Status::Pass);
    let pass_fraction = if rows.is_empty() { 0.0 } else { passed_rows as f64 / rows.len() as f64 };
    let weak = rows.iter().filter(|r| r.hard_failure).count();
    let max_abs_gap = match spec.kind {
        ExperimentKind::DualitySweep => rows.iter().filter_map(|r| r.gap).map(f64::abs).reduce(f64::max),
        _ => None,
    };
    let min = spec.tolerances.min_pass_fraction;
    ExperimentSummary {
        name: spec.label(),
        kind: spec.kind,
        rows: rows.len(),
        passed_rows,
        failed_rows: count(Status::Fail),
        error_rows: count(Status::Error),
        pass_fraction,
        min_pass_fraction: min,
        checks: rows.iter().map(|r| r.checks).sum(),
        violations: rows.iter().map(|r| r.violations).sum(),
        weak_duality_violations: weak,
        max_abs_gap,
        // the fraction is compared with a little slack so that 0.8 of 10 rows is 8
        passed: !rows.is_empty() && weak == 0 && pass_fraction + 1e-12 >= min,
        errors: rows
            .iter()
            .filter_map(|r| r.message.as_ref().map(|m| format!("{} seed {}: {m}", r.measure, r.seed)))
            .collect(),
        wall_time_ms: rows.iter().map(|r| r.wall_ms).sum(),
    }
}

fn number(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `results.csv` contents; byte-identical for identical configs.
pub fn results_csv(config: &ExperimentConfig, report: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER).expect("in-memory write");
    for r in &report.rows {
        let name = config.experiments[r.experiment].label();
        let rec = [
            name,
            r.measure.clone(),
            r.n.to_string(),
            r.d.to_string(),
            r.seed.to_string(),
            number(r.primal),
            number(r.dual),
            number(r.gap),
            r.status.as_str().to_string(),
        ];
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn timings_csv(config: &ExperimentConfig, report: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["experiment", "measure", "seed", "wall_time_ms"]).expect("in-memory write");
    for r in &report.rows {
        let rec = [
            config.experiments[r.experiment].label(),
            r.measure.clone(),
            r.seed.to_string(),
            format!("{:.3}", r.wall_ms),
        ];
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Writes `results.csv`, `report.json`, `timings.csv` and, when a duality
/// sweep ran, the gap histogram, the convergence trace and its CSV.
pub fn write_outputs(config: &ExperimentConfig, report: &RunReport, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("results.csv"), results_csv(config, report))?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report).expect("report serializes") + "\n")?;
    fs::write(dir.join("timings.csv"), timings_csv(config, report))?;

    let sweeps: Vec<&Row> =
        report.rows.iter().filter(|r| config.experiments[r.experiment].kind == ExperimentKind::DualitySweep).collect();
    if sweeps.is_empty() {
        return Ok(());
    }
    let gaps: Vec<f64> = sweeps.iter().filter_map(|r| r.gap).collect();
    fs::write(dir.join("gap_histogram.svg"), svg::histogram(&gaps, 20, "duality gap", "primal - dual"))?;
    if let Some(first) = sweeps.iter().find(|r| !r.trace.is_empty()) {
        let mut series: Vec<svg::Series> = Vec::new();
        for p in &first.trace {
            while series.len() <= p.start {
                series.push(svg::Series { label: format!("start {}", series.len()), points: Vec::new() });
            }
            series[p.start].points.push((p.iteration as f64, p.best));
        }
        series.retain(|s| !s.points.is_empty());
        let title = format!("convergence: {} seed {}", first.measure, first.seed);
        fs::write(dir.join("convergence_trace.svg"), svg::line_chart(&series, &title, "iteration", "best dual value"))?;
        fs::write(dir.join("convergence_trace.csv"), trace_csv(&first.trace))?;
    }
    Ok(())
}
