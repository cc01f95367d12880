//! Experiment configuration: JSON schema, loading and semantic validation.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use quasirisk::{ConeSpace, MeasureDescriptor, RiskMeasure, Space, SpaceDescriptor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub space: SpaceDescriptor,
    pub measures: Vec<MeasureDescriptor>,
    pub experiments: Vec<ExperimentSpec>,
    /// Relative paths resolve against the directory of the config file.
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentKind {
    AxiomSuite,
    Lemma1Suite,
    DualitySweep,
    SeparationSuite,
    NormSuite,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::AxiomSuite => "AxiomSuite",
            ExperimentKind::Lemma1Suite => "Lemma1Suite",
            ExperimentKind::DualitySweep => "DualitySweep",
            ExperimentKind::SeparationSuite => "SeparationSuite",
            ExperimentKind::NormSuite => "NormSuite",
        }
    }

    /// Whether rows are produced per measure; the norm suite only sees the space.
    pub fn uses_measures(&self) -> bool {
        !matches!(self, ExperimentKind::NormSuite)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Rows per measure; row `k` uses seed `seed + k`.
    pub trials: usize,
    /// Evaluation budget handed to the numerical routines.
    pub budget: usize,
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Inner sample count of the property suites.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Acceptance level for the membership and separation suites.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    /// Indices into `measures`; all of them when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<Vec<usize>>,
}

pub const DEFAULT_SAMPLES: usize = 200;

impl ExperimentSpec {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.name().to_string())
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn level(&self) -> f64 {
        self.level.unwrap_or(0.0)
    }

    pub fn measure_indices(&self, available: usize) -> Vec<usize> {
        self.measures.clone().unwrap_or_else(|| (0..available).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Tolerance handed to bisections, projections and norm computations.
    pub solver: f64,
    /// A duality row passes when `gap ≤ gap·(1 + |primal|)`.
    pub gap: f64,
    /// Largest negative gap tolerated; anything below fails the experiment.
    pub weak: f64,
    /// Fraction of rows that must pass.
    pub min_pass_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { solver: 1e-9, gap: 1e-6, weak: 1e-6, min_pass_fraction: 1.0 }
    }
}

/// One problem found in a config. Syntax and schema errors carry a line and
/// column; semantic ones carry a JSON path.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub path: Option<String>,
    pub message: String,
}

impl Diagnostic {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { line: None, column: None, path: Some(path.into()), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column, &self.path) {
            (Some(l), Some(c), _) => write!(f, "line {l}, column {c}: {}", self.message),
            (_, _, Some(p)) => write!(f, "{p}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

/// Parses a config. On failure returns the diagnostics instead.
pub fn parse(text: &str) -> Result<ExperimentConfig, Vec<Diagnostic>> {
    let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
        vec![Diagnostic { line: Some(e.line()), column: Some(e.column()), path: None, message: e.to_string() }]
    })?;
    let diags = check(&config);
    if diags.is_empty() {
        Ok(config)
    } else {
        Err(diags)
    }
}

pub fn load(path: &Path) -> Result<ExperimentConfig, Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![Diagnostic {
            line: None,
            column: None,
            path: None,
            message: format!("cannot read {}: {e}", path.display()),
        }]
    })?;
    parse(&text)
}

/// Diagnostics for a config file without running anything; empty means valid.
pub fn validate(path: &Path) -> Vec<Diagnostic> {
    match load(path) {
        Ok(_) => Vec::new(),
        Err(d) => d,
    }
}

fn error_message(e: &quasirisk::Error) -> String {
    match e {
        quasirisk::Error::Domain(m) | quasirisk::Error::Descriptor(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Semantic checks on a parsed config.
pub fn check(config: &ExperimentConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let desc = &config.space;
    if let Err(e) = Space::from_descriptor(desc) {
        out.push(Diagnostic::at("space", error_message(&e)));
    }
    // measures are checked against the cone even when the rest of the space is broken
    let cone = match &desc.cone {
        None if desc.d > 0 => Some(ConeSpace::orthant(desc.d)),
        None => None,
        Some(c) => ConeSpace::new(desc.d, c.generators.clone(), c.facets.clone(), c.dual_generators.clone()).ok(),
    };

    if config.measures.is_empty() {
        out.push(Diagnostic::at("measures", "at least one measure is required"));
    }
    for (i, m) in config.measures.iter().enumerate() {
        let path = format!("measures[{i}]");
        match RiskMeasure::from_descriptor(m) {
            Err(e) => out.push(Diagnostic::at(path, error_message(&e))),
            Ok(rm) => {
                if let Some(cone) = &cone {
                    out.extend(rm.diagnostics(cone).into_iter().map(|msg| Diagnostic::at(path.clone(), msg)));
                }
            }
        }
    }

    if config.experiments.is_empty() {
        out.push(Diagnostic::at("experiments", "at least one experiment is required"));
    }
    for (i, e) in config.experiments.iter().enumerate() {
        let path = format!("experiments[{i}]");
        if e.trials == 0 {
            out.push(Diagnostic::at(format!("{path}.trials"), "trials must be at least 1"));
        }
        let min_budget = if e.kind == ExperimentKind::DualitySweep { 10 } else { 1 };
        if e.budget < min_budget {
            out.push(Diagnostic::at(format!("{path}.budget"), format!("budget must be at least {min_budget}")));
        }
        if e.samples == Some(0) {
            out.push(Diagnostic::at(format!("{path}.samples"), "samples must be at least 1"));
        }
        if let Some(level) = e.level {
            if !level.is_finite() {
                out.push(Diagnostic::at(format!("{path}.level"), "level must be finite"));
            }
        }
        let t = &e.tolerances;
        for (field, v) in [("solver", t.solver), ("gap", t.gap), ("weak", t.weak)] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(Diagnostic::at(
                    format!("{path}.tolerances.{field}"),
                    format!("tolerance must be positive, got {v}"),
                ));
            }
        }
        if !(t.min_pass_fraction > 0.0 && t.min_pass_fraction <= 1.0) {
            out.push(Diagnostic::at(
                format!("{path}.tolerances.min_pass_fraction"),
                format!("must lie in (0, 1], got {}", t.min_pass_fraction),
            ));
        }
        if let Some(idx) = &e.measures {
            if idx.is_empty() && e.kind.uses_measures() {
                out.push(Diagnostic::at(format!("{path}.measures"), "measure selection is empty"));
            }
            for &j in idx {
                if j >= config.measures.len() {
                    out.push(Diagnostic::at(
                        format!("{path}.measures"),
                        format!("measure index {j} out of range ({} measures)", config.measures.len()),
                    ));
                }
            }
        }
    }
    out
}
