//! Quasiconvex risk measures: monotone in the cone order and quasiconvex.
//!
//! Positions are losses, so a larger position (in `≤_K`) carries a larger
//! risk. Every measure here depends on a position only through its
//! scalarization `y_i = ⟨w, f_i⟩` with `w` in the interior of `K₀`, which is
//! what makes the measures monotone.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling;
use crate::space::{dot, ConeSpace, MeasureSpace, Position, Space, StateField};

/// Slack absorbing floating-point noise in the axiom checks.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Strictly increasing continuous map used by [`RiskMeasure::MonotoneTransform`].
#[derive(Debug, Clone, PartialEq)]
pub enum Transform {
    Arctan,
    Cube,
    /// Linear interpolation through strictly increasing knots, extended
    /// linearly beyond the first and last knot.
    Piecewise(Vec<(f64, f64)>),
}

/// Preimage of a level under a transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelPreimage {
    /// Below the range: no value maps at or under the level.
    Empty,
    /// At or above the range: every value maps under the level.
    Whole,
    Finite(f64),
}

impl Transform {
    pub fn piecewise(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Domain("piecewise transform needs at least two knots".into()));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Domain("piecewise knots must be finite".into()));
        }
        if knots.windows(2).any(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1)) {
            return Err(Error::Domain("piecewise transform must be strictly increasing".into()));
        }
        Ok(Transform::Piecewise(knots))
    }

    pub fn apply(&self, x: f64) -> f64 {
        match self {
            Transform::Arctan => x.atan(),
            Transform::Cube => x * x * x,
            Transform::Piecewise(k) => interpolate(k, x, false),
        }
    }

    /// Largest `x` with `apply(x) ≤ level`.
    pub fn preimage(&self, level: f64) -> LevelPreimage {
        match self {
            Transform::Arctan => {
                if level <= -FRAC_PI_2 {
                    LevelPreimage::Empty
                } else if level >= FRAC_PI_2 {
                    LevelPreimage::Whole
                } else {
                    LevelPreimage::Finite(level.tan())
                }
            }
            Transform::Cube => LevelPreimage::Finite(level.cbrt()),
            Transform::Piecewise(k) => LevelPreimage::Finite(interpolate(k, level, true)),
        }
    }

    fn label(&self) -> String {
        match self {
            Transform::Arctan => "arctan".into(),
            Transform::Cube => "cube".into(),
            Transform::Piecewise(k) => format!("piecewise[{}]", k.len()),
        }
    }
}

fn interpolate(knots: &[(f64, f64)], x: f64, inverse: bool) -> f64 {
    let pick = |k: &(f64, f64)| if inverse { (k.1, k.0) } else { *k };
    let seg = match knots.iter().position(|k| pick(k).0 > x) {
        Some(0) => 0,
        Some(j) => j - 1,
        None => knots.len() - 2,
    };
    let (x0, y0) = pick(&knots[seg]);
    let (x1, y1) = pick(&knots[seg + 1]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Which catalogue entry (or test fixture) a measure is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureKind {
    LinearExpected,
    WorstCase,
    Entropic,
    CertaintyEquivalent,
    MonotoneTransform,
    Fixture,
}

/// Deliberately defective or edge-case maps used to exercise the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// `−max_i ⟨w, f_i⟩`: decreasing in the cone order.
    NegatedWorstCase,
    /// `min_i ⟨w, f_i⟩`: monotone but not quasiconvex.
    MinState,
    /// `max(0, max_i ⟨w, f_i⟩)`: acceptance sets below zero are empty.
    FlooredWorstCase,
}

impl Fixture {
    pub fn name(&self) -> &'static str {
        match self {
            Fixture::NegatedWorstCase => "negated_worst_case",
            Fixture::MinState => "min_state",
            Fixture::FlooredWorstCase => "floored_worst_case",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "negated_worst_case" => Some(Fixture::NegatedWorstCase),
            "min_state" => Some(Fixture::MinState),
            "floored_worst_case" => Some(Fixture::FlooredWorstCase),
            _ => None,
        }
    }
}

/// A risk measure `ϱ : L^{p(·)} → [−∞, +∞]`.
#[derive(Debug, Clone, PartialEq)]
pub enum RiskMeasure {
    /// `Σ μ_i ⟨w, f_i⟩ / Σ μ_i`.
    LinearExpected {
        w: Vec<f64>,
    },
    /// `max_i ⟨w, f_i⟩`.
    WorstCase {
        w: Vec<f64>,
    },
    /// `β⁻¹ log Σ π_i exp(β ⟨w, f_i⟩)`.
    Entropic {
        w: Vec<f64>,
        beta: f64,
    },
    /// `u⁻¹(Σ π_i u(⟨w, f_i⟩))` with the convex increasing utility
    /// `u(x) = x + max(x, 0)^q`.
    CertaintyEquivalent {
        w: Vec<f64>,
        q: f64,
    },
    /// `φ ∘ base` for a strictly increasing continuous `φ`.
    MonotoneTransform {
        phi: Transform,
        base: Box<RiskMeasure>,
    },
    Fixture {
        fixture: Fixture,
        w: Vec<f64>,
    },
}

impl RiskMeasure {
    pub fn linear_expected(w: Vec<f64>) -> Self {
        RiskMeasure::LinearExpected { w }
    }

    pub fn worst_case(w: Vec<f64>) -> Self {
        RiskMeasure::WorstCase { w }
    }

    pub fn entropic(w: Vec<f64>, beta: f64) -> Self {
        RiskMeasure::Entropic { w, beta }
    }

    pub fn certainty_equivalent(w: Vec<f64>, q: f64) -> Self {
        RiskMeasure::CertaintyEquivalent { w, q }
    }

    pub fn transformed(phi: Transform, base: RiskMeasure) -> Self {
        RiskMeasure::MonotoneTransform { phi, base: Box::new(base) }
    }

    pub fn fixture(fixture: Fixture, w: Vec<f64>) -> Self {
        RiskMeasure::Fixture { fixture, w }
    }

    pub fn kind(&self) -> MeasureKind {
        match self {
            RiskMeasure::LinearExpected { .. } => MeasureKind::LinearExpected,
            RiskMeasure::WorstCase { .. } => MeasureKind::WorstCase,
            RiskMeasure::Entropic { .. } => MeasureKind::Entropic,
            RiskMeasure::CertaintyEquivalent { .. } => MeasureKind::CertaintyEquivalent,
            RiskMeasure::MonotoneTransform { .. } => MeasureKind::MonotoneTransform,
            RiskMeasure::Fixture { .. } => MeasureKind::Fixture,
        }
    }

    /// The scalarization direction `w`.
    pub fn scalarization(&self) -> &[f64] {
        match self {
            RiskMeasure::LinearExpected { w }
            | RiskMeasure::WorstCase { w }
            | RiskMeasure::Entropic { w, .. }
            | RiskMeasure::CertaintyEquivalent { w, .. }
            | RiskMeasure::Fixture { w, .. } => w,
            RiskMeasure::MonotoneTransform { base, .. } => base.scalarization(),
        }
    }

    /// Whether the support function of the acceptance sets has an analytic
    /// backend.
    pub fn closed_form_support(&self) -> bool {
        match self {
            RiskMeasure::MonotoneTransform { base, .. } => base.closed_form_support(),
            RiskMeasure::Fixture { fixture, .. } => *fixture == Fixture::FlooredWorstCase,
            _ => true,
        }
    }

    /// Whether this is one of the five catalogue measures (all of which are
    /// monotone, quasiconvex and continuous).
    pub fn is_catalogue(&self) -> bool {
        match self {
            RiskMeasure::Fixture { .. } => false,
            RiskMeasure::MonotoneTransform { base, .. } => base.is_catalogue(),
            _ => true,
        }
    }

    /// Semantic checks against the value space. Returns human-readable
    /// diagnostics; empty means valid.
    pub fn diagnostics(&self, cone: &ConeSpace) -> Vec<String> {
        let mut out = Vec::new();
        let w = self.scalarization();
        if w.len() != cone.dim() {
            out.push(format!("scalarization has length {} but d = {}", w.len(), cone.dim()));
        } else if w.iter().any(|x| !x.is_finite()) || !cone.dual_interior_contains(w) || w.iter().all(|x| *x == 0.0) {
            out.push("scalarization not in interior of dual cone".into());
        }
        match self {
            RiskMeasure::Entropic { beta, .. } if !(*beta > 0.0 && beta.is_finite()) => {
                out.push(format!("entropic temperature must be positive (beta = {beta})"));
            }
            RiskMeasure::CertaintyEquivalent { q, .. } if !(*q >= 1.0 && q.is_finite()) => {
                out.push(format!("utility exponent must be at least 1 (q = {q})"));
            }
            RiskMeasure::MonotoneTransform { phi, base } => {
                if let Transform::Piecewise(k) = phi {
                    if let Err(e) = Transform::piecewise(k.clone()) {
                        out.push(e.to_string());
                    }
                }
                for m in base.diagnostics(cone) {
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
            }
            _ => {}
        }
        out
    }

    pub fn validate(&self, cone: &ConeSpace) -> Result<()> {
        let diags = self.diagnostics(cone);
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(diags.join("; ")))
        }
    }

    /// Statewise scalarization `y_i = ⟨w, f_i⟩`.
    pub fn scalarize(&self, f: &impl StateField) -> Vec<f64> {
        let w = self.scalarization();
        (0..f.n()).map(|i| dot(w, f.state(i))).collect()
    }

    /// `ϱ(f)`. Never NaN.
    pub fn evaluate(&self, f: &Position, sp: &MeasureSpace) -> Result<f64> {
        if f.n() != sp.n() || f.d() != self.scalarization().len() {
            return Err(Error::Dimension {
                expected: format!("{}x{}", sp.n(), self.scalarization().len()),
                found: format!("{}x{}", f.n(), f.d()),
            });
        }
        let y = self.scalarize(f);
        Ok(self.evaluate_scalarized(&y, &sp.probabilities()))
    }

    /// `ϱ` as a function of the scalarization `y` and normalized weights `π`.
    pub fn evaluate_scalarized(&self, y: &[f64], pi: &[f64]) -> f64 {
        let v = match self {
            RiskMeasure::LinearExpected { .. } => y.iter().zip(pi).map(|(a, b)| a * b).sum(),
            RiskMeasure::WorstCase { .. } => max_of(y),
            RiskMeasure::Entropic { beta, .. } => {
                let terms: Vec<f64> = y.iter().zip(pi).map(|(yi, p)| p.ln() + beta * yi).collect();
                log_sum_exp(&terms) / beta
            }
            RiskMeasure::CertaintyEquivalent { q, .. } => {
                let mean: f64 = y.iter().zip(pi).map(|(yi, p)| p * utility(*yi, *q)).sum();
                utility_inverse(mean, *q)
            }
            RiskMeasure::MonotoneTransform { phi, base } => phi.apply(base.evaluate_scalarized(y, pi)),
            RiskMeasure::Fixture { fixture, .. } => match fixture {
                Fixture::NegatedWorstCase => -max_of(y),
                Fixture::MinState => y.iter().copied().fold(f64::INFINITY, f64::min),
                Fixture::FlooredWorstCase => max_of(y).max(0.0),
            },
        };
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    /// Infimum of `ϱ` over the whole space.
    pub fn infimum(&self) -> f64 {
        match self {
            RiskMeasure::MonotoneTransform { phi, base } => phi.apply(base.infimum()),
            RiskMeasure::Fixture { fixture: Fixture::FlooredWorstCase, .. } => 0.0,
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn from_descriptor(desc: &MeasureDescriptor) -> Result<Self> {
        let need_w =
            || desc.w.clone().ok_or_else(|| Error::Descriptor(format!("measure {} requires \"w\"", desc.kind)));
        let rm = match desc.kind.as_str() {
            "LinearExpected" => RiskMeasure::LinearExpected { w: need_w()? },
            "WorstCase" => RiskMeasure::WorstCase { w: need_w()? },
            "Entropic" => RiskMeasure::Entropic {
                w: need_w()?,
                beta: desc.beta.ok_or_else(|| Error::Descriptor("Entropic requires \"beta\"".into()))?,
            },
            "CertaintyEquivalent" => RiskMeasure::CertaintyEquivalent {
                w: need_w()?,
                q: desc.q.ok_or_else(|| Error::Descriptor("CertaintyEquivalent requires \"q\"".into()))?,
            },
            "MonotoneTransform" => {
                let phi = match &desc.phi {
                    Some(TransformDescriptor::Named(s)) if s == "arctan" => Transform::Arctan,
                    Some(TransformDescriptor::Named(s)) if s == "cube" => Transform::Cube,
                    Some(TransformDescriptor::Named(s)) => {
                        return Err(Error::Descriptor(format!("unknown transform \"{s}\"")))
                    }
                    Some(TransformDescriptor::Piecewise { piecewise }) => {
                        Transform::piecewise(piecewise.iter().map(|k| (k[0], k[1])).collect())?
                    }
                    None => return Err(Error::Descriptor("MonotoneTransform requires \"phi\"".into())),
                };
                let base = desc
                    .base
                    .as_ref()
                    .ok_or_else(|| Error::Descriptor("MonotoneTransform requires \"base\"".into()))?;
                RiskMeasure::MonotoneTransform { phi, base: Box::new(Self::from_descriptor(base)?) }
            }
            "Fixture" => {
                let name =
                    desc.fixture.as_deref().ok_or_else(|| Error::Descriptor("Fixture requires \"fixture\"".into()))?;
                let fixture =
                    Fixture::parse(name).ok_or_else(|| Error::Descriptor(format!("unknown fixture \"{name}\"")))?;
                RiskMeasure::Fixture { fixture, w: need_w()? }
            }
            other => return Err(Error::Descriptor(format!("unknown measure kind \"{other}\""))),
        };
        Ok(rm)
    }

    pub fn to_descriptor(&self) -> MeasureDescriptor {
        let mut desc = MeasureDescriptor {
            kind: format!("{:?}", self.kind()),
            w: None,
            beta: None,
            q: None,
            phi: None,
            base: None,
            fixture: None,
        };
        match self {
            RiskMeasure::LinearExpected { w } | RiskMeasure::WorstCase { w } => desc.w = Some(w.clone()),
            RiskMeasure::Entropic { w, beta } => {
                desc.w = Some(w.clone());
                desc.beta = Some(*beta);
            }
            RiskMeasure::CertaintyEquivalent { w, q } => {
                desc.w = Some(w.clone());
                desc.q = Some(*q);
            }
            RiskMeasure::MonotoneTransform { phi, base } => {
                desc.phi = Some(match phi {
                    Transform::Arctan => TransformDescriptor::Named("arctan".into()),
                    Transform::Cube => TransformDescriptor::Named("cube".into()),
                    Transform::Piecewise(k) => {
                        TransformDescriptor::Piecewise { piecewise: k.iter().map(|(x, y)| [*x, *y]).collect() }
                    }
                });
                desc.base = Some(Box::new(base.to_descriptor()));
            }
            RiskMeasure::Fixture { fixture, w } => {
                desc.w = Some(w.clone());
                desc.fixture = Some(fixture.name().into());
            }
        }
        desc
    }
}

impl fmt::Display for RiskMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RiskMeasure::LinearExpected { .. } => write!(f, "LinearExpected"),
            RiskMeasure::WorstCase { .. } => write!(f, "WorstCase"),
            RiskMeasure::Entropic { beta, .. } => write!(f, "Entropic(beta={beta})"),
            RiskMeasure::CertaintyEquivalent { q, .. } => write!(f, "CertaintyEquivalent(q={q})"),
            RiskMeasure::MonotoneTransform { phi, base } => write!(f, "{}({base})", phi.label()),
            RiskMeasure::Fixture { fixture, .. } => write!(f, "Fixture({})", fixture.name()),
        }
    }
}

fn max_of(y: &[f64]) -> f64 {
    y.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = max_of(terms);
    if !m.is_finite() {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Convex, strictly increasing utility `u(x) = x + max(x, 0)^q`.
pub fn utility(x: f64, q: f64) -> f64 {
    if x > 0.0 {
        x + x.powf(q)
    } else {
        x
    }
}

/// Derivative of [`utility`]; the right derivative at zero.
pub(crate) fn utility_derivative(x: f64, q: f64) -> f64 {
    if x > 0.0 {
        1.0 + q * x.powf(q - 1.0)
    } else if x == 0.0 && q == 1.0 {
        2.0
    } else {
        1.0
    }
}

pub fn utility_inverse(c: f64, q: f64) -> f64 {
    if c <= 0.0 || !c.is_finite() {
        return c;
    }
    // x + x^q is convex increasing on [0, ∞): Newton from x = c decreases
    // monotonically onto the root.
    let mut x = c;
    for _ in 0..200 {
        let g = x + x.powf(q) - c;
        let next = x - g / (1.0 + q * x.powf(q - 1.0));
        if !(next < x) || next < 0.0 {
            break;
        }
        x = next;
    }
    x.max(0.0)
}

/// Outcome of a sampled axiom check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub trials: usize,
    pub violations: usize,
    pub worst_violation: f64,
    pub witnesses: Vec<Witness>,
}

/// A violating input, kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: Vec<Position>,
    pub lambda: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

const MAX_WITNESSES: usize = 8;

impl AxiomReport {
    pub fn new() -> Self {
        Self { trials: 0, violations: 0, worst_violation: 0.0, witnesses: Vec::new() }
    }

    /// Records one trial of `lhs ≤ rhs + slack`.
    pub fn record(&mut self, lhs: f64, rhs: f64, slack: f64, witness: impl FnOnce() -> Witness) {
        self.trials += 1;
        let excess = excess(lhs, rhs);
        if excess > slack {
            self.violations += 1;
            self.worst_violation = self.worst_violation.max(excess);
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    /// Records a boolean trial; `excess` is reported when it fails.
    pub fn record_pass(&mut self, pass: bool, excess: f64, witness: impl FnOnce() -> Witness) {
        self.trials += 1;
        if !pass {
            self.violations += 1;
            self.worst_violation = self.worst_violation.max(excess.max(0.0));
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    /// Order-independent merge.
    pub fn merge(mut self, other: AxiomReport) -> Self {
        self.trials += other.trials;
        self.violations += other.violations;
        self.worst_violation = self.worst_violation.max(other.worst_violation);
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl Default for AxiomReport {
    fn default() -> Self {
        Self::new()
    }
}

/// Amount by which `lhs` exceeds `rhs` in the extended reals (0 if it doesn't).
pub(crate) fn excess(lhs: f64, rhs: f64) -> f64 {
    if lhs <= rhs {
        0.0
    } else if lhs == f64::INFINITY || rhs == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        lhs - rhs
    }
}

/// Scale of sampled positions in the axiom checks.
const SAMPLE_SCALE: f64 = 5.0;

/// Sampled check of monotonicity: `f₁ ≤_K f₂ ⇒ ϱ(f₁) ≤ ϱ(f₂)`.
///
/// `f₂` is `f₁` plus a statewise random element of `K`.
pub fn check_monotonicity(rm: &RiskMeasure, space: &Space, trials: usize, seed: u64) -> AxiomReport {
    let mut rng = sampling::rng(seed);
    let mut report = AxiomReport::new();
    for _ in 0..trials {
        let f1 = sampling::position(&mut rng, space.n(), space.d(), SAMPLE_SCALE);
        let k = sampling::cone_position(&mut rng, &space.cone, space.n(), 2.0);
        let f2 = f1.add(&k).expect("same shape");
        let r1 = rm.evaluate(&f1, &space.measure).unwrap_or(f64::NAN);
        let r2 = rm.evaluate(&f2, &space.measure).unwrap_or(f64::NAN);
        report.record(r1, r2, VIOLATION_TOL, || Witness {
            inputs: vec![f1.clone(), f2.clone()],
            lambda: None,
            lhs: r1,
            rhs: r2,
        });
    }
    report
}

/// Sampled check of quasiconvexity:
/// `ϱ(λf₁ + (1−λ)f₂) ≤ max(ϱ(f₁), ϱ(f₂))`.
pub fn check_quasiconvexity(rm: &RiskMeasure, space: &Space, trials: usize, seed: u64) -> AxiomReport {
    use rand::Rng;
    let mut rng = sampling::rng(seed);
    let mut report = AxiomReport::new();
    for _ in 0..trials {
        let f1 = sampling::position(&mut rng, space.n(), space.d(), SAMPLE_SCALE);
        let f2 = sampling::position(&mut rng, space.n(), space.d(), SAMPLE_SCALE);
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        let mix = f1.combine(lambda, &f2, 1.0 - lambda).expect("same shape");
        let lhs = rm.evaluate(&mix, &space.measure).unwrap_or(f64::NAN);
        let rhs = rm
            .evaluate(&f1, &space.measure)
            .unwrap_or(f64::NAN)
            .max(rm.evaluate(&f2, &space.measure).unwrap_or(f64::NAN));
        report.record(lhs, rhs, VIOLATION_TOL, || Witness {
            inputs: vec![f1.clone(), f2.clone()],
            lambda: Some(lambda),
            lhs,
            rhs,
        });
    }
    report
}

/// Sampled lower-semicontinuity surrogate: along `f_k = f + 2^{-k} u` with
/// a random unit `u`, `liminf ϱ(f_k) ≥ ϱ(f) − 1e-6`, the liminf read off
/// `k = 30..40`.
pub fn check_continuity(rm: &RiskMeasure, space: &Space, trials: usize, seed: u64) -> AxiomReport {
    let mut rng = sampling::rng(seed);
    let mut report = AxiomReport::new();
    for _ in 0..trials {
        let f = sampling::position(&mut rng, space.n(), space.d(), SAMPLE_SCALE);
        let u = sampling::direction(&mut rng, space.n(), space.d());
        let r = rm.evaluate(&f, &space.measure).unwrap_or(f64::NAN);
        let liminf = (30..=40)
            .map(|k| {
                let fk = f.combine(1.0, &u, 0.5f64.powi(k)).expect("same shape");
                rm.evaluate(&fk, &space.measure).unwrap_or(f64::NAN)
            })
            .fold(f64::INFINITY, f64::min);
        report.record(r, liminf, 1e-6, || Witness {
            inputs: vec![f.clone(), u.clone()],
            lambda: None,
            lhs: r,
            rhs: liminf,
        });
    }
    report
}

/// JSON form of a [`RiskMeasure`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDescriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<TransformDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<MeasureDescriptor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TransformDescriptor {
    Named(String),
    Piecewise { piecewise: Vec<[f64; 2]> },
}
