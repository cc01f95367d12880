//! Acceptance sets `A_ν = {f : ϱ(f) ≤ ν}` and their support functions
//! `σ_ν(g) = sup_{X ∈ A_ν} ⟨g, X⟩`.

pub(crate) mod closed_form;
pub(crate) mod numeric;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use numeric::{grid_nodes_per_axis, grid_spacing};

use crate::error::{Error, Result};
use crate::risk::{AxiomReport, RiskMeasure, Witness, VIOLATION_TOL};
use crate::sampling;
use crate::separation;
use crate::space::{dot, norm, pairing, DualDensity, Position, Space, StateField};
use closed_form::{reduced_support, Reduced, ALIGN_TOL};

/// Sublevel set of a risk measure.
#[derive(Debug, Clone, Copy)]
pub struct AcceptanceSet<'a> {
    pub measure: &'a RiskMeasure,
    pub space: &'a Space,
    pub level: f64,
}

impl<'a> AcceptanceSet<'a> {
    pub fn new(measure: &'a RiskMeasure, space: &'a Space, level: f64) -> Result<Self> {
        if !level.is_finite() {
            return Err(Error::Domain(format!("acceptance level must be finite, got {level}")));
        }
        if measure.scalarization().len() != space.d() {
            return Err(Error::Dimension {
                expected: format!("scalarization of length {}", space.d()),
                found: format!("length {}", measure.scalarization().len()),
            });
        }
        Ok(Self { measure, space, level })
    }

    /// The same measure at another level.
    pub fn at(&self, level: f64) -> Result<Self> {
        Self::new(self.measure, self.space, level)
    }

    pub fn contains(&self, f: &Position) -> Result<bool> {
        Ok(self.measure.evaluate(f, &self.space.measure)? <= self.level)
    }
}

/// `f ∈ A_ν`, i.e. `ϱ(f) ≤ ν`.
pub fn is_acceptable(a: &AcceptanceSet<'_>, f: &Position) -> Result<bool> {
    a.contains(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportStatus {
    Finite,
    /// The pairing is unbounded above on the set.
    PlusInfinity,
    /// The set is empty; `sup ∅ = −∞`.
    MinusInfinity,
}

impl fmt::Display for SupportStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SupportStatus::Finite => "Finite",
            SupportStatus::PlusInfinity => "PlusInfinity",
            SupportStatus::MinusInfinity => "MinusInfinity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportValue {
    pub value: f64,
    pub maximizer: Option<Position>,
    pub status: SupportStatus,
    pub evaluations: usize,
    /// The numeric search ran out of budget before converging.
    pub loose: bool,
}

impl SupportValue {
    pub(crate) fn finite(value: f64, maximizer: Position, evaluations: usize, loose: bool) -> Self {
        Self { value, maximizer: Some(maximizer), status: SupportStatus::Finite, evaluations, loose }
    }

    pub(crate) fn empty(evaluations: usize) -> Self {
        Self {
            value: f64::NEG_INFINITY,
            maximizer: None,
            status: SupportStatus::MinusInfinity,
            evaluations,
            loose: false,
        }
    }

    fn unbounded(evaluations: usize) -> Self {
        Self { value: f64::INFINITY, maximizer: None, status: SupportStatus::PlusInfinity, evaluations, loose: false }
    }

    /// CSV row `method,level,value,status,evaluations`.
    pub fn csv_row(&self, method: SupportMethod, level: f64) -> String {
        format!("{method:?},{level},{},{},{}", self.value, self.status, self.evaluations)
    }
}

pub const SUPPORT_TRACE_HEADER: &str = "method,level,value,status,evaluations";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportMethod {
    ClosedForm,
    Numeric,
    Grid,
    /// `ClosedForm` when the measure supports it, `Numeric` otherwise.
    Auto,
}

#[derive(Debug, Clone)]
pub struct SupportOptions {
    /// Evaluation budget for `Numeric`, lattice-point budget for `Grid`.
    pub budget: usize,
    pub tol: f64,
    /// Half-width of the `Grid` box; defaults to `2 (1 + |ν|)`.
    pub grid_radius: Option<f64>,
    pub seed: u64,
}

impl Default for SupportOptions {
    fn default() -> Self {
        Self { budget: 20_000, tol: 1e-9, grid_radius: None, seed: 0 }
    }
}

/// Support function of `A_ν` at the functional with density `h`.
pub fn support_function(
    a: &AcceptanceSet<'_>,
    h: &DualDensity,
    method: SupportMethod,
    opts: &SupportOptions,
) -> Result<SupportValue> {
    a.space.check_position(h)?;
    let method = match method {
        SupportMethod::Auto if a.measure.closed_form_support() => SupportMethod::ClosedForm,
        SupportMethod::Auto => SupportMethod::Numeric,
        m => m,
    };
    if method != SupportMethod::ClosedForm && opts.budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    match method {
        SupportMethod::ClosedForm => closed_form_support(a, h),
        SupportMethod::Numeric => {
            Ok(numeric::numeric_support(a.measure, a.space, a.level, h, opts.budget, opts.tol, opts.seed))
        }
        SupportMethod::Grid => {
            let radius = opts.grid_radius.unwrap_or(2.0 * (1.0 + a.level.abs()));
            Ok(numeric::grid_support(a.measure, a.space, a.level, h, opts.budget, radius))
        }
        SupportMethod::Auto => unreachable!(),
    }
}

fn closed_form_support(a: &AcceptanceSet<'_>, h: &DualDensity) -> Result<SupportValue> {
    if !a.measure.closed_form_support() {
        return Err(Error::Capability(format!("{} has no closed-form support function", a.measure)));
    }
    let w = a.measure.scalarization();
    let ww = dot(w, w);
    let n = a.space.n();
    let scale = (0..n).map(|i| norm(h.state(i))).fold(0.0f64, f64::max);
    let mut t = Vec::with_capacity(n);
    let mut aligned = true;
    for i in 0..n {
        let hi = h.state(i);
        let ti = dot(hi, w) / ww;
        let residual: f64 = hi.iter().zip(w).map(|(x, wj)| (x - ti * wj).powi(2)).sum::<f64>().sqrt();
        aligned &= residual <= ALIGN_TOL * scale;
        t.push(ti);
    }
    let reduced = reduced_support(a.measure, &t, a.space.measure.weights(), a.level).expect("capability checked");
    Ok(match reduced {
        Reduced::Empty => SupportValue::empty(0),
        _ if !aligned => SupportValue::unbounded(0),
        Reduced::Unbounded => SupportValue::unbounded(0),
        Reduced::Finite(value, y) => {
            let maximizer = y.map(|y| {
                let mut x = Position::zeros(n, a.space.d());
                for (i, yi) in y.iter().enumerate() {
                    for (xj, wj) in x.state_mut(i).iter_mut().zip(w) {
                        *xj = yi * wj / ww;
                    }
                }
                x
            });
            SupportValue { value, maximizer, status: SupportStatus::Finite, evaluations: 0, loose: false }
        }
    })
}

/// Support-function value with `ClosedForm` when available, `Numeric` otherwise.
pub fn sigma(a: &AcceptanceSet<'_>, h: &DualDensity) -> Result<f64> {
    Ok(support_function(a, h, SupportMethod::Auto, &SupportOptions::default())?.value)
}

/// Samples a member of `A_ν` by drawing a position and pushing it along
/// `−K` until it is acceptable. `None` if that fails.
pub fn sample_member(a: &AcceptanceSet<'_>, rng: &mut sampling::SeededRng, scale: f64) -> Option<Position> {
    let (n, d) = (a.space.n(), a.space.d());
    let f = sampling::position(rng, n, d, scale);
    let k = Position::constant(n, &a.space.cone.central_ray());
    let mut s = 0.0;
    for _ in 0..80 {
        let g = f.combine(1.0, &k, -s).ok()?;
        if a.contains(&g).ok()? {
            return Some(g);
        }
        s = if s == 0.0 { 0.25 } else { 2.0 * s };
    }
    None
}

/// Samples a position outside `A_ν` (by pushing along `+K`).
pub fn sample_non_member(a: &AcceptanceSet<'_>, rng: &mut sampling::SeededRng, scale: f64) -> Option<Position> {
    let (n, d) = (a.space.n(), a.space.d());
    let f = sampling::position(rng, n, d, scale);
    let k = Position::constant(n, &a.space.cone.central_ray());
    let mut s = 0.0;
    for _ in 0..80 {
        let g = f.combine(1.0, &k, s).ok()?;
        if a.measure.evaluate(&g, &a.space.measure).ok()? > a.level + 1e-6 * (1.0 + a.level.abs()) {
            return Some(g);
        }
        s = if s == 0.0 { 0.25 } else { 2.0 * s };
    }
    None
}

/// Both directions of the support-function characterization of membership.
///
/// For a member, `⟨g, f⟩ ≤ σ_ν(g)` is checked on `n_duals` sampled
/// admissible densities. For a non-member, a separating admissible
/// functional with positive margin must be produced.
pub fn check_lemma1(a: &AcceptanceSet<'_>, f: &Position, n_duals: usize, seed: u64) -> Result<AxiomReport> {
    if n_duals == 0 {
        return Err(Error::Precondition("n_duals must be at least 1".into()));
    }
    let mut report = AxiomReport::new();
    if a.contains(f)? {
        let mut rng = sampling::rng(seed);
        let aligned = a.measure.scalarization().to_vec();
        for j in 0..n_duals {
            // the zero functional is always part of the sample
            let h = if j == 0 {
                DualDensity::zeros(a.space.n(), a.space.d())
            } else {
                sampling::admissible_density(&mut rng, a.space, Some(&aligned))
            };
            let lhs = pairing(&h, f, &a.space.measure)?;
            let rhs = sigma(a, &h)?;
            report.record(lhs, rhs, 1e-8, || Witness {
                inputs: vec![f.clone(), Position::new(h.n(), h.d(), h.values().to_vec()).expect("finite")],
                lambda: None,
                lhs,
                rhs,
            });
        }
    } else {
        let outcome = separation::separate(a, f, 1e-9, 20_000);
        let (pass, margin) = match &outcome {
            Ok(cert) => (cert.margin > 0.0 && cert.admissible, cert.margin),
            Err(_) => (false, f64::NAN),
        };
        report.record_pass(pass, if margin.is_finite() { -margin } else { f64::INFINITY }, || Witness {
            inputs: vec![f.clone()],
            lambda: None,
            lhs: margin,
            rhs: 0.0,
        });
    }
    Ok(report)
}

/// Sampled convexity of `A_ν`.
pub fn check_convexity(a: &AcceptanceSet<'_>, trials: usize, seed: u64) -> AxiomReport {
    use rand::Rng;
    let mut rng = sampling::rng(seed);
    let mut report = AxiomReport::new();
    for _ in 0..trials {
        let (Some(f1), Some(f2)) = (sample_member(a, &mut rng, 5.0), sample_member(a, &mut rng, 5.0)) else {
            report.record_pass(false, f64::INFINITY, || Witness {
                inputs: vec![],
                lambda: None,
                lhs: f64::NAN,
                rhs: a.level,
            });
            continue;
        };
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        let mix = f1.combine(lambda, &f2, 1.0 - lambda).expect("same shape");
        let r = a.measure.evaluate(&mix, &a.space.measure).unwrap_or(f64::INFINITY);
        report.record(r, a.level, VIOLATION_TOL, || Witness {
            inputs: vec![f1.clone(), f2.clone()],
            lambda: Some(lambda),
            lhs: r,
            rhs: a.level,
        });
    }
    report
}

/// Sampled `A_ν = A_ν − K`: members stay members after subtracting cone elements.
pub fn check_monotone_completion(a: &AcceptanceSet<'_>, trials: usize, seed: u64) -> AxiomReport {
    let mut rng = sampling::rng(seed);
    let mut report = AxiomReport::new();
    for _ in 0..trials {
        let Some(f) = sample_member(a, &mut rng, 5.0) else {
            report.record_pass(false, f64::INFINITY, || Witness {
                inputs: vec![],
                lambda: None,
                lhs: f64::NAN,
                rhs: a.level,
            });
            continue;
        };
        let k = sampling::cone_position(&mut rng, &a.space.cone, a.space.n(), 3.0);
        let g = f.sub(&k).expect("same shape");
        let r = a.measure.evaluate(&g, &a.space.measure).unwrap_or(f64::INFINITY);
        report.record(r, a.level, VIOLATION_TOL, || Witness {
            inputs: vec![f.clone(), k.clone()],
            lambda: None,
            lhs: r,
            rhs: a.level,
        });
    }
    report
}

/// Sampled nestedness: members of `A_{ν₁}` belong to `A_{ν₂}` whenever `ν₁ ≤ ν₂`.
pub fn check_nestedness(
    measure: &RiskMeasure,
    space: &Space,
    levels: (f64, f64),
    trials: usize,
    seed: u64,
) -> Result<AxiomReport> {
    let (lo, hi) = if levels.0 <= levels.1 { levels } else { (levels.1, levels.0) };
    let inner = AcceptanceSet::new(measure, space, lo)?;
    let outer = AcceptanceSet::new(measure, space, hi)?;
    let mut rng = sampling::rng(seed);
    let mut report = AxiomReport::new();
    for _ in 0..trials {
        let Some(f) = sample_member(&inner, &mut rng, 5.0) else {
            report.record_pass(false, f64::INFINITY, || Witness {
                inputs: vec![],
                lambda: None,
                lhs: f64::NAN,
                rhs: lo,
            });
            continue;
        };
        let inside = outer.contains(&f)?;
        report.record_pass(inside, 0.0, || Witness { inputs: vec![f.clone()], lambda: None, lhs: lo, rhs: hi });
    }
    Ok(report)
}
