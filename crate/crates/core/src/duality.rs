//! The risk function `R(f, g) = inf{ν : ⟨g, f⟩ ≤ σ_ν(g)}` and the dual
//! representation `ϱ(f) = sup_g R(f, g)` over admissible functionals.

use std::cell::RefCell;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::acceptance::closed_form::{reduced_risk, ALIGN_TOL};
use crate::acceptance::{support_function, AcceptanceSet, SupportMethod, SupportOptions, SupportStatus};
use crate::error::{Error, Result};
use crate::optim::bisect_predicate;
use crate::risk::{AxiomReport, RiskMeasure, Witness};
use crate::sampling;
use crate::space::{dot, dual_luxemburg_norm, in_dual_cone, norm, pairing, DualDensity, Position, Space, StateField};

/// Lower brackets further than this (relative) below `ϱ(f)` mean `R = −∞`.
const FLOOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskFunctionValue {
    pub value: f64,
    /// Infeasible at `lo`, feasible at `hi`.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// How [`evaluate_risk`] computes `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RiskFunctionMethod {
    /// Bisection over `ν` with support values from the given backend.
    Bisection(SupportMethod),
    /// The reduced convex problem `inf{ϱ(X) : ⟨g, X⟩ ≥ ⟨g, f⟩}`, solved
    /// analytically. Needs a closed-form measure.
    Exact,
    /// Bisection with closed-form support values when available, numeric ones otherwise.
    Auto,
}

fn check_admissible(space: &Space, h: &DualDensity) -> Result<()> {
    space.check_position(h)?;
    if !in_dual_cone(h, &space.cone, 1e-12 * (1.0 + h.max_abs()))? {
        return Err(Error::Domain("density is not valued in the dual cone".into()));
    }
    Ok(())
}

/// `R(f, h)` by bisection on `ν ↦ [⟨h, f⟩ ≤ σ_ν(h)]`.
pub fn risk_function(
    rm: &RiskMeasure,
    space: &Space,
    f: &Position,
    h: &DualDensity,
    tol: f64,
    method: SupportMethod,
) -> Result<RiskFunctionValue> {
    risk_function_with(rm, space, f, h, tol, method, &SupportOptions { budget: 5000, ..Default::default() })
}

pub fn risk_function_with(
    rm: &RiskMeasure,
    space: &Space,
    f: &Position,
    h: &DualDensity,
    tol: f64,
    method: SupportMethod,
    opts: &SupportOptions,
) -> Result<RiskFunctionValue> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    space.check_position(f)?;
    check_admissible(space, h)?;
    let p = pairing(h, f, &space.measure)?;
    let hi = rm.evaluate(f, &space.measure)?;
    if !hi.is_finite() {
        return Err(Error::Domain(format!("risk of the position is not finite ({hi})")));
    }

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let feasible = |nu: f64| -> bool {
        if failure.borrow().is_some() {
            return false;
        }
        let result = AcceptanceSet::new(rm, space, nu).and_then(|a| support_function(&a, h, method, opts));
        match result {
            Ok(s) => match s.status {
                SupportStatus::Finite => p <= s.value,
                SupportStatus::PlusInfinity => true,
                SupportStatus::MinusInfinity => false,
            },
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                false
            }
        }
    };

    // hi is feasible since f ∈ A_{ϱ(f)}
    let floor_gap = FLOOR * (1.0 + hi.abs());
    let mut gap = tol.max(1e-3 * (1.0 + hi.abs()));
    let mut iterations = 0;
    let lo = loop {
        iterations += 1;
        let lo = hi - gap;
        if !feasible(lo) {
            break lo;
        }
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        if gap >= floor_gap {
            return Ok(RiskFunctionValue { value: f64::NEG_INFINITY, bracket: (lo, hi), iterations });
        }
        gap = (4.0 * gap).min(floor_gap);
    };
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let (lo, hi, steps) = bisect_predicate(&feasible, lo, hi, tol);
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    debug_assert!(hi - lo <= tol || hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0));
    Ok(RiskFunctionValue { value: hi, bracket: (lo, hi), iterations: iterations + steps })
}

/// Analytic `R(f, h)`; `None` when the measure has no closed form.
pub fn exact_risk_function(rm: &RiskMeasure, space: &Space, f: &Position, h: &DualDensity) -> Result<Option<f64>> {
    space.check_position(f)?;
    check_admissible(space, h)?;
    let w = rm.scalarization();
    let ww = dot(w, w);
    let scale = (0..h.n()).map(|i| norm(h.state(i))).fold(0.0f64, f64::max);
    let mut t = Vec::with_capacity(h.n());
    let mut aligned = true;
    for i in 0..h.n() {
        let hi = h.state(i);
        let ti = dot(hi, w) / ww;
        let residual: f64 = hi.iter().zip(w).map(|(x, wj)| (x - ti * wj).powi(2)).sum::<f64>().sqrt();
        aligned &= residual <= ALIGN_TOL * scale;
        t.push(ti);
    }
    let p = pairing(h, f, &space.measure)?;
    Ok(reduced_risk(rm, &t, aligned, space.measure.weights(), p))
}

/// `R(f, h)` by the requested method.
pub fn evaluate_risk(
    rm: &RiskMeasure,
    space: &Space,
    f: &Position,
    h: &DualDensity,
    tol: f64,
    method: RiskFunctionMethod,
) -> Result<f64> {
    match method {
        RiskFunctionMethod::Bisection(m) => Ok(risk_function(rm, space, f, h, tol, m)?.value),
        RiskFunctionMethod::Exact => exact_risk_function(rm, space, f, h)?
            .ok_or_else(|| Error::Capability(format!("{rm} has no closed-form risk function"))),
        RiskFunctionMethod::Auto => Ok(risk_function(rm, space, f, h, tol, SupportMethod::Auto)?.value),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub start: usize,
    pub iteration: usize,
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualRepresentationResult {
    pub primal: f64,
    pub dual: f64,
    /// `primal − dual`.
    pub gap: f64,
    /// Normalized to unit dual Luxemburg norm.
    pub best_dual: DualDensity,
    pub starts: usize,
    pub evaluations: usize,
    pub trace: Vec<TracePoint>,
}

/// Coefficients over `[w, dual generators…]` per state, all nonnegative.
struct Basis {
    vectors: Vec<Vec<f64>>,
    n: usize,
    d: usize,
}

impl Basis {
    fn new(rm: &RiskMeasure, space: &Space) -> Self {
        let mut vectors = vec![rm.scalarization().to_vec()];
        vectors.extend(space.cone.dual_generators().iter().cloned());
        Self { vectors, n: space.n(), d: space.d() }
    }

    fn len(&self) -> usize {
        self.n * self.vectors.len()
    }

    fn density(&self, c: &[f64]) -> DualDensity {
        let m = self.vectors.len();
        let mut h = DualDensity::zeros(self.n, self.d);
        for i in 0..self.n {
            let state = h.state_mut(i);
            for (b, v) in self.vectors.iter().enumerate() {
                let cb = c[i * m + b];
                if cb != 0.0 {
                    for (s, vj) in state.iter_mut().zip(v) {
                        *s += cb * vj;
                    }
                }
            }
        }
        h
    }

    /// Coefficients putting weight `t_i` on `w` in state `i`.
    fn aligned(&self, t: &[f64]) -> Vec<f64> {
        let m = self.vectors.len();
        let mut c = vec![0.0; self.len()];
        for (i, ti) in t.iter().enumerate() {
            c[i * m] = *ti;
        }
        c
    }
}

/// `sup_h R(f, h)` over admissible densities by multi-start search with
/// coordinate-perturbation refinement. `budget` counts `R` evaluations.
pub fn dual_representation(
    rm: &RiskMeasure,
    space: &Space,
    f: &Position,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<DualRepresentationResult> {
    dual_representation_with(rm, space, f, budget, seed, tol, RiskFunctionMethod::Auto)
}

/// [`dual_representation`] with an explicit way of computing `R`.
pub fn dual_representation_with(
    rm: &RiskMeasure,
    space: &Space,
    f: &Position,
    budget: usize,
    seed: u64,
    tol: f64,
    method: RiskFunctionMethod,
) -> Result<DualRepresentationResult> {
    if budget < 10 {
        return Err(Error::Precondition(format!("budget must be at least 10, got {budget}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    space.check_position(f)?;
    let primal = rm.evaluate(f, &space.measure)?;
    let basis = Basis::new(rm, space);
    let n = space.n();
    let mut evaluations = 0usize;
    let mut objective = |c: &[f64], evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        if c.iter().all(|x| *x == 0.0) {
            // the zero functional is excluded from the search
            return Ok(f64::NEG_INFINITY);
        }
        evaluate_risk(rm, space, f, &basis.density(c), tol, method)
    };

    // candidate starts: uniform on w, each single state on w, then random
    let mut rng = sampling::rng(seed);
    let mut candidates: Vec<Vec<f64>> = vec![basis.aligned(&vec![1.0; n])];
    for i in 0..n {
        let mut t = vec![0.0; n];
        t[i] = 1.0;
        candidates.push(basis.aligned(&t));
    }
    let random_starts = (budget / 20).clamp(2, 16);
    for j in 0..random_starts {
        let c = if j % 2 == 0 {
            basis.aligned(&(0..n).map(|_| rng.gen_range(0.0..1.0)).collect::<Vec<_>>())
        } else {
            (0..basis.len()).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..1.0) }).collect()
        };
        candidates.push(c);
    }
    let screen = candidates.len().min(budget / 2);
    let mut scored = Vec::with_capacity(screen);
    for c in candidates.into_iter().take(screen) {
        let v = objective(&c, &mut evaluations)?;
        scored.push((v, c));
    }
    // stable sort keeps candidate order among ties
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));

    let refine = scored.len().min(3);
    let per_start = budget.saturating_sub(evaluations) / refine.max(1);
    let mut trace = Vec::new();
    let mut best: (f64, Vec<f64>) = scored[0].clone();
    for (start, (v0, c0)) in scored.iter().take(refine).enumerate() {
        let (v, c) = refine_start(&mut objective, &mut evaluations, c0.clone(), *v0, per_start, start, &mut trace)?;
        if v > best.0 {
            best = (v, c);
        }
    }

    let h = basis.density(&best.1);
    let best_dual = match dual_luxemburg_norm(&h, &space.exponent, &space.measure, 1e-12) {
        Ok(norm) if norm > 0.0 => h.scaled(1.0 / norm),
        _ => h,
    };
    let dual = if best.0 == f64::NEG_INFINITY {
        best.0
    } else {
        evaluations += 1;
        evaluate_risk(rm, space, f, &best_dual, tol, method)?
    };
    Ok(DualRepresentationResult { primal, dual, gap: primal - dual, best_dual, starts: refine, evaluations, trace })
}

fn refine_start<F>(
    objective: &mut F,
    evaluations: &mut usize,
    mut c: Vec<f64>,
    mut value: f64,
    budget: usize,
    start: usize,
    trace: &mut Vec<TracePoint>,
) -> Result<(f64, Vec<f64>)>
where
    F: FnMut(&[f64], &mut usize) -> Result<f64>,
{
    let used_at_start = *evaluations;
    let mut step = 0.5;
    let mut iteration = 0;
    trace.push(TracePoint { start, iteration, best: value });
    while step > 1e-12 && *evaluations - used_at_start + 2 <= budget {
        let scale = c.iter().fold(0.0f64, |m, x| m.max(*x)).max(f64::MIN_POSITIVE);
        let mut improved = false;
        for j in 0..c.len() {
            for sign in [1.0, -1.0] {
                if *evaluations - used_at_start >= budget {
                    break;
                }
                let mut trial = c.clone();
                trial[j] = (trial[j] + sign * step * scale).max(0.0);
                if trial[j] == c[j] {
                    continue;
                }
                let v = objective(&trial, evaluations)?;
                if v > value {
                    value = v;
                    c = trial;
                    improved = true;
                    break;
                }
            }
        }
        iteration += 1;
        trace.push(TracePoint { start, iteration, best: value });
        if !improved {
            step *= 0.5;
        }
    }
    Ok((value, c))
}

pub const TRACE_HEADER: &str = "start_id,iteration,best_value";

/// Convergence trace as CSV.
pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for t in trace {
        out.push_str(&format!("{},{},{}\n", t.start, t.iteration, t.best));
    }
    out
}

pub const DUALITY_HEADER: &str = "measure_kind,n,d,seed,primal,dual,gap,evaluations,wall_time_ms";

pub fn duality_csv_row(
    rm: &RiskMeasure,
    n: usize,
    d: usize,
    seed: u64,
    r: &DualRepresentationResult,
    wall_ms: f64,
) -> String {
    format!("{:?},{n},{d},{seed},{},{},{},{},{wall_ms:.3}", rm.kind(), r.primal, r.dual, r.gap, r.evaluations)
}

/// Sampled B1 (monotonicity), B2 (quasiconvexity) and a liminf surrogate
/// for lower semicontinuity in the first argument.
pub fn check_risk_function_class(
    rm: &RiskMeasure,
    space: &Space,
    trials: usize,
    seed: u64,
    tol: f64,
    method: RiskFunctionMethod,
) -> Result<AxiomReport> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let (n, d) = (space.n(), space.d());
    let w = rm.scalarization().to_vec();
    let mut rng = sampling::rng(seed);
    let mut report = AxiomReport::new();
    let r = |f: &Position, h: &DualDensity| evaluate_risk(rm, space, f, h, tol, method);
    let as_position = |h: &DualDensity| Position::new(n, d, h.values().to_vec()).expect("finite");
    for trial in 0..trials {
        let h = sampling::admissible_density(&mut rng, space, Some(&w));
        let f1 = sampling::position(&mut rng, n, d, 5.0);
        let k = sampling::cone_position(&mut rng, &space.cone, n, 3.0);
        let f2 = f1.add(&k)?;
        let (r1, r2) = (r(&f1, &h)?, r(&f2, &h)?);
        report.record(r1, r2, 2.0 * tol, || Witness {
            inputs: vec![f1.clone(), f2.clone(), as_position(&h)],
            lambda: None,
            lhs: r1,
            rhs: r2,
        });

        let f3 = sampling::position(&mut rng, n, d, 5.0);
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        let mix = f1.combine(lambda, &f3, 1.0 - lambda)?;
        let (rm_, r3) = (r(&mix, &h)?, r(&f3, &h)?);
        let rhs = r1.max(r3);
        report.record(rm_, rhs, 2.0 * tol, || Witness {
            inputs: vec![f1.clone(), f3.clone(), as_position(&h)],
            lambda: Some(lambda),
            lhs: rm_,
            rhs,
        });

        if trial < 20 {
            // f_k = f1 + 2^{-k} u for a random unit direction u; the liminf
            // is read off the tail k = 30..40
            let u = sampling::direction(&mut rng, n, d);
            let tail: Vec<f64> =
                (30..=40).map(|k| r(&f1.combine(1.0, &u, 0.5f64.powi(k))?, &h)).collect::<Result<_>>()?;
            let liminf = tail.iter().copied().fold(f64::INFINITY, f64::min);
            report.record(r1, liminf, 10.0 * tol, || Witness {
                inputs: vec![f1.clone(), u.clone(), as_position(&h)],
                lambda: None,
                lhs: r1,
                rhs: liminf,
            });
        }
    }
    Ok(report)
}

/// Sampled `|R(f, αh) − R(f, h)| ≤ 2·tol`.
pub fn check_scale_invariance(
    rm: &RiskMeasure,
    space: &Space,
    alphas: &[f64],
    trials: usize,
    seed: u64,
    tol: f64,
    method: RiskFunctionMethod,
) -> Result<AxiomReport> {
    let (n, d) = (space.n(), space.d());
    let w = rm.scalarization().to_vec();
    let mut rng = sampling::rng(seed);
    let mut report = AxiomReport::new();
    for _ in 0..trials {
        let h = sampling::admissible_density(&mut rng, space, Some(&w));
        let f = sampling::position(&mut rng, n, d, 5.0);
        let base = evaluate_risk(rm, space, &f, &h, tol, method)?;
        for &alpha in alphas {
            let scaled = evaluate_risk(rm, space, &f, &h.scaled(alpha), tol, method)?;
            let diff = if base == scaled { 0.0 } else { (scaled - base).abs() };
            report.record(diff, 0.0, 2.0 * tol, || Witness {
                inputs: vec![f.clone()],
                lambda: Some(alpha),
                lhs: scaled,
                rhs: base,
            });
        }
    }
    Ok(report)
}

/// Sampled weak duality `R(f, h) ≤ ϱ(f) + 2·tol`.
pub fn check_weak_duality(
    rm: &RiskMeasure,
    space: &Space,
    trials: usize,
    seed: u64,
    tol: f64,
    method: RiskFunctionMethod,
) -> Result<AxiomReport> {
    let (n, d) = (space.n(), space.d());
    let w = rm.scalarization().to_vec();
    let mut rng = sampling::rng(seed);
    let mut report = AxiomReport::new();
    for _ in 0..trials {
        let h = sampling::admissible_density(&mut rng, space, Some(&w));
        let f = sampling::position(&mut rng, n, d, 5.0);
        let r = evaluate_risk(rm, space, &f, &h, tol, method)?;
        let rho = rm.evaluate(&f, &space.measure)?;
        report.record(r, rho, 2.0 * tol, || Witness { inputs: vec![f.clone()], lambda: None, lhs: r, rhs: rho });
    }
    Ok(report)
}

/// `inf{ν : f ∈ A_ν}` by bisection on membership alone.
pub fn sublevel_reconstruction(rm: &RiskMeasure, space: &Space, f: &Position, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    space.check_position(f)?;
    let member = |nu: f64| -> Result<bool> { AcceptanceSet::new(rm, space, nu)?.contains(f) };
    let (mut lo, mut hi) = (-1.0, 1.0);
    while !member(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Ok(f64::INFINITY);
        }
    }
    while member(lo)? {
        hi = lo;
        lo *= 2.0;
        if lo < -1e300 {
            return Ok(f64::NEG_INFINITY);
        }
    }
    let mut failure = None;
    let (_, hi, _) = bisect_predicate(
        |nu| match member(nu) {
            Ok(b) => b,
            Err(e) => {
                failure = Some(e);
                false
            }
        },
        lo,
        hi,
        tol,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(hi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::Transform;

    fn pos(v: &[f64]) -> Position {
        Position::scalar(v).unwrap()
    }

    fn dens(v: &[f64]) -> DualDensity {
        DualDensity::scalar(v).unwrap()
    }

    #[test]
    fn risk_function_examples() {
        let space = Space::uniform(2, 1, 2.0).unwrap();
        let wc = RiskMeasure::worst_case(vec![1.0]);
        let f = pos(&[1.0, 3.0]);
        for method in [SupportMethod::ClosedForm, SupportMethod::Grid] {
            let opts = SupportOptions { budget: 40_401, grid_radius: Some(5.0), ..Default::default() };
            let mean = risk_function_with(&wc, &space, &f, &dens(&[1.0, 1.0]), 1e-9, method, &opts).unwrap();
            let worst = risk_function_with(&wc, &space, &f, &dens(&[0.0, 1.0]), 1e-9, method, &opts).unwrap();
            // the grid is coarse: 201 nodes per axis on [−5, 5]
            let tol = if method == SupportMethod::Grid { 0.06 } else { 1e-9 };
            assert!((mean.value - 2.0).abs() <= tol, "{method:?} {mean:?}");
            assert!((worst.value - 3.0).abs() <= tol, "{method:?} {worst:?}");
            assert!(mean.bracket.1 - mean.bracket.0 <= 1e-9);
        }
        assert_eq!(exact_risk_function(&wc, &space, &f, &dens(&[1.0, 1.0])).unwrap(), Some(2.0));
        assert_eq!(exact_risk_function(&wc, &space, &f, &dens(&[0.0, 1.0])).unwrap(), Some(3.0));
    }

    #[test]
    fn inadmissible_densities_are_rejected() {
        let space = Space::uniform(2, 1, 2.0).unwrap();
        let wc = RiskMeasure::worst_case(vec![1.0]);
        let err = risk_function(&wc, &space, &pos(&[1.0, 3.0]), &dens(&[1.0, -1.0]), 1e-9, SupportMethod::ClosedForm);
        assert!(matches!(err, Err(Error::Domain(_))));
        assert!(
            risk_function(&wc, &space, &pos(&[1.0, 3.0]), &dens(&[1.0, 1.0]), 0.0, SupportMethod::ClosedForm).is_err()
        );
    }

    #[test]
    fn zero_density_gives_minus_infinity() {
        let space = Space::uniform(2, 1, 2.0).unwrap();
        let wc = RiskMeasure::worst_case(vec![1.0]);
        let v =
            risk_function(&wc, &space, &pos(&[1.0, 3.0]), &dens(&[0.0, 0.0]), 1e-9, SupportMethod::ClosedForm).unwrap();
        assert_eq!(v.value, f64::NEG_INFINITY);
        assert_eq!(
            exact_risk_function(&wc, &space, &pos(&[1.0, 3.0]), &dens(&[0.0, 0.0])).unwrap(),
            Some(f64::NEG_INFINITY)
        );
    }

    #[test]
    fn exact_matches_bisection() {
        let space = Space::new(
            crate::space::MeasureSpace::new(vec![0.2, 0.5, 0.3]).unwrap(),
            crate::space::ExponentFunction::new(vec![2.0, 3.0, 1.5]).unwrap(),
            crate::space::ConeSpace::orthant(2),
        )
        .unwrap();
        let w = vec![1.0, 0.5];
        let measures = [
            RiskMeasure::worst_case(w.clone()),
            RiskMeasure::linear_expected(w.clone()),
            RiskMeasure::entropic(w.clone(), 0.7),
            RiskMeasure::certainty_equivalent(w.clone(), 1.0),
            RiskMeasure::certainty_equivalent(w.clone(), 1.5),
            RiskMeasure::certainty_equivalent(w.clone(), 2.0),
            RiskMeasure::transformed(Transform::Arctan, RiskMeasure::entropic(w.clone(), 1.0)),
        ];
        let mut rng = sampling::rng(11);
        for rm in &measures {
            for _ in 0..40 {
                let f = sampling::position(&mut rng, 3, 2, 3.0);
                let h = sampling::admissible_density(&mut rng, &space, Some(&w));
                let exact = exact_risk_function(rm, &space, &f, &h).unwrap().unwrap();
                let bis = risk_function(rm, &space, &f, &h, 1e-10, SupportMethod::ClosedForm).unwrap().value;
                if exact == f64::NEG_INFINITY {
                    assert_eq!(bis, f64::NEG_INFINITY, "{rm}");
                } else {
                    assert!((exact - bis).abs() <= 1e-8 * (1.0 + exact.abs()), "{rm}: exact {exact} bisection {bis}");
                }
            }
        }
    }

    #[test]
    fn dual_representation_examples() {
        let space = Space::new(
            crate::space::MeasureSpace::new(vec![0.3, 0.7]).unwrap(),
            crate::space::ExponentFunction::constant(2, 2.0).unwrap(),
            crate::space::ConeSpace::orthant(1),
        )
        .unwrap();
        let wc = RiskMeasure::worst_case(vec![1.0]);
        let r = dual_representation(&wc, &space, &pos(&[1.0, 3.0]), 200, 1, 1e-9).unwrap();
        assert!((r.dual - 3.0).abs() <= 1e-6 && r.primal == 3.0, "{r:?}");
        assert!(in_dual_cone(&r.best_dual, &space.cone, 0.0).unwrap());
        let norm = dual_luxemburg_norm(&r.best_dual, &space.exponent, &space.measure, 1e-10).unwrap();
        assert!((norm - 1.0).abs() < 1e-9);

        let uniform = Space::uniform(2, 1, 2.0).unwrap();
        let le = RiskMeasure::linear_expected(vec![1.0]);
        let r = dual_representation(&le, &uniform, &pos(&[1.0, 3.0]), 200, 1, 1e-9).unwrap();
        assert!((r.dual - 2.0).abs() <= 1e-9 && (r.primal - 2.0).abs() <= 1e-12);

        let r = dual_representation(&wc, &uniform, &pos(&[1.5, 1.5]), 50, 3, 1e-9).unwrap();
        assert!(r.gap.abs() <= 1e-12);
        assert!(dual_representation(&wc, &uniform, &pos(&[1.5, 1.5]), 9, 3, 1e-9).is_err());
    }

    #[test]
    fn entropic_dual_is_close_within_budget() {
        let space = Space::uniform(4, 1, 2.0).unwrap();
        let rm = RiskMeasure::entropic(vec![1.0], 1.0);
        let f = pos(&[0.3, -1.0, 2.0, 1.1]);
        let r = dual_representation(&rm, &space, &f, 2000, 5, 1e-9).unwrap();
        assert!(r.gap >= -1e-6 && r.gap <= 1e-3, "{r:?}");
        let again = dual_representation(&rm, &space, &f, 2000, 5, 1e-9).unwrap();
        assert_eq!(r, again);
        assert!(trace_csv(&r.trace).starts_with(TRACE_HEADER));
    }

    #[test]
    fn class_checks_pass_for_entropic() {
        let space = Space::uniform(3, 1, 2.0).unwrap();
        let rm = RiskMeasure::entropic(vec![1.0], 1.0);
        let report = check_risk_function_class(&rm, &space, 200, 2, 1e-9, RiskFunctionMethod::Auto).unwrap();
        assert!(report.passed(), "{report:?}");
        let scale =
            check_scale_invariance(&rm, &space, &[2.0, 1e-3, 1e3], 100, 3, 1e-9, RiskFunctionMethod::Auto).unwrap();
        assert!(scale.passed(), "{scale:?}");
        let weak = check_weak_duality(&rm, &space, 200, 4, 1e-9, RiskFunctionMethod::Auto).unwrap();
        assert!(weak.passed(), "{weak:?}");
    }

    #[test]
    fn b2_equality_case() {
        let space = Space::uniform(2, 1, 2.0).unwrap();
        let rm = RiskMeasure::certainty_equivalent(vec![1.0], 2.0);
        let f = pos(&[0.4, -0.2]);
        let h = dens(&[1.0, 2.0]);
        let a =
            evaluate_risk(&rm, &space, &f.combine(0.3, &f, 0.7).unwrap(), &h, 1e-9, RiskFunctionMethod::Exact).unwrap();
        let b = evaluate_risk(&rm, &space, &f, &h, 1e-9, RiskFunctionMethod::Exact).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn sublevel_examples() {
        let space = Space::uniform(2, 1, 2.0).unwrap();
        let f = pos(&[1.0, 3.0]);
        let wc = RiskMeasure::worst_case(vec![1.0]);
        let le = RiskMeasure::linear_expected(vec![1.0]);
        assert!((sublevel_reconstruction(&wc, &space, &f, 1e-10).unwrap() - 3.0).abs() <= 1e-10);
        assert!((sublevel_reconstruction(&le, &space, &f, 1e-10).unwrap() - 2.0).abs() <= 1e-10);
        let at = RiskMeasure::transformed(Transform::Arctan, RiskMeasure::entropic(vec![1.0], 1.0));
        let base = RiskMeasure::entropic(vec![1.0], 1.0);
        let a = sublevel_reconstruction(&at, &space, &f, 1e-10).unwrap();
        let b = sublevel_reconstruction(&base, &space, &f, 1e-10).unwrap();
        assert!((a - b.atan()).abs() <= 2e-10);
    }
}
