//! Projection onto acceptance sets and separating functionals for rejected positions.

use serde::{Deserialize, Serialize};

use crate::acceptance::closed_form::reduced_projection;
use crate::acceptance::numeric::{descent_direction, find_member, restore_feasibility, FlatMeasure};
use crate::acceptance::{support_function, AcceptanceSet, SupportMethod, SupportOptions, SupportStatus};
use crate::error::{Error, Result};
use crate::optim::{nelder_mead_restarted, NelderMeadOptions};
use crate::space::{dot, norm, pairing, DualDensity, Position, StateField};

/// Admissible functional strictly separating a position from an acceptance set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub h: DualDensity,
    /// `⟨g, f⟩ − σ_ν(g)`.
    pub margin: f64,
    pub projection: Position,
    /// `Σ μ_i ⟨h_i, k⟩ ≥ −tol` for every generator `k` of `K`.
    pub admissible: bool,
    /// Every `h_i` lies in `K₀` up to `tol·‖h‖`.
    pub statewise_admissible: bool,
    pub diagnostics: Vec<String>,
}

impl SeparationCertificate {
    pub fn is_valid(&self) -> bool {
        self.margin > 0.0 && self.admissible
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectionMethod {
    /// Exact projection of the scalarized problem; requires a closed-form measure.
    Analytic,
    /// Augmented-Lagrangian Nelder–Mead on the full position.
    Numeric,
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub point: Position,
    /// `Σ μ_i ‖X_i − f_i‖²`.
    pub distance_sq: f64,
    pub evaluations: usize,
    /// The budget ran out before the iteration settled.
    pub loose: bool,
}

/// Weighted Euclidean projection of `f` onto `A_ν`.
pub fn project_onto_acceptance(a: &AcceptanceSet<'_>, f: &Position, tol: f64, budget: usize) -> Result<Position> {
    Ok(project_with(a, f, tol, budget, ProjectionMethod::Auto)?.point)
}

pub fn project_with(
    a: &AcceptanceSet<'_>,
    f: &Position,
    tol: f64,
    budget: usize,
    method: ProjectionMethod,
) -> Result<Projection> {
    a.space.check_position(f)?;
    if budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let method = match method {
        ProjectionMethod::Auto if a.measure.closed_form_support() => ProjectionMethod::Analytic,
        ProjectionMethod::Auto => ProjectionMethod::Numeric,
        m => m,
    };
    match method {
        ProjectionMethod::Analytic => analytic_projection(a, f),
        ProjectionMethod::Numeric => numeric_projection(a, f, tol, budget),
        ProjectionMethod::Auto => unreachable!(),
    }
}

fn distance_sq(a: &AcceptanceSet<'_>, x: &[f64], f: &[f64]) -> f64 {
    let d = a.space.d();
    x.iter().zip(f).enumerate().map(|(j, (xi, fi))| a.space.measure.weight(j / d) * (xi - fi).powi(2)).sum()
}

fn analytic_projection(a: &AcceptanceSet<'_>, f: &Position) -> Result<Projection> {
    let w = a.measure.scalarization();
    let ww = dot(w, w);
    let yf = a.measure.scalarize(f);
    let y = reduced_projection(a.measure, &yf, a.space.measure.weights(), a.level)
        .ok_or_else(|| Error::Capability(format!("{} has no analytic projection", a.measure)))?
        .ok_or(Error::EmptySet(a.level))?;
    let mut x = f.clone();
    for i in 0..f.n() {
        let shift = (y[i] - yf[i]) / ww;
        for (xj, wj) in x.state_mut(i).iter_mut().zip(w) {
            *xj += shift * wj;
        }
    }
    // the map back to positions can round a few ulps past the boundary
    if !a.contains(&x)? {
        let flat = FlatMeasure::new(a.measure, a.space);
        let k = descent_direction(a.space);
        let restored = restore_feasibility(&flat, &k, x.values(), a.level).ok_or(Error::EmptySet(a.level))?;
        x = Position::new(f.n(), f.d(), restored).expect("finite");
    }
    let distance_sq = distance_sq(a, x.values(), f.values());
    Ok(Projection { point: x, distance_sq, evaluations: 0, loose: false })
}

fn numeric_projection(a: &AcceptanceSet<'_>, f: &Position, tol: f64, budget: usize) -> Result<Projection> {
    let flat = FlatMeasure::new(a.measure, a.space);
    let (n, d) = (f.n(), f.d());
    let f0 = f.values();
    let mut evals = 1;
    if flat.eval(f0) <= a.level {
        return Ok(Projection { point: f.clone(), distance_sq: 0.0, evaluations: evals, loose: false });
    }
    let (member, used) = find_member(&flat, a.space, a.level, budget / 10);
    evals += used;
    let member = member.ok_or(Error::EmptySet(a.level))?;
    let k = descent_direction(a.space);
    let start = restore_feasibility(&flat, &k, f0, a.level).unwrap_or(member);

    let scale = 1.0 + f0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut x = start.clone();
    let mut lambda = 0.0;
    let mut c = 10.0;
    let mut last_violation = f64::INFINITY;
    let rounds = 30;
    let per_round = (budget.saturating_sub(evals) / rounds).max(50 * (n * d + 1));
    let mut loose = true;
    for _ in 0..rounds {
        if evals >= budget {
            break;
        }
        let (lam, cc) = (lambda, c);
        let objective = |z: &[f64]| {
            let g = flat.eval(z) - a.level;
            let shifted = (lam + cc * g).max(0.0);
            distance_sq(a, z, f0) + (shifted * shifted - lam * lam) / (2.0 * cc)
        };
        let opts = NelderMeadOptions { max_evals: per_round, initial_step: 0.1 * scale, ..Default::default() };
        let run = nelder_mead_restarted(objective, &x, &opts);
        evals += run.evaluations;
        let step = norm(&run.x.iter().zip(&x).map(|(p, q)| p - q).collect::<Vec<_>>());
        x = run.x;
        let g = flat.eval(&x) - a.level;
        evals += 1;
        // complementarity as well as feasibility: a slack constraint with a
        // positive multiplier is not converged either
        let violation = g.max(-lambda / c).abs();
        lambda = (lambda + c * g).max(0.0);
        if violation > 0.25 * last_violation {
            c *= 4.0;
        }
        last_violation = violation;
        if violation <= 1e-3 * tol && step <= 1e-3 * tol * scale {
            loose = false;
            break;
        }
    }
    let candidate = restore_feasibility(&flat, &k, &x, a.level).unwrap_or_else(|| start.clone());
    let x = if distance_sq(a, &candidate, f0) <= distance_sq(a, &start, f0) { candidate } else { start };
    let distance_sq = distance_sq(a, &x, f0);
    Ok(Projection { point: Position::new(n, d, x).expect("finite iterate"), distance_sq, evaluations: evals, loose })
}

/// Separating functional `h = f − X*` for a position outside `A_ν`.
pub fn separate(a: &AcceptanceSet<'_>, f: &Position, tol: f64, budget: usize) -> Result<SeparationCertificate> {
    let rho = a.measure.evaluate(f, &a.space.measure)?;
    if !(rho > a.level + tol) {
        return Err(Error::Precondition(format!(
            "position is not outside the acceptance set (risk {rho} at level {})",
            a.level
        )));
    }
    let projection = project_with(a, f, tol, budget, ProjectionMethod::Auto)?;
    let mut diagnostics = Vec::new();
    if projection.loose {
        diagnostics.push("projection budget exhausted".to_string());
    }
    let x = projection.point;
    let h = DualDensity::new(f.n(), f.d(), f.values().iter().zip(x.values()).map(|(fi, xi)| fi - xi).collect())?;

    let opts = SupportOptions { budget: budget.max(1), tol, ..Default::default() };
    let sigma = support_function(a, &h, SupportMethod::Auto, &opts)?;
    let margin = match sigma.status {
        SupportStatus::Finite => pairing(&h, f, &a.space.measure)? - sigma.value,
        SupportStatus::PlusInfinity => f64::NEG_INFINITY,
        SupportStatus::MinusInfinity => f64::INFINITY,
    };
    if sigma.loose {
        diagnostics.push("support value is a loose lower bound".to_string());
    }
    if margin <= 0.0 {
        diagnostics.push(format!("nonpositive margin {margin}"));
    }

    let h_scale = h.max_abs();
    let cone = &a.space.cone;
    let admissible = cone.generators().iter().all(|k| {
        let integrated: f64 = (0..h.n()).map(|i| a.space.measure.weight(i) * dot(h.state(i), k)).sum();
        integrated >= -tol * (1.0 + h_scale)
    });
    let statewise_admissible = (0..h.n()).all(|i| cone.dual_contains(h.state(i), tol * (1.0 + h_scale)));
    if !admissible {
        diagnostics.push("functional is negative on the cone".to_string());
    } else if !statewise_admissible {
        diagnostics.push("some state of h lies outside the dual cone".to_string());
    }
    // the zero functional never certifies anything
    let admissible = admissible && !h.is_zero();
    if h.is_zero() {
        diagnostics.push("zero functional".to_string());
    }
    Ok(SeparationCertificate { h, margin, projection: x, admissible, statewise_admissible, diagnostics })
}
