//! Analytic support functions and projections.
//!
//! Every measure depends on `X` only through `y_i = ⟨w, X_i⟩`, so a density
//! `h` has a finite support value only if each `h_i = t_i w` with `t_i ≥ 0`;
//! any other component can be pushed to infinity inside the acceptance set.
//! With `a_i = μ_i t_i` the problem becomes `sup Σ a_i y_i` subject to the
//! scalar constraint on `y`, solved below per measure.

use crate::optim::{bisect_predicate, monotone_root};
use crate::risk::{utility, utility_derivative, Fixture, LevelPreimage, RiskMeasure};

/// Relative tolerance when deciding that `h_i` is parallel to `w`, or that
/// the weights of a linear measure are constant across states.
pub(crate) const ALIGN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Reduced {
    Empty,
    Unbounded,
    /// Value and, when the supremum is attained, the maximizing `y`.
    Finite(f64, Option<Vec<f64>>),
}

/// Whether the acceptance set at `level` is empty, whole, or a proper set
/// of some base measure at some base level.
enum Shape<'a> {
    Empty,
    Whole,
    Proper(&'a RiskMeasure, f64),
}

fn resolve(rm: &RiskMeasure, level: f64) -> Shape<'_> {
    match rm {
        RiskMeasure::MonotoneTransform { phi, base } => match phi.preimage(level) {
            LevelPreimage::Empty => Shape::Empty,
            LevelPreimage::Whole => Shape::Whole,
            LevelPreimage::Finite(l) => resolve(base, l),
        },
        RiskMeasure::Fixture { fixture: Fixture::FlooredWorstCase, .. } if level < 0.0 => Shape::Empty,
        _ => Shape::Proper(rm, level),
    }
}

/// Reduced support value `sup{Σ a_i y_i : ϱ(y) ≤ level}`, where `t` are the
/// statewise multiples of `w` and `mu` the weights (so `a_i = μ_i t_i`).
///
/// Returns `None` if the measure has no analytic support function.
pub(crate) fn reduced_support(rm: &RiskMeasure, t: &[f64], mu: &[f64], level: f64) -> Option<Reduced> {
    if !rm.closed_form_support() {
        return None;
    }
    let (base, level) = match resolve(rm, level) {
        Shape::Empty => return Some(Reduced::Empty),
        Shape::Whole => {
            return Some(if t.iter().all(|x| *x == 0.0) { Reduced::Finite(0.0, None) } else { Reduced::Unbounded })
        }
        Shape::Proper(base, level) => (base, level),
    };
    let n = t.len();
    let scale = t.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Some(Reduced::Finite(0.0, Some(vec![level; n])));
    }
    if t.iter().any(|x| *x < -ALIGN_TOL * scale) {
        // y_i → −∞ stays acceptable and increases the pairing
        return Some(Reduced::Unbounded);
    }
    let t: Vec<f64> = t.iter().map(|x| x.max(0.0)).collect();
    let a: Vec<f64> = t.iter().zip(mu).map(|(ti, m)| ti * m).collect();
    let total: f64 = a.iter().sum();
    let mass: f64 = mu.iter().sum();
    let pi: Vec<f64> = mu.iter().map(|m| m / mass).collect();

    let out = match base {
        RiskMeasure::WorstCase { .. } | RiskMeasure::Fixture { .. } => {
            Reduced::Finite(level * total, Some(vec![level; n]))
        }
        RiskMeasure::LinearExpected { .. } => {
            let (lo, hi) = t.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(*x), h.max(*x)));
            if hi - lo > ALIGN_TOL * scale {
                Reduced::Unbounded
            } else {
                Reduced::Finite(level * total, Some(vec![level; n]))
            }
        }
        RiskMeasure::Entropic { beta, .. } => entropic_support(&a, total, &pi, *beta, level),
        RiskMeasure::CertaintyEquivalent { q, .. } => ce_support(&a, &pi, *q, level),
        RiskMeasure::MonotoneTransform { .. } => unreachable!("resolved above"),
    };
    Some(out)
}

/// `sup Σ a_i y_i` s.t. `Σ π_i e^{β y_i} ≤ e^{β ν}` equals `A (ν + KL(q‖π)/β)`
/// with `q = a / A`.
fn entropic_support(a: &[f64], total: f64, pi: &[f64], beta: f64, level: f64) -> Reduced {
    let kl: f64 = a
        .iter()
        .zip(pi)
        .filter(|(ai, _)| **ai > 0.0)
        .map(|(ai, p)| {
            let q = ai / total;
            q * (q / p).ln()
        })
        .sum();
    let value = total * (level + kl / beta);
    let argmax = if a.iter().all(|ai| *ai > 0.0) {
        Some(a.iter().zip(pi).map(|(ai, p)| level + (ai / total / p).ln() / beta).collect())
    } else {
        None
    };
    Reduced::Finite(value, argmax)
}

/// `sup Σ a_i y_i` s.t. `Σ π_i u(y_i) ≤ u(ν)` with `u(x) = x + max(x,0)^q`,
/// solved through the multiplier `λ` of the constraint.
fn ce_support(a: &[f64], pi: &[f64], q: f64, level: f64) -> Reduced {
    let n = a.len();
    let c = utility(level, q);
    if a.iter().any(|ai| *ai <= 0.0) {
        // a zero-weight state can absorb an unbounded negative utility
        return Reduced::Unbounded;
    }
    let s: Vec<f64> = a.iter().zip(pi).map(|(ai, p)| ai / p).collect();
    let s_min = s.iter().copied().fold(f64::INFINITY, f64::min);
    let s_max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tie = |x: f64, target: f64| x <= target * (1.0 + 1e-12);

    if q == 1.0 {
        // piecewise-linear utility: a linear program
        if s_max > 2.0 * s_min * (1.0 + 1e-12) {
            return Reduced::Unbounded;
        }
        let (lambda, active): (f64, Vec<bool>) = if c >= 0.0 {
            (s_max / 2.0, s.iter().map(|x| *x >= s_max * (1.0 - 1e-12)).collect())
        } else {
            (s_min, s.iter().map(|x| tie(*x, s_min)).collect())
        };
        let mass: f64 = pi.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p).sum();
        let slope = if c >= 0.0 { 2.0 } else { 1.0 };
        let y: Vec<f64> = active.iter().map(|a| if *a { c / (slope * mass) } else { 0.0 }).collect();
        return Reduced::Finite(lambda * c, Some(y));
    }

    // stationarity u'(y_i) = s_i / λ on the positive branch
    let y_of = |lambda: f64, i: usize| {
        let r = s[i] / lambda;
        if r <= 1.0 {
            0.0
        } else {
            ((r - 1.0) / q).powf(1.0 / (q - 1.0))
        }
    };
    let g = |lambda: f64| (0..n).map(|i| pi[i] * utility(y_of(lambda, i), q)).sum::<f64>();

    let g_max = g(s_min);
    let y: Vec<f64> = if c >= g_max {
        let mut lo = s_min;
        while g(lo) < c {
            lo *= 0.5;
        }
        let lambda = monotone_root(|l| c - g(l), lo, s_min);
        let mut y: Vec<f64> = (0..n).map(|i| y_of(lambda, i)).collect();
        // land on the constraint exactly by adjusting the largest coordinate
        let slack = c - (0..n).map(|i| pi[i] * utility(y[i], q)).sum::<f64>();
        if slack.abs() > 0.0 {
            let j = (0..n).max_by(|&x, &z| y[x].total_cmp(&y[z])).unwrap_or(0);
            let target = (c - (0..n).filter(|&i| i != j).map(|i| pi[i] * utility(y[i], q)).sum::<f64>()) / pi[j];
            y[j] = crate::risk::utility_inverse(target, q);
        }
        y
    } else {
        let active: Vec<bool> = s.iter().map(|x| tie(*x, s_min)).collect();
        let mut y: Vec<f64> = (0..n).map(|i| if active[i] { 0.0 } else { y_of(s_min, i) }).collect();
        let rest: f64 = (0..n).filter(|&i| !active[i]).map(|i| pi[i] * utility(y[i], q)).sum();
        let mass: f64 = (0..n).filter(|&i| active[i]).map(|i| pi[i]).sum();
        let share = (c - rest) / mass;
        for i in 0..n {
            if active[i] {
                y[i] = share;
            }
        }
        y
    };
    let value = a.iter().zip(&y).map(|(ai, yi)| ai * yi).sum();
    Reduced::Finite(value, Some(y))
}

/// Exact risk function `inf{ν : P ≤ σ_ν}` for a density with multiples `t`
/// of `w` and pairing `P`; `aligned` is false when some `h_i` leaves the
/// span of `w` (then `σ_ν = +∞` on every nonempty `A_ν`).
///
/// Equivalently `inf{ϱ(y) : Σ a_i y_i ≥ P}`, one convex problem instead of
/// a bisection over support values. `None` without an analytic support.
pub(crate) fn reduced_risk(rm: &RiskMeasure, t: &[f64], aligned: bool, mu: &[f64], p: f64) -> Option<f64> {
    if !rm.closed_form_support() {
        return None;
    }
    let scale = t.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !aligned || scale == 0.0 || t.iter().any(|x| *x < -ALIGN_TOL * scale) {
        // feasible exactly when A_ν is nonempty (or P ≤ 0 for the zero density)
        return Some(if scale == 0.0 && p > 0.0 { f64::INFINITY } else { rm.infimum() });
    }
    Some(match rm {
        RiskMeasure::MonotoneTransform { phi, base } => phi.apply(reduced_risk(base, t, aligned, mu, p)?),
        _ => {
            let t: Vec<f64> = t.iter().map(|x| x.max(0.0)).collect();
            let a: Vec<f64> = t.iter().zip(mu).map(|(ti, m)| ti * m).collect();
            let total: f64 = a.iter().sum();
            let mass: f64 = mu.iter().sum();
            let pi: Vec<f64> = mu.iter().map(|m| m / mass).collect();
            match rm {
                RiskMeasure::WorstCase { .. } => p / total,
                RiskMeasure::Fixture { .. } => (p / total).max(0.0),
                RiskMeasure::LinearExpected { .. } => {
                    let (lo, hi) =
                        t.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(*x), h.max(*x)));
                    if hi - lo > ALIGN_TOL * scale {
                        f64::NEG_INFINITY
                    } else {
                        p / total
                    }
                }
                RiskMeasure::Entropic { beta, .. } => {
                    let Reduced::Finite(at_zero, _) = entropic_support(&a, total, &pi, *beta, 0.0) else {
                        unreachable!("entropic support is finite")
                    };
                    // σ_ν = A ν + σ_0
                    (p - at_zero) / total
                }
                RiskMeasure::CertaintyEquivalent { q, .. } => ce_risk(&a, &pi, *q, p),
                RiskMeasure::MonotoneTransform { .. } => unreachable!(),
            }
        }
    })
}

/// `u⁻¹(min Σ π_i u(y_i))` subject to `Σ a_i y_i ≥ P`.
fn ce_risk(a: &[f64], pi: &[f64], q: f64, p: f64) -> f64 {
    let n = a.len();
    if a.iter().any(|ai| *ai <= 0.0) {
        return f64::NEG_INFINITY;
    }
    let s: Vec<f64> = a.iter().zip(pi).map(|(ai, w)| ai / w).collect();
    let s_min = s.iter().copied().fold(f64::INFINITY, f64::min);
    let s_max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if q == 1.0 {
        if s_max > 2.0 * s_min * (1.0 + 1e-12) {
            return f64::NEG_INFINITY;
        }
        // σ_ν = s_max ν above zero and s_min ν below
        return if p >= 0.0 { p / s_max } else { p / s_min };
    }
    let tie: Vec<bool> = s.iter().map(|x| *x <= s_min * (1.0 + 1e-12)).collect();
    // stationarity u'(y_i) = θ s_i on the positive branch
    let y_of = |theta: f64, i: usize| {
        let r = theta * s[i];
        if r <= 1.0 {
            0.0
        } else {
            ((r - 1.0) / q).powf(1.0 / (q - 1.0))
        }
    };
    let theta0 = 1.0 / s_min;
    let spent: f64 = (0..n).filter(|&i| !tie[i]).map(|i| a[i] * y_of(theta0, i)).sum();
    let a_tie: f64 = (0..n).filter(|&i| tie[i]).map(|i| a[i]).sum();
    let z = (p - spent) / a_tie;
    let mean = if z <= 0.0 {
        // the cheapest states absorb the remainder on the linear branch
        (0..n).map(|i| pi[i] * if tie[i] { z } else { utility(y_of(theta0, i), q) }).sum::<f64>()
    } else {
        let reach = |theta: f64| (0..n).map(|i| a[i] * y_of(theta, i)).sum::<f64>();
        let mut hi = 2.0 * theta0;
        while reach(hi) < p {
            hi *= 2.0;
        }
        let theta = monotone_root(|th| reach(th) - p, theta0, hi);
        (0..n).map(|i| pi[i] * utility(y_of(theta, i), q)).sum::<f64>()
    };
    crate::risk::utility_inverse(mean, q)
}

/// Weighted Euclidean projection of the scalarization `yf` onto
/// `{y : ϱ(y) ≤ level}`: minimizes `Σ μ_i (y_i − yf_i)²`.
///
/// Returns `None` without an analytic projection and `Some(None)` for an
/// empty set.
pub(crate) fn reduced_projection(rm: &RiskMeasure, yf: &[f64], mu: &[f64], level: f64) -> Option<Option<Vec<f64>>> {
    if !rm.closed_form_support() {
        return None;
    }
    let (base, level) = match resolve(rm, level) {
        Shape::Empty => return Some(None),
        Shape::Whole => return Some(Some(yf.to_vec())),
        Shape::Proper(base, level) => (base, level),
    };
    let mass: f64 = mu.iter().sum();
    let pi: Vec<f64> = mu.iter().map(|m| m / mass).collect();
    if base.evaluate_scalarized(yf, &pi) <= level {
        return Some(Some(yf.to_vec()));
    }
    let y = match base {
        RiskMeasure::WorstCase { .. } | RiskMeasure::Fixture { .. } => yf.iter().map(|v| v.min(level)).collect(),
        RiskMeasure::LinearExpected { .. } => {
            let shift = base.evaluate_scalarized(yf, &pi) - level;
            let mut y: Vec<f64> = yf.iter().map(|v| v - shift).collect();
            // rounding can leave the mean a few ulps above the level
            while base.evaluate_scalarized(&y, &pi) > level {
                let over = base.evaluate_scalarized(&y, &pi) - level;
                y.iter_mut().for_each(|v| *v -= over.max(f64::EPSILON * (1.0 + v.abs())));
            }
            y
        }
        RiskMeasure::Entropic { beta, .. } => {
            // KKT: z_i + κ e^{β z_i} = zf_i with z = y − ν, and Σ π e^{β z} = 1
            let zf: Vec<f64> = yf.iter().map(|v| v - level).collect();
            let beta = *beta;
            let solve = |kappa: f64, zfi: f64| {
                let g = |z: f64| z + kappa * (beta * z).exp() - zfi;
                let mut lo = zfi - 1.0;
                while g(lo) > 0.0 {
                    lo = zfi - 2.0 * (zfi - lo);
                }
                monotone_root(g, lo, zfi)
            };
            let constraint = |kappa: f64| {
                let terms: Vec<f64> = zf.iter().zip(&pi).map(|(z, p)| p.ln() + beta * solve(kappa, *z)).collect();
                crate::risk::log_sum_exp(&terms) <= 0.0
            };
            let kappa = feasible_multiplier(constraint);
            zf.iter().map(|z| level + solve(kappa, *z)).collect()
        }
        RiskMeasure::CertaintyEquivalent { q, .. } => {
            let q = *q;
            let c = utility(level, q);
            let solve = |kappa: f64, yfi: f64| {
                if yfi - kappa < 0.0 {
                    yfi - kappa
                } else if q == 1.0 {
                    (yfi - 2.0 * kappa).max(0.0)
                } else {
                    monotone_root(|y| y + kappa * utility_derivative(y, q) - yfi, 0.0, yfi - kappa)
                }
            };
            let constraint =
                |kappa: f64| yf.iter().zip(&pi).map(|(v, p)| p * utility(solve(kappa, *v), q)).sum::<f64>() <= c;
            let kappa = feasible_multiplier(constraint);
            yf.iter().map(|v| solve(kappa, *v)).collect()
        }
        RiskMeasure::MonotoneTransform { .. } => unreachable!("resolved above"),
    };
    Some(Some(y))
}

/// Smallest multiplier `κ ≥ 0` for which the (monotone) constraint holds,
/// returned from the feasible side of the bracket.
fn feasible_multiplier<C: FnMut(f64) -> bool>(mut feasible: C) -> f64 {
    let mut hi = 1.0;
    while !feasible(hi) {
        hi *= 2.0;
        if hi > 1e300 {
            break;
        }
    }
    let (_, hi, _) = bisect_predicate(&mut feasible, 0.0, hi, 0.0);
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite(r: Reduced) -> (f64, Option<Vec<f64>>) {
        match r {
            Reduced::Finite(v, y) => (v, y),
            other => panic!("expected finite, got {other:?}"),
        }
    }

    /// Brute-force maximum of Σ a_i y_i over a fine lattice for two states.
    fn brute_two_state(rm: &RiskMeasure, a: [f64; 2], pi: [f64; 2], level: f64, radius: f64, m: usize) -> f64 {
        let step = 2.0 * radius / m as f64;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=m {
            for j in 0..=m {
                let y = [-radius + i as f64 * step, -radius + j as f64 * step];
                if rm.evaluate_scalarized(&y, &pi) <= level {
                    best = best.max(a[0] * y[0] + a[1] * y[1]);
                }
            }
        }
        best
    }

    #[test]
    fn worst_case_weighted_level() {
        let rm = RiskMeasure::worst_case(vec![1.0]);
        let (v, y) = finite(reduced_support(&rm, &[1.0, 1.0], &[0.5, 0.5], 2.0).unwrap());
        assert_eq!(v, 2.0);
        assert_eq!(y.unwrap(), vec![2.0, 2.0]);
        assert_eq!(reduced_support(&rm, &[1.0, -1.0], &[0.5, 0.5], 2.0), Some(Reduced::Unbounded));
    }

    #[test]
    fn linear_expected_needs_constant_density() {
        let rm = RiskMeasure::linear_expected(vec![1.0]);
        let (v, _) = finite(reduced_support(&rm, &[2.0, 2.0], &[0.25, 0.75], 3.0).unwrap());
        assert!((v - 6.0).abs() < 1e-14);
        assert_eq!(reduced_support(&rm, &[1.0, 2.0], &[0.5, 0.5], 3.0), Some(Reduced::Unbounded));
    }

    #[test]
    fn entropic_matches_brute_force() {
        let rm = RiskMeasure::entropic(vec![1.0], 1.0);
        let (v, y) = finite(reduced_support(&rm, &[0.6, 1.4], &[0.5, 0.5], 0.5).unwrap());
        let a = [0.3, 0.7];
        let brute = brute_two_state(&rm, a, [0.5, 0.5], 0.5, 4.0, 1600);
        assert!(v >= brute - 1e-12 && v - brute < 5e-3, "closed {v} brute {brute}");
        let y = y.unwrap();
        assert!((a[0] * y[0] + a[1] * y[1] - v).abs() < 1e-12);
        assert!((rm.evaluate_scalarized(&y, &[0.5, 0.5]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn certainty_equivalent_matches_brute_force() {
        for q in [1.0, 1.5, 2.0] {
            let rm = RiskMeasure::certainty_equivalent(vec![1.0], q);
            for (t, level) in [([1.0, 1.5], 0.7), ([1.0, 1.5], -0.4), ([1.0, 1.0], 1.2), ([1.8, 1.0], 0.0)] {
                let mu = [0.5, 0.5];
                let a = [t[0] * mu[0], t[1] * mu[1]];
                let (v, y) = finite(reduced_support(&rm, &t, &mu, level).unwrap());
                let brute = brute_two_state(&rm, a, [0.5, 0.5], level, 4.0, 1600);
                assert!(v >= brute - 1e-9 && v - brute < 1e-2, "q={q} t={t:?} level={level}: {v} vs {brute}");
                let y = y.unwrap();
                assert!(rm.evaluate_scalarized(&y, &[0.5, 0.5]) <= level + 1e-12);
                assert!((a[0] * y[0] + a[1] * y[1] - v).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn certainty_equivalent_unbounded_cases() {
        let rm = RiskMeasure::certainty_equivalent(vec![1.0], 1.0);
        // s_max > 2 s_min: trade negative utility for positive
        assert_eq!(reduced_support(&rm, &[1.0, 3.0], &[0.5, 0.5], 0.0), Some(Reduced::Unbounded));
        let rm = RiskMeasure::certainty_equivalent(vec![1.0], 2.0);
        assert_eq!(reduced_support(&rm, &[0.0, 1.0], &[0.5, 0.5], 0.0), Some(Reduced::Unbounded));
    }

    #[test]
    fn transform_maps_levels() {
        let base = RiskMeasure::worst_case(vec![1.0]);
        let rm = RiskMeasure::transformed(crate::risk::Transform::Arctan, base.clone());
        let (v, _) = finite(reduced_support(&rm, &[1.0, 1.0], &[0.5, 0.5], 1.0f64.atan()).unwrap());
        assert!((v - 1.0).abs() < 1e-14);
        assert_eq!(reduced_support(&rm, &[1.0, 1.0], &[0.5, 0.5], -2.0), Some(Reduced::Empty));
        assert_eq!(reduced_support(&rm, &[1.0, 1.0], &[0.5, 0.5], 2.0), Some(Reduced::Unbounded));
        assert_eq!(reduced_support(&rm, &[0.0, 0.0], &[0.5, 0.5], 2.0), Some(Reduced::Finite(0.0, None)));
    }

    #[test]
    fn projections_are_feasible_and_stationary() {
        let mu = [0.3, 0.7];
        let pi = [0.3, 0.7];
        let yf = [2.0, -0.5];
        for rm in [
            RiskMeasure::entropic(vec![1.0], 1.3),
            RiskMeasure::certainty_equivalent(vec![1.0], 2.0),
            RiskMeasure::certainty_equivalent(vec![1.0], 1.0),
            RiskMeasure::linear_expected(vec![1.0]),
            RiskMeasure::worst_case(vec![1.0]),
        ] {
            let level = 0.2;
            let y = reduced_projection(&rm, &yf, &mu, level).unwrap().unwrap();
            assert!(rm.evaluate_scalarized(&y, &pi) <= level, "{rm}");
            assert!(rm.evaluate_scalarized(&y, &pi) > level - 1e-9, "{rm}");
            // no feasible lattice neighbour is closer
            let dist = |z: &[f64]| mu[0] * (z[0] - yf[0]).powi(2) + mu[1] * (z[1] - yf[1]).powi(2);
            let best = dist(&y);
            for i in -50..=50 {
                for j in -50..=50 {
                    let z = [y[0] + i as f64 * 1e-3, y[1] + j as f64 * 1e-3];
                    if rm.evaluate_scalarized(&z, &pi) <= level {
                        assert!(dist(&z) >= best - 1e-12, "{rm}: {z:?} beats {y:?}");
                    }
                }
            }
        }
    }
}
