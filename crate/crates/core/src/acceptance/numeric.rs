//! Penalized derivative-free support function and brute-force lattice oracle.

use rand::Rng;

use super::{SupportStatus, SupportValue};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::risk::RiskMeasure;
use crate::sampling;
use crate::space::{dot, DualDensity, Position, Space, StateField};

/// Quadratic penalty schedule.
const PENALTIES: [f64; 6] = [1e1, 1e2, 1e3, 1e4, 1e5, 1e6];
/// Divergence radius relative to the start, `R_div = DIVERGENCE × (1 + ‖x₀‖)`.
const DIVERGENCE: f64 = 1e6;
const STARTS: usize = 8;

/// `ϱ` on a flattened `n·d` vector.
pub(crate) struct FlatMeasure<'a> {
    rm: &'a RiskMeasure,
    pi: Vec<f64>,
    n: usize,
    d: usize,
    y: std::cell::RefCell<Vec<f64>>,
}

impl<'a> FlatMeasure<'a> {
    pub(crate) fn new(rm: &'a RiskMeasure, space: &Space) -> Self {
        let n = space.n();
        Self { rm, pi: space.measure.probabilities(), n, d: space.d(), y: std::cell::RefCell::new(vec![0.0; n]) }
    }

    pub(crate) fn eval(&self, x: &[f64]) -> f64 {
        let w = self.rm.scalarization();
        let mut y = self.y.borrow_mut();
        for i in 0..self.n {
            y[i] = dot(w, &x[i * self.d..(i + 1) * self.d]);
        }
        self.rm.evaluate_scalarized(&y, &self.pi)
    }
}

/// Statewise copy of the central ray of `K`.
pub(crate) fn descent_direction(space: &Space) -> Vec<f64> {
    space.cone.central_ray().repeat(space.n())
}

/// Finds an acceptable point, first along `−K` from the origin, then by
/// minimizing `ϱ`. `None` means the set was certified empty (numerically).
pub(crate) fn find_member(
    flat: &FlatMeasure<'_>,
    space: &Space,
    level: f64,
    budget: usize,
) -> (Option<Vec<f64>>, usize) {
    let dim = space.n() * space.d();
    let k = descent_direction(space);
    let mut evals = 0;
    let mut s = 0.0;
    for step in 0..48 {
        let x: Vec<f64> = k.iter().map(|kj| -s * kj).collect();
        evals += 1;
        if flat.eval(&x) <= level {
            return (Some(x), evals);
        }
        s = if step == 0 { 1.0 } else { 2.0 * s };
    }
    let opts = NelderMeadOptions { max_evals: budget.max(100), initial_step: 1.0, ..Default::default() };
    let m = nelder_mead(|x| (flat.eval(x) - level).max(0.0), &vec![0.0; dim], &opts);
    evals += m.evaluations;
    if flat.eval(&m.x) <= level {
        (Some(m.x), evals)
    } else {
        (None, evals)
    }
}

/// Moves `x` along `−K` until it is acceptable; monotone measures only
/// decrease along that ray.
pub(crate) fn restore_feasibility(flat: &FlatMeasure<'_>, k: &[f64], x: &[f64], level: f64) -> Option<Vec<f64>> {
    if flat.eval(x) <= level {
        return Some(x.to_vec());
    }
    let shifted = |s: f64| -> Vec<f64> { x.iter().zip(k).map(|(xi, ki)| xi - s * ki).collect() };
    let mut hi = 1e-12 * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    while flat.eval(&shifted(hi)) > level {
        hi *= 2.0;
        if hi > 1e12 {
            return None;
        }
    }
    let (_, hi, _) = crate::optim::bisect_predicate(|s| flat.eval(&shifted(s)) <= level, 0.0, hi, 0.0);
    Some(shifted(hi))
}

pub(crate) fn numeric_support(
    rm: &RiskMeasure,
    space: &Space,
    level: f64,
    h: &DualDensity,
    budget: usize,
    tol: f64,
    seed: u64,
) -> SupportValue {
    let flat = FlatMeasure::new(rm, space);
    let (n, d) = (space.n(), space.d());
    let weights: Vec<f64> = (0..n * d).map(|j| space.measure.weight(j / d) * h.values()[j]).collect();
    let pairing = |x: &[f64]| dot(&weights, x);

    let (member, mut evals) = find_member(&flat, space, level, budget / 10);
    let Some(member) = member else {
        return SupportValue::empty(evals);
    };
    if h.is_zero() {
        return SupportValue::finite(0.0, to_position(&member, n, d), evals, false);
    }

    let k = descent_direction(space);
    let mut rng = sampling::rng(seed);
    let radius = 1.0 + level.abs() + member.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let per_stage = (budget / (STARTS * PENALTIES.len())).max(60);
    let mut best: Option<(f64, Vec<f64>, bool)> = None;

    for start in 0..STARTS {
        let x0: Vec<f64> = if start == 0 {
            member.clone()
        } else {
            member.iter().map(|v| v + rng.gen_range(-radius..=radius)).collect()
        };
        let r_div = DIVERGENCE * (1.0 + x0.iter().map(|v| v * v).sum::<f64>().sqrt());
        let baseline = pairing(&x0).max(pairing(&member));
        let mut x = x0;
        let mut converged = true;
        let mut failed = false;
        for c in PENALTIES {
            let opts = NelderMeadOptions {
                max_evals: per_stage,
                initial_step: 0.25 * radius,
                divergence_radius: Some(r_div),
                ..Default::default()
            };
            let run = nelder_mead(
                |z| {
                    let excess = (flat.eval(z) - level).max(0.0);
                    -pairing(z) + c * excess * excess
                },
                &x,
                &opts,
            );
            evals += run.evaluations;
            if run.diverged {
                evals += 1;
                if flat.eval(&run.x) <= level + tol && pairing(&run.x) > baseline {
                    return SupportValue {
                        value: f64::INFINITY,
                        maximizer: None,
                        status: SupportStatus::PlusInfinity,
                        evaluations: evals,
                        loose: false,
                    };
                }
                failed = true;
                break;
            }
            converged &= run.converged;
            x = run.x;
        }
        if failed {
            continue;
        }
        if let Some(feasible) = restore_feasibility(&flat, &k, &x, level) {
            let value = pairing(&feasible);
            if best.as_ref().map_or(true, |(v, _, _)| value > *v) {
                best = Some((value, feasible, !converged));
            }
        }
    }

    match best {
        Some((value, x, loose)) => SupportValue::finite(value, to_position(&x, n, d), evals, loose),
        None => SupportValue::finite(pairing(&member), to_position(&member, n, d), evals, true),
    }
}

fn to_position(x: &[f64], n: usize, d: usize) -> Position {
    Position::new(n, d, x.to_vec()).expect("finite iterate")
}

/// Lattice size per axis for a grid with at most `points` nodes in `dim` axes.
pub fn grid_nodes_per_axis(dim: usize, points: usize) -> usize {
    let mut m = (points as f64).powf(1.0 / dim as f64).round() as usize;
    while m > 2 && m.checked_pow(dim as u32).map_or(true, |p| p > points) {
        m -= 1;
    }
    m.max(2)
}

/// Spacing of the lattice over `[−radius, radius]^dim` with at most `points` nodes.
pub fn grid_spacing(dim: usize, points: usize, radius: f64) -> f64 {
    2.0 * radius / (grid_nodes_per_axis(dim, points) - 1) as f64
}

/// Exhaustive maximum of the pairing over lattice points in the acceptance set.
pub(crate) fn grid_support(
    rm: &RiskMeasure,
    space: &Space,
    level: f64,
    h: &DualDensity,
    points: usize,
    radius: f64,
) -> SupportValue {
    let flat = FlatMeasure::new(rm, space);
    let (n, d) = (space.n(), space.d());
    let dim = n * d;
    let m = grid_nodes_per_axis(dim, points);
    let step = 2.0 * radius / (m - 1) as f64;
    let weights: Vec<f64> = (0..dim).map(|j| space.measure.weight(j / d) * h.values()[j]).collect();

    let mut idx = vec![0usize; dim];
    let mut x = vec![-radius; dim];
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evals = 0;
    loop {
        evals += 1;
        if flat.eval(&x) <= level {
            let v = dot(&weights, &x);
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, x.clone()));
            }
        }
        // odometer increment
        let mut j = 0;
        loop {
            if j == dim {
                return match best {
                    Some((v, xb)) => SupportValue::finite(v, to_position(&xb, n, d), evals, false),
                    None => SupportValue::empty(evals),
                };
            }
            idx[j] += 1;
            if idx[j] < m {
                x[j] = -radius + idx[j] as f64 * step;
                break;
            }
            idx[j] = 0;
            x[j] = -radius;
            j += 1;
        }
    }
}
