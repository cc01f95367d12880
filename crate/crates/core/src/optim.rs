//! Derivative-free minimization used by the numeric backends.

/// Settings for [`nelder_mead`].
#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Stop when the spread of simplex values falls below this.
    pub ftol: f64,
    /// Stop when the simplex diameter falls below this.
    pub xtol: f64,
    /// Stop as soon as the best vertex leaves this Euclidean ball.
    pub divergence_radius: Option<f64>,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_evals: 2000, initial_step: 0.5, ftol: 1e-14, xtol: 1e-11, divergence_radius: None }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// The best vertex crossed the divergence radius.
    pub diverged: bool,
}

/// Nelder–Mead with dimension-adaptive coefficients.
///
/// Non-finite objective values are treated as `+∞`, so infeasible or
/// overflowing trial points are simply rejected.
pub fn nelder_mead<F>(mut objective: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    if dim == 0 {
        let value = eval(x0, &mut evals);
        return Minimum { x: vec![], value, evaluations: evals, converged: true, diverged: false };
    }

    let nf = dim as f64;
    let alpha = 1.0;
    let gamma = 1.0 + 2.0 / nf;
    let rho = 0.75 - 1.0 / (2.0 * nf);
    let sigma = 1.0 - 1.0 / nf;

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for j in 0..dim {
        let mut v = x0.to_vec();
        let scale = opts.initial_step * x0[j].abs().max(1.0);
        v[j] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut converged = false;
    let mut diverged = false;
    let mut centroid = vec![0.0; dim];
    let mut trial = vec![0.0; dim];
    let mut trial2 = vec![0.0; dim];

    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if let Some(r) = opts.divergence_radius {
            if norm(&simplex[0]) > r {
                diverged = true;
                break;
            }
        }

        let spread = values[dim] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
            .fold(0.0f64, f64::max);
        let fscale = values[0].abs().max(1.0);
        if spread.is_finite() && spread <= opts.ftol * fscale && diameter <= opts.xtol * (1.0 + norm(&simplex[0])) {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let worst = &simplex[dim];
        for j in 0..dim {
            trial[j] = centroid[j] + alpha * (centroid[j] - worst[j]);
        }
        let fr = eval(&trial, &mut evals);

        if fr < values[0] {
            for j in 0..dim {
                trial2[j] = centroid[j] + gamma * (trial[j] - centroid[j]);
            }
            let fe = eval(&trial2, &mut evals);
            if fe < fr {
                simplex[dim].copy_from_slice(&trial2);
                values[dim] = fe;
            } else {
                simplex[dim].copy_from_slice(&trial);
                values[dim] = fr;
            }
            continue;
        }
        if fr < values[dim - 1] {
            simplex[dim].copy_from_slice(&trial);
            values[dim] = fr;
            continue;
        }
        // contraction, outside if the reflection improved on the worst vertex
        let outside = fr < values[dim];
        for j in 0..dim {
            trial2[j] = if outside {
                centroid[j] + rho * (trial[j] - centroid[j])
            } else {
                centroid[j] + rho * (simplex[dim][j] - centroid[j])
            };
        }
        let fc = eval(&trial2, &mut evals);
        if (outside && fc <= fr) || (!outside && fc < values[dim]) {
            simplex[dim].copy_from_slice(&trial2);
            values[dim] = fc;
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].clone();
        for i in 1..=dim {
            for j in 0..dim {
                simplex[i][j] = best[j] + sigma * (simplex[i][j] - best[j]);
            }
            values[i] = eval(&simplex[i], &mut evals);
        }
    }

    let (ib, _) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("simplex is nonempty");
    Minimum { x: simplex[ib].clone(), value: values[ib], evaluations: evals, converged, diverged }
}

/// Nelder–Mead restarted from its own result until a restart no longer
/// improves the value. Restarts rebuild the simplex, which undoes collapse.
pub fn nelder_mead_restarted<F>(mut objective: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut remaining = opts.max_evals;
    let mut step = opts.initial_step;
    let mut best: Option<Minimum> = None;
    let mut start = x0.to_vec();
    let mut total = 0;
    while remaining > 2 * (x0.len() + 1) {
        let run_opts = NelderMeadOptions { max_evals: remaining, initial_step: step, ..opts.clone() };
        let run = nelder_mead(&mut objective, &start, &run_opts);
        total += run.evaluations;
        remaining = remaining.saturating_sub(run.evaluations);
        let improved = match &best {
            None => true,
            Some(b) => run.value < b.value - opts.ftol * b.value.abs().max(1.0),
        };
        let stop = run.diverged || !improved;
        if best.as_ref().map_or(true, |b| run.value <= b.value) {
            start = run.x.clone();
            best = Some(run);
        }
        if stop {
            break;
        }
        step = (step * 0.1).max(1e-6);
    }
    let mut best = best.unwrap_or_else(|| nelder_mead(&mut objective, x0, opts));
    best.evaluations = total.max(best.evaluations);
    best
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Bisection for the boundary of a monotone predicate on `[lo, hi]`.
///
/// Requires `pred(lo) == false` and `pred(hi) == true`; returns a bracket
/// with the same property and width at most `tol` (or a few ulps).
pub fn bisect_predicate<P>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64, usize)
where
    P: FnMut(f64) -> bool,
{
    let mut iterations = 0;
    while hi - lo > tol && iterations < 400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi, iterations)
}

/// Root of a nondecreasing function on `[lo, hi]` with `g(lo) ≤ 0 ≤ g(hi)`,
/// bisected to machine precision.
pub fn monotone_root<G>(mut g: G, mut lo: f64, mut hi: f64) -> f64
where
    G: FnMut(f64) -> f64,
{
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
