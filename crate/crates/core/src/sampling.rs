//! Seeded samplers for positions, cone elements and admissible densities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::space::{ConeSpace, DualDensity, Position, Space, StateField};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform position with entries in `[-scale, scale]`.
pub fn position(rng: &mut impl Rng, n: usize, d: usize, scale: f64) -> Position {
    let data = (0..n * d).map(|_| rng.gen_range(-scale..=scale)).collect();
    Position::new(n, d, data).expect("finite sample")
}

/// Random element of `K`: a nonnegative combination of its generators,
/// occasionally zero.
pub fn cone_element(rng: &mut impl Rng, cone: &ConeSpace, scale: f64) -> Vec<f64> {
    let mut k = vec![0.0; cone.dim()];
    if rng.gen_bool(0.1) {
        return k;
    }
    for g in cone.generators() {
        let c = if rng.gen_bool(0.25) { 0.0 } else { rng.gen_range(0.0..scale) };
        for (kj, gj) in k.iter_mut().zip(g) {
            *kj += c * gj;
        }
    }
    k
}

/// Statewise random element of `K`.
pub fn cone_position(rng: &mut impl Rng, cone: &ConeSpace, n: usize, scale: f64) -> Position {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| cone_element(rng, cone, scale)).collect();
    Position::from_rows(&rows).expect("finite sample")
}

/// Random admissible density. With probability one half every state is a
/// nonnegative multiple of `aligned` (when given); otherwise each state is a
/// random nonnegative combination of the dual generators.
pub fn admissible_density(rng: &mut impl Rng, space: &Space, aligned: Option<&[f64]>) -> DualDensity {
    let (n, d) = (space.n(), space.d());
    let mut h = DualDensity::zeros(n, d);
    let use_aligned = aligned.is_some() && rng.gen_bool(0.5);
    for i in 0..n {
        let state = h.state_mut(i);
        match aligned {
            Some(w) if use_aligned => {
                let t = rng.gen_range(0.05..2.0);
                for (s, wj) in state.iter_mut().zip(w) {
                    *s = t * wj;
                }
            }
            _ => {
                for y in space.cone.dual_generators() {
                    let c = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..2.0) };
                    for (s, yj) in state.iter_mut().zip(y) {
                        *s += c * yj;
                    }
                }
            }
        }
    }
    h
}

/// Unit-norm random direction in `R^{n·d}` as a position.
pub fn direction(rng: &mut impl Rng, n: usize, d: usize) -> Position {
    loop {
        let p = position(rng, n, d, 1.0);
        let norm = p.values().iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return p.scaled(1.0 / norm);
        }
    }
}
