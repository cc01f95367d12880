//! Property tests for the space, measures, support functions and duality.

use proptest::prelude::*;

use quasirisk::acceptance::{
    grid_spacing, support_function, AcceptanceSet, SupportMethod, SupportOptions, SupportStatus,
};
use quasirisk::duality::{evaluate_risk, exact_risk_function, RiskFunctionMethod};
use quasirisk::separation::{project_onto_acceptance, separate};
use quasirisk::space::{
    conjugate_exponent, dual_luxemburg_norm, luxemburg_norm, modular, pairing, ConeSpace, ExponentFunction,
    MeasureSpace,
};
use quasirisk::{DualDensity, Position, RiskMeasure, Space, StateField, Transform};

const TOL: f64 = 1e-9;

/// `K = cone{(1,0), (1,1)}`, which is not self-dual.
fn wedge() -> ConeSpace {
    ConeSpace::new(
        2,
        vec![vec![1.0, 0.0], vec![1.0, 1.0]],
        vec![vec![0.0, 1.0], vec![1.0, -1.0]],
        vec![vec![0.0, 1.0], vec![1.0, -1.0]],
    )
    .unwrap()
}

#[derive(Debug, Clone)]
struct Setup {
    space: Space,
    w: Vec<f64>,
}

fn setup() -> impl Strategy<Value = Setup> {
    (1usize..=5, 0usize..3).prop_flat_map(|(n, cone)| {
        let d = if cone == 0 { 1 } else { 2 };
        (
            prop::collection::vec(0.1f64..3.0, n),
            prop::collection::vec(prop_oneof![4 => 1.05f64..6.0, 1 => 6.0f64..100.0], n),
            prop::collection::vec(0.2f64..2.0, d),
        )
            .prop_map(move |(mu, p, c)| {
                let (cone_space, w) = match cone {
                    0 => (ConeSpace::orthant(1), vec![c[0]]),
                    1 => (ConeSpace::orthant(2), c.clone()),
                    // c over the dual generators of the wedge
                    _ => (wedge(), vec![c[1], c[0] - c[1]]),
                };
                let space =
                    Space::new(MeasureSpace::new(mu).unwrap(), ExponentFunction::new(p).unwrap(), cone_space).unwrap();
                Setup { space, w }
            })
    })
}

fn position_for(n: usize, d: usize) -> impl Strategy<Value = Position> {
    prop::collection::vec(-5.0f64..5.0, n * d).prop_map(move |v| Position::new(n, d, v).unwrap())
}

fn measure(kind: usize, w: &[f64]) -> RiskMeasure {
    let w = w.to_vec();
    match kind {
        0 => RiskMeasure::linear_expected(w),
        1 => RiskMeasure::worst_case(w),
        2 => RiskMeasure::entropic(w, 0.8),
        3 => RiskMeasure::certainty_equivalent(w, 1.0),
        4 => RiskMeasure::certainty_equivalent(w, 1.5),
        5 => RiskMeasure::certainty_equivalent(w, 2.0),
        6 => RiskMeasure::transformed(Transform::Arctan, RiskMeasure::entropic(w, 1.0)),
        _ => RiskMeasure::transformed(Transform::Cube, RiskMeasure::worst_case(w)),
    }
}

/// A density with every state a nonnegative combination of `w` and the dual generators.
fn admissible(space: &Space, w: &[f64], coeffs: &[f64], aligned: bool) -> DualDensity {
    let (n, d) = (space.n(), space.d());
    let gens = space.cone.dual_generators();
    let m = gens.len() + 1;
    let mut h = DualDensity::zeros(n, d);
    for i in 0..n {
        let state = h.state_mut(i);
        for j in 0..d {
            state[j] += coeffs[i * m] * w[j];
        }
        if !aligned {
            for (b, g) in gens.iter().enumerate() {
                for j in 0..d {
                    state[j] += coeffs[i * m + b + 1] * g[j];
                }
            }
        }
    }
    h
}

fn case() -> impl Strategy<Value = (Setup, Position, Position, Vec<f64>, f64)> {
    setup().prop_flat_map(|s| {
        let (n, d) = (s.space.n(), s.space.d());
        let m = s.space.cone.dual_generators().len() + 1;
        (Just(s), position_for(n, d), position_for(n, d), prop::collection::vec(0.0f64..2.0, n * m), -10.0f64..10.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn luxemburg_norm_is_a_norm((s, f, g, _, alpha) in case()) {
        let (p, sp) = (&s.space.exponent, &s.space.measure);
        let nf = luxemburg_norm(&f, p, sp, TOL).unwrap();
        let ng = luxemburg_norm(&g, p, sp, TOL).unwrap();
        let scaled = luxemburg_norm(&f.scaled(alpha), p, sp, TOL).unwrap();
        prop_assert!((scaled - alpha.abs() * nf).abs() <= 10.0 * TOL);
        prop_assert!(luxemburg_norm(&f.add(&g).unwrap(), p, sp, TOL).unwrap() <= nf + ng + 10.0 * TOL);
        if nf > 0.0 {
            let unit = modular(&f.scaled(1.0 / nf), p.primal(), sp).unwrap();
            prop_assert!((unit - 1.0).abs() <= 10.0 * TOL, "modular at the unit sphere {}", unit);
        }
    }

    #[test]
    fn holder_bound_with_constant_two((s, f, g, _, _) in case()) {
        let (p, sp) = (&s.space.exponent, &s.space.measure);
        let h = DualDensity::new(g.n(), g.d(), g.values().to_vec()).unwrap();
        let lhs = pairing(&h, &f, sp).unwrap().abs();
        let rhs = 2.0 * luxemburg_norm(&f, p, sp, TOL).unwrap() * dual_luxemburg_norm(&h, p, sp, TOL).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn modular_is_monotone_in_state_norms((s, f, _, c, _) in case()) {
        let mut g = f.clone();
        for i in 0..g.n() {
            let factor = 1.0 + c[i];
            g.state_mut(i).iter_mut().for_each(|x| *x *= factor);
        }
        let p = s.space.exponent.primal();
        prop_assert!(modular(&f, p, &s.space.measure).unwrap() <= modular(&g, p, &s.space.measure).unwrap());
    }

    #[test]
    fn pairing_is_bilinear((s, f, g, _, alpha) in case(), beta in -3.0f64..3.0) {
        let sp = &s.space.measure;
        let h1 = DualDensity::new(f.n(), f.d(), g.values().to_vec()).unwrap();
        let h2 = DualDensity::new(f.n(), f.d(), f.values().iter().map(|x| x * x - 1.0).collect()).unwrap();
        let mixed = h1.combine(alpha, &h2, beta).unwrap();
        let lhs = pairing(&mixed, &f, sp).unwrap();
        let rhs = alpha * pairing(&h1, &f, sp).unwrap() + beta * pairing(&h2, &f, sp).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn conjugate_exponents_are_harmonic(p in prop::collection::vec(1.01f64..100.0, 1..6)) {
        let q = conjugate_exponent(&p).unwrap();
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((1.0 / a + 1.0 / b - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn catalogue_measures_are_monotone_and_quasiconvex(
        (s, f, g, c, _) in case(), kind in 0usize..8, lambda in 0.0f64..=1.0,
    ) {
        let rm = measure(kind, &s.w);
        let sp = &s.space.measure;
        // f + k with k statewise in K
        let mut bigger = f.clone();
        for i in 0..f.n() {
            for (b, gen) in s.space.cone.generators().iter().enumerate() {
                let coef = c[(i * 3 + b) % c.len()];
                for (x, gj) in bigger.state_mut(i).iter_mut().zip(gen) {
                    *x += coef * gj;
                }
            }
        }
        prop_assert!(rm.evaluate(&f, sp).unwrap() <= rm.evaluate(&bigger, sp).unwrap() + 1e-9);
        let mix = f.combine(lambda, &g, 1.0 - lambda).unwrap();
        let top = rm.evaluate(&f, sp).unwrap().max(rm.evaluate(&g, sp).unwrap());
        prop_assert!(rm.evaluate(&mix, sp).unwrap() <= top + 1e-9);
    }

    #[test]
    fn transforms_keep_sublevel_sets((s, f, _, _, nu) in case()) {
        let base = RiskMeasure::entropic(s.w.clone(), 1.3);
        let sp = &s.space.measure;
        let rb = base.evaluate(&f, sp).unwrap();
        prop_assume!((rb - nu).abs() > 1e-6);
        for phi in [Transform::Arctan, Transform::Cube, Transform::piecewise(vec![(-1.0, -3.0), (0.0, 0.0), (2.0, 1.0)]).unwrap()] {
            let t = RiskMeasure::transformed(phi.clone(), base.clone());
            prop_assert_eq!(t.evaluate(&f, sp).unwrap() <= phi.apply(nu), rb <= nu);
        }
    }

    #[test]
    fn support_function_is_monotone_in_level_and_homogeneous_in_density(
        (s, _, _, c, nu) in case(), kind in 0usize..8, aligned in any::<bool>(), alpha in 0.01f64..50.0,
    ) {
        let rm = measure(kind, &s.w);
        let h = admissible(&s.space, &s.w, &c, aligned);
        let opts = SupportOptions::default();
        let at = |level: f64, h: &DualDensity| {
            let a = AcceptanceSet::new(&rm, &s.space, level).unwrap();
            support_function(&a, h, SupportMethod::ClosedForm, &opts).unwrap()
        };
        let mut previous = f64::NEG_INFINITY;
        for k in 0..10 {
            let v = at(nu - 2.0 + 0.4 * k as f64, &h).value;
            prop_assert!(v >= previous || v >= previous - 2.0 * TOL * (1.0 + v.abs()), "{} after {}", v, previous);
            previous = v;
        }
        let base = at(nu, &h);
        let scaled = at(nu, &h.scaled(alpha));
        prop_assert_eq!(base.status, scaled.status);
        if base.status == SupportStatus::Finite {
            prop_assert!((scaled.value - alpha * base.value).abs() <= 1e-6 * (1.0 + (alpha * base.value).abs()));
        }
    }

    #[test]
    fn lattice_points_never_beat_the_closed_form((s, _, _, c, nu) in case(), kind in 0usize..3) {
        prop_assume!(s.space.n() * s.space.d() <= 4);
        let rm = measure(kind, &s.w);
        let h = admissible(&s.space, &s.w, &c, true);
        let a = AcceptanceSet::new(&rm, &s.space, nu).unwrap();
        let exact = support_function(&a, &h, SupportMethod::ClosedForm, &SupportOptions::default()).unwrap();
        let grid = support_function(&a, &h, SupportMethod::Grid, &SupportOptions { budget: 20_000, ..Default::default() }).unwrap();
        if grid.status == SupportStatus::Finite && exact.status == SupportStatus::Finite {
            prop_assert!(grid.value <= exact.value + 1e-9 * (1.0 + exact.value.abs()));
        }
        let spacing = grid_spacing(s.space.n() * s.space.d(), 20_000, 2.0 * (1.0 + nu.abs()));
        prop_assert!(spacing > 0.0);
    }

    #[test]
    fn weak_duality_and_exact_risk_agree((s, f, _, c, _) in case(), kind in 0usize..8, aligned in any::<bool>()) {
        let rm = measure(kind, &s.w);
        let h = admissible(&s.space, &s.w, &c, aligned);
        let rho = rm.evaluate(&f, &s.space.measure).unwrap();
        let r = evaluate_risk(&rm, &s.space, &f, &h, TOL, RiskFunctionMethod::Auto).unwrap();
        prop_assert!(r <= rho + 2.0 * TOL);
        let exact = exact_risk_function(&rm, &s.space, &f, &h).unwrap().unwrap();
        let floor = rho - 1e6 * (1.0 + rho.abs());
        if exact.is_finite() && exact < floor {
            // past the bracket floor the bisection reports −∞ by design
            prop_assert!(r == f64::NEG_INFINITY, "exact {} below floor {} but bisection {}", exact, floor, r);
        } else if exact.is_finite() {
            prop_assert!((exact - r).abs() <= 1e-7 * (1.0 + exact.abs()), "exact {} bisection {}", exact, r);
        } else {
            prop_assert!(r == exact || r < -1e5);
        }
    }

    #[test]
    fn separation_certificates_are_valid((s, f, _, _, _) in case(), kind in 0usize..8, drop in 0.05f64..3.0) {
        let rm = measure(kind, &s.w);
        let rho = rm.evaluate(&f, &s.space.measure).unwrap();
        // arctan levels must stay above −π/2 for A_ν to be nonempty
        let level = if kind == 6 { rho - (rho + std::f64::consts::FRAC_PI_2) * drop / 4.0 } else { rho - drop };
        let a = AcceptanceSet::new(&rm, &s.space, level).unwrap();
        prop_assume!(!a.contains(&f).unwrap());
        let x = project_onto_acceptance(&a, &f, TOL, 5000).unwrap();
        prop_assert!(a.contains(&x).unwrap());
        let again = project_onto_acceptance(&a, &x, TOL, 5000).unwrap();
        prop_assert!(x.sub(&again).unwrap().max_abs() <= 2.0 * TOL);
        if rho > level + TOL {
            let cert = separate(&a, &f, TOL, 5000).unwrap();
            prop_assert!(cert.margin > 0.0, "{:?}", cert);
            prop_assert!(cert.admissible, "{:?}", cert);
        }
    }
}
