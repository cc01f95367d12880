//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use rand::Rng;

use quasirisk::acceptance::{
    check_convexity, check_lemma1, check_monotone_completion, check_nestedness, grid_spacing, sample_member,
    sample_non_member, support_function, AcceptanceSet, SupportMethod, SupportOptions, SupportStatus,
};
use quasirisk::duality::{
    check_risk_function_class, check_scale_invariance, dual_representation_with, sublevel_reconstruction,
    RiskFunctionMethod,
};
use quasirisk::sampling::{self, SeededRng};
use quasirisk::separation::{project_with, separate, ProjectionMethod};
use quasirisk::space::{check_norm_axioms, ConeSpace, ExponentFunction, MeasureSpace};
use quasirisk::{DualDensity, RiskMeasure, Space, StateField, Transform};

struct Outcome {
    pass: bool,
    detail: String,
}

fn random_space(rng: &mut SeededRng, n: usize, d: usize) -> Space {
    let mu = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
    let p = (0..n).map(|_| rng.gen_range(1.2..6.0)).collect();
    Space::new(MeasureSpace::new(mu).unwrap(), ExponentFunction::new(p).unwrap(), ConeSpace::orthant(d)).unwrap()
}

fn random_w(rng: &mut SeededRng, d: usize) -> Vec<f64> {
    if d == 1 {
        vec![1.0]
    } else {
        (0..d).map(|_| rng.gen_range(0.3..1.5)).collect()
    }
}

/// The catalogue, with the arctan transform over the entropic measure.
fn catalogue(w: &[f64]) -> Vec<RiskMeasure> {
    let w = w.to_vec();
    vec![
        RiskMeasure::linear_expected(w.clone()),
        RiskMeasure::worst_case(w.clone()),
        RiskMeasure::entropic(w.clone(), 1.0),
        RiskMeasure::certainty_equivalent(w.clone(), 1.0),
        RiskMeasure::certainty_equivalent(w.clone(), 1.5),
        RiskMeasure::certainty_equivalent(w.clone(), 2.0),
        RiskMeasure::transformed(Transform::Arctan, RiskMeasure::entropic(w, 1.0)),
    ]
}

/// A level strictly inside the range of the measure.
fn level_for(rm: &RiskMeasure, rng: &mut SeededRng) -> f64 {
    let nu: f64 = rng.gen_range(-1.5..1.5);
    match rm {
        RiskMeasure::MonotoneTransform { .. } => nu.atan(),
        _ => nu,
    }
}

fn closed_form_duality() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (k, rm) in [RiskMeasure::worst_case(vec![1.0]), RiskMeasure::linear_expected(vec![1.0])].iter().enumerate() {
        for n in 2..=6 {
            for seed in 0..50u64 {
                let mut rng = sampling::rng(1000 * k as u64 + 100 * n as u64 + seed);
                let space = random_space(&mut rng, n, 1);
                let f = sampling::position(&mut rng, n, 1, 5.0);
                let method = RiskFunctionMethod::Bisection(SupportMethod::ClosedForm);
                let r = dual_representation_with(rm, &space, &f, 200, seed, 1e-10, method).unwrap();
                worst = worst.max(r.gap.abs());
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst <= 1e-6 && elapsed < Duration::from_secs(10),
        detail: format!(
            "{count} instances, max |gap| = {worst:.2e} (tol 1e-6), {:.2}s (limit 10s)",
            elapsed.as_secs_f64()
        ),
    }
}

fn budgeted_duality() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    let kinds: [(&str, fn(Vec<f64>) -> RiskMeasure); 4] = [
        ("Entropic", |w| RiskMeasure::entropic(w, 1.0)),
        ("CE q=1.5", |w| RiskMeasure::certainty_equivalent(w, 1.5)),
        ("CE q=2", |w| RiskMeasure::certainty_equivalent(w, 2.0)),
        ("arctan(Entropic)", |w| RiskMeasure::transformed(Transform::Arctan, RiskMeasure::entropic(w, 1.0))),
    ];
    for (k, (name, make)) in kinds.iter().enumerate() {
        let mut close = 0;
        let mut min_gap = f64::INFINITY;
        for seed in 0..50u64 {
            let mut rng = sampling::rng(50_000 + 1000 * k as u64 + seed);
            let (n, d) = (2 + (seed % 4) as usize, 1 + (seed % 2) as usize);
            let space = random_space(&mut rng, n, d);
            let rm = make(random_w(&mut rng, d));
            let f = sampling::position(&mut rng, n, d, 3.0);
            let r = dual_representation_with(&rm, &space, &f, 2000, seed, 1e-9, RiskFunctionMethod::Auto).unwrap();
            min_gap = min_gap.min(r.gap);
            if r.gap <= 0.05 * (1.0 + r.primal.abs()) {
                close += 1;
            }
        }
        let ok = min_gap >= -1e-6 && close * 100 >= 80 * 50;
        pass &= ok;
        lines.push(format!("{name}: min gap {min_gap:.2e}, {close}/50 within 5%"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    Outcome { pass, detail: format!("{}; {:.1}s (limit 300s)", lines.join("; "), elapsed.as_secs_f64()) }
}

fn lemma1() -> Outcome {
    let mut member_violations = 0;
    let mut member_trials = 0;
    for inst in 0..20u64 {
        let mut rng = sampling::rng(70_000 + inst);
        let (n, d) = (2 + (inst % 4) as usize, 1 + (inst % 2) as usize);
        let space = random_space(&mut rng, n, d);
        let w = random_w(&mut rng, d);
        let rm = catalogue(&w).swap_remove((inst % 7) as usize);
        let level = level_for(&rm, &mut rng);
        let a = AcceptanceSet::new(&rm, &space, level).unwrap();
        let f = sample_member(&a, &mut rng, 3.0).expect("member");
        let report = check_lemma1(&a, &f, 200, inst).unwrap();
        member_violations += report.violations;
        member_trials += report.trials;
    }
    let mut certified = 0;
    let mut hard = 0;
    for inst in 0..200u64 {
        let mut rng = sampling::rng(80_000 + inst);
        let (n, d) = (2 + (inst % 4) as usize, 1 + (inst % 2) as usize);
        let space = random_space(&mut rng, n, d);
        let w = random_w(&mut rng, d);
        let rm = catalogue(&w).swap_remove((inst % 7) as usize);
        let level = level_for(&rm, &mut rng);
        let a = AcceptanceSet::new(&rm, &space, level).unwrap();
        let f = sample_non_member(&a, &mut rng, 3.0).expect("non-member");
        match separate(&a, &f, 1e-9, 5000) {
            Ok(cert) => {
                if cert.margin > 0.0 && cert.admissible {
                    certified += 1;
                }
                if !cert.admissible {
                    hard += 1;
                }
            }
            Err(e) => eprintln!("separation failed on instance {inst}: {e}"),
        }
    }
    Outcome {
        pass: member_violations == 0 && certified * 100 >= 95 * 200 && hard == 0,
        detail: format!(
            "members: {member_violations} violations in {member_trials} pairings (slack 1e-8); non-members: {certified}/200 certified (need 190), {hard} inadmissible"
        ),
    }
}

fn sublevel_identity() -> Outcome {
    let mut worst = 0.0f64;
    for inst in 0..100u64 {
        let mut rng = sampling::rng(90_000 + inst);
        let (n, d) = (1 + (inst % 5) as usize, 1 + (inst % 2) as usize);
        let space = random_space(&mut rng, n, d);
        let w = random_w(&mut rng, d);
        let mut measures = catalogue(&w);
        measures.push(RiskMeasure::transformed(Transform::Cube, RiskMeasure::worst_case(w.clone())));
        measures.push(RiskMeasure::transformed(
            Transform::piecewise(vec![(-2.0, -1.0), (0.0, 0.0), (1.0, 3.0)]).unwrap(),
            RiskMeasure::certainty_equivalent(w, 2.0),
        ));
        let rm = &measures[(inst % measures.len() as u64) as usize];
        let f = sampling::position(&mut rng, n, d, 4.0);
        let direct = rm.evaluate(&f, &space.measure).unwrap();
        let rebuilt = sublevel_reconstruction(rm, &space, &f, 1e-9).unwrap();
        worst = worst.max((direct - rebuilt).abs());
    }
    Outcome {
        pass: worst <= 1e-8,
        detail: format!("100 pairs, max |reconstruction - evaluation| = {worst:.2e} (tol 1e-8)"),
    }
}

fn space_axioms() -> Outcome {
    let mut rng = sampling::rng(4);
    let mut total = [0usize; 4];
    let mut trials = 0;
    for (n, d) in [(1, 1), (3, 1), (4, 2), (6, 3)] {
        let space = random_space(&mut rng, n, d);
        let r = check_norm_axioms(&space, 100, n as u64, 1e-9).unwrap();
        total[0] += r.unit_modular.violations;
        total[1] += r.homogeneity.violations;
        total[2] += r.triangle.violations;
        total[3] += r.holder.violations;
        trials += r.homogeneity.trials;
    }
    Outcome {
        pass: total.iter().all(|v| *v == 0),
        detail: format!(
            "{trials} trials each; violations: unit-modular {} (tol 1e-8), homogeneity {}, triangle {}, Hölder(2) {}",
            total[0], total[1], total[2], total[3]
        ),
    }
}

fn risk_function_class() -> Outcome {
    let mut rng = sampling::rng(6);
    let space = random_space(&mut rng, 3, 2);
    let w = vec![1.0, 0.5];
    let tol = 1e-9;
    let method = RiskFunctionMethod::Bisection(SupportMethod::ClosedForm);
    let mut parts = Vec::new();
    let mut pass = true;
    for (k, rm) in catalogue(&w).iter().enumerate() {
        let class = check_risk_function_class(rm, &space, 500, 600 + k as u64, tol, method).unwrap();
        let scale = check_scale_invariance(rm, &space, &[1e-3, 1e3], 200, 700 + k as u64, tol, method).unwrap();
        pass &= class.passed() && scale.passed();
        parts.push(format!(
            "{rm}: B1/B2/B3 {} of {}, scale {} of {}",
            class.violations, class.trials, scale.violations, scale.trials
        ));
    }
    Outcome { pass, detail: format!("violations: {}", parts.join("; ")) }
}

fn acceptance_structure() -> Outcome {
    let mut rng = sampling::rng(7);
    let space = random_space(&mut rng, 3, 2);
    let w = vec![0.8, 1.2];
    let mut worst = 0;
    for (k, rm) in catalogue(&w).iter().enumerate() {
        let level = level_for(rm, &mut rng);
        let a = AcceptanceSet::new(rm, &space, level).unwrap();
        let seed = 100 * k as u64;
        let lower = match rm {
            RiskMeasure::MonotoneTransform { .. } => (level.tan() - 1.0).atan(),
            _ => level - 1.0,
        };
        let counts = [
            check_convexity(&a, 1000, seed).violations,
            check_nestedness(rm, &space, (lower, level), 1000, seed + 1).unwrap().violations,
            check_monotone_completion(&a, 1000, seed + 2).violations,
        ];
        worst = worst.max(counts.into_iter().max().unwrap());
    }
    Outcome { pass: worst == 0, detail: format!("7 measures x 1000 trials per suite, max violations {worst}") }
}

fn oracle_agreement() -> Outcome {
    let mut worst_ratio = 0.0f64;
    let mut instances = 0;
    let mut failures = 0;
    for (inst, (n, d)) in [(1, 1), (2, 1), (3, 1), (4, 1), (2, 2), (1, 2)].iter().cycle().take(30).enumerate() {
        let mut rng = sampling::rng(110_000 + inst as u64);
        let space = random_space(&mut rng, *n, *d);
        let w = random_w(&mut rng, *d);
        let mut measures = catalogue(&w);
        measures.retain(|m| !matches!(m, RiskMeasure::CertaintyEquivalent { q, .. } if *q == 1.0));
        let rm = &measures[inst % measures.len()];
        let level = level_for(rm, &mut rng);
        let a = AcceptanceSet::new(rm, &space, level).unwrap();
        // aligned density; constant multiples for the linear measure
        let t: Vec<f64> = (0..*n)
            .map(|_| if matches!(rm, RiskMeasure::LinearExpected { .. }) { 1.0 } else { rng.gen_range(0.2..1.5) })
            .collect();
        let rows: Vec<Vec<f64>> = t.iter().map(|ti| w.iter().map(|wj| ti * wj).collect()).collect();
        let h = DualDensity::from_rows(&rows).unwrap();
        let exact = support_function(&a, &h, SupportMethod::ClosedForm, &SupportOptions::default()).unwrap();
        let radius = 1.25 * exact.maximizer.as_ref().map_or(1.0, |x| x.max_abs()) + 0.5;
        let points = 1_000_000;
        let grid = support_function(
            &a,
            &h,
            SupportMethod::Grid,
            &SupportOptions { budget: points, grid_radius: Some(radius), ..Default::default() },
        )
        .unwrap();
        let numeric = support_function(
            &a,
            &h,
            SupportMethod::Numeric,
            &SupportOptions { budget: 20_000, seed: inst as u64, ..Default::default() },
        )
        .unwrap();
        let weighted_l1: f64 =
            (0..*n).map(|i| space.measure.weight(i) * h.state(i).iter().map(|x| x.abs()).sum::<f64>()).sum();
        let bound = grid_spacing(n * d, points, radius) * weighted_l1;
        let diff = (numeric.value - grid.value).abs();
        instances += 1;
        if !(numeric.status == SupportStatus::Finite && grid.status == SupportStatus::Finite && diff <= bound) {
            failures += 1;
            eprintln!(
                "support oracle mismatch on instance {inst} ({rm}): numeric {:?} grid {:?} bound {bound:e}",
                numeric.value, grid.value
            );
        }
        worst_ratio = worst_ratio.max(diff / bound);
    }

    let mut worst_projection = 0.0f64;
    let mut projections = 0;
    for inst in 0..30u64 {
        let mut rng = sampling::rng(120_000 + inst);
        let (n, d) = [(1, 1), (2, 1), (3, 1), (4, 1), (2, 2)][(inst % 5) as usize];
        let space = random_space(&mut rng, n, d);
        let w = random_w(&mut rng, d);
        let rm = catalogue(&w).swap_remove((inst % 7) as usize);
        let level = level_for(&rm, &mut rng);
        let a = AcceptanceSet::new(&rm, &space, level).unwrap();
        let f = sample_non_member(&a, &mut rng, 3.0).expect("non-member");
        let analytic = project_with(&a, &f, 1e-9, 1, ProjectionMethod::Analytic).unwrap();
        let numeric = project_with(&a, &f, 1e-9, 40_000, ProjectionMethod::Numeric).unwrap();
        let gap: f64 = (0..n)
            .map(|i| {
                let diff: f64 =
                    analytic.point.state(i).iter().zip(numeric.point.state(i)).map(|(x, y)| (x - y).powi(2)).sum();
                space.measure.weight(i) * diff
            })
            .sum::<f64>()
            .sqrt();
        if gap > 1e-6 {
            eprintln!("projection mismatch on instance {inst} ({rm}): weighted distance {gap:e}");
        }
        worst_projection = worst_projection.max(gap);
        projections += 1;
    }
    Outcome {
        pass: failures == 0 && worst_projection <= 1e-6,
        detail: format!(
            "support: {}/{instances} within one grid spacing (max ratio {worst_ratio:.3}); projections: {projections} instances, max weighted distance {worst_projection:.2e} (tol 1e-6)",
            instances - failures
        ),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("closed-form strong duality", closed_form_duality),
        ("budgeted strong duality", budgeted_duality),
        ("membership characterization", lemma1),
        ("sublevel identity", sublevel_identity),
        ("space axioms", space_axioms),
        ("risk-function class", risk_function_class),
        ("acceptance-set structure", acceptance_structure),
        ("oracle agreement", oracle_agreement),
    ];
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if filter.is_some_and(|f| f != k + 1) {
            continue;
        }
        let started = Instant::now();
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {name}: {} ({:.1}s)", k + 1, outcome.detail, started.elapsed().as_secs_f64());
        if !outcome.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
