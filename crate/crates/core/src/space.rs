//! Finite realization of a variable exponent Bochner–Lebesgue space.
//!
//! The state set Ω is `{0, .., n-1}` with strictly positive weights μ, the
//! value space is `E = R^d` with the Euclidean norm, ordered by a closed
//! convex cone `K`. A [`Position`] is an `n × d` array (one vector of `E`
//! per state); a [`DualDensity`] is the same shape and acts on positions
//! through the pairing `⟨g, f⟩ = Σ_i μ_i ⟨h_i, f_i⟩`.

use serde::{Deserialize, Serialize};

use crate::error::{shape_error, Error, Result};
use crate::risk::{AxiomReport, Witness};
use crate::sampling;

/// Default upper bound on the variable exponent.
pub const P_MAX: f64 = 100.0;

/// Tolerance on `1/p + 1/p' = 1`.
const CONJUGATE_TOL: f64 = 1e-12;

/// Finite measure space `(Ω, μ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    mu: Vec<f64>,
    total: f64,
    probability: bool,
}

impl MeasureSpace {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::Domain("measure space needs at least one state".into()));
        }
        if let Some((i, m)) = mu.iter().enumerate().find(|(_, m)| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::Domain(format!("weight mu[{i}] = {m} must be finite and positive")));
        }
        let total: f64 = mu.iter().sum();
        let probability = (total - 1.0).abs() <= 1e-12;
        Ok(Self { mu, total, probability })
    }

    /// Uniform probability measure on `n` states.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("measure space needs at least one state".into()));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.mu
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// Whether the weights sum to one (recorded, never required).
    pub fn is_probability(&self) -> bool {
        self.probability
    }

    /// Normalized weights `μ_i / Σ μ`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.mu.iter().map(|m| m / self.total).collect()
    }
}

/// Statewise exponent `p(·)` and its conjugate `p'(·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFunction {
    p: Vec<f64>,
    p_conj: Vec<f64>,
    p_max: f64,
}

impl ExponentFunction {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        Self::with_bound(p, P_MAX)
    }

    pub fn with_bound(p: Vec<f64>, p_max: f64) -> Result<Self> {
        let p_conj = conjugate_exponent_bounded(&p, p_max)?;
        Ok(Self { p, p_conj, p_max })
    }

    /// Constant exponent on `n` states.
    pub fn constant(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn primal(&self) -> &[f64] {
        &self.p
    }

    pub fn conjugate(&self) -> &[f64] {
        &self.p_conj
    }

    pub fn bound(&self) -> f64 {
        self.p_max
    }

    /// Largest exponent `p⁺`.
    pub fn sup(&self) -> f64 {
        self.p.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest exponent `p⁻`.
    pub fn inf(&self) -> f64 {
        self.p.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Statewise conjugate exponent `p' = p / (p - 1)` with the default bound.
pub fn conjugate_exponent(p: &[f64]) -> Result<Vec<f64>> {
    conjugate_exponent_bounded(p, P_MAX)
}

pub fn conjugate_exponent_bounded(p: &[f64], p_max: f64) -> Result<Vec<f64>> {
    p.iter()
        .enumerate()
        .map(|(i, &pi)| {
            if !(pi > 1.0) {
                return Err(Error::Domain(format!("exponent must exceed 1 (p[{i}] = {pi})")));
            }
            if !(pi <= p_max) {
                return Err(Error::Domain(format!("exponent p[{i}] = {pi} exceeds the bound {p_max}")));
            }
            let q = pi / (pi - 1.0);
            debug_assert!((1.0 / pi + 1.0 / q - 1.0).abs() <= CONJUGATE_TOL);
            Ok(q)
        })
        .collect()
}

/// Value space `E = R^d` ordered by a cone `K`, with its dual cone `K₀`.
///
/// Both representations of `K` are supplied and cross-checked: generators
/// (conic hull) and facets (`K = {x : ⟨A_r, x⟩ ≥ 0}`).
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpace {
    d: usize,
    generators: Vec<Vec<f64>>,
    facets: Vec<Vec<f64>>,
    dual_generators: Vec<Vec<f64>>,
}

const CONE_CHECK_TOL: f64 = 1e-10;

impl ConeSpace {
    pub fn new(
        d: usize,
        generators: Vec<Vec<f64>>,
        facets: Vec<Vec<f64>>,
        dual_generators: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("cone dimension must be positive".into()));
        }
        for (name, set) in [("generator", &generators), ("facet", &facets), ("dual generator", &dual_generators)] {
            if set.is_empty() {
                return Err(Error::Domain(format!("cone needs at least one {name}")));
            }
            for v in set.iter() {
                if v.len() != d {
                    return Err(Error::Dimension {
                        expected: format!("{name} of length {d}"),
                        found: format!("length {}", v.len()),
                    });
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Domain(format!("{name} has non-finite entries")));
                }
            }
        }
        for (g, k) in generators.iter().enumerate() {
            for (r, a) in facets.iter().enumerate() {
                if dot(a, k) < -CONE_CHECK_TOL * (1.0 + norm(a) * norm(k)) {
                    return Err(Error::Domain(format!("cone inconsistent: generator {g} violates facet {r}")));
                }
            }
        }
        for (j, y) in dual_generators.iter().enumerate() {
            for (g, k) in generators.iter().enumerate() {
                if dot(y, k) < -CONE_CHECK_TOL * (1.0 + norm(y) * norm(k)) {
                    return Err(Error::Domain(format!("dual generator {j} is negative on generator {g}")));
                }
            }
        }
        Ok(Self { d, generators, facets, dual_generators })
    }

    /// The nonnegative orthant `R^d_+`, which is self-dual.
    pub fn orthant(d: usize) -> Self {
        let basis: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|k| if j == k { 1.0 } else { 0.0 }).collect()).collect();
        Self { d, generators: basis.clone(), facets: basis.clone(), dual_generators: basis }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn facets(&self) -> &[Vec<f64>] {
        &self.facets
    }

    pub fn dual_generators(&self) -> &[Vec<f64>] {
        &self.dual_generators
    }

    /// `x ∈ K` up to `tol`, via the facet inequalities.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.facets.iter().all(|a| dot(a, x) >= -tol)
    }

    /// `y ∈ K₀` up to `tol`, tested against every generator of `K`.
    pub fn dual_contains(&self, y: &[f64], tol: f64) -> bool {
        self.generators.iter().all(|k| dot(y, k) >= -tol)
    }

    /// `y` in the interior of `K₀`: strictly positive on every nonzero generator.
    pub fn dual_interior_contains(&self, y: &[f64]) -> bool {
        self.generators.iter().filter(|k| norm(k) > 0.0).all(|k| dot(y, k) > CONE_CHECK_TOL * norm(y) * norm(k))
    }

    /// Sum of the generators; a direction pointing into `K`.
    pub fn central_ray(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.d];
        for k in &self.generators {
            for (cj, kj) in c.iter_mut().zip(k) {
                *cj += kj;
            }
        }
        c
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Read access to an `n × d` array of statewise vectors.
pub trait StateField {
    fn n(&self) -> usize;
    fn d(&self) -> usize;
    /// Row-major values, `n * d` entries.
    fn values(&self) -> &[f64];

    fn state(&self, i: usize) -> &[f64] {
        let d = self.d();
        &self.values()[i * d..(i + 1) * d]
    }

    fn shape(&self) -> (usize, usize) {
        (self.n(), self.d())
    }
}

macro_rules! state_array {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
        pub struct $name {
            n: usize,
            d: usize,
            data: Vec<f64>,
        }

        impl $name {
            /// Builds from row-major data; every entry must be finite.
            pub fn new(n: usize, d: usize, data: Vec<f64>) -> Result<Self> {
                if n == 0 || d == 0 || data.len() != n * d {
                    return Err(Error::Dimension {
                        expected: format!("{} entries for {n}x{d}", n * d),
                        found: format!("{} entries", data.len()),
                    });
                }
                if let Some(x) = data.iter().find(|x| !x.is_finite()) {
                    return Err(Error::Domain(format!("non-finite entry {x}")));
                }
                Ok(Self { n, d, data })
            }

            pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
                let n = rows.len();
                let d = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != d) {
                    return Err(Error::Dimension {
                        expected: format!("rows of length {d}"),
                        found: "ragged rows".into(),
                    });
                }
                Self::new(n, d, rows.concat())
            }

            /// One scalar per state (`d = 1`).
            pub fn scalar(values: &[f64]) -> Result<Self> {
                Self::new(values.len(), 1, values.to_vec())
            }

            pub fn zeros(n: usize, d: usize) -> Self {
                Self { n, d, data: vec![0.0; n * d] }
            }

            /// The same vector in every state.
            pub fn constant(n: usize, v: &[f64]) -> Self {
                Self { n, d: v.len(), data: v.repeat(n) }
            }

            pub fn rows(&self) -> Vec<Vec<f64>> {
                self.data.chunks(self.d).map(<[f64]>::to_vec).collect()
            }

            pub fn state_mut(&mut self, i: usize) -> &mut [f64] {
                &mut self.data[i * self.d..(i + 1) * self.d]
            }

            pub fn values_mut(&mut self) -> &mut [f64] {
                &mut self.data
            }

            pub fn scaled(&self, alpha: f64) -> Self {
                Self { n: self.n, d: self.d, data: self.data.iter().map(|x| alpha * x).collect() }
            }

            /// `alpha * self + beta * other`.
            pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
                self.check_same_shape(other)?;
                let data = self.data.iter().zip(&other.data).map(|(a, b)| alpha * a + beta * b).collect();
                Ok(Self { n: self.n, d: self.d, data })
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                self.combine(1.0, other, 1.0)
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.combine(1.0, other, -1.0)
            }

            pub fn is_zero(&self) -> bool {
                self.data.iter().all(|x| *x == 0.0)
            }

            pub fn max_abs(&self) -> f64 {
                self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
            }

            /// Unweighted `Σ |entry|`.
            pub fn l1(&self) -> f64 {
                self.data.iter().map(|x| x.abs()).sum()
            }

            fn check_same_shape(&self, other: &Self) -> Result<()> {
                if self.n != other.n || self.d != other.d {
                    return Err(shape_error((self.n, self.d), (other.n, other.d)));
                }
                Ok(())
            }
        }

        impl StateField for $name {
            fn n(&self) -> usize {
                self.n
            }
            fn d(&self) -> usize {
                self.d
            }
            fn values(&self) -> &[f64] {
                &self.data
            }
        }

        impl TryFrom<Vec<Vec<f64>>> for $name {
            type Error = Error;
            fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
                Self::from_rows(&rows)
            }
        }

        impl From<$name> for Vec<Vec<f64>> {
            fn from(v: $name) -> Self {
                v.rows()
            }
        }
    };
}

state_array!(
    /// A financial position `f ∈ L^{p(·)}`: one loss vector of `E` per state.
    Position
);

state_array!(
    /// Density `h = dg/dμ` of a continuous linear functional `g`.
    DualDensity
);

fn check_shape(f: &impl StateField, n: usize, d: Option<usize>) -> Result<()> {
    let ok = f.n() == n && d.map_or(true, |d| f.d() == d);
    if ok {
        Ok(())
    } else {
        Err(shape_error((n, d.unwrap_or(f.d())), f.shape()))
    }
}

/// Modular `Σ_i μ_i ‖f_i‖^{p_i}` with the given statewise exponents.
pub fn modular(f: &impl StateField, exponents: &[f64], sp: &MeasureSpace) -> Result<f64> {
    check_shape(f, sp.n(), None)?;
    if exponents.len() != sp.n() {
        return Err(shape_error((sp.n(), 1), (exponents.len(), 1)));
    }
    Ok(scaled_modular(f, exponents, sp, 1.0))
}

fn scaled_modular(f: &impl StateField, exponents: &[f64], sp: &MeasureSpace, inv_lambda: f64) -> f64 {
    (0..f.n())
        .map(|i| {
            let sq: f64 = f.state(i).iter().map(|x| (x * inv_lambda).powi(2)).sum();
            if sq == 0.0 {
                0.0
            } else {
                sp.weight(i) * sq.powf(exponents[i] / 2.0)
            }
        })
        .sum()
}

/// Luxemburg norm `inf{λ > 0 : ρ(f/λ) ≤ 1}` for arbitrary statewise exponents.
///
/// The bracket grows geometrically from `λ = 1` and is then bisected down
/// to a few ulps, so the returned value is accurate to machine precision;
/// `tol` is the postcondition on `|ρ(f/λ) − 1|`.
pub fn luxemburg_norm_with(f: &impl StateField, exponents: &[f64], sp: &MeasureSpace, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let rho0 = modular(f, exponents, sp)?;
    if f.values().iter().all(|x| *x == 0.0) {
        return Ok(0.0);
    }
    let rho = |lambda: f64| scaled_modular(f, exponents, sp, 1.0 / lambda);

    let (mut lo, mut hi) = if rho0 > 1.0 {
        let mut hi = 2.0;
        while rho(hi) > 1.0 {
            hi *= 2.0;
        }
        (hi / 2.0, hi)
    } else if rho0 < 1.0 {
        let mut lo = 0.5;
        while rho(lo) <= 1.0 {
            lo /= 2.0;
        }
        (lo, lo * 2.0)
    } else {
        return Ok(1.0);
    };

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rho(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = if (rho(lo) - 1.0).abs() < (rho(hi) - 1.0).abs() { lo } else { hi };
    let residual = (rho(lambda) - 1.0).abs();
    if residual > tol {
        return Err(Error::Domain(format!("Luxemburg bisection stalled with |rho - 1| = {residual:e} > {tol:e}")));
    }
    Ok(lambda)
}

/// Luxemburg norm of a position in `L^{p(·)}`.
pub fn luxemburg_norm(f: &Position, p: &ExponentFunction, sp: &MeasureSpace, tol: f64) -> Result<f64> {
    luxemburg_norm_with(f, p.primal(), sp, tol)
}

/// Luxemburg norm of a density in the dual space `L^{p'(·)}`.
pub fn dual_luxemburg_norm(h: &DualDensity, p: &ExponentFunction, sp: &MeasureSpace, tol: f64) -> Result<f64> {
    luxemburg_norm_with(h, p.conjugate(), sp, tol)
}

/// Duality pairing `⟨g, f⟩ = Σ_i μ_i ⟨h_i, f_i⟩`.
pub fn pairing(h: &DualDensity, f: &Position, sp: &MeasureSpace) -> Result<f64> {
    check_shape(f, sp.n(), Some(h.d()))?;
    check_shape(h, sp.n(), Some(f.d()))?;
    Ok(pairing_unchecked(h, f, sp))
}

pub(crate) fn pairing_unchecked(h: &DualDensity, f: &Position, sp: &MeasureSpace) -> f64 {
    (0..sp.n()).map(|i| sp.weight(i) * dot(h.state(i), f.state(i))).sum()
}

/// Whether every `h_i` lies in `K₀` (up to `tol`), i.e. `g ∈ Q_{p(·)}`.
pub fn in_dual_cone(h: &DualDensity, cone: &ConeSpace, tol: f64) -> Result<bool> {
    if h.d() != cone.dim() {
        return Err(shape_error((h.n(), cone.dim()), h.shape()));
    }
    Ok((0..h.n()).all(|i| cone.dual_contains(h.state(i), tol)))
}

/// Cone order `f1 ≤_K f2`: `f2_i − f1_i ∈ K` in every state.
pub fn cone_leq(f1: &Position, f2: &Position, cone: &ConeSpace, tol: f64) -> Result<bool> {
    if f1.shape() != f2.shape() {
        return Err(shape_error(f1.shape(), f2.shape()));
    }
    if f1.d() != cone.dim() {
        return Err(shape_error((f1.n(), cone.dim()), f1.shape()));
    }
    let mut diff = vec![0.0; f1.d()];
    Ok((0..f1.n()).all(|i| {
        for ((dj, a), b) in diff.iter_mut().zip(f1.state(i)).zip(f2.state(i)) {
            *dj = b - a;
        }
        cone.contains(&diff, tol)
    }))
}

/// A complete finite space: measure, exponent and ordered value space.
#[derive(Debug, Clone, PartialEq)]
pub struct Space {
    pub measure: MeasureSpace,
    pub exponent: ExponentFunction,
    pub cone: ConeSpace,
}

impl Space {
    pub fn new(measure: MeasureSpace, exponent: ExponentFunction, cone: ConeSpace) -> Result<Self> {
        if exponent.n() != measure.n() {
            return Err(Error::Dimension {
                expected: format!("{} exponents", measure.n()),
                found: format!("{}", exponent.n()),
            });
        }
        Ok(Self { measure, exponent, cone })
    }

    /// Uniform probability on `n` states, constant exponent `p`, orthant cone in `R^d`.
    pub fn uniform(n: usize, d: usize, p: f64) -> Result<Self> {
        Self::new(MeasureSpace::uniform(n)?, ExponentFunction::constant(n, p)?, ConeSpace::orthant(d))
    }

    pub fn n(&self) -> usize {
        self.measure.n()
    }

    pub fn d(&self) -> usize {
        self.cone.dim()
    }

    pub fn check_position(&self, f: &impl StateField) -> Result<()> {
        check_shape(f, self.n(), Some(self.d()))
    }

    pub fn from_descriptor(desc: &SpaceDescriptor) -> Result<Self> {
        if desc.mu.len() != desc.n {
            return Err(Error::Descriptor(format!("mu has {} entries but n = {}", desc.mu.len(), desc.n)));
        }
        if desc.p.len() != desc.n {
            return Err(Error::Descriptor(format!("p has {} entries but n = {}", desc.p.len(), desc.n)));
        }
        let measure = MeasureSpace::new(desc.mu.clone())?;
        let exponent = ExponentFunction::with_bound(desc.p.clone(), desc.p_max.unwrap_or(P_MAX))?;
        let cone = match &desc.cone {
            None => ConeSpace::orthant(desc.d),
            Some(c) => ConeSpace::new(desc.d, c.generators.clone(), c.facets.clone(), c.dual_generators.clone())?,
        };
        Self::new(measure, exponent, cone)
    }
}

/// JSON form of a [`Space`]; an omitted cone means `R^d_+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescriptor {
    pub n: usize,
    pub mu: Vec<f64>,
    pub p: Vec<f64>,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDescriptor {
    pub generators: Vec<Vec<f64>>,
    pub facets: Vec<Vec<f64>>,
    pub dual_generators: Vec<Vec<f64>>,
}

/// Sampled norm axioms of `L^{p(·)}` and the Hölder-type bound with constant 2.
///
/// Each check runs `trials` samples; slacks are `10·tol` as for the norm
/// itself, Hölder is checked without slack beyond rounding.
pub fn check_norm_axioms(space: &Space, trials: usize, seed: u64, tol: f64) -> Result<NormAxiomReport> {
    use rand::Rng;
    let (n, d) = (space.n(), space.d());
    let (p, sp) = (&space.exponent, &space.measure);
    let mut rng = sampling::rng(seed);
    let mut report = NormAxiomReport::default();
    let witness =
        |f: &Position, lambda: Option<f64>, lhs: f64, rhs: f64| Witness { inputs: vec![f.clone()], lambda, lhs, rhs };
    for _ in 0..trials {
        let f = sampling::position(&mut rng, n, d, 5.0);
        let g = sampling::position(&mut rng, n, d, 5.0);
        let nf = luxemburg_norm(&f, p, sp, tol)?;
        if nf > 0.0 {
            let unit = modular(&f.scaled(1.0 / nf), p.primal(), sp)?;
            report.unit_modular.record((unit - 1.0).abs(), 0.0, 10.0 * tol, || witness(&f, None, unit, 1.0));
        }

        let alpha: f64 = rng.gen_range(-10.0..=10.0);
        let scaled = luxemburg_norm(&f.scaled(alpha), p, sp, tol)?;
        let diff = (scaled - alpha.abs() * nf).abs();
        report.homogeneity.record(diff, 0.0, 10.0 * tol, || witness(&f, Some(alpha), scaled, alpha.abs() * nf));

        let ng = luxemburg_norm(&g, p, sp, tol)?;
        let sum = luxemburg_norm(&f.add(&g)?, p, sp, tol)?;
        report.triangle.record(sum, nf + ng, 10.0 * tol, || witness(&f, None, sum, nf + ng));

        let h = DualDensity::new(n, d, g.values().to_vec())?;
        let nh = dual_luxemburg_norm(&h, p, sp, tol)?;
        let lhs = pairing(&h, &f, sp)?.abs();
        let rhs = 2.0 * nf * nh;
        report.holder.record(lhs, rhs, 1e-12 * (1.0 + rhs), || witness(&f, None, lhs, rhs));
    }
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NormAxiomReport {
    pub unit_modular: AxiomReport,
    pub homogeneity: AxiomReport,
    pub triangle: AxiomReport,
    pub holder: AxiomReport,
}

impl NormAxiomReport {
    pub fn passed(&self) -> bool {
        self.unit_modular.passed() && self.homogeneity.passed() && self.triangle.passed() && self.holder.passed()
    }

    pub fn total(&self) -> AxiomReport {
        self.unit_modular
            .clone()
            .merge(self.homogeneity.clone())
            .merge(self.triangle.clone())
            .merge(self.holder.clone())
    }
}
