//! Antinorms on cones and their dual functions.
//!
//! `α∨(p) = −sup_{α(v)=1} ⟨p, v⟩`. Quadratic and harmonic antinorms have
//! closed-form duals; the hybrid and piecewise-linear ones go through a
//! numeric oracle on a compact cross-section of the cone.

use crate::cone::{ConeSpec, CrossSection, DualConeSpec, PointClass, MEMBERSHIP_TOL};
use crate::error::{check_dim, Error, Result};
use crate::{AlgebraCovector, AlgebraVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A real number or the `−∞` sentinel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtReal {
    NegInfinity,
    Finite(f64),
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::NegInfinity => None,
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        self == ExtReal::NegInfinity
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInfinity => write!(f, "-inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AntinormKind {
    /// `√(c0 u_a² − Σ c_m u_m²)` on a Lorentz cone, weights taken from the cone.
    Quadratic,
    /// `xy/(x+y)` in the coordinates `u = x a + y b` of a sector.
    Harmonic,
    /// `y − x` for `x ≥ 0`, `√(y² − x²)` for `x < 0`, on the cone `y ≥ |x|`
    /// (`y` the axis coordinate, `x` the single spatial one).
    Hybrid,
    /// `min_i ⟨f_i, u⟩`.
    PiecewiseLinear(Vec<AlgebraCovector>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AntinormSpec {
    cone: ConeSpec,
    kind: AntinormKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualMethod {
    ClosedForm,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualFunctionResult {
    pub value: ExtReal,
    /// A point of `p∨_1`, present when the supremum is attained.
    pub maximizer: Option<AlgebraVector>,
    pub method: DualMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximizerShape {
    Empty,
    Point,
    Ray,
    Patch,
}

/// Description of `p∨_r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximizerSet {
    pub r: f64,
    pub shape: MaximizerShape,
    pub unique: bool,
    /// Sampled maximizers on `S_r`.
    pub points: Vec<AlgebraVector>,
    /// Unit generators of `p∨_0` (boundary directions with `⟨p, u⟩ = 0`).
    pub recession: Vec<AlgebraVector>,
    /// Midpoints of sampled pairs stayed maximizers.
    pub convex: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub positive_on_interior: bool,
    pub zero_on_boundary: bool,
    pub neg_infinity_outside: bool,
    pub homogeneous: bool,
    pub superadditive: bool,
    pub max_boundary_dual: f64,
    pub dual_is_antinorm: bool,
    pub failures: Vec<String>,
}

impl AxiomReport {
    /// Items (i)–(iii) of the antinorm definition.
    pub fn axioms_hold(&self) -> bool {
        self.positive_on_interior && self.zero_on_boundary && self.neg_infinity_outside && self.homogeneous && self.superadditive
    }
}

/// Tuning of the cross-section oracle.
#[derive(Clone, Copy, Debug)]
pub struct NumericOptions {
    pub grid_points: usize,
    pub refine_tol: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self { grid_points: 10_000, refine_tol: 1e-10 }
    }
}

/// Oracle output: maximizers of `⟨p, u⟩ / α(u)` over the cross-section.
#[derive(Clone, Debug)]
pub struct NumericDual {
    pub value: f64,
    /// Canonical (lexicographically smallest) maximizer scaled to `S_1`.
    pub canonical: AlgebraVector,
    /// Whether the canonical maximizer sits in `ri C` with margin.
    pub attained: bool,
    /// Near-maximizers found on the grid, scaled to `S_1`.
    pub cloud: Vec<AlgebraVector>,
}

const CLOUD_TOL: f64 = 1e-9;
const ATTAIN_MARGIN: f64 = 1e-3;
const DUAL_BOUNDARY_TOL: f64 = 1e-8;
const MAX_SET_POINTS: usize = 257;

impl AntinormSpec {
    pub fn quadratic(cone: ConeSpec) -> Result<Self> {
        match cone {
            ConeSpec::Lorentz(_) => Ok(Self { cone, kind: AntinormKind::Quadratic }),
            _ => Err(Error::Construction("quadratic antinorm needs a Lorentz cone".into())),
        }
    }

    pub fn harmonic(cone: ConeSpec) -> Result<Self> {
        match &cone {
            ConeSpec::Sector(p) if p.generators().len() == 2 && cone.is_salient() => Ok(Self { cone, kind: AntinormKind::Harmonic }),
            _ => Err(Error::Construction("harmonic antinorm needs a salient sector".into())),
        }
    }

    pub fn hybrid(cone: ConeSpec) -> Result<Self> {
        match &cone {
            ConeSpec::Lorentz(l) if l.spatial().len() == 1 && l.axis_weight() == 1.0 && l.weights() == [1.0] => {
                Ok(Self { cone, kind: AntinormKind::Hybrid })
            }
            _ => Err(Error::Construction("hybrid antinorm needs a unit-weight Lorentz cone with one spatial coordinate".into())),
        }
    }

    pub fn piecewise_linear(cone: ConeSpec, functionals: Vec<AlgebraCovector>) -> Result<Self> {
        if functionals.is_empty() {
            return Err(Error::Construction("piecewise-linear antinorm needs at least one functional".into()));
        }
        let dual = cone.dual_cone()?;
        for (i, f) in functionals.iter().enumerate() {
            check_dim(cone.dim(), f.dim())?;
            if !dual.contains(&-f.clone(), MEMBERSHIP_TOL) {
                return Err(Error::Construction(format!("functional {i} is negative somewhere on the cone")));
            }
        }
        Ok(Self { cone, kind: AntinormKind::PiecewiseLinear(functionals) })
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn kind(&self) -> &AntinormKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            AntinormKind::Quadratic => "quadratic",
            AntinormKind::Harmonic => "harmonic",
            AntinormKind::Hybrid => "hybrid",
            AntinormKind::PiecewiseLinear(_) => "piecewise_linear",
        }
    }

    pub fn has_closed_form_dual(&self) -> bool {
        matches!(self.kind, AntinormKind::Quadratic | AntinormKind::Harmonic)
    }

    fn sector_coords(&self, u: &AlgebraVector) -> (f64, f64) {
        let g = self.cone.polyhedral_part().expect("sector").generators();
        let (a, b) = (&g[0], &g[1]);
        let (aa, ab, bb) = (a.dot(&a.0), a.dot(&b.0), b.dot(&b.0));
        let (ra, rb) = (a.dot(&u.0), b.dot(&u.0));
        let det = aa * bb - ab * ab;
        ((bb * ra - ab * rb) / det, (aa * rb - ab * ra) / det)
    }

    fn sector_pairing(&self, p: &AlgebraCovector) -> (f64, f64) {
        let g = self.cone.polyhedral_part().expect("sector").generators();
        (p.pair(&g[0]), p.pair(&g[1]))
    }

    /// `α(u)`, or `−∞` off the cone.
    pub fn eval(&self, u: &AlgebraVector) -> ExtReal {
        if self.cone.classify_point(u, MEMBERSHIP_TOL) == PointClass::Outside {
            return ExtReal::NegInfinity;
        }
        let v = match (&self.kind, &self.cone) {
            (AntinormKind::Quadratic, ConeSpec::Lorentz(l)) => l.sqrt_form(u).unwrap_or(0.0),
            (AntinormKind::Hybrid, ConeSpec::Lorentz(l)) => {
                let x = u[l.spatial()[0]];
                let y = u[l.axis()];
                if x >= 0.0 {
                    y - x
                } else {
                    crate::cone::sqrt_difference(y.max(0.0), -x).unwrap_or(0.0)
                }
            }
            (AntinormKind::Harmonic, _) => {
                let (x, y) = self.sector_coords(u);
                let (x, y) = (x.max(0.0), y.max(0.0));
                if x + y == 0.0 {
                    0.0
                } else {
                    x * y / (x + y)
                }
            }
            (AntinormKind::PiecewiseLinear(fs), _) => fs.iter().map(|f| f.pair(u)).fold(f64::INFINITY, f64::min),
            _ => unreachable!("constructors pair kinds with cones"),
        };
        ExtReal::Finite(v.max(0.0))
    }

    fn eval_finite(&self, u: &AlgebraVector) -> Option<f64> {
        self.eval(u).finite()
    }

    /// `α∨(p)` with a maximizer on `S_1` when one exists.
    pub fn dual_value(&self, p: &AlgebraCovector) -> Result<DualFunctionResult> {
        self.dual_value_with(p, NumericOptions::default())
    }

    pub fn dual_value_with(&self, p: &AlgebraCovector, opts: NumericOptions) -> Result<DualFunctionResult> {
        check_dim(self.dim(), p.dim())?;
        let method = if self.has_closed_form_dual() { DualMethod::ClosedForm } else { DualMethod::Numeric };
        let dual = self.cone.dual_cone()?;
        if !dual.contains(p, MEMBERSHIP_TOL) {
            return Ok(DualFunctionResult { value: ExtReal::NegInfinity, maximizer: None, method });
        }
        if self.cone.annihilates(p, 1e-14) {
            return Ok(DualFunctionResult { value: ExtReal::Finite(0.0), maximizer: None, method });
        }
        match (&self.kind, &self.cone) {
            (AntinormKind::Quadratic, ConeSpec::Lorentz(l)) => {
                let a = p[l.axis()].abs() / l.axis_weight().sqrt();
                let rho = l.spatial().iter().zip(l.weights()).map(|(&m, c)| p[m] * p[m] / c).sum::<f64>().sqrt();
                let value = crate::cone::sqrt_difference(a, rho).unwrap_or(0.0);
                let maximizer = (value > 0.0).then(|| {
                    let mut u = AlgebraVector::zeros(l.dim());
                    u.0[l.axis()] = -p[l.axis()] / l.axis_weight() / value;
                    for (&m, &c) in l.spatial().iter().zip(l.weights()) {
                        u.0[m] = p[m] / c / value;
                    }
                    u
                });
                Ok(DualFunctionResult { value: ExtReal::Finite(value), maximizer, method })
            }
            (AntinormKind::Harmonic, _) => {
                let (h1, h2) = self.sector_pairing(p);
                let (s1, s2) = ((-h1).max(0.0).sqrt(), (-h2).max(0.0).sqrt());
                let value = (s1 + s2) * (s1 + s2);
                let maximizer = (s1 > 0.0 && s2 > 0.0).then(|| {
                    let g = self.cone.polyhedral_part().expect("sector").generators();
                    let (x, y) = (1.0 + s2 / s1, 1.0 + s1 / s2);
                    AlgebraVector(&g[0].0 * x + &g[1].0 * y)
                });
                Ok(DualFunctionResult { value: ExtReal::Finite(value), maximizer, method })
            }
            _ => {
                let n = self.numeric_dual(p, opts)?;
                Ok(DualFunctionResult { value: ExtReal::Finite(n.value), maximizer: n.attained.then_some(n.canonical), method })
            }
        }
    }

    /// Cross-section oracle for `α∨(p)`, valid for every variant.
    pub fn numeric_dual(&self, p: &AlgebraCovector, opts: NumericOptions) -> Result<NumericDual> {
        check_dim(self.dim(), p.dim())?;
        let k = self.cone.cross_section();
        let ratio = |z: &[f64]| -> Option<f64> {
            let u = k.point(z);
            match self.eval_finite(&u) {
                Some(a) if a > 0.0 => Some(p.pair(&u) / a),
                _ => None,
            }
        };
        let (grid, step) = section_grid(&k, opts.grid_points);
        let values: Vec<(Vec<f64>, f64)> = grid.into_iter().filter_map(|z| ratio(&z).map(|r| (z, r))).collect();
        let Some((best_z, best_r)) = values.iter().max_by(|a, b| a.1.total_cmp(&b.1)).map(|(z, r)| (z.clone(), *r)) else {
            return Err(Error::NoConvergence { best_bound: f64::NAN });
        };
        let (best_z, best_r) = pattern_search(&ratio, best_z, best_r, step, opts.refine_tol);
        let cutoff = best_r - CLOUD_TOL * best_r.abs().max(1.0);
        let mut cloud_z: Vec<Vec<f64>> = values.iter().filter(|(_, r)| *r >= cutoff).map(|(z, _)| z.clone()).collect();
        cloud_z.push(best_z.clone());
        let to_sphere = |z: &[f64]| {
            let u = k.point(z);
            let a = self.eval_finite(&u).unwrap_or(1.0);
            &u * (1.0 / a)
        };
        let mut canonical_z = cloud_z
            .iter()
            .min_by(|a, b| to_sphere(a).lex_cmp(&to_sphere(b)))
            .cloned()
            .unwrap_or_else(|| best_z.clone());
        if cloud_z.len() > 1 {
            let centroid: Vec<f64> = (0..best_z.len()).map(|j| cloud_z.iter().map(|z| z[j]).sum::<f64>() / cloud_z.len() as f64).collect();
            let polished = polish_along_ray(&ratio, &centroid, &canonical_z, cutoff);
            if to_sphere(&polished).lex_cmp(&to_sphere(&canonical_z)).is_lt() {
                canonical_z = polished;
            }
        }
        let center_alpha = self.eval_finite(&k.center).unwrap_or(0.0);
        let canonical_point = k.point(&canonical_z);
        let canonical_alpha = self.eval_finite(&canonical_point).unwrap_or(0.0);
        let attained = canonical_alpha >= ATTAIN_MARGIN * center_alpha
            && self.cone.classify_point(&canonical_point, MEMBERSHIP_TOL) == PointClass::RelativeInterior;
        Ok(NumericDual {
            value: -best_r,
            canonical: to_sphere(&canonical_z),
            attained,
            cloud: cloud_z.iter().map(|z| to_sphere(z)).collect(),
        })
    }

    /// `p∨_r`: maximizers of `⟨p, ·⟩` on the antisphere `S_r`.
    pub fn maximizer_set(&self, p: &AlgebraCovector, r: f64, tol: f64) -> Result<MaximizerSet> {
        check_dim(self.dim(), p.dim())?;
        let dual = self.cone.dual_cone()?;
        if !dual.contains(p, tol.max(MEMBERSHIP_TOL)) {
            return Err(Error::OutsideDualCone);
        }
        if !(r >= 0.0) {
            return Err(Error::Input(format!("antisphere level must be nonnegative, got {r}")));
        }
        let recession = self.cone.exposed_rays(p, tol.max(MEMBERSHIP_TOL));
        if r == 0.0 {
            let shape = match recession.len() {
                0 => MaximizerShape::Point,
                1 => MaximizerShape::Ray,
                _ => MaximizerShape::Patch,
            };
            let points = if recession.is_empty() { vec![AlgebraVector::zeros(self.dim())] } else { recession.clone() };
            return Ok(MaximizerSet { r, shape, unique: recession.is_empty(), points, recession, convex: true });
        }
        let (points, unique) = if self.has_closed_form_dual() {
            let d = self.dual_value(p)?;
            match d.maximizer {
                Some(u) => (vec![u], true),
                None => (Vec::new(), true),
            }
        } else {
            let n = self.numeric_dual(p, NumericOptions::default())?;
            if !n.attained && n.cloud.iter().all(|u| self.cone.classify_point(u, MEMBERSHIP_TOL) != PointClass::RelativeInterior) {
                (Vec::new(), true)
            } else {
                let mut pts: Vec<AlgebraVector> = n.cloud.into_iter().filter(|u| u.norm() < 1e6).collect();
                pts.sort_by(|a, b| a.lex_cmp(b));
                pts.dedup_by(|a, b| (&*a - &*b).norm() < 1e-9);
                if !pts.iter().any(|u| (u - &n.canonical).norm() < 1e-9) {
                    pts.insert(0, n.canonical.clone());
                }
                let spread = pts.iter().map(|a| (a - &n.canonical).norm()).fold(0.0, f64::max);
                let unique = spread < 5e-7;
                if unique {
                    pts.truncate(1);
                } else if pts.len() > MAX_SET_POINTS {
                    let last = pts.len() - 1;
                    pts = (0..MAX_SET_POINTS).map(|i| pts[i * last / (MAX_SET_POINTS - 1)].clone()).collect();
                }
                (pts, unique)
            }
        };
        let shape = match (points.len(), unique, recession.is_empty()) {
            (0, _, _) => MaximizerShape::Empty,
            (_, true, _) => MaximizerShape::Point,
            (_, false, false) => MaximizerShape::Ray,
            _ => MaximizerShape::Patch,
        };
        let points: Vec<AlgebraVector> = points.into_iter().map(|u| &u * r).collect();
        let convex = self.midpoints_are_maximizers(p, &points, r);
        Ok(MaximizerSet { r, shape, unique, points, recession, convex })
    }

    fn midpoints_are_maximizers(&self, p: &AlgebraCovector, points: &[AlgebraVector], r: f64) -> bool {
        let Some(first) = points.first() else { return true };
        let target = p.pair(first);
        let scale = target.abs().max(r).max(1.0);
        points.iter().enumerate().all(|(i, a)| {
            points.iter().skip(i + 1).step_by(1 + points.len() / 64).all(|b| {
                let m = (a + b) * 0.5;
                let on_sphere = self.eval_finite(&m).is_some_and(|v| (v - r).abs() <= 1e-8 * scale);
                on_sphere && (p.pair(&m) - target).abs() <= 1e-8 * scale
            })
        })
    }

    /// Randomized check of the antinorm axioms and of `α∨|rb(C∨) = 0`.
    pub fn check_axioms(&self, samples: usize) -> AxiomReport {
        let mut rng = StdRng::seed_from_u64(0x5eeda7);
        let cone = &self.cone;
        let dim = self.dim();
        let mut failures = Vec::new();
        let note = |ok: bool, what: String, failures: &mut Vec<String>| {
            if !ok && failures.len() < 20 {
                failures.push(what);
            }
            ok
        };

        let mut positive = true;
        let mut zero_boundary = true;
        let mut outside = true;
        let mut homogeneous = true;
        let mut superadditive = true;
        for _ in 0..samples {
            let u = cone.sample_interior(&mut rng);
            let a = self.eval_finite(&u);
            positive &= note(a.is_some_and(|x| x > 0.0), format!("α not positive at interior point {:?}", u.to_vec()), &mut failures);
            if let Some(b) = cone.sample_boundary(&mut rng) {
                let v = self.eval_finite(&b);
                zero_boundary &= note(v.is_some_and(|x| x.abs() <= 1e-10 * b.norm().max(1.0)), format!("α = {v:?} at boundary point {:?}", b.to_vec()), &mut failures);
            }
            let w = AlgebraVector::new((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect());
            if cone.classify_point(&w, MEMBERSHIP_TOL) == PointClass::Outside {
                outside &= note(self.eval(&w).is_neg_infinity(), format!("α finite off the cone at {:?}", w.to_vec()), &mut failures);
            }
            let lambda = rng.random_range(1e-3..10.0);
            if let (Some(a), Some(al)) = (a, self.eval_finite(&(&u * lambda))) {
                homogeneous &= note((al - lambda * a).abs() <= 1e-10 * (1.0 + lambda * a), format!("homogeneity fails at {:?}, λ = {lambda}", u.to_vec()), &mut failures);
            }
            let v = if rng.random_bool(0.3) { cone.sample_boundary(&mut rng).unwrap_or_else(|| cone.sample_interior(&mut rng)) } else { cone.sample_interior(&mut rng) };
            if let (Some(a), Some(b), Some(s)) = (a, self.eval_finite(&v), self.eval_finite(&(&u + &v))) {
                superadditive &= note(s >= a + b - 1e-10 * (1.0 + s.abs()), format!("superadditivity fails at {:?} + {:?}", u.to_vec(), v.to_vec()), &mut failures);
            }
        }

        let boundary_samples = if self.has_closed_form_dual() { samples } else { samples.min(200) };
        let mut max_boundary_dual: f64 = 0.0;
        for _ in 0..boundary_samples {
            let Some(p) = cone.sample_dual_boundary(&mut rng) else { break };
            let p = p.normalized();
            if let Ok(d) = self.dual_value_with(&p, NumericOptions { grid_points: 2_000, refine_tol: 1e-10 }) {
                if let Some(v) = d.value.finite() {
                    max_boundary_dual = max_boundary_dual.max(v.abs());
                }
            }
        }
        AxiomReport {
            samples,
            positive_on_interior: positive,
            zero_on_boundary: zero_boundary,
            neg_infinity_outside: outside,
            homogeneous,
            superadditive,
            max_boundary_dual,
            dual_is_antinorm: max_boundary_dual <= DUAL_BOUNDARY_TOL,
            failures,
        }
    }

    /// Searches `rb C∨` for `p` with `α∨(p) > 0` attained in `ri C`; the
    /// witness is scaled to `α∨(p) = 1`.
    pub fn boundary_linearity(&self, search_resolution: usize) -> Option<AlgebraCovector> {
        let opts = NumericOptions { grid_points: 2_000, refine_tol: 1e-12 };
        let mut best: Option<(AlgebraCovector, f64)> = None;
        for p in self.cone.dual_boundary_directions(search_resolution) {
            let Ok(d) = self.dual_value_with(&p, opts) else { continue };
            let (Some(v), Some(u)) = (d.value.finite(), d.maximizer) else { continue };
            if v > 1e-6 && self.cone.classify_point(&u, MEMBERSHIP_TOL) == PointClass::RelativeInterior && best.as_ref().is_none_or(|(_, bv)| v > *bv) {
                best = Some((p, v));
            }
        }
        let (p, _) = best?;
        // polish the value with the full-resolution oracle before rescaling
        let v = self.dual_value(&p).ok()?.value.finite()?;
        Some(&p * (1.0 / v))
    }

    pub fn dual_cone(&self) -> Result<DualConeSpec> {
        self.cone.dual_cone()
    }
}

/// Grid of cross-section coordinates plus the grid step.
fn section_grid(k: &CrossSection, budget: usize) -> (Vec<Vec<f64>>, f64) {
    let d = k.basis.len();
    if d == 0 {
        return (vec![Vec::new()], 0.0);
    }
    let n = ((budget as f64).powf(1.0 / d as f64).ceil() as usize).max(3);
    let step = 2.0 * k.radius / n as f64;
    let coords: Vec<f64> = (0..n).map(|i| -k.radius + step * (i as f64 + 0.5)).collect();
    let mut out = Vec::with_capacity(n.pow(d as u32));
    let mut idx = vec![0usize; d];
    loop {
        let z: Vec<f64> = idx.iter().map(|&i| coords[i]).collect();
        if z.iter().map(|x| x * x).sum::<f64>() <= k.radius * k.radius * (1.0 + 1e-12) {
            out.push(z);
        }
        let mut j = 0;
        while j < d {
            idx[j] += 1;
            if idx[j] < n {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == d {
            break;
        }
    }
    (out, step)
}

fn pattern_search<F: Fn(&[f64]) -> Option<f64>>(f: &F, mut z: Vec<f64>, mut best: f64, mut step: f64, tol: f64) -> (Vec<f64>, f64) {
    let d = z.len();
    let mut iterations = 0;
    while step > tol && d > 0 && iterations < 100_000 {
        iterations += 1;
        let mut moved = false;
        for j in 0..d {
            for sign in [1.0, -1.0] {
                let mut trial = z.clone();
                trial[j] += sign * step;
                if let Some(v) = f(&trial) {
                    if v > best {
                        best = v;
                        z = trial;
                        moved = true;
                    }
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (z, best)
}

/// Farthest point on the ray from `from` through `through` that is still a
/// near-maximizer.
fn polish_along_ray<F: Fn(&[f64]) -> Option<f64>>(f: &F, from: &[f64], through: &[f64], cutoff: f64) -> Vec<f64> {
    let at = |t: f64| -> Vec<f64> { from.iter().zip(through).map(|(a, b)| a + t * (b - a)).collect() };
    let ok = |t: f64| f(&at(t)).is_some_and(|v| v >= cutoff);
    if from.iter().zip(through).all(|(a, b)| a == b) {
        return through.to_vec();
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while ok(hi) && hi < 1e6 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(lo)
}
