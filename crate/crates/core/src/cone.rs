//! Closed convex cones and their negative duals.
//!
//! Three representations cover every cone we need: a (weighted) Lorentz cone
//! living on a coordinate subspace, a polyhedral cone given by generators, and
//! a planar sector spanned by two rays. Covectors are identified with vectors
//! through the Euclidean structure of the chosen basis, so the annihilator of
//! `span C` is the orthogonal complement of `span C`.

use crate::error::{check_dim, Error, Result};
use crate::lie::orthonormal_basis;
use crate::{AlgebraCovector, AlgebraVector};
use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Default membership tolerance.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// A covector whose part on `span C` is this small relative to the whole sits at the vertex of `C∨`.
const VERTEX_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointClass {
    Outside,
    RelativeBoundary,
    RelativeInterior,
}

/// `C = {u : c0 u_a² ≥ Σ c_m u_m², u_a ≥ 0, u_j = 0 off the index list}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzCone {
    dim: usize,
    axis: usize,
    spatial: Vec<usize>,
    axis_weight: f64,
    weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralCone {
    dim: usize,
    generators: Vec<AlgebraVector>,
    /// Orthonormal basis of `span C`.
    span: Vec<AlgebraVector>,
    /// Outward unit facet normals, lying in `span C`: `C = {u ∈ span C : ⟨a_f, u⟩ ≤ 0}`.
    facets: Vec<AlgebraVector>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConeSpec {
    Lorentz(LorentzCone),
    Polyhedral(PolyhedralCone),
    /// A planar sector; internally a two-generator polyhedral cone.
    Sector(PolyhedralCone),
}

/// The negative dual cone `C∨ = {p : p|_C ≤ 0}`.
#[derive(Clone, Debug, PartialEq)]
pub enum DualConeSpec {
    /// `{p : p_a ≤ 0, p_a²/c0 ≥ Σ p_m²/c_m}`, coordinates off the index list free.
    /// `axis_weight` and `weights` hold the reciprocal weights `1/c0, 1/c_m`.
    Lorentz { dim: usize, axis: usize, spatial: Vec<usize>, axis_weight: f64, weights: Vec<f64> },
    /// `{p : ⟨p, g⟩ ≤ 0 for every generator g}`.
    Halfspaces { dim: usize, normals: Vec<AlgebraVector>, span: Vec<AlgebraVector> },
    /// Sector spanned by `rays` in the dual plane, plus the annihilator (`free`).
    Sector { dim: usize, rays: [AlgebraCovector; 2], free: Vec<AlgebraCovector>, normals: Vec<AlgebraVector>, span: Vec<AlgebraVector> },
}

/// Compact cross-section `K = {u ∈ C : ℓ(u) = 1}` parameterized as
/// `center + Σ z_j basis_j` with `|z| ≤ radius`.
#[derive(Clone, Debug)]
pub struct CrossSection {
    pub functional: AlgebraCovector,
    pub center: AlgebraVector,
    pub basis: Vec<AlgebraVector>,
    pub radius: f64,
}

impl CrossSection {
    pub fn point(&self, z: &[f64]) -> AlgebraVector {
        let mut u = self.center.clone();
        for (b, &zj) in self.basis.iter().zip(z) {
            u.0 += &b.0 * zj;
        }
        u
    }

    pub fn coords(&self, u: &AlgebraVector) -> Vec<f64> {
        let d = u - &self.center;
        self.basis.iter().map(|b| b.dot(&d.0)).collect()
    }
}

impl LorentzCone {
    pub fn new(dim: usize, axis: usize, spatial: Vec<usize>, axis_weight: f64, weights: Vec<f64>) -> Result<Self> {
        if axis >= dim || spatial.iter().any(|&m| m >= dim) {
            return Err(Error::Construction("Lorentz cone index out of range".into()));
        }
        let mut seen = vec![false; dim];
        for &i in std::iter::once(&axis).chain(&spatial) {
            if seen[i] {
                return Err(Error::Construction(format!("Lorentz cone index {i} repeated")));
            }
            seen[i] = true;
        }
        check_dim(spatial.len(), weights.len())?;
        if !(axis_weight > 0.0 && axis_weight.is_finite()) || weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::Construction("Lorentz cone weights must be positive and finite".into()));
        }
        Ok(Self { dim, axis, spatial, axis_weight, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn axis(&self) -> usize {
        self.axis
    }
    pub fn spatial(&self) -> &[usize] {
        &self.spatial
    }
    pub fn axis_weight(&self) -> f64 {
        self.axis_weight
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn on_index(&self, j: usize) -> bool {
        j == self.axis || self.spatial.contains(&j)
    }

    /// `c0 u_a² − Σ c_m u_m²`.
    pub fn form(&self, u: &AlgebraVector) -> f64 {
        let a = u[self.axis];
        let (rho2, _) = self.spatial_sq(u);
        self.axis_weight * a * a - rho2
    }

    fn spatial_sq(&self, u: &AlgebraVector) -> (f64, f64) {
        let mut s = 0.0;
        let mut scale = 0.0f64;
        for (&m, &c) in self.spatial.iter().zip(&self.weights) {
            s += c * u[m] * u[m];
            scale = scale.max(c);
        }
        (s, scale)
    }

    /// `√(c0 u_a² − Σ c_m u_m²)` evaluated in factored form; results within
    /// roundoff of zero are snapped to zero. `None` when the form is negative.
    pub(crate) fn sqrt_form(&self, u: &AlgebraVector) -> Option<f64> {
        let a = self.axis_weight.sqrt() * u[self.axis].abs();
        let (rho2, _) = self.spatial_sq(u);
        let rho = rho2.sqrt();
        sqrt_difference(a, rho)
    }

    fn weight_scale(&self) -> f64 {
        self.weights.iter().copied().fold(self.axis_weight, f64::max)
    }
}

/// `√(a² − b²)` for `a, b ≥ 0`, computed as `√((a−b)(a+b))`; a difference
/// within a few ulps of `a` counts as zero.
pub(crate) fn sqrt_difference(a: f64, b: f64) -> Option<f64> {
    let diff = a - b;
    let floor = 32.0 * f64::EPSILON * a.max(b);
    if diff.abs() <= floor {
        Some(0.0)
    } else if diff < 0.0 {
        None
    } else {
        Some((diff * (a + b)).sqrt())
    }
}

impl PolyhedralCone {
    pub fn new(generators: Vec<AlgebraVector>) -> Result<Self> {
        let dim = generators.first().map(|g| g.dim()).ok_or_else(|| Error::Construction("polyhedral cone needs at least one generator".into()))?;
        for g in &generators {
            check_dim(dim, g.dim())?;
            if !g.is_finite() {
                return Err(Error::Construction("non-finite generator".into()));
            }
        }
        let generators: Vec<AlgebraVector> = generators.into_iter().filter(|g| g.norm() > 0.0).collect();
        if generators.is_empty() {
            return Err(Error::Construction("all generators are zero".into()));
        }
        let span = orthonormal_basis(&generators, 1e-10);
        let facets = compute_facets(&generators, &span);
        Ok(Self { dim, generators, span, facets })
    }

    pub fn generators(&self) -> &[AlgebraVector] {
        &self.generators
    }

    pub fn facets(&self) -> &[AlgebraVector] {
        &self.facets
    }

    fn project_to_span(&self, u: &AlgebraVector) -> AlgebraVector {
        let mut out = AlgebraVector::zeros(self.dim);
        for q in &self.span {
            out.0 += &q.0 * q.dot(&u.0);
        }
        out
    }

    fn classify(&self, u: &AlgebraVector, tol: f64) -> PointClass {
        let n = u.norm();
        if n == 0.0 {
            return PointClass::RelativeBoundary;
        }
        let off = (u - &self.project_to_span(u)).norm() / n;
        if off > tol {
            return PointClass::Outside;
        }
        let worst = self.facets.iter().map(|a| a.dot(&u.0) / n).fold(f64::NEG_INFINITY, f64::max);
        if self.facets.is_empty() {
            return PointClass::RelativeInterior;
        }
        if worst > tol {
            PointClass::Outside
        } else if worst >= -tol {
            PointClass::RelativeBoundary
        } else {
            PointClass::RelativeInterior
        }
    }

    fn is_salient(&self) -> bool {
        let d = self.span.len();
        if self.facets.len() < d {
            return false;
        }
        // lineality space is the common kernel of the facet normals inside span C
        let rows: Vec<AlgebraVector> = self.facets.clone();
        orthonormal_basis(&rows, 1e-9).len() == d
    }

    /// Facet normals containing generator `g` (within tolerance).
    fn facets_through(&self, g: &AlgebraVector) -> Vec<&AlgebraVector> {
        let n = g.norm();
        self.facets.iter().filter(|a| (a.dot(&g.0) / n).abs() <= 1e-9).collect()
    }
}

fn compute_facets(generators: &[AlgebraVector], span: &[AlgebraVector]) -> Vec<AlgebraVector> {
    let d = span.len();
    let dim = generators[0].dim();
    // generator coordinates inside span C, normalized
    let coords: Vec<Vec<f64>> = generators
        .iter()
        .map(|g| {
            let y: Vec<f64> = span.iter().map(|q| q.dot(&g.0)).collect();
            let n = y.iter().map(|x| x * x).sum::<f64>().sqrt();
            y.into_iter().map(|x| x / n).collect()
        })
        .collect();
    let to_ambient = |n: &[f64]| {
        let mut a = AlgebraVector::zeros(dim);
        for (q, &nk) in span.iter().zip(n) {
            a.0 += &q.0 * nk;
        }
        a
    };
    let tol = 1e-10;
    let orient = |n: Vec<f64>| -> Option<Vec<f64>> {
        let vals: Vec<f64> = coords.iter().map(|y| y.iter().zip(&n).map(|(a, b)| a * b).sum()).collect();
        if vals.iter().all(|&v| v <= tol) {
            Some(n)
        } else if vals.iter().all(|&v| v >= -tol) {
            Some(n.into_iter().map(|x| -x).collect())
        } else {
            None
        }
    };
    let mut facets: Vec<Vec<f64>> = Vec::new();
    if d == 1 {
        if let Some(n) = orient(vec![1.0]) {
            facets.push(n);
        }
    } else {
        for combo in combinations(coords.len(), d - 1) {
            let normal = match generalized_cross(&combo.iter().map(|&i| coords[i].clone()).collect::<Vec<_>>(), d) {
                Some(n) => n,
                None => continue,
            };
            if let Some(n) = orient(normal) {
                if !facets.iter().any(|f| f.iter().zip(&n).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) < 1e-9) {
                    facets.push(n);
                }
            }
        }
    }
    facets.iter().map(|n| to_ambient(n)).collect()
}

/// Unit normal to `d − 1` vectors in `R^d`, or `None` if they are dependent.
fn generalized_cross(rows: &[Vec<f64>], d: usize) -> Option<Vec<f64>> {
    let m = rows.len();
    debug_assert_eq!(m + 1, d);
    let mut n = vec![0.0; d];
    for (j, nj) in n.iter_mut().enumerate() {
        let minor = DMatrix::from_fn(m, m, |r, c| rows[r][if c < j { c } else { c + 1 }]);
        let det = if m == 0 { 1.0 } else { minor.determinant() };
        *nj = if j % 2 == 0 { det } else { -det };
    }
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-9 {
        return None;
    }
    Some(n.into_iter().map(|x| x / norm).collect())
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Orthonormal basis of the orthogonal complement of `span` in `R^dim`.
pub(crate) fn complement_basis(dim: usize, span: &[AlgebraVector]) -> Vec<AlgebraVector> {
    let mut all: Vec<AlgebraVector> = span.to_vec();
    all.extend((0..dim).map(|i| AlgebraVector::basis(dim, i)));
    orthonormal_basis(&all, 1e-10).into_iter().skip(span.len()).collect()
}

impl ConeSpec {
    /// Lorentz cone with axis `axis`, spatial coordinates `spatial` and weights.
    pub fn lorentz(dim: usize, axis: usize, spatial: Vec<usize>, axis_weight: f64, weights: Vec<f64>) -> Result<Self> {
        Ok(ConeSpec::Lorentz(LorentzCone::new(dim, axis, spatial, axis_weight, weights)?))
    }

    /// Unit-weight Lorentz cone.
    pub fn lorentz_unit(dim: usize, axis: usize, spatial: Vec<usize>) -> Result<Self> {
        let w = vec![1.0; spatial.len()];
        Self::lorentz(dim, axis, spatial, 1.0, w)
    }

    pub fn polyhedral(generators: Vec<AlgebraVector>) -> Result<Self> {
        Ok(ConeSpec::Polyhedral(PolyhedralCone::new(generators)?))
    }

    /// Sector `{s a + t b : s, t ≥ 0}` spanned by two rays.
    pub fn sector(a: AlgebraVector, b: AlgebraVector) -> Result<Self> {
        let cone = PolyhedralCone::new(vec![a, b])?;
        if cone.generators.len() != 2 {
            return Err(Error::Construction("sector rays must be nonzero".into()));
        }
        Ok(ConeSpec::Sector(cone))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::Lorentz(l) => l.dim,
            ConeSpec::Polyhedral(p) | ConeSpec::Sector(p) => p.dim,
        }
    }

    pub(crate) fn polyhedral_part(&self) -> Option<&PolyhedralCone> {
        match self {
            ConeSpec::Lorentz(_) => None,
            ConeSpec::Polyhedral(p) | ConeSpec::Sector(p) => Some(p),
        }
    }

    /// Classification relative to the affine hull of `C`, with a band of
    /// width `tol` in the normalized defining inequalities.
    pub fn classify_point(&self, u: &AlgebraVector, tol: f64) -> PointClass {
        if u.dim() != self.dim() || !u.is_finite() {
            return PointClass::Outside;
        }
        match self {
            ConeSpec::Lorentz(l) => {
                let n = u.norm();
                if n == 0.0 {
                    return PointClass::RelativeBoundary;
                }
                let uh = u * (1.0 / n);
                if (0..l.dim).any(|j| !l.on_index(j) && uh[j].abs() > tol) {
                    return PointClass::Outside;
                }
                let q = l.form(&uh) / l.weight_scale();
                if uh[l.axis] < -tol || q < -tol {
                    PointClass::Outside
                } else if q <= tol {
                    PointClass::RelativeBoundary
                } else {
                    PointClass::RelativeInterior
                }
            }
            ConeSpec::Polyhedral(p) | ConeSpec::Sector(p) => p.classify(u, tol),
        }
    }

    pub fn contains(&self, u: &AlgebraVector, tol: f64) -> bool {
        self.classify_point(u, tol) != PointClass::Outside
    }

    /// `true` iff `C ∩ (−C) = {0}`.
    pub fn is_salient(&self) -> bool {
        match self {
            ConeSpec::Lorentz(_) => true,
            ConeSpec::Polyhedral(p) | ConeSpec::Sector(p) => p.is_salient(),
        }
    }

    /// Basis of `span C` (coordinate vectors for Lorentz cones, orthonormal otherwise).
    pub fn span_basis(&self) -> Vec<AlgebraVector> {
        match self {
            ConeSpec::Lorentz(l) => {
                let mut idx: Vec<usize> = std::iter::once(l.axis).chain(l.spatial.iter().copied()).collect();
                idx.sort_unstable();
                idx.into_iter().map(|i| AlgebraVector::basis(l.dim, i)).collect()
            }
            ConeSpec::Polyhedral(p) | ConeSpec::Sector(p) => p.span.clone(),
        }
    }

    pub fn span_dim(&self) -> usize {
        self.span_basis().len()
    }

    /// Orthonormal basis of the annihilator of `span C`.
    pub fn annihilator_basis(&self) -> Vec<AlgebraCovector> {
        let span = orthonormal_basis(&self.span_basis(), 1e-12);
        complement_basis(self.dim(), &span).into_iter().map(|v| AlgebraCovector(v.0)).collect()
    }

    /// Component of `p` that pairs nontrivially with `span C`.
    pub fn restrict(&self, p: &AlgebraCovector) -> AlgebraCovector {
        let span = orthonormal_basis(&self.span_basis(), 1e-12);
        let mut out = AlgebraCovector::zeros(self.dim());
        for q in &span {
            out.0 += &q.0 * q.dot(&p.0);
        }
        out
    }

    /// `p|_C = 0` within `tol` (relative to `|p|`).
    pub fn annihilates(&self, p: &AlgebraCovector, tol: f64) -> bool {
        let n = p.norm();
        n == 0.0 || self.restrict(p).norm() <= tol * n
    }

    pub fn dual_cone(&self) -> Result<DualConeSpec> {
        match self {
            ConeSpec::Lorentz(l) => Ok(DualConeSpec::Lorentz {
                dim: l.dim,
                axis: l.axis,
                spatial: l.spatial.clone(),
                axis_weight: 1.0 / l.axis_weight,
                weights: l.weights.iter().map(|c| 1.0 / c).collect(),
            }),
            ConeSpec::Polyhedral(p) => Ok(DualConeSpec::Halfspaces { dim: p.dim, normals: p.generators.clone(), span: p.span.clone() }),
            ConeSpec::Sector(p) => {
                if !p.is_salient() || p.span.len() != 2 || p.facets.len() != 2 {
                    return Err(Error::Construction("dual of a degenerate sector (rays must be linearly independent)".into()));
                }
                // the dual rays are the outward facet normals, ordered to match the primal rays
                let a = &p.generators[0];
                let ray_a = p.facets.iter().find(|f| (f.dot(&a.0) / a.norm()).abs() <= 1e-9).cloned().expect("facet through first ray");
                let ray_b = p.facets.iter().find(|f| **f != ray_a).cloned().expect("second facet");
                let free = complement_basis(p.dim, &p.span).into_iter().map(|v| AlgebraCovector(v.0)).collect();
                Ok(DualConeSpec::Sector {
                    dim: p.dim,
                    rays: [AlgebraCovector(ray_a.0), AlgebraCovector(ray_b.0)],
                    free,
                    normals: p.generators.clone(),
                    span: p.span.clone(),
                })
            }
        }
    }

    /// Unit vectors spanning `p∨_0 = {u ∈ rb C : ⟨p, u⟩ = 0}` for `p ∈ rb C∨`
    /// not annihilating `C`. Empty when `p` lies in the interior of `C∨`.
    /// Unit rays of `rb C`: the generators, or a grid on the Lorentz boundary.
    pub(crate) fn boundary_rays(&self, resolution: usize) -> Vec<AlgebraVector> {
        match self {
            ConeSpec::Lorentz(l) => sphere_grid(l.spatial.len(), resolution)
                .into_iter()
                .map(|d| {
                    let mut u = AlgebraVector::zeros(l.dim);
                    let mut q = 0.0;
                    for ((&m, &c), x) in l.spatial.iter().zip(&l.weights).zip(&d) {
                        u.0[m] = *x;
                        q += c * x * x;
                    }
                    u.0[l.axis] = (q / l.axis_weight).sqrt();
                    u.normalized()
                })
                .collect(),
            ConeSpec::Polyhedral(pc) | ConeSpec::Sector(pc) => pc.generators.iter().map(|g| g.normalized()).collect(),
        }
    }

    pub fn exposed_rays(&self, p: &AlgebraCovector, tol: f64) -> Vec<AlgebraVector> {
        match self {
            ConeSpec::Lorentz(l) => {
                let mut u = AlgebraVector::zeros(l.dim);
                u.0[l.axis] = -p[l.axis] / l.axis_weight;
                for (&m, &c) in l.spatial.iter().zip(&l.weights) {
                    u.0[m] = p[m] / c;
                }
                if u.norm() == 0.0 {
                    return Vec::new();
                }
                let u = u.normalized();
                if self.classify_point(&u, tol) == PointClass::RelativeBoundary && p.pair(&u).abs() <= tol * p.norm().max(1.0) {
                    vec![u]
                } else {
                    Vec::new()
                }
            }
            ConeSpec::Polyhedral(pc) | ConeSpec::Sector(pc) => {
                let scale = self.restrict(p).norm();
                if scale == 0.0 {
                    return Vec::new();
                }
                pc.generators
                    .iter()
                    .map(|g| g.normalized())
                    .filter(|g| (p.pair(g) / scale).abs() <= tol)
                    .collect()
            }
        }
    }

    /// A unit covector in the interior of `C∨`, lying in the dual of `span C`.
    pub fn dual_interior_direction(&self) -> AlgebraCovector {
        match self {
            ConeSpec::Lorentz(l) => {
                let mut p = AlgebraCovector::zeros(l.dim);
                p.0[l.axis] = -1.0;
                p
            }
            ConeSpec::Polyhedral(pc) | ConeSpec::Sector(pc) => {
                let mut p = AlgebraCovector::zeros(pc.dim);
                for a in &pc.facets {
                    p.0 += &a.0;
                }
                p.normalized()
            }
        }
    }

    /// Compact cross-section of `C` used by the numeric oracles.
    pub fn cross_section(&self) -> CrossSection {
        match self {
            ConeSpec::Lorentz(l) => {
                let mut functional = AlgebraCovector::zeros(l.dim);
                functional.0[l.axis] = 1.0;
                let center = AlgebraVector::basis(l.dim, l.axis);
                let basis = l.spatial.iter().map(|&m| AlgebraVector::basis(l.dim, m)).collect();
                let radius = l.weights.iter().map(|c| (l.axis_weight / c).sqrt()).fold(0.0, f64::max);
                CrossSection { functional, center, basis, radius }
            }
            ConeSpec::Polyhedral(p) | ConeSpec::Sector(p) => {
                let mut f = AlgebraVector::zeros(p.dim);
                for a in &p.facets {
                    f.0 -= &a.0;
                }
                if f.norm() == 0.0 {
                    f = p.generators.iter().fold(AlgebraVector::zeros(p.dim), |acc, g| acc + g.normalized());
                }
                let functional = AlgebraCovector(f.normalized().0);
                let vertices: Vec<AlgebraVector> = p.generators.iter().map(|g| g * (1.0 / functional.pair(g))).collect();
                let mut center = AlgebraVector::zeros(p.dim);
                for v in &vertices {
                    center.0 += &v.0 / vertices.len() as f64;
                }
                // kernel of ℓ inside span C
                let in_plane: Vec<AlgebraVector> = p
                    .span
                    .iter()
                    .map(|q| {
                        let proj = functional.dot(&q.0);
                        AlgebraVector(&q.0 - &functional.0 * proj)
                    })
                    .collect();
                let basis = orthonormal_basis(&in_plane, 1e-10);
                let radius = vertices.iter().map(|v| (v - &center).norm()).fold(0.0, f64::max);
                CrossSection { functional, center, basis, radius }
            }
        }
    }

    /// A random point of `ri C`.
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> AlgebraVector {
        match self {
            ConeSpec::Lorentz(l) => {
                let s = rng.random_range(0.5..2.0);
                let y = random_in_ball(rng, l.spatial.len(), 0.9);
                let mut u = AlgebraVector::zeros(l.dim);
                u.0[l.axis] = s;
                for ((&m, &c), ym) in l.spatial.iter().zip(&l.weights).zip(y) {
                    u.0[m] = s * ym * (l.axis_weight / c).sqrt();
                }
                u
            }
            ConeSpec::Polyhedral(p) | ConeSpec::Sector(p) => {
                let mut u = AlgebraVector::zeros(p.dim);
                for g in &p.generators {
                    u.0 += &g.0 * rng.random_range(0.1..1.0);
                }
                u
            }
        }
    }

    /// A random nonzero point of `rb C`, if `rb C ≠ {0}`.
    pub fn sample_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<AlgebraVector> {
        match self {
            ConeSpec::Lorentz(l) => {
                if l.spatial.is_empty() {
                    return None;
                }
                let s = rng.random_range(0.5..2.0);
                let y = random_unit(rng, l.spatial.len());
                let mut u = AlgebraVector::zeros(l.dim);
                u.0[l.axis] = s;
                for ((&m, &c), ym) in l.spatial.iter().zip(&l.weights).zip(y) {
                    u.0[m] = s * ym * (l.axis_weight / c).sqrt();
                }
                Some(u)
            }
            ConeSpec::Polyhedral(p) | ConeSpec::Sector(p) => {
                if p.facets.is_empty() {
                    return None;
                }
                let f = &p.facets[rng.random_range(0..p.facets.len())];
                let mut u = AlgebraVector::zeros(p.dim);
                for g in p.generators.iter().filter(|g| (f.dot(&g.0) / g.norm()).abs() <= 1e-9) {
                    u.0 += &g.0 * rng.random_range(0.1..1.0);
                }
                Some(u)
            }
        }
    }

    /// A random point of the interior of `C∨`, including a random annihilator component.
    pub fn sample_dual_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> AlgebraCovector {
        let mut p = match self {
            ConeSpec::Lorentz(l) => {
                let s = rng.random_range(0.5..2.0);
                let y = random_in_ball(rng, l.spatial.len(), 0.9);
                let mut p = AlgebraCovector::zeros(l.dim);
                p.0[l.axis] = -s;
                for ((&m, &c), ym) in l.spatial.iter().zip(&l.weights).zip(y) {
                    p.0[m] = s * ym * (c / l.axis_weight).sqrt();
                }
                p
            }
            ConeSpec::Polyhedral(pc) | ConeSpec::Sector(pc) => {
                let mut p = AlgebraCovector::zeros(pc.dim);
                for a in &pc.facets {
                    p.0 += &a.0 * rng.random_range(0.1..1.0);
                }
                p
            }
        };
        for q in self.annihilator_basis() {
            p.0 += &q.0 * rng.random_range(-1.0..1.0);
        }
        p
    }

    /// A random point of `rb C∨` that does not annihilate `C`.
    pub fn sample_dual_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<AlgebraCovector> {
        let mut p = match self {
            ConeSpec::Lorentz(l) => {
                if l.spatial.is_empty() {
                    return None;
                }
                let s = rng.random_range(0.5..2.0);
                let y = random_unit(rng, l.spatial.len());
                let mut p = AlgebraCovector::zeros(l.dim);
                p.0[l.axis] = -s;
                for ((&m, &c), ym) in l.spatial.iter().zip(&l.weights).zip(y) {
                    p.0[m] = s * ym * (c / l.axis_weight).sqrt();
                }
                p
            }
            ConeSpec::Polyhedral(pc) | ConeSpec::Sector(pc) => {
                let extreme: Vec<(&AlgebraVector, Vec<&AlgebraVector>)> =
                    pc.generators.iter().map(|g| (g, pc.facets_through(g))).filter(|(_, f)| !f.is_empty()).collect();
                if extreme.is_empty() {
                    return None;
                }
                let (_, facets) = &extreme[rng.random_range(0..extreme.len())];
                let mut p = AlgebraCovector::zeros(pc.dim);
                for a in facets {
                    p.0 += &a.0 * rng.random_range(0.1..1.0);
                }
                p
            }
        };
        for q in self.annihilator_basis() {
            p.0 += &q.0 * rng.random_range(-1.0..1.0);
        }
        Some(p)
    }

    /// Deterministic directions covering the part of `rb C∨` that does not
    /// annihilate `C` (restricted to `span C`), at the given resolution.
    pub fn dual_boundary_directions(&self, resolution: usize) -> Vec<AlgebraCovector> {
        match self {
            ConeSpec::Lorentz(l) => {
                let r = l.spatial.len();
                if r == 0 {
                    return Vec::new();
                }
                sphere_grid(r, resolution)
                    .into_iter()
                    .map(|y| {
                        let mut p = AlgebraCovector::zeros(l.dim);
                        p.0[l.axis] = -1.0;
                        for ((&m, &c), ym) in l.spatial.iter().zip(&l.weights).zip(y) {
                            p.0[m] = ym * (c / l.axis_weight).sqrt();
                        }
                        p
                    })
                    .collect()
            }
            ConeSpec::Polyhedral(pc) | ConeSpec::Sector(pc) => {
                let mut out = Vec::new();
                for g in &pc.generators {
                    let facets = pc.facets_through(g);
                    if facets.is_empty() {
                        continue;
                    }
                    if facets.len() == 1 {
                        out.push(AlgebraCovector(facets[0].0.clone()));
                        continue;
                    }
                    // convex combinations of pairs of facets through g
                    let steps = resolution.max(2);
                    for (i, a) in facets.iter().enumerate() {
                        for b in facets.iter().skip(i + 1) {
                            for s in 0..=steps {
                                let t = s as f64 / steps as f64;
                                out.push(AlgebraCovector(&a.0 * (1.0 - t) + &b.0 * t));
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

impl DualConeSpec {
    pub fn dim(&self) -> usize {
        match self {
            DualConeSpec::Lorentz { dim, .. } | DualConeSpec::Halfspaces { dim, .. } | DualConeSpec::Sector { dim, .. } => *dim,
        }
    }

    /// Classification in `g*`; `C∨` is full-dimensional for salient `C`, so
    /// its relative interior is its interior. Annihilator points are boundary.
    pub fn classify(&self, p: &AlgebraCovector, tol: f64) -> PointClass {
        if p.dim() != self.dim() || !p.is_finite() {
            return PointClass::Outside;
        }
        match self {
            DualConeSpec::Lorentz { axis, spatial, axis_weight, weights, .. } => {
                let mut nr2 = p[*axis] * p[*axis];
                for &m in spatial {
                    nr2 += p[m] * p[m];
                }
                let nr = nr2.sqrt();
                if nr <= VERTEX_TOL * p.norm() {
                    return PointClass::RelativeBoundary;
                }
                let b = p[*axis] / nr;
                let scale = weights.iter().copied().fold(*axis_weight, f64::max);
                let mut q = axis_weight * b * b;
                for (&m, &c) in spatial.iter().zip(weights) {
                    q -= c * (p[m] / nr) * (p[m] / nr);
                }
                let q = q / scale;
                if b > tol || q < -tol {
                    PointClass::Outside
                } else if q <= tol {
                    PointClass::RelativeBoundary
                } else {
                    PointClass::RelativeInterior
                }
            }
            DualConeSpec::Halfspaces { normals, span, .. } | DualConeSpec::Sector { normals, span, .. } => {
                let mut restricted = 0.0;
                for q in span {
                    let d = q.dot(&p.0);
                    restricted += d * d;
                }
                let scale = restricted.sqrt();
                if scale <= VERTEX_TOL * p.norm() {
                    return PointClass::RelativeBoundary;
                }
                let worst = normals.iter().map(|g| p.pair(g) / (g.norm() * scale)).fold(f64::NEG_INFINITY, f64::max);
                if worst > tol {
                    PointClass::Outside
                } else if worst >= -tol {
                    PointClass::RelativeBoundary
                } else {
                    PointClass::RelativeInterior
                }
            }
        }
    }

    pub fn contains(&self, p: &AlgebraCovector, tol: f64) -> bool {
        self.classify(p, tol) != PointClass::Outside
    }
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R, r: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn random_in_ball<R: Rng + ?Sized>(rng: &mut R, r: usize, radius: f64) -> Vec<f64> {
    if r == 0 {
        return Vec::new();
    }
    let dir = random_unit(rng, r);
    let rho = radius * rng.random_range(0.0f64..1.0).powf(1.0 / r as f64);
    dir.into_iter().map(|x| x * rho).collect()
}

/// Roughly uniform grid of unit vectors in `R^r`.
pub(crate) fn sphere_grid(r: usize, resolution: usize) -> Vec<Vec<f64>> {
    match r {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..resolution.max(4))
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / resolution.max(4) as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            // normalized points of a cube surface grid
            let n = resolution.max(2);
            let mut out = Vec::new();
            let steps: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect();
            let mut idx = vec![0usize; r];
            loop {
                let v: Vec<f64> = idx.iter().map(|&i| steps[i]).collect();
                if v.iter().any(|x| x.abs() == 1.0) {
                    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    out.push(v.into_iter().map(|x| x / nrm).collect());
                }
                let mut k = 0;
                while k < r {
                    idx[k] += 1;
                    if idx[k] <= n {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == r {
                    break;
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn v(x: &[f64]) -> AlgebraVector {
        AlgebraVector::new(x.to_vec())
    }
    fn p(x: &[f64]) -> AlgebraCovector {
        AlgebraCovector::new(x.to_vec())
    }
    fn quadrant3() -> ConeSpec {
        ConeSpec::sector(v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])).unwrap()
    }

    #[test]
    fn lorentz_classification() {
        let c = ConeSpec::lorentz_unit(3, 0, vec![1, 2]).unwrap();
        assert_eq!(c.classify_point(&v(&[1.0, 0.0, 0.0]), 1e-9), PointClass::RelativeInterior);
        assert_eq!(c.classify_point(&v(&[1.0, 1.0, 0.0]), 1e-9), PointClass::RelativeBoundary);
        assert_eq!(c.classify_point(&v(&[1.0, 1.0, 0.1]), 1e-9), PointClass::Outside);
        assert_eq!(c.classify_point(&v(&[-1.0, 0.0, 0.0]), 1e-9), PointClass::Outside);
        assert_eq!(c.classify_point(&v(&[0.0, 0.0, 0.0]), 1e-9), PointClass::RelativeBoundary);
    }

    #[test]
    fn sector_classification_is_relative_to_its_plane() {
        let c = quadrant3();
        assert_eq!(c.classify_point(&v(&[1.0, 1.0, 0.0]), 1e-9), PointClass::RelativeInterior);
        assert_eq!(c.classify_point(&v(&[1.0, 0.0, 0.0]), 1e-9), PointClass::RelativeBoundary);
        assert_eq!(c.classify_point(&v(&[1.0, 1.0, 0.5]), 1e-9), PointClass::Outside);
        assert_eq!(c.classify_point(&v(&[-1.0, 1.0, 0.0]), 1e-9), PointClass::Outside);
    }

    #[test]
    fn lorentz_dual_is_reciprocal_weighted() {
        let c = ConeSpec::lorentz(3, 0, vec![1, 2], 4.0, vec![1.0, 9.0]).unwrap();
        let d = c.dual_cone().unwrap();
        match &d {
            DualConeSpec::Lorentz { axis_weight, weights, .. } => {
                assert_eq!(*axis_weight, 0.25);
                assert_eq!(weights, &vec![1.0, 1.0 / 9.0]);
            }
            _ => panic!("expected Lorentz dual"),
        }
        // unit weights: h0² ≥ h1² + h2², h0 ≤ 0
        let c = ConeSpec::lorentz_unit(3, 0, vec![1, 2]).unwrap();
        let d = c.dual_cone().unwrap();
        assert_eq!(d.classify(&p(&[-1.0, 0.3, 0.4]), 1e-9), PointClass::RelativeInterior);
        assert_eq!(d.classify(&p(&[-1.0, 0.6, 0.8]), 1e-9), PointClass::RelativeBoundary);
        assert_eq!(d.classify(&p(&[1.0, 0.0, 0.0]), 1e-9), PointClass::Outside);
    }

    #[test]
    fn quadrant_dual_leaves_third_coordinate_free() {
        let d = quadrant3().dual_cone().unwrap();
        assert_eq!(d.classify(&p(&[-1.0, -2.0, 7.0]), 1e-9), PointClass::RelativeInterior);
        assert_eq!(d.classify(&p(&[0.0, -2.0, -3.0]), 1e-9), PointClass::RelativeBoundary);
        assert_eq!(d.classify(&p(&[0.0, 0.0, 1.0]), 1e-9), PointClass::RelativeBoundary);
        assert_eq!(d.classify(&p(&[0.1, -2.0, 0.0]), 1e-9), PointClass::Outside);
    }

    #[test]
    fn planar_sector_dual_rays() {
        let c = ConeSpec::sector(v(&[1.0, 1.0]), v(&[-1.0, 1.0])).unwrap();
        let DualConeSpec::Sector { rays, free, .. } = c.dual_cone().unwrap() else { panic!() };
        assert!(free.is_empty());
        let s = 1.0 / 2f64.sqrt();
        let mut got: Vec<Vec<f64>> = rays.iter().map(|r| r.normalized().to_vec()).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [vec![-s, -s], vec![s, -s]];
        for (g, w) in got.iter().zip(&want) {
            assert!((g[0] - w[0]).abs() < 1e-12 && (g[1] - w[1]).abs() < 1e-12, "{got:?}");
        }
    }

    /// Independent oracle: a dense grid of cone points decides membership of
    /// the dual sector by sign checks alone.
    #[test]
    fn planar_sector_dual_matches_grid_oracle() {
        let c = ConeSpec::sector(v(&[1.0, 1.0]), v(&[-1.0, 1.0])).unwrap();
        let d = c.dual_cone().unwrap();
        let cone_pts: Vec<AlgebraVector> = (0..=400)
            .map(|k| {
                let x = -1.0 + 2.0 * k as f64 / 400.0;
                v(&[x, 1.0])
            })
            .collect();
        for i in 0..60 {
            let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.37) / 60.0;
            let q = p(&[t.cos(), t.sin()]);
            let oracle = cone_pts.iter().all(|u| q.pair(u) <= 1e-12);
            assert_eq!(d.contains(&q, 1e-9), oracle, "angle {t}");
        }
    }

    #[test]
    fn salience() {
        assert!(ConeSpec::lorentz_unit(3, 0, vec![1, 2]).unwrap().is_salient());
        assert!(quadrant3().is_salient());
        assert!(!ConeSpec::polyhedral(vec![v(&[1.0, 0.0]), v(&[-1.0, 0.0])]).unwrap().is_salient());
        // half-plane contains a line
        assert!(!ConeSpec::polyhedral(vec![v(&[1.0, 0.0]), v(&[-1.0, 0.0]), v(&[0.0, 1.0])]).unwrap().is_salient());
        // pyramid over a square
        let pyramid = ConeSpec::polyhedral(vec![
            v(&[1.0, 1.0, 1.0]),
            v(&[1.0, -1.0, 1.0]),
            v(&[-1.0, 1.0, 1.0]),
            v(&[-1.0, -1.0, 1.0]),
        ])
        .unwrap();
        assert!(pyramid.is_salient());
        assert_eq!(pyramid.polyhedral_part().unwrap().facets().len(), 4);
        // a ray
        assert!(ConeSpec::polyhedral(vec![v(&[0.0, 2.0, 0.0])]).unwrap().is_salient());
    }

    #[test]
    fn span_bases() {
        assert_eq!(ConeSpec::lorentz_unit(3, 0, vec![1, 2]).unwrap().span_basis().len(), 3);
        let b = quadrant3().span_basis();
        assert_eq!(b, vec![AlgebraVector::basis(3, 0), AlgebraVector::basis(3, 1)]);
        let carnot = ConeSpec::lorentz_unit(8, 0, vec![1]).unwrap();
        assert_eq!(carnot.span_basis(), vec![AlgebraVector::basis(8, 0), AlgebraVector::basis(8, 1)]);
        assert_eq!(carnot.annihilator_basis().len(), 6);
    }

    #[test]
    fn scale_invariant_classification() {
        let cones = [ConeSpec::lorentz_unit(3, 0, vec![1, 2]).unwrap(), quadrant3()];
        let mut rng = StdRng::seed_from_u64(7);
        for c in &cones {
            for _ in 0..200 {
                let u = AlgebraVector::new((0..3).map(|_| rng.random_range(-1.0..1.0)).collect());
                assert_eq!(c.classify_point(&u, 1e-9), c.classify_point(&(&u * 2.0), 1e-9));
                assert_eq!(c.classify_point(&u, 1e-9), c.classify_point(&(&u * 1e-6), 1e-9));
            }
        }
    }

    #[test]
    fn samplers_land_where_promised() {
        let cones = [
            ConeSpec::lorentz(4, 1, vec![0, 3], 2.0, vec![1.0, 5.0]).unwrap(),
            quadrant3(),
            ConeSpec::polyhedral(vec![v(&[1.0, 1.0, 1.0]), v(&[1.0, -1.0, 1.0]), v(&[-1.0, 0.0, 1.0])]).unwrap(),
        ];
        let mut rng = StdRng::seed_from_u64(11);
        for c in &cones {
            let d = c.dual_cone().unwrap();
            for _ in 0..100 {
                assert_eq!(c.classify_point(&c.sample_interior(&mut rng), 1e-9), PointClass::RelativeInterior);
                assert_eq!(c.classify_point(&c.sample_boundary(&mut rng).unwrap(), 1e-9), PointClass::RelativeBoundary);
                assert_eq!(d.classify(&c.sample_dual_interior(&mut rng), 1e-9), PointClass::RelativeInterior);
                let q = c.sample_dual_boundary(&mut rng).unwrap();
                assert_eq!(d.classify(&q, 1e-9), PointClass::RelativeBoundary);
                assert!(!c.annihilates(&q, 1e-9));
            }
        }
    }

    #[test]
    fn exposed_rays() {
        let c = ConeSpec::lorentz_unit(3, 0, vec![1, 2]).unwrap();
        let rays = c.exposed_rays(&p(&[-1.0, 1.0, 0.0]), 1e-9);
        assert_eq!(rays.len(), 1);
        let s = 1.0 / 2f64.sqrt();
        assert!((rays[0][0] - s).abs() < 1e-12 && (rays[0][1] - s).abs() < 1e-12);
        assert!(c.exposed_rays(&p(&[-1.0, 0.0, 0.0]), 1e-9).is_empty());
        let q = quadrant3();
        assert_eq!(q.exposed_rays(&p(&[0.0, -2.0, 1.0]), 1e-9), vec![AlgebraVector::basis(3, 0)]);
    }

    #[test]
    fn cross_sections_contain_their_center() {
        for c in [ConeSpec::lorentz_unit(3, 0, vec![1, 2]).unwrap(), quadrant3()] {
            let k = c.cross_section();
            assert_eq!(c.classify_point(&k.center, 1e-9), PointClass::RelativeInterior);
            assert!((k.functional.pair(&k.center) - 1.0).abs() < 1e-12);
            assert_eq!(k.basis.len(), c.span_dim() - 1);
        }
    }
}
