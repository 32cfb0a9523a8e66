//! Group models and horizontal reconstruction `ġ = g·u`.

use crate::error::{check_dim, Error, Result};
use crate::lie::LieAlgebraSpec;
use crate::{AlgebraCovector, AlgebraVector};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// How a matrix element is reported as coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixChart {
    /// Exponential coordinates of the first kind.
    Exponential,
    /// Heisenberg chart `(a, b, c)` with `c = 2 m13 − ab`, so that
    /// `(a1,b1,c1)(a2,b2,c2) = (a1+a2, b1+b2, c1+c2 + a1 b2 − a2 b1)`.
    HeisenbergLaw,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupModel {
    /// `R^n` with addition.
    Abelian { dim: usize },
    /// Faithful strictly-upper-triangular representation.
    MatrixNilpotent { algebra: LieAlgebraSpec, generators: Vec<DMatrix<f64>>, chart: MatrixChart },
    /// Exponential coordinates, product by the BCH series cut at the nilpotency step.
    ExpCoordinates { algebra: LieAlgebraSpec, step: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    Coordinates(Vec<f64>),
    Matrix(DMatrix<f64>),
}

impl GroupModel {
    pub fn abelian(dim: usize) -> Self {
        GroupModel::Abelian { dim }
    }

    /// Heisenberg group as 3×3 unipotent matrices, `e0 = E12, e1 = E23, e2 = E13`.
    pub fn heisenberg_matrix() -> Self {
        let unit = |r: usize, c: usize| {
            let mut m = DMatrix::zeros(3, 3);
            m[(r, c)] = 1.0;
            m
        };
        GroupModel::MatrixNilpotent {
            algebra: LieAlgebraSpec::heisenberg(),
            generators: vec![unit(0, 1), unit(1, 2), unit(0, 2)],
            chart: MatrixChart::HeisenbergLaw,
        }
    }

    /// Matrix model from a representation of `algebra`; checks the bracket relations.
    pub fn matrix(algebra: LieAlgebraSpec, generators: Vec<DMatrix<f64>>, chart: MatrixChart) -> Result<Self> {
        check_dim(algebra.dim(), generators.len())?;
        let size = generators.first().map(|m| m.nrows()).unwrap_or(0);
        for m in &generators {
            if m.nrows() != size || m.ncols() != size {
                return Err(Error::Construction("representation matrices must be square and of equal size".into()));
            }
            if (0..size).any(|r| (0..=r).any(|c| m[(r, c)] != 0.0)) {
                return Err(Error::Construction("representation matrices must be strictly upper triangular".into()));
            }
        }
        let n = algebra.dim();
        for i in 0..n {
            for j in 0..n {
                let lhs = &generators[i] * &generators[j] - &generators[j] * &generators[i];
                let mut rhs = DMatrix::zeros(size, size);
                for (k, g) in generators.iter().enumerate() {
                    rhs += g * algebra.constant(k, i, j);
                }
                if (lhs - rhs).abs().max() > 1e-12 {
                    return Err(Error::Construction(format!("matrices do not represent [e{i}, e{j}]")));
                }
            }
        }
        if chart == MatrixChart::HeisenbergLaw && (n != 3 || size != 3) {
            return Err(Error::Construction("the Heisenberg chart needs the 3×3 Heisenberg model".into()));
        }
        Ok(GroupModel::MatrixNilpotent { algebra, generators, chart })
    }

    pub fn exp_coordinates(algebra: LieAlgebraSpec) -> Result<Self> {
        match algebra.nilpotency_step() {
            Some(step) if step <= 4 => Ok(GroupModel::ExpCoordinates { algebra, step }),
            Some(step) => Err(Error::Unsupported(format!("BCH product implemented up to step 4, algebra has step {step}"))),
            None => Err(Error::Unsupported("exponential coordinates need a nilpotent algebra; supply a matrix model".into())),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupModel::Abelian { dim } => *dim,
            GroupModel::MatrixNilpotent { generators, .. } => generators.len(),
            GroupModel::ExpCoordinates { algebra, .. } => algebra.dim(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupModel::Abelian { .. } => "abelian",
            GroupModel::MatrixNilpotent { .. } => "matrix_nilpotent",
            GroupModel::ExpCoordinates { .. } => "exp_coordinates",
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupModel::MatrixNilpotent { generators, .. } => {
                let s = generators.first().map(|m| m.nrows()).unwrap_or(0);
                GroupElement::Matrix(DMatrix::identity(s, s))
            }
            _ => GroupElement::Coordinates(vec![0.0; self.dim()]),
        }
    }

    fn matrix_of(&self, u: &AlgebraVector) -> DMatrix<f64> {
        let GroupModel::MatrixNilpotent { generators, .. } = self else { unreachable!() };
        let s = generators[0].nrows();
        let mut m = DMatrix::zeros(s, s);
        for (g, &x) in generators.iter().zip(u.iter()) {
            m += g * x;
        }
        m
    }

    pub fn exp(&self, u: &AlgebraVector) -> GroupElement {
        match self {
            GroupModel::MatrixNilpotent { .. } => {
                let x = self.matrix_of(u);
                let s = x.nrows();
                let mut out = DMatrix::identity(s, s);
                let mut term = DMatrix::identity(s, s);
                for k in 1..s {
                    term = &term * &x / k as f64;
                    out += &term;
                }
                GroupElement::Matrix(out)
            }
            _ => GroupElement::Coordinates(u.to_vec()),
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (GroupModel::Abelian { .. }, GroupElement::Coordinates(x), GroupElement::Coordinates(y)) => {
                GroupElement::Coordinates(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupModel::MatrixNilpotent { .. }, GroupElement::Matrix(x), GroupElement::Matrix(y)) => GroupElement::Matrix(x * y),
            (GroupModel::ExpCoordinates { algebra, step }, GroupElement::Coordinates(x), GroupElement::Coordinates(y)) => {
                let z = bch(algebra, *step, &AlgebraVector::new(x.clone()), &AlgebraVector::new(y.clone()));
                GroupElement::Coordinates(z.to_vec())
            }
            _ => panic!("group element does not belong to the {} model", self.name()),
        }
    }

    /// `g · exp(dt u)`.
    pub fn step(&self, g: &GroupElement, u: &AlgebraVector, dt: f64) -> GroupElement {
        self.multiply(g, &self.exp(&(u * dt)))
    }

    /// Exponential coordinates of `g`.
    pub fn log(&self, g: &GroupElement) -> AlgebraVector {
        match (self, g) {
            (GroupModel::MatrixNilpotent { generators, .. }, GroupElement::Matrix(m)) => {
                let s = m.nrows();
                let n = m - DMatrix::identity(s, s);
                let mut log = DMatrix::zeros(s, s);
                let mut power = DMatrix::identity(s, s);
                for k in 1..s {
                    power = &power * &n;
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    log += &power * (sign / k as f64);
                }
                // solve Σ x_i G_i = log by least squares on the entries
                let a = DMatrix::from_fn(s * s, generators.len(), |r, c| generators[c][(r / s, r % s)]);
                let b = DMatrix::from_fn(s * s, 1, |r, _| log[(r / s, r % s)]);
                let x = a.svd(true, true).solve(&b, 1e-14).expect("least squares");
                AlgebraVector::new(x.iter().copied().collect())
            }
            (_, GroupElement::Coordinates(x)) => AlgebraVector::new(x.clone()),
            _ => panic!("group element does not belong to the {} model", self.name()),
        }
    }

    /// Coordinates in the model's canonical chart.
    pub fn coordinates(&self, g: &GroupElement) -> Vec<f64> {
        match (self, g) {
            (GroupModel::MatrixNilpotent { chart: MatrixChart::HeisenbergLaw, .. }, GroupElement::Matrix(m)) => {
                let (a, b) = (m[(0, 1)], m[(1, 2)]);
                vec![a, b, 2.0 * m[(0, 2)] - a * b]
            }
            _ => self.log(g).to_vec(),
        }
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn from_coordinates(&self, c: &[f64]) -> Result<GroupElement> {
        check_dim(self.dim(), c.len())?;
        Ok(match self {
            GroupModel::MatrixNilpotent { chart: MatrixChart::HeisenbergLaw, .. } => {
                let mut m = DMatrix::identity(3, 3);
                m[(0, 1)] = c[0];
                m[(1, 2)] = c[1];
                m[(0, 2)] = 0.5 * (c[2] + c[0] * c[1]);
                GroupElement::Matrix(m)
            }
            _ => self.exp(&AlgebraVector::new(c.to_vec())),
        })
    }

    /// The algebra the model is built on, if it carries one.
    pub fn algebra(&self) -> Option<&LieAlgebraSpec> {
        match self {
            GroupModel::Abelian { .. } => None,
            GroupModel::MatrixNilpotent { algebra, .. } | GroupModel::ExpCoordinates { algebra, .. } => Some(algebra),
        }
    }
}

/// Baker–Campbell–Hausdorff product, exact for nilpotency step `≤ 4`.
pub(crate) fn bch(a: &LieAlgebraSpec, step: usize, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
    let mut z = x + y;
    if step >= 2 {
        let xy = a.bracket_unchecked(x, y);
        z.0 += &xy.0 * 0.5;
        if step >= 3 {
            let xxy = a.bracket_unchecked(x, &xy);
            let yyx = a.bracket_unchecked(y, &(-xy.clone()));
            z.0 += (&xxy.0 + &yyx.0) / 12.0;
            if step >= 4 {
                let yxxy = a.bracket_unchecked(y, &xxy);
                z.0 -= &yxxy.0 / 24.0;
            }
        }
    }
    z
}

/// `dexp⁻¹_{−θ}(a) = a + ½[θ, a] + 1/12 [θ, [θ, a]]`, the truncation used by RKMK4
/// for left-invariant equations `ġ = g·u`.
pub fn dexp_inv(algebra: &LieAlgebraSpec, theta: &AlgebraVector, a: &AlgebraVector) -> AlgebraVector {
    let ta = algebra.bracket_unchecked(theta, a);
    let tta = algebra.bracket_unchecked(theta, &ta);
    AlgebraVector(&a.0 + &ta.0 * 0.5 + &tta.0 / 12.0)
}

/// Closed-form corner trajectory `exp(t(X1+X2))` for `t ≤ t̄`, then
/// `exp(t̄(X1+X2))·exp((t−t̄)k(X1−X2))`, sampled every `dt` on `[0, T]`.
pub fn corner_trajectory(gm: &GroupModel, t_bar: f64, k: f64, t_end: f64, dt: f64) -> Result<Vec<(f64, GroupElement)>> {
    if !(0.0..=t_end).contains(&t_bar) || !(k > 0.0) || !(dt > 0.0) {
        return Err(Error::Input("corner trajectory needs 0 ≤ t̄ ≤ T, k > 0, dt > 0".into()));
    }
    let n = gm.dim();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: n });
    }
    let mut plus = AlgebraVector::zeros(n);
    plus.0[0] = 1.0;
    plus.0[1] = 1.0;
    let mut minus = AlgebraVector::zeros(n);
    minus.0[0] = k;
    minus.0[1] = -k;
    let samples = (t_end / dt).round() as usize;
    let corner = gm.exp(&(&plus * t_bar));
    Ok((0..=samples)
        .map(|i| {
            let t = i as f64 * dt;
            let g = if t <= t_bar { gm.exp(&(&plus * t)) } else { gm.multiply(&corner, &gm.exp(&(&minus * (t - t_bar)))) };
            (t, g)
        })
        .collect())
}

/// Contact test for a left-invariant 2-plane distribution in a 3-dimensional algebra:
/// `⟨ω, [v1, v2]⟩ ≠ 0` for the annihilator `ω`.
pub fn contact_test(algebra: &LieAlgebraSpec, dist_basis: &[AlgebraVector]) -> Result<bool> {
    if algebra.dim() != 3 {
        return Err(Error::Unsupported(format!("contact test is defined for 3-dimensional algebras, got {}", algebra.dim())));
    }
    if dist_basis.len() != 2 {
        return Err(Error::Input(format!("distribution needs exactly 2 basis vectors, got {}", dist_basis.len())));
    }
    let (v1, v2) = (&dist_basis[0], &dist_basis[1]);
    check_dim(3, v1.dim())?;
    check_dim(3, v2.dim())?;
    let omega = AlgebraCovector::new(vec![v1[1] * v2[2] - v1[2] * v2[1], v1[2] * v2[0] - v1[0] * v2[2], v1[0] * v2[1] - v1[1] * v2[0]]);
    let scale = v1.norm() * v2.norm();
    if omega.norm() <= 1e-12 * scale {
        return Err(Error::Input("distribution basis vectors are parallel".into()));
    }
    let br = algebra.bracket(v1, v2)?;
    Ok(omega.pair(&br).abs() > 1e-12 * omega.norm() * scale)
}
