//! Lie algebras given by structure constants.
//!
//! Conventions: `[e_i, e_j] = Σ_k c[k][i][j] e_k` and the Lie-Poisson bracket
//! on `g*` is `{h_i, h_j}(h) = ⟨h, [e_i, e_j]⟩`. For a constant control `u` the
//! conjugate subsystem is `ḣ_i = {H_u, h_i} = ⟨h, [u, e_i]⟩`, which yields
//! `ḣ_1 = −h_3 u_2, ḣ_2 = h_3 u_1` on the Heisenberg algebra with `[e_1, e_2] = e_3`.
//!
//! Indices are 0-based throughout the API.

use crate::error::{check_dim, Error, Result};
use crate::{AlgebraCovector, AlgebraVector};
use std::fmt;

/// Tolerance for the Jacobi identity, per entry.
pub const JACOBI_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraSpec {
    dim: usize,
    /// Dense `c[k][i][j]`, row-major in `(k, i, j)`.
    constants: Vec<f64>,
    labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Antisymmetry { k: usize, i: usize, j: usize, residual: f64 },
    Jacobi { i: usize, j: usize, k: usize, l: usize, residual: f64 },
    NonFinite { k: usize, i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { k, i, j, residual } => {
                write!(f, "antisymmetry violated at c[{k}][{i}][{j}] (residual {residual:e})")
            }
            Violation::Jacobi { i, j, k, l, residual } => write!(
                f,
                "Jacobi identity violated for (e{i}, e{j}, e{k}), component {l} (residual {residual:e})"
            ),
            Violation::NonFinite { k, i, j } => write!(f, "non-finite constant c[{k}][{i}][{j}]"),
        }
    }
}

impl LieAlgebraSpec {
    /// Builds a spec from a dense `c[k][i][j]` array, stored as is.
    /// Empty `labels` means `e0, e1, …`.
    pub fn from_dense(dim: usize, constants: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Construction("algebra dimension must be positive".into()));
        }
        check_dim(dim * dim * dim, constants.len())?;
        let labels = if labels.is_empty() { default_labels("e", dim, 0) } else { labels };
        check_dim(dim, labels.len())?;
        Ok(Self { dim, constants, labels })
    }

    /// Builds a spec from triples `(i, j, k, value)` meaning that `[e_i, e_j]`
    /// has `e_k`-coefficient `value`. The antisymmetric partner is filled in.
    pub fn from_brackets(dim: usize, labels: Vec<String>, brackets: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut spec = Self::from_dense(dim, vec![0.0; dim * dim * dim], labels)?;
        let mut set = vec![false; dim * dim * dim];
        for (n, &(i, j, k, value)) in brackets.iter().enumerate() {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Input(format!("bracket #{n} ({i}, {j}, {k}) has an index out of range for dim {dim}")));
            }
            if !value.is_finite() {
                return Err(Error::Input(format!("bracket #{n} has a non-finite value")));
            }
            if i == j {
                if value != 0.0 {
                    return Err(Error::Input(format!("bracket #{n}: [e{i}, e{i}] must vanish")));
                }
                continue;
            }
            let a = spec.index(k, i, j);
            let b = spec.index(k, j, i);
            if (set[a] && spec.constants[a] != value) || (set[b] && spec.constants[b] != -value) {
                return Err(Error::Input(format!("bracket #{n} conflicts with an earlier entry for [e{i}, e{j}]")));
            }
            spec.constants[a] = value;
            spec.constants[b] = -value;
            set[a] = true;
            set[b] = true;
        }
        Ok(spec)
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_brackets(dim, default_labels("e", dim, 0), &[]).expect("abelian algebra is valid")
    }

    /// Heisenberg algebra with `[e_1, e_2] = e_3` (0-based: `[e0, e1] = e2`).
    pub fn heisenberg() -> Self {
        Self::from_brackets(3, default_labels("e", 3, 1), &[(0, 1, 2, 1.0)]).expect("valid")
    }

    /// Free nilpotent algebra of rank 2 and step 4 in the basis `X1, …, X8`.
    pub fn carnot_r2s4() -> Self {
        let brackets = [
            (0, 1, 2, 1.0), // X3 = [X1, X2]
            (0, 2, 3, 1.0), // X4 = [X1, X3]
            (1, 2, 4, 1.0), // X5 = [X2, X3]
            (0, 3, 5, 1.0), // X6 = [X1, X4]
            (0, 4, 6, 1.0), // X7 = [X1, X5]
            (1, 3, 6, 1.0), //      = [X2, X4]
            (1, 4, 7, 1.0), // X8 = [X2, X5]
        ];
        Self::from_brackets(8, default_labels("X", 8, 1), &brackets).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    fn index(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.dim + i) * self.dim + j
    }

    /// `c[k][i][j]`, the `e_k`-coefficient of `[e_i, e_j]`.
    #[inline]
    pub fn constant(&self, k: usize, i: usize, j: usize) -> f64 {
        self.constants[self.index(k, i, j)]
    }

    /// Nonzero structure constants as `(i, j, k, value)` with `i < j`.
    pub fn brackets(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let c = self.constant(k, i, j);
                    if c != 0.0 {
                        out.push((i, j, k, c));
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, u: &AlgebraVector, v: &AlgebraVector) -> Result<AlgebraVector> {
        check_dim(self.dim, u.dim())?;
        check_dim(self.dim, v.dim())?;
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &AlgebraVector, v: &AlgebraVector) -> AlgebraVector {
        let n = self.dim;
        let mut out = AlgebraVector::zeros(n);
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = u[i] * v[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out.0[k] += self.constant(k, i, j) * w;
                }
            }
        }
        out
    }

    /// Vector field of the conjugate subsystem for a constant control:
    /// `ḣ_i = Σ_j u_j Σ_k c[k][j][i] h_k`.
    pub fn poisson_rhs(&self, h: &AlgebraCovector, u: &AlgebraVector) -> Result<AlgebraCovector> {
        check_dim(self.dim, h.dim())?;
        check_dim(self.dim, u.dim())?;
        Ok(self.poisson_rhs_unchecked(h, u))
    }

    pub(crate) fn poisson_rhs_unchecked(&self, h: &AlgebraCovector, u: &AlgebraVector) -> AlgebraCovector {
        let n = self.dim;
        let mut out = AlgebraCovector::zeros(n);
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                if u[j] == 0.0 {
                    continue;
                }
                let mut inner = 0.0;
                for k in 0..n {
                    inner += self.constant(k, j, i) * h[k];
                }
                acc += u[j] * inner;
            }
            out.0[i] = acc;
        }
        out
    }

    /// `{h_i, h_j}(h) = Σ_k c[k][i][j] h_k`.
    pub fn poisson_bracket(&self, h: &AlgebraCovector, i: usize, j: usize) -> f64 {
        (0..self.dim).map(|k| self.constant(k, i, j) * h[k]).sum()
    }

    /// Antisymmetry (exact) and Jacobi (within [`JACOBI_TOL`]) violations.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.dim;
        let mut out = Vec::new();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let c = self.constant(k, i, j);
                    if !c.is_finite() {
                        out.push(Violation::NonFinite { k, i, j });
                        continue;
                    }
                    // each unordered pair reported once
                    if i <= j {
                        let residual = c + self.constant(k, j, i);
                        if residual != 0.0 {
                            out.push(Violation::Antisymmetry { k, i, j, residual });
                        }
                    }
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += self.constant(m, i, j) * self.constant(l, m, k)
                                + self.constant(m, j, k) * self.constant(l, m, i)
                                + self.constant(m, k, i) * self.constant(l, m, j);
                        }
                        if s.abs() > JACOBI_TOL {
                            out.push(Violation::Jacobi { i, j, k, l, residual: s });
                        }
                    }
                }
            }
        }
        out
    }

    /// Length of the lower central series, or `None` if the algebra is not nilpotent.
    pub fn nilpotency_step(&self) -> Option<usize> {
        let n = self.dim;
        let basis: Vec<AlgebraVector> = (0..n).map(|i| AlgebraVector::basis(n, i)).collect();
        let mut current = basis.clone();
        let mut step = 0;
        loop {
            step += 1;
            let mut next = Vec::new();
            for e in &basis {
                for v in &current {
                    next.push(self.bracket_unchecked(e, v));
                }
            }
            let next = orthonormal_basis(&next, 1e-12);
            if next.is_empty() {
                return Some(step);
            }
            if next.len() == current.len() {
                return None;
            }
            current = next;
        }
    }
}

pub(crate) fn default_labels(prefix: &str, dim: usize, offset: usize) -> Vec<String> {
    (0..dim).map(|i| format!("{prefix}{}", i + offset)).collect()
}

/// Modified Gram-Schmidt; vectors with residual norm below `tol` (relative to
/// the largest input norm) are dropped.
pub(crate) fn orthonormal_basis(vectors: &[AlgebraVector], tol: f64) -> Vec<AlgebraVector> {
    let scale = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut out: Vec<AlgebraVector> = Vec::new();
    for v in vectors {
        let mut w = v.0.clone();
        for q in &out {
            let d = q.0.dot(&w);
            w -= &q.0 * d;
        }
        // second pass for stability
        for q in &out {
            let d = q.0.dot(&w);
            w -= &q.0 * d;
        }
        let nrm = w.norm();
        if nrm > tol * scale {
            out.push(AlgebraVector(w / nrm));
        }
    }
    out
}
