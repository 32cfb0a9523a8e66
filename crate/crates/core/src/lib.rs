//! Extremals of left-invariant (sub-)Lorentzian problems on Lie groups.
//!
//! A problem is given by a Lie algebra (structure constants), a closed convex
//! salient cone `C` in the algebra and a continuous antinorm `α` associated
//! with `C`. Admissible curves satisfy `ġ = L_{g*} u` with `u ∈ C \ 0` and the
//! functional `∫ α(u) dt` is maximized.
//!
//! The crate covers:
//!
//! - [`lie`]: structure constants, the bracket and the Lie-Poisson vector field
//!   of the conjugate subsystem;
//! - [`cone`]: membership, relative interior/boundary, salience and negative
//!   dual cones;
//! - [`antinorm`]: antinorms, their dual functions `α∨`, maximizer sets and
//!   axiom checks;
//! - [`group`]: group models (abelian, unipotent matrices, exponential
//!   coordinates with a truncated BCH product);
//! - [`extremal`]: the Pontryagin control law, trajectory integration, causal
//!   classification and abnormal extremals;
//! - [`scenarios`]: built-in problem instances and config-driven custom ones;
//! - [`io`] and [`cli`]: trajectory export (CSV, JSON records, SVG) and the
//!   command-line front end.

pub mod antinorm;
pub mod cli;
pub mod cone;
pub mod config;
pub mod error;
pub mod extremal;
pub mod group;
pub mod io;
pub mod lie;
pub mod scenarios;
mod vector;

pub use error::{Error, Result};
pub use vector::{AlgebraCovector, AlgebraVector};
