//! Circular wirelength of hypercube embeddings.
//!
//! The crate computes edge boundaries and types of vertex sets in `Q_n`,
//! wirelengths of embeddings into cycles and paths, the Gray-code optimum,
//! brute-force ground truth at small `n`, and exact-rational checks of the
//! inequalities that bound `θ(n, k, t)` from below. [`bound`] assembles these
//! into the type-sequence lower-bound pipeline for a given embedding.
//!
//! The analytic layer ([`takagi`]) is generic over [`Scalar`]; verification
//! always runs on [`Rational`].

pub mod bound;
pub mod cube;
pub mod embed;
pub mod error;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod takagi;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational used by every verification path.
pub type Rational = num_rational::BigRational;

/// Fixed-width exact rational, adequate for shallow depths.
pub type SmallRational = num_rational::Ratio<i128>;

/// Floating-point scalar for plotting and exploration.
pub type Approx = f64;

/// The standard comparison parabola over exact rationals.
pub type ExactParabola = takagi::Parabola<Rational>;
