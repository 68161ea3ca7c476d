//! Rank-extreme (ReX) association.
//!
//! The ℓ∞ norm of a p-variate standard Gaussian vector whose correlation
//! matrix has rank d is asymptotically bounded by `√(d(1 − p^(−2/(d−1))))`.
//! This crate computes that bound and its companions, and inverts it to
//! estimate, test, classify and build confidence intervals for the rank from
//! per-observation maxima. The inference works with fewer observations than
//! the rank itself.
//!
//! Layout:
//!
//! * [`special`]: log-gamma, incomplete gamma/beta, normal and χ distributions.
//! * [`bounds`]: the deterministic bounds, the trichotomy limit, the separation
//!   constant, the rank estimator and exact coordinate-tail probabilities.
//! * [`sampling`]: reproducible random streams, uniform low-rank models and
//!   observation matrices.
//! * [`inference`]: confidence intervals, rank tests, regime classification,
//!   the regression significance test, PoSI bounds and the noise diagnostic.
//! * [`simulation`]: seeded Monte Carlo studies and kernel density estimates.

pub mod bounds;
pub mod error;
pub mod inference;
pub mod parallel;
pub mod roots;
pub mod sampling;
pub mod simulation;
pub mod special;

pub use error::{Result, RexError};
