//! # pointpat
//!
//! Exact metric computations on finite point patterns (counting measures
//! with positive integer multiplicities) in Euclidean space.
//!
//! The crate revolves around two distances between patterns `μ` and `ν`:
//!
//! - the **Prohorov distance** `d(μ, ν)`, the infimum of all `ε ≥ 0` with
//!   `μ(A) ≤ ν(A^ε) + ε` and `ν(A) ≤ μ(A^ε) + ε` for every closed `A`,
//!   where `A^ε` is the open `ε`-neighbourhood of `A`;
//! - the **weak-hash distance**
//!   `d#(μ, ν) = ∫_0^∞ e^{−r} · d(μ^(r), ν^(r)) / (1 + d(μ^(r), ν^(r))) dr`,
//!   where `μ^(r)` restricts `μ` to the open ball of radius `r` around a
//!   fixed origin.
//!
//! Both are computed *exactly* (up to floating-point distance evaluation):
//! the Prohorov infimum by a parametric max-flow feasibility sweep over the
//! finitely many candidate thresholds, and `d#` by closed-form integration
//! of the piecewise-constant profile `r ↦ d(μ^(r), ν^(r))`.
//!
//! On top of those sit:
//!
//! - bound predicates for restricted distances ([`prohorov`]),
//! - convergence diagnostics for sequences of patterns ([`convergence`]),
//! - a certified grid-snapping approximation operator ([`approx`]).
//!
//! Entry points: build a [`MetricContext`] and [`CountingMeasure`]s, then
//! call [`prohorov::prohorov_distance`] or [`weakhash::weak_hash_distance`].

#![forbid(unsafe_code)]
// Guards written as `!(x > 0.0)` treat NaN as a precondition violation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use thiserror::Error;

pub mod approx;
pub mod convergence;
mod flow;
pub mod measure;
pub mod prohorov;
pub mod space;
pub mod weakhash;

pub use measure::{CountingMeasure, PointSet};
pub use space::{MetricContext, Point};

/// Errors reported by pattern construction and the metric operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point must have at least one coordinate")]
    EmptyPoint,

    #[error("coordinate {axis} is not finite: {value}")]
    NonFiniteCoordinate { axis: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("atom {index} has zero multiplicity")]
    ZeroMultiplicity { index: usize },

    #[error("radius must be nonnegative, got {value}")]
    NegativeRadius { value: f64 },

    #[error("radius must be positive, got {value}")]
    NonPositiveRadius { value: f64 },

    #[error("epsilon must be positive, got {value}")]
    InvalidEpsilon { value: f64 },

    #[error("invalid interval: lower bound {lo} exceeds upper bound {hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("epsilon {eps} violates the gap hypothesis: need eps < (hi - lo)/2 = {half_gap} < 1")]
    GapHypothesis { eps: f64, half_gap: f64 },

    #[error("instance too large for subset enumeration: {atoms} atoms (max {max})")]
    InstanceTooLarge { atoms: usize, max: usize },

    #[error("integrand is not finite at atom {index}")]
    NonFiniteIntegrand { index: usize },

    #[error("sequence must contain at least one term")]
    EmptySequence,

    #[error("tolerance must be positive, got {value}")]
    InvalidTolerance { value: f64 },

    #[error("test function support radius must be positive and finite, got {value}")]
    InvalidSupport { value: f64 },

    #[error("radius {radius} hits an atom sphere of the target measure")]
    RadiusOnAtomSphere { radius: f64 },

    #[error("a target atom lies on the boundary of set {index}")]
    AtomOnSetBoundary { index: usize },

    #[error("point set must be bounded for this operation")]
    UnboundedSet,

    #[error("grid spacing must be positive and finite, got {value}")]
    InvalidGrid { value: f64 },

    #[error("grid refinement did not certify within {iterations} halvings")]
    IterationCap { iterations: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
