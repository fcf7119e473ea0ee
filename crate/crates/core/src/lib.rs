//! Semilinear wave systems on weighted graphs.
//!
//! The crate covers the discrete operators ([`graph`]), pseudo-metric
//! geometry and its structural constants ([`geometry`]), the cut-off test
//! functions and their derivative bounds ([`cutoffs`]), volume-growth
//! criteria ([`criterion`]) and an explicit solver for the equality system
//! ([`dynamics`]).

// `!(x > 0.0)` guards are meant to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criterion;
pub mod cutoffs;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod graph;
pub mod potential;

pub use criterion::{
    crit_exponent, single_eq_exponent, CriterionOptions, CriterionVerdict, SystemParams,
};
pub use cutoffs::{RadialCutoff, SeparableCutoff, SpaceTimeRegion, TestFunction};
pub use dynamics::{InitialData, Trajectory, TrajectoryStatus, WaveSystemProblem};
pub use error::{Error, Result};
pub use fit::{growth_exponent_estimate, GrowthFit};
pub use geometry::{DistanceField, Metric};
pub use graph::{GraphBuilder, VertexFunction, WeightedGraph};
pub use potential::Potential;
