//! Exact-arithmetic construction, search and verification of patrolling
//! schedules for fences, circles and points.
//!
//! Everything is computed over arbitrary-precision rationals; no verifier or
//! solver ever rounds. The crate is organized around the three settings:
//!
//! - [`fence`]: schedules for a line segment, with an exact sweep verifier,
//!   the partition baseline and a family of schedules that beats it, plus the
//!   zigzag discretization pipeline in [`zigzag`];
//! - [`circle`]: unidirectional circle patrolling, layered interval covers
//!   and their equivalence with circle schedules;
//! - [`point`]: the discretized point-patrolling feasibility solver and the
//!   machinery around reciprocal-sum thresholds;
//! - [`cover`]: disjoint covering systems, disjoint residue classes, and the
//!   reductions tying them to vertex cover and numerical 3-dimensional
//!   matching.

pub mod budget;
pub mod circle;
pub mod cover;
pub mod fence;
pub mod interval;
pub mod point;
pub mod rational;
pub mod repro;
pub mod sweep;
pub mod trajectory;
pub mod zigzag;

pub use budget::Budget;
pub use interval::{interval_set_covers_line, CoverVerdict, PeriodicIntervalSet};
pub use rational::{parse_rational, rat, rat_int, Rational};
pub use sweep::CoverageVerdict;
pub use trajectory::{trajectory_speed_ok, Trajectory, WindowMotion};
