//! Piecewise-linear switching networks: geometry, event-driven dynamics,
//! and certified classification of cyclic attractors.
//!
//! The state space is carved into boxes by per-coordinate threshold
//! ladders; inside each box every coordinate decays exponentially toward a
//! constant focal point, so trajectories are explicit wall-to-wall
//! exponential arcs and the only computation is which wall is hit first.
//! That leads to three layers:
//!
//! * [`network`] + [`dynamics`]: the region structure and the exact
//!   event-driven simulator.
//! * [`fractional`], [`embedding`], [`cone`]: algebraic machinery. The
//!   wall-to-wall maps are linear fractional with exact rational
//!   coefficients; embeddings and recenterings move cycles into frames
//!   where those maps compose cleanly; Hilbert-metric cones certify
//!   contraction.
//! * [`analysis`]: verification of cyclic attractor candidates, return
//!   maps, and classification with numerical certificates, plus automatic
//!   cycle search. [`batch`] fans simulation and classification out over
//!   a thread pool (feature `parallel`, on by default).
//!
//! The [`fixtures`] module ships the small reference networks the tests
//! and benches are built around.

pub mod analysis;
pub mod batch;
pub mod cone;
pub mod dynamics;
pub mod embedding;
pub mod error;
pub mod fixtures;
pub mod fractional;
pub mod network;
pub mod rational;

pub use analysis::{
    classify, find_cyclic_attractors, spine, verify_cyclic_attractor, CycleClassification,
    CycleSpec, Spine, Verdict,
};
pub use dynamics::{simulate, EventTrajectory, SimulationLimits, SimulationStatus};
pub use error::{CycleViolation, GlassError};
pub use network::{GlassNetwork, RegionIndex, ThresholdLadder, Wall};
