//! Batch runs over many start points or cycles.
//!
//! With the default `parallel` feature the batch entry points fan out over
//! a rayon thread pool; the `_seq` variants always run sequentially and
//! are what the parallel versions compile down to when the feature is off.
//! Outputs are positionally aligned with inputs either way, so results are
//! identical between the two.

use crate::analysis::{classify, CycleClassification, CycleSpec};
use crate::dynamics::{simulate, EventTrajectory, SimulationLimits};
use crate::error::GlassError;
use crate::network::GlassNetwork;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Simulates every start point, sequentially.
pub fn simulate_batch_seq(
    net: &GlassNetwork,
    starts: &[Vec<f64>],
    limits: &SimulationLimits,
) -> Vec<Result<EventTrajectory, GlassError>> {
    starts.iter().map(|x0| simulate(net, x0, limits)).collect()
}

/// Simulates every start point, in parallel when the `parallel` feature is
/// enabled.
#[cfg(feature = "parallel")]
pub fn simulate_batch(
    net: &GlassNetwork,
    starts: &[Vec<f64>],
    limits: &SimulationLimits,
) -> Vec<Result<EventTrajectory, GlassError>> {
    starts.par_iter().map(|x0| simulate(net, x0, limits)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn simulate_batch(
    net: &GlassNetwork,
    starts: &[Vec<f64>],
    limits: &SimulationLimits,
) -> Vec<Result<EventTrajectory, GlassError>> {
    simulate_batch_seq(net, starts, limits)
}

/// Classifies every cycle, sequentially.
pub fn classify_batch_seq(
    net: &GlassNetwork,
    cycles: &[CycleSpec],
) -> Vec<Result<CycleClassification, GlassError>> {
    cycles.iter().map(|c| classify(net, c)).collect()
}

/// Classifies every cycle, in parallel when the `parallel` feature is
/// enabled.
#[cfg(feature = "parallel")]
pub fn classify_batch(
    net: &GlassNetwork,
    cycles: &[CycleSpec],
) -> Vec<Result<CycleClassification, GlassError>> {
    cycles.par_iter().map(|c| classify(net, c)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn classify_batch(
    net: &GlassNetwork,
    cycles: &[CycleSpec],
) -> Vec<Result<CycleClassification, GlassError>> {
    classify_batch_seq(net, cycles)
}
