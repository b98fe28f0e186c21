//! Event-driven trajectories.
//!
//! Inside a region the flow toward the focal point is known in closed form,
//!
//! ```text
//! y(t) = F + (y(0) - F) * exp(-t)
//! ```
//!
//! so simulation never integrates: it jumps from wall crossing to wall
//! crossing. Each exit candidate is a coordinate moving toward a threshold;
//! the earliest one wins and its exit time is
//!
//! ```text
//! t = ln( (f_m - x_m) / (f_m - theta) )
//! ```
//!
//! The exit point pins the switching coordinate to the threshold value
//! exactly (bitwise) at event construction, so the question "is this point
//! on the wall" never depends on floating-point residue.
//!
//! Two candidates with exactly equal exit times make the successor region
//! ambiguous. That tie is reported (`SimultaneousSwitch`) and never
//! resolved; sliding modes are outside this crate's scope.

use crate::analysis::Spine;
use crate::error::GlassError;
use crate::network::{GlassNetwork, Orientation, RegionIndex, Wall};

/// A single wall crossing out of a region.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitEvent {
    /// Coordinate that reaches its threshold.
    pub coord: usize,
    /// 0-based level of the crossed threshold in that coordinate's ladder.
    pub threshold_level: usize,
    pub orientation: Orientation,
    /// Time from `x0` to the crossing; strictly positive.
    pub time: f64,
    /// Crossing point; `point[coord]` equals the threshold value exactly.
    pub point: Vec<f64>,
}

/// Why a simulation stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum SimulationStatus {
    /// Event budget exhausted.
    Budget,
    /// The next crossing would pass the time limit.
    TimeLimit,
    /// The current region's focal point lies inside it; the trajectory
    /// converges without further crossings.
    InteriorEquilibrium,
    /// The trajectory came within `spine_tol` (max-norm) of a supplied
    /// spine set.
    SpineConvergence,
    /// Two coordinates reached their thresholds at exactly the same time;
    /// the trajectory ends at the last unambiguous event.
    SimultaneousSwitch { first: usize, second: usize },
}

/// One recorded crossing of a simulated trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEvent {
    pub cumulative_time: f64,
    pub point: Vec<f64>,
    pub wall: Wall,
}

/// A finished simulation: the start point, every wall crossing in order,
/// and the reason the run stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTrajectory {
    pub start: Vec<f64>,
    pub events: Vec<TrajectoryEvent>,
    pub status: SimulationStatus,
}

impl EventTrajectory {
    pub fn total_time(&self) -> f64 {
        self.events.last().map(|e| e.cumulative_time).unwrap_or(0.0)
    }
}

/// Stopping rules for [`simulate`].
#[derive(Debug, Clone)]
pub struct SimulationLimits {
    pub max_events: usize,
    pub t_max: f64,
    /// Max-norm radius for spine proximity.
    pub spine_tol: f64,
    /// Spine sets to watch; empty means no spine stopping rule.
    pub spines: Vec<Spine>,
}

impl Default for SimulationLimits {
    fn default() -> Self {
        SimulationLimits {
            max_events: 1000,
            t_max: f64::INFINITY,
            spine_tol: 1e-9,
            spines: Vec::new(),
        }
    }
}

/// The point reached from `x0` after flowing for time `t` inside `region`.
pub fn flow(net: &GlassNetwork, region: &RegionIndex, x0: &[f64], t: f64) -> Result<Vec<f64>, GlassError> {
    let f = net.focal(region)?;
    let decay = (-t).exp();
    Ok(x0.iter().zip(f).map(|(&x, &fi)| fi + (x - fi) * decay).collect())
}

/// First wall crossing of the trajectory started at `x0` under `region`'s
/// dynamics.
///
/// `x0` must lie in the closure of the region; boundary points are handled
/// by continuous extension of the region's flow (that is how crossing points
/// re-enter the solver). Returns `Ok(None)` when no coordinate moves toward
/// a wall, and `SimultaneousSwitch` when two candidates tie exactly.
pub fn exit_event(
    net: &GlassNetwork,
    region: &RegionIndex,
    x0: &[f64],
) -> Result<Option<ExitEvent>, GlassError> {
    if x0.len() != net.dimension() {
        return Err(GlassError::Malformed(format!(
            "point has {} coordinates, expected {}",
            x0.len(),
            net.dimension()
        )));
    }
    for i in 0..net.dimension() {
        let (lo, hi) = net.ladder(i).band_bounds(region.level(i));
        if !(x0[i] >= lo && x0[i] <= hi) {
            return Err(GlassError::PointNotInRegion { region: region.clone(), coord: i });
        }
    }
    let f = net.focal(region)?;
    let sets = net.switching_sets(region)?;

    // Largest decay ratio r = exp(-t) wins: the earliest crossing.
    let mut best: Option<(usize, usize, Orientation, f64)> = None;
    let mut tie: Option<(usize, usize)> = None;
    let mut consider = |coord: usize, level: usize, orientation: Orientation, theta: f64| {
        let r = (f[coord] - theta) / (f[coord] - x0[coord]);
        match best {
            Some((bc, _, _, br)) if r == br => tie = Some((bc, coord)),
            Some((_, _, _, br)) if r > br => {
                best = Some((coord, level, orientation, r));
                tie = None;
            }
            None => best = Some((coord, level, orientation, r)),
            _ => {}
        }
    };
    for &i in &sets.up {
        let level = region.level(i);
        let theta = net.ladder(i).value(level);
        if x0[i] == theta {
            return Err(GlassError::PointNotInRegion { region: region.clone(), coord: i });
        }
        consider(i, level, Orientation::Up, theta);
    }
    for &i in &sets.down {
        let level = region.level(i) - 1;
        let theta = net.ladder(i).value(level);
        if x0[i] == theta {
            return Err(GlassError::PointNotInRegion { region: region.clone(), coord: i });
        }
        consider(i, level, Orientation::Down, theta);
    }

    let Some((coord, threshold_level, orientation, r)) = best else {
        return Ok(None);
    };
    if let Some((first, second)) = tie {
        return Err(GlassError::SimultaneousSwitch { first, second });
    }
    let theta = net.ladder(coord).value(threshold_level);
    let mut point: Vec<f64> =
        x0.iter().zip(f).map(|(&x, &fi)| fi + (x - fi) * r).collect();
    point[coord] = theta;
    Ok(Some(ExitEvent { coord, threshold_level, orientation, time: -r.ln(), point }))
}

/// Resolves a start point to the region whose flow carries it.
///
/// Interior points resolve to their region. A point on exactly one wall
/// resolves to the adjacent region whose flow moves the wall coordinate off
/// the threshold into that region (a transparent crossing); walls that repel
/// or attract on both sides, and corners on two or more walls, are refused.
/// With a partial focal map, a side without a focal entry is treated as
/// non-capturing.
fn resolve_start(net: &GlassNetwork, x0: &[f64]) -> Result<RegionIndex, GlassError> {
    let mut on_wall: Option<(usize, usize)> = None;
    let mut levels = vec![0usize; net.dimension()];
    for i in 0..net.dimension() {
        match net.ladder(i).band_of(x0[i]) {
            Ok(l) => levels[i] = l,
            Err(j) => {
                if on_wall.is_some() {
                    return Err(GlassError::AmbiguousStart {
                        reason: format!("point lies on two or more walls (coordinate {i} among them)"),
                    });
                }
                on_wall = Some((i, j));
            }
        }
    }
    let Some((m, j)) = on_wall else {
        return Ok(RegionIndex::new(levels));
    };
    let theta = net.ladder(m).value(j);
    let mut below = levels.clone();
    below[m] = j;
    let mut above = levels;
    above[m] = j + 1;
    let below = RegionIndex::new(below);
    let above = RegionIndex::new(above);
    let captures_below = net.focal(&below).ok().map(|f| f[m] < theta);
    let captures_above = net.focal(&above).ok().map(|f| f[m] > theta);
    match (captures_above, captures_below) {
        (Some(true), Some(false)) | (Some(true), None) => Ok(above),
        (Some(false), Some(true)) | (None, Some(true)) => Ok(below),
        (Some(true), Some(true)) => Err(GlassError::AmbiguousStart {
            reason: format!("wall on coordinate {m} repels into both adjacent regions"),
        }),
        (Some(false), Some(false)) => Err(GlassError::AmbiguousStart {
            reason: format!("wall on coordinate {m} attracts from both sides"),
        }),
        (Some(false), None) | (None, None) => Err(GlassError::MissingFocal(below)),
        (None, Some(false)) => Err(GlassError::MissingFocal(above)),
    }
}

fn near_spine(spines: &[Spine], x: &[f64], tol: f64) -> bool {
    spines.iter().any(|s| s.distance(x) <= tol)
}

/// Runs the event-driven simulation from `x0` until a stopping rule fires.
///
/// `x0` may sit inside a region or on a single transparently-crossed wall.
/// Focal points several bands away are handled like any others: the
/// trajectory crosses one wall at a time, continuing through each
/// intermediate region.
pub fn simulate(
    net: &GlassNetwork,
    x0: &[f64],
    limits: &SimulationLimits,
) -> Result<EventTrajectory, GlassError> {
    let mut region = resolve_start(net, x0)?;
    let mut x = x0.to_vec();
    let mut events: Vec<TrajectoryEvent> = Vec::new();
    let mut cumulative = 0.0;

    if near_spine(&limits.spines, &x, limits.spine_tol) {
        return Ok(EventTrajectory {
            start: x0.to_vec(),
            events,
            status: SimulationStatus::SpineConvergence,
        });
    }

    let status = loop {
        if events.len() >= limits.max_events {
            break SimulationStatus::Budget;
        }
        let ev = match exit_event(net, &region, &x) {
            Ok(Some(ev)) => ev,
            Ok(None) => break SimulationStatus::InteriorEquilibrium,
            Err(GlassError::SimultaneousSwitch { first, second }) => {
                break SimulationStatus::SimultaneousSwitch { first, second }
            }
            Err(e) => return Err(e),
        };
        if cumulative + ev.time > limits.t_max {
            break SimulationStatus::TimeLimit;
        }
        cumulative += ev.time;
        let next = region.step(ev.coord, ev.orientation);
        let wall = Wall::between(&region, &next).expect("stepped regions are adjacent");
        x = ev.point.clone();
        region = next;
        events.push(TrajectoryEvent { cumulative_time: cumulative, point: ev.point, wall });
        if near_spine(&limits.spines, &x, limits.spine_tol) {
            break SimulationStatus::SpineConvergence;
        }
    };

    Ok(EventTrajectory { start: x0.to_vec(), events, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::spine;
    use crate::fixtures;
    use crate::network::ThresholdLadder;
    use std::collections::BTreeMap;

    fn region(levels: &[usize]) -> RegionIndex {
        RegionIndex::new(levels.to_vec())
    }

    #[test]
    fn flow_is_a_straight_shot_at_the_focal_point() {
        let net = fixtures::net_b();
        let y = flow(&net, &region(&[0, 0]), &[-1.0, 0.0], (2.0f64).ln()).unwrap();
        assert_eq!(y, vec![0.0, -1.0]);
    }

    #[test]
    fn flow_semigroup_property() {
        let net = fixtures::net_c();
        let x0 = [-0.3, -0.7];
        let r = region(&[0, 0]);
        let (s, t) = (0.31, 0.47);
        let direct = flow(&net, &r, &x0, s + t).unwrap();
        let stepped = flow(&net, &r, &flow(&net, &r, &x0, s).unwrap(), t).unwrap();
        for i in 0..2 {
            assert!((direct[i] - stepped[i]).abs() <= 1e-12 * (1.0 + direct[i].abs()));
        }
    }

    #[test]
    fn exit_event_picks_earliest_crossing_and_pins_it() {
        let net = fixtures::net_a();
        let ev = exit_event(&net, &region(&[1, 0]), &[0.0, -1.0]).unwrap().unwrap();
        assert_eq!(ev.coord, 1);
        assert_eq!(ev.threshold_level, 0);
        assert_eq!(ev.orientation, Orientation::Up);
        assert!((ev.time - (2.0f64).ln()).abs() < 1e-15);
        assert_eq!(ev.point, vec![0.5, 0.0]);
    }

    #[test]
    fn exit_event_none_at_interior_equilibrium() {
        let net = crate::network::GlassNetwork::new(
            vec![ThresholdLadder::new(vec![0.0])],
            BTreeMap::from([(region(&[0]), vec![-1.0])]),
        )
        .unwrap();
        assert_eq!(exit_event(&net, &region(&[0]), &[-3.0]).unwrap(), None);
    }

    #[test]
    fn exit_event_reports_exact_ties() {
        let net = crate::network::GlassNetwork::new(
            vec![ThresholdLadder::new(vec![0.0]), ThresholdLadder::new(vec![0.0])],
            BTreeMap::from([(region(&[0, 0]), vec![2.0, 2.0])]),
        )
        .unwrap();
        let err = exit_event(&net, &region(&[0, 0]), &[-1.0, -1.0]).unwrap_err();
        assert_eq!(err, GlassError::SimultaneousSwitch { first: 0, second: 1 });
    }

    #[test]
    fn exit_event_rejects_points_outside_the_closure() {
        let net = fixtures::net_b();
        assert!(matches!(
            exit_event(&net, &region(&[0, 0]), &[0.5, -1.0]),
            Err(GlassError::PointNotInRegion { .. })
        ));
    }

    #[test]
    fn simulate_periodic_orbit_returns_exactly() {
        // Orbit arithmetic is dyadic, so the lap reproduces bit-for-bit.
        let net = fixtures::net_b();
        let limits = SimulationLimits { max_events: 8, ..Default::default() };
        let traj = simulate(&net, &[-1.0, 0.0], &limits).unwrap();
        assert_eq!(traj.status, SimulationStatus::Budget);
        let pts: Vec<&[f64]> = traj.events.iter().map(|e| e.point.as_slice()).collect();
        assert_eq!(pts[0], &[0.0, -1.0]);
        assert_eq!(pts[1], &[1.0, 0.0]);
        assert_eq!(pts[2], &[0.0, 1.0]);
        assert_eq!(pts[3], &[-1.0, 0.0]);
        assert_eq!(pts[7], &[-1.0, 0.0]);
        let ln16 = (16.0f64).ln();
        assert!((traj.events[3].cumulative_time - ln16).abs() < 1e-12);
        assert!((traj.events[7].cumulative_time - 2.0 * ln16).abs() < 1e-12);
    }

    #[test]
    fn simulate_marginal_decay_follows_harmonic_law() {
        // Crossing magnitudes obey a_N = 1/(1+N) and the quarter-turn transit
        // factors telescope: cumulative time after N events is ln(N+1).
        let net = fixtures::net_a();
        let limits = SimulationLimits { max_events: 400, ..Default::default() };
        let traj = simulate(&net, &[0.0, -1.0], &limits).unwrap();
        assert_eq!(traj.status, SimulationStatus::Budget);
        assert_eq!(traj.events.len(), 400);
        for (k, ev) in traj.events.iter().enumerate() {
            let n = k + 1;
            let mag = ev.point.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            assert!(
                (mag - 1.0 / (n as f64 + 1.0)).abs() < 1e-12,
                "event {n}: magnitude {mag}"
            );
            assert!(
                (ev.cumulative_time - ((n as f64) + 1.0).ln()).abs() < 1e-9,
                "event {n}: cumulative time {}",
                ev.cumulative_time
            );
        }
    }

    #[test]
    fn simulate_stops_at_time_limit_before_overshooting() {
        let net = fixtures::net_b();
        let limits = SimulationLimits {
            max_events: 100,
            t_max: 2.5 * (2.0f64).ln(),
            ..Default::default()
        };
        let traj = simulate(&net, &[-1.0, 0.0], &limits).unwrap();
        assert_eq!(traj.status, SimulationStatus::TimeLimit);
        assert_eq!(traj.events.len(), 2);
    }

    #[test]
    fn simulate_detects_interior_equilibrium() {
        let net = crate::network::GlassNetwork::new(
            vec![ThresholdLadder::new(vec![0.0])],
            BTreeMap::from([(region(&[0]), vec![5.0]), (region(&[1]), vec![5.0])]),
        )
        .unwrap();
        let traj = simulate(&net, &[-1.0], &SimulationLimits::default()).unwrap();
        assert_eq!(traj.status, SimulationStatus::InteriorEquilibrium);
        assert_eq!(traj.events.len(), 1);
    }

    #[test]
    fn simulate_reaches_spine_in_finite_time() {
        let net = fixtures::net_e();
        let sp = spine(&net, &fixtures::cycle_quadrants()).unwrap();
        let limits = SimulationLimits {
            max_events: 10_000,
            spines: vec![sp],
            ..Default::default()
        };
        let traj = simulate(&net, &[-1.0, 0.0], &limits).unwrap();
        assert_eq!(traj.status, SimulationStatus::SpineConvergence);
        assert!(traj.events.len() < 100, "contraction at rate 1/16 stops quickly");
        assert!(traj.total_time() < 5.0);
    }

    #[test]
    fn simulate_propagates_ties_as_status() {
        let net = crate::network::GlassNetwork::new(
            vec![ThresholdLadder::new(vec![0.0]), ThresholdLadder::new(vec![0.0])],
            BTreeMap::from([(region(&[0, 0]), vec![2.0, 2.0])]),
        )
        .unwrap();
        let traj = simulate(&net, &[-1.0, -1.0], &SimulationLimits::default()).unwrap();
        assert_eq!(traj.status, SimulationStatus::SimultaneousSwitch { first: 0, second: 1 });
        assert_eq!(traj.events.len(), 0);
    }

    #[test]
    fn wall_start_enters_the_capturing_region() {
        let net = fixtures::net_a();
        let traj = simulate(
            &net,
            &[0.0, -1.0],
            &SimulationLimits { max_events: 1, ..Default::default() },
        )
        .unwrap();
        // From the wall {x0 = 0, x1 < 0} the flow enters band (1,0) and
        // exits upward through x1 = 0.
        assert_eq!(traj.events[0].wall.from, region(&[1, 0]));
        assert_eq!(traj.events[0].wall.to, region(&[1, 1]));
        assert_eq!(traj.events[0].point, vec![0.5, 0.0]);
    }

    #[test]
    fn corner_start_is_refused() {
        let net = fixtures::net_a();
        let err = simulate(&net, &[0.0, 0.0], &SimulationLimits::default()).unwrap_err();
        assert!(matches!(err, GlassError::AmbiguousStart { .. }));
    }

    #[test]
    fn multi_band_focal_jump_crosses_one_wall_at_a_time() {
        let net = fixtures::net_c();
        // From band (0,0) the focal point (2,-1) is two bands up in x0.
        let limits = SimulationLimits { max_events: 2, ..Default::default() };
        let traj = simulate(&net, &[-1.0, -0.5], &limits).unwrap();
        assert_eq!(traj.events[0].wall.threshold_level, 0);
        assert_eq!(traj.events[0].point[0], 0.0);
        assert_eq!(traj.events[1].wall.threshold_level, 1);
        assert_eq!(traj.events[1].point[0], 1.0);
    }
}
