//! Cyclic attractors: verification, return maps, and classification.
//!
//! A candidate cycle is a closed sequence of regions, each wall-adjacent to
//! the next, with exactly one switching coordinate per region agreeing with
//! the wall to the successor. Around such a cycle the wall-to-wall maps
//! compose into a linear fractional return map on the base wall, and the
//! cycle splits into two classes by the *spine*: the per-coordinate
//! intersection of the closures of all the cycle's walls.
//!
//! * Nonempty spine: the walls share a closure point. Recentering that
//!   point to the origin makes the return map linear-fractional with a
//!   matrix that fixes the base wall's orthant section, and the dominant
//!   eigenvalue `lambda` of its switching block decides everything:
//!   `lambda > 1` gives a unique attracting periodic orbit through the
//!   eigendirection, `lambda <= 1` a degenerate cycle (marginal when
//!   `lambda = 1`: orbits neither settle on a period nor escape, as in the
//!   harmonic decay of the four-quadrant marginal network).
//! * Empty spine (an *ideal* cycle): no common point exists, but embedding
//!   the crossed thresholds into binary coordinates re-centers every wall
//!   at once. The return map then contracts a trapping box on the base
//!   wall, certified by mapping the box's vertices (in exact rational
//!   arithmetic) strictly into the box, and the fixed point is found by
//!   iteration.
//!
//! Everything downstream reports certificates rather than asking for
//! trust: eigen residuals, Birkhoff contraction rates, and the invariance
//! margin of the trapping box.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::cone::{
    contraction_rate, dominant_eigenpair, projective_diameter, ConeSection,
    DEFAULT_EIGEN_MAX_ITER, DEFAULT_EIGEN_TOL,
};
use crate::embedding::{minimal_embedding, recenter_at_vertex, Embedding};
use crate::error::{CycleViolation, GlassError};
use crate::fractional::{F64Map, LinearFractionalMap};
use crate::network::{
    transition_graph, GlassNetwork, Orientation, RegionIndex, SwitchingSets, Wall,
};
use crate::rational::{rat, to_f64, Rat};

/// Tolerance separating `lambda > 1` from marginal and degenerate cycles.
pub const CLASSIFY_TOL: f64 = 1e-9;

const FIXED_POINT_TOL: f64 = 1e-12;
const FIXED_POINT_MAX_ITER: usize = 10_000;

/// An ordered, duplicate-free sequence of regions meant to close into a
/// cycle. Construction checks only for duplicates; adjacency is checked by
/// [`walls`](Self::walls) and the dynamical conditions by
/// [`verify_cyclic_attractor`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSpec {
    regions: Vec<RegionIndex>,
}

impl CycleSpec {
    pub fn new(regions: Vec<RegionIndex>) -> Result<Self, GlassError> {
        if regions.is_empty() {
            return Err(GlassError::Malformed("cycle must contain at least one region".into()));
        }
        let mut seen = BTreeSet::new();
        for r in &regions {
            if !seen.insert(r.clone()) {
                return Err(GlassError::DuplicateRegion(r.clone()));
            }
        }
        Ok(CycleSpec { regions })
    }

    pub fn regions(&self) -> &[RegionIndex] {
        &self.regions
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    /// The cycle's walls, one per position: `walls()[i]` is the wall
    /// crossed *into* `regions()[i]` from its predecessor. In particular
    /// `walls()[0]`, the wall closing the cycle, is the base wall return
    /// maps are anchored on.
    pub fn walls(&self) -> Result<Vec<Wall>, GlassError> {
        let n = self.regions.len();
        (0..n)
            .map(|i| {
                let from_pos = (i + n - 1) % n;
                Wall::between(&self.regions[from_pos], &self.regions[i])
                    .ok_or(GlassError::NonAdjacentRegions { from_pos, to_pos: i })
            })
            .collect()
    }

    /// Same cycle, rotated so the lexicographically smallest region comes
    /// first. Cycles found by automatic search are reported in this form.
    pub fn rotated_to_min(&self) -> CycleSpec {
        let first = self
            .regions
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.cmp(b))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut regions = self.regions.clone();
        regions.rotate_left(first);
        CycleSpec { regions }
    }
}

/// Per-coordinate intersection of the closures of a cycle's walls.
///
/// Coordinate `k` is constrained to `{theta}` by every wall on `k` and to
/// the closed band interval by every other wall; the spine is the product
/// of the intersections. An empty spine is what makes a cycle ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spine {
    lo: Vec<f64>,
    hi: Vec<f64>,
    empty: bool,
}

impl Spine {
    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Closed interval of coordinate `k` (ends may be infinite), or `None`
    /// for an empty spine.
    pub fn interval(&self, k: usize) -> Option<(f64, f64)> {
        if self.empty {
            None
        } else {
            Some((self.lo[k], self.hi[k]))
        }
    }

    /// Max-norm distance from `x` to the spine; `+inf` when the spine is
    /// empty.
    pub fn distance(&self, x: &[f64]) -> f64 {
        if self.empty {
            return f64::INFINITY;
        }
        let mut d = 0.0f64;
        for k in 0..self.lo.len() {
            d = d.max(self.lo[k] - x[k]).max(x[k] - self.hi[k]);
        }
        d.max(0.0)
    }
}

/// Computes the spine of `cycle` in `net`.
pub fn spine(net: &GlassNetwork, cycle: &CycleSpec) -> Result<Spine, GlassError> {
    let walls = cycle.walls()?;
    let n = net.dimension();
    let mut lo = vec![f64::NEG_INFINITY; n];
    let mut hi = vec![f64::INFINITY; n];
    for w in &walls {
        for k in 0..n {
            let (a, b) = if k == w.coord {
                let t = w.pinned_value(net);
                (t, t)
            } else {
                w.free_interval(net, k)
            };
            lo[k] = lo[k].max(a);
            hi[k] = hi[k].min(b);
        }
    }
    let empty = (0..n).any(|k| lo[k] > hi[k]);
    Ok(Spine { lo, hi, empty })
}

/// Structural evidence that a cycle is a cyclic attractor candidate:
/// its wall sequence and the switching sets of every region.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCertificate {
    /// `walls[i]` enters `regions[i]`; `walls[0]` is the base wall.
    pub walls: Vec<Wall>,
    /// Switching sets per region, aligned with the cycle's regions.
    pub switching: Vec<SwitchingSets>,
}

/// Checks the cyclic-attractor conditions: consecutive regions are
/// wall-adjacent, every region has exactly one switching coordinate, and
/// that coordinate crosses its wall toward the successor.
pub fn verify_cyclic_attractor(
    net: &GlassNetwork,
    cycle: &CycleSpec,
) -> Result<CycleCertificate, GlassError> {
    let walls = cycle.walls().map_err(|e| match e {
        GlassError::NonAdjacentRegions { from_pos, to_pos } => {
            GlassError::NotCyclicAttractor(CycleViolation::NonAdjacent { from_pos, to_pos })
        }
        other => other,
    })?;
    let n = cycle.len();
    let mut switching = Vec::with_capacity(n);
    for (i, region) in cycle.regions().iter().enumerate() {
        let sets = net.switching_sets(region)?;
        let sw = sets.switching();
        match sw.len() {
            0 => {
                return Err(GlassError::NotCyclicAttractor(CycleViolation::NoSwitching {
                    region: region.clone(),
                }))
            }
            1 => {}
            _ => {
                return Err(GlassError::NotCyclicAttractor(CycleViolation::MultipleSwitching {
                    region: region.clone(),
                    coords: sw,
                }))
            }
        }
        let c = sw[0];
        let exit = &walls[(i + 1) % n];
        if c != exit.coord {
            return Err(GlassError::NotCyclicAttractor(CycleViolation::WrongCoordinate {
                region: region.clone(),
                switching: c,
                wall: exit.coord,
            }));
        }
        let toward = match exit.orientation {
            Orientation::Up => sets.up.contains(&c),
            Orientation::Down => sets.down.contains(&c),
        };
        if !toward {
            return Err(GlassError::NotCyclicAttractor(CycleViolation::WrongDirection {
                region: region.clone(),
                coord: c,
            }));
        }
        switching.push(sets);
    }
    Ok(CycleCertificate { walls, switching })
}

/// Coordinate frame a return map is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnFrame {
    /// Crossed thresholds embedded into binary coordinates (works for any
    /// verified cycle, and is the only option for ideal ones).
    MinimalEmbedding,
    /// Original coordinates translated so the spine vertex is the origin
    /// (requires a nonempty spine).
    Recentered,
}

/// The composed once-around map of a cycle, anchored on the base wall.
#[derive(Debug, Clone)]
pub struct ReturnMap {
    pub frame: ReturnFrame,
    /// Walls in frame coordinates; `walls[0]` is the base wall.
    pub walls: Vec<Wall>,
    /// `stages[i]` maps arrival on `walls[i]` to arrival on `walls[i+1]`.
    pub stages: Vec<LinearFractionalMap>,
    /// `stages[n-1] ∘ ... ∘ stages[0]`.
    pub composite: LinearFractionalMap,
    /// Recentered frame: subtracted vertex (original point = frame + vertex).
    pub vertex: Option<Vec<f64>>,
    /// Minimal-embedding frame: the embedding into frame coordinates.
    pub embedding: Option<Embedding>,
}

fn stage_maps(
    net: &GlassNetwork,
    regions: &[RegionIndex],
    walls: &[Wall],
) -> Result<(Vec<LinearFractionalMap>, LinearFractionalMap), GlassError> {
    let n = regions.len();
    let mut stages = Vec::with_capacity(n);
    for i in 0..n {
        let f = net.focal(&regions[i])?;
        stages.push(LinearFractionalMap::wall_map(f, walls[(i + 1) % n].coord)?);
    }
    let mut composite = stages[0].clone();
    for s in &stages[1..] {
        composite = s.compose_after(&composite);
    }
    Ok((stages, composite))
}

fn embedded_cycle(emb: &Embedding, cycle: &CycleSpec) -> (Vec<RegionIndex>, Vec<Wall>) {
    let regions: Vec<RegionIndex> =
        cycle.regions().iter().map(|r| emb.embed_region(r)).collect();
    let n = regions.len();
    let walls = (0..n)
        .map(|i| {
            Wall::between(&regions[(i + n - 1) % n], &regions[i])
                .expect("embedded cycle regions stay wall-adjacent")
        })
        .collect();
    (regions, walls)
}

/// Builds the return map of a verified cycle in the requested frame.
///
/// The stage maps require every crossed threshold to sit at 0, which both
/// frames guarantee by construction.
pub fn return_map(
    net: &GlassNetwork,
    cycle: &CycleSpec,
    frame: ReturnFrame,
) -> Result<ReturnMap, GlassError> {
    match frame {
        ReturnFrame::MinimalEmbedding => {
            let (emb_net, emb) = minimal_embedding(net, cycle)?;
            let (regions, walls) = embedded_cycle(&emb, cycle);
            let (stages, composite) = stage_maps(&emb_net, &regions, &walls)?;
            Ok(ReturnMap {
                frame,
                walls,
                stages,
                composite,
                vertex: None,
                embedding: Some(emb),
            })
        }
        ReturnFrame::Recentered => {
            let (rc_net, vertex) = recenter_at_vertex(net, cycle)?;
            let walls = cycle.walls()?;
            let (stages, composite) = stage_maps(&rc_net, cycle.regions(), &walls)?;
            Ok(ReturnMap {
                frame,
                walls,
                stages,
                composite,
                vertex: Some(vertex),
                embedding: None,
            })
        }
    }
}

/// A closed box on the base wall used as a candidate trapping region.
#[derive(Debug, Clone, PartialEq)]
pub struct TrappingBox {
    /// Base wall the box lies on.
    pub wall: Wall,
    /// Threshold value of the wall's own coordinate.
    pub pinned_value: f64,
    /// Closed interval per coordinate; `None` at the pinned coordinate.
    pub intervals: Vec<Option<(f64, f64)>>,
}

impl TrappingBox {
    pub fn dimension(&self) -> usize {
        self.intervals.len()
    }

    /// Center of the box (pinned coordinate at its threshold).
    pub fn barycenter(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .map(|iv| match iv {
                Some((a, b)) => 0.5 * (a + b),
                None => self.pinned_value,
            })
            .collect()
    }

    /// All corner points of the box.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let free: Vec<usize> = (0..self.intervals.len())
            .filter(|&k| self.intervals[k].is_some())
            .collect();
        let mut out = Vec::with_capacity(1 << free.len());
        for mask in 0u32..(1 << free.len()) {
            let mut v: Vec<f64> = self
                .intervals
                .iter()
                .map(|iv| match iv {
                    Some((a, _)) => *a,
                    None => self.pinned_value,
                })
                .collect();
            for (bit, &k) in free.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    v[k] = self.intervals[k].expect("free coordinate").1;
                }
            }
            out.push(v);
        }
        out
    }
}

/// Builds the standard trapping box on the cycle's base wall.
///
/// Free coordinates keep their band interval on the wall; an unbounded end
/// is replaced by `max |focal| + 1` (no trajectory can be pushed past the
/// strongest focal pull). A coordinate the cycle never switches, in a
/// binary ladder, gets the tighter two-sided bracket
/// `[min |f - theta| / 2, max |f - theta| + 1]` on its focal side.
pub fn trapping_box(net: &GlassNetwork, cycle: &CycleSpec) -> Result<TrappingBox, GlassError> {
    let walls = cycle.walls()?;
    let w0 = walls[0].clone();
    let wall_coords: BTreeSet<usize> = walls.iter().map(|w| w.coord).collect();
    let mut maxf = 0.0f64;
    for r in cycle.regions() {
        for &v in net.focal(r)? {
            maxf = maxf.max(v.abs());
        }
    }
    let cap = maxf + 1.0;

    let mut intervals = Vec::with_capacity(net.dimension());
    for k in 0..net.dimension() {
        if k == w0.coord {
            intervals.push(None);
            continue;
        }
        if !wall_coords.contains(&k) && net.ladder(k).len() == 1 {
            let theta = net.ladder(k).value(0);
            let mut u = 0.0f64;
            let mut v = f64::INFINITY;
            for r in cycle.regions() {
                let d = (net.focal(r)?[k] - theta).abs();
                u = u.max(d);
                v = v.min(d);
            }
            let iv = if cycle.regions()[0].level(k) == 1 {
                (theta + v / 2.0, theta + u + 1.0)
            } else {
                (theta - (u + 1.0), theta - v / 2.0)
            };
            intervals.push(Some(iv));
        } else {
            let (a, b) = w0.free_interval(net, k);
            let a = if a.is_finite() { a } else { -cap };
            let b = if b.is_finite() { b } else { cap };
            intervals.push(Some((a, b)));
        }
    }
    let pinned_value = w0.pinned_value(net);
    Ok(TrappingBox { wall: w0, pinned_value, intervals })
}

/// Outcome of the exact vertex-image test of a trapping box.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceCheck {
    /// Every box vertex maps strictly into the box interior.
    pub holds: bool,
    /// Smallest signed distance of a vertex image to the box boundary
    /// (negative when some image escapes).
    pub margin: f64,
}

/// One lap of an ideal cycle: stage maps in minimally embedded coordinates
/// plus the scalar folding of coordinates the embedding drops (they follow
/// their per-region focal values with the stage decay factors).
struct IdealLap {
    emb: Embedding,
    /// Embedded-frame walls; `emb_walls[i].coord` is the embedding row
    /// held exactly at zero on arrival at wall `i`.
    emb_walls: Vec<Wall>,
    stages: Vec<LinearFractionalMap>,
    stages_f64: Vec<F64Map>,
    /// Original-frame focal points per stage, for the dropped coordinates.
    stage_focals: Vec<Vec<f64>>,
    uncrossed: Vec<usize>,
    dim: usize,
}

impl IdealLap {
    fn build(net: &GlassNetwork, cycle: &CycleSpec) -> Result<Self, GlassError> {
        let (emb_net, emb) = minimal_embedding(net, cycle)?;
        let (regions, emb_walls) = embedded_cycle(&emb, cycle);
        let (stages, _) = stage_maps(&emb_net, &regions, &emb_walls)?;
        let stages_f64 = stages.iter().map(|s| s.to_f64()).collect();
        let stage_focals = cycle
            .regions()
            .iter()
            .map(|r| net.focal(r).map(<[f64]>::to_vec))
            .collect::<Result<Vec<_>, _>>()?;
        let uncrossed = (0..net.dimension()).filter(|&v| !emb.has_rows(v)).collect();
        Ok(IdealLap {
            emb,
            emb_walls,
            stages,
            stages_f64,
            stage_focals,
            uncrossed,
            dim: net.dimension(),
        })
    }

    fn reconstruct_exact(&self, y: &[Rat], z: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for var in 0..self.dim {
            if let Some(&r0) = self.emb.rows_of(var).first() {
                let row = &self.emb.rows()[r0];
                out[var] = &y[r0] + rat(row.threshold);
            }
        }
        for (zi, &k) in z.iter().zip(&self.uncrossed) {
            out[k] = zi.clone();
        }
        out
    }

    /// Floating-point reconstruction. A variable with several embedding
    /// rows is rebuilt from `pin` when it owns that row: on a wall the
    /// pinned row is exactly zero while sibling rows carry rounding drift,
    /// and the pinned coordinate must land exactly on its threshold.
    fn reconstruct_f64(&self, y: &[f64], z: &[f64], pin: Option<usize>) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for var in 0..self.dim {
            let rows = self.emb.rows_of(var);
            let Some(&first) = rows.first() else { continue };
            let r = match pin {
                Some(p) if rows.contains(&p) => p,
                _ => first,
            };
            out[var] = y[r] + self.emb.rows()[r].threshold;
        }
        for (&zi, &k) in z.iter().zip(&self.uncrossed) {
            out[k] = zi;
        }
        out
    }

    /// One full lap in exact rational arithmetic.
    fn apply_exact(&self, x: &[Rat]) -> Result<(Vec<Rat>, Rat), GlassError> {
        let mut y: Vec<Rat> =
            self.emb.rows().iter().map(|row| &x[row.var] - rat(row.threshold)).collect();
        let mut z: Vec<Rat> = self.uncrossed.iter().map(|&k| x[k].clone()).collect();
        let mut total = Rat::one();
        for (i, stage) in self.stages.iter().enumerate() {
            let (ny, lam) = stage.apply_exact(&y)?;
            y = ny;
            for (zi, &k) in z.iter_mut().zip(&self.uncrossed) {
                let g = rat(self.stage_focals[i][k]);
                let delta = zi.clone() - &g;
                *zi = g + delta / &lam;
            }
            total *= lam;
        }
        Ok((self.reconstruct_exact(&y, &z), total))
    }

    /// One full lap in floating point.
    fn apply_f64(&self, x: &[f64]) -> Result<(Vec<f64>, f64), GlassError> {
        let (wps, ret, lam) = self.walk_f64(x, false)?;
        debug_assert!(wps.len() <= 1);
        Ok((ret, lam))
    }

    /// Walks the lap from `x`, optionally recording the arrival point on
    /// each wall. Returns `(waypoints, return point, total factor)`; the
    /// waypoints (when recorded) are `x` itself plus the arrivals on walls
    /// `1..n-1`, with cumulative times.
    fn walk_f64(
        &self,
        x: &[f64],
        record: bool,
    ) -> Result<(Vec<(f64, Vec<f64>)>, Vec<f64>, f64), GlassError> {
        let n = self.stages_f64.len();
        let mut y: Vec<f64> =
            self.emb.rows().iter().map(|row| x[row.var] - row.threshold).collect();
        let mut z: Vec<f64> = self.uncrossed.iter().map(|&k| x[k]).collect();
        let mut wps = Vec::new();
        if record {
            wps.push((0.0, x.to_vec()));
        }
        let mut t = 0.0;
        let mut total = 1.0;
        for i in 0..n {
            let (ny, lam) = self.stages_f64[i].apply(&y)?;
            y = ny;
            for (zi, &k) in z.iter_mut().zip(&self.uncrossed) {
                let g = self.stage_focals[i][k];
                *zi = g + (*zi - g) / lam;
            }
            total *= lam;
            t += lam.ln();
            if record && i + 1 < n {
                let pin = self.emb_walls[(i + 1) % n].coord;
                wps.push((t, self.reconstruct_f64(&y, &z, Some(pin))));
            }
        }
        let ret = self.reconstruct_f64(&y, &z, Some(self.emb_walls[0].coord));
        Ok((wps, ret, total))
    }
}

fn invariance_details(
    lap: &IdealLap,
    bx: &TrappingBox,
) -> Result<(InvarianceCheck, Vec<Vec<f64>>), GlassError> {
    let mut holds = true;
    let mut margin = f64::INFINITY;
    let mut images = Vec::new();
    for v in bx.vertices() {
        let vr: Vec<Rat> = v.iter().map(|&c| rat(c)).collect();
        let (img, _) = lap.apply_exact(&vr)?;
        for (k, iv) in bx.intervals.iter().enumerate() {
            let Some((a, b)) = *iv else { continue };
            let (ra, rb) = (rat(a), rat(b));
            if !(img[k] > ra && img[k] < rb) {
                holds = false;
            }
            margin = margin.min(to_f64(&(&img[k] - &ra))).min(to_f64(&(&rb - &img[k])));
        }
        images.push(img.iter().map(to_f64).collect());
    }
    Ok((InvarianceCheck { holds, margin }, images))
}

/// Maps every vertex of `bx` through one lap of the cycle in exact
/// rational arithmetic and checks the images land strictly inside the box.
///
/// A marginal cycle fails this (its vertex images touch the boundary), and
/// a box leaking trajectories fails with a negative margin; domain errors
/// of the lap map (a vertex escaping to infinity mid-lap) surface as
/// [`GlassError::OutOfDomain`].
pub fn check_invariance(
    net: &GlassNetwork,
    cycle: &CycleSpec,
    bx: &TrappingBox,
) -> Result<InvarianceCheck, GlassError> {
    let lap = IdealLap::build(net, cycle)?;
    invariance_details(&lap, bx).map(|(inv, _)| inv)
}

/// Hilbert metric of the open box (pinned coordinates ignored): the max
/// over coordinates of the interval cross-ratio distance.
fn box_distance(bx: &TrappingBox, x: &[f64], y: &[f64]) -> f64 {
    let mut d = 0.0f64;
    for (k, iv) in bx.intervals.iter().enumerate() {
        let Some((a, b)) = *iv else { continue };
        let cr = ((x[k] - a) * (b - y[k])) / ((y[k] - a) * (b - x[k]));
        d = d.max(cr.ln().abs());
    }
    d
}

/// How a verified cycle behaves as an attractor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Ideal cycle with a certified trapping box: a unique attracting
    /// periodic orbit crosses the box.
    IdealUniqueOrbit,
    /// Nonempty spine with dominant multiplier `lambda > 1`: a unique
    /// attracting periodic orbit through the dominant eigendirection.
    UniqueOrbit,
    /// No attracting periodic orbit: the return map contracts toward the
    /// spine (`lambda < 1`), is marginal (`lambda = 1`), or the certificate
    /// failed.
    Degenerate,
}

/// Numerical evidence attached to a classification.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Certificates {
    /// Residual of the defining fixed-point or eigenvalue equation
    /// (0 when the value was computed in exact rational arithmetic).
    pub eigen_residual: Option<f64>,
    /// Birkhoff contraction rate of the return map on its cone or box
    /// (strictly below 1 certifies a unique fixed direction).
    pub contraction_rate: Option<f64>,
    /// Exact vertex-image test of the trapping box (ideal cycles only).
    pub invariance: Option<InvarianceCheck>,
}

/// Arrival of the periodic orbit on one of the cycle's walls.
#[derive(Debug, Clone, PartialEq)]
pub struct Waypoint {
    /// Time since the orbit left the base wall.
    pub cumulative_time: f64,
    /// Arrival point, original coordinates.
    pub point: Vec<f64>,
    /// Wall the point lies on.
    pub wall: Wall,
}

/// Result of [`classify`].
#[derive(Debug, Clone, PartialEq)]
pub struct CycleClassification {
    pub verdict: Verdict,
    /// `lambda` within [`CLASSIFY_TOL`] of 1: orbits drift under rounding
    /// rather than converge.
    pub marginal: bool,
    /// Dominant multiplier of the once-around map: the eigenvalue of the
    /// switching block (nonempty spine) or the fixed point's lap factor
    /// `e^T` (ideal).
    pub lambda: f64,
    /// Fixed point of the return map on the base wall, original
    /// coordinates; present for the unique-orbit verdicts.
    pub fixed_point: Option<Vec<f64>>,
    /// Orbit period `T = ln lambda` at the fixed point.
    pub period: Option<f64>,
    /// Arrival points of the periodic orbit on each wall, starting with
    /// the fixed point on the base wall.
    pub waypoints: Option<Vec<Waypoint>>,
    pub certificates: Certificates,
}

fn contain(
    net: &GlassNetwork,
    walls: &[Wall],
    wps: &[(f64, Vec<f64>)],
) -> Result<(), GlassError> {
    for (i, (_, p)) in wps.iter().enumerate() {
        let w = &walls[i];
        debug_assert_eq!(p[w.coord], w.pinned_value(net));
        for k in 0..p.len() {
            if k == w.coord {
                continue;
            }
            let (a, b) = w.free_interval(net, k);
            if !(p[k] > a && p[k] < b) {
                return Err(GlassError::ContainmentFailure { coord: k, value: p[k] });
            }
        }
    }
    Ok(())
}

fn classify_ideal(
    net: &GlassNetwork,
    cycle: &CycleSpec,
    cert: &CycleCertificate,
) -> Result<CycleClassification, GlassError> {
    let lap = IdealLap::build(net, cycle)?;
    let bx = trapping_box(net, cycle)?;
    let (inv, images) = invariance_details(&lap, &bx)?;

    let mut x = bx.barycenter();
    let mut converged = false;
    for _ in 0..FIXED_POINT_MAX_ITER {
        let (nx, _) = lap.apply_f64(&x)?;
        let diff =
            nx.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
        x = nx;
        if diff < FIXED_POINT_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(GlassError::NoConvergence { iterations: FIXED_POINT_MAX_ITER });
    }
    let (wps, ret, lambda) = lap.walk_f64(&x, true)?;
    let residual =
        ret.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
    contain(net, &cert.walls, &wps)?;

    let rate = if inv.holds {
        let mut diam = 0.0f64;
        for p in 0..images.len() {
            for q in (p + 1)..images.len() {
                diam = diam.max(box_distance(&bx, &images[p], &images[q]));
            }
        }
        Some(contraction_rate(diam))
    } else {
        None
    };

    let waypoints = wps
        .into_iter()
        .zip(&cert.walls)
        .map(|((cumulative_time, point), wall)| Waypoint {
            cumulative_time,
            point,
            wall: wall.clone(),
        })
        .collect();
    Ok(CycleClassification {
        verdict: if inv.holds { Verdict::IdealUniqueOrbit } else { Verdict::Degenerate },
        marginal: false,
        lambda,
        fixed_point: Some(x),
        period: Some(lambda.ln()),
        waypoints: Some(waypoints),
        certificates: Certificates {
            eigen_residual: Some(residual),
            contraction_rate: rate,
            invariance: Some(inv),
        },
    })
}

fn classify_recentered(
    net: &GlassNetwork,
    cycle: &CycleSpec,
    cert: &CycleCertificate,
) -> Result<CycleClassification, GlassError> {
    let (rc_net, vertex) = recenter_at_vertex(net, cycle)?;
    let (stages, composite) = stage_maps(&rc_net, cycle.regions(), &cert.walls)?;
    let dim = net.dimension();
    let pin = cert.walls[0].coord;
    let wall_coords: BTreeSet<usize> = cert.walls.iter().map(|w| w.coord).collect();
    let free: Vec<usize> = wall_coords.iter().copied().filter(|&k| k != pin).collect();

    // Dominant multiplier of the switching block on the base wall section.
    // One free coordinate: the cone is a ray and the multiplier is a single
    // exactly-known rational matrix entry. More: power iteration.
    let (lambda, exact_lambda, eig_vector, residual) = match free.len() {
        0 => (0.0, Some(Rat::zero()), None, None),
        1 => {
            let f = free[0];
            let lr = composite.a()[f][f].clone();
            (to_f64(&lr), Some(lr), None, Some(0.0))
        }
        _ => {
            let mut signs = vec![0i8; dim];
            for &k in &free {
                let (a, b) = cert.walls[0].free_interval(&rc_net, k);
                signs[k] = if b <= 0.0 {
                    -1
                } else if a >= 0.0 {
                    1
                } else {
                    return Err(GlassError::Malformed(format!(
                        "base-wall band of coordinate {k} does not touch its crossed threshold"
                    )));
                };
            }
            let cone = ConeSection::new(signs);
            let eig = dominant_eigenpair(
                &composite.a_f64(),
                &cone,
                DEFAULT_EIGEN_TOL,
                DEFAULT_EIGEN_MAX_ITER,
            )?;
            (eig.lambda, None, Some(eig.vector), Some(eig.residual))
        }
    };

    let rate = match free.len() {
        0 => None,
        1 => Some(0.0),
        _ => {
            let mut signs = vec![0i8; dim];
            for &k in &free {
                let (_, b) = cert.walls[0].free_interval(&rc_net, k);
                signs[k] = if b <= 0.0 { -1 } else { 1 };
            }
            let d = projective_diameter(&composite.a_f64(), &ConeSection::new(signs));
            Some(if d.is_finite() { contraction_rate(d) } else { 1.0 })
        }
    };

    if lambda <= 1.0 + CLASSIFY_TOL {
        return Ok(CycleClassification {
            verdict: Verdict::Degenerate,
            marginal: (lambda - 1.0).abs() <= CLASSIFY_TOL,
            lambda,
            fixed_point: None,
            period: None,
            waypoints: None,
            certificates: Certificates {
                eigen_residual: residual,
                contraction_rate: rate,
                invariance: None,
            },
        });
    }

    // Fixed point on the base wall, recentered frame. The never-switching
    // coordinates carry identity columns in the composite, so their fixed
    // values follow from the switching block in closed form:
    // y_k = (A[k, S] y_S) / (lambda - 1).
    let mut y = vec![0.0; dim];
    match (&exact_lambda, &eig_vector) {
        (Some(lr), _) => {
            let f = free[0];
            let psi_f = composite.psi()[f].clone();
            if psi_f.is_zero() {
                return Err(GlassError::Malformed(
                    "return map has no time dependence along the dominant direction".into(),
                ));
            }
            let one = Rat::one();
            let yf = (lr - &one) / psi_f;
            y[f] = to_f64(&yf);
            for k in 0..dim {
                if !wall_coords.contains(&k) {
                    let num = composite.a()[k][f].clone() * &yf;
                    y[k] = to_f64(&(num / (lr - &one)));
                }
            }
        }
        (None, Some(v)) => {
            let psi = composite.psi_f64();
            let dot: f64 = free.iter().map(|&k| psi[k] * v[k]).sum();
            if dot == 0.0 {
                return Err(GlassError::Malformed(
                    "return map has no time dependence along the dominant direction".into(),
                ));
            }
            let c = (lambda - 1.0) / dot;
            for &k in &free {
                y[k] = c * v[k];
            }
            let a = composite.a_f64();
            for k in 0..dim {
                if !wall_coords.contains(&k) {
                    let num: f64 = free.iter().map(|&s| a[k][s] * y[s]).sum();
                    y[k] = num / (lambda - 1.0);
                }
            }
        }
        (None, None) => unreachable!("lambda > 1 requires a switching direction"),
    }

    // Walk the orbit once around, recording arrivals in original frame.
    let stages_f64: Vec<F64Map> = stages.iter().map(|s| s.to_f64()).collect();
    let n = cycle.len();
    let uncenter = |p: &[f64]| -> Vec<f64> {
        p.iter().zip(&vertex).map(|(a, v)| a + v).collect()
    };
    let mut wps: Vec<(f64, Vec<f64>)> = vec![(0.0, uncenter(&y))];
    let mut cur = y.clone();
    let mut t = 0.0;
    for stage in stages_f64.iter().take(n - 1) {
        let (nx, lam) = stage.apply(&cur)?;
        cur = nx;
        t += lam.ln();
        wps.push((t, uncenter(&cur)));
    }
    contain(net, &cert.walls, &wps)?;

    let waypoints = wps
        .into_iter()
        .zip(&cert.walls)
        .map(|((cumulative_time, point), wall)| Waypoint {
            cumulative_time,
            point,
            wall: wall.clone(),
        })
        .collect();
    Ok(CycleClassification {
        verdict: Verdict::UniqueOrbit,
        marginal: false,
        lambda,
        fixed_point: Some(uncenter(&y)),
        period: Some(lambda.ln()),
        waypoints: Some(waypoints),
        certificates: Certificates {
            eigen_residual: residual,
            contraction_rate: rate,
            invariance: None,
        },
    })
}

/// Classifies a cycle: verification, then the spine decides the frame.
///
/// Ideal cycles go through the minimal embedding, a trapping box, and the
/// exact invariance certificate; cycles with a nonempty spine are
/// recentered and decided by the dominant multiplier of their switching
/// block. Tolerance for the marginal band around `lambda = 1` is
/// [`CLASSIFY_TOL`].
pub fn classify(
    net: &GlassNetwork,
    cycle: &CycleSpec,
) -> Result<CycleClassification, GlassError> {
    let cert = verify_cyclic_attractor(net, cycle)?;
    let sp = spine(net, cycle)?;
    if sp.is_empty() {
        classify_ideal(net, cycle, &cert)
    } else {
        classify_recentered(net, cycle, &cert)
    }
}

/// Finds every cycle of the transition graph restricted to regions with a
/// single switching coordinate (out-degree one).
///
/// Each such region has a deterministic successor, so following successors
/// either leaves the restricted set or closes a cycle; the cycles found
/// this way satisfy the cyclic-attractor conditions by construction. They
/// are returned rotated to start at their lexicographically smallest
/// region, sorted, without duplicates.
pub fn find_cyclic_attractors(net: &GlassNetwork) -> Result<Vec<CycleSpec>, GlassError> {
    let graph = transition_graph(net)?;
    let deterministic: BTreeSet<RegionIndex> = graph
        .nodes()
        .filter(|r| graph.out_degree(r) == 1)
        .cloned()
        .collect();
    let mut explored: BTreeSet<RegionIndex> = BTreeSet::new();
    let mut cycles: BTreeSet<Vec<RegionIndex>> = BTreeSet::new();
    for start in &deterministic {
        if explored.contains(start) {
            continue;
        }
        let mut pos: BTreeMap<RegionIndex, usize> = BTreeMap::new();
        let mut path: Vec<RegionIndex> = Vec::new();
        let mut cur = start.clone();
        loop {
            if !deterministic.contains(&cur) || explored.contains(&cur) {
                break;
            }
            if let Some(&p) = pos.get(&cur) {
                let cyc = CycleSpec { regions: path[p..].to_vec() }.rotated_to_min();
                cycles.insert(cyc.regions);
                break;
            }
            pos.insert(cur.clone(), path.len());
            path.push(cur.clone());
            cur = graph.successors(&cur)[0].clone();
        }
        explored.extend(path);
    }
    Ok(cycles
        .into_iter()
        .map(|regions| CycleSpec::new(regions).expect("functional-graph cycles are simple"))
        .collect())
}
