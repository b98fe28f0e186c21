//! Piecewise-linear Glass networks.
//!
//! A network has `n` variables. Variable `i` carries a strictly increasing
//! ladder of thresholds which slice its axis into `J_i + 1` open bands;
//! products of bands are the open *regions* of phase space. Each region may
//! be assigned a *focal point*: inside the region every trajectory of
//!
//! ```text
//! dy/dt = -y + F(region)
//! ```
//!
//! is a straight-line segment aimed at the focal point (uniform unit decay).
//! When a trajectory reaches a region boundary it crosses a *wall* (one
//! coordinate exactly at a threshold) into the neighbouring region and a new
//! focal point takes over.
//!
//! Region membership is exact: a coordinate equal to a threshold is on a
//! wall, never inside a region, and no epsilon is applied anywhere in this
//! module. All indices in the public API are 0-based.

use std::collections::BTreeMap;

use crate::error::GlassError;

/// Strictly increasing thresholds of one variable.
///
/// Construction does not reject malformed ladders so that [`validate`] can
/// report them; every other operation assumes validity.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdLadder {
    thresholds: Vec<f64>,
}

impl ThresholdLadder {
    pub fn new(thresholds: Vec<f64>) -> Self {
        ThresholdLadder { thresholds }
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// Threshold at 0-based level `j`.
    pub fn value(&self, j: usize) -> f64 {
        self.thresholds[j]
    }

    pub fn values(&self) -> &[f64] {
        &self.thresholds
    }

    fn is_strictly_increasing(&self) -> bool {
        self.thresholds.windows(2).all(|w| w[0] < w[1])
    }

    /// Number of thresholds strictly below `x`, or an error when `x` sits
    /// exactly on one.
    pub fn band_of(&self, x: f64) -> Result<usize, usize> {
        let mut below = 0;
        for (j, &t) in self.thresholds.iter().enumerate() {
            if x == t {
                return Err(j);
            }
            if t < x {
                below += 1;
            }
        }
        Ok(below)
    }

    /// Open band `(lo, hi)` of level `j`; outermost bands are half-infinite.
    pub fn band_bounds(&self, j: usize) -> (f64, f64) {
        let lo = if j == 0 { f64::NEG_INFINITY } else { self.thresholds[j - 1] };
        let hi = if j == self.thresholds.len() { f64::INFINITY } else { self.thresholds[j] };
        (lo, hi)
    }
}

/// A region of phase space, identified by one 0-based band level per variable.
///
/// Level `l` of variable `i` is the open interval between thresholds `l - 1`
/// and `l` of its ladder (half-infinite at the ends), so levels range over
/// `0 ..= J_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionIndex {
    levels: Vec<usize>,
}

impl RegionIndex {
    pub fn new(levels: Vec<usize>) -> Self {
        RegionIndex { levels }
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> usize {
        self.levels[i]
    }

    pub fn dimension(&self) -> usize {
        self.levels.len()
    }

    /// The neighbouring region one band up or down in coordinate `i`.
    pub fn step(&self, i: usize, direction: Orientation) -> RegionIndex {
        let mut levels = self.levels.clone();
        match direction {
            Orientation::Up => levels[i] += 1,
            Orientation::Down => levels[i] -= 1,
        }
        RegionIndex { levels }
    }
}

/// Rendered as the comma-joined level vector, e.g. `1,0,2`; this string is
/// also the region-key syntax of the CLI file format.
impl std::fmt::Display for RegionIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Direction of a wall crossing relative to the band level of the `from`
/// region: `Up` increases the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Up,
    Down,
}

/// The codimension-1 boundary shared by two regions differing by one band
/// level in a single coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Wall {
    pub from: RegionIndex,
    pub to: RegionIndex,
    /// Coordinate that switches.
    pub coord: usize,
    /// 0-based level of the crossed threshold in the ladder of `coord`.
    pub threshold_level: usize,
    pub orientation: Orientation,
}

impl Wall {
    /// Wall between two adjacent regions, or `None` if they are not adjacent.
    pub fn between(from: &RegionIndex, to: &RegionIndex) -> Option<Wall> {
        if from.dimension() != to.dimension() {
            return None;
        }
        let mut diff = None;
        for i in 0..from.dimension() {
            let (a, b) = (from.level(i), to.level(i));
            if a != b {
                if diff.is_some() {
                    return None;
                }
                let orientation = if b == a + 1 {
                    Orientation::Up
                } else if a == b + 1 {
                    Orientation::Down
                } else {
                    return None;
                };
                diff = Some((i, orientation));
            }
        }
        let (coord, orientation) = diff?;
        let threshold_level = match orientation {
            Orientation::Up => from.level(coord),
            Orientation::Down => to.level(coord),
        };
        Some(Wall { from: from.clone(), to: to.clone(), coord, threshold_level, orientation })
    }

    /// Threshold value the wall sits on.
    pub fn pinned_value(&self, net: &GlassNetwork) -> f64 {
        net.ladder(self.coord).value(self.threshold_level)
    }

    /// Open interval of free coordinate `i` on the wall (`i != coord`).
    /// Both adjacent regions agree on it.
    pub fn free_interval(&self, net: &GlassNetwork, i: usize) -> (f64, f64) {
        debug_assert_ne!(i, self.coord);
        net.ladder(i).band_bounds(self.from.level(i))
    }
}

impl std::fmt::Display for Wall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dir = match self.orientation {
            Orientation::Up => "up",
            Orientation::Down => "down",
        };
        write!(f, "x{}@{}:{dir}", self.coord, self.threshold_level)
    }
}

/// Coordinates partitioned by where the focal point of a region sits
/// relative to the region itself: `steady` coordinates have their focal
/// value inside the region's band, `up` above it, `down` below it.
///
/// Trajectories inside the region move monotonically toward the focal
/// point, so `up ∪ down` is exactly the set of coordinates that can reach
/// a wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingSets {
    pub steady: Vec<usize>,
    pub up: Vec<usize>,
    pub down: Vec<usize>,
}

impl SwitchingSets {
    /// Coordinates that move toward a wall, in ascending order.
    pub fn switching(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.up.iter().chain(self.down.iter()).copied().collect();
        s.sort_unstable();
        s
    }
}

/// An immutable Glass network: one threshold ladder per variable plus a
/// (possibly partial) focal-point map.
///
/// The focal map may omit regions; operations that need a missing entry
/// fail with [`GlassError::MissingFocal`] rather than guessing. Entries are
/// kept in a `BTreeMap` so every iteration over regions is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct GlassNetwork {
    ladders: Vec<ThresholdLadder>,
    focal: BTreeMap<RegionIndex, Vec<f64>>,
}

impl GlassNetwork {
    /// Builds a network, rejecting structurally unusable input: focal keys
    /// or vectors of the wrong length, or band levels out of range. Softer
    /// defects (non-increasing ladders, focal points on thresholds, missing
    /// entries) are left for [`validate`] to report.
    pub fn new(
        ladders: Vec<ThresholdLadder>,
        focal: BTreeMap<RegionIndex, Vec<f64>>,
    ) -> Result<Self, GlassError> {
        let n = ladders.len();
        if n == 0 {
            return Err(GlassError::Malformed("network must have at least one variable".into()));
        }
        for (region, f) in &focal {
            if region.dimension() != n {
                return Err(GlassError::Malformed(format!(
                    "focal key {region} has {} levels, expected {n}",
                    region.dimension()
                )));
            }
            if f.len() != n {
                return Err(GlassError::Malformed(format!(
                    "focal point for region {region} has {} coordinates, expected {n}",
                    f.len()
                )));
            }
            for i in 0..n {
                if region.level(i) > ladders[i].len() {
                    return Err(GlassError::Malformed(format!(
                        "region {region}: level {} of coordinate {i} exceeds ladder length {}",
                        region.level(i),
                        ladders[i].len()
                    )));
                }
            }
        }
        Ok(GlassNetwork { ladders, focal })
    }

    pub fn dimension(&self) -> usize {
        self.ladders.len()
    }

    pub fn ladder(&self, i: usize) -> &ThresholdLadder {
        &self.ladders[i]
    }

    pub fn ladders(&self) -> &[ThresholdLadder] {
        &self.ladders
    }

    pub fn focal(&self, region: &RegionIndex) -> Result<&[f64], GlassError> {
        self.focal
            .get(region)
            .map(Vec::as_slice)
            .ok_or_else(|| GlassError::MissingFocal(region.clone()))
    }

    pub fn focal_entries(&self) -> impl Iterator<Item = (&RegionIndex, &[f64])> {
        self.focal.iter().map(|(r, f)| (r, f.as_slice()))
    }

    pub fn has_focal(&self, region: &RegionIndex) -> bool {
        self.focal.contains_key(region)
    }

    /// Total number of regions, `prod_i (J_i + 1)`.
    pub fn region_count(&self) -> usize {
        self.ladders.iter().map(|l| l.len() + 1).product()
    }

    /// All regions in lexicographic order of their level vectors.
    ///
    /// The count grows as the product of ladder sizes; callers enumerating
    /// large networks do so knowingly.
    pub fn all_regions(&self) -> Vec<RegionIndex> {
        let mut out = Vec::with_capacity(self.region_count());
        let mut levels = vec![0usize; self.dimension()];
        loop {
            out.push(RegionIndex::new(levels.clone()));
            let mut i = self.dimension();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if levels[i] < self.ladders[i].len() {
                    levels[i] += 1;
                    break;
                }
                levels[i] = 0;
            }
        }
    }

    /// Region containing `x`, by exact threshold comparison per coordinate.
    pub fn region_of(&self, x: &[f64]) -> Result<RegionIndex, GlassError> {
        if x.len() != self.dimension() {
            return Err(GlassError::Malformed(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.dimension()
            )));
        }
        let mut levels = Vec::with_capacity(x.len());
        for (i, &xi) in x.iter().enumerate() {
            match self.ladders[i].band_of(xi) {
                Ok(l) => levels.push(l),
                Err(j) => return Err(GlassError::OnWall { coord: i, level: j }),
            }
        }
        Ok(RegionIndex::new(levels))
    }

    /// Region the given point *would* occupy, used to compare a focal point
    /// against a region. Same as [`region_of`](Self::region_of); provided for
    /// readability at call sites dealing with focal points.
    pub fn region_of_focal(&self, f: &[f64]) -> Result<RegionIndex, GlassError> {
        self.region_of(f)
    }

    /// Splits coordinates by the position of the region's focal point.
    pub fn switching_sets(&self, region: &RegionIndex) -> Result<SwitchingSets, GlassError> {
        let f = self.focal(region)?;
        let mut sets =
            SwitchingSets { steady: Vec::new(), up: Vec::new(), down: Vec::new() };
        for i in 0..self.dimension() {
            let fi_level = match self.ladders[i].band_of(f[i]) {
                Ok(l) => l,
                Err(j) => return Err(GlassError::OnWall { coord: i, level: j }),
            };
            use std::cmp::Ordering::*;
            match fi_level.cmp(&region.level(i)) {
                Equal => sets.steady.push(i),
                Greater => sets.up.push(i),
                Less => sets.down.push(i),
            }
        }
        Ok(sets)
    }

    /// Checks that a point is strictly inside the open region.
    pub fn contains(&self, region: &RegionIndex, x: &[f64]) -> Result<(), GlassError> {
        for i in 0..self.dimension() {
            let (lo, hi) = self.ladders[i].band_bounds(region.level(i));
            if !(x[i] > lo && x[i] < hi) {
                return Err(GlassError::PointNotInRegion { region: region.clone(), coord: i });
            }
        }
        Ok(())
    }
}

/// One defect found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    EmptyLadder { coord: usize },
    NonIncreasingLadder { coord: usize },
    FocalOnThreshold { region: RegionIndex, coord: usize, level: usize },
    MissingFocal { region: RegionIndex },
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationIssue::EmptyLadder { coord } => {
                write!(f, "coordinate {coord}: ladder has no thresholds")
            }
            ValidationIssue::NonIncreasingLadder { coord } => {
                write!(f, "coordinate {coord}: thresholds are not strictly increasing")
            }
            ValidationIssue::FocalOnThreshold { region, coord, level } => {
                write!(
                    f,
                    "region {region}: focal coordinate {coord} equals threshold level {level}"
                )
            }
            ValidationIssue::MissingFocal { region } => {
                write!(f, "region {region}: no focal point defined")
            }
        }
    }
}

/// Outcome of [`validate`]; an empty issue list means the network satisfies
/// every structural invariant and its focal map is total.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Reports every defect of the network: empty or non-increasing ladders,
/// focal coordinates lying exactly on a threshold, and regions without a
/// focal entry. Library operations tolerate partial focal maps; the report
/// flags them anyway because file-level network specs are expected total.
pub fn validate(net: &GlassNetwork) -> ValidationReport {
    let mut issues = Vec::new();
    for (i, ladder) in net.ladders().iter().enumerate() {
        if ladder.is_empty() {
            issues.push(ValidationIssue::EmptyLadder { coord: i });
        } else if !ladder.is_strictly_increasing() {
            issues.push(ValidationIssue::NonIncreasingLadder { coord: i });
        }
    }
    for (region, f) in net.focal_entries() {
        for i in 0..net.dimension() {
            for (j, &t) in net.ladder(i).values().iter().enumerate() {
                if f[i] == t {
                    issues.push(ValidationIssue::FocalOnThreshold {
                        region: region.clone(),
                        coord: i,
                        level: j,
                    });
                }
            }
        }
    }
    for region in net.all_regions() {
        if !net.has_focal(&region) {
            issues.push(ValidationIssue::MissingFocal { region });
        }
    }
    ValidationReport { issues }
}

/// The state transition graph: every region is a node; each switching
/// coordinate of a region contributes one edge toward the neighbour one band
/// closer to the focal point.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionGraph {
    edges: BTreeMap<RegionIndex, Vec<RegionIndex>>,
}

impl TransitionGraph {
    pub fn nodes(&self) -> impl Iterator<Item = &RegionIndex> {
        self.edges.keys()
    }

    pub fn successors(&self, region: &RegionIndex) -> &[RegionIndex] {
        self.edges.get(region).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn out_degree(&self, region: &RegionIndex) -> usize {
        self.successors(region).len()
    }

    pub fn node_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RegionIndex, &[RegionIndex])> {
        self.edges.iter().map(|(r, s)| (r, s.as_slice()))
    }
}

/// Builds the full transition graph. Requires a total focal map: the node
/// set is all `prod_i (J_i + 1)` regions and each one needs its switching
/// sets.
pub fn transition_graph(net: &GlassNetwork) -> Result<TransitionGraph, GlassError> {
    let mut edges = BTreeMap::new();
    for region in net.all_regions() {
        let sets = net.switching_sets(&region)?;
        let mut succ = Vec::new();
        for &i in &sets.up {
            succ.push(region.step(i, Orientation::Up));
        }
        for &i in &sets.down {
            succ.push(region.step(i, Orientation::Down));
        }
        succ.sort();
        edges.insert(region, succ);
    }
    Ok(TransitionGraph { edges })
}
