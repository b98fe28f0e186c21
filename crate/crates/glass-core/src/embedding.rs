//! Coordinate changes that put every crossed threshold at zero.
//!
//! Three constructions, all affine and all exactly invertible on their
//! images:
//!
//! * **Embedding** a general network into a binary one: each pair
//!   `(variable i, threshold j)` of the source becomes one embedded
//!   variable `y_(i,j) = x_i - theta_i^j`, thresholded at 0. The embedded
//!   trajectory of a source trajectory is again a Glass flow, with focal
//!   points the embedded images of the source focal points.
//! * **Compression** of a binary network along a cycle: coordinates the
//!   cycle never switches are dropped. The switching dynamics of the
//!   cycle is unchanged.
//! * **Recentering** a network whose cycle has a nonempty spine: a common
//!   closure point of all the cycle's walls is translated to the origin,
//!   after which every crossed threshold sits at 0 and the wall-to-wall
//!   maps take their normal form.
//!
//! Embedded coordinates are ordered variable-major, threshold-minor: all
//! thresholds of variable 0 first (ascending), then variable 1, and so on.

use std::collections::BTreeMap;

use crate::analysis::{spine, CycleSpec};
use crate::error::GlassError;
use crate::network::{GlassNetwork, RegionIndex, ThresholdLadder};

/// Tolerance for the consistency relations checked by [`Embedding::unembed`].
pub const UNEMBED_TOL: f64 = 1e-12;

/// One embedded coordinate: `y = x_var - threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRow {
    pub var: usize,
    /// Level of `threshold` in the ladder of `var`.
    pub level: usize,
    pub threshold: f64,
}

/// Affine map `y = B x - v` from source coordinates to embedded ones.
///
/// `B` is the 0/1 matrix with one row per embedded coordinate, a single 1
/// in that row's source column; `v` stacks the threshold values. Points on
/// the image subspace satisfy `y_r - y_s = v_s - v_r` for rows `r, s` of
/// the same variable, which is what [`unembed`](Self::unembed) verifies.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    source_dim: usize,
    rows: Vec<EmbeddingRow>,
    /// Row indices per source variable, ascending level.
    spans: Vec<Vec<usize>>,
}

impl Embedding {
    fn from_rows(source_dim: usize, rows: Vec<EmbeddingRow>) -> Self {
        let mut spans = vec![Vec::new(); source_dim];
        for (r, row) in rows.iter().enumerate() {
            spans[row.var].push(r);
        }
        Embedding { source_dim, rows, spans }
    }

    /// Embedding of every threshold of the network.
    pub fn full(net: &GlassNetwork) -> Self {
        let mut rows = Vec::new();
        for (i, ladder) in net.ladders().iter().enumerate() {
            for (j, &theta) in ladder.values().iter().enumerate() {
                rows.push(EmbeddingRow { var: i, level: j, threshold: theta });
            }
        }
        Embedding::from_rows(net.dimension(), rows)
    }

    pub fn source_dimension(&self) -> usize {
        self.source_dim
    }

    pub fn embedded_dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[EmbeddingRow] {
        &self.rows
    }

    /// Embedded coordinates of source variable `var`.
    pub fn rows_of(&self, var: usize) -> &[usize] {
        &self.spans[var]
    }

    pub fn has_rows(&self, var: usize) -> bool {
        !self.spans[var].is_empty()
    }

    /// The 0/1 matrix `B`.
    pub fn b_matrix(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| {
                let mut r = vec![0.0; self.source_dim];
                r[row.var] = 1.0;
                r
            })
            .collect()
    }

    /// The offset `v` of threshold values.
    pub fn offset(&self) -> Vec<f64> {
        self.rows.iter().map(|row| row.threshold).collect()
    }

    /// `y = B x - v`.
    pub fn embed_point(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|row| x[row.var] - row.threshold).collect()
    }

    /// Embedded region of a source region: embedded coordinate `(i, j)` is
    /// in its upper band exactly when the source band of `x_i` lies above
    /// threshold `j`.
    pub fn embed_region(&self, r: &RegionIndex) -> RegionIndex {
        RegionIndex::new(
            self.rows
                .iter()
                .map(|row| usize::from(r.level(row.var) > row.level))
                .collect(),
        )
    }

    /// Inverts the embedding on its image: `x_i` is recovered from the
    /// variable's first embedded coordinate, after checking that all of the
    /// variable's coordinates agree on it to within [`UNEMBED_TOL`].
    pub fn unembed(&self, y: &[f64]) -> Result<Vec<f64>, GlassError> {
        let mut x = Vec::with_capacity(self.source_dim);
        for (var, span) in self.spans.iter().enumerate() {
            if span.is_empty() {
                return Err(GlassError::Malformed(format!(
                    "variable {var} has no embedded coordinate"
                )));
            }
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &r in span {
                let cand = y[r] + self.rows[r].threshold;
                lo = lo.min(cand);
                hi = hi.max(cand);
            }
            let spread = hi - lo;
            if spread > UNEMBED_TOL {
                return Err(GlassError::NotOnSubspace { var, spread });
            }
            x.push(y[span[0]] + self.rows[span[0]].threshold);
        }
        Ok(x)
    }
}

/// Embeds a network into binary coordinates, one variable per threshold.
///
/// The returned network has every ladder equal to `{0}` and a focal entry
/// for the embedded image of each source region that has one; embedded
/// regions that are not images of source regions (orthants missed by the
/// image subspace) stay without focal data.
pub fn embed_network(net: &GlassNetwork) -> Result<(GlassNetwork, Embedding), GlassError> {
    let emb = Embedding::full(net);
    let ladders = vec![ThresholdLadder::new(vec![0.0]); emb.embedded_dimension()];
    let mut focal = BTreeMap::new();
    for (r, f) in net.focal_entries() {
        let prev = focal.insert(emb.embed_region(r), emb.embed_point(f));
        debug_assert!(prev.is_none(), "full embedding is injective on regions");
    }
    Ok((GlassNetwork::new(ladders, focal)?, emb))
}

/// Embeds only the thresholds the cycle actually crosses.
///
/// The embedded network carries focal entries for the cycle regions alone;
/// that is all a return-map construction needs. Two cycle regions that
/// collapse to the same embedded region make the construction ill-formed
/// and are reported as a collision.
pub fn minimal_embedding(
    net: &GlassNetwork,
    cycle: &CycleSpec,
) -> Result<(GlassNetwork, Embedding), GlassError> {
    let walls = cycle.walls()?;
    let mut crossed: Vec<(usize, usize)> = walls.iter().map(|w| (w.coord, w.threshold_level)).collect();
    crossed.sort_unstable();
    crossed.dedup();
    let rows = crossed
        .iter()
        .map(|&(var, level)| EmbeddingRow { var, level, threshold: net.ladder(var).value(level) })
        .collect();
    let emb = Embedding::from_rows(net.dimension(), rows);

    let ladders = vec![ThresholdLadder::new(vec![0.0]); emb.embedded_dimension()];
    let mut focal: BTreeMap<RegionIndex, Vec<f64>> = BTreeMap::new();
    let mut sources: BTreeMap<RegionIndex, RegionIndex> = BTreeMap::new();
    for r in cycle.regions() {
        let key = emb.embed_region(r);
        if let Some(first) = sources.get(&key) {
            return Err(GlassError::CompressionCollision {
                first: first.clone(),
                second: r.clone(),
            });
        }
        sources.insert(key.clone(), r.clone());
        focal.insert(key, emb.embed_point(net.focal(r)?));
    }
    Ok((GlassNetwork::new(ladders, focal)?, emb))
}

/// Projection of a binary network onto the coordinates a cycle switches.
#[derive(Debug, Clone, PartialEq)]
pub struct Compression {
    kept: Vec<usize>,
    source_dim: usize,
}

impl Compression {
    /// Retained source coordinates, ascending.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn source_dimension(&self) -> usize {
        self.source_dim
    }

    /// `true` when nothing was dropped.
    pub fn is_identity(&self) -> bool {
        self.kept.len() == self.source_dim
    }

    pub fn compress_region(&self, r: &RegionIndex) -> RegionIndex {
        RegionIndex::new(self.kept.iter().map(|&k| r.level(k)).collect())
    }

    pub fn compress_point(&self, x: &[f64]) -> Vec<f64> {
        self.kept.iter().map(|&k| x[k]).collect()
    }
}

/// Drops the coordinates of a binary network that `cycle` never switches.
///
/// Focal entries of all regions are carried over through the projection;
/// regions that become identical must agree on their projected focal
/// points (they do whenever the dropped coordinates are genuinely slaved),
/// otherwise the projection is ill-defined and a collision is reported.
/// A cycle that switches every coordinate yields the identity compression,
/// returning the network unchanged.
pub fn compress(
    net: &GlassNetwork,
    cycle: &CycleSpec,
) -> Result<(GlassNetwork, Compression), GlassError> {
    if net.ladders().iter().any(|l| l.len() != 1) {
        return Err(GlassError::NotBinary);
    }
    let walls = cycle.walls()?;
    let mut kept: Vec<usize> = walls.iter().map(|w| w.coord).collect();
    kept.sort_unstable();
    kept.dedup();
    let comp = Compression { kept, source_dim: net.dimension() };

    let ladders: Vec<ThresholdLadder> =
        comp.kept.iter().map(|&k| net.ladder(k).clone()).collect();
    let mut focal: BTreeMap<RegionIndex, Vec<f64>> = BTreeMap::new();
    let mut sources: BTreeMap<RegionIndex, RegionIndex> = BTreeMap::new();
    for (r, f) in net.focal_entries() {
        let key = comp.compress_region(r);
        let val = comp.compress_point(f);
        match sources.get(&key) {
            None => {
                sources.insert(key.clone(), r.clone());
                focal.insert(key, val);
            }
            Some(first) => {
                if focal[&key] != val {
                    return Err(GlassError::CompressionCollision {
                        first: first.clone(),
                        second: r.clone(),
                    });
                }
            }
        }
    }
    Ok((GlassNetwork::new(ladders, focal)?, comp))
}

/// Translates the network so the cycle's spine touches the origin.
///
/// Requires a nonempty spine. The chosen vertex takes, in every coordinate,
/// the lowest-level threshold consistent with the spine (for a pinned
/// coordinate that is the pinned value; for a free interval its finite
/// lower end, or the upper one when the interval is a lower ray). After the
/// translation every threshold the cycle crosses sits at 0. Returns the
/// translated network and the vertex, so points map back as `x + vertex`.
pub fn recenter_at_vertex(
    net: &GlassNetwork,
    cycle: &CycleSpec,
) -> Result<(GlassNetwork, Vec<f64>), GlassError> {
    let sp = spine(net, cycle)?;
    if sp.is_empty() {
        return Err(GlassError::NotNonIdeal);
    }
    let mut vertex = Vec::with_capacity(net.dimension());
    for k in 0..net.dimension() {
        let (lo, hi) = sp.interval(k).expect("nonempty spine has per-coordinate intervals");
        if lo.is_finite() {
            vertex.push(lo);
        } else if hi.is_finite() {
            vertex.push(hi);
        } else {
            return Err(GlassError::Malformed(format!(
                "spine is unbounded in coordinate {k}; no vertex to recenter at"
            )));
        }
    }
    let ladders: Vec<ThresholdLadder> = net
        .ladders()
        .iter()
        .enumerate()
        .map(|(k, l)| ThresholdLadder::new(l.values().iter().map(|t| t - vertex[k]).collect()))
        .collect();
    let focal = net
        .focal_entries()
        .map(|(r, f)| {
            (r.clone(), f.iter().zip(&vertex).map(|(x, v)| x - v).collect::<Vec<f64>>())
        })
        .collect();
    Ok((GlassNetwork::new(ladders, focal)?, vertex))
}
