//! Reference networks used throughout the test suites and shipped with the
//! CLI as JSON files.
//!
//! All coordinates are dyadic rationals, so every value below is exact in
//! `f64` and the wall-map coefficients built from them are exact in rational
//! arithmetic.
//!
//! | net | shape | cycle | behaviour |
//! |-----|-------|-------|-----------|
//! | A   | 2 vars, thresholds {0},{0} | 4 orthants | marginally degenerate: return multiplier 1, crossing magnitudes decay like `1/(1+N)` |
//! | B   | same | 4 orthants | unique periodic orbit: multiplier 16, fixed point `(-1, 0)`, period `ln 16` |
//! | E   | same (B with magnitudes transposed) | 4 orthants | degenerate: multiplier 1/16, trajectories reach the central vertex in finite time |
//! | C   | 2 vars, thresholds {0,1},{0} | 6 regions | ideal (empty spine): unique periodic orbit via trapping-box contraction |
//! | D   | 3 vars, thresholds {0}x3 | 4 orthants | B extended by a never-switching third coordinate; compresses to B |
//! | F   | 2 vars, thresholds {-1,0},{0,1} | 4 regions around vertex (0,0) | B's focal geometry scaled by 1/4; non-ideal with a one-point spine |

use std::collections::BTreeMap;

use crate::analysis::CycleSpec;
use crate::network::{GlassNetwork, RegionIndex, ThresholdLadder};

fn build(ladders: Vec<Vec<f64>>, focal: &[(&[usize], &[f64])]) -> GlassNetwork {
    let ladders = ladders.into_iter().map(ThresholdLadder::new).collect();
    let mut map = BTreeMap::new();
    for (levels, f) in focal {
        map.insert(RegionIndex::new(levels.to_vec()), f.to_vec());
    }
    GlassNetwork::new(ladders, map).expect("fixture networks are well-formed")
}

fn cycle(regions: &[&[usize]]) -> CycleSpec {
    CycleSpec::new(regions.iter().map(|l| RegionIndex::new(l.to_vec())).collect())
        .expect("fixture cycles are well-formed")
}

/// Binary 2-variable network whose return map around the four orthants is
/// marginal: each quarter turn maps crossing magnitude `a` to `a/(1+a)`.
pub fn net_a() -> GlassNetwork {
    build(
        vec![vec![0.0], vec![0.0]],
        &[
            (&[0, 0], &[1.0, -1.0]),
            (&[1, 0], &[1.0, 1.0]),
            (&[1, 1], &[-1.0, 1.0]),
            (&[0, 1], &[-1.0, -1.0]),
        ],
    )
}

/// Binary 2-variable network with an attracting periodic orbit: quarter-turn
/// magnitude action `b -> 2b/(1+b)`, full-lap action `b -> 16b/(1+15b)`.
pub fn net_b() -> GlassNetwork {
    build(
        vec![vec![0.0], vec![0.0]],
        &[
            (&[0, 0], &[1.0, -2.0]),
            (&[1, 0], &[2.0, 1.0]),
            (&[1, 1], &[-1.0, 2.0]),
            (&[0, 1], &[-2.0, -1.0]),
        ],
    )
}

/// [`net_b`] with the focal magnitudes transposed; the lap multiplier drops
/// to 1/16 and trajectories spiral into the vertex in finite total time.
pub fn net_e() -> GlassNetwork {
    build(
        vec![vec![0.0], vec![0.0]],
        &[
            (&[0, 0], &[2.0, -1.0]),
            (&[1, 0], &[1.0, 2.0]),
            (&[1, 1], &[-2.0, 1.0]),
            (&[0, 1], &[-1.0, -2.0]),
        ],
    )
}

/// General 2-variable network (two thresholds on the first variable) with an
/// ideal six-region cycle: the closures of its walls have empty intersection.
pub fn net_c() -> GlassNetwork {
    build(
        vec![vec![0.0, 1.0], vec![0.0]],
        &[
            (&[0, 0], &[2.0, -1.0]),
            (&[1, 0], &[2.0, -1.0]),
            (&[2, 0], &[2.0, 1.0]),
            (&[2, 1], &[0.5, 1.0]),
            (&[1, 1], &[-1.0, 1.0]),
            (&[0, 1], &[-1.0, -1.0]),
        ],
    )
}

/// Three-variable binary network: [`net_b`] in the first two coordinates,
/// third coordinate pinned toward -1 everywhere. The third coordinate never
/// switches along the cycle, so the cycle is non-full-rank and compresses
/// to [`net_b`].
pub fn net_d() -> GlassNetwork {
    build(
        vec![vec![0.0], vec![0.0], vec![0.0]],
        &[
            (&[0, 0, 0], &[1.0, -2.0, -1.0]),
            (&[1, 0, 0], &[2.0, 1.0, -1.0]),
            (&[1, 1, 0], &[-1.0, 2.0, -1.0]),
            (&[0, 1, 0], &[-2.0, -1.0, -1.0]),
            (&[0, 0, 1], &[1.0, -2.0, -1.0]),
            (&[1, 0, 1], &[2.0, 1.0, -1.0]),
            (&[1, 1, 1], &[-1.0, 2.0, -1.0]),
            (&[0, 1, 1], &[-2.0, -1.0, -1.0]),
        ],
    )
}

/// General 2-variable network (thresholds {-1,0} and {0,1}) whose cycle
/// surrounds the vertex (0,0). Cycle focal points follow [`net_b`]'s sign
/// geometry with magnitudes shrunk to stay strictly between the outer
/// thresholds, so the cycle's walls all sit on the two central thresholds
/// and the spine is the single point (0,0). Hand-composing the four stage
/// maps around the recentered cycle gives the lap matrix [[4,4],[0,0]]
/// with psi = (-20,-18): multiplier 4, fixed point (-3/20, 0), period
/// ln 4. Focal points of the five off-cycle regions all feed the cycle, so
/// the transition graph has a single attractor.
pub fn net_f() -> GlassNetwork {
    build(
        vec![vec![-1.0, 0.0], vec![0.0, 1.0]],
        &[
            (&[1, 0], &[0.5, -0.5]),
            (&[2, 0], &[2.0, 0.5]),
            (&[2, 1], &[-0.5, 0.5]),
            (&[1, 1], &[-0.5, -0.5]),
            (&[0, 0], &[0.25, -0.5]),
            (&[0, 1], &[0.25, 0.5]),
            (&[0, 2], &[0.25, 0.5]),
            (&[1, 2], &[-0.5, 0.5]),
            (&[2, 2], &[-0.25, 0.5]),
        ],
    )
}

/// The four-orthant cycle shared by nets A, B, and E, starting in the
/// all-negative orthant.
pub fn cycle_quadrants() -> CycleSpec {
    cycle(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])
}

/// The ideal six-region cycle of [`net_c`].
pub fn cycle_c() -> CycleSpec {
    cycle(&[&[0, 0], &[1, 0], &[2, 0], &[2, 1], &[1, 1], &[0, 1]])
}

/// The four-orthant cycle of [`net_d`] in the third coordinate's lower band.
pub fn cycle_d() -> CycleSpec {
    cycle(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[0, 1, 0]])
}

/// The cycle of [`net_f`] around the vertex (0,0).
pub fn cycle_f() -> CycleSpec {
    cycle(&[&[1, 0], &[2, 0], &[2, 1], &[1, 1]])
}
