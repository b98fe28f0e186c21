//! Frame changes commute with simulation, event by event.
//!
//! Embedding, compression, and recentering each claim to be a change of
//! coordinates for the dynamics. The check is operational: simulate in
//! both frames from corresponding starts and compare every crossing's
//! time and point through the frame map.

use glass_core::dynamics::{simulate, SimulationLimits};
use glass_core::embedding::{compress, embed_network, recenter_at_vertex};
use glass_core::fixtures;
use glass_core::network::{GlassNetwork, ThresholdLadder};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

const TOL: f64 = 1e-10;
const STARTS: usize = 100;

fn limits(max_events: usize) -> SimulationLimits {
    SimulationLimits { max_events, ..Default::default() }
}

/// Criterion: source simulation pushed through the embedding equals the
/// embedded-network simulation, event for event.
fn check_full_embedding(net: &GlassNetwork, ranges: &[(f64, f64)], seed: u64) {
    let (emb_net, emb) = embed_network(net).unwrap();
    let mut rng = StdRng::seed_from_u64(seed);
    let lim = limits(30);
    for _ in 0..STARTS {
        let x0: Vec<f64> = ranges.iter().map(|&(a, b)| rng.gen_range(a..b)).collect();
        let src = simulate(net, &x0, &lim).unwrap();
        let img = simulate(&emb_net, &emb.embed_point(&x0), &lim).unwrap();
        assert_eq!(src.status, img.status);
        assert_eq!(src.events.len(), img.events.len());
        for (e_src, e_img) in src.events.iter().zip(&img.events) {
            assert!(
                (e_src.cumulative_time - e_img.cumulative_time).abs() <= TOL,
                "times {} vs {}",
                e_src.cumulative_time,
                e_img.cumulative_time
            );
            let mapped = emb.embed_point(&e_src.point);
            for (m, p) in mapped.iter().zip(&e_img.point) {
                assert!((m - p).abs() <= TOL, "points {mapped:?} vs {:?}", e_img.point);
            }
            // The crossed wall corresponds: the embedded coordinate is the
            // row of the source (variable, level) pair, always at level 0.
            let rows = emb.rows_of(e_src.wall.coord);
            let row = rows
                .iter()
                .copied()
                .find(|&r| emb.rows()[r].level == e_src.wall.threshold_level)
                .expect("crossed threshold has an embedding row");
            assert_eq!(e_img.wall.coord, row);
            assert_eq!(e_img.wall.orientation, e_src.wall.orientation);
        }
    }
}

#[test]
fn full_embedding_commutes_for_the_two_threshold_network() {
    check_full_embedding(&fixtures::net_c(), &[(-2.5, 3.5), (-2.0, 2.0)], 21);
}

#[test]
fn full_embedding_commutes_for_the_outer_threshold_network() {
    check_full_embedding(&fixtures::net_f(), &[(-2.5, 1.5), (-1.5, 2.5)], 22);
}

#[test]
fn compression_commutes_for_the_slaved_coordinate_network() {
    // Starts keep the third coordinate below its threshold, where it never
    // switches; dropping it must not change the other two coordinates'
    // crossings at all.
    let net = fixtures::net_d();
    let (small, comp) = compress(&net, &fixtures::cycle_d()).unwrap();
    assert_eq!(small, fixtures::net_b());
    let mut rng = StdRng::seed_from_u64(23);
    let lim = limits(30);
    for _ in 0..STARTS {
        let x0 = vec![
            rng.gen_range(-2.5..-0.1),
            rng.gen_range(-2.5..-0.1),
            rng.gen_range(-3.0..-0.05),
        ];
        let src = simulate(&net, &x0, &lim).unwrap();
        let img = simulate(&small, &comp.compress_point(&x0), &lim).unwrap();
        assert_eq!(src.status, img.status);
        assert_eq!(src.events.len(), img.events.len());
        for (e_src, e_img) in src.events.iter().zip(&img.events) {
            assert!((e_src.cumulative_time - e_img.cumulative_time).abs() <= TOL);
            let mapped = comp.compress_point(&e_src.point);
            for (m, p) in mapped.iter().zip(&e_img.point) {
                assert!((m - p).abs() <= TOL);
            }
            assert_eq!(e_img.wall.coord, e_src.wall.coord);
        }
    }
}

#[test]
fn recentering_commutes_for_a_translated_network() {
    // The attracting quadrant network translated so its vertex sits at
    // (2, -1); recentering recovers the original, and simulations
    // correspond under the translation.
    let shift = [2.0, -1.0];
    let base = fixtures::net_b();
    let ladders: Vec<ThresholdLadder> = base
        .ladders()
        .iter()
        .enumerate()
        .map(|(i, l)| ThresholdLadder::new(l.values().iter().map(|t| t + shift[i]).collect()))
        .collect();
    let focal: BTreeMap<_, _> = base
        .focal_entries()
        .map(|(r, f)| {
            (r.clone(), f.iter().zip(&shift).map(|(v, s)| v + s).collect::<Vec<f64>>())
        })
        .collect();
    let moved = GlassNetwork::new(ladders, focal).unwrap();

    let (recentered, vertex) = recenter_at_vertex(&moved, &fixtures::cycle_quadrants()).unwrap();
    assert_eq!(vertex, shift.to_vec());
    assert_eq!(recentered, base);

    let mut rng = StdRng::seed_from_u64(24);
    let lim = limits(30);
    for _ in 0..STARTS {
        let x0 = vec![rng.gen_range(-2.5..-0.1), rng.gen_range(-1.5..-0.1)];
        let moved_x0: Vec<f64> = x0.iter().zip(&shift).map(|(a, s)| a + s).collect();
        let src = simulate(&moved, &moved_x0, &lim).unwrap();
        let img = simulate(&base, &x0, &lim).unwrap();
        assert_eq!(src.status, img.status);
        assert_eq!(src.events.len(), img.events.len());
        for (e_src, e_img) in src.events.iter().zip(&img.events) {
            assert!((e_src.cumulative_time - e_img.cumulative_time).abs() <= TOL);
            for ((p_src, p_img), s) in e_src.point.iter().zip(&e_img.point).zip(&shift) {
                assert!((p_src - s - p_img).abs() <= TOL);
            }
            assert_eq!(e_img.wall.coord, e_src.wall.coord);
            assert_eq!(e_img.wall.orientation, e_src.wall.orientation);
        }
    }
}
