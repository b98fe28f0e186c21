//! Birkhoff contraction on the positive orthant, against random matrices.
//!
//! For a strictly positive matrix A with projective image diameter Delta,
//! the Hilbert-metric Lipschitz constant is k = (e^{Delta/2} - 1) /
//! (e^{Delta/2} + 1) < 1. The suite checks the contraction inequality on
//! random pairs, an a priori iteration bound for the power method implied
//! by k, and the landmark value k(ln 4) = 1/3 exactly.

use glass_core::cone::{
    contraction_rate, dominant_eigenpair, hilbert_distance, projective_diameter, ConeSection,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const EIGEN_TOL: f64 = 1e-12;
const MATRICES: usize = 50;
const PAIRS: usize = 100;

fn random_positive_matrix(rng: &mut StdRng, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..n).map(|_| rng.gen_range(0.1..10.0)).collect()).collect()
}

fn random_positive_vector(rng: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.01..10.0)).collect()
}

fn apply(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum()).collect()
}

fn check_dimension(n: usize, seed: u64) {
    let cone = ConeSection::positive_orthant(n);
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..MATRICES {
        let a = random_positive_matrix(&mut rng, n);
        let delta = projective_diameter(&a, &cone);
        assert!(delta.is_finite() && delta > 0.0);
        let k = contraction_rate(delta);
        assert!(k < 1.0);

        for _ in 0..PAIRS {
            let x = random_positive_vector(&mut rng, n);
            let y = random_positive_vector(&mut rng, n);
            let d_before = hilbert_distance(&cone, &x, &y).unwrap();
            let d_after = hilbert_distance(&cone, &apply(&a, &x), &apply(&a, &y)).unwrap();
            assert!(
                d_after <= k * d_before * (1.0 + 1e-10) + 1e-12,
                "contraction violated: {d_after} > {k} * {d_before}"
            );
        }

        // A priori bound: the first multiplication lands within Delta of
        // the dominant direction, every further one contracts by k, and a
        // Hilbert distance d below 1 bounds the sup-norm gap of sup-
        // normalized vectors by e^d - 1 < 2d. The stop rule needs the
        // successive gap below tol and the residual a constant factor
        // lower, hence the 4/tol inside the logarithm.
        let bound = (4.0 * delta.max(1.0) / EIGEN_TOL).ln() / (1.0 / k).ln();
        let bound = bound.ceil() as usize + 8;
        let eig = dominant_eigenpair(&a, &cone, EIGEN_TOL, 10 * bound).unwrap();
        assert!(
            eig.iterations <= bound,
            "power iteration took {} iterations, bound {bound}",
            eig.iterations
        );
        assert!(eig.lambda > 0.0);
        for v in &eig.vector {
            assert!(*v > 0.0);
        }
    }
}

#[test]
fn contraction_holds_for_random_3x3_matrices() {
    check_dimension(3, 31);
}

#[test]
fn contraction_holds_for_random_5x5_matrices() {
    check_dimension(5, 32);
}

#[test]
fn rate_at_log_four_is_exactly_one_third() {
    assert_eq!(contraction_rate((4.0f64).ln()), 1.0 / 3.0);
}

#[test]
fn hilbert_distance_is_a_projective_metric() {
    let cone = ConeSection::positive_orthant(4);
    let mut rng = StdRng::seed_from_u64(33);
    for _ in 0..200 {
        let x = random_positive_vector(&mut rng, 4);
        let y = random_positive_vector(&mut rng, 4);
        let z = random_positive_vector(&mut rng, 4);
        let dxy = hilbert_distance(&cone, &x, &y).unwrap();
        let dyx = hilbert_distance(&cone, &y, &x).unwrap();
        assert!((dxy - dyx).abs() <= 1e-12);
        let dxz = hilbert_distance(&cone, &x, &z).unwrap();
        let dzy = hilbert_distance(&cone, &z, &y).unwrap();
        assert!(dxy <= dxz + dzy + 1e-12, "triangle inequality");
        let c = rng.gen_range(0.1..10.0);
        let scaled: Vec<f64> = x.iter().map(|v| c * v).collect();
        assert!(hilbert_distance(&cone, &x, &scaled).unwrap() <= 1e-12);
    }
}
