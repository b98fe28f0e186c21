//! Hilbert projective metric on orthant cones and the contraction estimates
//! built on it.
//!
//! For two rays through `x, y` interior to a (signed) orthant cone,
//!
//! ```text
//! d(x, y) = ln( max_i(x_i/y_i) / min_i(x_i/y_i) )
//! ```
//!
//! after flipping signs so all free coordinates are positive. A linear map
//! sending the cone strictly inside itself contracts this metric by the
//! Birkhoff rate
//!
//! ```text
//! k_d = (sqrt(exp(D)) - 1) / (sqrt(exp(D)) + 1)
//! ```
//!
//! where `D` is the projective diameter of the image. The rate turns power
//! iteration into a Banach contraction with an a-priori iteration bound,
//! which [`dominant_eigenpair`] exploits and its callers can audit.
//!
//! Only orthant cones are instantiated here: the general inf/sup definition
//! of the metric coincides with the coordinate-ratio formula on them, and
//! every wall section this crate meets is a signed orthant after removing
//! the pinned exit coordinate.

use crate::error::GlassError;

pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
pub const DEFAULT_EIGEN_MAX_ITER: usize = 10_000;

/// A signed orthant section of a wall: each coordinate is pinned (on the
/// wall, value zero in centered coordinates) or free with a fixed sign.
///
/// `bounds` optionally records the band intervals of the free coordinates
/// on the original wall; the metric operations use only the signs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSection {
    /// Per coordinate: `0` pinned, `+1`/`-1` the sign of a free coordinate.
    signs: Vec<i8>,
    bounds: Vec<Option<(f64, f64)>>,
}

impl ConeSection {
    pub fn new(signs: Vec<i8>) -> Self {
        let bounds = vec![None; signs.len()];
        ConeSection { signs, bounds }
    }

    pub fn with_bounds(signs: Vec<i8>, bounds: Vec<Option<(f64, f64)>>) -> Self {
        debug_assert_eq!(signs.len(), bounds.len());
        ConeSection { signs, bounds }
    }

    /// Full positive orthant in `dim` coordinates.
    pub fn positive_orthant(dim: usize) -> Self {
        ConeSection::new(vec![1; dim])
    }

    pub fn dimension(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn bounds(&self) -> &[Option<(f64, f64)>] {
        &self.bounds
    }

    pub fn free_coords(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&i| self.signs[i] != 0).collect()
    }

    pub fn free_dimension(&self) -> usize {
        self.signs.iter().filter(|&&s| s != 0).count()
    }

    /// Positivized free part of `x`: `s_i * x_i` over free coordinates.
    /// Errors if any entry is not strictly positive after the sign flip.
    fn positivize(&self, x: &[f64]) -> Result<Vec<f64>, GlassError> {
        let mut out = Vec::with_capacity(self.free_dimension());
        for (i, &s) in self.signs.iter().enumerate() {
            if s == 0 {
                continue;
            }
            let v = f64::from(s) * x[i];
            if !(v > 0.0) {
                return Err(GlassError::NotInCone { coord: i });
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Hilbert distance between the rays through `x` and `y` in the cone.
/// Pinned coordinates are ignored; free coordinates must be strictly on
/// the cone's side.
pub fn hilbert_distance(cone: &ConeSection, x: &[f64], y: &[f64]) -> Result<f64, GlassError> {
    let u = cone.positivize(x)?;
    let v = cone.positivize(y)?;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut min_ratio = f64::INFINITY;
    for (a, b) in u.iter().zip(&v) {
        let r = a / b;
        max_ratio = max_ratio.max(r);
        min_ratio = min_ratio.min(r);
    }
    Ok((max_ratio / min_ratio).ln())
}

/// Projective diameter of `a`'s action on the cone: the largest Hilbert
/// distance between images of the cone's generating rays (the signed
/// coordinate axes). Returns `+inf` when some generator image is not
/// strictly inside the cone.
///
/// `a` is indexed over the full coordinate set; pinned rows and columns are
/// ignored.
pub fn projective_diameter(a: &[Vec<f64>], cone: &ConeSection) -> f64 {
    let free = cone.free_coords();
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(free.len());
    for &j in &free {
        // Image of the generator s_j e_j, positivized: s_i a[i][j] s_j.
        let mut img = vec![0.0; cone.dimension()];
        for &i in &free {
            img[i] = a[i][j] * f64::from(cone.signs()[j]);
        }
        match cone.positivize(&img) {
            Ok(_) => images.push(img),
            Err(_) => return f64::INFINITY,
        }
    }
    let mut diameter: f64 = 0.0;
    for p in 0..images.len() {
        for q in (p + 1)..images.len() {
            match hilbert_distance(cone, &images[p], &images[q]) {
                Ok(d) => diameter = diameter.max(d),
                Err(_) => return f64::INFINITY,
            }
        }
    }
    diameter
}

/// Birkhoff contraction rate for a projective diameter `delta >= 0`.
pub fn contraction_rate(delta: f64) -> f64 {
    debug_assert!(delta >= 0.0 && delta.is_finite());
    let s = (0.5 * delta).exp();
    (s - 1.0) / (s + 1.0)
}

/// Result of a converged power iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantEigen {
    pub lambda: f64,
    /// Eigenvector in full coordinates, sup-normalized, oriented into the
    /// cone; pinned coordinates are zero.
    pub vector: Vec<f64>,
    /// Matrix applications performed.
    pub iterations: usize,
    /// Final `|A v - lambda v|_inf`.
    pub residual: f64,
}

/// Dominant eigenpair of `a` on the cone, by power iteration from the
/// barycentric ray.
///
/// Stops when successive sup-normalized iterates differ by less than `tol`
/// in max-norm, then polishes until the residual satisfies
/// `|A v - lambda v|_inf <= 10 * tol * |A|_inf`. Fails with
/// `NoConvergence` if an iterate leaves the cone (the map is not strictly
/// positive on it) or the budget runs out.
pub fn dominant_eigenpair(
    a: &[Vec<f64>],
    cone: &ConeSection,
    tol: f64,
    max_iter: usize,
) -> Result<DominantEigen, GlassError> {
    let free = cone.free_coords();
    let n = free.len();
    if n == 0 {
        return Err(GlassError::NoConvergence { iterations: 0 });
    }
    // Positivized restriction: b[i][j] = s_i a[fi][fj] s_j.
    let b: Vec<Vec<f64>> = free
        .iter()
        .map(|&fi| {
            free.iter()
                .map(|&fj| {
                    a[fi][fj] * f64::from(cone.signs()[fi]) * f64::from(cone.signs()[fj])
                })
                .collect()
        })
        .collect();
    let norm_a = b
        .iter()
        .map(|row| row.iter().map(|c| c.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);

    let mut v = vec![1.0; n];
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut settled = false;
    while iterations < max_iter {
        let w: Vec<f64> = b
            .iter()
            .map(|row| row.iter().zip(&v).map(|(c, x)| c * x).sum::<f64>())
            .collect();
        iterations += 1;
        let sup = w.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        if !(sup > 0.0) || w.iter().any(|&x| !(x > 0.0)) {
            return Err(GlassError::NoConvergence { iterations });
        }
        let w_normed: Vec<f64> = w.iter().map(|&x| x / sup).collect();
        let diff = w_normed
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);

        // Rayleigh-style multiplier |Av| / |v| on the unnormalized image.
        let num: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let den: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        lambda = num / den;
        v = w_normed;
        if diff < tol {
            residual = {
                let av: Vec<f64> = b
                    .iter()
                    .map(|row| row.iter().zip(&v).map(|(c, x)| c * x).sum::<f64>())
                    .collect();
                av.iter().zip(&v).map(|(x, y)| (x - lambda * y).abs()).fold(0.0f64, f64::max)
            };
            if residual <= 10.0 * tol * norm_a {
                settled = true;
                break;
            }
        }
    }
    if !settled {
        return Err(GlassError::NoConvergence { iterations });
    }
    let mut vector = vec![0.0; cone.dimension()];
    for (k, &fi) in free.iter().enumerate() {
        vector[fi] = v[k] * f64::from(cone.signs()[fi]);
    }
    Ok(DominantEigen { lambda, vector, iterations, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos2() -> ConeSection {
        ConeSection::positive_orthant(2)
    }

    #[test]
    fn hilbert_distance_examples() {
        let d = hilbert_distance(&pos2(), &[1.0, 1.0], &[2.0, 1.0]).unwrap();
        assert!((d - (2.0f64).ln()).abs() < 1e-15);
        let d = hilbert_distance(&pos2(), &[1.0, 2.0], &[2.0, 1.0]).unwrap();
        assert!((d - (4.0f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn hilbert_distance_is_projective() {
        let d = hilbert_distance(&pos2(), &[0.3, 1.7], &[1.2, 6.8]).unwrap();
        assert!(d.abs() < 1e-12, "scaled copies are the same ray, d = {d}");
    }

    #[test]
    fn hilbert_distance_rejects_boundary_points() {
        assert_eq!(
            hilbert_distance(&pos2(), &[1.0, 0.0], &[1.0, 1.0]),
            Err(GlassError::NotInCone { coord: 1 })
        );
    }

    #[test]
    fn signed_cones_flip_before_comparing() {
        let cone = ConeSection::new(vec![-1, 0, 1]);
        let d = hilbert_distance(&cone, &[-1.0, 0.0, 1.0], &[-2.0, 0.0, 1.0]).unwrap();
        assert!((d - (2.0f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn diameter_of_positive_matrix_is_max_column_distance() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let d = projective_diameter(&a, &pos2());
        assert!((d - (4.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn diameter_is_infinite_without_strict_positivity() {
        let a = vec![vec![1.0, 1.0], vec![0.0, 1.0]];
        assert!(projective_diameter(&a, &pos2()).is_infinite());
    }

    #[test]
    fn contraction_rate_of_ln4_is_one_third() {
        assert_eq!(contraction_rate((4.0f64).ln()), 1.0 / 3.0);
    }

    #[test]
    fn contraction_rate_of_zero_diameter_is_zero() {
        assert_eq!(contraction_rate(0.0), 0.0);
    }

    #[test]
    fn power_iteration_on_symmetric_matrix() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let e = dominant_eigenpair(&a, &pos2(), DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
        assert!((e.lambda - 3.0).abs() < 1e-9);
        assert!((e.vector[0] - 1.0).abs() < 1e-9);
        assert!((e.vector[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn power_iteration_respects_signed_cones() {
        // Conjugate of [[2,1],[1,2]] by diag(1,-1): invariant on the
        // (+,-) orthant.
        let a = vec![vec![2.0, -1.0], vec![-1.0, 2.0]];
        let cone = ConeSection::new(vec![1, -1]);
        let e = dominant_eigenpair(&a, &cone, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
        assert!((e.lambda - 3.0).abs() < 1e-9);
        assert!((e.vector[0] - 1.0).abs() < 1e-9);
        assert!((e.vector[1] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn power_iteration_fails_off_cone() {
        // Rotation by 90 degrees leaves the positive orthant immediately.
        let a = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        assert!(matches!(
            dominant_eigenpair(&a, &pos2(), DEFAULT_EIGEN_TOL, 100),
            Err(GlassError::NoConvergence { .. })
        ));
    }
}
