//! Linear fractional wall-to-wall maps.
//!
//! In coordinates where the exit threshold sits at zero, the time-`t` flow
//! toward a focal point `f`, stopped on the wall `{x_m = 0}`, is the map
//!
//! ```text
//! x  |->  A x / (1 + <psi, x>),
//! A   =  I - (1/f_m) f e_m^T,      psi = -(1/f_m) e_m,
//! ```
//!
//! and the transit time is recovered from the denominator:
//! `exp(t) = 1 + <psi, x>`. Row `m` of `A` vanishes, so images land on the
//! exit wall exactly. Maps of this shape are closed under composition, with
//! denominators multiplying; a full cycle of walls therefore collapses into
//! a single map whose denominator accumulates the lap time.
//!
//! Coefficients are carried in exact rational arithmetic (every `f64` input
//! is a rational), so composites of dyadic fixtures have exact entries;
//! [`LinearFractionalMap::to_f64`] converts once for iterative numerics.

use num::{One, Signed, Zero};

use crate::error::GlassError;
use crate::rational::{self, rat, Rat};

/// A map `x -> Ax / (1 + <psi, x>)` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFractionalMap {
    a: Vec<Vec<Rat>>,
    psi: Vec<Rat>,
}

impl LinearFractionalMap {
    pub fn identity(dim: usize) -> Self {
        LinearFractionalMap { a: rational::identity(dim), psi: vec![Rat::zero(); dim] }
    }

    /// Builds a map from raw rational parts. `a` must be square and `psi`
    /// of matching length.
    pub fn from_parts(a: Vec<Vec<Rat>>, psi: Vec<Rat>) -> Self {
        debug_assert!(a.iter().all(|row| row.len() == a.len()));
        debug_assert_eq!(psi.len(), a.len());
        LinearFractionalMap { a, psi }
    }

    pub fn dimension(&self) -> usize {
        self.psi.len()
    }

    pub fn a(&self) -> &[Vec<Rat>] {
        &self.a
    }

    pub fn psi(&self) -> &[Rat] {
        &self.psi
    }

    pub fn a_f64(&self) -> Vec<Vec<f64>> {
        self.a.iter().map(|row| row.iter().map(rational::to_f64).collect()).collect()
    }

    pub fn psi_f64(&self) -> Vec<f64> {
        self.psi.iter().map(rational::to_f64).collect()
    }

    /// The same map with coefficients rounded to `f64` once.
    pub fn to_f64(&self) -> F64Map {
        F64Map { a: self.a_f64(), psi: self.psi_f64() }
    }

    /// Wall map for the flow toward `focal`, exiting where coordinate
    /// `exit` crosses zero. Requires centered coordinates for the exit
    /// threshold only; other coordinates may use any affine frame.
    pub fn wall_map(focal: &[f64], exit: usize) -> Result<Self, GlassError> {
        if focal[exit] == 0.0 {
            return Err(GlassError::FocalOnWall { coord: exit });
        }
        let n = focal.len();
        let fm = rat(focal[exit]);
        let mut a = rational::identity(n);
        for k in 0..n {
            let delta = rat(focal[k]) / &fm;
            a[k][exit] -= delta;
        }
        let mut psi = vec![Rat::zero(); n];
        psi[exit] = -fm.recip();
        Ok(LinearFractionalMap { a, psi })
    }

    /// `self` after `inner`: the composite `x -> self(inner(x))`.
    ///
    /// Denominators multiply, so the composite's transit factor is the
    /// product of the two stages' factors.
    pub fn compose_after(&self, inner: &LinearFractionalMap) -> LinearFractionalMap {
        let a = rational::mat_mul(&self.a, &inner.a);
        let lifted = rational::transpose_mat_vec(&inner.a, &self.psi);
        let psi = inner.psi.iter().zip(lifted).map(|(p, l)| p + l).collect();
        LinearFractionalMap { a, psi }
    }

    /// Applies the map exactly. The factor `1 + <psi, x>` must be strictly
    /// positive (it is `exp` of the transit time).
    pub fn apply_exact(&self, x: &[Rat]) -> Result<(Vec<Rat>, Rat), GlassError> {
        let factor = Rat::one() + rational::dot(&self.psi, x);
        if !factor.is_positive() {
            return Err(GlassError::OutOfDomain { factor: rational::to_f64(&factor) });
        }
        let num = rational::mat_vec(&self.a, x);
        let y = num.into_iter().map(|v| v / &factor).collect();
        Ok((y, factor))
    }

    /// Applies the map in `f64`, returning the image and the transit factor
    /// `1 + <psi, x>` (i.e. `exp` of the transit time).
    pub fn apply(&self, x: &[f64]) -> Result<(Vec<f64>, f64), GlassError> {
        self.to_f64().apply(x)
    }
}

/// `f64` rendering of a [`LinearFractionalMap`], for iteration-heavy code.
#[derive(Debug, Clone, PartialEq)]
pub struct F64Map {
    pub a: Vec<Vec<f64>>,
    pub psi: Vec<f64>,
}

impl F64Map {
    pub fn dimension(&self) -> usize {
        self.psi.len()
    }

    pub fn factor(&self, x: &[f64]) -> f64 {
        1.0 + self.psi.iter().zip(x).map(|(p, v)| p * v).sum::<f64>()
    }

    pub fn apply(&self, x: &[f64]) -> Result<(Vec<f64>, f64), GlassError> {
        let factor = self.factor(x);
        if !(factor > 0.0) {
            return Err(GlassError::OutOfDomain { factor });
        }
        let y = self
            .a
            .iter()
            .map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum::<f64>() / factor)
            .collect();
        Ok((y, factor))
    }
}
