//! Exact rational scalars and small dense matrix helpers.
//!
//! Wall-map coefficients are built from thresholds and focal coordinates,
//! which arrive as `f64` values and are therefore exact dyadic rationals.
//! Constructing and composing the maps over `BigRational` keeps every
//! coefficient exact; conversion to `f64` happens once, at the boundary to
//! iterative numerics.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Exact conversion; every finite `f64` is a rational number.
pub fn rat(x: f64) -> Rat {
    BigRational::from_float(x).expect("network data must be finite")
}

/// Round-to-nearest conversion that survives numerators or denominators
/// wider than the `f64` exponent range.
pub fn to_f64(r: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Shift both sides into range; the discarded low bits are far below
    // f64 resolution of the quotient.
    let shift_n = (r.numer().bits() as i64 - 900).max(0) as u64;
    let shift_d = (r.denom().bits() as i64 - 900).max(0) as u64;
    let shift = shift_n.max(shift_d);
    let n: BigInt = r.numer() >> shift;
    let d: BigInt = r.denom() >> shift;
    let nf = n.to_f64().unwrap_or(if r.numer().is_negative() { f64::NEG_INFINITY } else { f64::INFINITY });
    let df = d.to_f64().unwrap_or(f64::INFINITY);
    nf / df
}

pub fn identity(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let term = &a[i][l] * &b[l][j];
                out[i][j] += term;
            }
        }
    }
    out
}

pub fn mat_vec(a: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum())
        .collect()
}

/// `A^T psi` without materialising the transpose.
pub fn transpose_mat_vec(a: &[Vec<Rat>], psi: &[Rat]) -> Vec<Rat> {
    let cols = a[0].len();
    (0..cols)
        .map(|k| a.iter().zip(psi).map(|(row, p)| &row[k] * p).sum())
        .collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
