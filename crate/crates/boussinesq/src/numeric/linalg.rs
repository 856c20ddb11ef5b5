//! Small helpers for 3×3 complex matrices: exponential, cofactor matrix,
//! and entrywise norms used in residual reporting.

use crate::{C, Mat3};

/// Maximum entry magnitude; the norm used by all residual reports.
pub fn max_abs(m: &Mat3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Maximum column sum of entry magnitudes (induced 1-norm).
pub fn one_norm(m: &Mat3) -> f64 {
    (0..3)
        .map(|j| (0..3).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling-and-squaring with a Taylor series.
///
/// The argument is halved until its 1-norm is below 1/4, the series is summed
/// to machine precision, and the result is squared back. For the bounded
/// generators that arise here (entries O(|k| + 1/|k|) times a step width)
/// this is accurate to ~1e-15.
pub fn expm3(a: &Mat3) -> Mat3 {
    let norm = one_norm(a);
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let b = a / C::new(2f64.powi(s as i32), 0.0);
    let mut term = Mat3::identity();
    let mut sum = Mat3::identity();
    for n in 1..=30 {
        term = (term * b) / C::new(n as f64, 0.0);
        sum += term;
        if max_abs(&term) < 1e-18 * max_abs(&sum) {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..s {
        result = result * result;
    }
    result
}

/// Cofactor matrix `C` with `C[i][j] = (-1)^{i+j} M[i][j]` (minor of `m`).
///
/// For unimodular `m` this equals `(m^{-1})^T` exactly, without dividing by
/// the determinant — which keeps alien-cofactor identities at rounding level.
pub fn cofactor_matrix(m: &Mat3) -> Mat3 {
    let minor = |i: usize, j: usize| -> C {
        let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let c: Vec<usize> = (0..3).filter(|&x| x != j).collect();
        m[(r[0], c[0])] * m[(r[1], c[1])] - m[(r[0], c[1])] * m[(r[1], c[0])]
    };
    Mat3::from_fn(|i, j| {
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        C::new(sign, 0.0) * minor(i, j)
    })
}

/// Determinant via cofactor expansion along the first row.
pub fn det3(m: &Mat3) -> C {
    let cof = cofactor_matrix(m);
    m[(0, 0)] * cof[(0, 0)] + m[(0, 1)] * cof[(0, 1)] + m[(0, 2)] * cof[(0, 2)]
}
