//! An exactly solvable scattering fixture: piecewise-constant v0 with
//! u0 = 0.
//!
//! On each interval where the data is constant the full Jost system
//! `Psi_x = (L + U) Psi` has the constant generator `G_j = L + U_j`, so the
//! scattering matrix is a finite product of matrix exponentials:
//!
//! `s(k) = e^{-x_0 L} e^{-d_1 G_1} ... e^{-d_m G_m} e^{x_m L}`,
//!
//! where `d_j` are the interval lengths.  Because `L(w k)` and `U(w k)` are
//! exact permutation conjugates of `L(k)`, `U(k)` (and similarly for
//! `k -> 1/k` with the 1<->2 transposition), every spectral symmetry — and
//! with `s^A` taken as the cofactor matrix, the nonlinear circle relation —
//! holds for this fixture to rounding error at any regular k.  That makes
//! it the reference generator for exact-coefficient identity checks.

use super::{ensure_regular, ScatteringError};
use crate::numeric::linalg::{cofactor_matrix, expm3};
use crate::phase::lambda;
use crate::{C, Mat3};
use nalgebra::Vector3;

/// Breakpoints `x_0 < x_1 < ... < x_m` and the constant value of v0 on each
/// of the m intervals; v0 = 0 outside.
#[derive(Debug, Clone)]
pub struct StepFixture {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepFixture {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Self {
        assert!(breaks.len() == values.len() + 1, "need one more break than value");
        assert!(breaks.windows(2).all(|w| w[0] < w[1]), "breaks must increase");
        StepFixture { breaks, values }
    }

    /// A three-step profile of moderate amplitude.
    pub fn standard() -> Self {
        StepFixture::new(vec![-2.0, -0.8, 0.5, 1.7], vec![0.45, -0.3, 0.2])
    }

    /// Constant generator on interval j: `G = L(k) + U_j(k)` where `U_j` is
    /// the rank-one Vandermonde conjugation of the inner matrix with
    /// `m31 = -i v0 / (4 sqrt 3)`, `m32 = 0`.
    fn generator(&self, j: usize, k: C) -> Mat3 {
        let l = [lambda(1, k), lambda(2, k), lambda(3, k)];
        let m31 = C::new(0.0, -self.values[j] / (4.0 * 3.0f64.sqrt()));
        let mut p_col = [C::new(0.0, 0.0); 3];
        for i in 0..3 {
            let mut prod = C::new(1.0, 0.0);
            for m in 0..3 {
                if m != i {
                    prod *= l[i] - l[m];
                }
            }
            p_col[i] = prod.inv();
        }
        let a = Vector3::from_fn(|i, _| p_col[i]);
        let ones = Vector3::from_fn(|_, _| m31);
        let mut g = a * ones.transpose(); // U_j = m31 * p ⊗ (1,1,1)
        for i in 0..3 {
            g[(i, i)] += l[i];
        }
        g
    }

    /// Scattering matrix by the exponential product formula.
    pub fn s_matrix(&self, k: C) -> Result<Mat3, ScatteringError> {
        ensure_regular(k)?;
        let l = [lambda(1, k), lambda(2, k), lambda(3, k)];
        let diag = |x: f64, sign: f64| {
            Mat3::from_diagonal(&Vector3::from_fn(|i, _| (C::new(sign * x, 0.0) * l[i]).exp()))
        };
        let mut s = diag(self.breaks[0], -1.0);
        for j in 0..self.values.len() {
            let d = self.breaks[j + 1] - self.breaks[j];
            s *= expm3(&(self.generator(j, k) * C::new(-d, 0.0)));
        }
        s *= diag(*self.breaks.last().unwrap(), 1.0);
        Ok(s)
    }

    /// The companion matrix `s^A`, realised as the cofactor matrix (valid
    /// because the generator is trace-free, so det s = 1).
    pub fn s_adj(&self, k: C) -> Result<Mat3, ScatteringError> {
        Ok(cofactor_matrix(&self.s_matrix(k)?))
    }

    /// Reflection coefficients `(r1, r2) = (s12/s11, s^A_12/s^A_11)`.
    pub fn r(&self, k: C) -> Result<(C, C), ScatteringError> {
        let s = self.s_matrix(k)?;
        let a = cofactor_matrix(&s);
        Ok((s[(0, 1)] / s[(0, 0)], a[(0, 1)] / a[(0, 0)]))
    }
}
