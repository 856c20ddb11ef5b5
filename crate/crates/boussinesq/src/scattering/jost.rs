//! Jost solutions and scattering matrices by adaptive integration.
//!
//! The Volterra equation for the Jost solution X (normalised to I on the
//! right) differentiates to `X_x = [L(k), X] + U X`.  Conjugating,
//! `W(x) := e^{-x L} X e^{x L}` satisfies the commutator-free system
//! `W_x = Utilde W` with `Utilde_ij = U_ij e^{x (l_j - l_i)}` and
//! `W(+inf) = I`, and the scattering matrix is simply `s = W(-inf)`;
//! likewise `W^A_x = -Utilde^T W^A` gives `s^A = W^A(-inf)`.  Both systems
//! are integrated right to left with an adaptive Dormand-Prince scheme.
//!
//! The generator is rank one: with `p` the third column of `P(k)^{-1}` and
//! `v_j = m31 + m32 l_j`, one has `U = p v^T`, which makes each
//! right-hand-side evaluation a pair of 3-vector contractions.

use super::{ensure_regular, InitialData, ScatteringError, ScatteringState};
use crate::numeric::ode::{integrate, integrate_collect, OdeOpts};
use crate::numeric::quad::simpson_uniform;
use crate::phase::lambda;
use crate::{C, Mat3};
use nalgebra::Vector3;

/// Spectral frame at a fixed k: eigenvalues and the Vandermonde data needed
/// to assemble the generator.
struct KFrame {
    l: [C; 3],
    /// Third column of P(k)^{-1}: p_i = 1 / prod_{m != i} (l_i - l_m).
    p: [C; 3],
}

impl KFrame {
    fn new(k: C) -> Result<Self, ScatteringError> {
        ensure_regular(k)?;
        let l = [lambda(1, k), lambda(2, k), lambda(3, k)];
        let mut p = [C::new(0.0, 0.0); 3];
        for i in 0..3 {
            let mut prod = C::new(1.0, 0.0);
            for m in 0..3 {
                if m != i {
                    prod *= l[i] - l[m];
                }
            }
            p[i] = prod.inv();
        }
        Ok(KFrame { l, p })
    }

    /// Scaled rank-one factors of `Utilde(x) = a(x) b(x)^T`:
    /// `a_i = p_i e^{-x l_i}` and `b_j = (m31 + m32 l_j) e^{x l_j}`.
    fn factors(&self, x: f64, m31: C, m32: C) -> (Vector3<C>, Vector3<C>) {
        let a = Vector3::from_fn(|i, _| self.p[i] * (-C::new(x, 0.0) * self.l[i]).exp());
        let b = Vector3::from_fn(|j, _| (m31 + m32 * self.l[j]) * (C::new(x, 0.0) * self.l[j]).exp());
        (a, b)
    }
}

fn inner_entries(data: &InitialData, x: f64) -> (C, C) {
    let (u0, u0x, v0) = data.eval(x);
    let m31 = C::new(-u0x / 4.0, -v0 / (4.0 * 3.0f64.sqrt()));
    let m32 = C::new(-u0 / 2.0, 0.0);
    (m31, m32)
}

/// The Lax generator `U(x, k) = P(k)^{-1} M(x) P(k)`, with M carrying the
/// initial data in its (3,1) and (3,2) entries.
pub fn lax_u(data: &InitialData, x: f64, k: C) -> Result<Mat3, ScatteringError> {
    let frame = KFrame::new(k)?;
    let (m31, m32) = inner_entries(data, x);
    // U = p v^T without the conjugating exponentials (x-scaling factors at
    // x = 0 are all 1, so reuse `factors` with the phases stripped).
    let v = Vector3::from_fn(|j, _| m31 + m32 * frame.l[j]);
    let p = Vector3::from_fn(|i, _| frame.p[i]);
    Ok(p * v.transpose())
}

fn default_opts() -> OdeOpts {
    OdeOpts { rtol: 1e-11, atol: 1e-13, max_steps: 4_000_000 }
}

/// Solve the conjugated Jost system right to left at spectral point k and
/// package `s`, `s^A` and X at the left grid end.
pub fn solve_jost(data: &InitialData, k: C) -> Result<ScatteringState, ScatteringError> {
    let frame = KFrame::new(k)?;
    let (xa, xb) = (data.x_min(), data.x_max());
    let opts = default_opts();
    let s = integrate(
        |x, w| {
            let (m31, m32) = inner_entries(data, x);
            let (a, b) = frame.factors(x, m31, m32);
            a * (b.transpose() * w)
        },
        xb,
        xa,
        Mat3::identity(),
        &opts,
    )?;
    let s_a = integrate(
        |x, w| {
            let (m31, m32) = inner_entries(data, x);
            let (a, b) = frame.factors(x, m31, m32);
            -b * (a.transpose() * w)
        },
        xb,
        xa,
        Mat3::identity(),
        &opts,
    )?;
    // X(x_left) = e^{x L} W(x_left) e^{-x L} with W(x_left) = s.
    let mut x_jost = s;
    for i in 0..3 {
        for j in 0..3 {
            x_jost[(i, j)] *= (C::new(xa, 0.0) * (frame.l[i] - frame.l[j])).exp();
        }
    }
    Ok(ScatteringState {
        k,
        x_jost,
        s,
        s_a,
        off_circle: (k.norm() - 1.0).abs() > 1e-12,
    })
}

/// Both scattering matrices `(s, s^A)`.
pub fn scattering_matrices(data: &InitialData, k: C) -> Result<(Mat3, Mat3), ScatteringError> {
    let st = solve_jost(data, k)?;
    Ok((st.s, st.s_a))
}

/// Re-substitution certificate: integrate W on the data grid, then check
/// `W(x) - I + int_x^{x_max} Utilde W dx' = 0` by composite quadrature at a
/// stride of grid points. Returns the maximum residual entry.
pub fn volterra_residual(data: &InitialData, k: C) -> Result<f64, ScatteringError> {
    let frame = KFrame::new(k)?;
    // Quadrature grid: the data grid refined 2x, so the composite-Simpson
    // error sits well below the certificate threshold.
    let n = 2 * data.xs.len() - 1;
    let (xa, xb) = (data.xs[0], *data.xs.last().unwrap());
    let grid: Vec<f64> = (0..n)
        .map(|i| xa + (xb - xa) * i as f64 / (n - 1) as f64)
        .collect();
    let mut ts: Vec<f64> = grid.clone();
    ts.reverse();
    let ws = integrate_collect(
        |x, w| {
            let (m31, m32) = inner_entries(data, x);
            let (a, b) = frame.factors(x, m31, m32);
            a * (b.transpose() * w)
        },
        &ts,
        Mat3::identity(),
        &default_opts(),
    )?;
    // Integrand samples in ascending-x order.
    let h = grid[1] - grid[0];
    let mut f: Vec<Mat3> = Vec::with_capacity(n);
    for i in 0..n {
        let x = grid[i];
        let w = &ws[n - 1 - i];
        let (m31, m32) = inner_entries(data, x);
        let (a, b) = frame.factors(x, m31, m32);
        f.push(a * (b.transpose() * w));
    }
    let mut worst = 0.0f64;
    let mut idx = 0;
    while idx + 2 < n {
        // integral over [x_idx, x_max] entrywise
        let mut res = ws[n - 1 - idx] - Mat3::identity();
        for r in 0..3 {
            for c in 0..3 {
                let column: Vec<C> = (idx..n).map(|j| f[j][(r, c)]).collect();
                res[(r, c)] += simpson_uniform(&column, h);
            }
        }
        worst = worst.max(crate::numeric::linalg::max_abs(&res));
        idx += n / 16;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linalg::{cofactor_matrix, det3, max_abs};
    use crate::phase::{cyclic_permutation, index_swap};

    #[test]
    fn zero_data_gives_identity() {
        let data = InitialData::zero();
        let st = solve_jost(&data, C::from_polar(1.0, 1.9)).unwrap();
        assert!(max_abs(&(st.s - Mat3::identity())) < 1e-13);
        assert!(max_abs(&(st.s_a - Mat3::identity())) < 1e-13);
        assert!(max_abs(&(st.x_jost - Mat3::identity())) < 1e-13);
    }

    #[test]
    fn generator_is_traceless_and_vanishes_for_zero_data() {
        let zero = InitialData::zero();
        let k = C::new(0.4, 0.7);
        assert_eq!(max_abs(&lax_u(&zero, 0.3, k).unwrap()), 0.0);
        let data = InitialData::gaussian(0.3, 0.2, 1.0, 0.0);
        for &x in &[-1.0, 0.2, 2.5] {
            let u = lax_u(&data, x, k).unwrap();
            let tr = u[(0, 0)] + u[(1, 1)] + u[(2, 2)];
            assert!(tr.norm() < 1e-13 * (1.0 + max_abs(&u)));
        }
    }

    #[test]
    fn generator_matches_explicit_vandermonde_conjugation() {
        let data = InitialData::gaussian(0.3, 0.2, 1.0, 0.0);
        let k = C::from_polar(1.0, 2.0);
        let x = 0.8;
        let u = lax_u(&data, x, k).unwrap();
        // Rebuild via the definition with dense matrices.
        let l = [lambda(1, k), lambda(2, k), lambda(3, k)];
        let mut p = Mat3::zeros();
        for j in 0..3 {
            p[(0, j)] = C::new(1.0, 0.0);
            p[(1, j)] = l[j];
            p[(2, j)] = l[j] * l[j];
        }
        let (m31, m32) = inner_entries(&data, x);
        let mut m = Mat3::zeros();
        m[(2, 0)] = m31;
        m[(2, 1)] = m32;
        let dense = p.try_inverse().unwrap() * m * p;
        assert!(max_abs(&(u - dense)) < 1e-12);
    }

    #[test]
    fn determinant_one_and_adjugate_oracle() {
        let data = InitialData::gaussian(0.3, 0.2, 1.0, 0.0);
        for &th in &[0.7, 1.9, 3.6] {
            let st = solve_jost(&data, C::from_polar(1.0, th)).unwrap();
            assert!((det3(&st.s) - C::new(1.0, 0.0)).norm() < 1e-10, "det s at {th}");
            // s^A comes from an independently integrated system, yet must be
            // the transpose-inverse (= cofactor matrix) of s.
            let diff = st.s_a - cofactor_matrix(&st.s);
            assert!(max_abs(&diff) < 1e-9, "adjugate mismatch {} at {th}", max_abs(&diff));
        }
    }

    #[test]
    fn volterra_resubstitution_certificate() {
        let data = InitialData::gaussian(0.3, 0.2, 1.0, 0.0);
        for &th in &[1.7, 2.05] {
            let res = volterra_residual(&data, C::from_polar(1.0, th)).unwrap();
            assert!(res < 1e-8, "residual {res} at theta = {th}");
        }
    }

    #[test]
    fn spectral_symmetries_of_computed_matrices() {
        let data = InitialData::gaussian(0.25, 0.15, 1.2, 0.3);
        let k = C::from_polar(1.0, 1.83);
        let (s, _) = scattering_matrices(&data, k).unwrap();
        let (s_rot, _) = scattering_matrices(&data, crate::phase::OMEGA * k).unwrap();
        let a = cyclic_permutation();
        let diff = s_rot - a.try_inverse().unwrap() * s * a;
        assert!(max_abs(&diff) < 1e-9, "rotation symmetry {}", max_abs(&diff));
        let (s_inv, _) = scattering_matrices(&data, k.inv()).unwrap();
        let b = index_swap();
        let diff2 = s_inv - b * s * b;
        assert!(max_abs(&diff2) < 1e-9, "inversion symmetry {}", max_abs(&diff2));
    }

    #[test]
    fn grid_refinement_is_second_order_or_better() {
        // Tabulated data on two grids: the spectral output must move by at
        // most O(h^2).
        let build = |n: usize| {
            let xs: Vec<f64> = (0..n).map(|i| -18.0 + 36.0 * i as f64 / (n - 1) as f64).collect();
            let u0: Vec<f64> = xs.iter().map(|&x| 0.3 * (-x * x).exp()).collect();
            let u1: Vec<f64> = xs.iter().map(|&x| 0.4 * x * (-x * x).exp()).collect();
            InitialData::from_table(xs, u0, u1).unwrap()
        };
        let coarse = build(601);
        let fine = build(1201);
        let k = C::from_polar(1.0, 1.75);
        let r_coarse = solve_jost(&coarse, k).unwrap().r1();
        let r_fine = solve_jost(&fine, k).unwrap().r1();
        let h = 36.0 / 600.0;
        assert!(
            (r_coarse - r_fine).norm() < 10.0 * h * h,
            "refinement moved r1 by {}",
            (r_coarse - r_fine).norm()
        );
    }
}
