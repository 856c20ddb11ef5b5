//! Spectral phase functions of the third-order Lax pair and their saddle
//! points.
//!
//! The three eigenvalue branches are
//! `l_j(k) = i (w^j k + (w^j k)^{-1}) / (2 sqrt 3)` and
//! `z_j(k) = i ((w^j k)^2 + (w^j k)^{-2}) / (4 sqrt 3)` with `w = e^{2 pi i/3}`,
//! and the phase differences driving all exponential factors are
//! `ph_{ij}(tau, k) = (l_i - l_j)(k) + tau (z_i - z_j)(k)`.
//!
//! Everything downstream is organised around the (2,1) difference, which has
//! the closed form `(k^2-1)/(2k) - tau (k^4-1)/(4 k^2)`; the other index
//! pairs reduce to it by rotating the argument by cube roots of unity.

use crate::{C, Mat3};
use thiserror::Error;

/// sqrt(3)/2, the imaginary part of the primitive cube root of unity.
const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Primitive cube root of unity `w = e^{2 pi i / 3}`.
pub const OMEGA: C = C::new(-0.5, SQRT3_2);
/// `w^2 = e^{-2 pi i / 3}`.
pub const OMEGA2: C = C::new(-0.5, -SQRT3_2);

/// `w^j` for any integer j (reduced mod 3).
pub fn omega_pow(j: i32) -> C {
    match j.rem_euclid(3) {
        0 => C::new(1.0, 0.0),
        1 => OMEGA,
        _ => OMEGA2,
    }
}

/// The six unit points `±1, ±w, ±w^2` where pairs of eigenvalue branches
/// collide and the eigenvector (Vandermonde) frame degenerates.
pub fn branch_collision_points() -> [C; 6] {
    [
        C::new(1.0, 0.0),
        C::new(-1.0, 0.0),
        OMEGA,
        -OMEGA,
        OMEGA2,
        -OMEGA2,
    ]
}

/// Cyclic permutation matrix sending e1 -> e2 -> e3 -> e1: conjugating by it
/// realises the spectral symmetry under `k -> w k`.
pub fn cyclic_permutation() -> Mat3 {
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    Mat3::new(o, o, l, l, o, o, o, l, o)
}

/// Transposition matrix swapping indices 1 and 2: conjugating by it realises
/// the spectral symmetry under `k -> 1/k`.
pub fn index_swap() -> Mat3 {
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    Mat3::new(o, l, o, l, o, o, o, o, l)
}

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("tau must be nonnegative, got {0}")]
    NegativeTau(f64),
    #[error("conformal radicand {0} left the principal square-root branch")]
    BranchCut(C),
}

/// Eigenvalue branch `l_j(k)`, j in 1..=3.
pub fn lambda(j: i32, k: C) -> C {
    assert!((1..=3).contains(&j), "branch index must be 1, 2 or 3");
    let wk = omega_pow(j) * k;
    C::new(0.0, 1.0) * (wk + wk.inv()) / C::new(2.0 * 3.0f64.sqrt(), 0.0)
}

/// Second-symbol branch `z_j(k)`, j in 1..=3.
pub fn zeta_fun(j: i32, k: C) -> C {
    assert!((1..=3).contains(&j), "branch index must be 1, 2 or 3");
    let wk2 = (omega_pow(j) * k).powi(2);
    C::new(0.0, 1.0) * (wk2 + wk2.inv()) / C::new(4.0 * 3.0f64.sqrt(), 0.0)
}

/// Closed form of the (2,1) phase difference:
/// `(k^2 - 1)/(2k) - tau (k^4 - 1)/(4 k^2)`.
pub fn phase21(tau: f64, k: C) -> C {
    let k2 = k * k;
    (k2 - C::new(1.0, 0.0)) / (C::new(2.0, 0.0) * k)
        - C::new(tau, 0.0) * (k2 * k2 - C::new(1.0, 0.0)) / (C::new(4.0, 0.0) * k2)
}

/// k-derivative of `phase21`: `(k^3 + k - tau (k^4 + 1)) / (2 k^3)`.
pub fn dphase21_dk(tau: f64, k: C) -> C {
    let k2 = k * k;
    let k3 = k2 * k;
    (k3 + k - C::new(tau, 0.0) * (k2 * k2 + C::new(1.0, 0.0))) / (C::new(2.0, 0.0) * k3)
}

/// On the unit circle the (2,1) phase is purely imaginary:
/// `Im ph_21(tau, e^{i theta}) = (1 - tau cos theta) sin theta`.
pub fn phase21_circle_im(tau: f64, theta: f64) -> f64 {
    (1.0 - tau * theta.cos()) * theta.sin()
}

/// General phase difference `ph_{ij}`, reduced to `phase21` where an exact
/// closed form exists:
/// `ph_31(tau, k) = -ph_21(tau, w^2 k)` and `ph_32(tau, k) = ph_21(tau, w k)`.
pub fn phase(i: i32, j: i32, tau: f64, k: C) -> C {
    assert!((1..=3).contains(&i) && (1..=3).contains(&j));
    match (i, j) {
        (2, 1) => phase21(tau, k),
        (1, 2) => -phase21(tau, k),
        (3, 1) => -phase21(tau, OMEGA2 * k),
        (1, 3) => phase21(tau, OMEGA2 * k),
        (3, 2) => phase21(tau, OMEGA * k),
        (2, 3) => -phase21(tau, OMEGA * k),
        _ => C::new(0.0, 0.0),
    }
}

/// Sign of `Re ph_{ij}(tau, k)`: +1 where the exponential `e^{x ph_{ij}}`
/// grows as x -> +inf, -1 where it decays, 0 on the (numerically resolved)
/// transition set.
pub fn signature(i: i32, j: i32, tau: f64, k: C) -> i8 {
    let re = phase(i, j, tau, k).re;
    if re.abs() < 1e-14 * (1.0 + k.norm() + k.norm().powi(2)) {
        0
    } else if re > 0.0 {
        1
    } else {
        -1
    }
}

/// Saddle geometry of the (2,1) phase at a fixed ratio `tau = x / (12 t)`
/// scaling parameter.
#[derive(Debug, Clone)]
pub struct PhaseContext {
    pub tau: f64,
    /// Saddle in the upper half of the unit circle (second quadrant).
    pub k1: C,
    /// Complex conjugate of `k1`.
    pub k2: C,
    /// Real saddle greater than one (infinite when `tau = 0`).
    pub k3: C,
    /// Real saddle `1 / k3` inside the unit disk.
    pub k4: C,
    /// `arg k1`, in `(pi/2, 2 pi/3)` for the supported `tau` range.
    pub arg_k1: f64,
    /// Scale of the conformal variable: `zstar^2 = 2 i hess`, with the branch
    /// fixed by `-i k1 zstar > 0`.
    pub zstar: C,
    /// Half the second k-derivative of `phase21` at `k1`: the coefficient of
    /// `(k - k1)^2` in the local expansion.
    pub hess: C,
}

/// Solve the saddle equation `tau k^4 - k^3 - k + tau = 0` in closed form and
/// package the local expansion data at the distinguished saddle `k1`.
///
/// Valid for `0 <= tau < 1/sqrt 3`; at `tau = 0` the finite saddles are
/// `±i` and the real pair degenerates to `{0, inf}`.
pub fn saddle_points(tau: f64) -> Result<PhaseContext, PhaseError> {
    if tau < 0.0 {
        return Err(PhaseError::NegativeTau(tau));
    }
    let (k1, k3, k4) = if tau == 0.0 {
        (
            C::new(0.0, 1.0),
            C::new(f64::INFINITY, 0.0),
            C::new(0.0, 0.0),
        )
    } else {
        let s = (8.0 * tau * tau + 1.0).sqrt();
        let k1 = C::new(
            (1.0 - s) / (4.0 * tau),
            std::f64::consts::SQRT_2 * (4.0 * tau * tau - 1.0 + s).sqrt() / (4.0 * tau),
        );
        let k3r = (1.0 + s + std::f64::consts::SQRT_2 * (-4.0 * tau * tau + 1.0 + s).sqrt())
            / (4.0 * tau);
        (k1, C::new(k3r, 0.0), C::new(1.0 / k3r, 0.0))
    };
    let k2 = k1.conj();
    // hess = ph21''(k1) / 2 = (4 tau - 3 k1 - k1^3) / (4 k1^4).
    let k1_2 = k1 * k1;
    let hess = (C::new(4.0 * tau, 0.0) - C::new(3.0, 0.0) * k1 - k1_2 * k1)
        / (C::new(4.0, 0.0) * k1_2 * k1_2);
    let mut zstar = C::new(std::f64::consts::SQRT_2, 0.0)
        * C::from_polar(1.0, std::f64::consts::FRAC_PI_4)
        * hess.sqrt();
    let orient = -C::new(0.0, 1.0) * k1 * zstar;
    if orient.re < 0.0 {
        zstar = -zstar;
    }
    debug_assert!((-C::new(0.0, 1.0) * k1 * zstar).im.abs() < 1e-12);
    Ok(PhaseContext {
        tau,
        k1,
        k2,
        k3,
        k4,
        arg_k1: k1.arg(),
        zstar,
        hess,
    })
}

/// `(hess, zstar)` at the distinguished saddle, for callers that only need
/// the local expansion scales.
pub fn hessian_and_zstar(tau: f64) -> Result<(C, C), PhaseError> {
    let ctx = saddle_points(tau)?;
    Ok((ctx.hess, ctx.zstar))
}

/// Conformal change of variable straightening the phase near `k1`:
/// returns `(z, zhat)` with `z = zstar sqrt(x) (k - k1) zhat` satisfying
/// `x (ph21(k) - ph21(k1)) = -i z^2 / 2` exactly.
///
/// `zhat` is the principal square root of
/// `2 i (ph21(k) - ph21(k1)) / (zstar (k - k1))^2`, which tends to 1 at the
/// saddle; an error is returned when the radicand leaves the right half
/// plane, signalling that the requested point is too far from the saddle for
/// this branch of the map.
pub fn zmap(x: f64, tau: f64, k: C) -> Result<(C, C), PhaseError> {
    let ctx = saddle_points(tau)?;
    zmap_ctx(x, &ctx, k)
}

/// `zmap` against a precomputed [`PhaseContext`].
pub fn zmap_ctx(x: f64, ctx: &PhaseContext, k: C) -> Result<(C, C), PhaseError> {
    let dk = k - ctx.k1;
    let scale = ctx.zstar * ctx.zstar * dk * dk;
    let zhat = if dk.norm() < 1e-13 {
        C::new(1.0, 0.0)
    } else {
        let radicand = C::new(0.0, 2.0) * (phase21(ctx.tau, k) - phase21(ctx.tau, ctx.k1)) / scale;
        if radicand.re <= 0.0 {
            return Err(PhaseError::BranchCut(radicand));
        }
        radicand.sqrt()
    };
    Ok((ctx.zstar * C::new(x.sqrt(), 0.0) * dk * zhat, zhat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn quartic(tau: f64, k: C) -> C {
        C::new(tau, 0.0) * k.powi(4) - k.powi(3) - k + C::new(tau, 0.0)
    }

    #[test]
    fn closed_form_matches_branch_differences() {
        let ks = [C::new(0.7, 0.4), C::new(-1.3, 0.2), C::new(0.1, -2.0)];
        for &k in &ks {
            for tau in [0.0, 0.13, 0.3] {
                let direct = lambda(2, k) - lambda(1, k)
                    + C::new(tau, 0.0) * (zeta_fun(2, k) - zeta_fun(1, k));
                let closed = phase21(tau, k);
                assert!((direct - closed).norm() < 1e-14 * (1.0 + closed.norm()));
            }
        }
    }

    #[test]
    fn rotation_reductions() {
        let ks = [C::new(0.9, 0.5), C::new(-0.4, -1.1)];
        for &k in &ks {
            for tau in [0.05, 0.22] {
                for (i, j, want) in [
                    (3, 1, -phase21(tau, OMEGA2 * k)),
                    (3, 2, phase21(tau, OMEGA * k)),
                ] {
                    let direct = lambda(i, k) - lambda(j, k)
                        + C::new(tau, 0.0) * (zeta_fun(i, k) - zeta_fun(j, k));
                    assert!((direct - want).norm() < 1e-14 * (1.0 + want.norm()));
                    assert!((phase(i, j, tau, k) - want).norm() == 0.0);
                }
            }
        }
    }

    #[test]
    fn inversion_antisymmetry_and_circle_values() {
        let k = C::new(0.8, 0.35);
        for tau in [0.07, 0.29] {
            let a = phase21(tau, k.inv());
            let b = -phase21(tau, k);
            assert!((a - b).norm() < 1e-14);
            for theta in [0.3, 1.6, 2.0, 4.4] {
                let v = phase21(tau, C::from_polar(1.0, theta));
                assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-15);
                assert_abs_diff_eq!(v.im, phase21_circle_im(tau, theta), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn saddles_kill_the_derivative_and_k1_is_unimodular() {
        for i in 0..50 {
            let tau = 0.01 + 0.29 * (i as f64 + 0.5) / 50.0;
            let ctx = saddle_points(tau).unwrap();
            for k in [ctx.k1, ctx.k2, ctx.k3, ctx.k4] {
                assert!(dphase21_dk(tau, k).norm() < 1e-12, "tau={tau} k={k}");
                assert!(quartic(tau, k).norm() < 1e-11 * (1.0 + k.norm().powi(4)));
            }
            assert!((ctx.k1.norm() - 1.0).abs() < 1e-13, "tau={tau}");
            assert_eq!(ctx.k2, ctx.k1.conj());
            assert!((ctx.k3 * ctx.k4 - C::new(1.0, 0.0)).norm() < 1e-12);
            assert!(ctx.arg_k1 > std::f64::consts::FRAC_PI_2);
            assert!(ctx.arg_k1 < 2.0 * std::f64::consts::FRAC_PI_3);
        }
    }

    #[test]
    fn small_tau_saddle_drifts_like_a_rotation() {
        for tau in [0.01, 0.05, 0.1] {
            let ctx = saddle_points(tau).unwrap();
            let drift = ctx.k1 - C::new(0.0, 1.0) * C::from_polar(1.0, tau);
            assert!(drift.norm() < 2.0 * tau.powi(3), "tau={tau} drift={drift}");
        }
    }

    #[test]
    fn degenerate_ratio_context() {
        let ctx = saddle_points(0.0).unwrap();
        assert_eq!(ctx.k1, C::new(0.0, 1.0));
        assert!((ctx.hess - C::new(0.0, -0.5)).norm() < 1e-15);
        assert!((ctx.zstar - C::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        for tau in [0.04, 0.18, 0.3] {
            let ctx = saddle_points(tau).unwrap();
            let h = 1e-5;
            for dir in [C::new(h, 0.0), C::new(0.0, h)] {
                let fd = (phase21(tau, ctx.k1 + dir) + phase21(tau, ctx.k1 - dir)
                    - C::new(2.0, 0.0) * phase21(tau, ctx.k1))
                    / (dir * dir);
                assert!((fd / C::new(2.0, 0.0) - ctx.hess).norm() < 1e-5 * ctx.hess.norm());
            }
        }
    }

    #[test]
    fn zstar_branch_orientation() {
        for tau in [0.0, 0.05, 0.17, 0.3] {
            let ctx = saddle_points(tau).unwrap();
            let orient = -C::new(0.0, 1.0) * ctx.k1 * ctx.zstar;
            assert!(orient.re > 0.0);
            assert!(orient.im.abs() < 1e-13 * orient.re);
            let sq = ctx.zstar * ctx.zstar - C::new(0.0, 2.0) * ctx.hess;
            assert!(sq.norm() < 1e-14);
            let a = ctx.zstar.arg();
            assert!(a <= 0.0 && a > -std::f64::consts::FRAC_PI_6 - 1e-12);
        }
    }

    #[test]
    fn conformal_map_linearises_the_phase_exactly() {
        let x = 37.0;
        for tau in [0.02, 0.15, 0.28] {
            let ctx = saddle_points(tau).unwrap();
            let (z0, zh0) = zmap_ctx(x, &ctx, ctx.k1).unwrap();
            assert_eq!(z0.norm(), 0.0);
            assert_eq!(zh0, C::new(1.0, 0.0));
            for r in [0.01, 0.05, 0.09] {
                for ang in [0.4, 2.1, 3.9, 5.5] {
                    let k = ctx.k1 + C::from_polar(r, ang);
                    let (z, zhat) = zmap_ctx(x, &ctx, k).unwrap();
                    let lhs = C::new(x, 0.0) * (phase21(tau, k) - phase21(tau, ctx.k1));
                    let rhs = -C::new(0.0, 0.5) * z * z;
                    assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
                    assert!((zhat - C::new(1.0, 0.0)).norm() < 0.5, "zhat wandered: {zhat}");
                }
            }
        }
    }

    #[test]
    fn symmetry_matrices_are_permutations() {
        let a = cyclic_permutation();
        let b = index_swap();
        let id = Mat3::identity();
        assert_eq!(a * a * a, id);
        assert_eq!(b * b, id);
        let e1 = nalgebra::Vector3::new(C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0));
        let got = a * e1;
        assert_eq!(got[1], C::new(1.0, 0.0));
    }

    proptest! {
        #[test]
        fn antisymmetry_everywhere(re in -2.0f64..2.0, im in -2.0f64..2.0,
                                   tau in 0.0f64..0.34) {
            let k = C::new(re, im);
            prop_assume!(k.norm() > 0.05);
            for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                let fwd = phase(i, j, tau, k);
                let bwd = phase(j, i, tau, k);
                prop_assert!((fwd + bwd).norm() <= 1e-13 * (1.0 + fwd.norm()));
            }
        }

        #[test]
        fn signature_agrees_with_real_part(re in -2.0f64..2.0, im in -2.0f64..2.0,
                                           tau in 0.0f64..0.34) {
            let k = C::new(re, im);
            prop_assume!(k.norm() > 0.05);
            let s = signature(2, 1, tau, k);
            let ph = phase(2, 1, tau, k).re;
            if ph.abs() > 1e-10 {
                prop_assert_eq!(s as i32, ph.signum() as i32);
            }
        }

        #[test]
        fn saddle_formulas_solve_the_quartic(tau in 0.005f64..0.33) {
            let ctx = saddle_points(tau).unwrap();
            for k in [ctx.k1, ctx.k2, ctx.k3, ctx.k4] {
                prop_assert!(quartic(tau, k).norm() < 1e-10 * (1.0 + k.norm().powi(4)));
            }
        }
    }
}
