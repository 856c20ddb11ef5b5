//! Solvable cross model problem.
//!
//! The 3×3 Riemann–Hilbert problem posed on the four diagonal rays
//! `arg z ∈ {π/4, 3π/4, 5π/4, 7π/4}` (oriented away from the origin) with
//! jump data built from a single complex parameter `q`:
//! upper-triangular factors carrying `z^{-2iν} e^{iz²/2}` on the rays in the
//! upper half plane sectors and lower-triangular factors carrying
//! `z^{2iν} e^{-iz²/2}` on the complementary rays, where
//! `ν = -ln(1+|q|²)/(2π) ≤ 0`. Only the upper-left 2×2 block is nontrivial;
//! the third row and column stay identity.
//!
//! The solution is assembled in closed form as `m(z) = Ψ(z) J(z) B(z)⁻¹`:
//! `Ψ` is an entire matrix of parabolic cylinder functions solving
//! `Ψ' = (izσ̃₃/2 + b)Ψ`, `J` is a sector-wise constant accumulation of the
//! triangular jump factors, and `B(z) = z₍₀₎^{-iνσ̃₃} e^{iz²σ̃₃/4}` carries the
//! oscillatory normalisation (the power uses `arg₀ z ∈ (0, 2π)`, cut along
//! the positive real axis). The first moment at infinity is off-diagonal with
//! entries `β₁₂`, `β₂₁` satisfying `β₁₂ β₂₁ = ν`.

use crate::special::gamma::recip_gamma;
use crate::special::pcf::pcf_d;
use crate::{C, Mat3};
use std::f64::consts::PI;

fn cis(t: f64) -> C {
    C::new(t.cos(), t.sin())
}

fn one() -> C {
    C::new(1.0, 0.0)
}

fn zero() -> C {
    C::new(0.0, 0.0)
}

/// Angle of `z` in the window `(0, 2π]` (cut along the positive real axis;
/// points on the cut are treated as approached from below).
pub fn arg0(z: C) -> f64 {
    let a = z.arg();
    if a <= 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Decay exponent `ν(q) = -ln(1 + |q|²)/(2π) ≤ 0`.
pub fn nu_of_q(q: C) -> f64 {
    -q.norm_sqr().ln_1p() / (2.0 * PI)
}

/// `(1,2)` entry of the first moment of the solution at infinity.
pub fn beta12(q: C) -> C {
    if q.norm() == 0.0 {
        return zero();
    }
    let nu = nu_of_q(q);
    let inu = C::new(0.0, nu);
    C::new((2.0 * PI).sqrt(), 0.0) * cis(PI / 4.0) * C::new((1.5 * PI * nu).exp(), 0.0)
        * recip_gamma(inu)
        / q
}

/// `(2,1)` entry of the first moment of the solution at infinity.
pub fn beta21(q: C) -> C {
    if q.norm() == 0.0 {
        return zero();
    }
    let nu = nu_of_q(q);
    let minus_inu = C::new(0.0, -nu);
    C::new((2.0 * PI).sqrt(), 0.0) * cis(-PI / 4.0) * C::new((-2.5 * PI * nu).exp(), 0.0)
        * recip_gamma(minus_inu)
        / (-q.conj())
}

/// First moment `m₁(q)`: off-diagonal in the 2×2 block, zero elsewhere.
pub fn model_m1(q: C) -> Mat3 {
    let mut m = Mat3::zeros();
    m[(0, 1)] = beta12(q);
    m[(1, 0)] = beta21(q);
    m
}

fn upper(v: C) -> Mat3 {
    let mut m = Mat3::identity();
    m[(0, 1)] = v;
    m
}

fn lower(v: C) -> Mat3 {
    let mut m = Mat3::identity();
    m[(1, 0)] = v;
    m
}

/// Constant triangular factor stripped from the jump on ray `j ∈ {1,2,3,4}`.
pub fn ray_factor(q: C, ray: usize) -> Mat3 {
    let denom = C::new(1.0 + q.norm_sqr(), 0.0);
    match ray {
        1 => upper(-q.conj() / denom),
        2 => lower(q),
        3 => upper(q.conj()),
        4 => lower(-q / denom),
        _ => panic!("ray index must be 1..=4"),
    }
}

/// Sector-wise constant factor `J`: the identity between the positive real
/// axis and the first ray, then the cumulative product of the ray factors.
/// `sector ∈ 0..=4` counts counterclockwise starting just above the positive
/// real axis.
pub fn sector_matrix(q: C, sector: usize) -> Mat3 {
    assert!(sector <= 4, "sector index must be 0..=4");
    let mut m = Mat3::identity();
    for ray in 1..=sector {
        m *= ray_factor(q, ray);
    }
    m
}

fn sector_of(z: C) -> usize {
    let a = arg0(z);
    let s = (a / (PI / 4.0) + 1.0) / 2.0;
    (s.floor() as usize).min(4)
}

/// Oscillatory normalisation `B(z)`; diagonal, determinant one.
pub fn b_matrix(nu: f64, z: C) -> Mat3 {
    let a0 = arg0(z);
    let lnr = z.norm().ln();
    // Log of the (1,1) entry: -iν ln₀ z + iz²/4. The (2,2) entry is its
    // reciprocal; exponentiating the negated log avoids the underflow a
    // complex division would hit once |z|² exceeds a few hundred.
    let lg = C::new(nu * a0, -nu * lnr) + C::i() * z * z * C::new(0.25, 0.0);
    let mut m = Mat3::identity();
    m[(0, 0)] = lg.exp();
    m[(1, 1)] = (-lg).exp();
    m
}

/// Entire part `Ψ(z)`: parabolic cylinder columns solving
/// `Ψ' = (iz σ̃₃/2 + b)Ψ` with `b = [[0, -iβ₁₂], [iβ₂₁, 0]]` in the 2×2 block.
pub fn psi_matrix(q: C, z: C) -> Mat3 {
    let nu = nu_of_q(q);
    // Orders: column 1 uses a = -iν at argument e^{-iπ/4} z, column 2 the
    // mirror a = iν at e^{iπ/4} z.
    let a1 = C::new(0.0, -nu);
    let a2 = C::new(0.0, nu);
    let zeta = cis(-PI / 4.0) * z;
    let eta = cis(PI / 4.0) * z;
    let scale = C::new((PI * nu / 4.0).exp(), 0.0);
    let mut m = Mat3::identity();
    m[(0, 0)] = scale * pcf_d(a1, zeta);
    m[(1, 0)] = beta21(q) * scale * cis(-PI / 4.0) * pcf_d(a1 - one(), zeta);
    m[(0, 1)] = beta12(q) * scale * cis(PI / 4.0) * pcf_d(a2 - one(), eta);
    m[(1, 1)] = scale * pcf_d(a2, eta);
    m
}

/// The solution `m(z) = Ψ(z) J(z) B(z)⁻¹` for `z` off the cross. Points
/// exactly on a ray are assigned the sector below (clockwise side).
pub fn model_m(q: C, z: C) -> Mat3 {
    model_m_in_sector(q, z, sector_of(z))
}

/// The boundary value of the solution at a point `z` on ray
/// `ray ∈ {1,2,3,4}`: `plus` selects the left side (counterclockwise sector
/// `ray`), otherwise the right side (sector `ray - 1`).
pub fn model_m_on_ray(q: C, z: C, ray: usize, plus: bool) -> Mat3 {
    assert!((1..=4).contains(&ray));
    let sector = if plus { ray } else { ray - 1 };
    model_m_in_sector(q, z, sector)
}

fn model_m_in_sector(q: C, z: C, sector: usize) -> Mat3 {
    let nu = nu_of_q(q);
    let b = b_matrix(nu, z);
    let mut binv = Mat3::identity();
    binv[(0, 0)] = b[(1, 1)];
    binv[(1, 1)] = b[(0, 0)];
    psi_matrix(q, z) * sector_matrix(q, sector) * binv
}

/// Jump matrix of the model problem on ray `j` at the point `z` (which should
/// lie on the ray): `B Vⱼ B⁻¹` written out explicitly.
pub fn model_jump(q: C, z: C, ray: usize) -> Mat3 {
    let nu = nu_of_q(q);
    let a0 = arg0(z);
    let lnr = z.norm().ln();
    // z₍₀₎^{-2iν} and the half-oscillation e^{iz²/2}.
    let zpow = C::new(2.0 * nu * a0, -2.0 * nu * lnr).exp();
    let osc = (C::i() * z * z * C::new(0.5, 0.0)).exp();
    let denom = C::new(1.0 + q.norm_sqr(), 0.0);
    match ray {
        1 => upper(-q.conj() / denom * zpow * osc),
        2 => lower(q / zpow / osc),
        3 => upper(q.conj() * zpow * osc),
        4 => lower(-q / denom / zpow / osc),
        _ => panic!("ray index must be 1..=4"),
    }
}
