//! Leading-order behaviour of the solution along rays `τ = t/x` in the
//! sector adjacent to the positive x-axis: the modulated-cosine law
//! `u ≈ A(τ) x^{-1/2} cos α(x,τ)`.
//!
//! The amplitude collects the decay exponent ν, the saddle geometry, and the
//! rescaling scalar `z⋆`; the phase collects the reflection argument at the
//! saddle, `arg Γ(iν)`, the argument of the local scalar `d₀`, and the
//! linearly growing term `x·Im Φ̃₂₁(τ, k₁)`. Everything τ-dependent is cached
//! in a [`RayEvaluator`] so x-sweeps along a fixed ray are cheap.

use crate::parametrix::{arg_d0_route_explicit, nu_from_spec, ParametrixError};
use crate::phase::{phase21_circle_im, saddle_points, PhaseContext, PhaseError};
use crate::scattering::SpectralData;
use crate::special::gamma::ln_gamma;
use crate::C;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Largest ray slope evaluated by default; beyond it the oscillatory sector
/// analysis is not applicable without re-deriving the contour data.
pub const DEFAULT_TAU_MAX: f64 = 0.3;
/// Smallest x for which the leading term is worth reporting.
pub const DEFAULT_X_MIN: f64 = 10.0;
/// Below this |ν| the phase is ill-defined (`arg Γ(iν)` degenerates) while
/// the amplitude is zero to machine accuracy, so rows are reported as
/// zero-amplitude with a NaN phase sentinel.
pub const NU_DEGENERATE: f64 = 1e-250;

#[derive(Debug, Error)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Parametrix(#[from] ParametrixError),
    #[error("ray slope t/x = {tau} outside [0, {tau_max}]")]
    OutOfSector { tau: f64, tau_max: f64 },
    #[error("x = {0} below the reporting threshold {DEFAULT_X_MIN}")]
    SmallX(f64),
    #[error("amplitude radicand -1 - 2cos(2 arg k1) = {0} is negative")]
    NegativeRadicand(f64),
    #[error("branch scalar -i k1 z* = {0} is not positive")]
    BadBranch(f64),
}

/// Structural size of the two error terms accompanying the leading-order
/// formula; reported for annotation only (no constants are claimed). The
/// power term uses the exponent N = 2 by convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorScale {
    pub x_n_term: f64,
    pub log_term: f64,
}

/// One evaluated point of the leading-order formula.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticResult {
    pub x: f64,
    pub tau: f64,
    pub t: f64,
    /// Envelope A(τ) ≥ 0 of `u·√x`.
    pub amplitude: f64,
    /// Phase in (-π, π].
    pub alpha_wrapped: f64,
    /// Phase as the raw sum of its five terms, continuous in x along the ray.
    pub alpha_unwrapped: f64,
    pub u_leading: f64,
    pub error_scale: ErrorScale,
}

fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Oscillation envelope
/// `A(τ) = 2√3 · √(-ν) √(-1 - 2cos(2 arg k₁)) · Im k₁ / (-i k₁ z⋆)`.
///
/// The radicand is positive for `arg k₁ ∈ (π/2, 2π/3)` and the denominator is
/// the positive real number fixed by the branch of `z⋆`, so the result is a
/// nonnegative real that vanishes exactly when ν does.
pub fn amplitude(spec: &SpectralData, ctx: &PhaseContext) -> Result<f64, AsymptoticsError> {
    let nu = nu_from_spec(spec, ctx.arg_k1)?;
    let rad = -1.0 - 2.0 * (2.0 * ctx.arg_k1).cos();
    if rad < 0.0 {
        return Err(AsymptoticsError::NegativeRadicand(rad));
    }
    let denom = (-C::i() * ctx.k1 * ctx.zstar).re;
    if denom <= 0.0 {
        return Err(AsymptoticsError::BadBranch(denom));
    }
    Ok(2.0 * 3.0_f64.sqrt() * (-nu).sqrt() * rad.sqrt() * ctx.k1.im / denom)
}

/// Cached τ-dependent data for evaluating `A cos α` along one ray.
#[derive(Debug, Clone)]
pub struct RayEvaluator {
    pub tau: f64,
    pub nu: f64,
    pub amplitude: f64,
    /// `Im Φ̃₂₁(τ, k₁)`: the linear growth rate of the phase in x.
    pub im_phase: f64,
    /// x-independent part of the phase:
    /// `3π/4 + arg r₂(k₁) + arg Γ(iν) + (arg d₀ + ν ln x)`.
    /// NaN when the ray is degenerate (ν = 0).
    base: f64,
}

impl RayEvaluator {
    pub fn new(spec: &SpectralData, ctx: &PhaseContext) -> Result<Self, AsymptoticsError> {
        let nu = nu_from_spec(spec, ctx.arg_k1)?;
        let amp = amplitude(spec, ctx)?;
        let im_phase = phase21_circle_im(ctx.tau, ctx.arg_k1);
        let base = if nu < -NU_DEGENERATE {
            let arg_r2 = spec.r2_at(ctx.arg_k1).map_err(ParametrixError::from)?.arg();
            let arg_gamma = ln_gamma(C::new(0.0, nu)).im;
            // Evaluating the closed argument formula at x = 1 isolates its
            // x-free part; the -ν ln x term is restored in alpha_unwrapped.
            let arg_d0_static = arg_d0_route_explicit(spec, ctx, 1.0)?;
            0.75 * PI + arg_r2 + arg_gamma + arg_d0_static
        } else {
            f64::NAN
        };
        Ok(RayEvaluator { tau: ctx.tau, nu, amplitude: amp, im_phase, base })
    }

    /// A ray with ν = 0 carries no oscillation: the amplitude is zero and the
    /// phase is reported as NaN.
    pub fn is_degenerate(&self) -> bool {
        !self.base.is_finite()
    }

    pub fn alpha_unwrapped(&self, x: f64) -> f64 {
        self.base - self.nu * x.ln() + x * self.im_phase
    }

    pub fn alpha_wrapped(&self, x: f64) -> f64 {
        wrap_angle(self.alpha_unwrapped(x))
    }

    pub fn u(&self, x: f64) -> f64 {
        if self.is_degenerate() {
            0.0
        } else {
            self.amplitude / x.sqrt() * self.alpha_unwrapped(x).cos()
        }
    }

    pub fn row(&self, x: f64) -> AsymptoticResult {
        let alpha_unwrapped = self.alpha_unwrapped(x);
        AsymptoticResult {
            x,
            tau: self.tau,
            t: self.tau * x,
            amplitude: self.amplitude,
            alpha_wrapped: wrap_angle(alpha_unwrapped),
            alpha_unwrapped,
            u_leading: self.u(x),
            error_scale: ErrorScale { x_n_term: x.powi(-2), log_term: x.ln() / x },
        }
    }
}

/// Phase `α(x,τ)` as a standalone call (see [`RayEvaluator`] for sweeps).
pub fn phase_alpha(
    spec: &SpectralData,
    ctx: &PhaseContext,
    x: f64,
) -> Result<f64, AsymptoticsError> {
    Ok(RayEvaluator::new(spec, ctx)?.alpha_unwrapped(x))
}

/// Leading-order evaluation at one spacetime point `(x, t)` with the default
/// sector bound. The ray t = 0 is returned as an exact zero-amplitude row
/// without evaluating any τ = 0 limits.
pub fn u_leading(
    spec: &SpectralData,
    x: f64,
    t: f64,
) -> Result<AsymptoticResult, AsymptoticsError> {
    u_leading_in_sector(spec, x, t, DEFAULT_TAU_MAX)
}

pub fn u_leading_in_sector(
    spec: &SpectralData,
    x: f64,
    t: f64,
    tau_max: f64,
) -> Result<AsymptoticResult, AsymptoticsError> {
    if x < DEFAULT_X_MIN {
        return Err(AsymptoticsError::SmallX(x));
    }
    let tau = t / x;
    if !(0.0..=tau_max).contains(&tau) {
        return Err(AsymptoticsError::OutOfSector { tau, tau_max });
    }
    if tau == 0.0 {
        return Ok(AsymptoticResult {
            x,
            tau,
            t,
            amplitude: 0.0,
            alpha_wrapped: f64::NAN,
            alpha_unwrapped: f64::NAN,
            u_leading: 0.0,
            error_scale: ErrorScale { x_n_term: x.powi(-2), log_term: x.ln() / x },
        });
    }
    let ctx = saddle_points(tau)?;
    Ok(RayEvaluator::new(spec, &ctx)?.row(x))
}

/// Residual of the ray identity
/// `Im(Φ̃₂₁(τ,k₁) - τ · d/dτ[Φ̃₂₁(τ, k₁(τ))]) = Im k₁`,
/// with the total τ-derivative taken by a five-point central stencil.
pub fn trajectory_identity_residual(tau: f64) -> Result<f64, PhaseError> {
    let h = (tau / 4.0).min(2e-3);
    let f = |t: f64| -> Result<f64, PhaseError> {
        let c = saddle_points(t)?;
        Ok(phase21_circle_im(t, c.arg_k1))
    };
    let d = (f(tau - 2.0 * h)? - 8.0 * f(tau - h)? + 8.0 * f(tau + h)? - f(tau + 2.0 * h)?)
        / (12.0 * h);
    let ctx = saddle_points(tau)?;
    Ok((phase21_circle_im(tau, ctx.arg_k1) - tau * d - ctx.k1.im).abs())
}

/// All x in `[x_lo, x_hi]` where the leading term changes sign (cos α = 0),
/// found by solving `α(x) = π/2 + jπ` for each attainable integer j. The
/// phase is strictly increasing in x on non-degenerate rays, so the roots
/// are simple and ordered. Degenerate rays have no crossings.
pub fn zero_crossings(ray: &RayEvaluator, x_lo: f64, x_hi: f64) -> Vec<f64> {
    if ray.is_degenerate() || x_hi <= x_lo {
        return Vec::new();
    }
    let a_lo = ray.alpha_unwrapped(x_lo);
    let a_hi = ray.alpha_unwrapped(x_hi);
    let j_lo = ((a_lo - FRAC_PI_2) / PI).ceil() as i64;
    let j_hi = ((a_hi - FRAC_PI_2) / PI).floor() as i64;
    let mut out = Vec::with_capacity((j_hi - j_lo + 1).max(0) as usize);
    for j in j_lo..=j_hi {
        let target = FRAC_PI_2 + j as f64 * PI;
        let mut x = x_lo + (target - a_lo) / (a_hi - a_lo) * (x_hi - x_lo);
        for _ in 0..40 {
            let step = (ray.alpha_unwrapped(x) - target) / (ray.im_phase - ray.nu / x);
            x -= step;
            if step.abs() < 1e-11 * x {
                break;
            }
        }
        out.push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::{SpectralData, SyntheticProfile};
    use approx::assert_relative_eq;

    fn synthetic_spec() -> SpectralData {
        SpectralData::synthetic(SyntheticProfile::default(), 96).unwrap()
    }

    fn ray_at(tau: f64) -> (SpectralData, PhaseContext, RayEvaluator) {
        let spec = synthetic_spec();
        let ctx = saddle_points(tau).unwrap();
        let ray = RayEvaluator::new(&spec, &ctx).unwrap();
        (spec, ctx, ray)
    }

    #[test]
    fn amplitude_radicand_matches_direct_trigonometry() {
        // Independent check of -1 - 2cos(2 arg k1) at tau = 0.1 from a saddle
        // location computed once by an external polynomial solver.
        let ctx = saddle_points(0.1).unwrap();
        let k1_oracle = C::new(-0.098076, 0.995179);
        let rad = -1.0 - 2.0 * (2.0 * ctx.arg_k1).cos();
        let rad_oracle = -1.0 - 2.0 * (2.0 * k1_oracle.arg()).cos();
        assert!((rad - rad_oracle).abs() < 1e-5, "{rad} vs {rad_oracle}");
        assert!((rad - 0.9615).abs() < 1e-4);
    }

    #[test]
    fn amplitude_is_zero_exactly_when_nu_is() {
        let spec = synthetic_spec();
        // The synthetic reflection modulus vanishes identically at the arc
        // start, so the straight-down ray carries exactly zero amplitude.
        let ctx = saddle_points(0.0).unwrap();
        assert_eq!(amplitude(&spec, &ctx).unwrap(), 0.0);
        let ctx = saddle_points(0.2).unwrap();
        assert!(amplitude(&spec, &ctx).unwrap() > 0.0);
    }

    #[test]
    fn gamma_argument_approaches_a_right_angle_from_above() {
        // arg Γ(iν) = π/2 - γν + O(ν³) as ν → 0⁻, so the defect after
        // removing the linear term shrinks cubically.
        let gamma_euler = 0.5772156649015329;
        for nu in [-1e-3, -1e-2] {
            let arg = ln_gamma(C::new(0.0, nu)).im;
            let defect = arg - FRAC_PI_2 + gamma_euler * nu;
            assert!(defect.abs() < 1.5 * 0.4 * nu.abs().powi(3) + 1e-12, "nu={nu}: {defect:e}");
        }
    }

    #[test]
    fn phase_grows_linearly_in_x_with_a_log_correction() {
        let (_, _, ray) = ray_at(0.2);
        let (x1, x2) = (50.0, 1300.0);
        let predicted = (x2 - x1) * ray.im_phase - ray.nu * (x2 / x1).ln();
        let actual = ray.alpha_unwrapped(x2) - ray.alpha_unwrapped(x1);
        assert_relative_eq!(actual, predicted, max_relative = 1e-12);
    }

    #[test]
    fn ray_identity_links_phase_and_saddle_height() {
        for tau in [0.02, 0.1, 0.2, 0.28] {
            let res = trajectory_identity_residual(tau).unwrap();
            assert!(res < 1e-6, "tau={tau}: residual {res:e}");
        }
    }

    #[test]
    fn sign_changes_are_spaced_by_the_phase_velocity() {
        let (_, _, ray) = ray_at(0.25);
        let xs = zero_crossings(&ray, 1000.0, 1000.0 + 32.0 * PI / ray.im_phase);
        assert!(xs.len() >= 30);
        let nominal = PI / ray.im_phase;
        for w in xs.windows(2) {
            let spacing = w[1] - w[0];
            assert!(
                (spacing / nominal - 1.0).abs() < 1e-3,
                "spacing {spacing} vs {nominal}"
            );
        }
    }

    #[test]
    fn extremal_points_touch_the_envelope() {
        let (_, _, ray) = ray_at(0.22);
        // Solve α = jπ (cosine extrema) near x ≈ 500 and check |u|√x = A.
        let j = (ray.alpha_unwrapped(500.0) / PI).round() as i64;
        let mut x = 500.0;
        for _ in 0..40 {
            let step =
                (ray.alpha_unwrapped(x) - j as f64 * PI) / (ray.im_phase - ray.nu / x);
            x -= step;
            if step.abs() < 1e-12 * x {
                break;
            }
        }
        assert!((ray.u(x).abs() * x.sqrt() - ray.amplitude).abs() < 1e-10);
        // Everywhere else the envelope bounds the rescaled solution.
        for i in 0..200 {
            let x = 400.0 + i as f64;
            assert!(ray.u(x).abs() * x.sqrt() <= ray.amplitude * (1.0 + 1e-14));
        }
    }

    #[test]
    fn amplitude_slope_steepens_as_the_ray_flattens() {
        // For data whose reflection modulus vanishes to all orders at the arc
        // start, ln A(ln τ) has slope growing without bound as τ → 0; it must
        // already exceed 3 at τ = 0.02.
        let spec = synthetic_spec();
        let slope = |tau: f64| -> f64 {
            let eps = 0.05_f64;
            let a_hi = amplitude(&spec, &saddle_points(tau * eps.exp()).unwrap()).unwrap();
            let a_lo = amplitude(&spec, &saddle_points(tau * (-eps).exp()).unwrap()).unwrap();
            (a_hi / a_lo).ln() / (2.0 * eps)
        };
        let s = [slope(0.04), slope(0.02), slope(0.013)];
        assert!(s[1] > 3.0, "slope at 0.02: {}", s[1]);
        assert!(s[2] > s[1] && s[1] > s[0], "slopes not steepening: {s:?}");
    }

    #[test]
    fn pointwise_rows_respect_the_sector_and_degenerate_ray() {
        let spec = synthetic_spec();
        let row = u_leading(&spec, 200.0, 0.0).unwrap();
        assert_eq!(row.amplitude, 0.0);
        assert_eq!(row.u_leading, 0.0);
        assert!(row.alpha_wrapped.is_nan());
        assert!(matches!(
            u_leading(&spec, 100.0, 70.0),
            Err(AsymptoticsError::OutOfSector { .. })
        ));
        assert!(matches!(u_leading(&spec, 5.0, 0.5), Err(AsymptoticsError::SmallX(_))));
        let row = u_leading(&spec, 400.0, 100.0).unwrap();
        let (_, _, ray) = ray_at(0.25);
        assert_relative_eq!(row.u_leading, ray.u(400.0), max_relative = 1e-9);
        assert_relative_eq!(row.alpha_wrapped, ray.alpha_wrapped(400.0), epsilon = 1e-9);
        assert!((row.t - 100.0).abs() < 1e-12);
    }
}
