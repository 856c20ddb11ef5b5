//! Forward scattering: initial data, spectral data on the unit circle, and
//! the global constraints the reflection coefficients must satisfy.
//!
//! The direct transform itself (Jost solutions and the matrices `s`, `s^A`)
//! lives in [`jost`]; an exactly solvable piecewise-constant fixture is in
//! [`exact`]; closed-form synthetic spectral data for driving the
//! asymptotics pipeline is in [`synthetic`].

pub mod exact;
pub mod jost;
pub mod synthetic;

use crate::numeric::interp::{CubicSpline, CubicSplineC};
use crate::numeric::ode::OdeError;
use crate::phase::{branch_collision_points, OMEGA, OMEGA2};
use crate::{C, Mat3};
use thiserror::Error;

pub use jost::{lax_u, scattering_matrices, solve_jost, volterra_residual};
pub use synthetic::SyntheticProfile;

#[derive(Debug, Error)]
pub enum ScatteringError {
    #[error("k = {0} is within 1e-6 of a spectral degeneracy (zero or a sixth root of unity)")]
    DegeneratePoint(C),
    #[error("initial data fails to decay at the grid edge: |{0}| = {1:.3e}")]
    PoorDecay(&'static str, f64),
    #[error("u1 must have zero net mass; residual {0:.3e}")]
    MassResidual(f64),
    #[error("integration failed: {0}")]
    Ode(#[from] OdeError),
    #[error("reflection-ratio pole: 1 - w^2 k^2 vanishes at k = {0}")]
    TildeRPole(C),
    #[error("theta = {0} outside the spectral grid range [{1}, {2})")]
    ThetaOutOfRange(f64, f64, f64),
    #[error("synthetic profile gives non-positive 1 + r1 r2 at theta = {0}")]
    BadProfile(f64),
    #[error("need at least {0} grid points, got {1}")]
    GridTooSmall(usize, usize),
}

/// Initial condition pair (u(x,0), u_t(x,0)) sampled on a uniform grid,
/// together with the derivative u0x and the cumulative integral
/// v0(x) = int_{-inf}^x u1.
///
/// For the built-in families the point evaluator uses closed forms, so the
/// adaptive integrator is not limited to grid nodes; tabulated data falls
/// back to not-a-knot cubic splines.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub xs: Vec<f64>,
    pub u0: Vec<f64>,
    pub u1: Vec<f64>,
    pub u0x: Vec<f64>,
    pub v0: Vec<f64>,
    profile: Profile,
}

#[derive(Debug, Clone)]
enum Profile {
    Zero,
    /// u0 = a0 e^{-((x-c)/w)^2}, u1 = -d/dx [a1 e^{-((x-c)/w)^2}].
    Gaussian { a0: f64, a1: f64, width: f64, center: f64 },
    /// u0 = a0 sech^2((x-c)/w), u1 = -d/dx [a1 sech^2((x-c)/w)].
    Sech2 { a0: f64, a1: f64, width: f64, center: f64 },
    Table { u0s: CubicSpline, v0s: CubicSpline },
}

/// Default working grid for Schwartz-type data.
pub const DEFAULT_X_RANGE: (f64, f64) = (-30.0, 30.0);
pub const DEFAULT_X_POINTS: usize = 4096;

impl InitialData {
    pub fn zero() -> Self {
        let n = 64;
        let xs: Vec<f64> = (0..n)
            .map(|i| DEFAULT_X_RANGE.0
                + (DEFAULT_X_RANGE.1 - DEFAULT_X_RANGE.0) * i as f64 / (n - 1) as f64)
            .collect();
        InitialData {
            u0: vec![0.0; n],
            u1: vec![0.0; n],
            u0x: vec![0.0; n],
            v0: vec![0.0; n],
            xs,
            profile: Profile::Zero,
        }
    }

    pub fn gaussian(a0: f64, a1: f64, width: f64, center: f64) -> Self {
        Self::family(Profile::Gaussian { a0, a1, width, center })
    }

    pub fn sech2(a0: f64, a1: f64, width: f64, center: f64) -> Self {
        Self::family(Profile::Sech2 { a0, a1, width, center })
    }

    fn family(profile: Profile) -> Self {
        let n = DEFAULT_X_POINTS;
        let (xa, xb) = DEFAULT_X_RANGE;
        let xs: Vec<f64> = (0..n).map(|i| xa + (xb - xa) * i as f64 / (n - 1) as f64).collect();
        let mut data = InitialData {
            u0: Vec::with_capacity(n),
            u1: Vec::with_capacity(n),
            u0x: Vec::with_capacity(n),
            v0: Vec::with_capacity(n),
            xs,
            profile,
        };
        for i in 0..n {
            let x = data.xs[i];
            let (u0, u0x, v0) = data.eval(x);
            let u1 = data.eval_u1(x);
            data.u0.push(u0);
            data.u0x.push(u0x);
            data.v0.push(v0);
            data.u1.push(u1);
        }
        data
    }

    /// Tabulated data: u0x via spline differentiation, v0 by cumulative
    /// trapezoid-corrected integration of u1 (whose net mass must vanish).
    pub fn from_table(xs: Vec<f64>, u0: Vec<f64>, u1: Vec<f64>) -> Result<Self, ScatteringError> {
        let n = xs.len();
        if n < 8 {
            return Err(ScatteringError::GridTooSmall(8, n));
        }
        assert!(u0.len() == n && u1.len() == n, "ragged table");
        let u1s = CubicSpline::new(&xs, &u1);
        // v0 on the grid: integrate the u1 spline segment by segment (exact
        // for the cubic pieces), then respline.
        let mut v0 = vec![0.0; n];
        for i in 1..n {
            let [c0, c1, c2, c3] = u1s.coeffs(i - 1);
            let h = xs[i] - xs[i - 1];
            v0[i] = v0[i - 1]
                + c0 * h + c1 * h * h / 2.0 + c2 * h.powi(3) / 3.0 + c3 * h.powi(4) / 4.0;
        }
        let mass = v0[n - 1];
        if mass.abs() > 1e-8 {
            return Err(ScatteringError::MassResidual(mass));
        }
        let u0s = CubicSpline::new(&xs, &u0);
        let v0s = CubicSpline::new(&xs, &v0);
        let u0x = xs.iter().map(|&x| u0s.derivative(x)).collect();
        Ok(InitialData { xs, u0, u1, u0x, v0, profile: Profile::Table { u0s, v0s } })
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// (u0, u0x, v0) at an arbitrary point; identically zero outside the
    /// grid so Jost solutions are exactly constant there.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        if x < self.x_min() || x > self.x_max() {
            return (0.0, 0.0, 0.0);
        }
        match &self.profile {
            Profile::Zero => (0.0, 0.0, 0.0),
            Profile::Gaussian { a0, a1, width, center } => {
                let s = (x - center) / width;
                let e = (-s * s).exp();
                (a0 * e, -2.0 * s / width * a0 * e, -a1 * e)
            }
            Profile::Sech2 { a0, a1, width, center } => {
                let s = (x - center) / width;
                let sech2 = 1.0 / s.cosh().powi(2);
                let d = -2.0 * s.tanh() * sech2 / width;
                (a0 * sech2, a0 * d, -a1 * sech2)
            }
            Profile::Table { u0s, v0s } => (u0s.value(x), u0s.derivative(x), v0s.value(x)),
        }
    }

    /// `u_t(x, 0)` at an arbitrary point (zero outside the grid).
    pub fn eval_u1(&self, x: f64) -> f64 {
        if x < self.x_min() || x > self.x_max() {
            return 0.0;
        }
        match &self.profile {
            Profile::Zero => 0.0,
            Profile::Gaussian { a1, width, center, .. } => {
                let s = (x - center) / width;
                2.0 * s / width * a1 * (-s * s).exp()
            }
            Profile::Sech2 { a1, width, center, .. } => {
                let s = (x - center) / width;
                2.0 * s.tanh() / (s.cosh().powi(2) * width) * a1
            }
            // v0 is the cumulative integral of u1, so its spline derivative
            // recovers u1 between the tabulated nodes.
            Profile::Table { v0s, .. } => v0s.derivative(x),
        }
    }

    /// Schwartz-decay and zero-mass surrogates.
    pub fn validate(&self) -> Result<(), ScatteringError> {
        let edge = |v: &Vec<f64>| v.first().unwrap().abs().max(v.last().unwrap().abs());
        if edge(&self.u0) > 1e-14 {
            return Err(ScatteringError::PoorDecay("u0", edge(&self.u0)));
        }
        if edge(&self.u1) > 1e-14 {
            return Err(ScatteringError::PoorDecay("u1", edge(&self.u1)));
        }
        let mass = *self.v0.last().unwrap();
        if mass.abs() > 1e-10 {
            return Err(ScatteringError::MassResidual(mass));
        }
        Ok(())
    }
}

/// Refuse evaluation too close to the points where two eigenvalue branches
/// collide (the sixth roots of unity) or to the essential singularity k = 0.
pub fn ensure_regular(k: C) -> Result<(), ScatteringError> {
    if k.norm() < 1e-6 {
        return Err(ScatteringError::DegeneratePoint(k));
    }
    for p in branch_collision_points() {
        if (k - p).norm() < 1e-6 {
            return Err(ScatteringError::DegeneratePoint(k));
        }
    }
    Ok(())
}

/// Jost-type solution and scattering matrices at one spectral point.
///
/// `x_jost` is X at the left grid end; `s` and `s_a` are the two scattering
/// matrices; `off_circle` flags evaluations away from |k| = 1, where the
/// conjugating exponentials grow and the computation may lose accuracy.
#[derive(Debug, Clone)]
pub struct ScatteringState {
    pub k: C,
    pub x_jost: Mat3,
    pub s: Mat3,
    pub s_a: Mat3,
    pub off_circle: bool,
}

impl ScatteringState {
    pub fn r1(&self) -> C {
        self.s[(0, 1)] / self.s[(0, 0)]
    }

    pub fn r2(&self) -> C {
        self.s_a[(0, 1)] / self.s_a[(0, 0)]
    }
}

/// The real ratio `(w^2 - k^2) / (1 - w^2 k^2)` linking r2 to conj(r1) on
/// the unit circle.
pub fn tilde_r(k: C) -> Result<C, ScatteringError> {
    let w2 = OMEGA2;
    let den = C::new(1.0, 0.0) - w2 * k * k;
    if den.norm() < 1e-9 {
        return Err(ScatteringError::TildeRPole(k));
    }
    Ok((w2 - k * k) / den)
}

/// `tilde_r` restricted to the unit circle, where it is real:
/// `sin(theta - 2pi/3) / sin(theta + 2pi/3)`.
pub fn tilde_r_arc(theta: f64) -> f64 {
    let c = 2.0 * std::f64::consts::FRAC_PI_3;
    (theta - c).sin() / (theta + c).sin()
}

/// Where the spectral samples came from.
#[derive(Debug, Clone)]
pub enum SpectralSource {
    Computed,
    Synthetic(SyntheticProfile),
}

/// Reflection coefficients sampled on the arc `theta in [pi/2, 2pi/3)` of
/// the unit circle, the only spectral input the asymptotic formulas need.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub theta_grid: Vec<f64>,
    pub r1: Vec<C>,
    pub r2: Vec<C>,
    pub source: SpectralSource,
    r1_spline: CubicSplineC,
    r2_spline: CubicSplineC,
    /// Spline of g = ln(1 + r1 r2), the positive real log-density entering
    /// every phase integral.
    g_spline: CubicSpline,
}

/// Default number of arc samples.
pub const DEFAULT_ARC_POINTS: usize = 96;

/// Upper end of the sampling arc: slightly inside 2pi/3 so the spline never
/// touches the zero of tilde_r at w.
pub const ARC_THETA_MAX: f64 = 2.0 * std::f64::consts::FRAC_PI_3 - 0.01;

pub fn arc_grid(n: usize) -> Vec<f64> {
    let a = std::f64::consts::FRAC_PI_2;
    (0..n).map(|i| a + (ARC_THETA_MAX - a) * i as f64 / (n - 1) as f64).collect()
}

impl SpectralData {
    /// Solve the Jost systems at each grid point of the arc.
    pub fn compute(data: &InitialData, n_points: usize) -> Result<Self, ScatteringError> {
        let grid = arc_grid(n_points.max(8));
        let states: Result<Vec<ScatteringState>, ScatteringError> = {
            use rayon::prelude::*;
            grid.par_iter().map(|&th| solve_jost(data, C::from_polar(1.0, th))).collect()
        };
        let states = states?;
        let r1: Vec<C> = states.iter().map(|s| s.r1()).collect();
        let r2: Vec<C> = states.iter().map(|s| s.r2()).collect();
        Self::assemble(grid, r1, r2, SpectralSource::Computed)
    }

    /// Rebuild from externally supplied samples (e.g. a reloaded CSV).
    /// The pointwise invariants are re-checked; evaluation between nodes
    /// uses the spline path, as for computed data.
    pub fn from_samples(
        theta_grid: Vec<f64>,
        r1: Vec<C>,
        r2: Vec<C>,
    ) -> Result<Self, ScatteringError> {
        if theta_grid.len() < 8 {
            return Err(ScatteringError::GridTooSmall(8, theta_grid.len()));
        }
        assert!(
            theta_grid.len() == r1.len() && theta_grid.len() == r2.len(),
            "ragged spectral table"
        );
        Self::assemble(theta_grid, r1, r2, SpectralSource::Computed)
    }

    /// Closed-form synthetic samples from a profile satisfying the same
    /// pointwise constraints as computed data.
    pub fn synthetic(profile: SyntheticProfile, n_points: usize) -> Result<Self, ScatteringError> {
        let grid = arc_grid(n_points.max(8));
        let r1: Vec<C> = grid.iter().map(|&th| profile.r1(th)).collect();
        let r2: Vec<C> = grid
            .iter()
            .zip(&r1)
            .map(|(&th, &a)| C::new(tilde_r_arc(th), 0.0) * a.conj())
            .collect();
        Self::assemble(grid, r1, r2, SpectralSource::Synthetic(profile))
    }

    fn assemble(
        theta_grid: Vec<f64>,
        r1: Vec<C>,
        r2: Vec<C>,
        source: SpectralSource,
    ) -> Result<Self, ScatteringError> {
        let mut g = Vec::with_capacity(theta_grid.len());
        for i in 0..theta_grid.len() {
            let prod = C::new(1.0, 0.0) + r1[i] * r2[i];
            if prod.re <= 1.0 - 1e-9 || prod.im.abs() > 1e-6 * prod.re.max(1.0) {
                return Err(ScatteringError::BadProfile(theta_grid[i]));
            }
            g.push(prod.re.max(1.0).ln());
        }
        let r1_spline = CubicSplineC::new(&theta_grid, &r1);
        let r2_spline = CubicSplineC::new(&theta_grid, &r2);
        let g_spline = CubicSpline::new(&theta_grid, &g);
        Ok(SpectralData { theta_grid, r1, r2, source, r1_spline, r2_spline, g_spline })
    }

    pub fn theta_min(&self) -> f64 {
        self.theta_grid[0]
    }

    pub fn theta_max(&self) -> f64 {
        *self.theta_grid.last().unwrap()
    }

    fn check_range(&self, theta: f64) -> Result<(), ScatteringError> {
        if theta < self.theta_min() - 1e-12 || theta > self.theta_max() + 1e-12 {
            return Err(ScatteringError::ThetaOutOfRange(
                theta,
                self.theta_min(),
                self.theta_max(),
            ));
        }
        Ok(())
    }

    pub fn r1_at(&self, theta: f64) -> Result<C, ScatteringError> {
        self.check_range(theta)?;
        Ok(match &self.source {
            SpectralSource::Synthetic(p) => p.r1(theta),
            SpectralSource::Computed => self.r1_spline.value(theta),
        })
    }

    pub fn r2_at(&self, theta: f64) -> Result<C, ScatteringError> {
        self.check_range(theta)?;
        Ok(match &self.source {
            SpectralSource::Synthetic(p) => {
                C::new(tilde_r_arc(theta), 0.0) * p.r1(theta).conj()
            }
            SpectralSource::Computed => self.r2_spline.value(theta),
        })
    }

    /// g(theta) = ln(1 + r1(theta) r2(theta)) >= 0, real on the arc.
    pub fn g_at(&self, theta: f64) -> Result<f64, ScatteringError> {
        self.check_range(theta)?;
        Ok(match &self.source {
            SpectralSource::Synthetic(p) => p.g(theta),
            SpectralSource::Computed => self.g_spline.value(theta),
        })
    }

    /// d g / d theta, analytic for synthetic profiles, spline-based for
    /// computed samples.
    pub fn dg_at(&self, theta: f64) -> Result<f64, ScatteringError> {
        self.check_range(theta)?;
        Ok(match &self.source {
            SpectralSource::Synthetic(p) => p.dg(theta),
            SpectralSource::Computed => self.g_spline.derivative(theta),
        })
    }
}

/// Damped reflection coefficient `r_j / (1 + r1 r2)` used by the
/// second-stage contour deformation.
pub fn rhat(j: u8, spec: &SpectralData, theta: f64) -> Result<C, ScatteringError> {
    assert!(j == 1 || j == 2, "index must be 1 or 2");
    let r1 = spec.r1_at(theta)?;
    let r2 = spec.r2_at(theta)?;
    let den = C::new(1.0, 0.0) + r1 * r2;
    Ok(if j == 1 { r1 / den } else { r2 / den })
}

/// Numerical surrogates for the analytic assumptions on the initial data.
#[derive(Debug, Clone)]
pub struct AssumptionReport {
    /// |int u1| computed as |v0| at the right grid end.
    pub mass_residual: f64,
    /// min |s11(k)| over a circle sample avoiding the degenerate points.
    pub min_s11: f64,
    /// Richardson estimates of lim (k - k*) s11 at k* = +1, -1: both must
    /// stay away from zero.
    pub s11_pole_strength: [f64; 2],
    /// Along-circle Richardson limits of r1 and r2 at +1 and -1
    /// (expected: r1 -> 1, r2 -> -1).
    pub r1_limit: [C; 2],
    pub r2_limit: [C; 2],
    /// max |r1| on a sample of the segment (0, i); only a surrogate, since
    /// off-circle evaluations lose accuracy.
    pub r1_segment_max: f64,
    /// max over the arc grid of |r1(1/(wk)) + r2(wk) + r1(w^2 k) r2(1/k)|.
    pub circle_relation_max: f64,
    /// max over the arc grid of |r2(k) - tilde_r(k) conj(r1(k))|.
    pub conjugation_max: f64,
    pub mass_ok: bool,
    pub no_solitons_ok: bool,
    pub generic_endpoints_ok: bool,
}

/// Evaluate (r1, r2) at an arbitrary point of the unit circle by direct
/// Jost solves.
fn r_pair(data: &InitialData, k: C) -> Result<(C, C), ScatteringError> {
    let st = solve_jost(data, k)?;
    Ok((st.r1(), st.r2()))
}

/// Check the assumptions' numerical surrogates on `n_arc` arc points.
pub fn verify_assumptions(
    data: &InitialData,
    n_arc: usize,
) -> Result<AssumptionReport, ScatteringError> {
    use rayon::prelude::*;
    data.validate()?;
    let mass_residual = data.v0.last().unwrap().abs();

    // Soliton-freeness surrogate: |s11| on a circle sample away from the
    // six degenerate points.
    let circle_thetas: Vec<f64> = (0..48)
        .map(|i| 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / 48.0)
        .filter(|&th| {
            let k = C::from_polar(1.0, th);
            branch_collision_points().iter().all(|&p| (k - p).norm() > 0.08)
        })
        .collect();
    let s11s: Result<Vec<f64>, ScatteringError> = circle_thetas
        .par_iter()
        .map(|&th| Ok(solve_jost(data, C::from_polar(1.0, th))?.s[(0, 0)].norm()))
        .collect();
    let min_s11 = s11s?.into_iter().fold(f64::INFINITY, f64::min);

    // Generic behaviour at k = +-1: (k - k*) s11 along the circle, with a
    // two-point Richardson extrapolation of the limit.
    let mut s11_pole_strength = [0.0; 2];
    let mut r1_limit = [C::new(0.0, 0.0); 2];
    let mut r2_limit = [C::new(0.0, 0.0); 2];
    for (slot, base) in [(0usize, 0.0f64), (1, std::f64::consts::PI)] {
        let eps = 0.02;
        let k_star = C::from_polar(1.0, base);
        let f = |e: f64| -> Result<(C, C, C), ScatteringError> {
            let k = C::from_polar(1.0, base + e);
            let st = solve_jost(data, k)?;
            Ok(((k - k_star) * st.s[(0, 0)], st.r1(), st.r2()))
        };
        let (p_full, r1_full, r2_full) = f(eps)?;
        let (p_half, r1_half, r2_half) = f(eps / 2.0)?;
        let two = C::new(2.0, 0.0);
        s11_pole_strength[slot] = (two * p_half - p_full).norm();
        r1_limit[slot] = two * r1_half - r1_full;
        r2_limit[slot] = two * r2_half - r2_full;
    }

    // Global-solution surrogate: r1 on the open segment (0, i).
    let seg: Result<Vec<f64>, ScatteringError> = (1..=7)
        .map(|i| C::new(0.0, 0.3 + 0.65 * (i as f64 - 1.0) / 6.0))
        .collect::<Vec<C>>()
        .par_iter()
        .map(|&k| Ok(r_pair(data, k)?.0.norm()))
        .collect();
    let r1_segment_max = seg?.into_iter().fold(0.0, f64::max);

    // Nonlinear circle relation and the conjugation relation on the arc.
    let arc = arc_grid(n_arc.max(16));
    let rel: Result<Vec<(f64, f64)>, ScatteringError> = arc
        .par_iter()
        .map(|&th| {
            let k = C::from_polar(1.0, th);
            let (r1_k, r2_k) = r_pair(data, k)?;
            let (r1_a, _) = r_pair(data, (OMEGA * k).inv())?;
            let (_, r2_b) = r_pair(data, OMEGA * k)?;
            let (r1_c, _) = r_pair(data, OMEGA2 * k)?;
            let (_, r2_d) = r_pair(data, k.inv())?;
            let circle = (r1_a + r2_b + r1_c * r2_d).norm();
            let conj = (r2_k - tilde_r(k)? * r1_k.conj()).norm();
            Ok((circle, conj))
        })
        .collect();
    let rel = rel?;
    let circle_relation_max = rel.iter().map(|p| p.0).fold(0.0, f64::max);
    let conjugation_max = rel.iter().map(|p| p.1).fold(0.0, f64::max);

    Ok(AssumptionReport {
        mass_residual,
        min_s11,
        s11_pole_strength,
        r1_limit,
        r2_limit,
        r1_segment_max,
        circle_relation_max,
        conjugation_max,
        mass_ok: mass_residual < 1e-10,
        no_solitons_ok: min_s11 > 1e-3,
        generic_endpoints_ok: s11_pole_strength.iter().all(|&p| p > 1e-6),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tilde_r_reference_values() {
        assert_abs_diff_eq!(tilde_r(C::new(1.0, 0.0)).unwrap().re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(tilde_r(C::new(0.0, 1.0)).unwrap().re, 1.0, epsilon = 1e-14);
        for i in 0..20 {
            let th = std::f64::consts::FRAC_PI_2
                + (2.0 * std::f64::consts::FRAC_PI_3 - std::f64::consts::FRAC_PI_2 - 1e-3)
                    * i as f64
                    / 19.0;
            let rational = tilde_r(C::from_polar(1.0, th)).unwrap();
            assert!(rational.im.abs() < 1e-13, "not real on the circle");
            assert!(rational.re > 0.0, "not positive on the arc");
            assert_abs_diff_eq!(rational.re, tilde_r_arc(th), epsilon = 1e-13);
        }
    }

    #[test]
    fn tilde_r_pole_detected() {
        let pole = C::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        assert!(matches!(tilde_r(pole), Err(ScatteringError::TildeRPole(_))));
    }

    #[test]
    fn gaussian_data_is_consistent() {
        let data = InitialData::gaussian(0.3, 0.2, 1.0, 0.0);
        data.validate().unwrap();
        let (u0, u0x, v0) = data.eval(0.7);
        assert_abs_diff_eq!(u0, 0.3 * (-0.49f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(u0x, -0.42 * (-0.49f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(v0, -0.2 * (-0.49f64).exp(), epsilon = 1e-15);
        // u1 sampled on the grid must be the derivative of -v0.
        let i = 2048;
        let h = data.xs[1] - data.xs[0];
        let dv = (data.v0[i + 1] - data.v0[i - 1]) / (2.0 * h);
        assert_abs_diff_eq!(data.u1[i], dv, epsilon = 1e-4);
    }

    #[test]
    fn table_data_reproduces_closed_form() {
        let n = 1201;
        let xs: Vec<f64> = (0..n).map(|i| -15.0 + 30.0 * i as f64 / (n - 1) as f64).collect();
        let u0: Vec<f64> = xs.iter().map(|&x| 0.25 * (-x * x).exp()).collect();
        let u1: Vec<f64> = xs.iter().map(|&x| 0.3 * x * (-x * x).exp()).collect();
        let data = InitialData::from_table(xs, u0, u1).unwrap();
        let (u0v, u0xv, v0v) = data.eval(0.4);
        // Tolerances track the O(h^4) spline value / O(h^3) derivative error.
        assert_abs_diff_eq!(u0v, 0.25 * (-0.16f64).exp(), epsilon = 1e-7);
        assert_abs_diff_eq!(u0xv, -0.2 * (-0.16f64).exp(), epsilon = 5e-6);
        // v0 = int u1 = -0.15 e^{-x^2}.
        assert_abs_diff_eq!(v0v, -0.15 * (-0.16f64).exp(), epsilon = 2e-7);
    }

    #[test]
    fn degenerate_points_are_refused() {
        assert!(ensure_regular(C::new(1.0, 0.0)).is_err());
        assert!(ensure_regular(OMEGA).is_err());
        assert!(ensure_regular(C::new(0.0, 0.0)).is_err());
        assert!(ensure_regular(C::new(0.3, 0.8)).is_ok());
    }

    #[test]
    fn rhat_algebra() {
        let profile = SyntheticProfile::default();
        let spec = SpectralData::synthetic(profile, 64).unwrap();
        let th = 1.8;
        let r1 = spec.r1_at(th).unwrap();
        let r2 = spec.r2_at(th).unwrap();
        let prod = C::new(1.0, 0.0) + r1 * r2;
        let h1 = rhat(1, &spec, th).unwrap();
        let h2 = rhat(2, &spec, th).unwrap();
        assert!(h1.norm() <= r1.norm());
        assert!(h2.norm() <= r2.norm());
        let lhs = h1 * h2 * prod;
        let rhs = r1 * r2 / prod;
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn out_of_range_theta_rejected() {
        let spec = SpectralData::synthetic(SyntheticProfile::default(), 32).unwrap();
        assert!(spec.r1_at(0.3).is_err());
        assert!(rhat(1, &spec, 2.2).is_err());
    }

    #[test]
    fn spectral_invariants_hold_for_synthetic_data() {
        let spec = SpectralData::synthetic(SyntheticProfile::default(), 80).unwrap();
        for i in 0..spec.theta_grid.len() {
            let prod = C::new(1.0, 0.0) + spec.r1[i] * spec.r2[i];
            assert!(prod.re >= 1.0 && prod.im.abs() < 1e-14);
            let tr = tilde_r_arc(spec.theta_grid[i]);
            let target = C::new(tr, 0.0) * spec.r1[i].conj();
            assert!((spec.r2[i] - target).norm() < 1e-14);
        }
    }
}
