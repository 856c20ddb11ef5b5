//! Filtered pseudo-spectral oracle for `u_tt = u_xx + (u²)_xx + u_xxxx`.
//!
//! The linearization has `û_tt = (ξ⁴ - ξ²) û`, which *grows* like
//! `e^{|ξ|√(ξ²-1) t}` for `|ξ| > 1`: the unfiltered initial-value problem is
//! ill-posed as a numerical computation.  This module therefore integrates a
//! **modified equation**: all Fourier modes with `|ξ| > ξ_max` (default 0.8)
//! are removed from the initial data and from the acceleration at every
//! evaluation.  The band-limited subspace is then exactly invariant, the
//! dynamics inside it are well-posed, and the integrator (Störmer–Verlet /
//! velocity-Verlet, spectral in space) is time-reversible and second-order
//! accurate in `dt`.
//!
//! The oracle's purpose is short-time, small-amplitude sanity checking of
//! the data pipeline — linear dispersion, reversibility, conservation — not
//! validation of the long-time asymptotics, whose leading order lies below
//! the Schwartz-tail contributions at any reachable `(x, t)`.

use crate::asymptotics::AsymptoticResult;
use crate::scattering::InitialData;
use crate::C;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;
use thiserror::Error;

/// Default spectral cutoff: the retained band `|ξ| ≤ 0.8` keeps a safety
/// margin below the ill-posed band `|ξ| > 1`.
pub const DEFAULT_XI_MAX: f64 = 0.8;
/// Default time step; resolves the fastest retained linear frequency
/// (`ω ≤ 1/2`) with phase error ≈ `ω³ dt²/24 ≈ 10⁻⁷` per unit time.
pub const DEFAULT_DT: f64 = 0.005;
/// Abort threshold for the blow-up detector.
pub const BLOWUP_LIMIT: f64 = 1e3;

#[derive(Debug, Error)]
pub enum PdeError {
    #[error("spectral cutoff xi_max = {0} exceeds 0.9; the band |ξ| > 1 is ill-posed and needs margin")]
    CutoffTooLarge(f64),
    #[error("dt = {dt} does not resolve the fastest retained frequency (need dt ≤ {limit:.3})")]
    UnresolvedDt { dt: f64, limit: f64 },
    #[error("solution blew up at t = {t:.4}: max |u| = {max_abs:.3e} > 1e3 ({} retained modes dumped)", spectrum.len())]
    Blowup {
        t: f64,
        max_abs: f64,
        /// One-sided retained amplitude spectrum `(ξ, |û|)` at abort time.
        spectrum: Vec<(f64, f64)>,
    },
}

/// State of the filtered evolution on a uniform periodic grid.
///
/// Invariants: `u` and `ut` have no Fourier content with `|ξ| > xi_max`
/// (enforced at construction and preserved exactly by every step), and the
/// mean of `ut` — the mass `∫ u_t dx` up to the factor `L` — is conserved
/// because the acceleration has an exact zero at `ξ = 0`.
#[derive(Debug, Clone)]
pub struct PdeState {
    /// Grid points `x_0 + j·dx`, `j = 0..n`; the period is `n·dx`.
    pub xs: Vec<f64>,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    pub xi_max: f64,
    pub t: f64,
}

impl PdeState {
    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn dx(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    /// Period of the domain.
    pub fn length(&self) -> f64 {
        self.dx() * self.n() as f64
    }

    /// `∫ u_t dx` over one period (exact for the trigonometric interpolant).
    pub fn mass_ut(&self) -> f64 {
        self.ut.iter().sum::<f64>() * self.dx()
    }

    pub fn max_abs_u(&self) -> f64 {
        self.u.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// A single band-limited standing mode `u = amp·cos(ξ₀ x)`, `u_t = 0`,
    /// with `ξ₀ = 2π·cycles/length` commensurate with the period.
    pub fn cosine_mode(amp: f64, cycles: usize, length: f64, n: usize, xi_max: f64) -> Self {
        let dx = length / n as f64;
        let xi0 = std::f64::consts::TAU * cycles as f64 / length;
        let xs: Vec<f64> = (0..n).map(|j| j as f64 * dx).collect();
        let u = xs.iter().map(|&x| amp * (xi0 * x).cos()).collect();
        PdeState { xs, u, ut: vec![0.0; n], xi_max, t: 0.0 }
    }

    /// Amplitude of the `cos(ξ₀ x)` component, `ξ₀ = 2π·cycles/length`
    /// (exact discrete orthogonality on the grid).
    pub fn mode_amplitude(&self, cycles: usize) -> f64 {
        let n = self.n() as f64;
        let x0 = self.xs[0];
        let xi0 = std::f64::consts::TAU * cycles as f64 / self.length();
        2.0 / n
            * self
                .u
                .iter()
                .zip(&self.xs)
                .map(|(&u, &x)| u * (xi0 * (x - x0)).cos())
                .sum::<f64>()
    }

    /// Spectrally exact point evaluation of the band-limited `u` at
    /// arbitrary positions (trigonometric interpolation over the retained
    /// band).  Returns a closure so the transform is done once per state.
    pub fn sampler(&self) -> impl Fn(f64) -> f64 + '_ {
        let band = Band::new(self.n(), self.length(), self.xi_max);
        let spec = band.fft(&self.u);
        let n = self.n();
        let x0 = self.xs[0];
        let length = self.length();
        move |x: f64| {
            let mut acc = spec[0].re / n as f64;
            for j in 1..n.div_ceil(2) {
                let xi = std::f64::consts::TAU * j as f64 / length;
                if xi > self.xi_max {
                    break;
                }
                let ph = C::from_polar(1.0, xi * (x - x0));
                // Hermitian pairing of bins j and n-j for real data.
                acc += 2.0 * (spec[j] * ph).re / n as f64;
            }
            acc
        }
    }
}

/// FFT plans plus the retained-band bookkeeping for one grid size.
struct Band {
    n: usize,
    length: f64,
    xi_max: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Band {
    fn new(n: usize, length: f64, xi_max: f64) -> Self {
        let mut planner = FftPlanner::new();
        Band {
            n,
            length,
            xi_max,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    /// Frequency of DFT bin `j` (negative in the upper half).
    fn xi(&self, j: usize) -> f64 {
        let j = j as i64;
        let n = self.n as i64;
        let m = if 2 * j > n { j - n } else { j };
        std::f64::consts::TAU * m as f64 / self.length
    }

    fn fft(&self, real: &[f64]) -> Vec<C> {
        let mut buf: Vec<C> = real.iter().map(|&v| C::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Inverse transform (with the 1/n normalization), real part.
    fn ifft_re(&self, mut spec: Vec<C>) -> Vec<f64> {
        self.inv.process(&mut spec);
        spec.iter().map(|v| v.re / self.n as f64).collect()
    }

    /// Remove all content with `|ξ| > ξ_max`.
    fn project(&self, u: &mut Vec<f64>) {
        let mut spec = self.fft(u);
        for (j, slot) in spec.iter_mut().enumerate() {
            if self.xi(j).abs() > self.xi_max {
                *slot = C::new(0.0, 0.0);
            }
        }
        *u = self.ifft_re(spec);
    }

    /// Filtered acceleration `P[(∂ₓ² + ∂ₓ⁴) u + ∂ₓ²(u²)]`: the symbol
    /// `(ξ⁴ - ξ²)` on `û` minus `ξ²` on the transform of `u²`.  The grid is
    /// fine enough that the quadratic product is alias-free (enforced by
    /// the `ξ_Nyq ≥ 2 ξ_max` check at evolve time).
    fn force(&self, u: &[f64]) -> Vec<f64> {
        let uhat = self.fft(u);
        let sq: Vec<f64> = u.iter().map(|&v| v * v).collect();
        let sqhat = self.fft(&sq);
        let mut acc = vec![C::new(0.0, 0.0); self.n];
        for j in 0..self.n {
            let xi = self.xi(j);
            if xi.abs() > self.xi_max {
                continue;
            }
            let xi2 = xi * xi;
            acc[j] = uhat[j] * (xi2 * xi2 - xi2) - sqhat[j] * xi2;
        }
        self.ifft_re(acc)
    }

    /// Largest `|û|` (amplitude-normalized) outside the retained band.
    fn masked_residual(&self, u: &[f64]) -> f64 {
        self.fft(u)
            .iter()
            .enumerate()
            .filter(|(j, _)| self.xi(*j).abs() > self.xi_max)
            .map(|(_, v)| v.norm() / self.n as f64)
            .fold(0.0_f64, f64::max)
    }

    /// One-sided amplitude spectrum of the retained band, for diagnostics.
    fn retained_spectrum(&self, u: &[f64]) -> Vec<(f64, f64)> {
        let spec = self.fft(u);
        (0..=self.n / 2)
            .filter(|&j| self.xi(j).abs() <= self.xi_max)
            .map(|j| (self.xi(j), spec[j].norm() / self.n as f64))
            .collect()
    }

    /// Fastest retained linear frequency `max ω(ξ) = max ξ√(1-ξ²)`.
    fn omega_max(&self) -> f64 {
        let xi = self.xi_max.min(std::f64::consts::FRAC_1_SQRT_2);
        xi * (1.0 - xi * xi).max(0.0).sqrt()
    }
}

/// Advance (or rewind) the state to `t_target` with steps of magnitude
/// `dt`.  The step count divides the interval exactly, so a forward run and
/// the reverse run over the same interval traverse mirror-image step
/// sequences and the symmetric integrator undoes itself to roundoff.
pub fn evolve_state(state: &mut PdeState, t_target: f64, dt: f64) -> Result<(), PdeError> {
    if state.xi_max > 0.9 {
        return Err(PdeError::CutoffTooLarge(state.xi_max));
    }
    let band = Band::new(state.n(), state.length(), state.xi_max);
    // Resolution guard: the fastest retained mode, and the alias-free grid.
    let limit = 1.0 / band.omega_max().max(1e-9);
    if dt > limit {
        return Err(PdeError::UnresolvedDt { dt, limit });
    }
    let nyquist = std::f64::consts::PI / state.dx();
    assert!(
        nyquist >= 2.0 * state.xi_max,
        "grid too coarse for alias-free quadratic nonlinearity"
    );
    let span = t_target - state.t;
    if span == 0.0 {
        return Ok(());
    }
    let steps = (span.abs() / dt).ceil() as usize;
    let h = span / steps as f64;
    let check_blowup = |state: &PdeState, band: &Band| -> Result<(), PdeError> {
        let max_abs = state.max_abs_u();
        if max_abs > BLOWUP_LIMIT {
            return Err(PdeError::Blowup {
                t: state.t,
                max_abs,
                spectrum: band.retained_spectrum(&state.u),
            });
        }
        Ok(())
    };
    check_blowup(state, &band)?;
    let mut a = band.force(&state.u);
    for step in 1..=steps {
        // Velocity Verlet (kick–drift–kick) on u_tt = F(u).
        for j in 0..state.n() {
            state.u[j] += h * state.ut[j] + 0.5 * h * h * a[j];
        }
        let a_new = band.force(&state.u);
        for j in 0..state.n() {
            state.ut[j] += 0.5 * h * (a[j] + a_new[j]);
        }
        a = a_new;
        state.t += h;
        if step == steps {
            state.t = t_target; // kill accumulated roundoff in t
        }
        check_blowup(state, &band)?;
    }
    Ok(())
}

/// Build the periodic computational domain for decaying initial data: the
/// period is ≥ 60× the width of the data's numerical support (wrap-around
/// suppression for the short integration windows the oracle supports), the
/// grid spacing keeps the quadratic nonlinearity alias-free with a wide
/// margin, and the domain is centered on the support.
fn domain_for(data: &InitialData) -> (f64, f64, usize) {
    let scale = data
        .u0
        .iter()
        .chain(&data.u1)
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    if scale > 0.0 {
        for (i, &x) in data.xs.iter().enumerate() {
            if data.u0[i].abs() + data.u1[i].abs() > 1e-13 * scale {
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
    }
    let (center, width) = if lo.is_finite() {
        (0.5 * (lo + hi), (hi - lo).max(4.0))
    } else {
        (0.0, 4.0)
    };
    let length = 60.0 * width;
    let n = ((length / 0.35).ceil() as usize).next_power_of_two();
    (center - 0.5 * length, length, n)
}

/// Evolve decaying initial data under the filtered equation to `t_end`
/// (either sign).  At `t_end = 0` the returned state is the band-limited
/// projection of the data with no stepping applied.
pub fn evolve(
    data: &InitialData,
    t_end: f64,
    dt: f64,
    xi_max: f64,
) -> Result<PdeState, PdeError> {
    if xi_max > 0.9 {
        return Err(PdeError::CutoffTooLarge(xi_max));
    }
    let (x_lo, length, n) = domain_for(data);
    let dx = length / n as f64;
    let xs: Vec<f64> = (0..n).map(|j| x_lo + j as f64 * dx).collect();
    let mut u: Vec<f64> = xs.iter().map(|&x| data.eval(x).0).collect();
    let mut ut: Vec<f64> = xs.iter().map(|&x| data.eval_u1(x)).collect();
    let band = Band::new(n, length, xi_max);
    band.project(&mut u);
    band.project(&mut ut);
    let mut state = PdeState { xs, u, ut, xi_max, t: 0.0 };
    evolve_state(&mut state, t_end, dt)?;
    Ok(state)
}

/// Largest Fourier amplitude of the state outside the retained band — zero
/// up to transform roundoff whenever the filter invariant holds.
pub fn filter_residual(state: &PdeState) -> f64 {
    let band = Band::new(state.n(), state.length(), state.xi_max);
    band.masked_residual(&state.u).max(band.masked_residual(&state.ut))
}

/// One row of the oracle-vs-asymptotics comparison.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonRow {
    pub x: f64,
    pub t: f64,
    pub u_pde: f64,
    pub u_leading: f64,
    pub diff: f64,
    /// Set when `|u_pde|` dwarfs the predicted leading order plus its error
    /// scale — the point is outside the asymptotic regime and the
    /// difference carries no information about the expansion.
    pub outside_regime: bool,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    /// Rows whose `t` does not match the state or whose `x` falls outside
    /// the computational domain.
    pub skipped: usize,
    pub caveat: &'static str,
}

pub const COMPARISON_CAVEAT: &str = "the sector's leading order is below the Schwartz-tail \
     contribution at numerically reachable (x, t); differences measure consistency of \
     smallness, not the asymptotic constant";

/// Pointwise difference table between the oracle solution and the
/// leading-order prediction, with the explicit regime caveat.
pub fn compare_asymptotic(state: &PdeState, results: &[AsymptoticResult]) -> ComparisonReport {
    let sample = state.sampler();
    let x_hi = state.xs[0] + state.length();
    let mut rows = Vec::new();
    let mut skipped = 0;
    for r in results {
        if (r.t - state.t).abs() > 1e-9 || r.x < state.xs[0] || r.x >= x_hi {
            skipped += 1;
            continue;
        }
        let u_pde = sample(r.x);
        let scale = r.error_scale.x_n_term + r.error_scale.log_term;
        let outside = u_pde.abs() > 10.0 * (r.u_leading.abs() + scale) && u_pde.abs() > 1e-12;
        rows.push(ComparisonRow {
            x: r.x,
            t: r.t,
            u_pde,
            u_leading: r.u_leading,
            diff: u_pde - r.u_leading,
            outside_regime: outside,
        });
    }
    ComparisonReport { rows, skipped, caveat: COMPARISON_CAVEAT }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::ErrorScale;

    /// ω(ξ) = ξ√(1-ξ²) for the retained band.
    fn dispersion(xi: f64) -> f64 {
        xi * (1.0 - xi * xi).sqrt()
    }

    fn dispersion_test_state(amp: f64) -> (PdeState, usize, f64) {
        // ξ₀ = 2π·8/(32π) = 0.5 exactly.
        let length = 32.0 * std::f64::consts::PI;
        let cycles = 8;
        let xi0 = std::f64::consts::TAU * cycles as f64 / length;
        assert!((xi0 - 0.5).abs() < 1e-15);
        (
            PdeState::cosine_mode(amp, cycles, length, 512, DEFAULT_XI_MAX),
            cycles,
            xi0,
        )
    }

    #[test]
    fn zero_data_stays_zero() {
        let state = evolve(&InitialData::zero(), 1.0, DEFAULT_DT, DEFAULT_XI_MAX).unwrap();
        assert_eq!(state.max_abs_u(), 0.0);
        assert!(state.ut.iter().all(|&v| v == 0.0));
        assert_eq!(state.t, 1.0);
    }

    #[test]
    fn standing_mode_frequency_matches_the_dispersion_relation() {
        let (mut state, cycles, xi0) = dispersion_test_state(1e-6);
        let omega = dispersion(xi0);
        let a0 = state.mode_amplitude(cycles);
        let mut t_prev = 0.0;
        for t in [0.25, 0.5, 1.0] {
            evolve_state(&mut state, t, DEFAULT_DT).unwrap();
            t_prev += t - t_prev;
            let ratio = state.mode_amplitude(cycles) / a0;
            let omega_est = ratio.acos() / t;
            let rel = (omega_est - omega).abs() / omega;
            assert!(
                rel < 1e-6,
                "t = {t}: ω_est = {omega_est:.9} vs ω = {omega:.9} (rel {rel:.2e})"
            );
        }
    }

    #[test]
    fn round_trip_returns_the_initial_state() {
        let data = InitialData::gaussian(0.3, 0.1, 2.0, 0.0);
        let start = evolve(&data, 0.0, DEFAULT_DT, DEFAULT_XI_MAX).unwrap();
        let mut state = start.clone();
        evolve_state(&mut state, 1.0, DEFAULT_DT).unwrap();
        assert!((state.t - 1.0).abs() < 1e-15);
        evolve_state(&mut state, 0.0, DEFAULT_DT).unwrap();
        let err = state
            .u
            .iter()
            .zip(&start.u)
            .chain(state.ut.iter().zip(&start.ut))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(err < 1e-8, "round-trip error {err:.3e}");
    }

    #[test]
    fn time_zero_returns_band_limited_data_unchanged() {
        // A band-limited state passes through the projection untouched, so
        // t_end = 0 must reproduce it to transform roundoff.
        let (state, cycles, _) = dispersion_test_state(0.01);
        let mut copy = state.clone();
        evolve_state(&mut copy, 0.0, DEFAULT_DT).unwrap();
        let err = copy
            .u
            .iter()
            .zip(&state.u)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(err == 0.0, "t = 0 should not step at all (err {err:.3e})");
        assert!(copy.mode_amplitude(cycles) > 0.009);
    }

    #[test]
    fn filter_invariant_holds_after_every_step_count() {
        let data = InitialData::gaussian(0.4, 0.2, 2.0, 0.0);
        for t_end in [DEFAULT_DT, 3.0 * DEFAULT_DT, 0.5] {
            let state = evolve(&data, t_end, DEFAULT_DT, DEFAULT_XI_MAX).unwrap();
            let res = filter_residual(&state);
            assert!(res < 1e-13, "t = {t_end}: masked-band residual {res:.3e}");
        }
    }

    #[test]
    fn mass_of_ut_is_conserved() {
        let data = InitialData::gaussian(0.3, 0.15, 2.0, 0.0);
        let start = evolve(&data, 0.0, DEFAULT_DT, DEFAULT_XI_MAX).unwrap();
        let end = evolve(&data, 2.0, DEFAULT_DT, DEFAULT_XI_MAX).unwrap();
        let drift = (end.mass_ut() - start.mass_ut()).abs() / 2.0;
        assert!(drift < 1e-10, "mass drift {drift:.3e} per unit time");
    }

    #[test]
    fn time_stepping_is_second_order() {
        let omega = dispersion(0.5);
        let exact = (omega * 1.0).cos();
        let phase_err = |dt: f64| {
            let (mut state, cycles, _) = dispersion_test_state(1e-6);
            let a0 = state.mode_amplitude(cycles);
            evolve_state(&mut state, 1.0, dt).unwrap();
            (state.mode_amplitude(cycles) / a0 - exact).abs()
        };
        let e1 = phase_err(0.04);
        let e2 = phase_err(0.02);
        let order = (e1 / e2).log2();
        assert!(
            (order - 2.0).abs() < 0.2,
            "order {order:.3} (errors {e1:.3e}, {e2:.3e})"
        );
    }

    #[test]
    fn halving_dx_leaves_band_limited_solutions_unchanged() {
        // Nonlinearly interacting band-limited modes on two grid sizes:
        // both represent the retained band exactly, so the solutions agree
        // to roundoff at shared points.
        let length = 32.0 * std::f64::consts::PI;
        let run = |n: usize| {
            let mut state = PdeState::cosine_mode(0.05, 5, length, n, DEFAULT_XI_MAX);
            for (j, slot) in state.u.iter_mut().enumerate() {
                let x = length * j as f64 / n as f64;
                *slot += 0.04 * (std::f64::consts::TAU * 7.0 * x / length).cos();
            }
            evolve_state(&mut state, 1.0, DEFAULT_DT).unwrap();
            state
        };
        let coarse = run(512);
        let fine = run(1024);
        let err = (0..512)
            .map(|j| (coarse.u[j] - fine.u[2 * j]).abs())
            .fold(0.0_f64, f64::max);
        assert!(err < 1e-10, "grid refinement changed the solution by {err:.3e}");
    }

    #[test]
    fn blowup_is_detected_with_a_spectrum_dump() {
        let mut state = PdeState::cosine_mode(2500.0, 8, 32.0 * std::f64::consts::PI, 512, 0.8);
        let err = evolve_state(&mut state, 1.0, DEFAULT_DT).unwrap_err();
        match err {
            PdeError::Blowup { max_abs, spectrum, .. } => {
                assert!(max_abs > BLOWUP_LIMIT);
                assert!(!spectrum.is_empty());
                assert!(spectrum.iter().any(|&(_, a)| a > 1.0));
            }
            other => panic!("expected blow-up, got {other}"),
        }
    }

    #[test]
    fn guards_reject_bad_cutoff_and_coarse_dt() {
        let data = InitialData::gaussian(0.1, 0.0, 2.0, 0.0);
        assert!(matches!(
            evolve(&data, 1.0, DEFAULT_DT, 0.95),
            Err(PdeError::CutoffTooLarge(_))
        ));
        assert!(matches!(
            evolve(&data, 1.0, 5.0, DEFAULT_XI_MAX),
            Err(PdeError::UnresolvedDt { .. })
        ));
    }

    #[test]
    fn comparison_report_flags_only_out_of_regime_rows() {
        let (state, _, _) = dispersion_test_state(0.5);
        let mk = |x: f64, u_leading: f64| AsymptoticResult {
            x,
            tau: 0.0,
            t: 0.0,
            amplitude: 0.0,
            alpha_wrapped: 0.0,
            alpha_unwrapped: 0.0,
            u_leading,
            error_scale: ErrorScale { x_n_term: 1e-4, log_term: 0.0 },
        };
        // u_pde ≈ 0.5 at a crest vs prediction ~0: flagged.  A row whose
        // prediction matches the oracle's size: not flagged.  A row at
        // mismatched t: skipped.
        let crest = state.xs[0]; // cos(0) = 1
        let rows = [mk(crest, 0.0), mk(crest, 0.49), {
            let mut r = mk(crest, 0.0);
            r.t = 0.5;
            r
        }];
        let report = compare_asymptotic(&state, &rows);
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.skipped, 1);
        assert!(report.rows[0].outside_regime);
        assert!(!report.rows[1].outside_regime);
        assert!((report.rows[0].u_pde - 0.5).abs() < 1e-12);
        assert!(!report.caveat.is_empty());
    }

    #[test]
    fn small_gaussian_stays_small_where_the_asymptotic_row_is_small() {
        // Consistency-of-smallness: at t = 1 and x ∈ [20, 40] both the
        // oracle solution of a small Gaussian and the leading-order values
        // are below 1e-3; nothing is flagged.
        let data = InitialData::gaussian(1e-4, 5e-5, 2.0, 0.0);
        let state = evolve(&data, 1.0, DEFAULT_DT, DEFAULT_XI_MAX).unwrap();
        let sample = state.sampler();
        for j in 0..=20 {
            let x = 20.0 + j as f64;
            assert!(sample(x).abs() < 1e-3, "x = {x}: |u_pde| = {:.3e}", sample(x).abs());
        }
    }
}
