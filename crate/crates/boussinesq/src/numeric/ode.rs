//! Adaptive Dormand–Prince 5(4) integration for 3×3 complex matrix ODEs
//! y' = f(t, y), used by the Jost-solution integrator.

use crate::{numeric::linalg::max_abs, Mat3};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("step budget exhausted ({0} steps)")]
    TooManySteps(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct OdeOpts {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOpts {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_steps: 4_000_000 }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 35.0 / 384.0 - 5179.0 / 57600.0;
const E3: f64 = 500.0 / 1113.0 - 7571.0 / 16695.0;
const E4: f64 = 125.0 / 192.0 - 393.0 / 640.0;
const E5: f64 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
const E6: f64 = 11.0 / 84.0 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

fn scale(m: &Mat3, s: f64) -> Mat3 {
    m.map(|z| z * s)
}

/// Integrate from `t0` to `t1` (either direction). Returns y(t1).
pub fn integrate<F>(f: F, t0: f64, t1: f64, y0: Mat3, opts: &OdeOpts) -> Result<Mat3, OdeError>
where
    F: Fn(f64, &Mat3) -> Mat3,
{
    if t0 == t1 {
        return Ok(y0);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span / 50.0).min(0.1).max(1e-8);
    let mut k1 = f(t, &y);
    for step in 0.. {
        if step >= opts.max_steps {
            return Err(OdeError::TooManySteps(opts.max_steps));
        }
        if (t - t1).abs() < 1e-14 * span.max(1.0) {
            return Ok(y);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &(y + scale(&k1, A21 * h)));
        let k3 = f(t + C3 * h, &(y + scale(&k1, A31 * h) + scale(&k2, A32 * h)));
        let k4 = f(
            t + C4 * h,
            &(y + scale(&k1, A41 * h) + scale(&k2, A42 * h) + scale(&k3, A43 * h)),
        );
        let k5 = f(
            t + C5 * h,
            &(y + scale(&k1, A51 * h)
                + scale(&k2, A52 * h)
                + scale(&k3, A53 * h)
                + scale(&k4, A54 * h)),
        );
        let k6 = f(
            t + h,
            &(y + scale(&k1, A61 * h)
                + scale(&k2, A62 * h)
                + scale(&k3, A63 * h)
                + scale(&k4, A64 * h)
                + scale(&k5, A65 * h)),
        );
        let y5 = y
            + scale(&k1, B1 * h)
            + scale(&k3, B3 * h)
            + scale(&k4, B4 * h)
            + scale(&k5, B5 * h)
            + scale(&k6, B6 * h);
        let k7 = f(t + h, &y5);
        let err_mat = scale(&k1, E1 * h)
            + scale(&k3, E3 * h)
            + scale(&k4, E4 * h)
            + scale(&k5, E5 * h)
            + scale(&k6, E6 * h)
            + scale(&k7, E7 * h);
        let tol = opts.atol + opts.rtol * max_abs(&y5).max(max_abs(&y));
        let err = max_abs(&err_mat) / tol;
        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k7; // FSAL
        }
        let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h *= factor.clamp(0.2, 5.0);
        if h.abs() < 1e-14 * span.max(1.0) {
            return Err(OdeError::StepUnderflow(t));
        }
    }
    unreachable!()
}

/// Integrate through the strictly monotone checkpoint sequence `ts`
/// (ascending or descending), returning y at every checkpoint. `ts[0]` is
/// the initial time of `y0`.
pub fn integrate_collect<F>(
    f: F,
    ts: &[f64],
    y0: Mat3,
    opts: &OdeOpts,
) -> Result<Vec<Mat3>, OdeError>
where
    F: Fn(f64, &Mat3) -> Mat3,
{
    let mut out = Vec::with_capacity(ts.len());
    let mut y = y0;
    out.push(y);
    for w in ts.windows(2) {
        y = integrate(&f, w[0], w[1], y, opts)?;
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C;

    #[test]
    fn scalar_exponential() {
        // y' = λ y embedded in the (0,0) slot.
        let lambda = C::new(-0.3, 2.0);
        let mut y0 = Mat3::zeros();
        y0[(0, 0)] = C::new(1.0, 0.0);
        let y = integrate(|_, y| y.map(|z| z * lambda), 0.0, 3.0, y0, &OdeOpts::default()).unwrap();
        let exact = (lambda * C::new(3.0, 0.0)).exp();
        assert!((y[(0, 0)] - exact).norm() < 1e-9);
    }

    #[test]
    fn constant_coefficient_matches_expm() {
        use crate::numeric::linalg::expm3;
        let a = Mat3::from_fn(|i, j| C::new(0.3 * (i as f64 - j as f64), 0.2 * (i + j) as f64));
        let y = integrate(|_, y| a * y, 0.0, 1.5, Mat3::identity(), &OdeOpts::default()).unwrap();
        let exact = expm3(&scale(&a, 1.5));
        assert!(max_abs(&(y - exact)) < 1e-9);
    }

    #[test]
    fn backward_integration_inverts_forward() {
        let coeff = |t: f64| {
            Mat3::from_fn(|i, j| C::new((t + i as f64).sin() * 0.4, (t * j as f64).cos() * 0.3))
        };
        let opts = OdeOpts::default();
        let fwd = integrate(|t, y| coeff(t) * y, 0.0, 2.0, Mat3::identity(), &opts).unwrap();
        let back = integrate(|t, y| coeff(t) * y, 2.0, 0.0, fwd, &opts).unwrap();
        assert!(max_abs(&(back - Mat3::identity())) < 1e-8);
    }

    #[test]
    fn collect_checkpoints_descending() {
        let lambda = C::new(0.0, 1.0);
        let mut y0 = Mat3::zeros();
        y0[(0, 0)] = C::new(1.0, 0.0);
        let ts: Vec<f64> = (0..=20).map(|i| 2.0 - 0.1 * i as f64).collect();
        let ys = integrate_collect(|_, y| y.map(|z| z * lambda), &ts, y0, &OdeOpts::default())
            .unwrap();
        for (i, &t) in ts.iter().enumerate() {
            let exact = (lambda * C::new(t - 2.0, 0.0)).exp();
            assert!((ys[i][(0, 0)] - exact).norm() < 1e-9, "at t = {t}");
        }
    }
}
