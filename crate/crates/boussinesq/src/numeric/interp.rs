//! Cubic-spline interpolation (not-a-knot ends) with derivative access, a
//! complex-valued wrapper, and continuous angle unwrapping for branch
//! tracking along quadrature nodes.

use crate::C;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InterpError {
    #[error("angle sequence under-resolved: step of {0:.3} rad between adjacent nodes")]
    AngleJump(f64),
}

/// Not-a-knot cubic spline through `(xs[i], ys[i])` with strictly ascending
/// abscissae. Evaluation clamps to the end intervals (callers stay in range).
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len();
        assert_eq!(n, ys.len());
        assert!(n >= 4, "spline needs at least 4 points");
        assert!(xs.windows(2).all(|w| w[1] > w[0]), "abscissae must ascend");
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        // Interior continuity equations for the moments M_i (second
        // derivatives), i = 1..n-2:
        //   (h[i-1]/6) M[i-1] + ((h[i-1]+h[i])/3) M[i] + (h[i]/6) M[i+1] = d_i
        // with d_i the divided-difference right-hand side. Not-a-knot ties
        //   M0 via h1·M0 - (h0+h1)·M1 + h0·M2 = 0 (third derivative
        // continuous at x1), and symmetrically at the right end; both are
        // eliminated into the first/last interior equations so a tridiagonal
        // solve remains.
        let mut sub = vec![0.0; n - 2];
        let mut diag = vec![0.0; n - 2];
        let mut sup = vec![0.0; n - 2];
        let mut rhs = vec![0.0; n - 2];
        for i in 1..n - 1 {
            let j = i - 1;
            sub[j] = h[i - 1] / 6.0;
            diag[j] = (h[i - 1] + h[i]) / 3.0;
            sup[j] = h[i] / 6.0;
            rhs[j] = (ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1];
        }
        // Eliminate M0 = ((h0+h1) M1 - h0 M2)/h1 from the first equation.
        diag[0] += sub[0] * (h[0] + h[1]) / h[1];
        sup[0] -= sub[0] * h[0] / h[1];
        sub[0] = 0.0;
        // Eliminate M_{n-1} = ((h[n-2]+h[n-3]) M_{n-2} - h[n-2] M_{n-3})/h[n-3].
        let last = n - 3;
        diag[last] += sup[last] * (h[n - 2] + h[n - 3]) / h[n - 3];
        sub[last] -= sup[last] * h[n - 2] / h[n - 3];
        sup[last] = 0.0;
        // Thomas algorithm.
        let mut m_inner = vec![0.0; n - 2];
        for i in 1..n - 2 {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_inner[n - 3] = rhs[n - 3] / diag[n - 3];
        for i in (0..n - 3).rev() {
            m_inner[i] = (rhs[i] - sup[i] * m_inner[i + 1]) / diag[i];
        }
        let mut m = vec![0.0; n];
        m[1..n - 1].copy_from_slice(&m_inner);
        m[0] = ((h[0] + h[1]) * m[1] - h[0] * m[2]) / h[1];
        m[n - 1] = ((h[n - 2] + h[n - 3]) * m[n - 2] - h[n - 2] * m[n - 3]) / h[n - 3];
        Self { xs: xs.to_vec(), ys: ys.to_vec(), m }
    }

    fn interval(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        }
    }

    /// Local coefficients on interval `i`: f(x) = c0 + c1 u + c2 u² + c3 u³,
    /// u = x − xs[i].
    pub fn coeffs(&self, i: usize) -> [f64; 4] {
        let h = self.xs[i + 1] - self.xs[i];
        let (ya, yb) = (self.ys[i], self.ys[i + 1]);
        let (ma, mb) = (self.m[i], self.m[i + 1]);
        let c0 = ya;
        let c1 = (yb - ya) / h - h * (2.0 * ma + mb) / 6.0;
        let c2 = ma / 2.0;
        let c3 = (mb - ma) / (6.0 * h);
        [c0, c1, c2, c3]
    }

    pub fn value(&self, x: f64) -> f64 {
        let i = self.interval(x);
        let [c0, c1, c2, c3] = self.coeffs(i);
        let u = x - self.xs[i];
        c0 + u * (c1 + u * (c2 + u * c3))
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.interval(x);
        let [_, c1, c2, c3] = self.coeffs(i);
        let u = x - self.xs[i];
        c1 + u * (2.0 * c2 + 3.0 * u * c3)
    }
}

/// Complex-valued cubic spline (independent real/imaginary splines).
#[derive(Debug, Clone)]
pub struct CubicSplineC {
    re: CubicSpline,
    im: CubicSpline,
}

impl CubicSplineC {
    pub fn new(xs: &[f64], ys: &[C]) -> Self {
        let re: Vec<f64> = ys.iter().map(|z| z.re).collect();
        let im: Vec<f64> = ys.iter().map(|z| z.im).collect();
        Self { re: CubicSpline::new(xs, &re), im: CubicSpline::new(xs, &im) }
    }

    pub fn coeffs(&self, i: usize) -> [C; 4] {
        let r = self.re.coeffs(i);
        let m = self.im.coeffs(i);
        [
            C::new(r[0], m[0]),
            C::new(r[1], m[1]),
            C::new(r[2], m[2]),
            C::new(r[3], m[3]),
        ]
    }

    pub fn value(&self, x: f64) -> C {
        C::new(self.re.value(x), self.im.value(x))
    }

    pub fn derivative(&self, x: f64) -> C {
        C::new(self.re.derivative(x), self.im.derivative(x))
    }
}

/// Unwrap a sequence of angles in place so adjacent values differ by less
/// than π, reporting failure when the underlying sampling cannot distinguish
/// winding (post-unwrap step close to π).
pub fn unwrap_angles(angles: &mut [f64]) -> Result<(), InterpError> {
    use std::f64::consts::{PI, TAU};
    for i in 1..angles.len() {
        let raw = angles[i] - angles[i - 1];
        let k = (raw / TAU).round();
        angles[i] -= k * TAU;
        let step = (angles[i] - angles[i - 1]).abs();
        if step > 0.95 * PI {
            return Err(InterpError::AngleJump(step));
        }
    }
    Ok(())
}
