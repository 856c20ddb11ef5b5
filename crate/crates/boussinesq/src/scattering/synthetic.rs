//! Closed-form synthetic spectral data.
//!
//! Generic smooth initial data produces reflection coefficients that do not
//! vanish on the segment [0, i], which the global-solution assumption
//! requires.  The asymptotics pipeline therefore accepts synthetic spectral
//! data built from a C-infinity bump that vanishes to all orders at
//! theta = pi/2 (the image of k = i), with the companion coefficient defined
//! by the conjugation relation r2 = tilde_r conj(r1).  Everything downstream
//! (g, its derivative, the exponent integrals) then has closed forms.

use super::tilde_r_arc;
use crate::C;

/// Parameters of the bump profile
/// `r1(theta) = amplitude * exp(-sharpness/(theta - pi/2)) * e^{i (phase0 + phase1 theta)}`
/// for `theta > pi/2`, extended by zero to `theta <= pi/2`.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticProfile {
    pub amplitude: f64,
    pub sharpness: f64,
    pub phase0: f64,
    pub phase1: f64,
}

impl Default for SyntheticProfile {
    fn default() -> Self {
        SyntheticProfile { amplitude: 0.8, sharpness: 0.12, phase0: 0.4, phase1: -1.1 }
    }
}

impl SyntheticProfile {
    /// |r1(theta)|.
    pub fn modulus(&self, theta: f64) -> f64 {
        let d = theta - std::f64::consts::FRAC_PI_2;
        if d <= 0.0 {
            0.0
        } else {
            self.amplitude * (-self.sharpness / d).exp()
        }
    }

    pub fn r1(&self, theta: f64) -> C {
        C::from_polar(self.modulus(theta), self.phase0 + self.phase1 * theta)
    }

    /// g(theta) = ln(1 + r1 r2) = ln(1 + tilde_r(theta) |r1(theta)|^2).
    pub fn g(&self, theta: f64) -> f64 {
        let m = self.modulus(theta);
        (tilde_r_arc(theta) * m * m).ln_1p()
    }

    /// Analytic derivative of g.
    pub fn dg(&self, theta: f64) -> f64 {
        let d = theta - std::f64::consts::FRAC_PI_2;
        if d <= 0.0 {
            return 0.0;
        }
        let m2 = self.modulus(theta).powi(2);
        let tr = tilde_r_arc(theta);
        let c = 2.0 * std::f64::consts::FRAC_PI_3;
        // d/dtheta tilde_r = tilde_r * (cot(theta - c) - cot(theta + c))
        let dtr = tr * ((theta - c).cos() / (theta - c).sin() - (theta + c).cos() / (theta + c).sin());
        // d/dtheta m^2 = m^2 * 2 sharpness / d^2
        let dm2 = m2 * 2.0 * self.sharpness / (d * d);
        (dtr * m2 + tr * dm2) / (1.0 + tr * m2)
    }
}
