//! Shared numerical utilities: 3×3 complex linear algebra, quadrature,
//! interpolation, and an adaptive ODE integrator for matrix-valued systems.

pub mod interp;
pub mod linalg;
pub mod ode;
pub mod quad;
