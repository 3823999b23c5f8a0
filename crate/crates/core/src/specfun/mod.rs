//! Special functions and quadrature used by the closed forms and the exact
//! integrals.

mod bessel;
mod gamma;
mod hypergeometric;
mod marcum;
mod quadrature;

pub use bessel::bessel_i_scaled;
pub use gamma::{
    factorial, gamma_p, gamma_pq, gamma_q, ln_binomial, ln_factorial, ln_gamma,
};
pub use hypergeometric::{hyp1f1, hyp2f1};
pub use marcum::{marcum_p, marcum_q, marcum_pq};
pub use quadrature::{
    gauss_laguerre, gauss_legendre, quad_finite, quad_semi_infinite, try_quad_adaptive,
    try_quad_adaptive_semi_infinite, try_quad_semi_infinite,
    LaguerreRule,
};

/// Tolerances shared by every iterative routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on series terms or continued-fraction steps.
    pub max_terms: usize,
    /// Largest Gauss-Laguerre rule tried before giving up.
    pub quad_nodes: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_terms: 10_000,
            quad_nodes: 200,
        }
    }
}

impl Precision {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return crate::error::domain("tolerances must be positive");
        }
        if self.max_terms < 1 || self.quad_nodes < 8 {
            return crate::error::domain("need max_terms >= 1 and quad_nodes >= 8");
        }
        Ok(())
    }

    pub(crate) fn converged(&self, delta: f64, value: f64) -> bool {
        delta.abs() <= self.abs_tol.max(self.rel_tol * value.abs())
    }
}
