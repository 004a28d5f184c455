//! Adaptive numerical integration and regulator extrapolation.
//!
//! Everything here is generic over [`Real`] and integrates complex-valued
//! integrands. Panels are refined globally (largest error first) and the
//! final sum is always accumulated in left-to-right panel order, so results
//! are bit-reproducible for a given integrand and tolerance.

pub mod adaptive;
pub mod extrapolate;
pub mod gauss_kronrod;
pub mod path;
pub mod semi_infinite;
pub mod time_ordered;

use num_complex::Complex;

use crate::Real;

pub use adaptive::integrate;
pub use extrapolate::{eps_extrapolate, neville_at_zero, wynn_epsilon, EpsSchedule, Extrapolated};
pub use path::Contour;
pub use semi_infinite::{integrate_semi_infinite, SemiInfinite};
pub use time_ordered::{integrate_plane_2d, integrate_time_ordered_2d, Nested2d};

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<R> {
    pub value: Complex<R>,
    pub abs_error: R,
    pub evaluations: usize,
}

impl<R: Real> QuadResult<R> {
    pub fn zero() -> Self {
        QuadResult {
            value: Complex::new(R::zero(), R::zero()),
            abs_error: R::zero(),
            evaluations: 0,
        }
    }

    /// Sum of two independent estimates.
    pub fn combine(self, other: Self) -> Self {
        QuadResult {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scale(self, factor: Complex<R>) -> Self {
        QuadResult {
            value: self.value * factor,
            abs_error: self.abs_error * factor.norm(),
            evaluations: self.evaluations,
        }
    }
}

/// Accuracy request: `error <= max(rel * |value|, abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<R> {
    pub rel: R,
    pub abs: R,
    pub max_evals: usize,
}

impl<R: Real> Tolerance<R> {
    /// Relative tolerance with the default absolute floor `rel * 1e-3`.
    pub fn new(rel: R) -> Self {
        Tolerance {
            rel,
            abs: rel * R::lit(1e-3),
            max_evals: 4_000_000,
        }
    }

    pub fn with_abs(self, abs: R) -> Self {
        Tolerance { abs, ..self }
    }

    pub fn with_max_evals(self, max_evals: usize) -> Self {
        Tolerance { max_evals, ..self }
    }

    pub fn bound(&self, value: Complex<R>) -> R {
        (self.rel * value.norm()).max(self.abs)
    }

    pub fn met(&self, value: Complex<R>, error: R) -> bool {
        error <= self.bound(value)
    }
}
