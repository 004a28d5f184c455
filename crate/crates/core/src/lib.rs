//! Entangled Unruh-DeWitt detectors coupled to a massless scalar field.
//!
//! The crate evaluates the second-order reduced density matrix of two
//! static two-level detectors that start in the state
//! `alpha |g g> + beta e^{i theta} |e e>`, and turns it into a concurrence
//! report. Minkowski elements come from closed forms; any other Wightman
//! backend (the planar shockwave, or Minkowski itself as a cross-check)
//! goes through the generic double-integral engine.
//!
//! All dimensional quantities are measured in units of the switching width
//! `T` of the detectors.
//!
//! The numerical kernels (quadrature, extrapolation, the X-state algebra)
//! are generic over [`Real`]; the physics layer is written against `f64`,
//! and the crate root re-exports `f64` aliases for the generic types.

pub mod concurrence;
pub mod detector;
pub mod elements;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod wightman;

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

pub use num_complex::Complex64;

pub use concurrence::{evaluate, report, ConcurrenceReport};
pub use detector::{derived_geometry, initial_concurrence, DetectorParams, Geometry, InitialState, Regime, Scenario, Spacetime};
pub use elements::generic::GenericConfig;
pub use elements::{assemble, compute, ElementCache, ElementConfig, Estimate, MatrixElements, YTerm};
pub use error::{Error, Result};
pub use wightman::{ShockwaveParams, SpacetimeEvent};


/// Floating-point scalar accepted by the generic numerical kernels.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Lossless-enough conversion of a literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("representable literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Quadrature result in double precision.
pub type QuadResult = quadrature::QuadResult<f64>;
/// Regulator schedule in double precision.
pub type EpsSchedule = quadrature::EpsSchedule<f64>;
/// Extrapolated limit in double precision.
pub type Extrapolated = quadrature::Extrapolated<f64>;
/// Density matrix in double precision.
pub type DensityMatrix = elements::DensityMatrix<f64>;
/// Decomposition of `|r14|^2` in double precision.
pub type R14Parts = concurrence::R14Parts<f64>;
