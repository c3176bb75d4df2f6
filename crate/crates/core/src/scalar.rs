//! Floating-point abstraction the toolkit is generic over.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign};

/// Scalar type for all simulation and network math.
///
/// Implemented for `f32` and `f64`. The crate-root aliases fix `f64`,
/// which the weight archive and the finite-difference gradient checks
/// assume; `f32` remains available for memory-constrained inference.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into this scalar (rounding for `f32`).
    fn from_f(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 converts to any Scalar")
    }

    /// Widens (or passes through) to `f64` for reporting and serialization.
    fn to_f(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
