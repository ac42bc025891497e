//! Scalar abstraction for the aggregation kernel.
//!
//! The ordered-average math is agnostic to the floating-point width, so the
//! kernel is generic over [`Real`]. `f64` is the default scalar everywhere
//! (type parameters default to it) and is what the solvers, file formats and
//! CLI use; `f32` is available for callers that want the narrower type.

use std::fmt;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the aggregation operators.
pub trait Real: Float + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + 'static {
    /// Absolute tolerance for input validation (probability/importance sums)
    /// and for tie detection among aggregated values.
    const TOL: Self;
}

impl Real for f64 {
    const TOL: Self = 1e-9;
}

impl Real for f32 {
    // f32 cannot hold sums to 1e-9; one part in a million is the practical
    // analogue of the f64 tolerance.
    const TOL: Self = 1e-6;
}
