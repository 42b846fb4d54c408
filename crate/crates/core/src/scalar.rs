use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type the dynamics are evaluated in.
///
/// Implemented for `f32` and `f64`. Every model, metric and the integrator is
/// written against this trait; the crate root exposes `f64` aliases for the
/// common case.
pub trait Scalar:
    'static
    + Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
{
    /// Converts an `f64` constant. Panics only for values the type cannot
    /// represent at all, which never happens for the literals used here.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal not representable")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize not representable")
    }

    /// A tolerance of `v`, floored at a small multiple of machine epsilon so
    /// that `f64` tolerances stay meaningful for `f32`.
    #[inline]
    fn tol(v: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(v).max(floor)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
