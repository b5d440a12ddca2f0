//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Euler–Mascheroni constant, 20 significant digits.
pub const EULER_GAMMA: f64 = 0.57721566490153286061;

/// Floating point scalar the library is generic over (`f32` or `f64`).
///
/// Tolerances quoted throughout the crate assume `f64`; `f32` instantiations
/// compile and run but resolve to the coarser precision floor.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn euler_gamma() -> Self {
        Self::c(EULER_GAMMA)
    }

    /// Smallest tolerance worth asking an iterative routine for.
    #[inline]
    fn tol_floor() -> Self {
        Self::epsilon() * Self::c(64.0)
    }

    /// Largest error estimate a routine may report as a success; below every
    /// `f64` threshold in the crate, about 5e-4 for `f32`.
    #[inline]
    fn accuracy_floor() -> Self {
        Self::epsilon() * Self::c(4096.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `tan(πα/2)` evaluated without cancellation near α = 1 and exactly zero at α = 2.
pub fn tan_half_pi<T: Real>(alpha: T) -> T {
    let one = T::one();
    if (alpha - one).abs() < T::c(0.5) {
        -one / (T::FRAC_PI_2() * (alpha - one)).tan()
    } else {
        // tan(πα/2) = tan(πK/2) with K = α (α < 1) or α - 2 (α > 1).
        let k = if alpha < one { alpha } else { alpha - T::c(2.0) };
        (T::FRAC_PI_2() * k).tan()
    }
}

/// `sin(πx)` with argument reduction so integers give exact zeros.
pub fn sin_pi<T: Real>(x: T) -> T {
    let two = T::c(2.0);
    let mut r = x % two;
    if r < T::zero() {
        r = r + two;
    }
    if r == T::zero() || r == T::one() {
        return T::zero();
    }
    if r > T::one() {
        -(T::PI() * (r - T::one())).sin()
    } else if r > T::c(0.5) {
        (T::PI() * (T::one() - r)).sin()
    } else {
        (T::PI() * r).sin()
    }
}

/// `cos(πx/2)`, exactly zero at odd integers.
pub fn cos_half_pi<T: Real>(x: T) -> T {
    sin_pi((x + T::one()) / T::c(2.0))
}
