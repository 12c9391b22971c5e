//! Scalar abstraction shared by the generic numerics.
//!
//! `Real` is implemented for `f32`, `f64` and [`Double`]. Complex helpers are
//! free functions because `num_complex` only offers transcendental methods for
//! `num_traits::Float` types.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{FromPrimitive, Num, NumAssign, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

use crate::double::Double;

pub trait Real:
    Num
    + NumAssign
    + Copy
    + PartialOrd
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Unit roundoff of the type.
    const EPS: f64;

    fn of(x: f64) -> Self;
    fn f64(self) -> f64;
    fn pi() -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn is_finite(self) -> bool;

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to every Real")
    }

    fn hypot(self, other: Self) -> Self {
        let (a, b) = (self.abs(), other.abs());
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big == Self::zero() {
            return big;
        }
        let t = small / big;
        big * (Self::one() + t * t).sqrt()
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

macro_rules! native_real {
    ($t:ty) => {
        impl Real for $t {
            const EPS: f64 = <$t>::EPSILON as f64 / 2.0;
            #[inline]
            fn of(x: f64) -> Self {
                x as $t
            }
            #[inline]
            fn f64(self) -> f64 {
                self as f64
            }
            fn pi() -> Self {
                std::f64::consts::PI as $t
            }
            #[inline]
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
            #[inline]
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            fn exp(self) -> Self {
                <$t>::exp(self)
            }
            fn ln(self) -> Self {
                <$t>::ln(self)
            }
            fn sin(self) -> Self {
                <$t>::sin(self)
            }
            fn cos(self) -> Self {
                <$t>::cos(self)
            }
            fn sinh(self) -> Self {
                <$t>::sinh(self)
            }
            fn cosh(self) -> Self {
                <$t>::cosh(self)
            }
            fn powi(self, n: i32) -> Self {
                <$t>::powi(self, n)
            }
            #[inline]
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }
            #[inline]
            fn hypot(self, other: Self) -> Self {
                <$t>::hypot(self, other)
            }
        }
    };
}

native_real!(f32);
native_real!(f64);

impl Real for Double {
    const EPS: f64 = Double::EPSILON;
    #[inline]
    fn of(x: f64) -> Self {
        Double::from_f64(x)
    }
    #[inline]
    fn f64(self) -> f64 {
        self.as_f64()
    }
    fn pi() -> Self {
        Double::PI
    }
    fn abs(self) -> Self {
        Double::abs(self)
    }
    fn sqrt(self) -> Self {
        Double::sqrt(self)
    }
    fn exp(self) -> Self {
        Double::exp(self)
    }
    fn ln(self) -> Self {
        Double::ln(self)
    }
    fn sin(self) -> Self {
        Double::sin(self)
    }
    fn cos(self) -> Self {
        Double::cos(self)
    }
    fn sinh(self) -> Self {
        Double::sinh(self)
    }
    fn cosh(self) -> Self {
        Double::cosh(self)
    }
    fn powi(self, n: i32) -> Self {
        Double::powi(self, n)
    }
    fn is_finite(self) -> bool {
        Double::is_finite(self)
    }
}

/// Complex number over a generic scalar.
pub type C<T> = Complex<T>;

#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

/// Lifts an `f64` complex value into another scalar type.
#[inline]
pub fn lift<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::of(z.re), T::of(z.im))
}

/// Rounds a complex value down to `f64`.
#[inline]
pub fn lower<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.f64(), z.im.f64())
}

#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

/// `log |z|` in `f64`; `-inf` at zero.
#[inline]
pub fn log_abs<T: Real>(z: Complex<T>) -> f64 {
    cabs(z).f64().ln()
}

#[inline]
pub fn is_finite_c<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

pub fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.re.exp();
    Complex::new(r * z.im.cos(), r * z.im.sin())
}

pub fn csin<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.re.sin() * z.im.cosh(), z.re.cos() * z.im.sinh())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_helpers_agree_across_precisions() {
        let z = Complex::new(0.3, -1.1);
        let d: Complex<Double> = lift(z);
        let e64 = cexp(z);
        let edd = lower(cexp(d));
        assert!((e64 - edd).norm() < 1e-15);
        let s64 = csin(z);
        let sdd = lower(csin(d));
        assert!((s64 - sdd).norm() < 1e-15);
        assert!((log_abs(z) - z.norm().ln()).abs() < 1e-15);
        assert!((cabs(lift::<f32>(z)) as f64 - z.norm()).abs() < 1e-6);
    }

    #[test]
    fn hypot_default_handles_zero() {
        assert_eq!(Real::hypot(Double::ZERO, Double::ZERO), Double::ZERO);
        let h = Real::hypot(Double::from_f64(3.0), Double::from_f64(-4.0));
        assert!((h - Double::from_f64(5.0)).abs().as_f64() < 1e-31);
    }
}
