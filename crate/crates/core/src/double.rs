//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64` with
//! `|lo| <= ulp(hi) / 2`, giving roughly 32 significant digits.
//!
//! Only what the contour and approximation code needs is provided. The
//! elementary functions are accurate to a few units in the last place for
//! moderate arguments; huge trigonometric arguments are not reduced exactly.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Double {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Double {
    pub const ZERO: Double = Double { hi: 0.0, lo: 0.0 };
    pub const ONE: Double = Double { hi: 1.0, lo: 0.0 };
    pub const PI: Double = Double { hi: 3.141592653589793116e+00, lo: 1.224646799147353207e-16 };
    pub const TAU: Double = Double { hi: 6.283185307179586232e+00, lo: 2.449293598294706414e-16 };
    pub const FRAC_PI_2: Double = Double { hi: 1.570796326794896558e+00, lo: 6.123233995736766036e-17 };
    pub const LN_2: Double = Double { hi: 6.931471805599452862e-01, lo: 2.319046813846299558e-17 };
    pub const EPSILON: f64 = 4.93038065763132e-32;

    /// Builds from two parts, renormalising them.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        Self::guard(h, l)
    }

    pub const fn from_f64(x: f64) -> Self {
        Double { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn as_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    fn guard(hi: f64, lo: f64) -> Self {
        if hi.is_finite() {
            Double { hi, lo }
        } else {
            Double { hi, lo: 0.0 }
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn is_nan(self) -> bool {
        self.hi.is_nan()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Multiplies by `2^k` exactly (barring overflow or underflow).
    pub fn ldexp(self, k: i32) -> Self {
        let scale = |x: f64| {
            if (-1000..=1000).contains(&k) {
                x * 2f64.powi(k)
            } else {
                x * 2f64.powi(k / 2) * 2f64.powi(k - k / 2)
            }
        };
        Self::guard(scale(self.hi), scale(self.lo))
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (h, l) = quick_two_sum(p, e + self.lo * b);
        Self::guard(h, l)
    }

    fn sqr(self) -> Self {
        self * self
    }

    pub fn round(self) -> Self {
        let h = self.hi.round();
        if h == self.hi {
            let l = self.lo.round();
            let (h, l) = quick_two_sum(h, l);
            Double { hi: h, lo: l }
        } else if (h - self.hi).abs() == 0.5 && self.lo != 0.0 {
            // hi sits exactly on a half; lo decides the direction
            if self.lo < 0.0 && h > self.hi {
                Double::from_f64(h - 1.0)
            } else if self.lo > 0.0 && h < self.hi {
                Double::from_f64(h + 1.0)
            } else {
                Double::from_f64(h)
            }
        } else {
            Double::from_f64(h)
        }
    }

    pub fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            -(-self).floor()
        }
    }

    pub fn floor(self) -> Self {
        let h = self.hi.floor();
        if h == self.hi {
            let (h, l) = quick_two_sum(h, self.lo.floor());
            Double { hi: h, lo: l }
        } else {
            Double::from_f64(h)
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Double::ZERO } else { Double::from_f64(f64::NAN) };
        }
        if !self.hi.is_finite() {
            return self;
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = Double::from_f64(self.hi * x);
        let diff = (self - ax.sqr()).hi;
        ax + Double::from_f64(diff * x * 0.5)
    }

    pub fn exp(self) -> Self {
        if self.hi.is_nan() {
            return self;
        }
        if self.hi > 709.78 {
            return Double::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Double::ZERO;
        }
        let k = (self.hi / Self::LN_2.hi).round();
        let r = (self - Self::LN_2.mul_f64(k)).ldexp(-9);
        // r is below 7e-4 in magnitude, so a dozen terms reach full precision
        let mut term = r;
        let mut s = r;
        let mut i = 2.0;
        while term.hi.abs() > 1e-36 && i < 30.0 {
            term = term * r / Double::from_f64(i);
            s += term;
            i += 1.0;
        }
        // expm1(2x) = 2 expm1(x) + expm1(x)^2
        for _ in 0..9 {
            s = s.ldexp(1) + s.sqr();
        }
        (s + Double::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Double::from_f64(f64::NEG_INFINITY)
            } else {
                Double::from_f64(f64::NAN)
            };
        }
        if !self.hi.is_finite() {
            return self;
        }
        let x = Double::from_f64(self.hi.ln());
        // one Newton step on exp(x) = a doubles the number of correct digits
        x + self * (-x).exp() - Double::ONE
    }

    fn sin_taylor(r: Self) -> Self {
        let r2 = r.sqr();
        let mut term = r;
        let mut s = r;
        let mut k = 1.0;
        while term.hi.abs() > 1e-36 * s.hi.abs().max(1e-300) && k < 60.0 {
            term = -(term * r2) / Double::from_f64((k + 1.0) * (k + 2.0));
            s += term;
            k += 2.0;
        }
        s
    }

    fn cos_taylor(r: Self) -> Self {
        let r2 = r.sqr();
        let mut term = Double::ONE;
        let mut s = Double::ONE;
        let mut k = 0.0;
        while term.hi.abs() > 1e-36 && k < 60.0 {
            term = -(term * r2) / Double::from_f64((k + 1.0) * (k + 2.0));
            s += term;
            k += 2.0;
        }
        s
    }

    /// Reduces to `r` in [-pi/4, pi/4] and the quadrant index mod 4.
    fn reduce_quadrant(self) -> (Self, i64) {
        let turns = (self / Self::TAU).round();
        let r = self - Self::TAU * turns;
        let j = (r / Self::FRAC_PI_2).round();
        let r = r - Self::FRAC_PI_2 * j;
        (r, (j.hi as i64).rem_euclid(4))
    }

    pub fn sin(self) -> Self {
        if !self.is_finite() {
            return Double::from_f64(f64::NAN);
        }
        let (r, q) = self.reduce_quadrant();
        match q {
            0 => Self::sin_taylor(r),
            1 => Self::cos_taylor(r),
            2 => -Self::sin_taylor(r),
            _ => -Self::cos_taylor(r),
        }
    }

    pub fn cos(self) -> Self {
        if !self.is_finite() {
            return Double::from_f64(f64::NAN);
        }
        let (r, q) = self.reduce_quadrant();
        match q {
            0 => Self::cos_taylor(r),
            1 => -Self::sin_taylor(r),
            2 => -Self::cos_taylor(r),
            _ => Self::sin_taylor(r),
        }
    }

    pub fn sinh(self) -> Self {
        if self.hi.abs() < 0.5 {
            let x2 = self.sqr();
            let mut term = self;
            let mut s = self;
            let mut k = 1.0;
            while term.hi.abs() > 1e-36 * s.hi.abs().max(1e-300) && k < 60.0 {
                term = term * x2 / Double::from_f64((k + 1.0) * (k + 2.0));
                s += term;
                k += 2.0;
            }
            s
        } else {
            let e = self.exp();
            (e - Double::ONE / e).ldexp(-1)
        }
    }

    pub fn cosh(self) -> Self {
        let e = self.exp();
        (e + Double::ONE / e).ldexp(-1)
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Double::ONE / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Double::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }
}

impl From<f64> for Double {
    fn from(x: f64) -> Self {
        Double::from_f64(x)
    }
}

impl Neg for Double {
    type Output = Double;
    fn neg(self) -> Double {
        Double { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Double {
    type Output = Double;
    #[inline]
    fn add(self, b: Double) -> Double {
        let (s, e) = two_sum(self.hi, b.hi);
        if !s.is_finite() {
            return Double::from_f64(s);
        }
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (s, e) = quick_two_sum(s, e + f);
        Double { hi: s, lo: e }
    }
}

impl Sub for Double {
    type Output = Double;
    #[inline]
    fn sub(self, b: Double) -> Double {
        self + (-b)
    }
}

impl Mul for Double {
    type Output = Double;
    #[inline]
    fn mul(self, b: Double) -> Double {
        let (p, e) = two_prod(self.hi, b.hi);
        if !p.is_finite() {
            return Double::from_f64(p);
        }
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        Double::guard(h, l)
    }
}

impl Div for Double {
    type Output = Double;
    #[inline]
    fn div(self, b: Double) -> Double {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() || b.hi == 0.0 {
            return Double::from_f64(q1);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Double { hi: h, lo: l } + Double::from_f64(q3)
    }
}

impl Rem for Double {
    type Output = Double;
    fn rem(self, b: Double) -> Double {
        self - (self / b).trunc() * b
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Double {
            #[inline]
            fn $m(&mut self, b: Double) {
                *self = *self $op b;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl PartialOrd for Double {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Sum for Double {
    fn sum<I: Iterator<Item = Double>>(iter: I) -> Double {
        iter.fold(Double::ZERO, |a, b| a + b)
    }
}

impl Zero for Double {
    fn zero() -> Self {
        Double::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for Double {
    fn one() -> Self {
        Double::ONE
    }
}

impl Num for Double {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            // forces the standard parse error for anything non-decimal
            return "".parse::<f64>().map(Double::from_f64);
        }
        s.trim().parse::<f64>().map(Double::from_f64)
    }
}

impl FromPrimitive for Double {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Double::new(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Double::new(hi, lo))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(Double::from_f64(n))
    }
}

impl ToPrimitive for Double {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc();
        if !t.is_finite() {
            return None;
        }
        Some((t.hi as i128 + t.lo as i128) as i64)
    }
    fn to_u64(&self) -> Option<u64> {
        let v = self.to_i64()?;
        u64::try_from(v).ok()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl fmt::Debug for Double {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Double({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Double {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.as_f64(), f)
    }
}

impl fmt::LowerExp for Double {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerExp::fmt(&self.as_f64(), f)
    }
}

// Reports only need the leading 16 digits.
impl Serialize for Double {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}

impl<'de> Deserialize<'de> for Double {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Double::from_f64)
    }
}
