use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Coefficient fields that expressions can be evaluated in.
///
/// Exact rationals never round. `Complex64` follows IEEE semantics; a division is
/// only reported as a pole when the divisor is exactly zero, so callers working in
/// floating point must apply their own tolerance to near-singular values.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &BigRational) -> Self;

    /// Size used for pivot selection; exact types only need zero vs nonzero.
    fn magnitude(&self) -> f64;

    /// `"a/b"` for rationals, `[re, im]` for complex numbers.
    fn to_json(&self) -> serde_json::Value;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    /// `self^e` for `e >= 0`.
    fn pow_u(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.to_f64()
                .map(f64::abs)
                .unwrap_or(f64::MAX)
                .max(f64::MIN_POSITIVE)
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

impl Scalar for Complex64 {
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.re, self.im])
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_complex(r: &BigRational) -> Complex64 {
    Complex64::from_rational(r)
}

/// Parses `a`, `-a`, or `a/b`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(BigRational::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), rational(-1, 2));
        assert_eq!(format_rational(&rational(4, 2)), "2");
        assert_eq!(format_rational(&rational(-1, 2)), "-1/2");
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn powers() {
        assert_eq!(rational(2, 3).pow_u(3), rational(8, 27));
        assert_eq!(Complex64::new(0.0, 1.0).pow_u(2), Complex64::new(-1.0, 0.0));
        assert_eq!(rational(5, 1).pow_u(0), rational(1, 1));
    }
}
