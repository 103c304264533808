use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::float::Float;
use crate::Rational;

/// Working mantissa width for `prec` decimal digits, with guard bits.
pub fn bits_for(prec: u32) -> u64 {
    (prec as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 40
}

/// `10^-digits` as a float.
pub fn ten_pow_neg(digits: u32, bits: u64) -> Float {
    Float::one().div(&Float::from_int(num_bigint::BigInt::from(10u32).pow(digits)), bits)
}

/// A real number known to `prec` decimal digits, with an absolute error bound.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: Float,
    error: Float,
    prec: u32,
}

impl BigReal {
    pub fn new(value: Float, error: Float, prec: u32) -> Self {
        BigReal { value, error: error.abs(), prec }
    }

    pub fn exact(value: Float, prec: u32) -> Self {
        BigReal::new(value, Float::zero(), prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        BigReal::exact(Float::from_rational(r, bits_for(prec)), prec)
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn error_bound(&self) -> &Float {
        &self.error
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn bits(&self) -> u64 {
        bits_for(self.prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// `|self − other|` on the values.
    pub fn abs_diff(&self, other: &BigReal) -> Float {
        let bits = self.bits().max(other.bits());
        self.value.sub(&other.value, bits).abs()
    }

    /// `|self − other| < 10^-digits`.
    pub fn agrees_with(&self, other: &BigReal, digits: u32) -> bool {
        let bits = self.bits().max(other.bits());
        self.abs_diff(other).cmp_abs(&ten_pow_neg(digits, bits)) == Ordering::Less
    }

    /// Number of correct decimal digits implied by the error bound, capped at `prec`.
    pub fn correct_digits(&self) -> u32 {
        if self.error.is_zero() {
            return self.prec;
        }
        let d = -(self.error.log2_abs() * std::f64::consts::LOG10_2).ceil();
        d.clamp(0.0, self.prec as f64) as u32
    }

    pub fn add(&self, other: &BigReal) -> BigReal {
        let prec = self.prec.min(other.prec);
        let bits = bits_for(prec);
        BigReal::new(
            self.value.add(&other.value, bits),
            self.error.add(&other.error, 64),
            prec,
        )
    }

    pub fn sub(&self, other: &BigReal) -> BigReal {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BigReal {
        BigReal::new(self.value.neg(), self.error.clone(), self.prec)
    }

    /// Product by an exact rational.
    pub fn scale(&self, c: &Rational) -> BigReal {
        let bits = self.bits();
        let c = Float::from_rational(c, bits);
        BigReal::new(self.value.mul(&c, bits), self.error.mul(&c, 64), self.prec)
    }

    pub fn mul(&self, other: &BigReal) -> BigReal {
        let prec = self.prec.min(other.prec);
        let bits = bits_for(prec);
        let err = self
            .error
            .mul(&other.value, 64)
            .abs()
            .add(&other.error.mul(&self.value, 64).abs(), 64)
            .add(&self.error.mul(&other.error, 64), 64);
        BigReal::new(self.value.mul(&other.value, bits), err, prec)
    }

    pub fn to_decimal(&self) -> String {
        self.value.to_decimal(self.prec as usize)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.to_decimal(), self.error.to_decimal(3))
    }
}

#[derive(Serialize, Deserialize)]
struct BigRealJson {
    value: String,
    error: String,
    prec: u32,
}

impl Serialize for BigReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BigRealJson { value: self.to_decimal(), error: self.error.to_decimal(3), prec: self.prec }.serialize(s)
    }
}
