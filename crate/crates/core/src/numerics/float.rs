//! Binary floating point with an arbitrary-size mantissa.
//!
//! A [`Float`] is `mant · 2^exp`. Every arithmetic operation takes the
//! target mantissa width in bits and rounds to nearest; nothing here tracks
//! error, that is the job of [`super::BigReal`]. All routines are plain
//! integer arithmetic, so results are bit-reproducible on every platform.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct Float {
    mant: BigInt,
    exp: i64,
}

const LN_2_F64: f64 = std::f64::consts::LN_2;

impl Float {
    pub fn zero() -> Self {
        Float { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Float::from_int(1)
    }

    /// Exact conversion, no rounding.
    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Float { mant: n.into(), exp: 0 }
    }

    /// `mant · 2^exp`, exact.
    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        Float { mant, exp }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Float::zero();
        }
        let bits = v.abs().to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let mant = BigInt::from(m);
        Float { mant: if v < 0.0 { -mant } else { mant }, exp: e }
    }

    pub fn from_rational(r: &BigRational, bits: u64) -> Self {
        Float::from_int(r.numer().clone()).div(&Float::from_int(r.denom().clone()), bits)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Self {
        Float { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Float { mant: self.mant.abs(), exp: self.exp }
    }

    /// Position just above the most significant bit: `2^(top-1) <= |self| < 2^top`.
    pub fn top_bit(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn round(&self, bits: u64) -> Self {
        let n = self.mant.bits();
        if self.mant.is_zero() {
            return Float::zero();
        }
        if n <= bits {
            return self.clone();
        }
        let s = n - bits;
        let mag = self.mant.magnitude();
        let mut r: BigUint = (mag + (BigUint::one() << (s - 1))) >> s;
        let mut shift = s as i64;
        if r.bits() > bits {
            r >>= 1u32;
            shift += 1;
        }
        let mant = BigInt::from_biguint(self.mant.sign(), r);
        Float { mant, exp: self.exp + shift }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Float { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Float, bits: u64) -> Self {
        if self.is_zero() {
            return other.round(bits);
        }
        if other.is_zero() {
            return self.round(bits);
        }
        let (ta, tb) = (self.top_bit(), other.top_bit());
        let gap = bits as i64 + 2;
        if ta > tb + gap {
            return self.round(bits);
        }
        if tb > ta + gap {
            return other.round(bits);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Float { mant: a + b, exp: e }.round(bits)
    }

    pub fn sub(&self, other: &Float, bits: u64) -> Self {
        self.add(&other.neg(), bits)
    }

    pub fn mul(&self, other: &Float, bits: u64) -> Self {
        Float { mant: &self.mant * &other.mant, exp: self.exp + other.exp }.round(bits)
    }

    pub fn mul_int(&self, k: i64, bits: u64) -> Self {
        Float { mant: &self.mant * k, exp: self.exp }.round(bits)
    }

    pub fn div(&self, other: &Float, bits: u64) -> Self {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Float::zero();
        }
        let shift = (bits as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << shift as u64) / &other.mant;
        Float { mant: q, exp: self.exp - shift - other.exp }.round(bits)
    }

    pub fn div_int(&self, k: i64, bits: u64) -> Self {
        self.div(&Float::from_int(k), bits)
    }

    /// `self^k` by repeated squaring.
    pub fn powi(&self, mut k: u32, bits: u64) -> Self {
        let mut base = self.round(bits + 8);
        let mut acc = Float::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, bits + 8);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, bits + 8);
            }
        }
        acc.round(bits)
    }

    pub fn cmp_value(&self, other: &Float) -> Ordering {
        let d = self.sub(other, 8);
        match d.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn cmp_abs(&self, other: &Float) -> Ordering {
        self.abs().cmp_value(&other.abs())
    }

    pub fn max_abs(a: &Float, b: &Float) -> Float {
        if a.cmp_abs(b) == Ordering::Less {
            b.abs()
        } else {
            a.abs()
        }
    }

    /// Nearest `f64`; saturates to 0 or ±inf outside the double range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60);
        let m = r.mant.to_f64().unwrap_or(0.0);
        let e = r.exp.clamp(-4000, 4000) as i32;
        if e > 1023 {
            let v = m * 2f64.powi(1023);
            return v * 2f64.powi(e - 1023);
        }
        if e < -1022 {
            let v = m * 2f64.powi(-1022);
            return v * 2f64.powi(e + 1022);
        }
        m * 2f64.powi(e)
    }

    /// `log2 |self|` as an `f64`, valid far outside the double range.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let r = self.round(53);
        let m = r.mant.abs().to_f64().unwrap_or(1.0);
        m.log2() + r.exp as f64
    }

    /// Fixed-point image `round(self · 2^frac)`.
    pub fn to_fixed(&self, frac: u64) -> BigInt {
        let e = self.exp + frac as i64;
        if e >= 0 {
            &self.mant << e as u64
        } else {
            let s = (-e) as u64;
            let half = BigInt::one() << (s - 1);
            (&self.mant + half) >> s
        }
    }

    pub fn sqrt(&self, bits: u64) -> Self {
        assert!(self.signum() >= 0, "sqrt of negative value");
        if self.is_zero() {
            return Float::zero();
        }
        let mut s = 2 * bits as i64 + 4 - self.mant.bits() as i64;
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let m = if s >= 0 {
            self.mant.magnitude() << s as u64
        } else {
            self.mant.magnitude() >> (-s) as u64
        };
        let r = m.sqrt();
        Float { mant: BigInt::from(r), exp: (self.exp - s) / 2 }.round(bits)
    }

    /// `e^self`.
    pub fn exp(&self, bits: u64) -> Self {
        if self.is_zero() {
            return Float::one();
        }
        let xf = self.to_f64();
        assert!(xf.abs() < 1e15, "exp argument out of range");
        let n = (xf / LN_2_F64).round() as i64;
        let work = bits + 24;
        let r = if n == 0 {
            self.round(work)
        } else {
            let nbits = 64 - n.unsigned_abs().leading_zeros() as u64;
            let ln2 = ln2(work + nbits + 8);
            self.sub(&ln2.mul_int(n, work + nbits + 8), work)
        };
        let halvings = ((bits as f64).sqrt() as u64).max(4);
        let frac = work + halvings + 8;
        let one = BigInt::one() << frac;
        let rp = r.to_fixed(frac) >> halvings;
        let mut sum = one.clone();
        let mut term = one;
        let mut k = 1u64;
        loop {
            term = (&term * &rp) >> frac;
            term /= k;
            if term.is_zero() {
                break;
            }
            sum += &term;
            k += 1;
        }
        for _ in 0..halvings {
            sum = (&sum * &sum) >> frac;
        }
        Float { mant: sum, exp: n - frac as i64 }.round(bits)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self, bits: u64) -> Self {
        assert!(self.signum() > 0, "ln of non-positive value");
        let work = bits + 24;
        // self = m · 2^t with m in [1/sqrt2, sqrt2)
        let mut t = self.top_bit();
        let mut m = self.mul_pow2(-t);
        if m.to_f64() < std::f64::consts::FRAC_1_SQRT_2 {
            m = m.mul_pow2(1);
            t -= 1;
        }
        let frac = work + 8;
        let one = BigInt::one() << frac;
        let mf = m.to_fixed(frac);
        let z = ((&mf - &one) << frac) / (&mf + &one);
        let z2 = (&z * &z) >> frac;
        let mut sum = z.clone();
        let mut term = z;
        let mut k = 1u64;
        loop {
            term = (&term * &z2) >> frac;
            let q = &term / (2 * k + 1);
            if q.is_zero() {
                break;
            }
            sum += q;
            k += 1;
        }
        let ln_m = Float { mant: sum, exp: 1 - frac as i64 };
        if t == 0 {
            return ln_m.round(bits);
        }
        let tbits = 64 - t.unsigned_abs().leading_zeros() as u64;
        let ln2 = ln2(work + tbits);
        ln_m.add(&ln2.mul_int(t, work + tbits), bits)
    }

    /// Decimal rendering with `digits` significant digits, fixed notation for
    /// moderate magnitudes and `d.ddde±N` otherwise.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.signum() < 0;
        let mut e10 = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        let mut n = scaled_decimal(self, digits as i64 - 1 - e10);
        let lim = BigUint::from(10u32).pow(digits as u32);
        if n >= lim {
            e10 += 1;
            n = scaled_decimal(self, digits as i64 - 1 - e10);
        } else if n < BigUint::from(10u32).pow(digits as u32 - 1) {
            e10 -= 1;
            n = scaled_decimal(self, digits as i64 - 1 - e10);
        }
        let s = n.to_string();
        let body = if (-8..30).contains(&e10) {
            if e10 < 0 {
                format!("0.{}{}", "0".repeat((-e10 - 1) as usize), s)
            } else if (e10 as usize) + 1 >= s.len() {
                format!("{}{}", s, "0".repeat(e10 as usize + 1 - s.len()))
            } else {
                let (a, b) = s.split_at(e10 as usize + 1);
                format!("{a}.{b}")
            }
        } else {
            let (a, b) = s.split_at(1);
            if b.is_empty() {
                format!("{a}e{e10}")
            } else {
                format!("{a}.{b}e{e10}")
            }
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// `round(|v| · 10^p)` as an integer.
fn scaled_decimal(v: &Float, p: i64) -> BigUint {
    let ten = BigUint::from(10u32);
    let mut num = v.mant.magnitude().clone();
    let mut den = BigUint::one();
    if p >= 0 {
        num *= ten.pow(p as u32);
    } else {
        den *= ten.pow((-p) as u32);
    }
    if v.exp >= 0 {
        num <<= v.exp as u64;
    } else {
        den <<= (-v.exp) as u64;
    }
    (num * 2u32 + &den) / (den * 2u32)
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_decimal(digits))
    }
}

static LN2_CACHE: Mutex<Option<(u64, BigInt)>> = Mutex::new(None);

/// `ln 2`, from the cached fixed-point expansion `Σ 1/(k·2^k)`.
pub fn ln2(bits: u64) -> Float {
    let frac = bits + 16;
    let mut guard = LN2_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((have, v)) = guard.as_ref() {
        if *have >= frac {
            let f = Float { mant: v.clone(), exp: -(*have as i64) };
            return f.round(bits);
        }
    }
    let work = frac + 16;
    let one = BigInt::one() << work;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    loop {
        let term = (&one >> k) / k;
        if term.is_zero() {
            break;
        }
        sum += term;
        k += 1;
    }
    *guard = Some((work, sum.clone()));
    Float { mant: sum, exp: -(work as i64) }.round(bits)
}

/// `π` by Machin's formula `16·atan(1/5) − 4·atan(1/239)`.
pub fn pi(bits: u64) -> Float {
    let frac = bits + 24;
    let atan_inv = |k: u64| -> BigInt {
        let one = BigInt::one() << frac;
        let k2 = k * k;
        let mut power = one / k;
        let mut sum = power.clone();
        let mut i = 1u64;
        loop {
            power /= k2;
            let term = &power / (2 * i + 1);
            if term.is_zero() {
                break;
            }
            if i % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            i += 1;
        }
        sum
    };
    let v = atan_inv(5) * 16 - atan_inv(239) * 4;
    Float { mant: v, exp: -(frac as i64) }.round(bits)
}
