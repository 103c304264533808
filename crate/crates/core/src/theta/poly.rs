use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Univariate polynomial over the rationals, `coeffs[i]` multiplying `θ^i`.
///
/// The coefficient list never has a trailing zero, so the empty list is the
/// zero polynomial and structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ThetaPoly {
    coeffs: Vec<Rational>,
}

impl ThetaPoly {
    pub fn zero() -> Self {
        ThetaPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ThetaPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        ThetaPoly::from_coeffs(vec![c])
    }

    /// The monomial `θ`.
    pub fn theta() -> Self {
        ThetaPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `θ + a`.
    pub fn linear(a: Rational) -> Self {
        ThetaPoly::from_coeffs(vec![a, Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ThetaPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        ThetaPoly::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn eval_int(&self, at: i64) -> Rational {
        self.eval(&Rational::from_integer(at.into()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return ThetaPoly::zero();
        }
        ThetaPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = ThetaPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(θ))`.
    pub fn compose(&self, inner: &ThetaPoly) -> Self {
        let mut acc = ThetaPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &ThetaPoly::constant(c.clone());
        }
        acc
    }

    /// `self(s·θ + r)`.
    pub fn substitute_affine(&self, s: &Rational, r: &Rational) -> Self {
        self.compose(&ThetaPoly::from_coeffs(vec![r.clone(), s.clone()]))
    }

    /// `self(θ + r)`.
    pub fn shift(&self, r: &Rational) -> Self {
        self.substitute_affine(&Rational::one(), r)
    }

    pub fn shift_int(&self, r: i64) -> Self {
        self.shift(&Rational::from_integer(r.into()))
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, divisor: &ThetaPoly) -> (ThetaPoly, ThetaPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let q = &rem[top] / lead;
            let shift = top - dd;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * c;
            }
            quot[shift] = q;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (ThetaPoly::from_coeffs(quot), ThetaPoly::from_coeffs(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &ThetaPoly) -> ThetaPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> ThetaPoly {
        match self.leading() {
            None => ThetaPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators (meaningful once all coefficients are integers).
    pub fn numerator_gcd(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Human-readable form in the given variable name, highest power first.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("theta"))
    }
}

impl Add for &ThetaPoly {
    type Output = ThetaPoly;

    fn add(self, rhs: &ThetaPoly) -> ThetaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ThetaPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &ThetaPoly {
    type Output = ThetaPoly;

    fn sub(self, rhs: &ThetaPoly) -> ThetaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ThetaPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &ThetaPoly {
    type Output = ThetaPoly;

    fn mul(self, rhs: &ThetaPoly) -> ThetaPoly {
        if self.is_zero() || rhs.is_zero() {
            return ThetaPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ThetaPoly::from_coeffs(out)
    }
}

impl Neg for &ThetaPoly {
    type Output = ThetaPoly;

    fn neg(self) -> ThetaPoly {
        ThetaPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for ThetaPoly {
            type Output = ThetaPoly;
            fn $f(self, rhs: ThetaPoly) -> ThetaPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for ThetaPoly {
    type Output = ThetaPoly;

    fn neg(self) -> ThetaPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn zero_is_empty() {
        let p = ThetaPoly::from_ints(&[0, 0, 0]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn affine_substitution() {
        // θ^2 under θ -> -θ-1 is (θ+1)^2
        let p = ThetaPoly::theta().pow(2);
        let q = p.substitute_affine(&rat(-1, 1), &rat(-1, 1));
        assert_eq!(q, ThetaPoly::from_ints(&[1, 2, 1]));
        // (θ+1)^3 -> -θ^3
        let c = ThetaPoly::linear(rat(1, 1)).pow(3);
        assert_eq!(c.substitute_affine(&rat(-1, 1), &rat(-1, 1)), -ThetaPoly::theta().pow(3));
    }

    #[test]
    fn gcd_and_division() {
        let a = ThetaPoly::from_ints(&[0, 0, 1]) * ThetaPoly::from_ints(&[3, 2]);
        let b = ThetaPoly::from_ints(&[0, 1]) * ThetaPoly::from_ints(&[1, 1]);
        assert_eq!(a.gcd(&b), ThetaPoly::theta());
        let (q, r) = a.div_rem(&ThetaPoly::theta());
        assert!(r.is_zero());
        assert_eq!(q, ThetaPoly::from_ints(&[0, 3, 2]));
    }

    #[test]
    fn display_in_variable() {
        let p = ThetaPoly::from_coeffs(vec![rat(-1, 2), rat(0, 1), rat(3, 1)]);
        assert_eq!(p.to_string_in("n"), "3*n^2 - 1/2");
    }
}
