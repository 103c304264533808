use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{bits_for, BigReal, Float};

/// `ζ(3)` from `ζ(3) = 5/2·Σ_{k≥1} (−1)^{k+1} / (k³·C(2k,k))`.
///
/// The series alternates with decreasing terms, so the first omitted term
/// bounds the truncation error.
pub fn zeta3(prec: u32) -> BigReal {
    let prec = prec.max(1);
    let bits = bits_for(prec);
    let frac = bits + 16;
    let one = BigInt::one() << frac;
    let mut sum = BigInt::zero();
    let mut central = BigInt::one();
    let mut k: u64 = 1;
    let tail = loop {
        // C(2k,k) = C(2k−2,k−1)·(2k)(2k−1)/k²
        central = central * (2 * k) * (2 * k - 1) / (k * k);
        let term = &one / (&central * k * k * k);
        if term.is_zero() {
            break BigInt::one();
        }
        if k % 2 == 1 {
            sum += &term;
        } else {
            sum -= &term;
        }
        k += 1;
    };
    let value = Float::from_parts(sum * 5, -(frac as i64) - 1).round(bits);
    // truncation plus one unit of rounding per term
    let err = Float::from_parts(tail * 5 + BigInt::from(5 * k), -(frac as i64) - 1);
    BigReal::new(value, err, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_precision_digits() {
        assert_eq!(zeta3(15).to_decimal(), "1.20205690315959");
        assert_eq!(zeta3(1).to_decimal(), "1");
        assert_eq!(zeta3(2).to_decimal(), "1.2");
    }
}
