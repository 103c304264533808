use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ThetaError, ThetaPoly};
use crate::Rational;

/// Differential operator `Σ_j x^j · P_j(θ)` with `θ = x d/dx`, every power of
/// `x` written to the left of its θ-polynomial.
///
/// Zero polynomials are never stored, so the empty map is the zero operator
/// and structural equality is operator equality. Operators that only matter
/// up to a nonzero constant are compared through [`ThetaOperator::normalize`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ThetaOperator {
    terms: BTreeMap<u32, ThetaPoly>,
}

impl ThetaOperator {
    pub fn zero() -> Self {
        ThetaOperator { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        ThetaOperator::monomial(0, ThetaPoly::one())
    }

    pub fn theta() -> Self {
        ThetaOperator::monomial(0, ThetaPoly::theta())
    }

    /// The multiplication operator `x^j`.
    pub fn x_pow(j: u32) -> Self {
        ThetaOperator::monomial(j, ThetaPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        ThetaOperator::monomial(0, ThetaPoly::constant(c))
    }

    /// `x^j · p(θ)`.
    pub fn monomial(j: u32, p: ThetaPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(j, p);
        }
        ThetaOperator { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, ThetaPoly)>) -> Self {
        let mut out = ThetaOperator::zero();
        for (j, p) in terms {
            out.add_term(j, &p);
        }
        out
    }

    fn add_term(&mut self, j: u32, p: &ThetaPoly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&j) {
            Some(q) => q + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&j);
        } else {
            self.terms.insert(j, sum);
        }
    }

    /// Nonzero terms in increasing order of the x-power.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &ThetaPoly)> {
        self.terms.iter().map(|(&j, p)| (j, p))
    }

    /// `P_j`, the zero polynomial when absent.
    pub fn coeff(&self, j: u32) -> ThetaPoly {
        self.terms.get(&j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `j` with `P_j ≠ 0`.
    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest `j` with `P_j ≠ 0`.
    pub fn x_valuation(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    /// Order as a differential operator, the largest θ-degree of any `P_j`.
    pub fn order(&self) -> Option<usize> {
        self.terms.values().filter_map(ThetaPoly::degree).max()
    }

    pub fn is_even_in_x(&self) -> bool {
        self.terms.keys().all(|j| j % 2 == 0)
    }

    pub fn add(&self, other: &ThetaOperator) -> ThetaOperator {
        let mut out = self.clone();
        for (&j, p) in &other.terms {
            out.add_term(j, p);
        }
        out
    }

    pub fn neg(&self) -> ThetaOperator {
        ThetaOperator { terms: self.terms.iter().map(|(&j, p)| (j, -p)).collect() }
    }

    pub fn sub(&self, other: &ThetaOperator) -> ThetaOperator {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> ThetaOperator {
        if c.is_zero() {
            return ThetaOperator::zero();
        }
        ThetaOperator { terms: self.terms.iter().map(|(&j, p)| (j, p.scale(c))).collect() }
    }

    /// Left multiplication by `x^j`.
    pub fn mul_x(&self, j: u32) -> ThetaOperator {
        ThetaOperator { terms: self.terms.iter().map(|(&i, p)| (i + j, p.clone())).collect() }
    }

    /// `θ ∘ self`, via `θ·x^j = x^j·(θ + j)`.
    pub fn compose_theta_left(&self) -> ThetaOperator {
        ThetaOperator {
            terms: self
                .terms
                .iter()
                .map(|(&j, p)| (j, &ThetaPoly::linear(Rational::from_integer(j.into())) * p))
                .collect(),
        }
    }

    /// Composition `self ∘ rhs` in normal form.
    pub fn compose(&self, rhs: &ThetaOperator) -> ThetaOperator {
        let mut out = ThetaOperator::zero();
        for (&i, p) in &self.terms {
            for (&j, q) in &rhs.terms {
                // x^i p(θ) x^j q(θ) = x^{i+j} p(θ + j) q(θ)
                let moved = p.shift_int(j as i64);
                out.add_term(i + j, &(&moved * q));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> ThetaOperator {
        (0..k).fold(ThetaOperator::one(), |acc, _| acc.compose(self))
    }

    /// Replace every `P_j(θ)` by `P_j(s·θ + r)`.
    pub fn substitute_theta_affine(&self, s: &Rational, r: &Rational) -> ThetaOperator {
        ThetaOperator::from_terms(self.terms.iter().map(|(&j, p)| (j, p.substitute_affine(s, r))))
    }

    /// The change of variable `x -> c·x`, which leaves `θ` invariant.
    pub fn scale_x(&self, c: &Rational) -> Result<ThetaOperator, ThetaError> {
        if c.is_zero() {
            return Err(ThetaError::ZeroScale);
        }
        Ok(ThetaOperator {
            terms: self.terms.iter().map(|(&j, p)| (j, p.scale(&pow_rat(c, j as i64)))).collect(),
        })
    }

    /// The substitution `x -> x^k` (so `θ -> θ/k`), used to write an operator
    /// in `z = x^k` as one in `x`.
    pub fn substitute_x_power(&self, k: u32) -> ThetaOperator {
        assert!(k >= 1, "x-power substitution needs k >= 1");
        let s = Rational::new(BigInt::one(), k.into());
        ThetaOperator::from_terms(
            self.terms.iter().map(|(&j, p)| (j * k, p.substitute_affine(&s, &Rational::zero()))),
        )
    }

    /// Transform to the expansion point at infinity: `θ -> −θ−1` together
    /// with `x -> 1/(c·x)`.
    ///
    /// With `d` the x-degree, the term `x^j P_j(θ)` becomes
    /// `c^{-j} x^{d-j} P_j(−θ−1)`; the overall factor `x^{-d}` is dropped and
    /// the result is normalized. If `self` annihilates `x^{-1} u(1/(c x))`
    /// then the result annihilates `u`, and applying the map twice with the
    /// same `c` returns `normalize(self)` whenever `P_0 ≠ 0`.
    pub fn mirror_at_infinity(&self, c: &Rational) -> Result<ThetaOperator, ThetaError> {
        if c.is_zero() {
            return Err(ThetaError::ZeroScale);
        }
        let Some(d) = self.x_degree() else {
            return Ok(ThetaOperator::zero());
        };
        let minus_one = -Rational::one();
        let mirrored = ThetaOperator::from_terms(self.terms.iter().map(|(&j, p)| {
            let q = p.substitute_affine(&minus_one, &minus_one).scale(&pow_rat(c, -(j as i64)));
            (d - j, q)
        }));
        Ok(mirrored.normalize())
    }

    /// First `n` coefficients of `self` applied to `Σ c_k x^k`.
    ///
    /// `x^j P_j(θ)` sends `c_k x^k` to `P_j(k) c_k x^{k+j}`.
    pub fn apply_to_series(&self, coeffs: &[Rational], n: usize) -> Vec<Rational> {
        assert!(coeffs.len() >= n, "series prefix shorter than requested order");
        let mut out = vec![Rational::zero(); n];
        for (&j, p) in &self.terms {
            let j = j as usize;
            for k in 0..n.saturating_sub(j) {
                if coeffs[k].is_zero() {
                    continue;
                }
                out[k + j] += p.eval_int(k as i64) * &coeffs[k];
            }
        }
        out
    }

    /// True when `self` kills the series `Σ c_k x^k` through order `n`.
    pub fn annihilates(&self, coeffs: &[Rational], n: usize) -> bool {
        self.apply_to_series(coeffs, n).iter().all(Zero::is_zero)
    }

    /// Canonical representative up to a nonzero rational factor: integer
    /// coefficients with content 1, and a positive leading coefficient of
    /// `P_j` for the smallest `j` present.
    pub fn normalize(&self) -> ThetaOperator {
        let Some(jmin) = self.x_valuation() else {
            return ThetaOperator::zero();
        };
        let den = self.terms.values().fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()));
        let scaled = self.scale(&Rational::from_integer(den));
        let num = scaled.terms.values().fold(BigInt::zero(), |acc, p| acc.gcd(&p.numerator_gcd()));
        let mut factor = Rational::new(BigInt::one(), num);
        if scaled.terms[&jmin].leading().is_some_and(|l| l.is_negative()) {
            factor = -factor;
        }
        scaled.scale(&factor)
    }

    /// Equality up to a nonzero rational factor.
    pub fn same_up_to_scalar(&self, other: &ThetaOperator) -> bool {
        self.normalize() == other.normalize()
    }

    /// Grouped form `P_0(θ) + x*(P_1(θ)) + ...`, closer to how the equations
    /// are usually printed. Parses back with the text grammar.
    pub fn to_grouped_string(&self) -> String {
        super::text::grouped(self.terms(), "theta", "x")
    }
}

/// `c^e` for a possibly negative exponent.
pub(crate) fn pow_rat(c: &Rational, e: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= c;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Canonical flat form: `[+|-] c*x^j*theta^i` terms, x-power ascending and
/// θ-power descending within each x-power.
impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&j, p) in &self.terms {
            for (i, c) in p.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let neg = c.is_negative();
                if first {
                    if neg {
                        f.write_str("-")?;
                    }
                } else {
                    f.write_str(if neg { " - " } else { " + " })?;
                }
                first = false;
                let mut parts: Vec<String> = Vec::new();
                let mag = c.abs();
                if !mag.is_one() || (i == 0 && j == 0) {
                    parts.push(mag.to_string());
                }
                match j {
                    0 => {}
                    1 => parts.push("x".into()),
                    _ => parts.push(format!("x^{j}")),
                }
                match i {
                    0 => {}
                    1 => parts.push("theta".into()),
                    _ => parts.push(format!("theta^{i}")),
                }
                f.write_str(&parts.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn op(s: &str) -> ThetaOperator {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert!(op("theta^2").add(&op("-theta^2")).is_zero());
        assert_eq!(op("theta^2 - x").add(&op("x")), op("theta^2"));
        assert_eq!(op("x*theta").add(&op("x*(theta+1)")), op("x*(2*theta+1)"));
    }

    #[test]
    fn mul_x_examples() {
        assert_eq!(op("theta^2").mul_x(1), op("x*theta^2"));
        assert_eq!(ThetaOperator::one().mul_x(2), op("x^2"));
        assert_eq!(op("x*(theta+1)").mul_x(1), op("x^2*(theta+1)"));
    }

    #[test]
    fn compose_theta_left_examples() {
        assert_eq!(ThetaOperator::one().compose_theta_left(), op("theta"));
        assert_eq!(op("theta").compose_theta_left(), op("theta^2"));
        assert_eq!(op("x").compose_theta_left(), op("x*(theta+1)"));
    }

    #[test]
    fn substitute_examples() {
        let m1 = rat(-1, 1);
        assert_eq!(op("theta^2").substitute_theta_affine(&m1, &m1), op("(theta+1)^2"));
        assert_eq!(op("theta").substitute_theta_affine(&rat(2, 1), &rat(0, 1)), op("2*theta"));
        assert_eq!(op("(theta+1)^3").substitute_theta_affine(&m1, &m1), op("-theta^3"));
    }

    #[test]
    fn scale_x_examples() {
        assert_eq!(op("theta^2 - x").scale_x(&rat(4, 1)).unwrap(), op("theta^2 - 4*x"));
        let a = op("theta^3 - 2*x*(2*theta+1)*(5*theta^2+5*theta+2) + 64*x^2*(theta+1)^3");
        assert_eq!(a.scale_x(&rat(1, 1)).unwrap(), a);
        assert_eq!(
            op("theta^3 + 64*x^2*(theta+1)^3").scale_x(&rat(1, 8)).unwrap(),
            op("theta^3 + x^2*(theta+1)^3")
        );
        assert_eq!(a.scale_x(&rat(0, 1)), Err(ThetaError::ZeroScale));
    }

    #[test]
    fn mirror_rejects_zero_scale() {
        assert_eq!(op("theta - x").mirror_at_infinity(&rat(0, 1)), Err(ThetaError::ZeroScale));
        assert!(ThetaOperator::zero().mirror_at_infinity(&rat(1, 1)).unwrap().is_zero());
    }

    #[test]
    fn apply_examples() {
        // θ² − x kills Σ x^n / n!²
        let mut c = vec![Rational::one()];
        for n in 1..20i64 {
            let prev = c.last().unwrap().clone();
            c.push(prev / Rational::from_integer((n * n).into()));
        }
        assert!(op("theta^2 - x").annihilates(&c, 20));
        let ones = vec![Rational::one(); 5];
        let got = op("theta").apply_to_series(&ones, 5);
        let want: Vec<Rational> = (0..5).map(|k| rat(k, 1)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn normalize_is_canonical() {
        let a = op("-1/2*theta^2 + 3/4*x");
        let n = a.normalize();
        assert_eq!(n, op("2*theta^2 - 3*x"));
        assert_eq!(n.normalize(), n);
        assert!(ThetaOperator::zero().normalize().is_zero());
    }

    #[test]
    fn display_is_flat() {
        let a = op("theta^2 - x*(2*theta+1)");
        assert_eq!(a.to_string(), "theta^2 - 2*x*theta - x");
        assert_eq!(a.to_grouped_string(), "theta^2 - x*(2*theta + 1)");
        assert_eq!(op("1").to_string(), "1");
    }

    #[test]
    fn order_and_degrees() {
        let a = op("theta^3 - 2*x*(2*theta+1) + 64*x^2*(theta+1)^3");
        assert_eq!(a.x_degree(), Some(2));
        assert_eq!(a.order(), Some(3));
        assert!(!a.is_even_in_x());
    }
}
