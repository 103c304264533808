use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::SequenceError;
use crate::theta::{grouped, parse_with, poly_from_strings, poly_to_strings, Algebra, ParseError, ThetaPoly, Vocabulary};
use crate::Rational;

/// `Σ_j c_j(n)·d_{n − j·step} = 0`.
///
/// Stored in backward form: `c_0` multiplies the highest index. The
/// coefficient list is trimmed so that `c_0` and `c_order` are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    step: u32,
    coeffs: Vec<ThetaPoly>,
}

impl Recurrence {
    /// Builds a recurrence, dropping leading and trailing zero coefficients.
    ///
    /// Leading zeros are absorbed by re-indexing: if `c_0 = … = c_{v−1} = 0`
    /// the relation is rewritten around `n + v·step`.
    pub fn new(step: u32, coeffs: Vec<ThetaPoly>) -> Result<Self, SequenceError> {
        if step == 0 {
            return Err(SequenceError::InvalidStep(step));
        }
        let v = match coeffs.iter().position(|c| !c.is_zero()) {
            Some(v) => v,
            None => return Ok(Recurrence { step, coeffs: Vec::new() }),
        };
        let shift = (v as i64) * step as i64;
        let mut coeffs: Vec<ThetaPoly> = coeffs[v..].iter().map(|c| c.shift_int(shift)).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(Recurrence { step, coeffs })
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn coeffs(&self) -> &[ThetaPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> ThetaPoly {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of backward shifts spanned.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Integer coefficients with content 1 and `c_0` having a positive leading coefficient.
    pub fn normalize(&self) -> Recurrence {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
        let scaled: Vec<ThetaPoly> = self.coeffs.iter().map(|c| c.scale(&Rational::from_integer(den.clone()))).collect();
        let content = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(&c.numerator_gcd()));
        let mut factor = Rational::new(BigInt::one(), content);
        if scaled[0].leading().is_some_and(|l| l.is_negative()) {
            factor = -factor;
        }
        Recurrence { step: self.step, coeffs: scaled.iter().map(|c| c.scale(&factor)).collect() }
    }

    /// Divides out the polynomial gcd of all coefficients, then normalizes.
    pub fn primitive_part(&self) -> Recurrence {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.coeffs.iter().fold(ThetaPoly::zero(), |acc, c| acc.gcd(c));
        let coeffs = self.coeffs.iter().map(|c| c.div_rem(&g).0).collect();
        Recurrence { step: self.step, coeffs }.normalize()
    }

    /// Multiplies every coefficient by `f(n)`.
    pub fn mul_poly(&self, f: &ThetaPoly) -> Recurrence {
        Recurrence { step: self.step, coeffs: self.coeffs.iter().map(|c| c * f).collect() }
    }

    /// Restriction to the indices `n ≡ parity (mod step)`, as a step-1
    /// recurrence for `e_n = d_{step·n + parity}`.
    pub fn sublattice(&self, parity: u32) -> Result<Recurrence, SequenceError> {
        if parity >= self.step {
            return Err(SequenceError::InvalidParity { parity, step: self.step });
        }
        let s = Rational::from_integer(self.step.into());
        let r = Rational::from_integer(parity.into());
        let coeffs = self.coeffs.iter().map(|c| c.substitute_affine(&s, &r)).collect();
        Ok(Recurrence { step: 1, coeffs })
    }

    /// `Σ_j c_j(n)·values[n − j·step]`, with out-of-range entries read as 0.
    pub fn residual(&self, values: &[Rational], n: usize) -> Rational {
        let mut acc = Rational::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let back = j * self.step as usize;
            if back > n {
                break;
            }
            if let Some(v) = values.get(n - back) {
                acc += c.eval_int(n as i64) * v;
            }
        }
        acc
    }

    /// True when the relation holds at every `n` in `from..values.len()`.
    pub fn holds_on(&self, values: &[Rational], from: usize) -> bool {
        (from..values.len()).all(|n| self.residual(values, n).is_zero())
    }

    /// The same relation written forward around the lowest index,
    /// `Σ_e f_e(n)·d_{n+e}`, returned as pairs `(e, f_e)`.
    pub fn forward_terms(&self) -> Vec<(u32, ThetaPoly)> {
        let span = (self.order() as u32) * self.step;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (span - i as u32 * self.step, c.shift_int(span as i64)))
            .rev()
            .collect()
    }

    /// Forward text in the variable `var` with shift marker `S`, as the
    /// relations are usually printed: `64*(k + 3)*S^4 - … + (k + 1)^5`.
    pub fn to_forward_string(&self, var: &str) -> String {
        let terms = self.forward_terms();
        let mut rev: Vec<(u32, &ThetaPoly)> = terms.iter().map(|(e, p)| (*e, p)).collect();
        rev.reverse();
        grouped(rev.into_iter(), var, "S")
    }

    /// Parses the forward form `Σ f_e(var)·S^e` (`S^e` meaning `d_{n+e}`).
    pub fn parse_forward(s: &str, step: u32) -> Result<Recurrence, SequenceError> {
        let sp: ShiftPoly = parse_with(s, &FORWARD_WORDS)?;
        let top = match sp.terms.keys().next_back() {
            Some(&t) => t,
            None => return Recurrence::new(step, Vec::new()),
        };
        let mut coeffs = vec![ThetaPoly::zero(); top as usize / step as usize + 1];
        for (&e, p) in &sp.terms {
            if (top - e) % step != 0 {
                return Err(SequenceError::InvalidStep(step));
            }
            coeffs[((top - e) / step) as usize] = p.shift_int(-(top as i64));
        }
        Recurrence::new(step, coeffs)
    }

    /// Backward text: `c_0(n) + N*(c_1(n)) + N^2*(…)`, prefixed with
    /// `[step s] ` when `s ≠ 1`.
    pub fn to_text(&self) -> String {
        let body = grouped(self.coeffs.iter().enumerate().map(|(j, p)| (j as u32, p)), "n", "N");
        if self.step == 1 {
            body
        } else {
            format!("[step {}] {body}", self.step)
        }
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Recurrence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim_start();
        let (step, body) = match t.strip_prefix("[step") {
            Some(rest) => {
                let close = rest.find(']').ok_or(ParseError { position: 0, message: "unclosed [step".into() })?;
                let step: u32 = rest[..close]
                    .trim()
                    .parse()
                    .map_err(|_| ParseError { position: 0, message: "bad step".into() })?;
                (step, &rest[close + 1..])
            }
            None => (1, t),
        };
        let sp: ShiftPoly = parse_with(body, &BACKWARD_WORDS)?;
        let top = sp.terms.keys().next_back().copied().unwrap_or(0);
        let coeffs = (0..=top).map(|j| sp.terms.get(&j).cloned().unwrap_or_default()).collect();
        Recurrence::new(step, coeffs)
    }
}

const BACKWARD_WORDS: Vocabulary = Vocabulary { variables: &["n", "k"], markers: &["N"] };
const FORWARD_WORDS: Vocabulary = Vocabulary { variables: &["n", "k"], markers: &["S"] };

/// Commutative polynomials in the index variable and one shift marker; only
/// used as a parse target.
#[derive(Clone, Debug, Default)]
struct ShiftPoly {
    terms: BTreeMap<u32, ThetaPoly>,
}

impl ShiftPoly {
    fn single(e: u32, p: ThetaPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(e, p);
        }
        ShiftPoly { terms }
    }
}

impl Algebra for ShiftPoly {
    fn constant(c: Rational) -> Self {
        ShiftPoly::single(0, ThetaPoly::constant(c))
    }

    fn variable() -> Self {
        ShiftPoly::single(0, ThetaPoly::theta())
    }

    fn marker() -> Self {
        ShiftPoly::single(1, ThetaPoly::one())
    }

    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&e, p) in &other.terms {
            let sum = &terms.get(&e).cloned().unwrap_or_default() + p;
            if sum.is_zero() {
                terms.remove(&e);
            } else {
                terms.insert(e, sum);
            }
        }
        ShiftPoly { terms }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut acc = ShiftPoly::default();
        for (&a, p) in &self.terms {
            for (&b, q) in &other.terms {
                acc = acc.add(&ShiftPoly::single(a + b, p * q));
            }
        }
        acc
    }

    fn neg(&self) -> Self {
        ShiftPoly { terms: self.terms.iter().map(|(&e, p)| (e, -p)).collect() }
    }

    fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => match self.terms.get(&0) {
                Some(p) if p.degree() == Some(0) => Some(p.coeff(0)),
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RecurrenceJson {
    step: u32,
    coeffs: Vec<Vec<String>>,
}

impl Serialize for Recurrence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RecurrenceJson { step: self.step, coeffs: self.coeffs.iter().map(poly_to_strings).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Recurrence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = RecurrenceJson::deserialize(d)?;
        let coeffs = v
            .coeffs
            .iter()
            .map(|c| poly_from_strings(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Recurrence::new(v.step, coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ThetaPoly {
        ThetaPoly::from_ints(c)
    }

    #[test]
    fn text_round_trip() {
        let r = Recurrence::new(1, vec![p(&[0, 0, 1]), p(&[-1])]).unwrap();
        assert_eq!(r.to_text(), "n^2 - N");
        assert_eq!(r.to_text().parse::<Recurrence>().unwrap(), r);
        let s = Recurrence::new(2, vec![p(&[1, 1]), p(&[0, -3])]).unwrap();
        assert_eq!(s.to_text(), "[step 2] n + 1 - N*3*n");
        assert_eq!(s.to_text().parse::<Recurrence>().unwrap(), s);
    }

    #[test]
    fn forward_form() {
        // 64(k+3)c_{k+4} − 4(k+2)(5k²+20k+23)c_{k+2} + (k+1)⁵c_k
        let r = Recurrence::parse_forward("64(k+3)S^4 - 4(k+2)(5k^2+20k+23)S^2 + (k+1)^5", 2).unwrap();
        assert_eq!(r.step(), 2);
        assert_eq!(r.order(), 2);
        assert_eq!(r.coeff(0), p(&[-64, 64]));
        let back = Recurrence::parse_forward(&r.to_forward_string("k"), 2).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn leading_zeros_reindex() {
        // 0·d_n + d_{n−1} − n·d_{n−2} is d_n − (n+1)·d_{n−1} around n+1
        let r = Recurrence::new(1, vec![ThetaPoly::zero(), p(&[1]), p(&[0, -1])]).unwrap();
        assert_eq!(r.coeffs(), &[p(&[1]), p(&[-1, -1])]);
    }

    #[test]
    fn sublattice_and_residual() {
        let r = Recurrence::new(2, vec![p(&[0, 1]), p(&[-2])]).unwrap();
        let odd = r.sublattice(1).unwrap();
        assert_eq!(odd.coeffs(), &[p(&[1, 2]), p(&[-2])]);
        assert!(r.sublattice(2).is_err());
        let vals = vec![Rational::one(), Rational::from_integer(2.into())];
        assert_eq!(odd.residual(&vals, 1), Rational::from_integer(4.into()));
    }

    #[test]
    fn json_round_trip() {
        let r = Recurrence::new(2, vec![p(&[1, 1]), p(&[0, -3])]).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"step":2,"coeffs":[["1","1"],["0","-3"]]}"#);
        assert_eq!(serde_json::from_str::<Recurrence>(&s).unwrap(), r);
    }
}
