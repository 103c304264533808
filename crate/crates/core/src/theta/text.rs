//! Text grammar shared by operators, recurrences and the fixture files.
//!
//! Canonical output is a flat sum of `c*x^j*theta^i` terms, but the parser
//! accepts the general expression language the equations are printed in:
//! `+ - * / ^`, parentheses, implicit multiplication (`2x(theta+1)^2`) and
//! rational constants. Products are evaluated in the target algebra, so for
//! operators `theta*x` means the composition `x*(theta+1)`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{ThetaOperator, ThetaPoly};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

/// A ring the parser can evaluate into.
pub(crate) trait Algebra: Sized + Clone {
    fn constant(c: Rational) -> Self;
    /// The polynomial variable (`theta`, `n`, `k`).
    fn variable() -> Self;
    /// The shift or multiplication marker (`x`, `N`, `S`).
    fn marker() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn as_constant(&self) -> Option<Rational>;
}

pub(crate) struct Vocabulary {
    pub variables: &'static [&'static str],
    pub markers: &'static [&'static str],
}

pub(crate) const OPERATOR_WORDS: Vocabulary =
    Vocabulary { variables: &["theta", "θ"], markers: &["x"] };

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        match ch {
            c if c.is_whitespace() => {
                it.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&(_, d)) = it.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Num(digits.parse().expect("ascii digits"))));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&(_, d)) = it.peek() {
                    if d.is_alphabetic() || d == '_' {
                        word.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Ident(word)));
            }
            _ => {
                let tok = match ch {
                    '+' => Tok::Plus,
                    '-' | '−' => Tok::Minus,
                    '*' | '·' | '×' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => return Err(ParseError::new(pos, format!("unexpected character {other:?}"))),
                };
                out.push((pos, tok));
                it.next();
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    words: &'a Vocabulary,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                self.term::<A>()?.neg()
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.add(&self.term::<A>()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let mut acc: A = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let pos = self.pos();
                    let d: A = self.power()?;
                    let c = d
                        .as_constant()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| ParseError::new(pos, "division only by a nonzero constant"))?;
                    acc = acc.mul(&A::constant(c.recip()));
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let base = self.primary::<A>()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let e = match self.bump() {
            Some(Tok::Num(n)) => u32::try_from(n).map_err(|_| ParseError::new(pos, "exponent too large"))?,
            _ => return Err(ParseError::new(pos, "expected a non-negative integer exponent")),
        };
        let mut acc = A::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn primary<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(A::constant(Rational::from_integer(n))),
            Some(Tok::Ident(w)) => {
                if self.words.variables.contains(&w.as_str()) {
                    Ok(A::variable())
                } else if self.words.markers.contains(&w.as_str()) {
                    Ok(A::marker())
                } else {
                    Err(ParseError::new(pos, format!("unknown symbol {w:?}")))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::new(self.pos(), "expected ')'")),
                }
            }
            Some(t) => Err(ParseError::new(pos, format!("unexpected token {t:?}"))),
            None => Err(ParseError::new(pos, "unexpected end of input")),
        }
    }
}

pub(crate) fn parse_with<A: Algebra>(s: &str, words: &Vocabulary) -> Result<A, ParseError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let mut p = Parser { toks, at: 0, end: s.len(), words };
    let v = p.expr()?;
    if p.at < p.toks.len() {
        return Err(ParseError::new(p.pos(), "trailing input"));
    }
    Ok(v)
}

/// `P_0 + m*(P_1) + m^2*(P_2) + ...` with `var` as the polynomial variable
/// and `marker` as `m`. A negative leading coefficient is pulled out front.
pub(crate) fn grouped<'a>(terms: impl Iterator<Item = (u32, &'a ThetaPoly)>, var: &str, marker: &str) -> String {
    let mut out = String::new();
    for (j, p) in terms {
        if p.is_zero() {
            continue;
        }
        let neg = p.leading().is_some_and(|l| l.is_negative());
        let body = if neg { (-p).to_string_in(var) } else { p.to_string_in(var) };
        let single = p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        let mpart = match j {
            0 => String::new(),
            1 => marker.to_string(),
            _ => format!("{marker}^{j}"),
        };
        let piece = if mpart.is_empty() {
            if neg && !single {
                format!("({body})")
            } else {
                body
            }
        } else if single && p.degree() == Some(0) {
            if body == "1" {
                mpart
            } else {
                format!("{body}*{mpart}")
            }
        } else if single {
            format!("{mpart}*{body}")
        } else {
            format!("{mpart}*({body})")
        };
        out.push_str(match (out.is_empty(), neg) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        });
        out.push_str(&piece);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Algebra for ThetaOperator {
    fn constant(c: Rational) -> Self {
        ThetaOperator::constant(c)
    }

    fn variable() -> Self {
        ThetaOperator::theta()
    }

    fn marker() -> Self {
        ThetaOperator::x_pow(1)
    }

    fn add(&self, other: &Self) -> Self {
        ThetaOperator::add(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        self.compose(other)
    }

    fn neg(&self) -> Self {
        ThetaOperator::neg(self)
    }

    fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        match (self.x_degree(), self.order()) {
            (Some(0), Some(0)) => Some(self.coeff(0).coeff(0)),
            _ => None,
        }
    }
}

impl Algebra for ThetaPoly {
    fn constant(c: Rational) -> Self {
        ThetaPoly::constant(c)
    }

    fn variable() -> Self {
        ThetaPoly::theta()
    }

    fn marker() -> Self {
        // polynomials have no marker; the vocabulary never maps one here
        unreachable!("ThetaPoly vocabulary has no marker")
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn as_constant(&self) -> Option<Rational> {
        match self.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.coeff(0)),
            _ => None,
        }
    }
}

impl FromStr for ThetaOperator {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_with(s, &OPERATOR_WORDS)
    }
}

/// Parse a univariate polynomial in the given variable names.
pub fn parse_poly(s: &str, variables: &'static [&'static str]) -> Result<ThetaPoly, ParseError> {
    parse_with(s, &Vocabulary { variables, markers: &[] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use proptest::prelude::*;

    #[test]
    fn implicit_products_and_rationals() {
        let a: ThetaOperator = "2x(θ+1)^2 - 3/4".parse().unwrap();
        let b: ThetaOperator = "2*x*theta^2 + 4*x*theta + 2*x - 3/4".parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn composition_order_matters() {
        let a: ThetaOperator = "theta*x".parse().unwrap();
        let b: ThetaOperator = "x*(theta+1)".parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        let e = "theta + y".parse::<ThetaOperator>().unwrap_err();
        assert_eq!(e.position, 8);
        assert!("theta / x".parse::<ThetaOperator>().is_err());
        assert!("theta + ".parse::<ThetaOperator>().is_err());
        assert!("(theta".parse::<ThetaOperator>().is_err());
        assert!("".parse::<ThetaOperator>().is_err());
    }

    #[test]
    fn poly_in_other_variable() {
        let p = parse_poly("(k+1)^2", &["k"]).unwrap();
        assert_eq!(p, ThetaPoly::from_ints(&[1, 2, 1]));
        assert_eq!(p.eval(&rat(2, 1)), rat(9, 1));
    }

    fn arb_operator() -> impl Strategy<Value = ThetaOperator> {
        prop::collection::vec((0u32..4, prop::collection::vec((-50i64..50, 1i64..6), 0..4)), 0..4)
            .prop_map(|terms| {
                ThetaOperator::from_terms(terms.into_iter().map(|(j, cs)| {
                    (j, ThetaPoly::from_coeffs(cs.into_iter().map(|(p, q)| rat(p, q)).collect()))
                }))
            })
    }

    proptest! {
        #[test]
        fn flat_text_round_trips(a in arb_operator()) {
            let back: ThetaOperator = a.to_string().parse().unwrap();
            prop_assert_eq!(&back, &a);
            let grouped: ThetaOperator = a.to_grouped_string().parse().unwrap();
            prop_assert_eq!(grouped, a);
        }
    }
}
