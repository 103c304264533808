//! The printed operators and recursions, stored as text and compared term by
//! term against what the derivation chain produces.
//!
//! A fixture file is a block of `key: value` header lines, a `---`
//! separator and the body exactly as printed, one display line per line.
//! `#` starts a comment line. Recognized keys are `name`, `kind`
//! (`operator`, `forward-recurrence`, `backward-recurrence`), `m`, `r`, `c`,
//! `step` and any number of `erratum` lines (see [`Erratum`]).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::annihilator::{symmetric_power, BaseEquation};
use crate::sequences::{gamma_rescale_ode, moment_recurrence, operator_to_recurrence, Recurrence};
use crate::theta::{ThetaOperator, ThetaPoly};
use crate::Rational;

const EMBEDDED: &[(&str, &str)] = &[
    ("moment_rec_m4", include_str!("../../fixtures/moment_rec_m4.txt")),
    ("moment_rec_m5", include_str!("../../fixtures/moment_rec_m5.txt")),
    ("moment_rec_m6", include_str!("../../fixtures/moment_rec_m6.txt")),
    ("d_rec_m4", include_str!("../../fixtures/d_rec_m4.txt")),
    ("d_rec_m5", include_str!("../../fixtures/d_rec_m5.txt")),
    ("d_rec_m6", include_str!("../../fixtures/d_rec_m6.txt")),
    ("ode_m4", include_str!("../../fixtures/ode_m4.txt")),
    ("ode_m5", include_str!("../../fixtures/ode_m5.txt")),
    ("ode_m6", include_str!("../../fixtures/ode_m6.txt")),
    ("ode_m7", include_str!("../../fixtures/ode_m7.txt")),
    ("mirror_m5", include_str!("../../fixtures/mirror_m5.txt")),
    ("mirror_m6", include_str!("../../fixtures/mirror_m6.txt")),
    ("mirror_m7", include_str!("../../fixtures/mirror_m7.txt")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureKind {
    Operator,
    ForwardRecurrence,
    BackwardRecurrence,
}

impl FromStr for FixtureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "operator" => Ok(FixtureKind::Operator),
            "forward-recurrence" => Ok(FixtureKind::ForwardRecurrence),
            "backward-recurrence" => Ok(FixtureKind::BackwardRecurrence),
            other => Err(format!("unknown fixture kind {other:?}")),
        }
    }
}

/// A misprint the fixture knows about, declared in its header as
/// `erratum: missing-sign <line>` or `erratum: term <j> <corrected text>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Erratum {
    MissingSign { line: usize },
    Term { index: u32, corrected: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub id: String,
    pub name: String,
    pub kind: FixtureKind,
    pub m: u32,
    #[serde(with = "crate::serde_util::opt_rational")]
    pub r: Option<Rational>,
    #[serde(with = "crate::serde_util::opt_rational")]
    pub c: Option<Rational>,
    pub step: u32,
    pub errata: Vec<Erratum>,
    /// Body lines as printed.
    pub lines: Vec<String>,
}

/// A parsed fixture body or a derived artifact.
#[derive(Debug, Clone, PartialEq)]
pub enum Printed {
    Operator(ThetaOperator),
    Recurrence(Recurrence),
}

impl Printed {
    /// The coefficient polynomials keyed by x-power or backward shift.
    fn parts(&self) -> BTreeMap<u32, ThetaPoly> {
        match self {
            Printed::Operator(op) => op.terms().map(|(j, p)| (j, p.clone())).collect(),
            Printed::Recurrence(r) => r
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(j, p)| (j as u32, p.clone()))
                .collect(),
        }
    }

    fn term_label(&self, j: u32) -> String {
        match self {
            Printed::Operator(_) => format!("x^{j}"),
            Printed::Recurrence(_) => format!("shift {j}"),
        }
    }

    fn var(&self) -> &'static str {
        match self {
            Printed::Operator(_) => "theta",
            Printed::Recurrence(_) => "n",
        }
    }
}

impl fmt::Display for Printed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Printed::Operator(op) => f.write_str(&op.to_grouped_string()),
            Printed::Recurrence(r) => f.write_str(&r.to_text()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscrepancyKind {
    /// A continuation line starts without `+` or `-`; it was read as `+`.
    MissingSign,
    /// One coefficient differs from the derived one after common scaling.
    TermMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub fixture: String,
    pub kind: DiscrepancyKind,
    /// `x^j` for operators, `shift j` for recurrences.
    pub term: String,
    pub line: Option<usize>,
    pub printed: String,
    pub derived: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DiscrepancyKind::MissingSign => write!(
                f,
                "{}: line {} has no sign before the {} term (read as +): {}",
                self.fixture,
                self.line.unwrap_or(0),
                self.term,
                self.printed
            ),
            DiscrepancyKind::TermMismatch => write!(
                f,
                "{}: {} term printed as {} but derived as {}",
                self.fixture, self.term, self.printed, self.derived
            ),
        }
    }
}

/// Result of comparing one fixture against the derivation.
#[derive(Debug, Clone, Serialize)]
pub struct FixtureCheck {
    pub id: String,
    pub name: String,
    pub printed: String,
    pub derived: String,
    /// Printed text equals the derived artifact up to a constant factor.
    pub exact: bool,
    pub discrepancies: Vec<Discrepancy>,
    /// Every discrepancy is a declared erratum, every erratum was found, and
    /// each corrected term agrees with the derivation.
    pub errata_confirmed: bool,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse().map_err(|_| format!("bad rational {s:?}"))?;
            let q: num_bigint::BigInt = q.trim().parse().map_err(|_| format!("bad rational {s:?}"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(p, q))
        }
        None => s.parse().map(Rational::from_integer).map_err(|_| format!("bad rational {s:?}")),
    }
}

impl Fixture {
    pub fn parse(id: &str, text: &str) -> Result<Fixture, PipelineError> {
        let bad = |msg: String| PipelineError::Fixture { id: id.to_string(), message: msg };
        let mut header = true;
        let mut fields: Vec<(String, String)> = Vec::new();
        let mut lines = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if header {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                if line == "---" {
                    header = false;
                    continue;
                }
                let (k, v) = line.split_once(':').ok_or_else(|| bad(format!("bad header line {line:?}")))?;
                fields.push((k.trim().to_string(), v.trim().to_string()));
            } else if !line.is_empty() && !line.starts_with('#') {
                lines.push(line.trim_end_matches([',', '.']).to_string());
            }
        }
        if header {
            return Err(bad("missing --- separator".into()));
        }
        if lines.is_empty() {
            return Err(bad("empty body".into()));
        }
        let get = |k: &str| fields.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
        let kind: FixtureKind = get("kind").ok_or_else(|| bad("missing kind".into()))?.parse().map_err(bad)?;
        let m = get("m")
            .ok_or_else(|| bad("missing m".into()))?
            .parse()
            .map_err(|_| bad("bad m".into()))?;
        let r = get("r").map(parse_rational).transpose().map_err(bad)?;
        let c = get("c").map(parse_rational).transpose().map_err(bad)?;
        let step = get("step").map(str::parse).transpose().map_err(|_| bad("bad step".into()))?.unwrap_or(1);
        let mut errata = Vec::new();
        for (_, v) in fields.iter().filter(|(k, _)| k == "erratum") {
            let mut it = v.splitn(3, ' ');
            let e = match (it.next(), it.next(), it.next()) {
                (Some("missing-sign"), Some(l), None) => {
                    Erratum::MissingSign { line: l.parse().map_err(|_| bad(format!("bad erratum {v:?}")))? }
                }
                (Some("term"), Some(j), Some(text)) => Erratum::Term {
                    index: j.parse().map_err(|_| bad(format!("bad erratum {v:?}")))?,
                    corrected: text.trim().to_string(),
                },
                _ => return Err(bad(format!("bad erratum {v:?}"))),
            };
            errata.push(e);
        }
        Ok(Fixture {
            id: id.to_string(),
            name: get("name").unwrap_or(id).to_string(),
            kind,
            m,
            r,
            c,
            step,
            errata,
            lines,
        })
    }

    /// Joins the body lines into one expression. Continuation lines without a
    /// leading sign are read as `+` and reported.
    fn body(&self) -> (String, Vec<usize>) {
        let mut out = String::new();
        let mut unsigned = Vec::new();
        for (i, line) in self.lines.iter().enumerate() {
            if i > 0 && !line.starts_with(['+', '-', '=']) {
                unsigned.push(i + 1);
                out.push_str(" + ");
            }
            out.push(' ');
            out.push_str(line);
        }
        (out, unsigned)
    }

    fn read_text(&self, text: &str) -> Result<Printed, PipelineError> {
        // `lhs = rhs` is read as `lhs - (rhs)`
        let text = match text.split_once('=') {
            Some((l, r)) => format!("{l} - ({r})"),
            None => text.to_string(),
        };
        let parsed = match self.kind {
            FixtureKind::Operator => Printed::Operator(text.parse()?),
            FixtureKind::ForwardRecurrence => Printed::Recurrence(Recurrence::parse_forward(&text, self.step)?),
            FixtureKind::BackwardRecurrence => {
                Printed::Recurrence(format!("[step {}] {text}", self.step).parse()?)
            }
        };
        Ok(parsed)
    }

    /// The printed object, with the line numbers that lacked a sign.
    pub fn read(&self) -> Result<(Printed, Vec<usize>), PipelineError> {
        let (text, unsigned) = self.body();
        Ok((self.read_text(&text)?, unsigned))
    }

    /// What the derivation chain produces for this fixture.
    pub fn derive(&self) -> Result<Printed, PipelineError> {
        let t = symmetric_power(BaseEquation::BesselK, self.m as i64)?;
        let need = |v: &Option<Rational>, key: &str| {
            v.clone().ok_or_else(|| PipelineError::Fixture { id: self.id.clone(), message: format!("missing {key}") })
        };
        Ok(match (self.kind, self.step) {
            (FixtureKind::Operator, _) => {
                let d = gamma_rescale_ode(&t, &need(&self.r, "r")?)?;
                match &self.c {
                    Some(c) => Printed::Operator(d.mirror_at_infinity(c)?),
                    None => Printed::Operator(d),
                }
            }
            (_, 2) => Printed::Recurrence(moment_recurrence(&t)?),
            (_, 1) => Printed::Recurrence(operator_to_recurrence(&gamma_rescale_ode(&t, &need(&self.r, "r")?)?)),
            (_, s) => {
                return Err(PipelineError::Fixture { id: self.id.clone(), message: format!("unsupported step {s}") })
            }
        })
    }

    /// Parses a single term (one x-power or shift) written in the fixture's grammar.
    fn read_term(&self, text: &str) -> Result<Printed, PipelineError> {
        self.read_text(text)
    }

    /// Compares the printed body against the derivation.
    pub fn check(&self) -> Result<FixtureCheck, PipelineError> {
        let (printed, unsigned) = self.read()?;
        let derived = self.derive()?;
        let mut discrepancies = Vec::new();
        for &line in &unsigned {
            let term = match self.read_text(&self.lines[line - 1])? {
                Printed::Operator(op) => op.x_valuation().map(|j| format!("x^{j}")).unwrap_or_default(),
                other => other.to_string(),
            };
            discrepancies.push(Discrepancy {
                fixture: self.name.clone(),
                kind: DiscrepancyKind::MissingSign,
                term,
                line: Some(line),
                printed: self.lines[line - 1].clone(),
                derived: String::new(),
            });
        }

        let p = printed.parts();
        let d = derived.parts();
        let scale = common_scale(&p, &d);
        let keys: std::collections::BTreeSet<u32> = p.keys().chain(d.keys()).copied().collect();
        let var = printed.var();
        let mut mismatched = Vec::new();
        for j in keys {
            let pj = p.get(&j).cloned().unwrap_or_default();
            let dj = d.get(&j).cloned().unwrap_or_default().scale(&scale);
            if pj != dj {
                mismatched.push(j);
                discrepancies.push(Discrepancy {
                    fixture: self.name.clone(),
                    kind: DiscrepancyKind::TermMismatch,
                    term: printed.term_label(j),
                    line: None,
                    printed: pj.to_string_in(var),
                    derived: dj.to_string_in(var),
                });
            }
        }
        let exact = mismatched.is_empty();

        let mut confirmed = discrepancies.len() == self.errata.len();
        for e in &self.errata {
            let ok = match e {
                Erratum::MissingSign { line } => unsigned.contains(line),
                Erratum::Term { index, corrected } => {
                    let fixed = self.read_term(corrected)?.parts().remove(index).unwrap_or_default();
                    let want = d.get(index).cloned().unwrap_or_default().scale(&scale);
                    mismatched.contains(index) && fixed == want
                }
            };
            confirmed &= ok;
        }

        Ok(FixtureCheck {
            id: self.id.clone(),
            name: self.name.clone(),
            printed: self.lines.join(" "),
            derived: derived.to_string(),
            exact,
            discrepancies,
            errata_confirmed: confirmed,
        })
    }
}

/// The factor taking the derived coefficients onto the printed ones, read off
/// the leading coefficient of the lowest common term.
fn common_scale(printed: &BTreeMap<u32, ThetaPoly>, derived: &BTreeMap<u32, ThetaPoly>) -> Rational {
    for (j, p) in printed {
        if let (Some(a), Some(b)) = (p.leading(), derived.get(j).and_then(|d| d.leading())) {
            if p.degree() == derived[j].degree() {
                return a / b;
            }
        }
    }
    Rational::one()
}

/// All fixtures shipped with the crate.
pub fn all() -> Vec<Fixture> {
    EMBEDDED
        .iter()
        .map(|(id, text)| Fixture::parse(id, text).expect("embedded fixtures are well formed"))
        .collect()
}

/// The embedded fixture with the given id.
pub fn get(id: &str) -> Option<Fixture> {
    EMBEDDED.iter().find(|(i, _)| *i == id).map(|(id, text)| Fixture::parse(id, text).expect("embedded fixture"))
}

/// Checks every embedded fixture.
pub fn check_all() -> Result<Vec<FixtureCheck>, PipelineError> {
    all().iter().map(Fixture::check).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_body() {
        let f = Fixture::parse("t", "# c\nname: demo\nkind: operator\nm: 4\nr: 4\n---\ntheta^3\n-x,\n").unwrap();
        assert_eq!(f.name, "demo");
        assert_eq!(f.lines, vec!["theta^3", "-x"]);
        assert_eq!(f.r, Some(Rational::from_integer(4.into())));
    }

    #[test]
    fn unsigned_continuation_is_flagged() {
        let f = Fixture::parse("t", "kind: operator\nm: 1\n---\ntheta^2\nx\n").unwrap();
        let (p, unsigned) = f.read().unwrap();
        assert_eq!(unsigned, vec![2]);
        assert_eq!(p, Printed::Operator("theta^2 + x".parse().unwrap()));
    }

    #[test]
    fn equals_sign_moves_rhs_over() {
        let f = Fixture::parse("t", "kind: backward-recurrence\nm: 1\n---\nn = N\n").unwrap();
        let (p, _) = f.read().unwrap();
        assert_eq!(p, Printed::Recurrence("n - N".parse().unwrap()));
    }

    #[test]
    fn malformed_headers_fail() {
        assert!(Fixture::parse("t", "kind: operator\n").is_err());
        assert!(Fixture::parse("t", "kind: nope\nm: 1\n---\nx\n").is_err());
        assert!(Fixture::parse("t", "kind: operator\nm: 1\nerratum: what\n---\nx\n").is_err());
    }
}
