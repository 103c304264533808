use serde::{Deserialize, Serialize};

use super::{ThetaError, ThetaOperator, ThetaPoly};
use crate::Rational;

/// `{"terms": [{"j": J, "poly": ["p/q", ...]}]}`, poly index = θ-power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub j: u32,
    pub poly: Vec<String>,
}

pub(crate) fn poly_to_strings(p: &ThetaPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

pub(crate) fn poly_from_strings(v: &[String]) -> Result<ThetaPoly, ThetaError> {
    let coeffs = v
        .iter()
        .map(|s| {
            s.trim()
                .parse::<Rational>()
                .map_err(|_| ThetaError::Json(format!("bad rational {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ThetaPoly::from_coeffs(coeffs))
}

impl From<ThetaOperator> for OperatorJson {
    fn from(a: ThetaOperator) -> Self {
        OperatorJson {
            terms: a.terms().map(|(j, p)| TermJson { j, poly: poly_to_strings(p) }).collect(),
        }
    }
}

impl TryFrom<OperatorJson> for ThetaOperator {
    type Error = ThetaError;

    fn try_from(v: OperatorJson) -> Result<Self, Self::Error> {
        let mut terms = Vec::with_capacity(v.terms.len());
        for t in &v.terms {
            terms.push((t.j, poly_from_strings(&t.poly)?));
        }
        Ok(ThetaOperator::from_terms(terms))
    }
}

impl Serialize for ThetaOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OperatorJson::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThetaOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = OperatorJson::deserialize(d)?;
        ThetaOperator::try_from(v).map_err(serde::de::Error::custom)
    }
}
