use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Recurrence, SequenceError};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Solved,
    Convolution,
    ClosedForm,
}

/// Exact sequence values `v_0, v_1, …` and where they came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceTable {
    #[serde(with = "crate::serde_util::rationals")]
    pub values: Vec<Rational>,
    pub provenance: Provenance,
}

impl SequenceTable {
    pub fn new(values: Vec<Rational>, provenance: Provenance) -> Self {
        SequenceTable { values, provenance }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.values.get(n)
    }

    /// One `n<TAB>p/q` line per entry.
    pub fn to_tab(&self) -> String {
        let mut out = String::new();
        for (n, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{n}\t{v}");
        }
        out
    }

    pub fn from_tab(s: &str, provenance: Provenance) -> Result<Self, SequenceError> {
        let mut values = Vec::new();
        for (line_no, line) in s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = || SequenceError::BadTable(line_no + 1);
            let (n, v) = line.split_once('\t').ok_or_else(bad)?;
            if n.trim().parse::<usize>().map_err(|_| bad())? != values.len() {
                return Err(bad());
            }
            values.push(v.trim().parse().map_err(|_| bad())?);
        }
        Ok(SequenceTable { values, provenance })
    }

    /// The JSON array of exact strings.
    pub fn to_json_array(&self) -> String {
        let strings: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        serde_json::to_string(&strings).expect("strings serialize")
    }
}

/// Forward solution of a step-1 recurrence from `init` up to index `n_max`.
pub fn solve_series(r: &Recurrence, init: &[Rational], n_max: usize) -> Result<SequenceTable, SequenceError> {
    if r.step() != 1 {
        return Err(SequenceError::InvalidStep(r.step()));
    }
    if init.len() < r.order() {
        return Err(SequenceError::InitTooShort { need: r.order(), got: init.len() });
    }
    let mut values: Vec<Rational> = init.iter().take(n_max + 1).cloned().collect();
    for n in values.len()..=n_max {
        let lead = r.coeff(0).eval_int(n as i64);
        if lead.is_zero() {
            return Err(SequenceError::SingularLeadingCoefficient(n));
        }
        let mut acc = Rational::zero();
        for (j, c) in r.coeffs().iter().enumerate().skip(1) {
            if j > n {
                break;
            }
            acc += c.eval_int(n as i64) * &values[n - j];
        }
        values.push(-acc / lead);
    }
    Ok(SequenceTable::new(values, Provenance::Solved))
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * (n - k) / (k + 1);
        row.push(next);
    }
    row
}

/// `A_n^{(m)} = Σ_{i₁+…+i_m=n} (n!/(i₁!…i_m!))²` for `n ≤ n_max`, as exact integers.
///
/// Uses `A^{(m)}_n = Σ_i C(n,i)²·A^{(m−1)}_{n−i}`, the integer form of the
/// m-fold convolution of `1/n!²`.
pub fn verrill_integers(m: u32, n_max: usize) -> Vec<BigInt> {
    let rows: Vec<Vec<BigInt>> = (0..=n_max).map(binomial_row).collect();
    let mut cur: Vec<BigInt> = (0..=n_max).map(|n| if n == 0 { BigInt::one() } else { BigInt::zero() }).collect();
    for _ in 0..m {
        cur = (0..=n_max)
            .map(|n| (0..=n).map(|i| &rows[n][i] * &rows[n][i] * &cur[n - i]).sum())
            .collect();
    }
    cur
}

pub fn verrill_coefficients(m: u32, n_max: usize) -> Result<SequenceTable, SequenceError> {
    if m < 1 {
        return Err(SequenceError::InvalidPower(m));
    }
    let values = verrill_integers(m, n_max).into_iter().map(Rational::from_integer).collect();
    Ok(SequenceTable::new(values, Provenance::Convolution))
}

/// `a_n^{(m)} = A_n^{(m)}/n!²`, the coefficients of `(Σ xⁿ/n!²)^m`.
pub fn convolution_series(m: u32, n_max: usize) -> Vec<Rational> {
    let mut fact = BigInt::one();
    verrill_integers(m, n_max)
        .into_iter()
        .enumerate()
        .map(|(n, a)| {
            if n > 0 {
                fact *= n;
            }
            Rational::new(a, &fact * &fact)
        })
        .collect()
}
