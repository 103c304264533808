//! wasm-bindgen exports behind `www/index.html`.

use apery_bessel::annihilator::{symmetric_power, BaseEquation};
use apery_bessel::pipeline::{derive_chain, fixtures};
use apery_bessel::sequences::verrill_integers;
use apery_bessel::Rational;
use wasm_bindgen::prelude::*;

const MAX_M: u32 = 10;

fn degree(m: u32) -> Result<(), String> {
    if (1..=MAX_M).contains(&m) {
        Ok(())
    } else {
        Err(format!("m must be in 1..={MAX_M}, got {m}"))
    }
}

fn rational(name: &str, s: &str) -> Result<Rational, String> {
    let r: Rational = s.trim().parse().map_err(|_| format!("{name}: cannot read {s:?} as a rational"))?;
    if r == Rational::from_integer(0.into()) {
        return Err(format!("{name} must be nonzero"));
    }
    Ok(r)
}

/// Annihilator of `K₀(x)^m` (`sqrt = false`) or of `(Σ xⁿ/n!²)^m`.
pub fn annihilator_text(m: u32, sqrt: bool) -> Result<String, String> {
    degree(m)?;
    let base = if sqrt { BaseEquation::SqrtExp } else { BaseEquation::BesselK };
    let op = symmetric_power(base, m as i64).map_err(|e| e.to_string())?;
    Ok(op.to_grouped_string())
}

/// The d-equation for scale `r` moved to infinity with `x → 1/(c x)`,
/// followed by the comparison with the rescaled SQRT operator and any
/// matching fixture.
pub fn mirror_text(m: u32, r: &str, c: &str) -> Result<String, String> {
    degree(m)?;
    let (r, c) = (rational("r", r)?, rational("c", c)?);
    let report = derive_chain(m, &r, &c, 20).map_err(|e| e.to_string())?;
    let mut out = format!("d-equation:  {}\n", report.d_ode.to_grouped_string());
    out += &format!("at infinity: {}\n\n", report.mirror_ode.to_grouped_string());
    for s in &report.matches {
        out += &format!("{} {}\n", if s.matches { "yes" } else { "no " }, s.stage);
    }
    let fixture = fixtures::all().into_iter().find(|f| {
        f.m == m && f.r.as_ref() == Some(&r) && f.c.as_ref() == Some(&c)
    });
    if let Some(f) = fixture {
        let check = f.check().map_err(|e| e.to_string())?;
        let verdict = if check.exact {
            "exact"
        } else if check.errata_confirmed {
            "exact except the known misprint"
        } else {
            "differs"
        };
        out += &format!("\nfixture {}: {verdict}\n", check.name);
        for d in &check.discrepancies {
            out += &format!("  {d}\n");
        }
    }
    Ok(out)
}

/// `A_0 … A_n` of the Verrill sequence, one per line.
pub fn verrill_text(m: u32, n: u32) -> Result<String, String> {
    degree(m)?;
    if n > 500 {
        return Err(format!("n must be at most 500, got {n}"));
    }
    let values = verrill_integers(m, n as usize);
    Ok(values.iter().enumerate().map(|(i, v)| format!("{i}\t{v}\n")).collect())
}

#[wasm_bindgen]
pub fn annihilator(m: u32, sqrt: bool) -> Result<String, JsError> {
    annihilator_text(m, sqrt).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mirror(m: u32, r: &str, c: &str) -> Result<String, JsError> {
    mirror_text(m, r, c).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verrill(m: u32, n: u32) -> Result<String, JsError> {
    verrill_text(m, n).map_err(|e| JsError::new(&e))
}
