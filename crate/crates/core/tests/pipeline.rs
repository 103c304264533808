use apery_bessel::annihilator::{symmetric_power, BaseEquation};
use apery_bessel::numerics::{bits_for, BigReal, Float, MomentIntegrator, QuadratureSpec};
use apery_bessel::pipeline::{
    bessel_fan_check, check_fixtures, derive_chain, fixtures, main_theorem_check, DiscrepancyKind, Verdict,
};
use apery_bessel::sequences::{apery_limit, gamma_rescale_ode, operator_to_recurrence};
use apery_bessel::{rat, Rational};
use std::cmp::Ordering;

#[test]
fn fixture_discrepancies_are_exactly_the_two_misprints() {
    let checks = check_fixtures().unwrap();
    assert_eq!(checks.len(), fixtures::all().len());
    let found: Vec<_> = checks.iter().flat_map(|c| c.discrepancies.iter()).collect();
    assert_eq!(found.len(), 2, "{found:#?}");
    assert!(found.iter().any(|d| d.fixture == "Verrill #130" && d.kind == DiscrepancyKind::TermMismatch && d.term == "x^3"));
    assert!(found.iter().any(|d| d.fixture == "mirror m=7" && d.kind == DiscrepancyKind::MissingSign && d.line == Some(2)));
    for c in &checks {
        assert!(c.errata_confirmed, "{}", c.id);
        // a missing sign read as `+` still leaves the coefficients exact
        let mismatch = c.discrepancies.iter().any(|d| d.kind == DiscrepancyKind::TermMismatch);
        assert_eq!(c.exact, !mismatch, "{}", c.id);
    }
}

#[test]
fn fixtures_round_trip_through_json() {
    for f in fixtures::all() {
        let text = serde_json::to_string(&f).unwrap();
        let back: fixtures::Fixture = serde_json::from_str(&text).unwrap();
        assert_eq!(back.id, f.id);
        assert_eq!(back.lines, f.lines);
        assert_eq!(back.c, f.c);
    }
}

#[test]
fn a_corrupted_fixture_is_reported() {
    let good = fixtures::get("ode_m4").unwrap();
    let mut text = format!("name: {}\nkind: operator\nm: 4\nr: 4\n---\n", good.name);
    for line in &good.lines {
        text += &line.replacen("64", "65", 1);
        text.push('\n');
    }
    let bad = fixtures::Fixture::parse("ode_m4_bad", &text).unwrap();
    let check = bad.check().unwrap();
    assert!(!check.exact);
    assert_eq!(check.discrepancies.len(), 1, "{:#?}", check.discrepancies);
}

#[test]
fn main_theorem_three_to_seven() {
    for m in 3..=7 {
        let r = main_theorem_check(m, 30).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.to_text().contains("equals rescaled S_m"));
    }
}

#[test]
fn other_scale_pairs_with_c_equal_to_4r2() {
    for (r, c) in [(rat(15, 1), rat(900, 1)), (rat(2, 1), rat(16, 1)), (rat(3, 4), rat(9, 4))] {
        let report = derive_chain(5, &r, &c, 20).unwrap();
        assert!(report.passed(), "r = {r}: {}", report.to_text());
    }
    let off = derive_chain(5, &rat(2, 1), &rat(4, 1), 20).unwrap();
    assert!(!off.passed());
}

#[test]
fn fan_series_through_m6() {
    for m in 1..=6 {
        let f = bessel_fan_check(m, 30, None).unwrap();
        assert!(f.annihilated && f.passed(), "{}", f.to_text());
        assert!(f.equals_t_m, "m = {m}");
    }
}

#[test]
fn reports_serialize_deterministically() {
    let a = serde_json::to_string(&main_theorem_check(5, 20).unwrap()).unwrap();
    let b = serde_json::to_string(&main_theorem_check(5, 20).unwrap()).unwrap();
    assert_eq!(a, b);
    let f = serde_json::to_string(&bessel_fan_check(3, 20, None).unwrap()).unwrap();
    assert_eq!(f, serde_json::to_string(&bessel_fan_check(3, 20, None).unwrap()).unwrap());
    let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed["m"], 5);
}

#[test]
fn bad_degrees_are_rejected() {
    assert!(main_theorem_check(2, 10).is_err());
    assert!(bessel_fan_check(0, 10, None).is_err());
}

#[test]
fn m5_limits_satisfy_the_moment_relation() {
    // s + 225t·(B/A) + (6750 − 4500s + 64125t)·(C/A) = 0 with s = c_{5,1}, t = c_{5,3}
    let prec = 40;
    let bits = bits_for(prec);
    let t5 = symmetric_power(BaseEquation::BesselK, 5).unwrap();
    let rec = operator_to_recurrence(&gamma_rescale_ode(&t5, &rat(15, 1)).unwrap());
    let unit = |i: usize| -> Vec<Rational> { (0..3).map(|j| rat((i == j) as i64, 1)).collect() };
    let b = apery_limit(&rec, &unit(0), &unit(1), 250, prec).unwrap();
    let c = apery_limit(&rec, &unit(0), &unit(2), 250, prec).unwrap();

    let integrator = MomentIntegrator::new(prec, QuadratureSpec::default());
    let s = integrator.moment(5, 1).unwrap();
    let t = integrator.moment(5, 3).unwrap();
    let coef: BigReal = BigReal::from_rational(&rat(6750, 1), prec)
        .sub(&s.scale(&rat(4500, 1)))
        .add(&t.scale(&rat(64125, 1)));
    let total = s.add(&t.scale(&rat(225, 1)).mul(&b)).add(&coef.mul(&c));
    let tol = Float::from_rational(&Rational::new(1.into(), num_bigint::BigInt::from(10).pow(20)), bits);
    assert_eq!(total.value().cmp_abs(&tol), Ordering::Less, "{}", total.to_decimal());
}
