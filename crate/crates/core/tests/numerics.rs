use apery_bessel::numerics::{
    bessel_K0, bessel_k0_with, bessel_moment, bits_for, pi, verify_moment_recurrence, zeta3, BigReal, Float,
    MomentIntegrator, QuadratureSpec,
};
use apery_bessel::{rat, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;

const EULER_GAMMA: &str = "0.5772156649015328606065120900824024310421593359399235988057672348848677";

fn decimal(s: &str) -> Rational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let num: BigInt = format!("{int}{frac}").parse().unwrap();
    Rational::new(num, BigInt::from(10).pow(frac.len() as u32))
}

fn real(r: &Rational, prec: u32) -> BigReal {
    BigReal::from_rational(r, prec)
}

fn below(v: &Float, digits: u32, bits: u64) -> bool {
    v.cmp_abs(&apery_bessel::numerics::ten_pow_neg(digits, bits)) == Ordering::Less
}

/// `K₀(x) = −(ln(x/2) + γ)·I₀(x) + Σ_{k≥1} H_k (x²/4)^k / k!²`, summed exactly.
fn k0_series(x: &Rational, prec: u32) -> Float {
    let bits = bits_for(prec) + 32;
    let q = x * x / rat(4, 1);
    let cutoff = Rational::new(BigInt::one(), BigInt::from(10).pow(prec + 20));
    let (mut i0, mut tail) = (Rational::one(), Rational::zero());
    let (mut term, mut harmonic) = (Rational::one(), Rational::zero());
    let mut k = 1i64;
    loop {
        term = term * &q / rat(k * k, 1);
        harmonic += rat(1, k);
        i0 += &term;
        tail += &term * &harmonic;
        if term < cutoff {
            break;
        }
        k += 1;
    }
    let gamma = Float::from_rational(&decimal(EULER_GAMMA), bits);
    let log = Float::from_rational(&(x / rat(2, 1)), bits).ln(bits);
    let i0 = Float::from_rational(&i0, bits);
    Float::from_rational(&tail, bits).sub(&log.add(&gamma, bits).mul(&i0, bits), bits)
}

#[test]
fn k0_matches_log_series() {
    let prec = 40;
    for x in [rat(1, 2), rat(1, 1), rat(2, 1), rat(5, 1)] {
        let q = bessel_K0(&real(&x, prec), prec).unwrap();
        let want = k0_series(&x, prec);
        let diff = q.value().sub(&want, bits_for(prec) + 32);
        assert!(below(&diff, prec - 3, bits_for(prec)), "x = {x}: {} vs {}", q.to_decimal(), want.to_decimal(45));
    }
}

#[test]
fn k0_reference_value() {
    let want = decimal("0.4210244382407083333356273792126090361362197482266604722989695514552127");
    let got = bessel_K0(&real(&rat(1, 1), 60), 60).unwrap();
    assert!(got.agrees_with(&real(&want, 60), 57), "{}", got.to_decimal());
}

#[test]
fn k0_large_argument_and_monotone() {
    let k10 = bessel_K0(&real(&rat(10, 1), 20), 20).unwrap().to_f64();
    let scaled = k10 * 10f64.exp() * 10f64.sqrt();
    let limit = (std::f64::consts::PI / 2.0).sqrt();
    assert!((scaled / limit - 1.0).abs() < 0.02, "{scaled}");
    let v: Vec<f64> = (1..=3).map(|x| bessel_K0(&real(&rat(x, 1), 20), 20).unwrap().to_f64()).collect();
    assert!(v[0] > v[1] && v[1] > v[2]);
    assert!(bessel_K0(&real(&rat(0, 1), 20), 20).is_err());
}

#[test]
fn zeta3_against_alternating_series() {
    // Σ (−1)^n (205n² + 250n + 77)·n!^10 / (64·(2n+1)!^5)
    let fact = |n: u64| (1..=n).fold(BigInt::one(), |a, k| a * k);
    let mut sum = Rational::zero();
    for n in 0..40u64 {
        let num = BigInt::from(205 * n * n + 250 * n + 77) * fact(n).pow(10);
        let term = Rational::new(num, BigInt::from(64) * fact(2 * n + 1).pow(5));
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let z = zeta3(80);
    assert!(z.agrees_with(&real(&sum, 90), 78), "{}", z.to_decimal());
    assert_eq!(zeta3(15).to_decimal(), "1.20205690315959");
}

#[test]
fn moment_closed_forms() {
    let prec = 40;
    let bits = bits_for(prec);
    let integrator = MomentIntegrator::new(prec, QuadratureSpec::default());
    let half_pi = BigReal::exact(pi(bits).mul_pow2(-1), prec);
    let pi2_4 = BigReal::exact(pi(bits).mul(&pi(bits), bits).mul_pow2(-2), prec);
    let cases = [
        (1, 0, half_pi.clone()),
        (1, 2, half_pi),
        (2, 0, pi2_4),
        (2, 1, real(&rat(1, 2), prec)),
        (1, 3, real(&rat(4, 1), prec)),
        (2, 3, real(&rat(1, 3), prec)),
    ];
    for (m, k, want) in cases {
        let got = integrator.moment(m, k).unwrap();
        assert!(got.agrees_with(&want, prec - 3), "c_{{{m},{k}}} = {}", got.to_decimal());
    }
    assert!(integrator.moment(0, 1).is_err());
}

#[test]
fn refinement_agrees_with_next_level() {
    let prec = 30;
    let adaptive = MomentIntegrator::new(prec, QuadratureSpec::default());
    let (v, level) = adaptive.moment_with_level(3, 1).unwrap();
    let finer = MomentIntegrator::new(prec, QuadratureSpec::at_level(level + 1)).moment(3, 1).unwrap();
    let diff = v.abs_diff(&finer);
    let bound = v.error_bound().add(&apery_bessel::numerics::ten_pow_neg(prec, 64), 64);
    assert!(diff.cmp_abs(&bound) != Ordering::Greater, "level {level}");

    let x = real(&rat(3, 2), prec);
    let k = bessel_K0(&x, prec).unwrap();
    let fixed = bessel_k0_with(&x, prec, &QuadratureSpec::at_level(9)).unwrap();
    assert!(k.agrees_with(&fixed, prec - 2));
}

#[test]
fn fixed_level_is_deterministic() {
    let spec = QuadratureSpec::at_level(6);
    let a = MomentIntegrator::new(25, spec).moment(4, 3).unwrap();
    let b = MomentIntegrator::new(25, spec).moment(4, 3).unwrap();
    assert_eq!(a.value().cmp_value(b.value()), Ordering::Equal);
    assert_eq!(a.to_decimal(), b.to_decimal());
    assert_eq!(bessel_moment(4, 3, 25).unwrap().to_decimal(), bessel_moment(4, 3, 25).unwrap().to_decimal());
}

#[test]
fn quadrature_moments_satisfy_their_recurrence() {
    let integrator = MomentIntegrator::new(40, QuadratureSpec::default());
    for m in 4..=6 {
        let report = verify_moment_recurrence(&integrator, m, 2 * (m / 2 + 1) + 4).unwrap();
        assert!(!report.rows.is_empty());
        assert!(report.max_relative < 1e-35, "m = {m}: {}", report.max_relative);
    }
}

#[test]
fn float_basics() {
    let bits = 200;
    let two = Float::from_int(2);
    let r = two.sqrt(bits);
    let back = r.mul(&r, bits).sub(&two, bits);
    assert!(below(&back, 55, bits));
    let e = Float::one().exp(bits);
    assert!(below(&e.ln(bits).sub(&Float::one(), bits), 55, bits));
    assert_eq!(Float::from_rational(&rat(-3, 8), 64).to_f64(), -0.375);
}
