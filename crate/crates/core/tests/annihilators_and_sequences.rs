use apery_bessel::annihilator::{m_plus, scaling_lemma_check, symmetric_power, BaseEquation};
use apery_bessel::sequences::{
    factorial_square_rescale, gamma_rescale_ode, moment_recurrence, operator_to_recurrence, recurrence_to_operator,
    solve_series, verrill_integers, Recurrence,
};
use apery_bessel::theta::{ThetaOperator, ThetaPoly};
use apery_bessel::{rat, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

fn binom(n: u64, k: u64) -> BigInt {
    fact(n) / (fact(k) * fact(n - k))
}

/// Truncated product of power series.
fn mul_series(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|i| &a[i] * &b[k - i]).sum()).collect()
}

fn power_series(base: &[Rational], m: u32) -> Vec<Rational> {
    let mut one = vec![Rational::zero(); base.len()];
    one[0] = Rational::one();
    (0..m).fold(one, |acc, _| mul_series(&acc, base))
}

/// `I₀(x) = Σ x^{2n}/(4ⁿ n!²)` through `x^len-1`.
fn i0_series(len: usize) -> Vec<Rational> {
    (0..len)
        .map(|k| {
            if k % 2 == 1 {
                Rational::zero()
            } else {
                let n = (k / 2) as u64;
                Rational::new(BigInt::one(), BigInt::from(4).pow(n as u32) * fact(n) * fact(n))
            }
        })
        .collect()
}

fn inverse_factorial_squares(len: usize) -> Vec<Rational> {
    (0..len as u64).map(|n| Rational::new(BigInt::one(), fact(n) * fact(n))).collect()
}

#[test]
fn k0_ladder_kills_i0_powers() {
    let i0 = i0_series(41);
    for m in 1..=8 {
        let t = symmetric_power(BaseEquation::BesselK, m as i64).unwrap();
        assert!(t.annihilates(&power_series(&i0, m), 41), "m = {m}");
    }
}

#[test]
fn sqrt_ladder_kills_convolution_powers() {
    let base = inverse_factorial_squares(41);
    for m in 1..=8 {
        let s = symmetric_power(BaseEquation::SqrtExp, m as i64).unwrap();
        assert!(s.annihilates(&power_series(&base, m), 41), "m = {m}");
    }
}

#[test]
fn a_wrong_power_is_not_killed() {
    let i0 = i0_series(30);
    let t = symmetric_power(BaseEquation::BesselK, 4).unwrap();
    assert!(!t.annihilates(&power_series(&i0, 3), 30));
}

#[test]
fn operator_shapes() {
    for m in 1..=8u32 {
        let t = symmetric_power(BaseEquation::BesselK, m as i64).unwrap();
        assert_eq!(t.order(), Some(m as usize + 1), "T_{m} order");
        assert_eq!(t.x_degree(), Some(2 * m_plus(m)), "T_{m} x-degree");
        assert!(t.is_even_in_x());
        let s = symmetric_power(BaseEquation::SqrtExp, m as i64).unwrap();
        assert_eq!(s.order(), Some(m as usize + 1), "S_{m} order");
        assert_eq!(s.x_degree(), Some(m_plus(m)), "S_{m} x-degree");
        let rec = moment_recurrence(&t).unwrap();
        assert_eq!((rec.step(), rec.order()), (2, m_plus(m) as usize));
    }
}

#[test]
fn scaling_lemma_through_m8() {
    for m in 1..=8u32 {
        for row in scaling_lemma_check(m, m + 1).unwrap() {
            assert!(row.even && row.proportional, "m = {m}, k = {}", row.k);
            assert_eq!(row.scalar, Some(Rational::new(BigInt::one(), BigInt::from(2).pow(row.k))));
        }
    }
}

#[test]
fn verrill_matches_brute_force() {
    // enumerate compositions i_1 + … + i_m = n directly
    fn brute(m: u32, n: u64) -> BigInt {
        fn go(parts_left: u32, left: u64, denom: BigInt, n: u64, acc: &mut BigInt) {
            if parts_left == 0 {
                if left == 0 {
                    let q = fact(n) / denom;
                    *acc += &q * &q;
                }
                return;
            }
            for i in 0..=left {
                go(parts_left - 1, left - i, &denom * fact(i), n, acc);
            }
        }
        let mut acc = BigInt::zero();
        go(m, n, BigInt::one(), n, &mut acc);
        acc
    }
    for m in 1..=6 {
        let fast = verrill_integers(m, 6);
        for n in 0..=6 {
            assert_eq!(fast[n as usize], brute(m, n), "m = {m}, n = {n}");
        }
    }
}

#[test]
fn verrill_four_is_a_binomial_sum() {
    let a = verrill_integers(4, 40);
    for n in 0..=40u64 {
        let s: BigInt = (0..=n).map(|k| binom(n, k).pow(2) * binom(2 * k, k) * binom(2 * n - 2 * k, n - k)).sum();
        assert_eq!(a[n as usize], s, "n = {n}");
    }
}

#[test]
fn d_recurrence_generates_verrill_four() {
    let t = symmetric_power(BaseEquation::BesselK, 4).unwrap();
    let rec = operator_to_recurrence(&gamma_rescale_ode(&t, &rat(4, 1)).unwrap());
    let solved = solve_series(&rec, &[rat(1, 1), rat(4, 1)], 40).unwrap();
    let a = verrill_integers(4, 40);
    assert_eq!(solved.values.len(), 41);
    for (v, an) in solved.values.iter().zip(a) {
        assert_eq!(*v, Rational::from_integer(an));
    }
}

#[test]
fn verrill_ode_recurrence_generates_verrill() {
    for m in 3..=6u32 {
        let s = symmetric_power(BaseEquation::SqrtExp, m as i64).unwrap();
        let rec = operator_to_recurrence(&factorial_square_rescale(&s));
        let a = verrill_integers(m, 30);
        let init: Vec<Rational> = a[..rec.order().max(1)].iter().cloned().map(Rational::from_integer).collect();
        let solved = solve_series(&rec, &init, 30).unwrap();
        assert_eq!(solved.values, a.into_iter().map(Rational::from_integer).collect::<Vec<_>>(), "m = {m}");
    }
}

#[test]
fn verrill_grows_with_m() {
    let rows: Vec<Vec<BigInt>> = (1..=8).map(|m| verrill_integers(m, 15)).collect();
    for w in rows.windows(2) {
        for (hi, lo) in w[1].iter().zip(&w[0]).skip(1) {
            assert!(hi > lo);
        }
    }
}

#[test]
fn moment_recurrence_on_closed_form_moments() {
    // c_{2,2j+1} = j!³·4^j·(j+1)!/(2j+2)!  (from the Gamma-function closed form)
    let odd: Vec<Rational> = (0..12u64)
        .map(|j| {
            let num = fact(j).pow(3) * BigInt::from(4).pow(j as u32) * fact(j + 1);
            Rational::new(num, fact(2 * j + 2))
        })
        .collect();
    assert_eq!(odd[1], rat(1, 3));
    let t = symmetric_power(BaseEquation::BesselK, 2).unwrap();
    let rec = moment_recurrence(&t).unwrap().sublattice(1).unwrap();
    assert!(rec.holds_on(&odd, rec.order()));
    let mut wrong = odd.clone();
    wrong[5] += rat(1, 1000);
    assert!(!rec.holds_on(&wrong, rec.order()));
}

fn arb_operator() -> impl Strategy<Value = ThetaOperator> {
    let poly = prop::collection::vec(-6i64..=6, 1..4).prop_map(|c| ThetaPoly::from_ints(&c));
    prop::collection::vec((0u32..4, poly), 1..4).prop_map(ThetaOperator::from_terms)
}

proptest! {
    #[test]
    fn operator_recurrence_round_trip(a in arb_operator()) {
        // an overall factor x^j is not visible in the recurrence
        prop_assume!(!a.coeff(0).is_zero());
        let rec = operator_to_recurrence(&a);
        let back = recurrence_to_operator(&rec).unwrap();
        prop_assert_eq!(back, a.normalize());
    }

    #[test]
    fn recurrence_text_and_json_round_trip(a in arb_operator()) {
        let rec = operator_to_recurrence(&a);
        let text: Recurrence = rec.to_text().parse().unwrap();
        prop_assert_eq!(&text, &rec);
        let json: Recurrence = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
        prop_assert_eq!(json, rec);
    }

    #[test]
    fn series_killed_by_operator_satisfies_its_recurrence(init in prop::collection::vec(-9i64..=9, 3)) {
        // θ³ − 2x(2θ+1)(5θ²+5θ+2) + 64x²(θ+1)³ for random initial data
        let t = symmetric_power(BaseEquation::BesselK, 4).unwrap();
        let op = gamma_rescale_ode(&t, &rat(4, 1)).unwrap();
        let rec = operator_to_recurrence(&op);
        let init: Vec<Rational> = init.into_iter().take(rec.order()).map(|v| rat(v, 1)).collect();
        let s = solve_series(&rec, &init, 20).unwrap();
        // the operator applied to the series vanishes from x^order on
        let image = op.apply_to_series(&s.values, 21);
        prop_assert!(image[rec.order()..].iter().all(Zero::is_zero));
    }
}
