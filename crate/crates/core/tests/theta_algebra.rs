use apery_bessel::theta::{ThetaOperator, ThetaPoly};
use apery_bessel::{rat, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn arb_poly() -> impl Strategy<Value = ThetaPoly> {
    prop::collection::vec(-6i64..=6, 0..4).prop_map(|c| ThetaPoly::from_ints(&c))
}

fn arb_operator() -> impl Strategy<Value = ThetaOperator> {
    prop::collection::vec((0u32..4, arb_poly()), 0..4).prop_map(ThetaOperator::from_terms)
}

fn arb_nonzero_rat() -> impl Strategy<Value = Rational> {
    (prop_oneof![-5i64..=-1, 1i64..=5], 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn arb_series(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-20i64..=20, len).prop_map(|v| v.into_iter().map(|c| rat(c, 1)).collect())
}

/// Direct action on a truncated power series:
/// `x^j P(θ)` sends `c_k x^k` to `P(k) c_k x^{k+j}`.
fn act(op: &ThetaOperator, f: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); f.len()];
    for (j, p) in op.terms() {
        for k in 0..f.len() {
            let target = k + j as usize;
            if target >= f.len() {
                break;
            }
            let mut val = Rational::zero();
            let mut pow = Rational::one();
            for c in p.coeffs() {
                val += c * &pow;
                pow *= Rational::from_integer((k as i64).into());
            }
            out[target] += val * &f[k];
        }
    }
    out
}

proptest! {
    #[test]
    fn composition_acts_like_successive_application(a in arb_operator(), b in arb_operator(), f in arb_series(12)) {
        prop_assert_eq!(act(&a.compose(&b), &f), act(&a, &act(&b, &f)));
    }

    #[test]
    fn composition_is_associative(a in arb_operator(), b in arb_operator(), c in arb_operator()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn normalize_is_idempotent_and_scale_free(a in arb_operator(), s in arb_nonzero_rat()) {
        let n = a.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert_eq!(a.scale(&s).normalize(), n.clone());
        if !n.is_zero() {
            let jmin = n.x_valuation().unwrap();
            prop_assert!(n.coeff(jmin).leading().unwrap() > &Rational::zero());
            for (_, p) in n.terms() {
                prop_assert!(p.is_integral());
            }
        }
    }

    #[test]
    fn affine_substitutions_compose(a in arb_operator(), s1 in arb_nonzero_rat(), r1 in arb_nonzero_rat(),
                                    s2 in arb_nonzero_rat(), r2 in arb_nonzero_rat()) {
        let twice = a.substitute_theta_affine(&s1, &r1).substitute_theta_affine(&s2, &r2);
        let once = a.substitute_theta_affine(&(&s1 * &s2), &(&s1 * &r2 + &r1));
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn mirror_is_an_involution(a in arb_operator(), c in arb_nonzero_rat()) {
        prop_assume!(!a.coeff(0).is_zero());
        let back = a.mirror_at_infinity(&c).unwrap().mirror_at_infinity(&c).unwrap();
        prop_assert_eq!(back, a.normalize());
    }

    #[test]
    fn x_scalings_compose(a in arb_operator(), c1 in arb_nonzero_rat(), c2 in arb_nonzero_rat()) {
        let twice = a.scale_x(&c1).unwrap().scale_x(&c2).unwrap();
        prop_assert_eq!(twice, a.scale_x(&(&c1 * &c2)).unwrap());
    }

    #[test]
    fn x_scaling_acts_on_series(a in arb_operator(), c in arb_nonzero_rat(), f in arb_series(10)) {
        // (A f)(c x) = A_c (f(c x)) with A_c = A under x -> c x
        let fc: Vec<Rational> = f.iter().enumerate().map(|(k, v)| v * pow(&c, k)).collect();
        let lhs: Vec<Rational> = act(&a, &f).iter().enumerate().map(|(k, v)| v * pow(&c, k)).collect();
        prop_assert_eq!(lhs, act(&a.scale_x(&c).unwrap(), &fc));
    }

    #[test]
    fn x_power_substitution_acts_on_spread_series(a in arb_operator(), f in arb_series(6), k in 1u32..4) {
        let spread = |g: &[Rational]| {
            let mut out = vec![Rational::zero(); g.len() * k as usize];
            for (i, v) in g.iter().enumerate() {
                out[i * k as usize] = v.clone();
            }
            out
        };
        prop_assert_eq!(act(&a.substitute_x_power(k), &spread(&f)), spread(&act(&a, &f)));
    }

    #[test]
    fn text_forms_round_trip(a in arb_operator()) {
        let flat: ThetaOperator = a.to_string().parse().unwrap();
        prop_assert_eq!(&flat, &a);
        let grouped: ThetaOperator = a.to_grouped_string().parse().unwrap();
        prop_assert_eq!(&grouped, &a);
    }

    #[test]
    fn json_round_trips(a in arb_operator()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: ThetaOperator = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn addition_is_termwise(a in arb_operator(), b in arb_operator(), f in arb_series(8)) {
        let sum: Vec<Rational> = act(&a, &f).iter().zip(act(&b, &f)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(act(&a.add(&b), &f), sum);
        prop_assert!(a.sub(&a).is_zero());
    }
}

fn pow(c: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * c)
}

#[test]
fn theta_past_x_shifts() {
    // θ·x = x·(θ + 1)
    let theta = ThetaOperator::theta();
    assert_eq!(theta.compose(&ThetaOperator::x_pow(1)), "x*(theta + 1)".parse().unwrap());
    assert_eq!(theta.compose_theta_left(), theta.pow(2));
}

#[test]
fn mirror_example() {
    let op: ThetaOperator = "theta^2 - x^2".parse().unwrap();
    let image: ThetaOperator = "1 - x^2*(theta + 1)^2".parse().unwrap();
    assert_eq!(op.mirror_at_infinity(&rat(1, 1)).unwrap(), image);
    assert_eq!(image.mirror_at_infinity(&rat(1, 1)).unwrap(), op);
}
