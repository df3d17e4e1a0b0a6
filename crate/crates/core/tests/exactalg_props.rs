use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use zetaforge::exactalg::{parse_ratfn, series_coefficients, MPoly, RatFn, Var};

fn monomial(c: i64, a: u32, b: u32) -> MPoly {
    MPoly::monomial(BigRational::from_integer(c.into()), &[(Var::P, a), (Var::T, b)])
}

prop_compose! {
    fn poly()(terms in prop::collection::vec((-3i64..=3, 0u32..3, 0u32..3), 1..4)) -> MPoly {
        terms
            .into_iter()
            .fold(MPoly::zero(), |acc, (c, a, b)| &acc + &monomial(c, a, b))
    }
}

prop_compose! {
    /// `N / ∏ (1 − c p^a t^b)` with `b ≥ 1`, so it expands at `t = 0`.
    fn ratfn()(
        num in poly(),
        factors in prop::collection::vec((prop_oneof![Just(1i64), Just(-1), Just(2)], 0u32..3, 1u32..3), 0..3),
    ) -> RatFn {
        let factors = factors
            .into_iter()
            .map(|(c, a, b)| &MPoly::one() - &monomial(c, a, b))
            .collect();
        RatFn::from_factors(num, factors).expect("nonzero factors")
    }
}

fn series(f: &RatFn, p: i64, n: usize) -> Vec<BigRational> {
    series_coefficients(f, p, n).expect("expandable")
}

fn convolve(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    (0..a.len())
        .map(|k| (0..=k).fold(BigRational::zero(), |s, i| s + &a[i] * &b[k - i]))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_text_round_trips(f in ratfn()) {
        let text = f.to_string();
        let back = parse_ratfn(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn canonicalize_is_idempotent(f in ratfn()) {
        let once = RatFn::canonicalize(f.numerator().clone(), f.expanded_denominator()).unwrap();
        let twice = RatFn::canonicalize(once.numerator().clone(), once.expanded_denominator()).unwrap();
        prop_assert_eq!(&once, &f);
        prop_assert_eq!(once.to_string(), twice.to_string());
    }

    #[test]
    fn inversion_is_an_involution(f in ratfn()) {
        let vars = [Var::P, Var::T];
        prop_assert_eq!(f.invert_variables(&vars).invert_variables(&vars), f);
    }

    #[test]
    fn equality_matches_cross_multiplication(f in ratfn(), g in ratfn()) {
        let lhs = f.numerator() * &g.expanded_denominator();
        let rhs = g.numerator() * &f.expanded_denominator();
        prop_assert_eq!(f == g, lhs == rhs);
        if !g.is_zero() {
            prop_assert_eq!((&(&f * &g) / &g).unwrap(), f);
        }
    }

    #[test]
    fn substitution_composes(f in ratfn(), a in 0i64..3, b in 1i64..3, c in 1i64..3) {
        // σ: t ↦ p^a t^b, τ: p ↦ p^c.
        let one = BigRational::from_integer(1.into());
        let sigma = BTreeMap::from([(Var::T, RatFn::laurent_monomial(one.clone(), &[(Var::P, a), (Var::T, b)]))]);
        let tau = BTreeMap::from([(Var::P, RatFn::laurent_monomial(one.clone(), &[(Var::P, c)]))]);
        let mut composed: BTreeMap<Var, RatFn> = sigma
            .iter()
            .map(|(v, g)| (*v, g.substitute(&tau).unwrap()))
            .collect();
        composed.entry(Var::P).or_insert_with(|| tau[&Var::P].clone());
        let stepwise = f.substitute(&sigma).unwrap().substitute(&tau).unwrap();
        prop_assert_eq!(stepwise, f.substitute(&composed).unwrap());
    }

    #[test]
    fn series_of_product_is_convolution(f in ratfn(), g in ratfn(), p in 2i64..5) {
        let n = 6;
        let product = series(&(&f * &g), p, n);
        prop_assert_eq!(product, convolve(&series(&f, p, n), &series(&g, p, n)));
    }

    #[test]
    fn series_is_additive(f in ratfn(), g in ratfn(), p in 2i64..5) {
        let n = 6;
        let sum: Vec<_> = series(&f, p, n).into_iter().zip(series(&g, p, n)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(series(&(&f + &g), p, n), sum);
    }
}

#[test]
fn inversion_examples() {
    let f = parse_ratfn("X1/(1 - X1)").unwrap();
    assert_eq!(f.invert_variables(&[Var::X(1)]), parse_ratfn("-1/(1 - X1)").unwrap());
    let g = parse_ratfn("q + 1").unwrap();
    assert_eq!(g.invert_variables(&[Var::Q]), parse_ratfn("(1 + q)/q").unwrap());
    let f2 = parse_ratfn("(1 + q*X1)/(1 - X1)").unwrap();
    let expected = parse_ratfn("-(1 + q*X1)/(q*(1 - X1))").unwrap();
    assert_eq!(f2.invert_variables(&[Var::Q, Var::X(1)]), expected);
}

#[test]
fn series_examples() {
    let int = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
    let f = parse_ratfn("1/((1 - t)*(1 - p*t))").unwrap();
    assert_eq!(series(&f, 2, 2), int(&[1, 3, 7]));
    let g = parse_ratfn("1/(1 - p^2*t^3)").unwrap();
    assert_eq!(series(&g, 3, 3), int(&[1, 0, 0, 9]));
    let h = parse_ratfn("1/t").unwrap();
    assert!(series_coefficients(&h, 2, 2).is_err());
}
