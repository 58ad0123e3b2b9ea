use gvkit::series::{int, product_factor, rat, Rational, Series, VariableSpec};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Random series in a truncated `q` (given order) and a Laurent `t`.
fn series(order: i64) -> impl Strategy<Value = Series> {
    prop::collection::vec(((0..=order), (-2i64..=2), coeff()), 0..8).prop_map(move |terms| {
        Series::from_terms(
            vec![VariableSpec::truncated("q", order), VariableSpec::laurent("t")],
            terms.into_iter().map(|(a, b, c)| (vec![a, b], c)),
        )
        .unwrap()
    })
}

/// Unit: nonzero constant term plus terms of positive `q`-degree.
fn unit(order: i64) -> impl Strategy<Value = Series> {
    let c0 = coeff().prop_filter("nonzero", |c| !c.is_zero());
    (c0, prop::collection::vec(((1..=order), (-2i64..=2), coeff()), 0..6)).prop_map(move |(c0, terms)| {
        Series::from_terms(
            vec![VariableSpec::truncated("q", order), VariableSpec::laurent("t")],
            std::iter::once((vec![0, 0], c0)).chain(terms.into_iter().map(|(a, b, c)| (vec![a, b], c))),
        )
        .unwrap()
    })
}

fn any_order_series() -> impl Strategy<Value = Series> {
    (1i64..=5).prop_flat_map(series)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn addition_is_commutative_and_associative(a in any_order_series(), b in any_order_series(), c in any_order_series()) {
        prop_assert!(a.add(&b).unwrap().agrees_with(&b.add(&a).unwrap()).unwrap());
        let l = a.add(&b).unwrap().add(&c).unwrap();
        let r = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert!(l.agrees_with(&r).unwrap());
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in any_order_series(), b in any_order_series(), c in any_order_series()) {
        prop_assert!(a.mul(&b).unwrap().agrees_with(&b.mul(&a).unwrap()).unwrap());
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(l.agrees_with(&r).unwrap());
    }

    #[test]
    fn distributivity(a in any_order_series(), b in any_order_series(), c in any_order_series()) {
        let l = a.mul(&b.add(&c).unwrap()).unwrap();
        let r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(l.agrees_with(&r).unwrap());
    }

    #[test]
    fn identities(a in any_order_series()) {
        prop_assert!(a.mul(&Series::one()).unwrap().agrees_with(&a).unwrap());
        prop_assert!(a.add(&Series::zero()).unwrap().agrees_with(&a).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn invert_round_trip(s in (1i64..=6).prop_flat_map(unit)) {
        let inv = s.invert_unit().unwrap();
        let prod = s.mul(&inv).unwrap();
        prop_assert!(prod.agrees_with(&Series::one()).unwrap(), "{} * {} = {}", s, inv, prod);
    }

    #[test]
    fn product_factor_stable_in_count(exp in -30i64..=5, order in 1i64..=6, extra in 0u32..4, c in -3i64..=3) {
        let base = Series::constant(int(c));
        prop_assume!(!base.is_zero());
        let m = order as u32;
        let a = product_factor(&base, exp, m, "q", order).unwrap();
        let b = product_factor(&base, exp, m + extra, "q", order).unwrap();
        prop_assert_eq!(a, b);
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Number of partitions of `n` whose parts each carry one of `colors` colors.
fn colored_partitions(n: u64, colors: u64) -> BigInt {
    fn go(n: u64, max_part: u64, colors: u64) -> BigInt {
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for part in (1..=max_part.min(n)).rev() {
            // choose how many copies of `part`; a multiset of `m` colors
            for m in 1..=n / part {
                total += binomial(m + colors - 1, m) * go(n - m * part, part - 1, colors);
            }
        }
        total
    }
    go(n, n, colors)
}

#[test]
fn eta_power_matches_partition_enumeration() {
    let order = 6;
    let p = product_factor(&Series::one(), -24, order as u32, "q", order).unwrap();
    for k in 0..=order {
        let c = p.coefficient(&[k]);
        assert!(c.is_integer() && c > Rational::zero(), "q^{k}: {c}");
        assert_eq!(c.to_integer(), colored_partitions(k as u64, 24), "q^{k}");
    }
    let expected = [1, 24, 324, 3200, 25650, 176256, 1073720];
    for (k, e) in expected.iter().enumerate() {
        assert_eq!(p.coefficient(&[k as i64]), int(*e));
    }
}

#[test]
fn inverse_of_sine_square_series() {
    // λ² − λ⁴/12 + λ⁶/360 is (2 sin(λ/2))² to order 7
    let l = VariableSpec::truncated_with_floor("lambda", 7, -2);
    let s = Series::from_terms(
        vec![l],
        [(vec![2], int(1)), (vec![4], rat(-1, 12)), (vec![6], rat(1, 360))],
    )
    .unwrap();
    let inv = s.invert_unit().unwrap();
    assert_eq!(inv.coefficient(&[-2]), int(1));
    assert_eq!(inv.coefficient(&[0]), rat(1, 12));
    assert_eq!(inv.coefficient(&[2]), rat(1, 240));
}
