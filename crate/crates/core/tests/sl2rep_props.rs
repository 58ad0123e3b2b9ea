use gvkit::sl2rep::{
    cg_decompose, extract_gv, irrep_character, jh_basis_character, recompose, IrrepLabel, LaurentPoly,
};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

/// Honest character: nonnegative multiplicities of irreps up to spin 3.
fn honest() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((0u32..=6, 0i64..=3), 0..5).prop_map(|parts| {
        parts.into_iter().fold(LaurentPoly::zero(), |acc, (j, m)| {
            acc.add(&irrep_character(IrrepLabel::new(j)).scale(&BigInt::from(m)))
        })
    })
}

/// Symmetric integer Laurent polynomial, possibly virtual.
fn symmetric() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(-20i64..=20, 0..7).prop_map(|cs| {
        let mut p = LaurentPoly::zero();
        for (e, c) in cs.into_iter().enumerate() {
            let e = e as i64;
            p = p.add(&LaurentPoly::monomial(e, c));
            if e > 0 {
                p = p.add(&LaurentPoly::monomial(-e, c));
            }
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dimension_is_multiplicative(a in honest(), b in honest()) {
        prop_assert_eq!(a.mul(&b).eval_unit(1), a.eval_unit(1) * b.eval_unit(1));
        let dec = cg_decompose(&a.mul(&b), false).unwrap();
        let dims: BigInt = dec.iter().map(|(l, m)| m * BigInt::from(l.dimension())).sum();
        prop_assert_eq!(dims, a.eval_unit(1) * b.eval_unit(1));
    }

    #[test]
    fn cg_round_trip(a in honest()) {
        let dec = cg_decompose(&a, false).unwrap();
        prop_assert!(dec.iter().all(|(_, m)| *m > BigInt::zero()));
        prop_assert_eq!(recompose(&dec), a);
    }

    #[test]
    fn virtual_cg_round_trip(a in symmetric()) {
        prop_assert_eq!(recompose(&cg_decompose(&a, true).unwrap()), a);
    }

    #[test]
    fn extract_gv_round_trip(p in symmetric()) {
        let dec = extract_gv(&p).unwrap();
        prop_assert_eq!(dec.reconstruct(), p.clone());
        let top = p.top_weight().unwrap_or(0);
        for h in (top as u32 + 1)..(top as u32 + 4) {
            prop_assert!(dec.get(h).is_zero());
        }
        prop_assert_eq!(dec.reconstruct().eval_unit(-1), dec.get(0));
    }
}

#[test]
fn jh_basis_vanishes_at_minus_one() {
    assert_eq!(jh_basis_character(0).eval_unit(-1), BigInt::from(1));
    for h in 1..6 {
        assert!(jh_basis_character(h).eval_unit(-1).is_zero());
        assert_eq!(jh_basis_character(h).eval_unit(1), BigInt::from(4).pow(h));
    }
}
