use gvkit::k3hilb::{self, euler_from_gv, gv_table, hilb_series, k3_character, sym_product_series, verify_kkv};
use gvkit::series::{product_factor, Series};
use gvkit::sl2rep::{jh_basis_character, tr_minus_one, BiCharacter, LaurentPoly};
use num_bigint::BigInt;

const KMAX: u32 = 5;

fn euler_numbers(kmax: u32) -> Vec<BigInt> {
    let p = product_factor(&Series::one(), -24, kmax, "q", i64::from(kmax)).unwrap();
    (0..=kmax)
        .map(|k| p.coefficient(&[i64::from(k)]).to_integer())
        .collect()
}

#[test]
fn coefficients_are_palindromic() {
    let hilb = hilb_series(KMAX).unwrap();
    let sym = sym_product_series(KMAX).unwrap();
    for k in 0..=KMAX {
        assert!(hilb.coefficient(k).unwrap().is_symmetric(), "Hilb q^{k}");
        assert!(sym.coefficient(k).unwrap().is_symmetric(), "Sym q^{k}");
    }
}

#[test]
fn second_symmetric_power_matches_plethysm() {
    // Sym²V has character (χ(t)² + χ(t²)) / 2 for an evenly graded V
    let v = k3_character();
    let doubled = BiCharacter::from_coeffs(v.terms().map(|((a, b), c)| ((2 * a, 2 * b), c.clone())));
    let twice = v.mul(&v).add(&doubled);
    let half = BiCharacter::from_coeffs(twice.terms().map(|(k, c)| (k, c / 2)));
    assert_eq!(sym_product_series(2).unwrap().coefficient(2).unwrap(), half);
}

#[test]
fn hilbert_square_betti_numbers() {
    // Along the diagonal t_L = t_R = t: 1, 23, 276, 23, 1
    let c = hilb_series(2).unwrap().coefficient(2).unwrap();
    let mut diag = LaurentPoly::zero();
    for ((a, b), n) in c.terms() {
        diag = diag.add(&LaurentPoly::monomial(a + b, n.clone()));
    }
    assert_eq!(diag, LaurentPoly::from_coeffs([(-4, 1), (-2, 23), (0, 276), (2, 23), (4, 1)]));
}

#[test]
fn euler_characteristics() {
    let table = gv_table(KMAX).unwrap();
    let chi = euler_numbers(KMAX);
    for k in 1..=KMAX {
        assert_eq!(euler_from_gv(&table, k), chi[k as usize], "k = {k}");
        assert_eq!(table.get(0, k), chi[k as usize], "k = {k}");
        let total: BigInt = hilb_series(KMAX).unwrap().coefficient(k).unwrap().dimension();
        assert_eq!(total, chi[k as usize]);
    }
}

#[test]
fn table_reconstructs_specialized_coefficients() {
    let table = gv_table(KMAX).unwrap();
    let hilb = hilb_series(KMAX).unwrap();
    for k in 1..=KMAX {
        let specialized = tr_minus_one(&hilb.coefficient(k).unwrap()).unwrap();
        let rebuilt = (0..=k).fold(LaurentPoly::zero(), |acc, h| {
            acc.add(&jh_basis_character(h).scale(&table.get(h, k)))
        });
        assert_eq!(rebuilt, specialized, "k = {k}");
        for h in (k + 1)..(k + 3) {
            assert_eq!(table.get(h, k), BigInt::from(0));
        }
    }
}

#[test]
fn kkv_identity_holds() {
    let report = verify_kkv(KMAX).unwrap().unwrap();
    assert_eq!(report.gv.rows(), report.kkv.rows());
    assert_eq!(report.gv.get(1, 1), BigInt::from(-2));
    let expected_genus_one = [-2, -54, -800, -8550, -73440];
    for (k, n) in expected_genus_one.iter().enumerate() {
        assert_eq!(report.kkv.get(1, k as u32 + 1), BigInt::from(*n));
    }
    assert_eq!(report.gv.provenance, k3hilb::Provenance::FromDecomposition);
    assert_eq!(report.kkv.provenance, k3hilb::Provenance::FromKkv);
}
