//! GV invariants of Hilbert schemes of points on an elliptic K3 surface.
//!
//! Two independent routes to the same integers:
//!
//! 1. expand the bigraded Poincaré series of `S^[k]` in `(t_L, t_R)`,
//!    specialize `t_R = −1`, and peel the `(t_L + t_L⁻¹ + 2)^h` basis;
//! 2. expand the three-factor product in `y` directly and peel the basis
//!    `(−1)^h (y − 2 + y⁻¹)^h`, which is route 1's basis after `t_L = −y`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::gvgw::GvInvariants;
use crate::series::{product_factor, Rational, Series, VariableSpec};
use crate::sl2rep::{
    extract_gv, irrep_character, jh_basis_character, BiCharacter, IrrepLabel, LaurentPoly,
    Sl2Error, T_L, T_R,
};

pub const Q: &str = "q";
pub const Y: &str = "y";

pub type Result<T> = std::result::Result<T, Sl2Error>;

/// `H*(K3) = (½)_L ⊗ (½)_R ⊕ 20·(0)_L ⊗ (0)_R`.
pub fn k3_character() -> BiCharacter {
    let half = irrep_character(IrrepLabel::new(1));
    BiCharacter::outer(&half, &half).add(&BiCharacter::from_coeffs([((0, 0), 20)]))
}

/// Power series in `q` with `(t_L, t_R)` Laurent coefficients.
#[derive(Debug, Clone)]
pub struct HilbSeries {
    series: Series,
    kmax: u32,
}

impl HilbSeries {
    pub fn kmax(&self) -> u32 {
        self.kmax
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    /// Coefficient of `q^k` as a bicharacter.
    pub fn coefficient(&self, k: u32) -> Result<BiCharacter> {
        let c = self.series.coefficient_of(Q, i64::from(k))?;
        BiCharacter::from_series(&c)
    }
}

fn monomial(tl: i64, tr: i64) -> Series {
    Series::from_terms(
        vec![VariableSpec::laurent(T_L), VariableSpec::laurent(T_R)],
        [(vec![tl, tr], Rational::one())],
    )
    .expect("Laurent monomial")
}

/// Factors `(1 − t_L^a t_R^b q^m)^{-1}` for the four weights of `(½,½)`
/// together with `(1 − q^m)^{-20}`, over `m = 1..=count`.
fn k3_product(kmax: u32, count: u32) -> Result<Series> {
    let order = i64::from(kmax);
    let mut acc = Series::one().with_variable(VariableSpec::truncated(Q, order))?;
    for (a, b) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
        acc = acc.mul(&product_factor(&monomial(a, b), -1, count, Q, order)?)?;
    }
    acc = acc.mul(&product_factor(&Series::one(), -20, count, Q, order)?)?;
    Ok(acc)
}

/// Poincaré series of the symmetric products `S^(k)`.
pub fn sym_product_series(kmax: u32) -> Result<HilbSeries> {
    Ok(HilbSeries {
        series: k3_product(kmax, 1)?,
        kmax,
    })
}

/// Poincaré series of the Hilbert schemes `S^[k]`.
pub fn hilb_series(kmax: u32) -> Result<HilbSeries> {
    Ok(HilbSeries {
        series: k3_product(kmax, kmax)?,
        kmax,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FromDecomposition,
    FromKkv,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::FromDecomposition => write!(f, "from-decomposition"),
            Provenance::FromKkv => write!(f, "from-kkv"),
        }
    }
}

/// `n_h(k)` for `1 ≤ k ≤ kmax`, `0 ≤ h ≤ k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GvTable {
    pub kmax: u32,
    pub provenance: Provenance,
    pub table: GvInvariants,
}

impl GvTable {
    pub fn get(&self, h: u32, k: u32) -> BigInt {
        self.table.get(h, k)
    }

    /// All `(h, k, n)` with `h ≤ k`, ordered by `k` then `h`; zeros included.
    pub fn rows(&self) -> Vec<(u32, u32, BigInt)> {
        (1..=self.kmax)
            .flat_map(|k| (0..=k).map(move |h| (h, k)))
            .map(|(h, k)| (h, k, self.get(h, k)))
            .collect()
    }
}

/// `n_h(k)` via the `(t_L, t_R)` product, `t_R = −1`, and the J_h basis.
pub fn gv_table(kmax: u32) -> Result<GvTable> {
    let hilb = hilb_series(kmax)?;
    let mut table = GvInvariants::new();
    for k in 1..=kmax {
        let specialized = crate::sl2rep::tr_minus_one(&hilb.coefficient(k)?)?;
        let dec = extract_gv(&specialized)?;
        for (h, n) in dec.iter() {
            table
                .insert(h, k, n.clone())
                .expect("k is a positive degree");
        }
    }
    Ok(GvTable {
        kmax,
        provenance: Provenance::FromDecomposition,
        table,
    })
}

/// `1 / (q ∏_{m≥1} (1 − y q^m)² (1 − y⁻¹ q^m)² (1 − q^m)^20)`, stored without
/// the `q⁻¹` prefactor, so degree `k` (the `q^{k−1}` term) is the stored `q^k`
/// coefficient.
#[derive(Debug, Clone)]
pub struct KkvSeries {
    series: Series,
    kmax: u32,
}

impl KkvSeries {
    pub fn kmax(&self) -> u32 {
        self.kmax
    }

    /// Degree-`k` coefficient as a Laurent polynomial in `y`, `k ≤ kmax`.
    pub fn coefficient(&self, k: u32) -> Result<LaurentPoly> {
        let c = self.series.coefficient_of(Q, i64::from(k))?;
        LaurentPoly::from_series(&c, Y)
    }
}

pub fn kkv_rhs(kmax: u32) -> Result<KkvSeries> {
    let order = i64::from(kmax);
    let y = Series::laurent_var(Y);
    let count = kmax.max(1);
    let mut acc = Series::one().with_variable(VariableSpec::truncated(Q, order))?;
    acc = acc.mul(&product_factor(&y, -2, count, Q, order)?)?;
    acc = acc.mul(&product_factor(&y.invert_unit()?, -2, count, Q, order)?)?;
    acc = acc.mul(&product_factor(&Series::one(), -20, count, Q, order)?)?;
    Ok(KkvSeries { series: acc, kmax })
}

/// `(−1)^h (y − 2 + y⁻¹)^h`.
fn kkv_basis(h: u32) -> LaurentPoly {
    let sign = if h.is_multiple_of(2) { 1 } else { -1 };
    LaurentPoly::from_coeffs([(1, 1), (0, -2), (-1, 1)])
        .pow(h)
        .scale(&BigInt::from(sign))
}

/// Peels `p(y) = Σ_h r_h (−1)^h (y^{½} − y^{−½})^{2h}` from the top `y` power.
pub fn kkv_extract(p: &LaurentPoly) -> Result<BTreeMap<u32, BigInt>> {
    if !p.is_symmetric() {
        return Err(Sl2Error::Asymmetric);
    }
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    while let Some(top) = rest.top_weight() {
        let h = u32::try_from(top).map_err(|_| Sl2Error::Residual)?;
        let basis = kkv_basis(h);
        // leading coefficient of the basis element is (−1)^h
        let r = rest.coeff(top) * basis.coeff(top);
        rest = rest.sub(&basis.scale(&r));
        out.insert(h, r);
    }
    Ok(out)
}

/// `r_h(k)` from the KKV product.
pub fn kkv_table(kmax: u32) -> Result<GvTable> {
    let rhs = kkv_rhs(kmax)?;
    let mut table = GvInvariants::new();
    for k in 1..=kmax {
        for (h, r) in kkv_extract(&rhs.coefficient(k)?)? {
            table.insert(h, k, r).expect("k is a positive degree");
        }
    }
    Ok(GvTable {
        kmax,
        provenance: Provenance::FromKkv,
        table,
    })
}

#[derive(Debug, Clone)]
pub struct KkvReport {
    pub gv: GvTable,
    pub kkv: GvTable,
}

/// First `(h, k)` where the two routes disagree.
#[derive(Debug, Clone, thiserror::Error)]
#[error("n_{h}({k}) = {n} but r_{h}({k}) = {r}")]
pub struct KkvMismatch {
    pub h: u32,
    pub k: u32,
    pub n: BigInt,
    pub r: BigInt,
    pub report: KkvReport,
}

/// Runs both routes and demands exact equality `n_h(k) = r_h(k)`.
pub fn verify_kkv(kmax: u32) -> Result<std::result::Result<KkvReport, Box<KkvMismatch>>> {
    let gv = gv_table(kmax)?;
    let kkv = kkv_table(kmax)?;
    let max_h = |t: &GvTable| t.table.max_genus().unwrap_or(0);
    let hmax = max_h(&gv).max(max_h(&kkv)).max(kmax);
    for k in 1..=kmax {
        for h in 0..=hmax {
            let (n, r) = (gv.get(h, k), kkv.get(h, k));
            if n != r {
                return Ok(Err(Box::new(KkvMismatch {
                    h,
                    k,
                    n,
                    r,
                    report: KkvReport { gv, kkv },
                })));
            }
        }
    }
    Ok(Ok(KkvReport { gv, kkv }))
}

/// `Σ_h n_h(k) · J_h(−1)`; only `h = 0` survives since `J_h(−1) = 0^h`.
pub fn euler_from_gv(table: &GvTable, k: u32) -> BigInt {
    let hmax = table.table.max_genus().unwrap_or(0);
    (0..=hmax)
        .map(|h| table.get(h, k) * jh_basis_character(h).eval_unit(-1))
        .fold(BigInt::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_coeffs(terms.iter().copied())
    }

    #[test]
    fn k3_character_examples() {
        let ch = k3_character();
        assert_eq!(ch.dimension(), BigInt::from(24));
        assert_eq!(
            crate::sl2rep::tr_minus_one(&ch).unwrap(),
            lp(&[(1, -2), (0, 20), (-1, -2)])
        );
    }

    #[test]
    fn low_coefficients() {
        for s in [sym_product_series(3).unwrap(), hilb_series(3).unwrap()] {
            assert_eq!(s.coefficient(0).unwrap(), BiCharacter::from_coeffs([((0, 0), 1)]));
            assert_eq!(s.coefficient(1).unwrap(), k3_character());
        }
    }

    #[test]
    fn degree_one_tables() {
        let gv = gv_table(1).unwrap();
        assert_eq!(gv.get(0, 1), BigInt::from(24));
        assert_eq!(gv.get(1, 1), BigInt::from(-2));
        let kkv = kkv_rhs(1).unwrap();
        assert_eq!(kkv.coefficient(1).unwrap(), lp(&[(1, 2), (0, 20), (-1, 2)]));
        let r = kkv_table(1).unwrap();
        assert_eq!(r.get(0, 1), BigInt::from(24));
        assert_eq!(r.get(1, 1), BigInt::from(-2));
    }

    #[test]
    fn verify_small_and_empty() {
        let rep = verify_kkv(0).unwrap().unwrap();
        assert!(rep.gv.table.is_empty());
        assert!(rep.kkv.table.is_empty());
        let rep = verify_kkv(2).unwrap().unwrap();
        assert_eq!(rep.gv.get(0, 2), BigInt::from(324));
    }

    #[test]
    fn euler_specialization() {
        let gv = gv_table(2).unwrap();
        assert_eq!(euler_from_gv(&gv, 1), BigInt::from(24));
        assert_eq!(euler_from_gv(&gv, 2), BigInt::from(324));
        let empty = GvTable {
            kmax: 1,
            provenance: Provenance::FromDecomposition,
            table: GvInvariants::new(),
        };
        assert_eq!(euler_from_gv(&empty, 1), BigInt::zero());
    }
}
