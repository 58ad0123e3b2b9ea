//! Conversion between Gopakumar–Vafa and Gromov–Witten invariants along a ray
//! of curve classes `d·β₁`:
//!
//! ```text
//! Σ_{g,d} N_g(d) q^d λ^{2g-2} = Σ_{k,h,d} n_h(d) (1/k) (2 sin(kλ/2))^{2h-2} q^{kd}
//! ```
//!
//! Classes off the ray never mix under `k`-fold covers, so each ray is
//! handled on its own.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{int, Rational, Series, SeriesError, VariableSpec};

pub const LAMBDA: &str = "lambda";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GvgwError {
    #[error("GV entry at degree {d} exceeds dmax {dmax}")]
    GvSupport { d: u32, dmax: u32 },
    #[error("GW entry (g={g}, d={d}) lies outside gmax/hmax {hmax}, dmax {dmax}")]
    GwSupport { g: u32, d: u32, hmax: u32, dmax: u32 },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("GW input is inconsistent: n_{h}({d}) = {value} is not an integer")]
    NonIntegral { h: u32, d: u32, value: Rational },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, GvgwError>;

/// GV invariants `n_h(d)` keyed by `(h, d)`, zero entries not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GvInvariants {
    entries: BTreeMap<(u32, u32), BigInt>,
}

impl GvInvariants {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, h: u32, d: u32, n: impl Into<BigInt>) -> Result<()> {
        if d == 0 {
            return Err(GvgwError::ZeroDegree);
        }
        let n = n.into();
        if n.is_zero() {
            self.entries.remove(&(h, d));
        } else {
            self.entries.insert((h, d), n);
        }
        Ok(())
    }

    pub fn get(&self, h: u32, d: u32) -> BigInt {
        self.entries
            .get(&(h, d))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Nonzero entries as `((h, d), n)`, ordered by `h` then `d`.
    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.keys().map(|&(_, d)| d).max().unwrap_or(0)
    }

    pub fn max_genus(&self) -> Option<u32> {
        self.entries.keys().map(|&(h, _)| h).max()
    }
}

/// GW invariants `N_g(d)` keyed by `(g, d)`, zero entries not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GwInvariants {
    entries: BTreeMap<(u32, u32), Rational>,
}

impl GwInvariants {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: u32, d: u32, value: Rational) -> Result<()> {
        if d == 0 {
            return Err(GvgwError::ZeroDegree);
        }
        if value.is_zero() {
            self.entries.remove(&(g, d));
        } else {
            self.entries.insert((g, d), value);
        }
        Ok(())
    }

    pub fn get(&self, g: u32, d: u32) -> Rational {
        self.entries
            .get(&(g, d))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// `(2 sin(x/2))² = 2 − 2 cos x = Σ_{n≥1} 2 (−1)^{n+1} x^{2n} / (2n)!` with
/// `x = kλ`, through `λ^order`.
fn sin_squared(k: u32, order: i64) -> Series {
    let lam = VariableSpec::truncated(LAMBDA, order);
    let kk = Rational::from_integer(BigInt::from(k));
    let mut terms = Vec::new();
    let mut fact = BigInt::one();
    let mut n = 1i64;
    while 2 * n <= order {
        fact *= BigInt::from((2 * n - 1) * (2 * n));
        let sign = if n % 2 == 1 { 2 } else { -2 };
        let c = int(sign) * kk.pow(2 * n as i32) / Rational::from_integer(fact.clone());
        terms.push((vec![2 * n], c));
        n += 1;
    }
    Series::from_terms(vec![lam], terms).expect("exponents are in range")
}

/// `(2 sin(kλ/2))^{2h−2}` as a Laurent series in λ known through `λ^order`.
///
/// For `h = 0` the result has floor `−2` and is only known through
/// `λ^{order−4}` (two orders are spent factoring out `λ²`).
pub fn sin_power_expansion(k: u32, h: u32, order: i64) -> Result<Series> {
    let lam = VariableSpec::truncated(LAMBDA, order);
    match h {
        0 => Ok(sin_squared(k, order).invert_unit()?),
        1 => Ok(Series::one().with_variable(lam)?),
        _ => Ok(sin_squared(k, order).pow(h - 1)?),
    }
}

/// Coefficients `[λ^{2g−2}] (1/k)(2 sin(kλ/2))^{2h−2}` for `g = 0..=gmax`.
struct CoverCoefficients {
    gmax: u32,
    cache: BTreeMap<(u32, u32), Vec<Rational>>,
}

impl CoverCoefficients {
    fn new(gmax: u32) -> Self {
        Self {
            gmax,
            cache: BTreeMap::new(),
        }
    }

    fn get(&mut self, k: u32, h: u32) -> Result<&[Rational]> {
        let gmax = self.gmax;
        if let std::collections::btree_map::Entry::Vacant(e) = self.cache.entry((k, h)) {
            let order = 2 * i64::from(gmax) + 2;
            let series = sin_power_expansion(k, h, order)?;
            let inv_k = Rational::new(BigInt::one(), BigInt::from(k));
            let row = (0..=gmax)
                .map(|g| {
                    let e = 2 * i64::from(g) - 2;
                    series.coefficient_at(&[(LAMBDA, e)]).map(|c| c * &inv_k)
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            e.insert(row);
        }
        Ok(&self.cache[&(k, h)])
    }
}

/// `N_g(d)` for `g ≤ gmax`, `d ≤ dmax`.
pub fn gv_to_gw(gv: &GvInvariants, gmax: u32, dmax: u32) -> Result<GwInvariants> {
    if let Some(((_, d), _)) = gv.iter().find(|((_, d), _)| *d > dmax) {
        return Err(GvgwError::GvSupport { d, dmax });
    }
    let mut coeffs = CoverCoefficients::new(gmax);
    let mut acc: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    for ((h, base), n) in gv.iter() {
        // (2 sin)^{2h−2} starts at λ^{2h−2}, beyond every reported genus
        if h > gmax + 1 {
            continue;
        }
        let n = Rational::from_integer(n.clone());
        let mut k = 1;
        while k * base <= dmax {
            let row = coeffs.get(k, h)?;
            for (g, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                *acc.entry((g as u32, k * base)).or_insert_with(Rational::zero) += &n * c;
            }
            k += 1;
        }
    }
    let mut out = GwInvariants::new();
    for ((g, d), v) in acc {
        out.insert(g, d, v)?;
    }
    Ok(out)
}

/// Inverse of [`gv_to_gw`]: ascending in degree, multiple covers of lower
/// degrees are subtracted first, then genera are peeled from `g = 0` upward
/// using that the `k = 1, h = g` term enters `λ^{2g−2}` with coefficient 1.
pub fn gw_to_gv(gw: &GwInvariants, hmax: u32, dmax: u32) -> Result<GvInvariants> {
    if let Some(((g, d), _)) = gw.iter().find(|((g, d), _)| *g > hmax || *d > dmax) {
        return Err(GvgwError::GwSupport { g, d, hmax, dmax });
    }
    let mut coeffs = CoverCoefficients::new(hmax);
    let mut gv = GvInvariants::new();
    for d in 1..=dmax {
        let mut residual: Vec<Rational> = (0..=hmax).map(|g| gw.get(g, d)).collect();
        for k in 2..=d {
            if d % k != 0 {
                continue;
            }
            let base = d / k;
            for h in 0..=hmax {
                let n = gv.get(h, base);
                if n.is_zero() {
                    continue;
                }
                let n = Rational::from_integer(n);
                let row = coeffs.get(k, h)?;
                for (g, c) in row.iter().enumerate() {
                    residual[g] -= &n * c;
                }
            }
        }
        for g in 0..=hmax {
            let value = residual[g as usize].clone();
            if !value.is_integer() {
                return Err(GvgwError::NonIntegral { h: g, d, value });
            }
            let n = value.to_integer();
            if n.is_zero() {
                continue;
            }
            let nr = Rational::from_integer(n.clone());
            let row = coeffs.get(1, g)?.to_vec();
            for (gg, c) in row.iter().enumerate().skip(g as usize) {
                residual[gg] -= &nr * c;
            }
            gv.insert(g, d, n)?;
        }
    }
    Ok(gv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn sin_power_examples() {
        let s = sin_power_expansion(3, 1, 6).unwrap();
        assert_eq!(s.as_constant(), Some(int(1)));

        let s = sin_power_expansion(1, 0, 6).unwrap();
        assert_eq!(s.coefficient_at(&[(LAMBDA, -2)]).unwrap(), int(1));
        assert_eq!(s.coefficient_at(&[(LAMBDA, 0)]).unwrap(), rat(1, 12));
        assert_eq!(s.coefficient_at(&[(LAMBDA, 2)]).unwrap(), rat(1, 240));
        assert_eq!(s.order_of(LAMBDA), Some(2));

        let s = sin_power_expansion(1, 2, 6).unwrap();
        assert_eq!(s.coefficient_at(&[(LAMBDA, 2)]).unwrap(), int(1));
        assert_eq!(s.coefficient_at(&[(LAMBDA, 4)]).unwrap(), rat(-1, 12));
        assert_eq!(s.coefficient_at(&[(LAMBDA, 6)]).unwrap(), rat(1, 360));
    }

    #[test]
    fn genus_zero_multiple_cover() {
        let mut gv = GvInvariants::new();
        gv.insert(0, 1, 1).unwrap();
        let gw = gv_to_gw(&gv, 0, 5).unwrap();
        for d in 1..=5i64 {
            assert_eq!(gw.get(0, d as u32), rat(1, d * d * d));
        }
    }

    #[test]
    fn genus_one_cover() {
        let mut gv = GvInvariants::new();
        gv.insert(1, 1, 7).unwrap();
        let gw = gv_to_gw(&gv, 2, 4).unwrap();
        for d in 1..=4i64 {
            assert_eq!(gw.get(1, d as u32), rat(7, d));
            assert_eq!(gw.get(2, d as u32), int(0));
        }
    }

    #[test]
    fn empty_and_zero() {
        let gw = gv_to_gw(&GvInvariants::new(), 3, 3).unwrap();
        assert!(gw.is_empty());
        let gv = gw_to_gv(&GwInvariants::new(), 3, 3).unwrap();
        assert!(gv.is_empty());
    }

    #[test]
    fn pure_multiple_cover_inverts() {
        let mut gw = GwInvariants::new();
        gw.insert(0, 1, int(1)).unwrap();
        gw.insert(0, 2, rat(1, 8)).unwrap();
        let gv = gw_to_gv(&gw, 0, 2).unwrap();
        assert_eq!(gv.get(0, 1), BigInt::from(1));
        assert_eq!(gv.len(), 1);
    }

    #[test]
    fn k3_degree_one_round_trip() {
        let mut gv = GvInvariants::new();
        gv.insert(0, 1, 24).unwrap();
        gv.insert(1, 1, -2).unwrap();
        let gw = gv_to_gw(&gv, 3, 4).unwrap();
        assert_eq!(gw_to_gv(&gw, 3, 4).unwrap(), gv);
    }

    #[test]
    fn inconsistent_gw_rejected() {
        let mut gw = GwInvariants::new();
        gw.insert(0, 1, rat(1, 2)).unwrap();
        assert!(matches!(
            gw_to_gv(&gw, 1, 1),
            Err(GvgwError::NonIntegral { h: 0, d: 1, .. })
        ));
    }

    #[test]
    fn support_checks() {
        let mut gv = GvInvariants::new();
        gv.insert(0, 4, 1).unwrap();
        assert!(matches!(gv_to_gw(&gv, 1, 3), Err(GvgwError::GvSupport { .. })));
        let mut gw = GwInvariants::new();
        gw.insert(5, 1, int(1)).unwrap();
        assert!(matches!(gw_to_gv(&gw, 2, 3), Err(GvgwError::GwSupport { .. })));
        assert!(gv.insert(0, 0, 1).is_err());
    }
}
