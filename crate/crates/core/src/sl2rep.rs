//! sl₂ and sl₂×sl₂ characters.
//!
//! Weights are stored as exponents of `t`, i.e. twice the spin: the
//! 2-dimensional irrep `(½)` has character `t + t⁻¹`.
//!
//! Both decompositions below are greedy top-weight peeling. The bases are
//! unitriangular with respect to the top weight (an irrep character of twice
//! spin `n` and `(t + t⁻¹ + 2)^h` both have leading term `1·t^top`), so the
//! peeled coefficients are unique and no tie-breaking is ever needed.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::series::{Rational, Series, SeriesError, VariableSpec};

pub const T_L: &str = "t_L";
pub const T_R: &str = "t_R";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sl2Error {
    #[error("character is not symmetric under t <-> 1/t")]
    Asymmetric,
    #[error("negative multiplicity {multiplicity} for twice-spin {twice_spin} in an honest decomposition")]
    NegativeMultiplicity { twice_spin: u32, multiplicity: BigInt },
    #[error("coefficient {0} is not an integer")]
    NonInteger(Rational),
    #[error("series has unexpected variable `{0}`")]
    UnexpectedVariable(String),
    #[error("internal: nonzero residual after peeling")]
    Residual,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, Sl2Error>;

/// An sl₂ irrep, labelled by twice its spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IrrepLabel {
    pub twice_spin: u32,
}

impl IrrepLabel {
    pub const fn new(twice_spin: u32) -> Self {
        Self { twice_spin }
    }

    pub fn dimension(self) -> u32 {
        self.twice_spin + 1
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_spin.is_multiple_of(2) {
            write!(f, "({})", self.twice_spin / 2)
        } else {
            write!(f, "({}/2)", self.twice_spin)
        }
    }
}

/// Integer Laurent polynomial in one variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c.into());
        p
    }

    pub fn from_coeffs<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn top_weight(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(&e, c)| self.coeffs.get(&-e) == Some(c))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &other.coeffs {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e, v) in &self.coeffs {
            out.add_term(e, v * c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &other.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut out = LaurentPoly::constant(1);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Value at an integer point; negative exponents need `t = ±1`.
    pub fn eval_unit(&self, t: i64) -> BigInt {
        assert!(t == 1 || t == -1, "eval_unit needs t = ±1");
        self.coeffs
            .iter()
            .map(|(&e, c)| if t == -1 && e.rem_euclid(2) == 1 { -c } else { c.clone() })
            .sum()
    }

    /// `t -> t^k`.
    pub fn dilate(&self, k: i64) -> LaurentPoly {
        LaurentPoly::from_coeffs(self.coeffs.iter().map(|(&e, c)| (e * k, c.clone())))
    }

    pub fn to_series(&self, var: &str) -> Series {
        Series::from_terms(
            vec![VariableSpec::laurent(var)],
            self.coeffs
                .iter()
                .map(|(&e, c)| (vec![e], Rational::from_integer(c.clone()))),
        )
        .expect("Laurent terms are always admissible")
    }

    /// Reads a series in `var` alone (or a constant) with integer coefficients.
    pub fn from_series(s: &Series, var: &str) -> Result<LaurentPoly> {
        let pos = s.variables().iter().position(|v| v.name == var);
        let mut out = LaurentPoly::zero();
        for (e, c) in s.terms() {
            for (i, &x) in e.iter().enumerate() {
                if Some(i) != pos && x != 0 {
                    return Err(Sl2Error::UnexpectedVariable(s.variables()[i].name.clone()));
                }
            }
            if !c.is_integer() {
                return Err(Sl2Error::NonInteger(c.clone()));
            }
            let exp = pos.map_or(0, |p| e[p]);
            out.add_term(exp, c.to_integer());
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_laurent(f, self.coeffs.iter().rev().map(|(&e, c)| (e, c)), "t")
    }
}

fn fmt_laurent<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a BigInt)>,
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
        }
        first = false;
        let a = c.abs();
        match e {
            0 => write!(f, "{a}")?,
            _ => {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if e == 1 {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{e}")?;
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Integer Laurent polynomial in `(t_L, t_R)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BiCharacter {
    coeffs: BTreeMap<(i64, i64), BigInt>,
}

impl BiCharacter {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = ((i64, i64), C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c.into());
        }
        out
    }

    /// `left(t_L) * right(t_R)`.
    pub fn outer(left: &LaurentPoly, right: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (a, ca) in left.terms() {
            for (b, cb) in right.terms() {
                out.add_term((a, b), ca * cb);
            }
        }
        out
    }

    fn add_term(&mut self, key: (i64, i64), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn coeff(&self, left: i64, right: i64) -> BigInt {
        self.coeffs
            .get(&(left, right))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &BigInt)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &BiCharacter) -> BiCharacter {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BiCharacter) -> BiCharacter {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_term(k, -c);
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> BiCharacter {
        BiCharacter::from_coeffs(self.coeffs.iter().map(|(&k, v)| (k, v * c)))
    }

    pub fn mul(&self, other: &BiCharacter) -> BiCharacter {
        let mut out = BiCharacter::zero();
        for (&(a, b), ca) in &self.coeffs {
            for (&(c, d), cb) in &other.coeffs {
                out.add_term((a + c, b + d), ca * cb);
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(&(a, b), c)| {
            self.coeffs.get(&(-a, b)) == Some(c) && self.coeffs.get(&(a, -b)) == Some(c)
        })
    }

    /// Total dimension, the value at `t_L = t_R = 1`.
    pub fn dimension(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Left weight polynomial at a fixed right weight.
    pub fn left_slice(&self, right: i64) -> LaurentPoly {
        LaurentPoly::from_coeffs(
            self.coeffs
                .iter()
                .filter(|(&(_, b), _)| b == right)
                .map(|(&(a, _), c)| (a, c.clone())),
        )
    }

    pub fn to_series(&self) -> Series {
        Series::from_terms(
            vec![VariableSpec::laurent(T_L), VariableSpec::laurent(T_R)],
            self.coeffs
                .iter()
                .map(|(&(a, b), c)| (vec![a, b], Rational::from_integer(c.clone()))),
        )
        .expect("Laurent terms are always admissible")
    }

    /// Reads a series in `t_L`, `t_R` with integer coefficients.
    pub fn from_series(s: &Series) -> Result<BiCharacter> {
        let vars = s.variables();
        let pl = vars.iter().position(|v| v.name == T_L);
        let pr = vars.iter().position(|v| v.name == T_R);
        let mut out = BiCharacter::zero();
        for (e, c) in s.terms() {
            for (i, &x) in e.iter().enumerate() {
                if Some(i) != pl && Some(i) != pr && x != 0 {
                    return Err(Sl2Error::UnexpectedVariable(vars[i].name.clone()));
                }
            }
            if !c.is_integer() {
                return Err(Sl2Error::NonInteger(c.clone()));
            }
            let key = (pl.map_or(0, |p| e[p]), pr.map_or(0, |p| e[p]));
            out.add_term(key, c.to_integer());
        }
        Ok(out)
    }
}

/// `Σ_{m=-j..j} t^{2m}`.
pub fn irrep_character(j: IrrepLabel) -> LaurentPoly {
    let n = i64::from(j.twice_spin);
    LaurentPoly::from_coeffs((0..=n).map(|i| (n - 2 * i, 1)))
}

/// Multiset of irreps with (possibly negative) multiplicities, top weight first.
pub type Decomposition = Vec<(IrrepLabel, BigInt)>;

/// Clebsch–Gordan decomposition of a symmetric character.
pub fn cg_decompose(ch: &LaurentPoly, allow_virtual: bool) -> Result<Decomposition> {
    if !ch.is_symmetric() {
        return Err(Sl2Error::Asymmetric);
    }
    let mut rest = ch.clone();
    let mut out = Vec::new();
    while let Some(top) = rest.top_weight() {
        // symmetric and nonzero, so top >= 0
        let label = IrrepLabel::new(top.to_u32().ok_or(Sl2Error::Residual)?);
        let mult = rest.coeff(top);
        if mult.is_negative() && !allow_virtual {
            return Err(Sl2Error::NegativeMultiplicity {
                twice_spin: label.twice_spin,
                multiplicity: mult,
            });
        }
        rest = rest.sub(&irrep_character(label).scale(&mult));
        out.push((label, mult));
    }
    Ok(out)
}

pub fn recompose(dec: &Decomposition) -> LaurentPoly {
    dec.iter().fold(LaurentPoly::zero(), |acc, (label, m)| {
        acc.add(&irrep_character(*label).scale(m))
    })
}

/// Multiset of `(j_L, j_R)` irreps.
pub type BiDecomposition = Vec<((IrrepLabel, IrrepLabel), BigInt)>;

/// Nested decomposition: peel the top left weight, decompose its right-weight
/// coefficient, subtract, repeat.
pub fn bi_decompose(ch: &BiCharacter, allow_virtual: bool) -> Result<BiDecomposition> {
    if !ch.is_symmetric() {
        return Err(Sl2Error::Asymmetric);
    }
    let mut rest = ch.clone();
    let mut out = Vec::new();
    while let Some(top) = rest.coeffs.keys().map(|&(a, _)| a).max() {
        let left = IrrepLabel::new(top.to_u32().ok_or(Sl2Error::Residual)?);
        let slice = LaurentPoly::from_coeffs(
            rest.coeffs
                .iter()
                .filter(|(&(a, _), _)| a == top)
                .map(|(&(_, b), c)| (b, c.clone())),
        );
        for (right, mult) in cg_decompose(&slice, allow_virtual)? {
            let piece = BiCharacter::outer(&irrep_character(left), &irrep_character(right));
            rest = rest.sub(&piece.scale(&mult));
            out.push(((left, right), mult));
        }
    }
    Ok(out)
}

pub fn bi_recompose(dec: &BiDecomposition) -> BiCharacter {
    dec.iter().fold(BiCharacter::zero(), |acc, ((l, r), m)| {
        acc.add(&BiCharacter::outer(&irrep_character(*l), &irrep_character(*r)).scale(m))
    })
}

/// Character of `((½) ⊕ 2(0))^{⊗h}`, i.e. `(t + t⁻¹ + 2)^h`.
pub fn jh_basis_character(h: u32) -> LaurentPoly {
    LaurentPoly::from_coeffs([(1, 1), (0, 2), (-1, 1)]).pow(h)
}

/// Coefficients `n_h` in the `(t + t⁻¹ + 2)^h` basis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GvDecomposition {
    n: BTreeMap<u32, BigInt>,
}

impl GvDecomposition {
    pub fn get(&self, h: u32) -> BigInt {
        self.n.get(&h).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Largest `h` with a nonzero coefficient.
    pub fn max_h(&self) -> Option<u32> {
        self.n.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.n.iter().map(|(&h, c)| (h, c))
    }

    pub fn reconstruct(&self) -> LaurentPoly {
        self.n.iter().fold(LaurentPoly::zero(), |acc, (&h, c)| {
            acc.add(&jh_basis_character(h).scale(c))
        })
    }
}

/// Writes a symmetric integer Laurent polynomial as `Σ n_h (t + t⁻¹ + 2)^h`.
pub fn extract_gv(p: &LaurentPoly) -> Result<GvDecomposition> {
    if !p.is_symmetric() {
        return Err(Sl2Error::Asymmetric);
    }
    let mut rest = p.clone();
    let mut n = BTreeMap::new();
    while let Some(top) = rest.top_weight() {
        let h = top.to_u32().ok_or(Sl2Error::Residual)?;
        let c = rest.coeff(top);
        rest = rest.sub(&jh_basis_character(h).scale(&c));
        n.insert(h, c);
        if h == 0 && !rest.is_zero() {
            return Err(Sl2Error::Residual);
        }
    }
    Ok(GvDecomposition { n })
}

/// `Tr (-1)^{H_R}`: the character at `t_R = -1`.
pub fn tr_minus_one(ch: &BiCharacter) -> Result<LaurentPoly> {
    let s = ch.to_series().with_variable(VariableSpec::laurent(T_R))?;
    let specialized = s.substitute(T_R, -1)?;
    LaurentPoly::from_series(&specialized, T_L)
}
