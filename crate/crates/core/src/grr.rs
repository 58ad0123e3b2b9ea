//! Symbolic Grothendieck–Riemann–Roch on `X × Y` for a Calabi–Yau threefold `Y`.
//!
//! Cohomology of `X` is modelled as the free commutative ring on declared
//! even-degree generators; cohomology of `Y` by a basis of `H⁰, H², H⁴, H⁶`
//! with its intersection data. Only even classes appear, so the ring is
//! commutative. Degrees are real degrees and everything above total degree 8
//! is dropped: the first Chern class of a pushforward only needs the
//! `X`-degree-2, `Y`-point-class part of the degree-8 component.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::series::{rat, Rational};

/// Total degree cap of every class.
pub const DEGREE_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrrError {
    #[error("H2 and H4 bases must have equal size ({h2} vs {h4})")]
    BasisMismatch { h2: usize, h4: usize },
    #[error("pairing matrix has determinant {0}, expected ±1")]
    NotUnimodular(BigInt),
    #[error("conflicting triple product values for {0:?}")]
    TripleConflict([usize; 3]),
    #[error("index {0} out of range")]
    Index(usize),
    #[error("generator `{0}` has odd or zero degree")]
    BadGeneratorDegree(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{which} should be homogeneous of degree {expected}, found a term of degree {found}")]
    Degree {
        which: &'static str,
        expected: u32,
        found: u32,
    },
    #[error("{0} has a non-integral coefficient")]
    NonIntegralInput(&'static str),
}

pub type Result<T> = std::result::Result<T, GrrError>;

/// Basis element on the `Y` side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum YBasis {
    One,
    H2(usize),
    H4(usize),
    Point,
}

impl YBasis {
    pub fn degree(self) -> u32 {
        match self {
            YBasis::One => 0,
            YBasis::H2(_) => 2,
            YBasis::H4(_) => 4,
            YBasis::Point => 6,
        }
    }
}

/// Intersection data of a Calabi–Yau threefold on torsion-free cohomology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cy3Data {
    h2: Vec<String>,
    h4: Vec<String>,
    /// `∫ D_i · E_k`
    pairing: Vec<Vec<BigInt>>,
    /// `∫ D_i D_j D_l`, symmetric
    triple: Vec<Vec<Vec<BigInt>>>,
    /// `c₂(T_Y)` in the `H⁴` basis
    c2: Vec<BigInt>,
    /// `D_i · D_j` in the `H⁴` basis
    square: Vec<Vec<Vec<Rational>>>,
}

impl Cy3Data {
    pub fn new(
        h2: Vec<String>,
        h4: Vec<String>,
        pairing: Vec<Vec<BigInt>>,
        triple_entries: Vec<([usize; 3], BigInt)>,
        c2: Vec<BigInt>,
    ) -> Result<Self> {
        let n = h2.len();
        if h4.len() != n {
            return Err(GrrError::BasisMismatch { h2: n, h4: h4.len() });
        }
        check_unique(h2.iter().chain(&h4))?;
        if pairing.len() != n || pairing.iter().any(|r| r.len() != n) || c2.len() != n {
            return Err(GrrError::BasisMismatch { h2: n, h4: pairing.len() });
        }
        let p: Vec<Vec<Rational>> = pairing
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        let (det, inverse) = invert_matrix(&p);
        if det.abs() != Rational::one() {
            return Err(GrrError::NotUnimodular(det.to_integer()));
        }

        let mut triple = vec![vec![vec![BigInt::zero(); n]; n]; n];
        let mut seen = vec![vec![vec![false; n]; n]; n];
        for (idx, v) in triple_entries {
            if idx.iter().any(|&i| i >= n) {
                return Err(GrrError::Index(*idx.iter().max().unwrap_or(&0)));
            }
            let mut sorted = idx;
            sorted.sort_unstable();
            for [a, b, c] in permutations(sorted) {
                if seen[a][b][c] && triple[a][b][c] != v {
                    return Err(GrrError::TripleConflict(sorted));
                }
                seen[a][b][c] = true;
                triple[a][b][c] = v.clone();
            }
        }

        // P c = T_ij  =>  c = P^{-1} T_ij
        let mut square = vec![vec![vec![Rational::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    square[i][j][k] = (0..n)
                        .map(|l| &inverse[k][l] * Rational::from_integer(triple[i][j][l].clone()))
                        .sum();
                }
            }
        }
        Ok(Self {
            h2,
            h4,
            pairing,
            triple,
            c2,
            square,
        })
    }

    /// Uses the basis of `H⁴` dual to the `H²` basis (identity pairing);
    /// `c2_dot[i] = ∫ c₂ · D_i`.
    pub fn with_dual_basis(
        h2: &[&str],
        triple_entries: Vec<([usize; 3], i64)>,
        c2_dot: &[i64],
    ) -> Result<Self> {
        let n = h2.len();
        let pairing = (0..n)
            .map(|i| (0..n).map(|k| BigInt::from(i64::from(i == k))).collect())
            .collect();
        Self::new(
            h2.iter().map(|s| (*s).to_owned()).collect(),
            h2.iter().map(|s| format!("{s}*")).collect(),
            pairing,
            triple_entries
                .into_iter()
                .map(|(i, v)| (i, BigInt::from(v)))
                .collect(),
            c2_dot.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    /// Quintic threefold: `H³ = 5`, `c₂·H = 50`.
    pub fn quintic() -> Self {
        Self::with_dual_basis(&["H"], vec![([0, 0, 0], 5)], &[50]).expect("valid preset")
    }

    /// Bicubic in `P² × P²`: `J₁²J₂ = J₁J₂² = 3`, `c₂·J_i = 36`.
    pub fn bicubic() -> Self {
        Self::with_dual_basis(
            &["J1", "J2"],
            vec![([0, 0, 1], 3), ([0, 1, 1], 3)],
            &[36, 36],
        )
        .expect("valid preset")
    }

    /// Degree `(2,4)` hypersurface in `P¹ × P³`, a K3 fibration.
    pub fn k3_fibration() -> Self {
        Self::with_dual_basis(
            &["F", "H"],
            vec![([0, 1, 1], 4), ([1, 1, 1], 2)],
            &[24, 44],
        )
        .expect("valid preset")
    }

    pub fn presets() -> Vec<(&'static str, Cy3Data)> {
        vec![
            ("quintic", Self::quintic()),
            ("bicubic", Self::bicubic()),
            ("k3-fibration", Self::k3_fibration()),
        ]
    }

    pub fn h2_names(&self) -> &[String] {
        &self.h2
    }

    pub fn h4_names(&self) -> &[String] {
        &self.h4
    }

    pub fn pairing(&self) -> &[Vec<BigInt>] {
        &self.pairing
    }

    pub fn triple(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.triple[i][j][k]
    }

    pub fn c2(&self) -> &[BigInt] {
        &self.c2
    }

    pub fn rank(&self) -> usize {
        self.h2.len()
    }

    /// `∫ c₂ · D_i`.
    pub fn c2_dot(&self, i: usize) -> BigInt {
        (0..self.rank())
            .map(|k| &self.pairing[i][k] * &self.c2[k])
            .sum()
    }

    fn lookup(&self, name: &str) -> Option<YBasis> {
        match name {
            "1" => Some(YBasis::One),
            "pt" => Some(YBasis::Point),
            _ => self
                .h2
                .iter()
                .position(|n| n == name)
                .map(YBasis::H2)
                .or_else(|| self.h4.iter().position(|n| n == name).map(YBasis::H4)),
        }
    }

    pub fn y_name(&self, y: YBasis) -> String {
        match y {
            YBasis::One => "1".into(),
            YBasis::Point => "pt".into(),
            YBasis::H2(i) => self.h2[i].clone(),
            YBasis::H4(i) => self.h4[i].clone(),
        }
    }

    fn mul_y(&self, a: YBasis, b: YBasis) -> Vec<(YBasis, Rational)> {
        use YBasis::*;
        match (a, b) {
            (One, x) | (x, One) => vec![(x, Rational::one())],
            (H2(i), H2(j)) => self.square[i][j]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (H4(k), c.clone()))
                .collect(),
            (H2(i), H4(k)) | (H4(k), H2(i)) => {
                vec![(Point, Rational::from_integer(self.pairing[i][k].clone()))]
            }
            _ => Vec::new(),
        }
    }
}

fn check_unique<'a>(names: impl Iterator<Item = &'a String>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if n == "1" || n == "pt" || !seen.insert(n.clone()) {
            return Err(GrrError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

fn permutations([a, b, c]: [usize; 3]) -> [[usize; 3]; 6] {
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}

/// Determinant and inverse (the inverse is meaningless when the determinant is zero).
fn invert_matrix(m: &[Vec<Rational>]) -> (Rational, Vec<Vec<Rational>>) {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return (Rational::zero(), inv);
        };
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (a[col][j].clone(), inv[col][j].clone());
                    a[r][j] -= &f * x;
                    inv[r][j] -= &f * y;
                }
            }
        }
    }
    (det, inv)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XGenerator {
    pub name: String,
    pub degree: u32,
}

/// Exponent vector over the model's `X` generators.
pub type XMonomial = Vec<u32>;

/// Element of `H^even(X × Y; ℚ)` (possibly inhomogeneous).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KunnethClass {
    terms: BTreeMap<(XMonomial, YBasis), Rational>,
}

impl KunnethClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XMonomial, YBasis, &Rational)> {
        self.terms.iter().map(|((x, y), c)| (x, *y, c))
    }

    fn add_term(&mut self, x: XMonomial, y: YBasis, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((x, y)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &KunnethClass) -> KunnethClass {
        let mut out = self.clone();
        for ((x, y), c) in &other.terms {
            out.add_term(x.clone(), *y, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &KunnethClass) -> KunnethClass {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> KunnethClass {
        let mut out = KunnethClass::zero();
        for ((x, y), v) in &self.terms {
            out.add_term(x.clone(), *y, v * c);
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

/// Degree-2 class on `X` with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct XClass {
    terms: BTreeMap<XMonomial, Rational>,
}

impl XClass {
    pub fn terms(&self) -> impl Iterator<Item = (&XMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn is_even(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && c.to_integer().is_even())
    }

    pub fn add(&self, other: &XClass) -> XClass {
        let mut terms = self.terms.clone();
        for (x, c) in &other.terms {
            let e = terms.entry(x.clone()).or_insert_with(Rational::zero);
            *e += c;
        }
        terms.retain(|_, v| !v.is_zero());
        XClass { terms }
    }

    pub fn scale(&self, c: &Rational) -> XClass {
        let mut terms: BTreeMap<XMonomial, Rational> =
            self.terms.iter().map(|(x, v)| (x.clone(), v * c)).collect();
        terms.retain(|_, v| !v.is_zero());
        XClass { terms }
    }
}

/// Chern data of a family `E` on `X × Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernData {
    pub rank: BigInt,
    pub alpha1: KunnethClass,
    pub alpha2: KunnethClass,
    pub alpha3: KunnethClass,
    /// Degree-8 (complex degree 4) Chern character component.
    pub delta4: KunnethClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityReport {
    /// Torsion-free part of `c₁(det Ext_π(E, E))`.
    pub c1: XClass,
    pub integral: bool,
    /// `None` when `c1` is not integral.
    pub even: Option<bool>,
    /// Present when `α₁ = 0`: `c₁ = π_*(α₂²) + 2r·c₁(π_!E)`.
    pub split: Option<ParitySplit>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySplit {
    pub alpha2_square: XClass,
    pub index_c1: XClass,
    pub rank: BigInt,
}

/// A Künneth ring: `X` generators plus `Y` intersection data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrrModel {
    x_gens: Vec<XGenerator>,
    cy: Cy3Data,
}

impl GrrModel {
    pub fn new(x_gens: Vec<XGenerator>, cy: Cy3Data) -> Result<Self> {
        for g in &x_gens {
            if g.degree == 0 || g.degree % 2 == 1 {
                return Err(GrrError::BadGeneratorDegree(g.name.clone()));
            }
        }
        let names: Vec<String> = x_gens.iter().map(|g| g.name.clone()).collect();
        check_unique(names.iter().chain(cy.h2_names()).chain(cy.h4_names()))?;
        Ok(Self { x_gens, cy })
    }

    /// `X` generated by degree-2 classes with the given names.
    pub fn with_divisors(names: &[&str], cy: Cy3Data) -> Result<Self> {
        Self::new(
            names
                .iter()
                .map(|n| XGenerator {
                    name: (*n).to_owned(),
                    degree: 2,
                })
                .collect(),
            cy,
        )
    }

    pub fn cy(&self) -> &Cy3Data {
        &self.cy
    }

    pub fn x_generators(&self) -> &[XGenerator] {
        &self.x_gens
    }

    pub fn x_degree(&self, x: &[u32]) -> u32 {
        x.iter().zip(&self.x_gens).map(|(e, g)| e * g.degree).sum()
    }

    pub fn term_degree(&self, x: &[u32], y: YBasis) -> u32 {
        self.x_degree(x) + y.degree()
    }

    pub fn x_monomial_names(&self, x: &[u32]) -> Vec<String> {
        x.iter()
            .zip(&self.x_gens)
            .flat_map(|(&e, g)| std::iter::repeat_n(g.name.clone(), e as usize))
            .collect()
    }

    /// Parses a list of `X` generator names (repetition = power).
    pub fn x_monomial(&self, names: &[impl AsRef<str>]) -> Result<XMonomial> {
        let mut x = vec![0; self.x_gens.len()];
        for n in names {
            let n = n.as_ref();
            let i = self
                .x_gens
                .iter()
                .position(|g| g.name == n)
                .ok_or_else(|| GrrError::UnknownName(n.to_owned()))?;
            x[i] += 1;
        }
        Ok(x)
    }

    pub fn y_basis(&self, name: &str) -> Result<YBasis> {
        self.cy
            .lookup(name)
            .ok_or_else(|| GrrError::UnknownName(name.to_owned()))
    }

    pub fn term(&self, x: XMonomial, y: YBasis, c: Rational) -> KunnethClass {
        let mut k = KunnethClass::zero();
        if self.term_degree(&x, y) <= DEGREE_CAP {
            k.add_term(x, y, c);
        }
        k
    }

    pub fn constant(&self, c: Rational) -> KunnethClass {
        self.term(vec![0; self.x_gens.len()], YBasis::One, c)
    }

    /// `x ⊗ 1` for the named `X` generator.
    pub fn x_class(&self, name: &str) -> Result<KunnethClass> {
        Ok(self.term(self.x_monomial(&[name])?, YBasis::One, Rational::one()))
    }

    /// `1 ⊗ y`.
    pub fn y_class(&self, y: YBasis) -> KunnethClass {
        self.term(vec![0; self.x_gens.len()], y, Rational::one())
    }

    pub fn c2_class(&self) -> KunnethClass {
        let mut k = KunnethClass::zero();
        for (i, c) in self.cy.c2.iter().enumerate() {
            k = k.add(&self.y_class(YBasis::H4(i)).scale(&Rational::from_integer(c.clone())));
        }
        k
    }

    pub fn mul(&self, a: &KunnethClass, b: &KunnethClass) -> KunnethClass {
        let mut out = KunnethClass::zero();
        for ((xa, ya), ca) in &a.terms {
            let da = self.term_degree(xa, *ya);
            for ((xb, yb), cb) in &b.terms {
                if da + self.term_degree(xb, *yb) > DEGREE_CAP {
                    continue;
                }
                let x: XMonomial = xa.iter().zip(xb).map(|(p, q)| p + q).collect();
                for (y, c) in self.cy.mul_y(*ya, *yb) {
                    out.add_term(x.clone(), y, ca * cb * c);
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &KunnethClass, n: u32) -> KunnethClass {
        (0..n).fold(self.constant(Rational::one()), |acc, _| self.mul(&acc, a))
    }

    /// Homogeneous component of total degree `deg`.
    pub fn part(&self, a: &KunnethClass, deg: u32) -> KunnethClass {
        let mut out = KunnethClass::zero();
        for ((x, y), c) in &a.terms {
            if self.term_degree(x, *y) == deg {
                out.add_term(x.clone(), *y, c.clone());
            }
        }
        out
    }

    pub fn check_degree(
        &self,
        a: &KunnethClass,
        which: &'static str,
        expected: u32,
    ) -> Result<()> {
        for (x, y) in a.terms.keys() {
            let found = self.term_degree(x, *y);
            if found != expected {
                return Err(GrrError::Degree {
                    which,
                    expected,
                    found,
                });
            }
        }
        Ok(())
    }

    pub fn chern_data(
        &self,
        rank: impl Into<BigInt>,
        alpha1: KunnethClass,
        alpha2: KunnethClass,
        alpha3: KunnethClass,
        delta4: KunnethClass,
    ) -> Result<ChernData> {
        self.check_degree(&alpha1, "alpha1", 2)?;
        self.check_degree(&alpha2, "alpha2", 4)?;
        self.check_degree(&alpha3, "alpha3", 6)?;
        self.check_degree(&delta4, "delta4", 8)?;
        Ok(ChernData {
            rank: rank.into(),
            alpha1,
            alpha2,
            alpha3,
            delta4,
        })
    }

    /// `r + α₁ + ½(α₁² − 2α₂) + ⅙(α₁³ − 3α₁α₂ + 3α₃) + δ₄`.
    pub fn chern_character(&self, cd: &ChernData) -> KunnethClass {
        let a1 = &cd.alpha1;
        let a1sq = self.mul(a1, a1);
        let a1a2 = self.mul(a1, &cd.alpha2);
        let ch2 = a1sq.sub(&cd.alpha2.scale(&Rational::from_integer(2.into())));
        let ch3 = self
            .mul(&a1sq, a1)
            .sub(&a1a2.scale(&Rational::from_integer(3.into())))
            .add(&cd.alpha3.scale(&Rational::from_integer(3.into())));
        self.constant(Rational::from_integer(cd.rank.clone()))
            .add(a1)
            .add(&ch2.scale(&rat(1, 2)))
            .add(&ch3.scale(&rat(1, 6)))
            .add(&cd.delta4)
    }

    /// `ch_i(E^∨) = (−1)^i ch_i(E)`, `i` the complex degree.
    pub fn dual_character(&self, ch: &KunnethClass) -> KunnethClass {
        let mut out = KunnethClass::zero();
        for ((x, y), c) in &ch.terms {
            let sign = if self.term_degree(x, *y) % 4 == 2 { -c } else { c.clone() };
            out.add_term(x.clone(), *y, sign);
        }
        out
    }

    /// `ch(E^∨ ⊗ E)`.
    pub fn rhom_character(&self, cd: &ChernData) -> KunnethClass {
        let ch = self.chern_character(cd);
        self.mul(&ch, &self.dual_character(&ch))
    }

    /// Multiplication by `td(Y) = 1 + c₂(T_Y)/12`.
    pub fn todd_multiply(&self, ch: &KunnethClass) -> KunnethClass {
        let td = self
            .constant(Rational::one())
            .add(&self.c2_class().scale(&rat(1, 12)));
        self.mul(ch, &td)
    }

    /// `π_*` restricted to the degree-8 component: the `X`-degree-2 coefficient
    /// of the point class.
    pub fn pushforward_c1(&self, total: &KunnethClass) -> XClass {
        let mut terms = BTreeMap::new();
        for ((x, y), c) in &total.terms {
            if *y == YBasis::Point && self.x_degree(x) == 2 {
                *terms.entry(x.clone()).or_insert_with(Rational::zero) += c;
            }
        }
        terms.retain(|_, v: &mut Rational| !v.is_zero());
        XClass { terms }
    }

    /// `c₁(π_! E) = π_*(ch(E) td(Y))₁`.
    pub fn index_c1(&self, cd: &ChernData) -> XClass {
        self.pushforward_c1(&self.todd_multiply(&self.chern_character(cd)))
    }

    /// `c₁(Ext_π(E, E)) = π_*(ch(E^∨ ⊗ E) td(Y))₁`.
    pub fn ext_c1(&self, cd: &ChernData) -> XClass {
        self.pushforward_c1(&self.todd_multiply(&self.rhom_character(cd)))
    }

    /// Line bundle with first Chern class `alpha1`.
    pub fn line_bundle(&self, alpha1: KunnethClass) -> Result<ChernData> {
        let d4 = self.pow(&alpha1, 4).scale(&rat(1, 24));
        self.chern_data(
            1,
            alpha1,
            KunnethClass::zero(),
            KunnethClass::zero(),
            self.part(&d4, 8),
        )
    }

    /// `(det E)^{-1}`.
    pub fn inverse_determinant(&self, cd: &ChernData) -> Result<ChernData> {
        self.line_bundle(cd.alpha1.scale(&-Rational::one()))
    }

    /// `F = E ⊕ (det E)^{-1}`, which has `c₁(F) = 0`.
    pub fn det_twist_reduce(&self, cd: &ChernData) -> Result<ChernData> {
        let a1 = &cd.alpha1;
        let a1sq = self.mul(a1, a1);
        let alpha2 = cd.alpha2.sub(&a1sq);
        let alpha3 = cd.alpha3.sub(&self.mul(a1, &cd.alpha2));
        let delta4 = cd
            .delta4
            .add(&self.pow(a1, 4).scale(&rat(1, 24)));
        self.chern_data(
            &cd.rank + BigInt::one(),
            KunnethClass::zero(),
            self.part(&alpha2, 4),
            self.part(&alpha3, 6),
            self.part(&delta4, 8),
        )
    }

    /// Computes `c₁(det Ext_π(E, E))` and checks it is an even integral class.
    pub fn parity_check(&self, cd: &ChernData) -> Result<ParityReport> {
        for (which, a) in [
            ("alpha1", &cd.alpha1),
            ("alpha2", &cd.alpha2),
            ("alpha3", &cd.alpha3),
        ] {
            if !a.is_integral() {
                return Err(GrrError::NonIntegralInput(which));
            }
        }
        let c1 = self.ext_c1(cd);
        let integral = c1.is_integral();
        let split = cd.alpha1.is_zero().then(|| ParitySplit {
            alpha2_square: self.pushforward_c1(&self.mul(&cd.alpha2, &cd.alpha2)),
            index_c1: self.index_c1(cd),
            rank: cd.rank.clone(),
        });
        Ok(ParityReport {
            even: integral.then(|| c1.is_even()),
            c1,
            integral,
            split,
        })
    }

    /// Renders an `X` class as `2*x1 - 4*x2`.
    pub fn display_x<'a>(&'a self, c: &'a XClass) -> impl fmt::Display + 'a {
        DisplayX { model: self, class: c }
    }
}

struct DisplayX<'a> {
    model: &'a GrrModel,
    class: &'a XClass,
}

impl fmt::Display for DisplayX<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.class.is_zero() {
            return write!(f, "0");
        }
        for (i, (x, c)) in self.class.terms.iter().enumerate() {
            let names = self.model.x_monomial_names(x).join("*");
            let sign = match (i, c.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let abs = c.abs();
            if abs.is_one() {
                write!(f, "{sign}{names}")?;
            } else {
                write!(f, "{sign}{abs}*{names}")?;
            }
        }
        Ok(())
    }
}

/// Which corner of the random corpus to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomPath {
    /// `c₁(E) = 0` by construction.
    Alpha1Zero,
    /// Arbitrary `c₁(E)`; reduce with [`GrrModel::det_twist_reduce`].
    General,
}

/// Random integral Chern data of a virtual sum `Σ ±L_i` of line bundles with
/// `c₁(L_i) = u_i ⊗ 1 + 1 ⊗ D_i`. Such data are honest Chern data of perfect
/// complexes, so they satisfy every integrality constraint a real family does.
pub fn random_chern_data<R: Rng + ?Sized>(
    model: &GrrModel,
    rng: &mut R,
    path: RandomPath,
) -> ChernData {
    let nx = model.x_generators().len();
    let ny = model.cy().rank();
    let random_c1 = |rng: &mut R| -> Vec<i64> {
        (0..nx + ny).map(|_| rng.gen_range(-2..=2)).collect()
    };
    let count = rng.gen_range(2..=4);
    let mut signs: Vec<i64> = (0..count).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    signs.shuffle(rng);
    let mut c1s: Vec<Vec<i64>> = (0..count).map(|_| random_c1(rng)).collect();
    if path == RandomPath::Alpha1Zero {
        // choose the last c1 so that Σ s_i c1_i = 0
        let last = count - 1;
        let mut acc = vec![0i64; nx + ny];
        for i in 0..last {
            for (a, v) in acc.iter_mut().zip(&c1s[i]) {
                *a += signs[i] * v;
            }
        }
        c1s[last] = acc.iter().map(|a| -signs[last] * a).collect();
    }
    split_chern_data(model, &signs, &c1s)
}

/// Chern data of `Σ s_i L_i` where `c1s[i]` lists the coefficients of
/// `c₁(L_i)` on the `X` generators (degree 2 ones only) followed by the `H²`
/// basis of `Y`.
pub fn split_chern_data(model: &GrrModel, signs: &[i64], c1s: &[Vec<i64>]) -> ChernData {
    let nx = model.x_generators().len();
    let one = model.constant(Rational::one());
    let mut total_c = one.clone();
    let mut ch = KunnethClass::zero();
    let mut rank = BigInt::zero();
    for (s, coords) in signs.iter().zip(c1s) {
        let mut c1 = KunnethClass::zero();
        for (i, &v) in coords.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let basis = if i < nx {
                let mut x = vec![0; nx];
                x[i] = 1;
                if model.x_degree(&x) != 2 {
                    continue;
                }
                model.term(x, YBasis::One, Rational::one())
            } else {
                model.y_class(YBasis::H2(i - nx))
            };
            c1 = c1.add(&basis.scale(&Rational::from_integer(v.into())));
        }
        // exp(c1) and c(L)^{±1}
        let mut exp = KunnethClass::zero();
        let mut fact = BigInt::one();
        for n in 0..=4u32 {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            exp = exp.add(
                &model
                    .pow(&c1, n)
                    .scale(&Rational::new(BigInt::one(), fact.clone())),
            );
        }
        let chern = if *s > 0 {
            one.add(&c1)
        } else {
            let minus = c1.scale(&-Rational::one());
            (0..=4).fold(KunnethClass::zero(), |acc, n| acc.add(&model.pow(&minus, n)))
        };
        total_c = model.mul(&total_c, &chern);
        ch = ch.add(&exp.scale(&Rational::from_integer((*s).into())));
        rank += *s;
    }
    ChernData {
        rank,
        alpha1: model.part(&total_c, 2),
        alpha2: model.part(&total_c, 4),
        alpha3: model.part(&total_c, 6),
        delta4: model.part(&ch, 8),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;

    fn model() -> GrrModel {
        GrrModel::with_divisors(&["x1", "x2"], Cy3Data::bicubic()).unwrap()
    }

    #[test]
    fn presets_satisfy_index_integrality() {
        // χ(O(D)) = D³/6 + c₂·D/12 must be an integer on every lattice point
        for (_, cy) in Cy3Data::presets() {
            let n = cy.rank();
            let pts: Vec<Vec<i64>> = (0..3i64.pow(n as u32))
                .map(|mut v| {
                    (0..n)
                        .map(|_| {
                            let d = v % 3 - 1;
                            v /= 3;
                            d
                        })
                        .collect()
                })
                .collect();
            for p in pts {
                let mut cube = BigInt::zero();
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            cube += cy.triple(i, j, k) * p[i] * p[j] * p[k];
                        }
                    }
                }
                let c2d: BigInt = (0..n).map(|i| cy.c2_dot(i) * p[i]).sum();
                let chi = Rational::new(cube, 6.into()) + Rational::new(c2d, 12.into());
                assert!(chi.is_integer(), "{p:?}");
            }
        }
    }

    #[test]
    fn pairing_must_be_unimodular() {
        let err = Cy3Data::new(
            vec!["D".into()],
            vec!["E".into()],
            vec![vec![BigInt::from(2)]],
            vec![],
            vec![BigInt::zero()],
        );
        assert!(matches!(err, Err(GrrError::NotUnimodular(_))));
    }

    #[test]
    fn y_products_follow_triple_products() {
        let m = model();
        let j1 = m.y_class(YBasis::H2(0));
        let j2 = m.y_class(YBasis::H2(1));
        let cube = m.mul(&m.mul(&j1, &j1), &j2);
        assert_eq!(
            cube.terms().map(|(_, y, c)| (y, c.clone())).collect::<Vec<_>>(),
            vec![(YBasis::Point, int(3))]
        );
        assert!(m.mul(&m.mul(&j1, &j1), &j1).is_zero());
    }

    #[test]
    fn line_bundle_character_is_exponential() {
        let m = model();
        let a1 = m.x_class("x1").unwrap().add(&m.y_class(YBasis::H2(0)));
        let lb = m.line_bundle(a1.clone()).unwrap();
        let ch = m.chern_character(&lb);
        let mut expect = m.constant(int(1));
        let mut fact = 1;
        for n in 1..=4 {
            fact *= n;
            expect = expect.add(&m.pow(&a1, n as u32).scale(&rat(1, fact)));
        }
        assert_eq!(ch, expect);
        let rep = m.parity_check(&lb).unwrap();
        assert!(rep.c1.is_zero());
        assert_eq!(rep.even, Some(true));
    }

    #[test]
    fn rank_zero_character() {
        let m = model();
        let a2 = m.y_class(YBasis::H4(0)).add(&m.term(vec![1, 0], YBasis::H2(1), int(1)));
        let a3 = m.y_class(YBasis::Point).scale(&int(2));
        let d4 = m.term(vec![1, 0], YBasis::Point, int(5));
        let cd = m
            .chern_data(0, KunnethClass::zero(), a2.clone(), a3.clone(), d4.clone())
            .unwrap();
        let ch = m.chern_character(&cd);
        let expect = a2.scale(&int(-1)).add(&a3.scale(&rat(1, 2))).add(&d4);
        assert_eq!(ch, expect);
        assert!(m.chern_character(&m.chern_data(0, KunnethClass::zero(), KunnethClass::zero(), KunnethClass::zero(), KunnethClass::zero()).unwrap()).is_zero());
    }

    #[test]
    fn dual_flips_odd_parts() {
        let m = model();
        let c = m
            .constant(int(3))
            .add(&m.y_class(YBasis::H2(0)))
            .add(&m.y_class(YBasis::H4(1)));
        let d = m.dual_character(&c);
        assert_eq!(m.part(&d, 0), m.constant(int(3)));
        assert_eq!(m.part(&d, 2), m.y_class(YBasis::H2(0)).scale(&int(-1)));
        assert_eq!(m.part(&d, 4), m.y_class(YBasis::H4(1)));
        assert_eq!(m.dual_character(&d), c);
    }

    #[test]
    fn rhom_rank_zero_is_alpha2_squared() {
        let m = model();
        let a2 = m
            .y_class(YBasis::H4(0))
            .add(&m.term(vec![1, 0], YBasis::H2(1), int(1)))
            .add(&m.term(vec![2, 0], YBasis::One, int(1)));
        let cd = m
            .chern_data(0, KunnethClass::zero(), a2.clone(), KunnethClass::zero(), KunnethClass::zero())
            .unwrap();
        let rhom = m.rhom_character(&cd);
        assert_eq!(rhom, m.part(&m.mul(&a2, &a2), 8));
    }

    #[test]
    fn todd_examples() {
        let m = model();
        let r = m.constant(int(4));
        let expect = r.add(&m.c2_class().scale(&rat(4, 12)));
        assert_eq!(m.todd_multiply(&r), expect);
        let pt = m.term(vec![1, 0], YBasis::Point, int(1));
        assert_eq!(m.todd_multiply(&pt), pt);
    }

    #[test]
    fn pushforward_examples() {
        let m = model();
        assert!(m.pushforward_c1(&m.constant(int(1))).is_zero());
        let from_y = m.y_class(YBasis::H2(0)).add(&m.y_class(YBasis::H2(1)).scale(&int(2)));
        let lb = m.line_bundle(from_y).unwrap();
        assert!(m.ext_c1(&lb).is_zero());
        assert!(m.index_c1(&lb).is_zero());
    }

    #[test]
    fn kunneth_proof_fixture() {
        // α₂ = A₂ ⊗ 1 + A₁ ⊗ B₁ + 1 ⊗ B₂, with A on Y and B on X
        let m = GrrModel::new(
            vec![
                XGenerator { name: "B1".into(), degree: 2 },
                XGenerator { name: "B2".into(), degree: 4 },
            ],
            Cy3Data::quintic(),
        )
        .unwrap();
        let a2_y = m.y_class(YBasis::H4(0)).scale(&int(3));
        let a1_y = m.y_class(YBasis::H2(0)).scale(&int(2));
        let b1 = m.x_class("B1").unwrap();
        let b2 = m.x_class("B2").unwrap();
        let alpha2 = a2_y.add(&m.mul(&a1_y, &b1)).add(&b2);
        let cd = m
            .chern_data(0, KunnethClass::zero(), alpha2, KunnethClass::zero(), KunnethClass::zero())
            .unwrap();
        let rep = m.parity_check(&cd).unwrap();
        // ∫ A₂A₁ = 3·2·(H*·H) = 6, so c₁ = 12·B1
        let terms: Vec<_> = rep.c1.terms().map(|(x, c)| (m.x_monomial_names(x), c.clone())).collect();
        assert_eq!(terms, vec![(vec!["B1".to_owned()], int(12))]);
        assert_eq!(rep.even, Some(true));
    }

    #[test]
    fn reduction_examples() {
        let m = model();
        let a2 = m.y_class(YBasis::H4(0));
        let cd = m
            .chern_data(2, KunnethClass::zero(), a2.clone(), KunnethClass::zero(), KunnethClass::zero())
            .unwrap();
        let red = m.det_twist_reduce(&cd).unwrap();
        assert_eq!(red.rank, BigInt::from(3));
        assert_eq!(red.alpha2, cd.alpha2);
        assert_eq!(red.alpha3, cd.alpha3);
        assert_eq!(red.delta4, cd.delta4);

        let t = m.x_class("x1").unwrap();
        let lb = m.line_bundle(t).unwrap();
        let red = m.det_twist_reduce(&lb).unwrap();
        assert!(red.alpha1.is_zero());
        assert_eq!(red.rank, BigInt::from(2));
    }

    #[test]
    fn non_integral_input_rejected() {
        let m = model();
        let a2 = m.y_class(YBasis::H4(0)).scale(&rat(1, 2));
        let cd = m
            .chern_data(0, KunnethClass::zero(), a2, KunnethClass::zero(), KunnethClass::zero())
            .unwrap();
        assert!(matches!(m.parity_check(&cd), Err(GrrError::NonIntegralInput("alpha2"))));
    }

    #[test]
    fn degree_validation() {
        let m = model();
        let bad = m.y_class(YBasis::H2(0));
        assert!(matches!(
            m.chern_data(0, KunnethClass::zero(), bad, KunnethClass::zero(), KunnethClass::zero()),
            Err(GrrError::Degree { which: "alpha2", .. })
        ));
    }
}
