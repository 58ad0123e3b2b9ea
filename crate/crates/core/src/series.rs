//! Exact multivariate Laurent series with rational coefficients.
//!
//! A [`Series`] lives in a context of named variables. Each variable is either
//! *Laurent* (any integer exponent, finitely many terms, exact) or *truncated*
//! (exponents bounded below by a floor and known exactly up to an inclusive
//! order). Everything above a truncated variable's order is unknown and never
//! stored.
//!
//! Invariants:
//! - the context is sorted by variable name and names are unique
//! - no stored coefficient is zero
//! - every exponent of a truncated variable lies in `floor..=order`

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable `{0}` is truncated in one operand and Laurent in the other")]
    IncompatibleKinds(String),
    #[error("series is not a unit: {0}")]
    NonUnit(String),
    #[error("cannot substitute zero for Laurent variable `{0}`")]
    ZeroSubstitution(String),
    #[error("variable `{0}` is not a Laurent variable of this series")]
    NotLaurent(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent {k} of `{var}` exceeds its truncation order {order}")]
    OutOfRange { var: String, k: i64, order: i64 },
    #[error("exponent {k} of `{var}` is below its floor {floor}")]
    BelowFloor { var: String, k: i64, floor: i64 },
    #[error("expected a monomial, got {0} terms")]
    NotMonomial(usize),
    #[error("substituted monomial may only involve Laurent variables, found `{0}`")]
    TruncatedInValue(String),
    #[error("exponent vector has length {got}, context has {expected} variables")]
    Arity { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Exponents lie in `floor..=order`; coefficients above `order` are unknown.
    Truncated { order: i64, floor: i64 },
    Laurent,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableSpec {
    pub name: String,
    pub kind: VarKind,
}

impl VariableSpec {
    pub fn laurent(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            kind: VarKind::Laurent,
        }
    }

    pub fn truncated(name: &str, order: i64) -> Self {
        Self::truncated_with_floor(name, order, 0)
    }

    pub fn truncated_with_floor(name: &str, order: i64, floor: i64) -> Self {
        Self {
            name: name.to_owned(),
            kind: VarKind::Truncated { order, floor },
        }
    }

    pub fn is_laurent(&self) -> bool {
        matches!(self.kind, VarKind::Laurent)
    }

    fn admits(&self, e: i64) -> bool {
        match self.kind {
            VarKind::Laurent => true,
            VarKind::Truncated { order, floor } => e >= floor && e <= order,
        }
    }
}

/// How two operand contexts are merged.
#[derive(Clone, Copy)]
enum Merge {
    Sum,
    Product,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    vars: Vec<VariableSpec>,
    terms: BTreeMap<Vec<i64>, Rational>,
}

/// Right-hand side of [`Series::substitute`].
#[derive(Debug, Clone)]
pub enum Substitution {
    Rational(Rational),
    Monomial(Series),
}

impl From<i64> for Substitution {
    fn from(v: i64) -> Self {
        Substitution::Rational(Rational::from_integer(v.into()))
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl Series {
    pub fn zero() -> Self {
        Self {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self {
            vars: Vec::new(),
            terms,
        }
    }

    /// The Laurent variable `name` itself.
    pub fn laurent_var(name: &str) -> Self {
        Self::monomial_in(VariableSpec::laurent(name), 1, Rational::one())
    }

    /// The truncated variable `name` itself, known through `order`.
    pub fn truncated_var(name: &str, order: i64) -> Self {
        Self::monomial_in(VariableSpec::truncated(name, order), 1, Rational::one())
    }

    /// `coeff * var^exp` in a one-variable context.
    pub fn monomial_in(spec: VariableSpec, exp: i64, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() && spec.admits(exp) {
            terms.insert(vec![exp], coeff);
        }
        Self {
            vars: vec![spec],
            terms,
        }
    }

    /// Builds a series from explicit terms. Terms above a truncation order are
    /// dropped; exponents below a floor are rejected.
    pub fn from_terms<I>(mut specs: Vec<VariableSpec>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        let mut perm: Vec<usize> = (0..specs.len()).collect();
        perm.sort_by(|&a, &b| specs[a].name.cmp(&specs[b].name));
        let sorted: Vec<VariableSpec> = perm.iter().map(|&i| specs[i].clone()).collect();
        specs = sorted;
        let mut out = BTreeMap::new();
        'terms: for (exps, c) in terms {
            if exps.len() != specs.len() {
                return Err(SeriesError::Arity {
                    expected: specs.len(),
                    got: exps.len(),
                });
            }
            let exps: Vec<i64> = perm.iter().map(|&i| exps[i]).collect();
            for (spec, &e) in specs.iter().zip(&exps) {
                if let VarKind::Truncated { order, floor } = spec.kind {
                    if e < floor {
                        return Err(SeriesError::BelowFloor {
                            var: spec.name.clone(),
                            k: e,
                            floor,
                        });
                    }
                    if e > order {
                        continue 'terms;
                    }
                }
            }
            accumulate(&mut out, exps, c);
        }
        Ok(Self { vars: specs, terms: out })
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn position(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == var)
    }

    pub fn spec(&self, var: &str) -> Option<&VariableSpec> {
        self.vars.iter().find(|v| v.name == var)
    }

    /// Truncation order of `var`, `None` for Laurent or absent variables.
    pub fn order_of(&self, var: &str) -> Option<i64> {
        match self.spec(var)?.kind {
            VarKind::Truncated { order, .. } => Some(order),
            VarKind::Laurent => None,
        }
    }

    /// Coefficient at an exponent vector given in context order.
    pub fn coefficient(&self, exps: &[i64]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient at the monomial described by `(name, exponent)` pairs;
    /// variables not named have exponent zero.
    pub fn coefficient_at(&self, exps: &[(&str, i64)]) -> Result<Rational> {
        let mut key = vec![0; self.vars.len()];
        for &(name, e) in exps {
            let i = self
                .position(name)
                .ok_or_else(|| SeriesError::UnknownVariable(name.to_owned()))?;
            key[i] = e;
        }
        Ok(self.coefficient(&key))
    }

    /// Constant coefficient, if the series has no other terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Adds `spec` to the context (no-op if already present with the same kind).
    pub fn with_variable(&self, spec: VariableSpec) -> Result<Series> {
        let other = Series {
            vars: vec![spec],
            terms: BTreeMap::new(),
        };
        self.add(&other)
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        Series {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Rational::one())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        let (vars, ma, mb) = merge_contexts(&self.vars, &other.vars, Merge::Sum)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if let Some(k) = embed(e, &ma, &vars) {
                accumulate(&mut terms, k, c.clone());
            }
        }
        for (e, c) in &other.terms {
            if let Some(k) = embed(e, &mb, &vars) {
                accumulate(&mut terms, k, c.clone());
            }
        }
        Ok(Series { vars, terms })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    /// Cauchy product; terms beyond the merged truncation orders are dropped.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        let (vars, ma, mb) = merge_contexts(&self.vars, &other.vars, Merge::Product)?;
        let left: Vec<(Vec<i64>, &Rational)> = self
            .terms
            .iter()
            .map(|(e, c)| (embed_unchecked(e, &ma, vars.len()), c))
            .collect();
        let right: Vec<(Vec<i64>, &Rational)> = other
            .terms
            .iter()
            .map(|(e, c)| (embed_unchecked(e, &mb, vars.len()), c))
            .collect();
        let orders: Vec<Option<i64>> = vars
            .iter()
            .map(|v| match v.kind {
                VarKind::Truncated { order, .. } => Some(order),
                VarKind::Laurent => None,
            })
            .collect();
        let mut terms = BTreeMap::new();
        let mut key = vec![0i64; vars.len()];
        for (ea, ca) in &left {
            'pairs: for (eb, cb) in &right {
                for i in 0..key.len() {
                    let s = ea[i] + eb[i];
                    if let Some(o) = orders[i] {
                        if s > o {
                            continue 'pairs;
                        }
                    }
                    key[i] = s;
                }
                accumulate(&mut terms, key.clone(), *ca * *cb);
            }
        }
        Ok(Series { vars, terms })
    }

    pub fn pow(&self, n: u32) -> Result<Series> {
        let mut result = Series::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        // keep the operand's context even for n = 0
        result.add(&Series {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        })
    }

    /// Integer power, negative exponents via [`Series::invert_unit`].
    pub fn powi(&self, n: i64) -> Result<Series> {
        if n >= 0 {
            self.pow(n as u32)
        } else {
            self.invert_unit()?.pow(n.unsigned_abs() as u32)
        }
    }

    /// Multiplicative inverse.
    ///
    /// The lowest power of every truncated variable is factored out first, so
    /// `λ² − λ⁴/12 + …` inverts to `λ⁻²(1 + λ²/12 + …)`. What remains must have
    /// a constant term (all truncated exponents zero) that is a single nonzero
    /// monomial in the Laurent variables.
    pub fn invert_unit(&self) -> Result<Series> {
        if self.terms.is_empty() {
            return Err(SeriesError::NonUnit("zero series".into()));
        }
        let n = self.vars.len();
        let truncated: Vec<usize> = (0..n).filter(|&i| !self.vars[i].is_laurent()).collect();

        // valuation shift
        let mut shift = vec![0i64; n];
        for &i in &truncated {
            shift[i] = self.terms.keys().map(|e| e[i]).min().unwrap_or(0);
        }
        let mut shifted_vars = self.vars.clone();
        for &i in &truncated {
            if let VarKind::Truncated { order, .. } = self.vars[i].kind {
                shifted_vars[i].kind = VarKind::Truncated {
                    order: order - shift[i],
                    floor: 0,
                };
            }
        }
        let shifted: BTreeMap<Vec<i64>, Rational> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let k: Vec<i64> = e.iter().zip(&shift).map(|(a, s)| a - s).collect();
                (k, c.clone())
            })
            .collect();

        let constants: Vec<(&Vec<i64>, &Rational)> = shifted
            .iter()
            .filter(|(e, _)| truncated.iter().all(|&i| e[i] == 0))
            .collect();
        if constants.len() != 1 {
            return Err(SeriesError::NonUnit(format!(
                "constant term has {} monomials",
                constants.len()
            )));
        }
        let (lead_exp, lead_coeff) = (constants[0].0.clone(), constants[0].1.clone());
        let lead_inv = lead_coeff.recip();

        // s' = lead * (1 + rest)
        let mut rest = BTreeMap::new();
        for (e, c) in &shifted {
            if *e == lead_exp {
                continue;
            }
            let k: Vec<i64> = e.iter().zip(&lead_exp).map(|(a, b)| a - b).collect();
            rest.insert(k, c * &lead_inv);
        }
        let rest = Series {
            vars: shifted_vars.clone(),
            terms: rest,
        };
        let minus_rest = rest.neg();

        // 1/(1 + rest) = sum (-rest)^j; rest raises total truncated degree by >= 1
        let mut total = Series {
            vars: shifted_vars.clone(),
            terms: BTreeMap::new(),
        }
        .add(&Series::one())?;
        let mut power = total.clone();
        if !truncated.is_empty() {
            loop {
                power = power.mul(&minus_rest)?;
                if power.is_zero() {
                    break;
                }
                total = total.add(&power)?;
            }
        } else if !rest.is_zero() {
            return Err(SeriesError::NonUnit(
                "Laurent polynomial is not a monomial".into(),
            ));
        }

        // multiply back by lead^{-1} * (truncated shift)^{-1}
        let mut inv_exp = vec![0i64; n];
        for i in 0..n {
            inv_exp[i] = -lead_exp[i] - shift[i];
        }
        let mut out_vars = self.vars.clone();
        for &i in &truncated {
            if let VarKind::Truncated { order, .. } = self.vars[i].kind {
                out_vars[i].kind = VarKind::Truncated {
                    order: order - 2 * shift[i],
                    floor: -shift[i],
                };
            }
        }
        let terms = total
            .terms
            .into_iter()
            .filter_map(|(e, c)| {
                let k: Vec<i64> = e.iter().zip(&inv_exp).map(|(a, b)| a + b).collect();
                let keep = out_vars.iter().zip(&k).all(|(v, &x)| v.admits(x));
                keep.then(|| (k, c * &lead_inv))
            })
            .collect();
        Ok(Series {
            vars: out_vars,
            terms,
        })
    }

    /// Replaces Laurent variable `var` by a nonzero rational or monomial.
    /// The result no longer mentions `var`.
    pub fn substitute(&self, var: &str, value: impl Into<Substitution>) -> Result<Series> {
        let value = value.into();
        let pos = self
            .position(var)
            .ok_or_else(|| SeriesError::UnknownVariable(var.to_owned()))?;
        if !self.vars[pos].is_laurent() {
            return Err(SeriesError::NotLaurent(var.to_owned()));
        }
        let value = match value {
            Substitution::Rational(r) => Series::constant(r),
            Substitution::Monomial(m) => {
                if m.terms.len() > 1 {
                    return Err(SeriesError::NotMonomial(m.terms.len()));
                }
                if let Some(v) = m.vars.iter().find(|v| !v.is_laurent()) {
                    return Err(SeriesError::TruncatedInValue(v.name.clone()));
                }
                m
            }
        };
        if value.is_zero() {
            return Err(SeriesError::ZeroSubstitution(var.to_owned()));
        }

        let mut rest_vars = self.vars.clone();
        rest_vars.remove(pos);
        let mut by_power: BTreeMap<i64, BTreeMap<Vec<i64>, Rational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut k = e.clone();
            let p = k.remove(pos);
            by_power.entry(p).or_default().insert(k, c.clone());
        }
        let mut out = Series {
            vars: rest_vars.clone(),
            terms: BTreeMap::new(),
        };
        for (p, terms) in by_power {
            let part = Series {
                vars: rest_vars.clone(),
                terms,
            };
            out = out.add(&part.mul(&value.powi(p)?)?)?;
        }
        Ok(out)
    }

    /// Coefficient of `var^k`, as a series in the remaining variables.
    pub fn coefficient_of(&self, var: &str, k: i64) -> Result<Series> {
        let pos = self
            .position(var)
            .ok_or_else(|| SeriesError::UnknownVariable(var.to_owned()))?;
        if let VarKind::Truncated { order, .. } = self.vars[pos].kind {
            if k > order {
                return Err(SeriesError::OutOfRange {
                    var: var.to_owned(),
                    k,
                    order,
                });
            }
        }
        let mut vars = self.vars.clone();
        vars.remove(pos);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[pos] == k)
            .map(|(e, c)| {
                let mut key = e.clone();
                key.remove(pos);
                (key, c.clone())
            })
            .collect();
        Ok(Series { vars, terms })
    }

    /// Lowers the truncation order of `var`, dropping higher terms.
    pub fn truncate(&self, var: &str, new_order: i64) -> Result<Series> {
        let pos = self
            .position(var)
            .ok_or_else(|| SeriesError::UnknownVariable(var.to_owned()))?;
        let VarKind::Truncated { order, floor } = self.vars[pos].kind else {
            return Err(SeriesError::NotLaurent(var.to_owned()));
        };
        let mut vars = self.vars.clone();
        vars[pos].kind = VarKind::Truncated {
            order: order.min(new_order),
            floor,
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[pos] <= new_order)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Ok(Series { vars, terms })
    }

    /// Coefficientwise equality at the shared truncation order.
    pub fn agrees_with(&self, other: &Series) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }
}

/// `prod_{m=1..count} (1 - base * var^m)^exponent`, with `var` truncated at `order`.
///
/// Factors with `m > order` equal one at this truncation, so any
/// `count >= order` gives the same result.
pub fn product_factor(
    base: &Series,
    exponent: i64,
    count: u32,
    var: &str,
    order: i64,
) -> Result<Series> {
    if base.terms.len() != 1 {
        return Err(SeriesError::NotMonomial(base.terms.len()));
    }
    let q = VariableSpec::truncated(var, order);
    let mut acc = Series::one().with_variable(q.clone())?;
    if exponent == 0 || order < 1 {
        return acc.add(&base.scale(&Rational::zero()));
    }
    for m in 1..=i64::from(count) {
        if m > order {
            break;
        }
        // (1 - z)^e = sum_j binom(e, j) (-z)^j with z = base * var^m
        let z = base.mul(&Series::monomial_in(q.clone(), m, Rational::one()))?;
        let minus_z = z.neg();
        let mut factor = Series::one().with_variable(q.clone())?;
        let mut zpow = factor.clone();
        let mut binom = BigInt::one();
        for j in 1..=(order / m) {
            binom = binom * BigInt::from(exponent - j + 1) / BigInt::from(j);
            if binom.is_zero() {
                break;
            }
            zpow = zpow.mul(&minus_z)?;
            factor = factor.add(&zpow.scale(&Rational::from_integer(binom.clone())))?;
        }
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

fn accumulate(map: &mut BTreeMap<Vec<i64>, Rational>, key: Vec<i64>, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

type Embedding = Vec<usize>;

/// Merges two sorted contexts. Returns the merged context and, for each
/// operand, the merged position of each of its variables.
fn merge_contexts(
    a: &[VariableSpec],
    b: &[VariableSpec],
    how: Merge,
) -> Result<(Vec<VariableSpec>, Embedding, Embedding)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (0, 0);
    let mut ma = Vec::with_capacity(a.len());
    let mut mb = Vec::with_capacity(b.len());
    while ia < a.len() || ib < b.len() {
        let take_a = ib >= b.len() || (ia < a.len() && a[ia].name < b[ib].name);
        let take_b = ia >= a.len() || (ib < b.len() && b[ib].name < a[ia].name);
        if take_a {
            ma.push(out.len());
            out.push(a[ia].clone());
            ia += 1;
        } else if take_b {
            mb.push(out.len());
            out.push(b[ib].clone());
            ib += 1;
        } else {
            let kind = match (a[ia].kind, b[ib].kind) {
                (VarKind::Laurent, VarKind::Laurent) => VarKind::Laurent,
                (
                    VarKind::Truncated {
                        order: oa,
                        floor: fa,
                    },
                    VarKind::Truncated {
                        order: ob,
                        floor: fb,
                    },
                ) => match how {
                    Merge::Sum => VarKind::Truncated {
                        order: oa.min(ob),
                        floor: fa.min(fb),
                    },
                    Merge::Product => VarKind::Truncated {
                        order: (oa + fb).min(ob + fa),
                        floor: fa + fb,
                    },
                },
                _ => return Err(SeriesError::IncompatibleKinds(a[ia].name.clone())),
            };
            ma.push(out.len());
            mb.push(out.len());
            out.push(VariableSpec {
                name: a[ia].name.clone(),
                kind,
            });
            ia += 1;
            ib += 1;
        }
    }
    Ok((out, ma, mb))
}

fn embed_unchecked(e: &[i64], map: &Embedding, len: usize) -> Vec<i64> {
    let mut k = vec![0; len];
    for (i, &x) in e.iter().enumerate() {
        k[map[i]] = x;
    }
    k
}

fn embed(e: &[i64], map: &Embedding, vars: &[VariableSpec]) -> Option<Vec<i64>> {
    let k = embed_unchecked(e, map, vars.len());
    vars.iter().zip(&k).all(|(v, &x)| v.admits(x)).then_some(k)
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.terms.is_empty() {
            write!(f, "0")?;
            first = false;
        }
        for (e, c) in &self.terms {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &x)| x != 0)
                .map(|(v, &x)| {
                    if x == 1 {
                        v.name.clone()
                    } else {
                        format!("{}^{}", v.name, x)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        for v in &self.vars {
            if let VarKind::Truncated { order, .. } = v.kind {
                write!(f, " + O({}^{})", v.name, order + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(order: i64) -> Series {
        Series::truncated_var("q", order)
    }

    fn t() -> Series {
        Series::laurent_var("t")
    }

    #[test]
    fn add_cancels_and_keeps_identity() {
        let one = Series::one();
        let a = one.add(&q(5)).unwrap();
        let b = one.sub(&q(5)).unwrap();
        assert_eq!(a.add(&b).unwrap().as_constant(), Some(int(2)));
        assert!(a.agrees_with(&a.add(&Series::zero()).unwrap()).unwrap());
        let s = t().add(&t().invert_unit().unwrap()).unwrap();
        let d = s.add(&s).unwrap();
        assert_eq!(d.coefficient_at(&[("t", 1)]).unwrap(), int(2));
        assert_eq!(d.coefficient_at(&[("t", -1)]).unwrap(), int(2));
        assert_eq!(d.num_terms(), 2);
    }

    #[test]
    fn mul_truncates() {
        let one = Series::one();
        let a = one.sub(&q(3)).unwrap();
        let mut b = one.clone();
        for k in 1..=3 {
            b = b.add(&q(3).pow(k).unwrap()).unwrap();
        }
        let p = a.mul(&b).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coefficient_at(&[]).unwrap(), int(1));
        assert_eq!(p.order_of("q"), Some(3));
    }

    #[test]
    fn mul_laurent_square() {
        let s = t().add(&t().invert_unit().unwrap()).unwrap();
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.coefficient_at(&[("t", 2)]).unwrap(), int(1));
        assert_eq!(sq.coefficient_at(&[("t", 0)]).unwrap(), int(2));
        assert_eq!(sq.coefficient_at(&[("t", -2)]).unwrap(), int(1));
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn lambda_with_floor_cancels() {
        let lam = VariableSpec::truncated_with_floor("lambda", 6, -2);
        let a = Series::monomial_in(lam.clone(), 2, int(1));
        let b = Series::monomial_in(lam, -2, int(1));
        assert_eq!(a.mul(&b).unwrap().coefficient_at(&[]).unwrap(), int(1));
    }

    #[test]
    fn invert_geometric() {
        let s = Series::one().sub(&q(3)).unwrap();
        let inv = s.invert_unit().unwrap();
        for k in 0..=3 {
            assert_eq!(inv.coefficient_at(&[("q", k)]).unwrap(), int(1));
        }
        assert_eq!(inv.num_terms(), 4);
    }

    #[test]
    fn invert_with_valuation() {
        // long-division oracle: (x^2 - x^4/12 + x^6/360)^{-1}
        let lam = VariableSpec::truncated("lambda", 7);
        let s = Series::from_terms(
            vec![lam],
            [
                (vec![2], int(1)),
                (vec![4], rat(-1, 12)),
                (vec![6], rat(1, 360)),
            ],
        )
        .unwrap();
        let inv = s.invert_unit().unwrap();
        assert_eq!(inv.order_of("lambda"), Some(3));
        assert_eq!(inv.coefficient_at(&[("lambda", -2)]).unwrap(), int(1));
        assert_eq!(inv.coefficient_at(&[("lambda", 0)]).unwrap(), rat(1, 12));
        assert_eq!(inv.coefficient_at(&[("lambda", 2)]).unwrap(), rat(1, 240));
        let back = s.mul(&inv).unwrap();
        assert_eq!(back.as_constant(), Some(int(1)));
    }

    #[test]
    fn invert_rejects_non_units() {
        let x = Series::truncated_var("x", 4);
        let y = Series::truncated_var("y", 4);
        assert!(matches!(
            x.add(&y).unwrap().invert_unit(),
            Err(SeriesError::NonUnit(_))
        ));
        assert!(Series::zero().invert_unit().is_err());
        let s = t().add(&Series::one()).unwrap();
        assert!(s.invert_unit().is_err());
    }

    #[test]
    fn product_factor_partitions() {
        let p = product_factor(&Series::one(), -1, 4, "q", 4).unwrap();
        let expect = [1, 1, 2, 3, 5];
        for (k, &e) in expect.iter().enumerate() {
            assert_eq!(p.coefficient_at(&[("q", k as i64)]).unwrap(), int(e));
        }
        let bigger = product_factor(&Series::one(), -1, 40, "q", 4).unwrap();
        assert_eq!(p, bigger);
    }

    #[test]
    fn product_factor_first_order() {
        // prod (1 + t q^m)^{-2} at order 1
        let p = product_factor(&t().neg(), -2, 1, "q", 1).unwrap();
        assert_eq!(p.coefficient_at(&[]).unwrap(), int(1));
        assert_eq!(p.coefficient_at(&[("q", 1), ("t", 1)]).unwrap(), int(-2));
        assert_eq!(p.num_terms(), 2);
        let trivial = product_factor(&t(), 0, 5, "q", 5).unwrap();
        assert_eq!(trivial.as_constant(), Some(int(1)));
    }

    #[test]
    fn substitute_examples() {
        let tr = Series::laurent_var("t_R");
        let s = tr.add(&tr.invert_unit().unwrap()).unwrap();
        assert_eq!(s.substitute("t_R", -1).unwrap().as_constant(), Some(int(-2)));

        let tl = Series::laurent_var("t_L");
        let jh = tl
            .add(&tl.invert_unit().unwrap())
            .unwrap()
            .add(&Series::constant(int(2)))
            .unwrap();
        let y = Series::laurent_var("y");
        let sub = jh
            .substitute("t_L", Substitution::Monomial(y.neg()))
            .unwrap();
        // -(y - 2 + 1/y)
        assert_eq!(sub.coefficient_at(&[("y", 1)]).unwrap(), int(-1));
        assert_eq!(sub.coefficient_at(&[("y", 0)]).unwrap(), int(2));
        assert_eq!(sub.coefficient_at(&[("y", -1)]).unwrap(), int(-1));

        assert!(matches!(
            s.substitute("t_R", 0),
            Err(SeriesError::ZeroSubstitution(_))
        ));
        assert!(matches!(
            q(3).substitute("q", 1),
            Err(SeriesError::NotLaurent(_))
        ));
    }

    #[test]
    fn substitute_one_sums_coefficients() {
        let s = Series::from_terms(
            vec![VariableSpec::laurent("a"), VariableSpec::laurent("b")],
            [
                (vec![1, 0], int(3)),
                (vec![-2, 0], int(4)),
                (vec![0, 1], int(5)),
            ],
        )
        .unwrap();
        let r = s.substitute("a", 1).unwrap();
        assert_eq!(r.coefficient_at(&[]).unwrap(), int(7));
        assert_eq!(r.coefficient_at(&[("b", 1)]).unwrap(), int(5));
    }

    #[test]
    fn coefficient_of_bounds() {
        let inv = Series::one().sub(&q(3)).unwrap().invert_unit().unwrap();
        assert_eq!(inv.coefficient_of("q", 1).unwrap().as_constant(), Some(int(1)));
        assert_eq!(inv.coefficient_of("q", 0).unwrap().as_constant(), Some(int(1)));
        assert!(matches!(
            inv.coefficient_of("q", 4),
            Err(SeriesError::OutOfRange { .. })
        ));
    }

    #[test]
    fn incompatible_kinds() {
        let a = Series::laurent_var("q");
        assert!(matches!(
            a.add(&q(3)),
            Err(SeriesError::IncompatibleKinds(_))
        ));
    }

    #[test]
    fn display_is_readable() {
        let s = Series::one().sub(&q(2)).unwrap();
        assert_eq!(s.to_string(), "1 - q + O(q^3)");
    }
}
