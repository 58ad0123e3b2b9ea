//! `F₂` Čech cohomology of the nerve of a finite cover.
//!
//! The geometric input (charts, determinant lines, local square roots) is
//! reduced to sign data on overlaps. A `±1` value is stored additively as a
//! bit: `-1 ↦ 1`, `+1 ↦ 0`. Faces are sorted vertex-index tuples, ordered
//! lexicographically within each dimension.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CechError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("face {0:?} repeats a vertex")]
    RepeatedVertex(Vec<String>),
    #[error("face {0:?} has fewer than two vertices")]
    FaceTooSmall(Vec<String>),
    #[error("nerve is not closed: face {face:?} is listed but its subface {missing:?} is not")]
    NotClosed {
        face: Vec<String>,
        missing: Vec<String>,
    },
    #[error("expected a cochain of dimension {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("sign value {0} is not ±1")]
    BadSign(i64),
    #[error("no determinant given for the overlap {0:?}")]
    MissingSign(Vec<String>),
    #[error("determinants for {0:?} disagree between the two orderings")]
    AsymmetricSign(Vec<String>),
    #[error("{0:?} is not a face of the nerve")]
    NotAFace(Vec<String>),
    #[error("not a cocycle: odd sum on the face {0:?}")]
    NotCocycle(Vec<String>),
    #[error("matrix is not square or has the wrong size")]
    Shape,
    #[error("transition does not preserve the quadratic form")]
    NotOrthogonal,
}

pub type Result<T> = std::result::Result<T, CechError>;

/// Dense vector over `F₂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Finite simplicial complex, downward closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nerve {
    labels: Vec<String>,
    /// `faces[p]` lists the `p`-simplices (`p + 1` vertices), sorted.
    faces: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Nerve {
    /// Builds a nerve from explicitly listed faces of size at least two.
    /// Every codimension-one subface of a listed face must itself be listed.
    pub fn new<S: AsRef<str>>(labels: Vec<String>, faces: &[Vec<S>]) -> Result<Self> {
        let lookup = label_lookup(&labels)?;
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![(0..labels.len()).map(|i| vec![i]).collect()];
        for face in faces {
            let names: Vec<String> = face.iter().map(|s| s.as_ref().to_owned()).collect();
            let f = resolve(&lookup, &names)?;
            let p = f.len() - 1;
            if by_dim.len() <= p {
                by_dim.resize(p + 1, BTreeSet::new());
            }
            by_dim[p].insert(f);
        }
        for p in 1..by_dim.len() {
            for f in &by_dim[p] {
                for sub in subfaces(f) {
                    if !by_dim[p - 1].contains(&sub) {
                        let name = |v: &[usize]| v.iter().map(|&i| labels[i].clone()).collect();
                        return Err(CechError::NotClosed {
                            face: name(f),
                            missing: name(&sub),
                        });
                    }
                }
            }
        }
        Ok(Self::assemble(labels, by_dim))
    }

    /// Closes the given faces downward.
    pub fn closure<S: AsRef<str>>(labels: Vec<String>, maximal: &[Vec<S>]) -> Result<Self> {
        let lookup = label_lookup(&labels)?;
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![(0..labels.len()).map(|i| vec![i]).collect()];
        for face in maximal {
            let names: Vec<String> = face.iter().map(|s| s.as_ref().to_owned()).collect();
            let f = resolve(&lookup, &names)?;
            let n = f.len();
            for mask in 1u64..(1 << n) {
                let sub: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| f[b]).collect();
                let p = sub.len() - 1;
                if by_dim.len() <= p {
                    by_dim.resize(p + 1, BTreeSet::new());
                }
                by_dim[p].insert(sub);
            }
        }
        Ok(Self::assemble(labels, by_dim))
    }

    /// Vertices named `"0"`, `"1"`, ….
    pub fn closure_of_indices(n: usize, maximal: &[Vec<usize>]) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let faces: Vec<Vec<String>> = maximal
            .iter()
            .map(|f| f.iter().map(|i| i.to_string()).collect())
            .collect();
        Self::closure(labels, &faces).expect("indices in range")
    }

    fn assemble(labels: Vec<String>, by_dim: Vec<BTreeSet<Vec<usize>>>) -> Self {
        let mut faces: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        while faces.len() > 1 && faces.last().is_some_and(|f| f.is_empty()) {
            faces.pop();
        }
        let index = faces
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect())
            .collect();
        Self { labels, faces, index }
    }

    /// Full simplex on `n` vertices.
    pub fn simplex(n: usize) -> Self {
        if n < 2 {
            return Self::closure_of_indices(n, &[]);
        }
        Self::closure_of_indices(n, &[(0..n).collect()])
    }

    /// Hollow triangle.
    pub fn circle() -> Self {
        Self::closure_of_indices(3, &[vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    /// Six-vertex, ten-triangle triangulation of the real projective plane.
    pub fn projective_plane() -> Self {
        Self::closure_of_indices(6, &RP2_TRIANGLES.map(|t| t.to_vec()))
    }

    /// Cone over the boundary of a tetrahedron, so that the 2-sphere model
    /// comes with quadruple overlaps.
    pub fn cone_over_tetrahedron_boundary() -> Self {
        let tris = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        Self::closure_of_indices(5, &tris.map(|t| vec![t[0], t[1], t[2], 4]))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn face_labels(&self, face: &[usize]) -> Vec<String> {
        face.iter().map(|&i| self.labels[i].clone()).collect()
    }

    /// Top simplex dimension (0 for a discrete set).
    pub fn dim(&self) -> usize {
        self.faces.len() - 1
    }

    /// The `p`-simplices; empty above the top dimension.
    pub fn faces(&self, p: usize) -> &[Vec<usize>] {
        self.faces.get(p).map_or(&[], |f| f.as_slice())
    }

    pub fn face_count(&self, p: usize) -> usize {
        self.faces(p).len()
    }

    /// Position of a sorted face in its dimension's list.
    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        let p = face.len().checked_sub(1)?;
        self.index.get(p)?.get(face).copied()
    }
}

const RP2_TRIANGLES: [[usize; 3]; 10] = [
    [0, 1, 2],
    [0, 2, 3],
    [0, 3, 4],
    [0, 4, 5],
    [0, 1, 5],
    [1, 2, 4],
    [1, 3, 4],
    [1, 3, 5],
    [2, 3, 5],
    [2, 4, 5],
];

fn label_lookup(labels: &[String]) -> Result<HashMap<&str, usize>> {
    let mut lookup = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if lookup.insert(l.as_str(), i).is_some() {
            return Err(CechError::DuplicateVertex(l.clone()));
        }
    }
    Ok(lookup)
}

fn resolve(lookup: &HashMap<&str, usize>, names: &[String]) -> Result<Vec<usize>> {
    if names.len() < 2 {
        return Err(CechError::FaceTooSmall(names.to_vec()));
    }
    let mut f = names
        .iter()
        .map(|n| lookup.get(n.as_str()).copied().ok_or_else(|| CechError::UnknownVertex(n.clone())))
        .collect::<Result<Vec<_>>>()?;
    f.sort_unstable();
    if f.windows(2).any(|w| w[0] == w[1]) {
        return Err(CechError::RepeatedVertex(names.to_vec()));
    }
    Ok(f)
}

fn subfaces(f: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..f.len()).map(move |skip| {
        f.iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, v)| *v)
            .collect()
    })
}

/// `F₂`-valued function on the `p`-simplices of a nerve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    dim: usize,
    bits: BitVec,
}

impl Cochain {
    pub fn zero(nerve: &Nerve, dim: usize) -> Self {
        Self {
            dim,
            bits: BitVec::zeros(nerve.face_count(dim)),
        }
    }

    pub fn from_fn(nerve: &Nerve, dim: usize, mut f: impl FnMut(&[usize]) -> bool) -> Self {
        let mut c = Self::zero(nerve, dim);
        for (i, face) in nerve.faces(dim).iter().enumerate() {
            c.bits.set(i, f(face));
        }
        c
    }

    pub fn from_bits(dim: usize, bits: BitVec) -> Self {
        Self { dim, bits }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.bits.set(i, v)
    }

    /// Value on a face, `None` if the face is absent.
    pub fn value(&self, nerve: &Nerve, face: &[usize]) -> Option<bool> {
        if face.len() != self.dim + 1 {
            return None;
        }
        let mut f = face.to_vec();
        f.sort_unstable();
        nerve.face_index(&f).map(|i| self.bits.get(i))
    }

    /// Multiplicative reading: `+1` or `-1`.
    pub fn sign(&self, i: usize) -> i8 {
        if self.get(i) {
            -1
        } else {
            1
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.dim, other.dim);
        let mut bits = self.bits.clone();
        bits.xor_assign(&other.bits);
        Cochain { dim: self.dim, bits }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }
}

/// `(δc)(f) = Σ c(∂_i f)` over `F₂`; zero-length above the top dimension.
pub fn coboundary(nerve: &Nerve, c: &Cochain) -> Cochain {
    let p = c.dim;
    Cochain::from_fn(nerve, p + 1, |f| {
        subfaces(f).fold(false, |acc, sub| {
            let i = nerve.face_index(&sub).expect("nerve is closed");
            acc ^ c.get(i)
        })
    })
}

/// Rows of `δ_p` indexed by `(p+1)`-simplices, columns by `p`-simplices.
fn coboundary_rows(nerve: &Nerve, p: usize) -> Vec<BitVec> {
    let cols = nerve.face_count(p);
    nerve
        .faces(p + 1)
        .iter()
        .map(|f| {
            let mut row = BitVec::zeros(cols);
            for sub in subfaces(f) {
                row.flip(nerve.face_index(&sub).expect("nerve is closed"));
            }
            row
        })
        .collect()
}

/// Rank over `F₂` (the rows are consumed).
pub fn rank(mut rows: Vec<BitVec>) -> usize {
    let mut r = 0;
    let mut i = 0;
    while i < rows.len() {
        let Some(pivot) = rows[i].first_one() else {
            i += 1;
            continue;
        };
        let pivot_row = rows[i].clone();
        for row in rows.iter_mut().skip(i + 1) {
            if row.get(pivot) {
                row.xor_assign(&pivot_row);
            }
        }
        r += 1;
        i += 1;
    }
    r
}

pub fn coboundary_rank(nerve: &Nerve, p: usize) -> usize {
    rank(coboundary_rows(nerve, p))
}

/// `dim H^p(N; F₂)`.
pub fn betti(nerve: &Nerve, p: usize) -> usize {
    let below = if p == 0 { 0 } else { coboundary_rank(nerve, p - 1) };
    nerve.face_count(p) - coboundary_rank(nerve, p) - below
}

pub fn is_cocycle(nerve: &Nerve, c: &Cochain) -> bool {
    coboundary(nerve, c).is_zero()
}

/// First face on which `δc` is odd.
pub fn cocycle_violation(nerve: &Nerve, c: &Cochain) -> Option<Vec<usize>> {
    let d = coboundary(nerve, c);
    let first = d.support().next();
    first.map(|i| nerve.faces(c.dim + 1)[i].clone())
}

/// Solves `δτ = σ`; `None` if `σ` is not a coboundary. Free variables are 0.
pub fn solve_coboundary(nerve: &Nerve, sigma: &Cochain) -> Option<Cochain> {
    let p = sigma.dim.checked_sub(1)?;
    let rows = coboundary_rows(nerve, p);
    let cols = nerve.face_count(p);
    // augmented column at index `cols`
    let mut aug: Vec<BitVec> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = BitVec::zeros(cols + 1);
            for j in r.ones() {
                a.set(j, true);
            }
            a.set(cols, sigma.get(i));
            a
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        let Some(found) = (next..aug.len()).find(|&r| aug[r].get(col)) else {
            continue;
        };
        aug.swap(next, found);
        let pivot_row = aug[next].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        next += 1;
    }
    if aug[next..].iter().any(|r| r.get(cols)) {
        return None;
    }
    let mut tau = Cochain::zero(nerve, p);
    for (r, &col) in pivots.iter().enumerate() {
        tau.set(col, aug[r].get(cols));
    }
    Some(tau)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionClass {
    pub trivial: bool,
    /// A 1-cochain `τ` with `δτ = σ` when the class vanishes.
    pub witness: Option<Cochain>,
}

pub fn obstruction_class(nerve: &Nerve, sigma: &Cochain) -> Result<ObstructionClass> {
    if sigma.dim != 2 {
        return Err(CechError::Dimension {
            expected: 2,
            found: sigma.dim,
        });
    }
    if let Some(f) = cocycle_violation(nerve, sigma) {
        return Err(CechError::NotCocycle(nerve.face_labels(&f)));
    }
    let witness = solve_coboundary(nerve, sigma);
    Ok(ObstructionClass {
        trivial: witness.is_some(),
        witness,
    })
}

/// `|H¹(N; F₂)|`, the number of inequivalent square roots when one exists.
pub fn torsor_count(nerve: &Nerve) -> BigUint {
    BigUint::one() << betti(nerve, 1)
}

/// A 2-cocycle not in the image of `δ₁`, if `H²` is nonzero.
pub fn nontrivial_class(nerve: &Nerve) -> Option<Cochain> {
    let image = rank(coboundary_rows(nerve, 1));
    let tris = nerve.face_count(2);
    (0..tris)
        .map(|i| {
            let mut c = Cochain::zero(nerve, 2);
            c.set(i, true);
            c
        })
        .find(|c| is_cocycle(nerve, c) && span_rank_with(nerve, c) > image)
}

/// Rank of the columns of `δ₁` together with `extra`.
fn span_rank_with(nerve: &Nerve, extra: &Cochain) -> usize {
    let rows = coboundary_rows(nerve, 1);
    let edges = nerve.face_count(1);
    let mut cols: Vec<BitVec> = (0..edges)
        .map(|e| {
            let mut v = BitVec::zeros(rows.len());
            for (t, r) in rows.iter().enumerate() {
                v.set(t, r.get(e));
            }
            v
        })
        .collect();
    cols.push(extra.bits.clone());
    rank(cols)
}

fn sign_bit(v: i64) -> Result<bool> {
    match v {
        1 => Ok(false),
        -1 => Ok(true),
        other => Err(CechError::BadSign(other)),
    }
}

/// `σ(αβγ) = d(αβ) d(βγ) d(αγ) · c(αβγ)`, written additively, without
/// checking the cocycle condition.
///
/// `dets` must cover every edge; an edge may be given in either or both
/// orderings (which must then agree). Missing corrections default to `+1`.
pub fn transition_sign_cochain(
    nerve: &Nerve,
    dets: &BTreeMap<(usize, usize), i64>,
    corrections: &BTreeMap<[usize; 3], i64>,
) -> Result<Cochain> {
    let mut d = Cochain::zero(nerve, 1);
    let mut seen = vec![None; nerve.face_count(1)];
    for (&(a, b), &v) in dets {
        let mut f = vec![a, b];
        f.sort_unstable();
        let i = nerve.face_index(&f).ok_or_else(|| CechError::NotAFace(label_or_index(nerve, &f)))?;
        let bit = sign_bit(v)?;
        match seen[i] {
            Some(prev) if prev != bit => return Err(CechError::AsymmetricSign(nerve.face_labels(&f))),
            _ => seen[i] = Some(bit),
        }
        d.set(i, bit);
    }
    if let Some(i) = seen.iter().position(Option::is_none) {
        return Err(CechError::MissingSign(nerve.face_labels(&nerve.faces(1)[i])));
    }
    let mut sigma = coboundary(nerve, &d);
    for (t, &v) in corrections {
        let mut f = t.to_vec();
        f.sort_unstable();
        let i = nerve.face_index(&f).ok_or_else(|| CechError::NotAFace(label_or_index(nerve, &f)))?;
        if sign_bit(v)? {
            sigma.bits.flip(i);
        }
    }
    Ok(sigma)
}

/// [`transition_sign_cochain`], rejecting data that is not a cocycle.
pub fn transition_sign_cocycle(
    nerve: &Nerve,
    dets: &BTreeMap<(usize, usize), i64>,
    corrections: &BTreeMap<[usize; 3], i64>,
) -> Result<Cochain> {
    let sigma = transition_sign_cochain(nerve, dets, corrections)?;
    if let Some(f) = cocycle_violation(nerve, &sigma) {
        return Err(CechError::NotCocycle(nerve.face_labels(&f)));
    }
    Ok(sigma)
}

fn label_or_index(nerve: &Nerve, f: &[usize]) -> Vec<String> {
    f.iter()
        .map(|&i| nerve.labels.get(i).cloned().unwrap_or_else(|| i.to_string()))
        .collect()
}

/// Sign of a transition `A` preserving the form `Q` (`AᵀQA = Q`): `det A`.
pub fn orthogonal_transition_sign(q: &[Vec<i64>], a: &[Vec<i64>]) -> Result<i64> {
    let n = q.len();
    if q.iter().chain(a).any(|r| r.len() != n) || a.len() != n {
        return Err(CechError::Shape);
    }
    for i in 0..n {
        for j in 0..n {
            let mut s = BigInt::zero();
            for k in 0..n {
                for l in 0..n {
                    s += BigInt::from(a[k][i]) * q[k][l] * a[l][j];
                }
            }
            if s != BigInt::from(q[i][j]) {
                return Err(CechError::NotOrthogonal);
            }
        }
    }
    let det = determinant(a);
    if det == Rational::one() {
        Ok(1)
    } else if det == -Rational::one() {
        Ok(-1)
    } else {
        // nondegenerate Q forces det² = 1
        Err(CechError::NotOrthogonal)
    }
}

fn determinant(a: &[Vec<i64>]) -> Rational {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            let f = &m[r][col] / &pivot;
            for j in col..n {
                let v = &f * &m[col][j];
                m[r][j] -= v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvec_basics() {
        let mut b = BitVec::zeros(130);
        b.set(0, true);
        b.set(129, true);
        b.flip(64);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(b.first_one(), Some(0));
        b.set(0, false);
        assert_eq!(b.first_one(), Some(64));
        assert_eq!(b.count_ones(), 2);
    }

    #[test]
    fn fixture_shapes() {
        let rp2 = Nerve::projective_plane();
        assert_eq!(
            (rp2.face_count(0), rp2.face_count(1), rp2.face_count(2)),
            (6, 15, 10)
        );
        assert_eq!(betti(&rp2, 0), 1);
        assert_eq!(betti(&rp2, 1), 1);
        assert_eq!(betti(&rp2, 2), 1);
        let s = Nerve::simplex(4);
        assert_eq!(s.dim(), 3);
        assert_eq!(torsor_count(&s), BigUint::one());
        assert_eq!(torsor_count(&Nerve::circle()), BigUint::from(2u32));
        assert_eq!(torsor_count(&rp2), BigUint::from(2u32));
    }

    #[test]
    fn not_closed_reports_face() {
        let labels: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let err = Nerve::new(labels, &[vec!["a", "b"], vec!["b", "c"], vec!["a", "b", "c"]]).unwrap_err();
        assert_eq!(
            err,
            CechError::NotClosed {
                face: vec!["a".into(), "b".into(), "c".into()],
                missing: vec!["a".into(), "c".into()],
            }
        );
    }

    #[test]
    fn coboundary_of_edges_matches_transition_rule() {
        let n = Nerve::simplex(3);
        let d = Cochain::from_fn(&n, 1, |f| f == [1, 2]);
        let s = coboundary(&n, &d);
        assert!(s.get(0));
        assert!(is_cocycle(&n, &s));
    }

    #[test]
    fn single_flip_on_tetrahedron_is_not_cocycle() {
        let n = Nerve::simplex(4);
        let mut s = Cochain::zero(&n, 2);
        s.set(0, true);
        assert!(!is_cocycle(&n, &s));
        assert!(matches!(obstruction_class(&n, &s), Err(CechError::NotCocycle(_))));
    }

    #[test]
    fn projective_plane_has_nontrivial_class() {
        let n = Nerve::projective_plane();
        let s = nontrivial_class(&n).unwrap();
        let oc = obstruction_class(&n, &s).unwrap();
        assert!(!oc.trivial);
        assert!(oc.witness.is_none());
        let zero = obstruction_class(&n, &Cochain::zero(&n, 2)).unwrap();
        assert!(zero.trivial);
        assert!(zero.witness.unwrap().is_zero());
    }

    #[test]
    fn cone_sphere_is_trivial() {
        let n = Nerve::cone_over_tetrahedron_boundary();
        assert_eq!(betti(&n, 2), 0);
        assert!(nontrivial_class(&n).is_none());
        let tau = Cochain::from_fn(&n, 1, |f| f[0] == 0);
        let s = coboundary(&n, &tau);
        let oc = obstruction_class(&n, &s).unwrap();
        assert_eq!(coboundary(&n, oc.witness.as_ref().unwrap()), s);
    }

    #[test]
    fn transition_signs() {
        let n = Nerve::projective_plane();
        let dets: BTreeMap<(usize, usize), i64> = n
            .faces(1)
            .iter()
            .map(|f| ((f[1], f[0]), if f[0] == 0 { -1 } else { 1 }))
            .collect();
        let s = transition_sign_cocycle(&n, &dets, &BTreeMap::new()).unwrap();
        assert!(obstruction_class(&n, &s).unwrap().trivial);

        let mut corr = BTreeMap::new();
        corr.insert([2, 1, 0], -1);
        let s = transition_sign_cocycle(&n, &dets, &corr).unwrap();
        assert!(!obstruction_class(&n, &s).unwrap().trivial);

        let t = Nerve::simplex(4);
        let dets: BTreeMap<(usize, usize), i64> = t.faces(1).iter().map(|f| ((f[0], f[1]), 1)).collect();
        assert!(matches!(
            transition_sign_cocycle(&t, &dets, &corr),
            Err(CechError::NotCocycle(_))
        ));
        let mut bad = dets.clone();
        bad.insert((1, 0), -1);
        assert!(matches!(
            transition_sign_cocycle(&t, &bad, &BTreeMap::new()),
            Err(CechError::AsymmetricSign(_))
        ));
        let mut missing = dets;
        missing.remove(&(0, 1));
        assert!(matches!(
            transition_sign_cocycle(&t, &missing, &BTreeMap::new()),
            Err(CechError::MissingSign(_))
        ));
    }

    #[test]
    fn orthogonal_signs() {
        let q = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(orthogonal_transition_sign(&q, &[vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(orthogonal_transition_sign(&q, &[vec![0, -1], vec![1, 0]]).unwrap(), 1);
        let h = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(orthogonal_transition_sign(&h, &[vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(
            orthogonal_transition_sign(&q, &[vec![1, 1], vec![0, 1]]),
            Err(CechError::NotOrthogonal)
        );
    }
}
