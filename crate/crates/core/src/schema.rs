//! JSON artifacts read and written by the command-line front end.
//!
//! Integers are arbitrary precision JSON numbers; rationals are always a
//! `num`/`den` pair of integers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cech::{self, Cochain, Nerve};
use crate::grr::{ChernData, Cy3Data, GrrModel, KunnethClass, ParityReport, XClass, XGenerator};
use crate::gvgw::{GvInvariants, GwInvariants};
use crate::k3hilb::GvTable;
use crate::series::Rational;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("invalid JSON at `{path}`: {message}")]
    Json { path: String, message: String },
    #[error("invalid value at `{field}`: {message}")]
    Invalid { field: String, message: String },
}

impl SchemaError {
    fn invalid(field: impl Into<String>, message: impl fmt::Display) -> Self {
        SchemaError::Invalid {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SchemaError>;

/// Parses JSON, reporting the path of the first offending field.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| SchemaError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable artifact");
    s.push('\n');
    s
}

/// Exact integer carried as a JSON number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct JsonInt(pub BigInt);

impl From<BigInt> for JsonInt {
    fn from(v: BigInt) -> Self {
        JsonInt(v)
    }
}

impl From<i64> for JsonInt {
    fn from(v: i64) -> Self {
        JsonInt(v.into())
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = serde_json::Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        BigInt::from_str(&n.to_string())
            .map(JsonInt)
            .map_err(|_| D::Error::custom(format!("expected an integer, found {n}")))
    }
}

fn one() -> JsonInt {
    JsonInt(BigInt::one())
}

fn rational(num: &JsonInt, den: &JsonInt, field: &str) -> Result<Rational> {
    if den.0.is_zero() {
        return Err(SchemaError::invalid(field, "zero denominator"));
    }
    Ok(Rational::new(num.0.clone(), den.0.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GvEntry {
    pub h: u32,
    pub k: u32,
    pub n: JsonInt,
}

/// `{"entries": [{"h", "k", "n"}]}`; unknown fields are ignored so that a
/// `k3` report can be fed back in.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GvTableJson {
    pub entries: Vec<GvEntry>,
}

impl GvTableJson {
    pub fn from_invariants(gv: &GvInvariants) -> Self {
        let mut entries: Vec<GvEntry> = gv
            .iter()
            .map(|((h, k), n)| GvEntry { h, k, n: n.clone().into() })
            .collect();
        entries.sort_by_key(|e| (e.k, e.h));
        Self { entries }
    }

    pub fn to_invariants(&self) -> Result<GvInvariants> {
        let mut gv = GvInvariants::new();
        let mut seen = BTreeMap::new();
        for (i, e) in self.entries.iter().enumerate() {
            let field = format!("entries[{i}]");
            if e.k == 0 {
                return Err(SchemaError::invalid(field + ".k", "degree must be positive"));
            }
            if seen.insert((e.h, e.k), ()).is_some() {
                return Err(SchemaError::invalid(field, format!("duplicate entry h={} k={}", e.h, e.k)));
            }
            gv.insert(e.h, e.k, e.n.0.clone())
                .map_err(|err| SchemaError::invalid(field, err))?;
        }
        Ok(gv)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GwEntry {
    pub g: u32,
    pub d: u32,
    pub num: JsonInt,
    #[serde(default = "one")]
    pub den: JsonInt,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GwTableJson {
    pub entries: Vec<GwEntry>,
}

impl GwTableJson {
    pub fn from_invariants(gw: &GwInvariants) -> Self {
        let mut entries: Vec<GwEntry> = gw
            .iter()
            .map(|((g, d), v)| GwEntry {
                g,
                d,
                num: v.numer().clone().into(),
                den: v.denom().clone().into(),
            })
            .collect();
        entries.sort_by_key(|e| (e.d, e.g));
        Self { entries }
    }

    pub fn to_invariants(&self) -> Result<GwInvariants> {
        let mut gw = GwInvariants::new();
        let mut seen = BTreeMap::new();
        for (i, e) in self.entries.iter().enumerate() {
            let field = format!("entries[{i}]");
            if e.d == 0 {
                return Err(SchemaError::invalid(field + ".d", "degree must be positive"));
            }
            if seen.insert((e.g, e.d), ()).is_some() {
                return Err(SchemaError::invalid(field, format!("duplicate entry g={} d={}", e.g, e.d)));
            }
            let v = rational(&e.num, &e.den, &format!("{field}.den"))?;
            gw.insert(e.g, e.d, v).map_err(|err| SchemaError::invalid(field, err))?;
        }
        Ok(gw)
    }
}

/// Output of `k3`: the decomposition table (readable as a GV table) together
/// with the independent KKV table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct K3ReportJson {
    pub kmax: u32,
    pub entries: Vec<GvEntry>,
    pub kkv_entries: Vec<GvEntry>,
    pub kkv_match: bool,
}

impl K3ReportJson {
    pub fn new(gv: &GvTable, kkv: &GvTable, kkv_match: bool) -> Self {
        let rows = |t: &GvTable| {
            t.rows()
                .into_iter()
                .map(|(h, k, n)| GvEntry { h, k, n: n.into() })
                .collect()
        };
        Self {
            kmax: gv.kmax,
            entries: rows(gv),
            kkv_entries: rows(kkv),
            kkv_match,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: u32,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(default)]
    pub x_monomial: Vec<String>,
    #[serde(default = "unit_name")]
    pub y_basis: String,
    pub coeff_num: JsonInt,
    #[serde(default = "one")]
    pub coeff_den: JsonInt,
}

fn unit_name() -> String {
    "1".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingJson {
    pub h2: String,
    pub h4: String,
    pub value: JsonInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleJson {
    pub classes: [String; 3],
    pub value: JsonInt,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cy3Json {
    /// Missing pairs pair to zero.
    #[serde(default)]
    pub pairing: Vec<PairingJson>,
    #[serde(default)]
    pub triple_product: Vec<TripleJson>,
    /// `c₂(T_Y)` in the `H⁴` basis; missing classes have coefficient zero.
    #[serde(default)]
    pub c2: BTreeMap<String, JsonInt>,
}

/// Chern data of a family on `X × Y`, with the intersection data of `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernJson {
    pub rank: JsonInt,
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub alpha1: Vec<TermJson>,
    #[serde(default)]
    pub alpha2: Vec<TermJson>,
    #[serde(default)]
    pub alpha3: Vec<TermJson>,
    #[serde(default)]
    pub delta4: Vec<TermJson>,
    pub cy3: Cy3Json,
}

impl ChernJson {
    pub fn to_model(&self) -> Result<(GrrModel, ChernData)> {
        let mut x_gens = Vec::new();
        let mut h2 = Vec::new();
        let mut h4 = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let field = format!("generators[{i}]");
            match (g.side, g.degree) {
                (Side::X, _) => x_gens.push(XGenerator {
                    name: g.name.clone(),
                    degree: g.degree,
                }),
                (Side::Y, 2) => h2.push(g.name.clone()),
                (Side::Y, 4) => h4.push(g.name.clone()),
                (Side::Y, d) => {
                    return Err(SchemaError::invalid(
                        field + ".degree",
                        format!("Y generators have degree 2 or 4, got {d}"),
                    ))
                }
            }
        }
        let pos = |names: &[String], n: &str, field: String| {
            names
                .iter()
                .position(|m| m == n)
                .ok_or_else(|| SchemaError::invalid(field, format!("unknown class `{n}`")))
        };
        let mut pairing = vec![vec![BigInt::zero(); h4.len()]; h2.len()];
        for (i, p) in self.cy3.pairing.iter().enumerate() {
            let a = pos(&h2, &p.h2, format!("cy3.pairing[{i}].h2"))?;
            let b = pos(&h4, &p.h4, format!("cy3.pairing[{i}].h4"))?;
            pairing[a][b] = p.value.0.clone();
        }
        let mut triples = Vec::new();
        for (i, t) in self.cy3.triple_product.iter().enumerate() {
            let mut idx = [0; 3];
            for (j, c) in t.classes.iter().enumerate() {
                idx[j] = pos(&h2, c, format!("cy3.triple_product[{i}].classes[{j}]"))?;
            }
            triples.push((idx, t.value.0.clone()));
        }
        let mut c2 = vec![BigInt::zero(); h4.len()];
        for (name, v) in &self.cy3.c2 {
            c2[pos(&h4, name, format!("cy3.c2.{name}"))?] = v.0.clone();
        }
        let cy = Cy3Data::new(h2, h4, pairing, triples, c2).map_err(|e| SchemaError::invalid("cy3", e))?;
        let model = GrrModel::new(x_gens, cy).map_err(|e| SchemaError::invalid("generators", e))?;

        let class = |terms: &[TermJson], which: &str| -> Result<KunnethClass> {
            let mut k = KunnethClass::zero();
            for (i, t) in terms.iter().enumerate() {
                let field = format!("{which}[{i}]");
                let x = model
                    .x_monomial(&t.x_monomial)
                    .map_err(|e| SchemaError::invalid(format!("{field}.x_monomial"), e))?;
                let y = model
                    .y_basis(&t.y_basis)
                    .map_err(|e| SchemaError::invalid(format!("{field}.y_basis"), e))?;
                let c = rational(&t.coeff_num, &t.coeff_den, &format!("{field}.coeff_den"))?;
                k = k.add(&model.term(x, y, c));
            }
            Ok(k)
        };
        let cd = model
            .chern_data(
                self.rank.0.clone(),
                class(&self.alpha1, "alpha1")?,
                class(&self.alpha2, "alpha2")?,
                class(&self.alpha3, "alpha3")?,
                class(&self.delta4, "delta4")?,
            )
            .map_err(|e| SchemaError::invalid("chern data", e))?;
        Ok((model, cd))
    }

    pub fn from_model(model: &GrrModel, cd: &ChernData) -> Self {
        let cy = model.cy();
        let mut generators: Vec<GeneratorJson> = model
            .x_generators()
            .iter()
            .map(|g| GeneratorJson {
                name: g.name.clone(),
                degree: g.degree,
                side: Side::X,
            })
            .collect();
        for (names, degree) in [(cy.h2_names(), 2), (cy.h4_names(), 4)] {
            generators.extend(names.iter().map(|n| GeneratorJson {
                name: n.clone(),
                degree,
                side: Side::Y,
            }));
        }
        let n = cy.rank();
        let mut pairing = Vec::new();
        for i in 0..n {
            for k in 0..n {
                let v = &cy.pairing()[i][k];
                if !v.is_zero() {
                    pairing.push(PairingJson {
                        h2: cy.h2_names()[i].clone(),
                        h4: cy.h4_names()[k].clone(),
                        value: v.clone().into(),
                    });
                }
            }
        }
        let mut triple_product = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let v = cy.triple(i, j, k);
                    if !v.is_zero() {
                        let name = |a: usize| cy.h2_names()[a].clone();
                        triple_product.push(TripleJson {
                            classes: [name(i), name(j), name(k)],
                            value: v.clone().into(),
                        });
                    }
                }
            }
        }
        let c2 = cy
            .c2()
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (cy.h4_names()[k].clone(), v.clone().into()))
            .collect();
        let terms = |c: &KunnethClass| {
            c.terms()
                .map(|(x, y, v)| TermJson {
                    x_monomial: model.x_monomial_names(x),
                    y_basis: cy.y_name(y),
                    coeff_num: v.numer().clone().into(),
                    coeff_den: v.denom().clone().into(),
                })
                .collect()
        };
        Self {
            rank: cd.rank.clone().into(),
            generators,
            alpha1: terms(&cd.alpha1),
            alpha2: terms(&cd.alpha2),
            alpha3: terms(&cd.alpha3),
            delta4: terms(&cd.delta4),
            cy3: Cy3Json {
                pairing,
                triple_product,
                c2,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XTermJson {
    pub x_monomial: Vec<String>,
    pub num: JsonInt,
    pub den: JsonInt,
}

pub fn x_terms(model: &GrrModel, c: &XClass) -> Vec<XTermJson> {
    c.terms()
        .map(|(x, v)| XTermJson {
            x_monomial: model.x_monomial_names(x),
            num: v.numer().clone().into(),
            den: v.denom().clone().into(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityJson {
    pub c1: Vec<XTermJson>,
    pub integral: bool,
    pub even: Option<bool>,
    pub alpha1_zero: bool,
    /// `π_*(α₂²)`, present when `α₁ = 0`.
    pub alpha2_square: Option<Vec<XTermJson>>,
    /// `c₁(π_! E)`, present when `α₁ = 0`.
    pub index_c1: Option<Vec<XTermJson>>,
    pub rank: JsonInt,
}

impl ParityJson {
    pub fn new(model: &GrrModel, cd: &ChernData, report: &ParityReport) -> Self {
        Self {
            c1: x_terms(model, &report.c1),
            integral: report.integral,
            even: report.even,
            alpha1_zero: report.split.is_some(),
            alpha2_square: report.split.as_ref().map(|s| x_terms(model, &s.alpha2_square)),
            index_c1: report.split.as_ref().map(|s| x_terms(model, &s.index_c1)),
            rank: cd.rank.clone().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityRunJson {
    pub index: u32,
    pub path: String,
    pub cy3: String,
    pub rank: JsonInt,
    /// Verdict on the data as generated.
    pub even: bool,
    /// Verdict after the determinant twist (equal to `even` on the
    /// `alpha1-zero` path).
    pub reduced_even: bool,
    pub c1: Vec<XTermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityBatchJson {
    pub seed: u64,
    pub runs: Vec<ParityRunJson>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignsJson {
    /// `"a,b"` → determinant of the transition on `U_a ∩ U_b`.
    #[serde(default)]
    pub pairs: BTreeMap<String, i64>,
    /// `"a,b,c"` → correction sign on the triple overlap.
    #[serde(default)]
    pub triples: BTreeMap<String, i64>,
}

/// A cover: its vertices, overlaps keyed by size (`"2"`, `"3"`, `"4"`), and
/// optional sign data. Pairs without a sign default to `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub faces: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub signs: Option<SignsJson>,
}

impl CoverJson {
    pub fn nerve(&self) -> std::result::Result<Nerve, cech::CechError> {
        let faces: Vec<Vec<String>> = self.faces.values().flatten().cloned().collect();
        Nerve::new(self.vertices.clone(), &faces)
    }

    /// Checks the face keys against the sizes of the listed faces.
    pub fn check_face_keys(&self) -> Result<()> {
        for (key, faces) in &self.faces {
            let size: usize = key
                .parse()
                .ok()
                .filter(|s| (2..=4).contains(s))
                .ok_or_else(|| SchemaError::invalid(format!("faces.{key}"), "keys are \"2\", \"3\" or \"4\""))?;
            if let Some(i) = faces.iter().position(|f| f.len() != size) {
                return Err(SchemaError::invalid(
                    format!("faces.{key}[{i}]"),
                    format!("expected {size} vertices"),
                ));
            }
        }
        Ok(())
    }

    /// The sign cochain `σ`; all `+1` when no signs are given.
    pub fn sigma(&self, nerve: &Nerve) -> Result<Cochain> {
        let Some(signs) = &self.signs else {
            return Ok(Cochain::zero(nerve, 2));
        };
        let split = |key: &str, len: usize, field: &str| -> Result<Vec<usize>> {
            let parts: Vec<&str> = key.split(',').map(str::trim).collect();
            if parts.len() != len {
                return Err(SchemaError::invalid(format!("{field}.{key}"), format!("expected {len} comma-separated vertices")));
            }
            parts
                .iter()
                .map(|p| {
                    nerve
                        .vertex_index(p)
                        .ok_or_else(|| SchemaError::invalid(format!("{field}.{key}"), format!("unknown vertex `{p}`")))
                })
                .collect()
        };
        let mut dets = BTreeMap::new();
        for f in nerve.faces(1) {
            dets.insert((f[0], f[1]), 1);
        }
        let mut given = BTreeMap::new();
        for (key, &v) in &signs.pairs {
            let p = split(key, 2, "signs.pairs")?;
            let edge = (p[0].min(p[1]), p[0].max(p[1]));
            if given.insert(edge, v).is_some_and(|prev| prev != v) {
                return Err(SchemaError::invalid(format!("signs.pairs.{key}"), "the two orderings disagree"));
            }
            dets.insert(edge, v);
        }
        let mut corrections = BTreeMap::new();
        for (key, &v) in &signs.triples {
            let t = split(key, 3, "signs.triples")?;
            corrections.insert([t[0], t[1], t[2]], v);
        }
        cech::transition_sign_cochain(nerve, &dets, &corrections).map_err(|e| SchemaError::invalid("signs", e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechJson {
    pub cocycle: bool,
    /// A quadruple overlap on which the cocycle condition fails.
    pub violation: Option<Vec<String>>,
    pub trivial: Option<bool>,
    /// `"a,b"` → sign of the gluing witness on each pair overlap.
    pub witness: Option<BTreeMap<String, i64>>,
    pub h1_dim: usize,
    pub h2_dim: usize,
    /// `2^h1_dim`, as a decimal string.
    pub torsor_count: String,
}

impl CechJson {
    pub fn new(nerve: &Nerve, sigma: &Cochain) -> Self {
        let violation = cech::cocycle_violation(nerve, sigma);
        let obstruction = match violation {
            None => Some(cech::obstruction_class(nerve, sigma).expect("checked cocycle")),
            Some(_) => None,
        };
        let witness = obstruction.as_ref().and_then(|o| o.witness.as_ref()).map(|w| {
            nerve
                .faces(1)
                .iter()
                .enumerate()
                .map(|(i, f)| (nerve.face_labels(f).join(","), i64::from(w.sign(i))))
                .collect()
        });
        Self {
            cocycle: violation.is_none(),
            violation: violation.map(|f| nerve.face_labels(&f)),
            trivial: obstruction.map(|o| o.trivial),
            witness,
            h1_dim: cech::betti(nerve, 1),
            h2_dim: cech::betti(nerve, 2),
            torsor_count: cech::torsor_count(nerve).to_string(),
        }
    }
}

/// Optional settings read from the file named by `GVKIT_CONFIG`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigJson {
    pub kmax: Option<u32>,
    pub gmax: Option<u32>,
    pub dmax: Option<u32>,
    pub hmax: Option<u32>,
    pub format: Option<String>,
    pub seed: Option<u64>,
}

/// Decimal rendering of a rational for human-readable summaries.
pub fn show_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-{}/{}", r.numer().abs(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_survive() {
        let big = "123456789012345678901234567890";
        let t: GvTableJson = parse(&format!(r#"{{"entries":[{{"h":0,"k":1,"n":{big}}}]}}"#)).unwrap();
        assert_eq!(t.entries[0].n.0.to_string(), big);
        assert!(to_json(&t).contains(big));
    }

    #[test]
    fn errors_name_the_field() {
        let err = parse::<GvTableJson>(r#"{"entries":[{"h":0,"k":1,"n":1.5}]}"#).unwrap_err();
        assert!(err.to_string().contains("entries[0].n"), "{err}");
        let err = parse::<GwTableJson>(r#"{"entries":[{"g":0,"num":1}]}"#).unwrap_err();
        assert!(err.to_string().contains("entries[0]"), "{err}");
        let t: GwTableJson = parse(r#"{"entries":[{"g":0,"d":1,"num":1,"den":0}]}"#).unwrap();
        assert!(t.to_invariants().unwrap_err().to_string().contains("entries[0].den"));
    }
}
