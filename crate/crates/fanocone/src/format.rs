//! JSON documents read and written by the CLI.
//!
//! Rationals travel as strings: `"p"` for integers, `"p/q"` otherwise.
//! Integer exponent and ray coordinates are plain JSON integers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use fanocone_core::degeneration::SupportEntry;
use fanocone_core::{Error, MonomialIdeal, PolyCone, ToricConeData, WeightedPoint};

/// An exact rational serialized as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(pub BigRational);

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat(r)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s).map(Rat).ok_or_else(|| format!("not a rational: {s:?}"))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat::from(BigInt::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat::from(BigInt::from(v)))
            }
        }
        d.deserialize_any(V)
    }
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(digits * sign, den))
}

/// A comma-separated vector of rationals (`"1/2,3/2,1"`).
pub fn parse_exact_vector(s: &str) -> Option<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

/// A comma-separated vector of floats. Rational entries are accepted too.
pub fn parse_float_vector(s: &str) -> Option<Vec<f64>> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            match x.parse::<f64>() {
                Ok(v) if v.is_finite() => Some(v),
                Ok(_) => None,
                Err(_) => parse_rational(x).map(|r| fanocone_core::Scalar::to_f64(&r)),
            }
        })
        .collect()
}

pub fn rats(v: &[BigRational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn ray_i64(r: &[BigInt]) -> Vec<i64> {
    r.iter().map(|x| i64::try_from(x).expect("ray coordinate fits in i64")).collect()
}

fn to_big(r: &[i64]) -> Vec<BigInt> {
    r.iter().map(|&x| BigInt::from(x)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJson {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
}

impl ConeJson {
    /// Canonical form: rays sorted lexicographically.
    pub fn from_cone(c: &PolyCone) -> Self {
        let mut rays: Vec<Vec<i64>> = c.rays().iter().map(|r| ray_i64(r)).collect();
        rays.sort();
        ConeJson { rank: c.rank(), rays }
    }

    pub fn to_cone(&self) -> Result<PolyCone, Error> {
        PolyCone::new(self.rank, self.rays.iter().map(|r| to_big(r)).collect())
    }
}

/// A singularity. `boundary` defaults to all zeros and `label` to `""`, so
/// a cone document is also a valid singularity document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularityJson {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    #[serde(default)]
    pub boundary: Option<Vec<Rat>>,
    #[serde(default)]
    pub label: String,
}

impl SingularityJson {
    /// Canonical form: rays sorted lexicographically, each keeping its
    /// boundary coefficient.
    pub fn from_data(d: &ToricConeData) -> Self {
        let mut pairs: Vec<(Vec<i64>, Rat)> =
            d.sigma().rays().iter().zip(d.boundary()).map(|(r, c)| (ray_i64(r), Rat(c.clone()))).collect();
        pairs.sort();
        let (rays, boundary) = pairs.into_iter().unzip();
        SingularityJson { rank: d.rank(), rays, boundary: Some(boundary), label: d.label().to_string() }
    }

    pub fn to_data(&self) -> Result<ToricConeData, Error> {
        let rays: Vec<Vec<BigInt>> = self.rays.iter().map(|r| to_big(r)).collect();
        let boundary = match &self.boundary {
            Some(b) => b.iter().map(|r| r.0.clone()).collect(),
            None => vec![BigRational::zero(); rays.len()],
        };
        ToricConeData::new(self.rank, rays, boundary, self.label.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealJson {
    pub n: usize,
    pub generators: Vec<Vec<i64>>,
}

impl IdealJson {
    /// Minimal generators, sorted.
    pub fn from_ideal(a: &MonomialIdeal) -> Self {
        IdealJson { n: a.n(), generators: a.generators().iter().map(|g| ray_i64(g)).collect() }
    }

    pub fn to_ideal(&self) -> Result<MonomialIdeal, Error> {
        MonomialIdeal::new(self.n, self.generators.iter().map(|g| to_big(g)).collect())
    }
}

/// One coordinate of a toy point: either a bare weight pair `[w, w']` or an
/// object with optional `nonzero` flag and `tag`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SupportJson {
    Weights([i64; 2]),
    Entry {
        weights: [i64; 2],
        #[serde(default = "yes")]
        nonzero: bool,
        #[serde(default)]
        tag: String,
    },
}

fn yes() -> bool {
    true
}

impl SupportJson {
    fn entry(&self) -> SupportEntry {
        match self {
            SupportJson::Weights([a, b]) => SupportEntry::new(*a, *b),
            SupportJson::Entry { weights: [a, b], nonzero, tag } => {
                SupportEntry { weights: (*a, *b), nonzero: *nonzero, tag: tag.clone() }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToyJson {
    pub support: Vec<SupportJson>,
    /// Directions applied in turn; defaults to `[[1, 0], [0, 1]]`.
    #[serde(default)]
    pub directions: Option<Vec<[i64; 2]>>,
    /// `k` for the composed 1-PS `(t^k, t)`; defaults to the least valid `k`.
    #[serde(default)]
    pub k: Option<u64>,
}

impl ToyJson {
    pub fn to_point(&self) -> Result<WeightedPoint, Error> {
        WeightedPoint::new(self.support.iter().map(SupportJson::entry).collect())
    }

    pub fn directions(&self) -> Vec<(i64, i64)> {
        match &self.directions {
            Some(d) => d.iter().map(|[a, b]| (*a, *b)).collect(),
            None => vec![(1, 0), (0, 1)],
        }
    }
}

/// A number that is a `"p/q"` string in exact mode and a float otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Exact(Rat),
    Float(f64),
}

impl Num {
    pub fn as_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => fanocone_core::Scalar::to_f64(&r.0),
            Num::Float(x) => *x,
        }
    }
}

pub fn values_exact(v: &[BigRational]) -> Vec<Num> {
    v.iter().map(|x| Num::Exact(Rat(x.clone()))).collect()
}

pub fn values_float(v: &[f64]) -> Vec<Num> {
    v.iter().map(|x| Num::Float(*x)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolOutput {
    pub label: String,
    pub xi: Vec<Num>,
    pub vol: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HvolOutput {
    pub label: String,
    pub xi: Vec<Num>,
    pub log_discrepancy: Num,
    pub vol: Num,
    pub hvol: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimizeOutput {
    pub label: String,
    pub rank: usize,
    pub gorenstein: Vec<Rat>,
    pub minimizer: Vec<f64>,
    pub min_hvol: f64,
    pub grad_norm: f64,
    pub newton_iters: usize,
    pub slice_value: Rat,
    pub certificate: String,
    pub slice_hessian_min_eig: Option<f64>,
    pub regularity: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictOutput {
    pub label: String,
    pub xi0: Vec<f64>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FutakiOutput {
    pub label: String,
    pub xi0: Vec<Num>,
    pub eta: Vec<Num>,
    pub normalized_xi0: Vec<Num>,
    pub normalized_eta: Vec<Num>,
    pub t_xi_eta: Vec<Num>,
    pub fut: Num,
    pub fut_hvol: Num,
    pub ding: Num,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncatedOutput {
    pub t: f64,
    pub value: f64,
    pub closed_form: f64,
    pub bound: f64,
    pub tail_bound: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterOutput {
    pub label: String,
    pub xi: Vec<f64>,
    pub t_values: Vec<f64>,
    pub f_values: Vec<f64>,
    pub truncation_bound: Option<f64>,
    pub a0_estimate: f64,
    pub a0_error: f64,
    pub vol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated: Option<TruncatedOutput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LctOutput {
    pub n: usize,
    pub generators: Vec<Vec<i64>>,
    pub mult: Rat,
    pub lct: Rat,
    pub normalized: Rat,
    pub bound_nn: Rat,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitStep {
    pub direction: [i64; 2],
    pub mu: i128,
    pub support: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToyOutput {
    pub support: Vec<[i64; 2]>,
    pub chain: Vec<LimitStep>,
    pub two_step: Vec<[i64; 2]>,
    pub min_k: u64,
    pub k: u64,
    pub composed: Vec<[i64; 2]>,
    pub composed_equals_two_step: bool,
    pub mu_composed: i128,
    pub mu_stepwise: i128,
    pub residual: i128,
}

pub fn weights_json(w: &[(i64, i64)]) -> Vec<[i64; 2]> {
    w.iter().map(|&(a, b)| [a, b]).collect()
}

/// Whether any number in `v` is a JSON float.
pub fn contains_float(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_f64(),
        serde_json::Value::Array(a) => a.iter().any(contains_float),
        serde_json::Value::Object(o) => o.values().any(contains_float),
        _ => false,
    }
}
