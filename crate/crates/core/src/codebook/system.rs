//! Objects, schemes, codes and the description-system registry.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bits::{BitString, Bits, StringTuple};
use crate::codebook::codec::header;
use crate::codebook::table::TABLE_MAX_N;
use crate::error::{Error, Result};
use crate::models::{FamilyId, FiniteModel, RationalDistribution};
use crate::scalar::Dyadic;

pub const CODEBOOK_VERSION: u32 = 1;

/// Environment variable naming the directory for cached audit results.
pub const CACHE_DIR_ENV: &str = "ALGOSTAT_CACHE_DIR";

/// Anything the description system can describe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Object {
    String(BitString),
    /// Always `l >= 2`; one-element tuples are strings.
    Tuple(StringTuple),
    Model(FiniteModel),
    Distribution(RationalDistribution),
}

impl Object {
    pub fn n(&self) -> u32 {
        match self {
            Object::String(x) => x.len(),
            Object::Tuple(t) => t.n(),
            Object::Model(a) => a.n(),
            Object::Distribution(p) => p.n(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Object::String(_) => "string",
            Object::Tuple(_) => "tuple",
            Object::Model(_) => "model",
            Object::Distribution(_) => "distribution",
        }
    }
}

impl std::str::FromStr for Object {
    type Err = Error;

    /// `0101`, `0101,0011`, a model literal (`cyl n=4 ...`) or a distribution literal
    /// (`dist {...}`, `uniform <model>`, ...).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let head = s.split_whitespace().next().unwrap_or("");
        match head {
            "dist" | "uniform" | "halfcube" | "perturbed" => Ok(Object::Distribution(crate::models::parse_distribution(s)?)),
            _ if s.starts_with(|c: char| c.is_ascii_alphabetic()) => Ok(Object::Model(crate::models::parse_model(s)?)),
            _ if s.contains(',') || s.starts_with('(') => Ok(s.parse::<StringTuple>()?.into()),
            _ => Ok(Object::String(s.parse()?)),
        }
    }
}

impl From<BitString> for Object {
    fn from(x: BitString) -> Self {
        Object::String(x)
    }
}

impl From<StringTuple> for Object {
    fn from(t: StringTuple) -> Self {
        if t.l() == 1 {
            Object::String(t.items()[0])
        } else {
            Object::Tuple(t)
        }
    }
}

impl From<&StringTuple> for Object {
    fn from(t: &StringTuple) -> Self {
        t.clone().into()
    }
}

impl From<FiniteModel> for Object {
    fn from(a: FiniteModel) -> Self {
        Object::Model(a)
    }
}

impl From<RationalDistribution> for Object {
    fn from(p: RationalDistribution) -> Self {
        Object::Distribution(p)
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::String(x) => write!(f, "{x}"),
            Object::Tuple(t) => write!(f, "{t}"),
            Object::Model(a) => write!(f, "{a}"),
            Object::Distribution(p) => write!(f, "{p}"),
        }
    }
}

/// Unconditional code schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Literal,
    Model,
    TwoPart,
    Distribution,
    ViaDistribution,
    Periodic,
    TupleLiteral,
    TupleModel,
    TupleDistribution,
}

impl Scheme {
    pub const ALL: [Scheme; 9] = [
        Scheme::Literal,
        Scheme::Model,
        Scheme::TwoPart,
        Scheme::Distribution,
        Scheme::ViaDistribution,
        Scheme::Periodic,
        Scheme::TupleLiteral,
        Scheme::TupleModel,
        Scheme::TupleDistribution,
    ];

    pub fn header(self) -> &'static str {
        match self {
            Scheme::Literal => header::LITERAL,
            Scheme::Model => header::MODEL,
            Scheme::TwoPart => header::TWO_PART,
            Scheme::Distribution => header::DISTRIBUTION,
            Scheme::ViaDistribution => header::VIA_DISTRIBUTION,
            Scheme::Periodic => header::PERIODIC,
            Scheme::TupleLiteral => header::TUPLE_LITERAL,
            Scheme::TupleModel => header::TUPLE_MODEL,
            Scheme::TupleDistribution => header::TUPLE_DISTRIBUTION,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Literal => "literal",
            Scheme::Model => "model",
            Scheme::TwoPart => "two-part",
            Scheme::Distribution => "distribution",
            Scheme::ViaDistribution => "via-distribution",
            Scheme::Periodic => "periodic",
            Scheme::TupleLiteral => "tuple-literal",
            Scheme::TupleModel => "tuple-model",
            Scheme::TupleDistribution => "tuple-distribution",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scheme `{s}`")))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which scheme produced a code. Conditional codes live in a separate code space per condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeScheme {
    Plain(Scheme),
    /// `0` followed by an unconditional code.
    CondPlain(Scheme),
    /// `10`: the object read off the condition (index in a model, Shannon-Fano
    /// codeword of a distribution, or position in a tuple).
    CondData,
    /// `11`: rank among registered distributions compatible with the data.
    CondRank,
}

impl fmt::Display for CodeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeScheme::Plain(s) => write!(f, "{s}"),
            CodeScheme::CondPlain(s) => write!(f, "cond-plain/{s}"),
            CodeScheme::CondData => f.write_str("cond-data"),
            CodeScheme::CondRank => f.write_str("cond-rank"),
        }
    }
}

impl Serialize for CodeScheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Code {
    pub bits: Bits,
    pub scheme: CodeScheme,
}

impl Code {
    pub fn len(&self) -> u32 {
        self.bits.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    pub value: u32,
    pub witness: Code,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AprioriMass {
    pub value: Dyadic,
}

impl AprioriMass {
    pub fn to_rational(&self) -> num_rational::BigRational {
        self.value.to_rational()
    }
}

/// The registry of enabled schemes. Complexities, a-priori masses and the Kraft audit
/// are all taken with respect to one of these.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptionSystem {
    schemes: Vec<Scheme>,
    max_n: u32,
}

impl Default for DescriptionSystem {
    fn default() -> Self {
        Self::standard()
    }
}

impl DescriptionSystem {
    /// Every scheme, strings up to the table limit.
    pub fn standard() -> Self {
        Self { schemes: Scheme::ALL.to_vec(), max_n: TABLE_MAX_N }
    }

    pub fn empty() -> Self {
        Self { schemes: Vec::new(), max_n: TABLE_MAX_N }
    }

    pub fn with_schemes(schemes: &[Scheme]) -> Self {
        let mut s = schemes.to_vec();
        s.sort();
        s.dedup();
        Self { schemes: s, max_n: TABLE_MAX_N }
    }

    /// Restricts the universe lengths considered (by audits and decoders) to `1..=max_n`,
    /// at most the table limit.
    pub fn limited_to(mut self, max_n: u32) -> Result<Self> {
        if max_n == 0 || max_n > TABLE_MAX_N {
            return Err(Error::ObjectOutOfBounds(format!("max_n = {max_n}")));
        }
        self.max_n = max_n;
        Ok(self)
    }

    pub fn schemes(&self) -> &[Scheme] {
        &self.schemes
    }

    pub fn max_n(&self) -> u32 {
        self.max_n
    }

    pub fn enabled(&self, s: Scheme) -> bool {
        self.schemes.contains(&s)
    }

    /// Versioned JSON description of the registry.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format": "algostat-codebook",
            "version": CODEBOOK_VERSION,
            "max_n": self.max_n,
            "schemes": self.schemes.iter().map(|s| serde_json::json!({
                "id": s.name(),
                "header": s.header(),
            })).collect::<Vec<_>>(),
            "conditional_headers": {
                "plain": header::COND_PLAIN,
                "data": header::COND_DATA,
                "rank": header::COND_RANK,
            },
            "families": FamilyId::ALL.iter().map(|f| serde_json::json!({
                "id": f.code(),
                "name": f.name(),
            })).collect::<Vec<_>>(),
            "distribution_kinds": {
                "uniform": "00",
                "half-cube": "01",
                "perturbed": "10",
                "explicit": "11",
            },
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("codebook registry: {m}"));
        if v.get("format").and_then(|f| f.as_str()) != Some("algostat-codebook") {
            return Err(bad("missing format tag"));
        }
        let version = v.get("version").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing version"))?;
        if version != CODEBOOK_VERSION as u64 {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let max_n = v.get("max_n").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing max_n"))? as u32;
        let mut schemes = Vec::new();
        for s in v.get("schemes").and_then(|x| x.as_array()).ok_or_else(|| bad("missing schemes"))? {
            let id = s.get("id").and_then(|x| x.as_str()).ok_or_else(|| bad("scheme without id"))?;
            let scheme = Scheme::parse(id)?;
            if s.get("header").and_then(|x| x.as_str()) != Some(scheme.header()) {
                return Err(bad(&format!("header mismatch for {id}")));
            }
            schemes.push(scheme);
        }
        Self::with_schemes(&schemes).limited_to(max_n)
    }

    /// Directory for cached audit results, if configured.
    pub fn cache_dir() -> Option<PathBuf> {
        std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn objects_parse_by_shape() {
        assert_eq!("0101".parse::<Object>().unwrap().kind(), "string");
        assert_eq!("0101,0011".parse::<Object>().unwrap().kind(), "tuple");
        assert_eq!("(0101)".parse::<Object>().unwrap().kind(), "string");
        assert_eq!("cyl n=4 mask=1000 pat=0".parse::<Object>().unwrap().kind(), "model");
        assert_eq!("uniform full n=2".parse::<Object>().unwrap().kind(), "distribution");
        assert_eq!("dist {00:1/2, 11:1/2}".parse::<Object>().unwrap().kind(), "distribution");
        assert!("01x".parse::<Object>().is_err());
    }

    #[test]
    fn registry_json_round_trip() {
        for sys in [
            DescriptionSystem::standard(),
            DescriptionSystem::empty(),
            DescriptionSystem::with_schemes(&[Scheme::Literal]).limited_to(4).unwrap(),
        ] {
            let back = DescriptionSystem::from_json(&sys.to_json()).unwrap();
            assert_eq!(back, sys);
        }
    }

    #[test]
    fn headers_are_prefix_free() {
        let hs: Vec<&str> = Scheme::ALL.iter().map(|s| s.header()).collect();
        for (i, a) in hs.iter().enumerate() {
            for (j, b) in hs.iter().enumerate() {
                if i != j {
                    assert!(!b.starts_with(a), "{a} prefixes {b}");
                }
            }
        }
    }

    #[test]
    fn one_element_tuples_are_strings() {
        let x: BitString = "0110".parse().unwrap();
        assert_eq!(Object::from(StringTuple::single(x)), Object::String(x));
    }
}
