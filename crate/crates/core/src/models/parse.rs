//! Text literals for models and distributions.
//!
//! Models: `cyl n=4 mask=1000 pat=0`, `ball center=0000 r=1`, `interval lo=0000 hi=0111`,
//! `prefix n=4 p=01`, `single x=0101`, `line k=2 a=01 b=10`, `set {0000,0101}`, `full n=4`.
//!
//! Distributions: `dist {0000:1/2, 1111:1/2}`, `uniform <model>`, `halfcube <model>`,
//! `perturbed s=0101 <model>`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::models::distribution::{family_distribution, DistKind, RationalDistribution};
use crate::models::family::{FamilyId, ModelParams, Word};
use crate::models::model::FiniteModel;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn key_values<'a>(tokens: &[&'a str]) -> Result<HashMap<&'a str, &'a str>> {
    tokens
        .iter()
        .map(|t| t.split_once('=').ok_or_else(|| perr(format!("expected key=value, got `{t}`"))))
        .collect()
}

fn get<'a>(kv: &HashMap<&str, &'a str>, key: &str) -> Result<&'a str> {
    kv.get(key).copied().ok_or_else(|| perr(format!("missing `{key}=`")))
}

fn num(kv: &HashMap<&str, &str>, key: &str) -> Result<u32> {
    get(kv, key)?.parse().map_err(|_| perr(format!("`{key}` must be a non-negative integer")))
}

fn string(kv: &HashMap<&str, &str>, key: &str) -> Result<BitString> {
    get(kv, key)?.parse()
}

fn word(s: &str) -> Result<Word> {
    if s.is_empty() {
        return Ok(Word::new(0, 0));
    }
    Ok(Word::of(&s.parse::<BitString>()?))
}

fn sized_word(s: &str, len: u32, what: &str) -> Result<u32> {
    let w = word(s)?;
    if w.len != len {
        return Err(perr(format!("`{what}` must have {len} bits, got {}", w.len)));
    }
    Ok(w.value)
}

/// Parses the braces-delimited body `{a, b, ...}` into trimmed items.
fn braced(s: &str) -> Result<Vec<&str>> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| perr("expected `{...}`"))?;
    Ok(inner.split(',').map(str::trim).filter(|t| !t.is_empty()).collect())
}

pub fn parse_params(s: &str) -> Result<ModelParams> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    let (head, rest) = tokens.split_first().ok_or_else(|| perr("empty model literal"))?;
    let kv = key_values(rest)?;
    let p = match *head {
        "single" => ModelParams::Singleton(string(&kv, "x")?),
        "cyl" => {
            let n = num(&kv, "n")?;
            let mask = sized_word(get(&kv, "mask")?, n, "mask")?;
            let pattern = sized_word(get(&kv, "pat")?, mask.count_ones(), "pat")?;
            ModelParams::Cylinder { n, mask, pattern }
        }
        "ball" => {
            let center = string(&kv, "center")?;
            let radius = num(&kv, "r")?;
            if radius > center.len() {
                return Err(perr("radius exceeds string length"));
            }
            ModelParams::HammingBall { center, radius }
        }
        "interval" => {
            let lo = string(&kv, "lo")?;
            let hi = string(&kv, "hi")?;
            if lo.len() != hi.len() {
                return Err(Error::MixedUniverse);
            }
            if lo > hi {
                return Err(perr("interval with lo > hi"));
            }
            ModelParams::LexInterval { lo, hi }
        }
        "prefix" => {
            let n = num(&kv, "n")?;
            let prefix = word(kv.get("p").copied().unwrap_or(""))?;
            if prefix.len > n {
                return Err(perr("prefix longer than n"));
            }
            ModelParams::PrefixSet { n, prefix }
        }
        "line" => {
            let k = num(&kv, "k")?;
            crate::field::Gf::new(k)?;
            let slope = sized_word(get(&kv, "a")?, k, "a")?;
            let intercept = sized_word(get(&kv, "b")?, k, "b")?;
            ModelParams::PlaneLine { k, slope, intercept }
        }
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    if p.n() == 0 || p.n() > crate::codebook::MAX_N {
        return Err(Error::ObjectOutOfBounds(format!("model over B^{}", p.n())));
    }
    Ok(p)
}

pub fn parse_model(s: &str) -> Result<FiniteModel> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("set") {
        let rest = rest.trim();
        // optional `n=..` before the braces is accepted and checked
        let (n, body) = match rest.split_once('{') {
            Some((pre, _)) if !pre.trim().is_empty() => {
                let kv = key_values(&pre.split_whitespace().collect::<Vec<_>>())?;
                (Some(num(&kv, "n")?), &rest[pre.len()..])
            }
            _ => (None, rest),
        };
        let members = braced(body)?
            .into_iter()
            .map(str::parse::<BitString>)
            .collect::<Result<Vec<_>>>()?;
        let m = FiniteModel::explicit(&members)?;
        if n.is_some_and(|n| n != m.n()) {
            return Err(Error::MixedUniverse);
        }
        return Ok(m);
    }
    if let Some(rest) = s.strip_prefix("full") {
        let kv = key_values(&rest.split_whitespace().collect::<Vec<_>>())?;
        let n = num(&kv, "n")?;
        if n == 0 || n > crate::codebook::MAX_N {
            return Err(Error::ObjectOutOfBounds(format!("model over B^{n}")));
        }
        return Ok(FiniteModel::full(n));
    }
    Ok(FiniteModel::from_params(parse_params(s)?))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: BigInt = a.trim().parse().map_err(|_| perr(format!("bad rational `{s}`")))?;
    let b: BigInt = b.trim().parse().map_err(|_| perr(format!("bad rational `{s}`")))?;
    if b == BigInt::from(0) {
        return Err(perr("zero denominator"));
    }
    Ok(BigRational::new(a, b))
}

pub fn parse_distribution(s: &str) -> Result<RationalDistribution> {
    let s = s.trim();
    let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    match head {
        "dist" => {
            let pairs = braced(rest)?
                .into_iter()
                .map(|item| {
                    let (y, p) = item.split_once(':').ok_or_else(|| perr(format!("expected y:p, got `{item}`")))?;
                    Ok((y.trim().parse::<BitString>()?, parse_rational(p)?))
                })
                .collect::<Result<Vec<_>>>()?;
            RationalDistribution::new(pairs)
        }
        "uniform" => RationalDistribution::uniform_over(&parse_model(rest)?),
        "halfcube" => Ok(family_distribution(DistKind::HalfCube, &parse_model(rest)?)),
        "perturbed" => {
            let rest = rest.trim();
            let (first, model) = rest.split_once(char::is_whitespace).ok_or_else(|| perr("expected `s=.. <model>`"))?;
            let kv = key_values(&[first])?;
            let point = string(&kv, "s")?;
            let a = parse_model(model)?;
            if point.len() != a.n() {
                return Err(Error::MixedUniverse);
            }
            Ok(family_distribution(DistKind::Perturbed(point.value()), &a))
        }
        other => Err(perr(format!("unknown distribution literal `{other}`"))),
    }
}

/// Parses a family name as used on the command line.
pub fn parse_family(s: &str) -> Result<FamilyId> {
    FamilyId::parse(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn model_literals_round_trip_through_display() {
        for lit in [
            "cyl n=4 mask=1000 pat=0",
            "ball center=0110 r=1",
            "interval lo=0001 hi=0111",
            "prefix n=4 p=01",
            "prefix n=4 p=",
            "single x=1010",
            "line k=2 a=01 b=10",
        ] {
            let p = parse_params(lit).unwrap();
            assert_eq!(p.to_string(), lit);
        }
        assert_eq!(parse_model("cyl n=4 mask=1000 pat=0").unwrap().cardinality(), 8);
    }

    #[test]
    fn set_and_full_literals() {
        let a = parse_model("set {0000,0101}").unwrap();
        assert_eq!(a.cardinality(), 2);
        assert_eq!(parse_model("set n=4 {0000,0101}").unwrap(), a);
        assert!(parse_model("set n=3 {0000}").is_err());
        assert_eq!(parse_model("full n=3").unwrap().cardinality(), 8);
    }

    #[test]
    fn distribution_literals() {
        let p = parse_distribution("dist {0000:1/2, 1111:1/2}").unwrap();
        assert_eq!(p.prob(&"1111".parse().unwrap()), rational(1, 2));
        assert!(matches!(
            parse_distribution("dist {0000:1/2, 1111:1/3}"),
            Err(Error::WeightSumNotOne(_))
        ));
        let u = parse_distribution("uniform cyl n=4 mask=1000 pat=0").unwrap();
        assert_eq!(u.support().len(), 8);
        let q = parse_distribution("perturbed s=1111 single x=0000").unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn bad_literals_are_errors() {
        assert!(parse_model("cyl n=4 mask=100 pat=0").is_err());
        assert!(parse_model("ball center=00 r=3").is_err());
        assert!(parse_model("blob x=0").is_err());
        assert!(parse_model("line k=1 a=0 b=1").is_err());
    }
}
