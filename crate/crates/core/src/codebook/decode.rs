//! Decoder for unconditional codes. The inverse of every encoder in the engine, and the
//! oracle the Kraft audit is checked against.

use crate::bits::{ceil_log2, BitReader, BitString, Bits, StringTuple};
use crate::codebook::codec::{read_dist_body, read_model_body, DistBody};
use crate::codebook::sf::SfCode;
use crate::codebook::system::{DescriptionSystem, Object, Scheme};
use crate::models::{family_distribution, FiniteModel, RationalDistribution};

fn read_scheme(r: &mut BitReader<'_>) -> Option<Scheme> {
    let b = |r: &mut BitReader<'_>| r.bit();
    Some(match (b(r)?, b(r)?) {
        (false, false) => Scheme::Literal,
        (false, true) => {
            if b(r)? {
                Scheme::TwoPart
            } else {
                Scheme::Model
            }
        }
        (true, false) => match b(r)? {
            false => Scheme::Distribution,
            true => {
                if b(r)? {
                    Scheme::Periodic
                } else {
                    Scheme::ViaDistribution
                }
            }
        },
        (true, true) => match (b(r)?, b(r)?) {
            (false, false) => Scheme::TupleLiteral,
            (false, true) => Scheme::TupleModel,
            (true, false) => Scheme::TupleDistribution,
            (true, true) => return None,
        },
    })
}

fn read_n(r: &mut BitReader<'_>, max_n: u32) -> Option<u32> {
    r.gamma_at_most(max_n as u64).map(|n| n as u32)
}

fn read_model(r: &mut BitReader<'_>, max_n: u32) -> Option<FiniteModel> {
    read_model_body(r, max_n, &|_| true).map(FiniteModel::from_params)
}

fn read_index(r: &mut BitReader<'_>, a: &FiniteModel) -> Option<BitString> {
    let idx = r.uint(ceil_log2(a.cardinality()))?;
    let v = a.extension().select(idx)?;
    Some(BitString::from_raw(a.n(), v))
}

fn read_dist(r: &mut BitReader<'_>, max_n: u32, allow_explicit: bool) -> Option<RationalDistribution> {
    Some(match read_dist_body(r, max_n, allow_explicit)? {
        DistBody::Family { kind, model } => family_distribution(kind, &FiniteModel::from_params(model)),
        DistBody::Explicit(p) => p,
    })
}

fn read_count(r: &mut BitReader<'_>) -> Option<usize> {
    Some(r.gamma()? as usize + 1)
}

fn tuple(items: Vec<BitString>) -> Option<Object> {
    StringTuple::new(items).ok().map(Object::Tuple)
}

/// Reads one code from `r`. Returns `None` on malformed input or a disabled scheme.
pub fn read_object(sys: &DescriptionSystem, r: &mut BitReader<'_>) -> Option<Object> {
    let max_n = sys.max_n();
    let scheme = read_scheme(r)?;
    if !sys.enabled(scheme) {
        return None;
    }
    Some(match scheme {
        Scheme::Literal => {
            let n = read_n(r, max_n)?;
            Object::String(r.string(n)?)
        }
        Scheme::Periodic => {
            let n = read_n(r, max_n)?;
            let p = r.gamma_at_most(n as u64)? as u32;
            let block = r.uint(p)? as u32;
            let v = (0..n).fold(0u32, |acc, i| (acc << 1) | ((block >> (p - 1 - i % p)) & 1));
            Object::String(BitString::from_raw(n, v))
        }
        Scheme::Model => Object::Model(read_model(r, max_n)?),
        Scheme::TwoPart => {
            let a = read_model(r, max_n)?;
            Object::String(read_index(r, &a)?)
        }
        Scheme::Distribution => Object::Distribution(read_dist(r, max_n, true)?),
        Scheme::ViaDistribution => {
            let p = read_dist(r, max_n, false)?;
            Object::String(SfCode::new(&p)?.read(r)?)
        }
        Scheme::TupleLiteral => {
            let n = read_n(r, max_n)?;
            let l = read_count(r)?;
            tuple((0..l).map(|_| r.string(n)).collect::<Option<_>>()?)?
        }
        Scheme::TupleModel => {
            let a = read_model(r, max_n)?;
            let l = read_count(r)?;
            tuple((0..l).map(|_| read_index(r, &a)).collect::<Option<_>>()?)?
        }
        Scheme::TupleDistribution => {
            let p = read_dist(r, max_n, false)?;
            let code = SfCode::new(&p)?;
            let l = read_count(r)?;
            tuple((0..l).map(|_| code.read(r)).collect::<Option<_>>()?)?
        }
    })
}

/// Decodes a complete code; trailing bits are rejected.
pub fn decode(sys: &DescriptionSystem, bits: &Bits) -> Option<Object> {
    let mut r = BitReader::new(bits.as_slice());
    let obj = read_object(sys, &mut r)?;
    r.at_end().then_some(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::engine::complexity_in;
    use crate::codebook::system::CodeScheme;
    use crate::models::{parse_distribution, parse_model};

    #[test]
    fn witnesses_decode_to_their_objects() {
        let sys = DescriptionSystem::standard();
        let mut objs: Vec<Object> = Vec::new();
        for n in 1..=4 {
            objs.extend(BitString::all(n).map(Object::from));
        }
        let s = |x: &str| x.parse::<BitString>().unwrap();
        for t in [vec!["010", "010"], vec!["000", "111", "001"], vec!["1", "0", "1", "1"]] {
            objs.push(StringTuple::new(t.iter().map(|x| s(x)).collect()).unwrap().into());
        }
        for m in ["cyl n=4 mask=1100 pat=01", "set {000,011,101}", "full n=3", "ball center=0110 r=1"] {
            objs.push(parse_model(m).unwrap().into());
        }
        for d in ["dist {00:1/3, 11:2/3}", "uniform full n=2", "perturbed s=001 interval lo=000 hi=011", "halfcube single x=10"] {
            objs.push(parse_distribution(d).unwrap().into());
        }
        for obj in objs {
            let r = complexity_in(&sys, &obj).unwrap();
            assert_eq!(decode(&sys, &r.witness.bits).as_ref(), Some(&obj), "{obj} via {}", r.witness.scheme);
        }
    }

    #[test]
    fn disabled_schemes_do_not_decode() {
        let all = DescriptionSystem::standard();
        let w = complexity_in(&all, &Object::String("0000".parse().unwrap())).unwrap().witness;
        let CodeScheme::Plain(scheme) = w.scheme else { panic!() };
        assert!(decode(&all, &w.bits).is_some());
        assert!(decode(&DescriptionSystem::empty(), &w.bits).is_none());
        assert!(decode(&DescriptionSystem::with_schemes(&[scheme]), &w.bits).is_some());
    }
}
