//! Conditional complexity `C(obj | cond)`: the shortest code in the code space attached to
//! `cond`. Three kinds of code share that space:
//!
//! * `0` + any unconditional code of `obj`;
//! * `10` + data read off the condition: `EG(l)` then indices into a model, Shannon-Fano
//!   codewords of a distribution, or (for a string inside a tuple) `EG(position)`;
//! * `11` + `EG(a+1) EG(b+1)` + rank of a registered distribution among those with
//!   `C(Q) <= a` and `ceil(-log2 Q(xs)) <= b`, in `ceil(log2 N(a,b))` bits.

use num_rational::BigRational;
use num_traits::Signed;

use crate::bits::{ceil_log2, gamma_len, BitReader, BitString, Bits, StringTuple};
use crate::codebook::codec::header;
use crate::codebook::decode::read_object;
use crate::codebook::engine::{complexity_in, Tally};
use crate::codebook::famdist::FamilyDist;
use crate::codebook::registry::{admissible, neg_log_ceil};
use crate::codebook::sf::{sf_len, SfCode};
use crate::codebook::system::{CodeScheme, ComplexityReport, DescriptionSystem, Object, Scheme};
use crate::error::{Error, Result};

fn data_of(obj: &Object) -> Option<StringTuple> {
    match obj {
        Object::String(x) => Some(StringTuple::single(*x)),
        Object::Tuple(t) => Some(t.clone()),
        _ => None,
    }
}

fn data_code(obj: &Object, cond: &Object) -> Option<Bits> {
    let mut b = Bits::new();
    b.push_str_bits(header::COND_DATA);
    match cond {
        Object::Model(a) => {
            let xs = data_of(obj)?;
            b.push_gamma(xs.l() as u64);
            for x in xs.iter() {
                b.push_uint(a.index_of(x)?, ceil_log2(a.cardinality()));
            }
        }
        Object::Distribution(p) => {
            let xs = data_of(obj)?;
            let code = SfCode::new(p)?;
            b.push_gamma(xs.l() as u64);
            for x in xs.iter() {
                b.extend(&code.codeword(x)?);
            }
        }
        Object::String(_) | Object::Tuple(_) => {
            let Object::String(y) = obj else { return None };
            let xs = data_of(cond)?;
            let j = xs.iter().position(|x| x == y)?;
            b.push_gamma(j as u64 + 1);
        }
    }
    Some(b)
}

/// The rank code of `p` given data `xs`, when `p` has a family code.
fn rank_code(sys: &DescriptionSystem, p: &crate::models::RationalDistribution, xs: &StringTuple) -> Result<Option<Bits>> {
    let Some(fd) = FamilyDist::representations(p).into_iter().next().map(|f| f.canonical()) else {
        return Ok(None);
    };
    let a = complexity_in(sys, &Object::Distribution(p.clone()))?.value;
    let Some(b) = neg_log_ceil(&fd, xs) else { return Ok(None) };
    let list = admissible(xs, a, b)?;
    let Some(rank) = list.iter().position(|e| e.dist == fd) else { return Ok(None) };
    let mut bits = Bits::new();
    bits.push_str_bits(header::COND_RANK);
    bits.push_gamma(a as u64 + 1);
    bits.push_gamma(b as u64 + 1);
    bits.push_uint(rank as u64, ceil_log2(list.len() as u64));
    Ok(Some(bits))
}

/// Length of the rank code with parameters `(a, b)` among `count` candidates.
pub fn rank_code_len(a: u32, b: u32, count: u64) -> u32 {
    2 + gamma_len(a as u64 + 1) + gamma_len(b as u64 + 1) + ceil_log2(count)
}

/// Exact `C(obj | cond)` under `sys`, with the lexicographically first shortest code.
pub fn conditional_complexity_in(sys: &DescriptionSystem, obj: &Object, cond: &Object) -> Result<ComplexityReport> {
    if cond.n() > sys.max_n() {
        return Err(Error::ObjectOutOfBounds(format!("condition over B^{}", cond.n())));
    }
    let plain = complexity_in(sys, obj)?;
    let mut tally = Tally::new(false);
    let CodeScheme::Plain(scheme) = plain.witness.scheme else { unreachable!("unconditional witness") };
    tally.offer(1 + plain.value, CodeScheme::CondPlain(scheme), || {
        let mut b = Bits::new();
        b.push_str_bits(header::COND_PLAIN);
        b.extend(&plain.witness.bits);
        b
    });
    if let Some(b) = data_code(obj, cond) {
        tally.offer(b.len() as u32, CodeScheme::CondData, || b);
    }
    if let (Object::Distribution(p), Some(xs), true) = (obj, data_of(cond), sys.enabled(Scheme::Distribution)) {
        if let Some(b) = rank_code(sys, p, &xs)? {
            tally.offer(b.len() as u32, CodeScheme::CondRank, || b);
        }
    }
    tally.into_report(&format!("{obj} | {cond}"))
}

pub fn conditional_complexity(obj: impl Into<Object>, cond: impl Into<Object>) -> Result<ComplexityReport> {
    conditional_complexity_in(&DescriptionSystem::standard(), &obj.into(), &cond.into())
}

/// `C(xs | P)` from the data's probabilities alone, given `c_plain = C(xs)`. Agrees with
/// [`conditional_complexity_in`] for every family distribution over `B^n`, `n <= 8`.
pub fn data_given_distribution_len(c_plain: u32, probs: &[BigRational]) -> u32 {
    let plain = 1 + c_plain;
    if probs.iter().any(|p| !p.is_positive()) {
        return plain;
    }
    let data = 2 + gamma_len(probs.len() as u64) + probs.iter().map(sf_len).sum::<u32>();
    plain.min(data)
}

/// Decodes a complete conditional code relative to `cond`.
pub fn decode_conditional(sys: &DescriptionSystem, bits: &Bits, cond: &Object) -> Option<Object> {
    let mut r = BitReader::new(bits.as_slice());
    let obj = read_conditional(sys, &mut r, cond)?;
    r.at_end().then_some(obj)
}

fn read_conditional(sys: &DescriptionSystem, r: &mut BitReader<'_>, cond: &Object) -> Option<Object> {
    if !r.bit()? {
        return read_object(sys, r);
    }
    if !r.bit()? {
        return match cond {
            Object::Model(a) => {
                let l = r.gamma()? as usize;
                let width = ceil_log2(a.cardinality());
                let items: Option<Vec<BitString>> = (0..l)
                    .map(|_| {
                        let v = a.extension().select(r.uint(width)?)?;
                        BitString::new(a.n(), v).ok()
                    })
                    .collect();
                StringTuple::new(items?).ok().map(Object::from)
            }
            Object::Distribution(p) => {
                let l = r.gamma()? as usize;
                let code = SfCode::new(p)?;
                let items: Option<Vec<BitString>> = (0..l).map(|_| code.read(r)).collect();
                StringTuple::new(items?).ok().map(Object::from)
            }
            Object::String(_) | Object::Tuple(_) => {
                let xs = data_of(cond)?;
                let j = r.gamma_at_most(xs.l() as u64)?;
                Some(Object::String(xs.items()[j as usize - 1]))
            }
        };
    }
    if !sys.enabled(Scheme::Distribution) {
        return None;
    }
    let xs = data_of(cond)?;
    let a = r.gamma()? - 1;
    let b = r.gamma()? - 1;
    let list = admissible(&xs, a as u32, b as u32).ok()?;
    let rank = r.uint(ceil_log2(list.len().max(1) as u64))?;
    let e = list.get(rank as usize)?;
    Some(Object::Distribution(e.dist.materialize()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::engine::c;
    use crate::models::{parse_distribution, parse_model};

    fn s(x: &str) -> BitString {
        x.parse().unwrap()
    }

    #[test]
    fn member_of_power_of_two_model_costs_index_plus_header() {
        let a = parse_model("cyl n=4 mask=1000 pat=0").unwrap();
        for x in a.members() {
            let r = conditional_complexity(x, a.clone()).unwrap();
            assert!(r.value <= 3 + 3 + 1, "{x}: {}", r.value);
        }
    }

    #[test]
    fn non_member_pays_one_bit_over_plain() {
        let a = parse_model("cyl n=4 mask=1000 pat=0").unwrap();
        let x = s("1010");
        let r = conditional_complexity(x, a).unwrap();
        assert_eq!(r.value, c(x).unwrap() + 1);
        assert!(matches!(r.witness.scheme, CodeScheme::CondPlain(_)));
    }

    #[test]
    fn witnesses_decode_relative_to_condition() {
        let sys = DescriptionSystem::standard();
        let a: Object = parse_model("ball center=0110 r=1").unwrap().into();
        let p: Object = parse_distribution("halfcube cyl n=4 mask=1100 pat=01").unwrap().into();
        let xs: Object = StringTuple::new(vec![s("0101"), s("0111")]).unwrap().into();
        let cases: Vec<(Object, Object)> = vec![
            (s("0111").into(), a.clone()),
            (s("0000").into(), a.clone()),
            (xs.clone(), a.clone()),
            (xs.clone(), p.clone()),
            (s("0111").into(), xs.clone()),
            (p.clone(), xs.clone()),
            (p.clone(), s("0101").into()),
        ];
        for (obj, cond) in cases {
            let r = conditional_complexity_in(&sys, &obj, &cond).unwrap();
            assert_eq!(decode_conditional(&sys, &r.witness.bits, &cond), Some(obj.clone()), "{obj} | {cond}");
            assert!(r.value <= 1 + c(obj.clone()).unwrap());
        }
    }

    #[test]
    fn rank_code_can_beat_plain_for_distributions() {
        let p = parse_distribution("halfcube cyl n=4 mask=1100 pat=01").unwrap();
        let xs = StringTuple::new(vec![s("0101"), s("0100"), s("0110")]).unwrap();
        let r = conditional_complexity(p.clone(), xs).unwrap();
        assert!(r.value <= 1 + c(p).unwrap());
    }
}
