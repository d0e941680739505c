//! Codes for parameter strings whose length is already known from context.
//!
//! A word `w` of known length `L` is written either raw (`0` + the `L` bits) or as a
//! period (`1` + EG(p) + the first `p` bits) for any `1 <= p <= L` such that `w` is
//! `p`-periodic. A word therefore has one raw code and one code per period.

use crate::bits::{gamma_len, BitReader, Bits};
use crate::models::family::Word;
use crate::scalar::Dyadic;

/// Whether `w[i] == w[i + p]` for every valid `i`.
pub fn is_periodic(w: Word, p: u32) -> bool {
    if p == 0 || p > w.len {
        return false;
    }
    if p == w.len {
        return true;
    }
    let shift = w.len - p;
    let mask = (1u64 << shift) - 1;
    let v = w.value as u64;
    (v >> p) & mask == v & mask
}

/// Smallest period, always defined for non-empty words.
pub fn min_period(w: Word) -> Option<u32> {
    (1..=w.len).find(|&p| is_periodic(w, p))
}

fn raw_len(w: Word) -> u32 {
    1 + w.len
}

fn periodic_len(p: u32) -> u32 {
    1 + gamma_len(p as u64) + p
}

/// Lengths of every code of `w`.
pub fn lengths(w: Word) -> impl Iterator<Item = u32> {
    std::iter::once(raw_len(w)).chain((1..=w.len).filter(move |&p| is_periodic(w, p)).map(periodic_len))
}

pub fn write_raw(out: &mut Bits, w: Word) {
    out.push(false);
    out.push_uint(w.value as u64, w.len);
}

pub fn write_periodic(out: &mut Bits, w: Word, p: u32) {
    debug_assert!(is_periodic(w, p));
    out.push(true);
    out.push_gamma(p as u64);
    out.push_uint((w.value >> (w.len - p)) as u64, p);
}

/// Every code of `w`, raw first, then by increasing period.
pub fn codes(w: Word) -> Vec<Bits> {
    let mut out = Vec::new();
    let mut raw = Bits::new();
    write_raw(&mut raw, w);
    out.push(raw);
    for p in 1..=w.len {
        if is_periodic(w, p) {
            let mut b = Bits::new();
            write_periodic(&mut b, w, p);
            out.push(b);
        }
    }
    out
}

/// Shortest code, ties broken by the lexicographically smaller bit string.
pub fn shortest(w: Word) -> Bits {
    let mut all = codes(w);
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.swap_remove(0)
}

pub fn min_len(w: Word) -> u32 {
    lengths(w).min().expect("raw code always exists")
}

/// `sum 2^-|c|` over the codes of `w`.
pub fn weight(w: Word) -> Dyadic {
    lengths(w).fold(Dyadic::zero(), |acc, l| &acc + &Dyadic::pow2_neg(l))
}

/// `sum over all words of length len` of [`weight`]: `1/2 + sum_p 2^-(1 + EG(p))`.
pub fn total_weight(len: u32) -> Dyadic {
    let mut acc = Dyadic::pow2_neg(1);
    for p in 1..=len {
        acc += &Dyadic::pow2_neg(1 + gamma_len(p as u64));
    }
    acc
}

/// Number of atom codes of each length, over all words of length `len`.
pub fn length_histogram(len: u32) -> Vec<(u32, u64)> {
    let mut h = vec![(1 + len, 1u64 << len)];
    for p in 1..=len {
        h.push((periodic_len(p), 1u64 << p));
    }
    h
}

pub fn read(r: &mut BitReader<'_>, len: u32) -> Option<Word> {
    if !r.bit()? {
        return Some(Word::new(len, r.uint(len)? as u32));
    }
    let p = r.gamma_at_most(len as u64)?;
    let p = p as u32;
    let seed = r.uint(p)? as u32;
    let mut v: u64 = 0;
    for i in 0..len {
        let bit = (seed >> (p - 1 - (i % p))) & 1;
        v = (v << 1) | bit as u64;
    }
    Some(Word::new(len, v as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_words(len: u32) -> impl Iterator<Item = Word> {
        (0..(1u64 << len)).map(move |v| Word::new(len, v as u32))
    }

    #[test]
    fn periodicity_by_definition() {
        for len in 0..=8 {
            for w in all_words(len) {
                for p in 1..=len {
                    let direct = (0..len - p).all(|i| w.bit(i) == w.bit(i + p));
                    assert_eq!(is_periodic(w, p), direct, "{} p={p}", w.fmt_bits());
                }
            }
        }
        assert_eq!(min_period(Word::new(4, 0)), Some(1));
        assert_eq!(min_period(Word::new(4, 0b0101)), Some(2));
        assert_eq!(min_period(Word::new(4, 0b1000)), Some(4));
    }

    #[test]
    fn every_code_decodes_back() {
        for len in 0..=7 {
            for w in all_words(len) {
                for c in codes(w) {
                    let mut r = BitReader::new(c.as_slice());
                    assert_eq!(read(&mut r, len), Some(w));
                    assert!(r.at_end());
                }
            }
        }
    }

    #[test]
    fn totals_match_enumeration() {
        for len in 0..=8 {
            let direct = all_words(len).fold(Dyadic::zero(), |acc, w| &acc + &weight(w));
            assert_eq!(direct, total_weight(len));
            let count: u64 = all_words(len).map(|w| lengths(w).count() as u64).sum();
            let hist: u64 = length_histogram(len).iter().map(|h| h.1).sum();
            assert_eq!(count, hist);
        }
    }

    #[test]
    fn zeros_are_cheap() {
        // raw: 1 + 8; period 1: 1 + 1 + 1
        assert_eq!(min_len(Word::new(8, 0)), 3);
        assert_eq!(shortest(Word::new(8, 0)).to_string(), "110");
        assert_eq!(min_len(Word::new(0, 0)), 1);
    }
}
