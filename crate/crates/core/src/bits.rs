//! Binary strings, tuples of strings, and the bit buffers codes are written into.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest string the type can hold. The description system itself stops at
/// [`crate::codebook::MAX_N`].
pub const MAX_STRING_LEN: u32 = 32;

/// A binary string of length 1..=32, stored MSB-first in a `u32`.
///
/// Ordering is lexicographic on `(length, bits)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    len: u8,
    value: u32,
}

impl BitString {
    pub fn new(len: u32, value: u32) -> Result<Self> {
        if len == 0 || len > MAX_STRING_LEN {
            return Err(Error::BadLength(format!("string length {len} outside 1..={MAX_STRING_LEN}")));
        }
        if len < 32 && value >> len != 0 {
            return Err(Error::BadLength(format!("value {value} does not fit in {len} bits")));
        }
        Ok(Self { len: len as u8, value })
    }

    /// Unchecked constructor for hot loops; `len` must be in range and `value < 2^len`.
    pub(crate) fn from_raw(len: u32, value: u32) -> Self {
        debug_assert!((1..=MAX_STRING_LEN).contains(&len));
        Self { len: len as u8, value }
    }

    pub fn zeros(len: u32) -> Result<Self> {
        Self::new(len, 0)
    }

    pub fn len(&self) -> u32 {
        self.len as u32
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// Bit `i`, counting from the left.
    pub fn bit(&self, i: u32) -> bool {
        (self.value >> (self.len() - 1 - i)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.bit(i))
    }

    pub fn concat(&self, other: &BitString) -> Result<BitString> {
        let len = self.len() + other.len();
        if len > MAX_STRING_LEN {
            return Err(Error::BadLength(format!("concatenation of length {len}")));
        }
        Ok(BitString::from_raw(len, (self.value << other.len()) | other.value))
    }

    pub fn hamming(&self, other: &BitString) -> u32 {
        (self.value ^ other.value).count_ones()
    }

    /// Every string of length `len`, in increasing order.
    pub fn all(len: u32) -> impl Iterator<Item = BitString> {
        let count: u64 = 1u64 << len;
        (0..count).map(move |v| BitString::from_raw(len, v as u32))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.len, self.value).cmp(&(other.len, other.value))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut value = 0u32;
        for c in s.chars() {
            value = match c {
                '0' => value << 1,
                '1' => (value << 1) | 1,
                _ => return Err(Error::Parse(format!("`{s}` is not a binary string"))),
            };
        }
        BitString::new(s.len() as u32, value)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An ordered tuple of `l >= 1` strings sharing one length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<BitString>", into = "Vec<BitString>")]
pub struct StringTuple {
    items: Vec<BitString>,
}

impl StringTuple {
    pub fn new(items: Vec<BitString>) -> Result<Self> {
        let first = items.first().ok_or_else(|| Error::Invalid("empty tuple".into()))?;
        if items.iter().any(|x| x.len() != first.len()) {
            return Err(Error::BadLength("tuple elements differ in length".into()));
        }
        Ok(Self { items })
    }

    pub fn single(x: BitString) -> Self {
        Self { items: vec![x] }
    }

    pub fn n(&self) -> u32 {
        self.items[0].len()
    }

    pub fn l(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[BitString] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BitString> {
        self.items.iter()
    }

    /// Distinct elements in increasing order.
    pub fn distinct(&self) -> Vec<BitString> {
        let mut v = self.items.clone();
        v.sort();
        v.dedup();
        v
    }

    /// The tuple extended by one more string.
    pub fn with(&self, y: BitString) -> Result<Self> {
        let mut items = self.items.clone();
        items.push(y);
        Self::new(items)
    }
}

impl TryFrom<Vec<BitString>> for StringTuple {
    type Error = Error;
    fn try_from(v: Vec<BitString>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<StringTuple> for Vec<BitString> {
    fn from(t: StringTuple) -> Self {
        t.items
    }
}

impl From<BitString> for StringTuple {
    fn from(x: BitString) -> Self {
        Self::single(x)
    }
}

impl fmt::Display for StringTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for StringTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StringTuple{self}")
    }
}

impl FromStr for StringTuple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let items = s.split(',').map(str::parse).collect::<Result<Vec<_>>>()?;
        Self::new(items)
    }
}

/// Growable bit sequence used for codes.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_str_bits(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bad bit `{c}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    /// Appends the low `width` bits of `value`, MSB first.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        for i in (0..width).rev() {
            self.0.push((value >> i) & 1 == 1);
        }
    }

    pub fn push_str_bits(&mut self, header: &str) {
        self.0.extend(header.chars().map(|c| c == '1'));
    }

    pub fn push_string(&mut self, x: &BitString) {
        self.push_uint(x.value() as u64, x.len());
    }

    /// Elias-gamma code of `v >= 1`.
    pub fn push_gamma(&mut self, v: u64) {
        debug_assert!(v >= 1);
        let width = 64 - v.leading_zeros();
        for _ in 1..width {
            self.0.push(false);
        }
        self.push_uint(v, width);
    }

    pub fn extend(&mut self, other: &Bits) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn is_prefix_of(&self, other: &Bits) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Bits::from_str_bits(&s).map_err(serde::de::Error::custom)
    }
}

/// Cursor over a bit slice. Every read returns `None` when the input runs out.
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
    exhausted: bool,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        Self { bits, pos: 0, exhausted: false }
    }

    /// Whether some read failed because the input ran out (rather than being malformed).
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn at_end(&self) -> bool {
        self.pos == self.bits.len()
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn bit(&mut self) -> Option<bool> {
        let Some(&b) = self.bits.get(self.pos) else {
            self.exhausted = true;
            return None;
        };
        self.pos += 1;
        Some(b)
    }

    pub fn uint(&mut self, width: u32) -> Option<u64> {
        if width > 64 {
            return None;
        }
        if self.pos + width as usize > self.bits.len() {
            self.exhausted = true;
            return None;
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.bit()? as u64;
        }
        Some(v)
    }

    /// Reads an Elias-gamma integer; values needing more than 63 bits are rejected.
    pub fn gamma(&mut self) -> Option<u64> {
        let mut zeros = 0u32;
        while !self.bit()? {
            zeros += 1;
            if zeros > 62 {
                return None;
            }
        }
        let rest = self.uint(zeros)?;
        Some((1u64 << zeros) | rest)
    }

    /// Elias-gamma integer in `1..=max`, rejected as soon as the prefix rules it out.
    pub fn gamma_at_most(&mut self, max: u64) -> Option<u64> {
        let limit = 63 - max.max(1).leading_zeros();
        let mut zeros = 0u32;
        while !self.bit()? {
            zeros += 1;
            if zeros > limit {
                return None;
            }
        }
        let v = (1u64 << zeros) | self.uint(zeros)?;
        (v <= max).then_some(v)
    }

    pub fn string(&mut self, len: u32) -> Option<BitString> {
        let v = self.uint(len)?;
        Some(BitString::from_raw(len, v as u32))
    }

    /// Matches a fixed header such as `"1010"`.
    pub fn header(&mut self, h: &str) -> Option<()> {
        for c in h.chars() {
            if self.bit()? != (c == '1') {
                return None;
            }
        }
        Some(())
    }
}

/// Length of the Elias-gamma code of `v >= 1`: `2 floor(log2 v) + 1`.
pub fn gamma_len(v: u64) -> u32 {
    debug_assert!(v >= 1);
    2 * (63 - v.leading_zeros()) + 1
}

/// `ceil(log2 m)` for `m >= 1`.
pub fn ceil_log2(m: u64) -> u32 {
    debug_assert!(m >= 1);
    64 - (m - 1).leading_zeros()
}

/// Membership bitset over `B^n`, indexed by string value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Extension {
    n: u32,
    words: Vec<u64>,
}

impl Extension {
    pub fn empty(n: u32) -> Self {
        let words = ((1u64 << n) as usize).div_ceil(64);
        Self { n, words: vec![0; words] }
    }

    pub fn full(n: u32) -> Self {
        let mut e = Self::empty(n);
        let size = 1u64 << n;
        for (i, w) in e.words.iter_mut().enumerate() {
            let lo = i as u64 * 64;
            let count = (size - lo).min(64);
            *w = if count == 64 { u64::MAX } else { (1u64 << count) - 1 };
        }
        e
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn insert(&mut self, v: u32) {
        self.words[(v / 64) as usize] |= 1u64 << (v % 64);
    }

    pub fn contains_value(&self, v: u32) -> bool {
        (self.words[(v / 64) as usize] >> (v % 64)) & 1 == 1
    }

    pub fn contains(&self, x: &BitString) -> bool {
        x.len() == self.n && self.contains_value(x.value())
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_subset(&self, other: &Extension) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Extension) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Member values in increasing order.
    pub fn values(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros();
                w &= w - 1;
                Some(i as u32 * 64 + t)
            })
        })
    }

    pub fn members(&self) -> impl Iterator<Item = BitString> + '_ {
        let n = self.n;
        self.values().map(move |v| BitString::from_raw(n, v))
    }

    /// Position of `v` among the members (number of members below it).
    pub fn rank(&self, v: u32) -> u64 {
        let wi = (v / 64) as usize;
        let below: u64 = self.words[..wi].iter().map(|w| w.count_ones() as u64).sum();
        let mask = if v.is_multiple_of(64) { 0 } else { u64::MAX >> (64 - v % 64) };
        below + (self.words[wi] & mask).count_ones() as u64
    }

    /// The member at position `idx`.
    pub fn select(&self, idx: u64) -> Option<u32> {
        let mut left = idx;
        for (i, &w) in self.words.iter().enumerate() {
            let c = w.count_ones() as u64;
            if left < c {
                let mut w = w;
                for _ in 0..left {
                    w &= w - 1;
                }
                return Some(i as u32 * 64 + w.trailing_zeros());
            }
            left -= c;
        }
        None
    }
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.members().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", members.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_round_trip_and_length() {
        for v in 1..300u64 {
            let mut b = Bits::new();
            b.push_gamma(v);
            assert_eq!(b.len() as u32, gamma_len(v));
            let mut r = BitReader::new(b.as_slice());
            assert_eq!(r.gamma(), Some(v));
            assert!(r.at_end());
        }
        assert_eq!(gamma_len(1), 1);
        assert_eq!(gamma_len(4), 5);
        assert_eq!(gamma_len(8), 7);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn bitstring_order_and_parse() {
        let a: BitString = "0101".parse().unwrap();
        assert_eq!(a.value(), 5);
        assert_eq!(a.to_string(), "0101");
        let short: BitString = "111".parse().unwrap();
        assert!(short < a, "shorter strings sort first");
        assert!("2".parse::<BitString>().is_err());
        assert!(BitString::new(0, 0).is_err());
    }

    #[test]
    fn extension_rank_select() {
        let mut e = Extension::empty(7);
        for v in [3, 64, 65, 100] {
            e.insert(v);
        }
        assert_eq!(e.count(), 4);
        assert_eq!(e.rank(65), 2);
        assert_eq!(e.select(3), Some(100));
        assert_eq!(e.values().collect::<Vec<_>>(), vec![3, 64, 65, 100]);
        assert_eq!(Extension::full(3).count(), 8);
        assert_eq!(Extension::full(7).count(), 128);
    }

    #[test]
    fn tuple_requires_shared_length() {
        let a: BitString = "01".parse().unwrap();
        let b: BitString = "011".parse().unwrap();
        assert!(StringTuple::new(vec![a, b]).is_err());
        assert!(StringTuple::new(vec![]).is_err());
        let t: StringTuple = "(01,10,01)".parse().unwrap();
        assert_eq!(t.l(), 3);
        assert_eq!(t.distinct().len(), 2);
    }
}
