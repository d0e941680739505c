//! Built-in decidable model families and their parameter spaces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{BitString, Extension};
use crate::error::{Error, Result};
use crate::field::Gf;

/// Largest `n` for which the all-subsets family is available.
pub const ALL_SUBSETS_MAX_N: u32 = 4;

/// Identifier of a model family. The discriminant is the 3-bit family id used in codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    Singletons = 0,
    Cylinders = 1,
    HammingBalls = 2,
    LexIntervals = 3,
    PrefixSets = 4,
    PlaneLines = 5,
    AllSubsets = 6,
    /// Canonical serialization of an arbitrary set. A codec only; never enumerated.
    Explicit = 7,
}

impl FamilyId {
    pub const ALL: [FamilyId; 8] = [
        FamilyId::Singletons,
        FamilyId::Cylinders,
        FamilyId::HammingBalls,
        FamilyId::LexIntervals,
        FamilyId::PrefixSets,
        FamilyId::PlaneLines,
        FamilyId::AllSubsets,
        FamilyId::Explicit,
    ];

    /// Families that can be enumerated by [`crate::models::enumerate_models`].
    pub const ENUMERABLE: [FamilyId; 7] = [
        FamilyId::Singletons,
        FamilyId::Cylinders,
        FamilyId::HammingBalls,
        FamilyId::LexIntervals,
        FamilyId::PrefixSets,
        FamilyId::PlaneLines,
        FamilyId::AllSubsets,
    ];

    /// Families whose codes are walked when building the per-`n` model table.
    /// All-subsets and explicit codes are accounted for in closed form.
    pub const TABULATED: [FamilyId; 6] = [
        FamilyId::Singletons,
        FamilyId::Cylinders,
        FamilyId::HammingBalls,
        FamilyId::LexIntervals,
        FamilyId::PrefixSets,
        FamilyId::PlaneLines,
    ];

    pub fn code(self) -> u32 {
        self as u32
    }

    pub fn from_code(c: u32) -> Option<Self> {
        Self::ALL.get(c as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Singletons => "singletons",
            FamilyId::Cylinders => "cylinders",
            FamilyId::HammingBalls => "hamming-balls",
            FamilyId::LexIntervals => "lex-intervals",
            FamilyId::PrefixSets => "prefix-sets",
            FamilyId::PlaneLines => "plane-lines",
            FamilyId::AllSubsets => "all-subsets",
            FamilyId::Explicit => "explicit",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s || f.name().trim_end_matches('s') == s)
            .ok_or(Error::UnknownFamily(s))
    }

    pub fn description(self) -> &'static str {
        match self {
            FamilyId::Singletons => "{x} for every x",
            FamilyId::Cylinders => "strings matching a pattern on a masked subset of positions",
            FamilyId::HammingBalls => "strings within Hamming distance r of a center",
            FamilyId::LexIntervals => "lexicographic intervals [lo, hi]",
            FamilyId::PrefixSets => "strings extending a fixed prefix",
            FamilyId::PlaneLines => "point sets of non-vertical lines v = a*u + b over GF(2^(n/2))",
            FamilyId::AllSubsets => "every nonempty subset (n <= 4 only)",
            FamilyId::Explicit => "sorted list of members (codec only)",
        }
    }

    /// Whether the family is defined at all at length `n`.
    pub fn available(self, n: u32) -> bool {
        match self {
            FamilyId::PlaneLines => n.is_multiple_of(2) && (2..=16).contains(&(n / 2)),
            FamilyId::AllSubsets => n <= ALL_SUBSETS_MAX_N,
            _ => true,
        }
    }

    /// Whether every singleton `{x}`, `x` in `B^n`, belongs to the family at length `n`.
    pub fn contains_all_singletons(self, n: u32) -> bool {
        match self {
            FamilyId::PlaneLines | FamilyId::Explicit => false,
            FamilyId::AllSubsets => self.available(n),
            _ => true,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A string that may be empty, stored as `(len, value)`. Atom codes operate on these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub len: u32,
    pub value: u32,
}

impl Word {
    pub fn new(len: u32, value: u32) -> Self {
        Self { len, value }
    }

    pub fn of(x: &BitString) -> Self {
        Self { len: x.len(), value: x.value() }
    }

    pub fn bit(&self, i: u32) -> bool {
        (self.value >> (self.len - 1 - i)) & 1 == 1
    }

    pub fn fmt_bits(&self) -> String {
        (0..self.len).map(|i| if self.bit(i) { '1' } else { '0' }).collect()
    }
}

/// Parameters of one model code in a family. Together with the family they determine the set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ModelParams {
    Singleton(BitString),
    Cylinder { n: u32, mask: u32, pattern: u32 },
    HammingBall { center: BitString, radius: u32 },
    LexInterval { lo: BitString, hi: BitString },
    PrefixSet { n: u32, prefix: Word },
    PlaneLine { k: u32, slope: u32, intercept: u32 },
    AllSubsets(Extension),
    Explicit(Extension),
}

/// Scatter the low `popcount(mask)` bits of `pattern` onto the set positions of `mask`,
/// most significant first.
pub(crate) fn deposit(n: u32, mask: u32, pattern: u32) -> u32 {
    let fixed = mask.count_ones();
    let mut out = 0u32;
    let mut j = 0u32;
    for i in 0..n {
        let pos = n - 1 - i;
        if (mask >> pos) & 1 == 1 {
            let bit = (pattern >> (fixed - 1 - j)) & 1;
            out |= bit << pos;
            j += 1;
        }
    }
    out
}

impl ModelParams {
    pub fn family(&self) -> FamilyId {
        match self {
            ModelParams::Singleton(_) => FamilyId::Singletons,
            ModelParams::Cylinder { .. } => FamilyId::Cylinders,
            ModelParams::HammingBall { .. } => FamilyId::HammingBalls,
            ModelParams::LexInterval { .. } => FamilyId::LexIntervals,
            ModelParams::PrefixSet { .. } => FamilyId::PrefixSets,
            ModelParams::PlaneLine { .. } => FamilyId::PlaneLines,
            ModelParams::AllSubsets(_) => FamilyId::AllSubsets,
            ModelParams::Explicit(_) => FamilyId::Explicit,
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            ModelParams::Singleton(x) => x.len(),
            ModelParams::Cylinder { n, .. } | ModelParams::PrefixSet { n, .. } => *n,
            ModelParams::HammingBall { center, .. } => center.len(),
            ModelParams::LexInterval { lo, .. } => lo.len(),
            ModelParams::PlaneLine { k, .. } => 2 * k,
            ModelParams::AllSubsets(e) | ModelParams::Explicit(e) => e.n(),
        }
    }

    pub fn contains_value(&self, v: u32) -> bool {
        match self {
            ModelParams::Singleton(x) => x.value() == v,
            ModelParams::Cylinder { n, mask, pattern } => v & mask == deposit(*n, *mask, *pattern),
            ModelParams::HammingBall { center, radius } => (v ^ center.value()).count_ones() <= *radius,
            ModelParams::LexInterval { lo, hi } => lo.value() <= v && v <= hi.value(),
            ModelParams::PrefixSet { n, prefix } => {
                prefix.len == 0 || v >> (n - prefix.len) == prefix.value
            }
            ModelParams::PlaneLine { k, slope, intercept } => {
                let f = Gf::new(*k).expect("validated field size");
                let u = v >> k;
                let w = v & ((1 << k) - 1);
                w == f.mul_raw(*slope, u) ^ intercept
            }
            ModelParams::AllSubsets(e) | ModelParams::Explicit(e) => e.contains_value(v),
        }
    }

    pub fn contains(&self, x: &BitString) -> bool {
        x.len() == self.n() && self.contains_value(x.value())
    }

    pub fn cardinality(&self) -> u64 {
        match self {
            ModelParams::Singleton(_) => 1,
            ModelParams::Cylinder { n, mask, .. } => 1u64 << (n - mask.count_ones()),
            ModelParams::HammingBall { center, radius } => {
                let n = center.len() as u64;
                (0..=*radius as u64).map(|r| binomial(n, r)).sum()
            }
            ModelParams::LexInterval { lo, hi } => (hi.value() - lo.value()) as u64 + 1,
            ModelParams::PrefixSet { n, prefix } => 1u64 << (n - prefix.len),
            ModelParams::PlaneLine { k, .. } => 1u64 << k,
            ModelParams::AllSubsets(e) | ModelParams::Explicit(e) => e.count(),
        }
    }

    pub fn extension(&self) -> Extension {
        let n = self.n();
        match self {
            ModelParams::AllSubsets(e) | ModelParams::Explicit(e) => e.clone(),
            ModelParams::Singleton(x) => {
                let mut e = Extension::empty(n);
                e.insert(x.value());
                e
            }
            ModelParams::PlaneLine { k, slope, intercept } => {
                let f = Gf::new(*k).expect("validated field size");
                let mut e = Extension::empty(n);
                for u in 0..(1u32 << k) {
                    e.insert((u << k) | (f.mul_raw(*slope, u) ^ intercept));
                }
                e
            }
            ModelParams::LexInterval { lo, hi } => {
                let mut e = Extension::empty(n);
                for v in lo.value()..=hi.value() {
                    e.insert(v);
                }
                e
            }
            ModelParams::PrefixSet { n, prefix } => {
                let mut e = Extension::empty(*n);
                let free = n - prefix.len;
                let base = if prefix.len == 0 { 0 } else { prefix.value << free };
                for t in 0..(1u64 << free) {
                    e.insert(base | t as u32);
                }
                e
            }
            _ => {
                let mut e = Extension::empty(n);
                for v in 0..(1u64 << n) {
                    if self.contains_value(v as u32) {
                        e.insert(v as u32);
                    }
                }
                e
            }
        }
    }

    /// Every parameter choice of `family` at length `n`, in a fixed order.
    /// Explicit and all-subsets parameter spaces are not walked here.
    pub fn enumerate(family: FamilyId, n: u32) -> Vec<ModelParams> {
        let mut out = Vec::new();
        if !family.available(n) {
            return out;
        }
        let size = 1u64 << n;
        match family {
            FamilyId::Singletons => {
                out.extend(BitString::all(n).map(ModelParams::Singleton));
            }
            FamilyId::Cylinders => {
                for mask in 0..size as u32 {
                    for pattern in 0..(1u32 << mask.count_ones()) {
                        out.push(ModelParams::Cylinder { n, mask, pattern });
                    }
                }
            }
            FamilyId::HammingBalls => {
                for center in BitString::all(n) {
                    for radius in 0..=n {
                        out.push(ModelParams::HammingBall { center, radius });
                    }
                }
            }
            FamilyId::LexIntervals => {
                for lo in 0..size as u32 {
                    for hi in lo..size as u32 {
                        out.push(ModelParams::LexInterval {
                            lo: BitString::from_raw(n, lo),
                            hi: BitString::from_raw(n, hi),
                        });
                    }
                }
            }
            FamilyId::PrefixSets => {
                for len in 0..=n {
                    for value in 0..(1u32 << len) {
                        out.push(ModelParams::PrefixSet { n, prefix: Word::new(len, value) });
                    }
                }
            }
            FamilyId::PlaneLines => {
                let k = n / 2;
                for slope in 0..(1u32 << k) {
                    for intercept in 0..(1u32 << k) {
                        out.push(ModelParams::PlaneLine { k, slope, intercept });
                    }
                }
            }
            FamilyId::AllSubsets => {
                for mask in 1..(1u64 << size) {
                    let mut e = Extension::empty(n);
                    for v in 0..size as u32 {
                        if (mask >> v) & 1 == 1 {
                            e.insert(v);
                        }
                    }
                    out.push(ModelParams::AllSubsets(e));
                }
            }
            FamilyId::Explicit => {}
        }
        out
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelParams::Singleton(x) => write!(f, "single x={x}"),
            ModelParams::Cylinder { n, mask, pattern } => {
                let pat = Word::new(mask.count_ones(), *pattern);
                write!(f, "cyl n={n} mask={} pat={}", Word::new(*n, *mask).fmt_bits(), pat.fmt_bits())
            }
            ModelParams::HammingBall { center, radius } => write!(f, "ball center={center} r={radius}"),
            ModelParams::LexInterval { lo, hi } => write!(f, "interval lo={lo} hi={hi}"),
            ModelParams::PrefixSet { n, prefix } => write!(f, "prefix n={n} p={}", prefix.fmt_bits()),
            ModelParams::PlaneLine { k, slope, intercept } => write!(
                f,
                "line k={k} a={} b={}",
                Word::new(*k, *slope).fmt_bits(),
                Word::new(*k, *intercept).fmt_bits()
            ),
            ModelParams::AllSubsets(e) => write!(f, "all n={} {:?}", e.n(), e),
            ModelParams::Explicit(e) => write!(f, "set n={} {:?}", e.n(), e),
        }
    }
}

impl fmt::Debug for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_matches_extension_for_every_family() {
        for n in 1..=6 {
            for fam in FamilyId::TABULATED {
                for p in ModelParams::enumerate(fam, n) {
                    let e = p.extension();
                    assert_eq!(e.count(), p.cardinality(), "{p}");
                    for x in BitString::all(n) {
                        assert_eq!(p.contains(&x), e.contains(&x), "{p} at {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn cylinder_count_at_four() {
        assert_eq!(ModelParams::enumerate(FamilyId::Cylinders, 4).len(), 81);
    }

    #[test]
    fn deposit_places_pattern_msb_first() {
        // mask 1010, pattern 01 -> 0010
        assert_eq!(deposit(4, 0b1010, 0b01), 0b0010);
        assert_eq!(deposit(4, 0b1000, 0b0), 0);
    }

    #[test]
    fn plane_lines_only_at_even_lengths() {
        assert!(ModelParams::enumerate(FamilyId::PlaneLines, 5).is_empty());
        assert_eq!(ModelParams::enumerate(FamilyId::PlaneLines, 4).len(), 16);
        assert!(!FamilyId::PlaneLines.contains_all_singletons(4));
    }

    #[test]
    fn family_names_parse() {
        for f in FamilyId::ALL {
            assert_eq!(FamilyId::parse(f.name()).unwrap(), f);
        }
        assert_eq!(FamilyId::parse("cylinder").unwrap(), FamilyId::Cylinders);
        assert!(FamilyId::parse("bogus").is_err());
    }
}
