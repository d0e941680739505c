//! Canonical Shannon-Fano codes for family distributions.
//!
//! Outcome `y` gets length `ceil(-log2 P(y))`; codewords are assigned in order of
//! `(length, y)` the same way canonical Huffman codes are, so the code is a pure
//! function of the distribution.

use num_rational::BigRational;

use crate::bits::{BitReader, BitString, Bits};
use crate::models::RationalDistribution;
use crate::scalar::ceil_neg_log2;

/// Codeword length of an outcome with probability `p > 0`.
pub fn sf_len(p: &BigRational) -> u32 {
    ceil_neg_log2(p)
}

pub struct SfCode {
    /// `(length, outcome, codeword)` in canonical order.
    entries: Vec<(u32, BitString, u64)>,
}

impl SfCode {
    /// `None` if some codeword would exceed 63 bits.
    pub fn new(p: &RationalDistribution) -> Option<Self> {
        let mut lens: Vec<(u32, BitString)> = p.pairs().map(|(y, q)| (sf_len(q), *y)).collect();
        if lens.iter().any(|(l, _)| *l > 63) {
            return None;
        }
        lens.sort();
        let mut entries = Vec::with_capacity(lens.len());
        let mut code: u64 = 0;
        let mut prev = lens.first().map(|e| e.0).unwrap_or(0);
        for (i, (l, y)) in lens.into_iter().enumerate() {
            if i > 0 {
                code = (code + 1) << (l - prev);
            }
            prev = l;
            entries.push((l, y, code));
        }
        Some(Self { entries })
    }

    pub fn codeword(&self, y: &BitString) -> Option<Bits> {
        let (l, _, c) = self.entries.iter().find(|e| e.1 == *y)?;
        let mut b = Bits::new();
        b.push_uint(*c, *l);
        Some(b)
    }

    pub fn read(&self, r: &mut BitReader<'_>) -> Option<BitString> {
        let mut acc: u64 = 0;
        let mut read = 0u32;
        for &(l, y, c) in &self.entries {
            while read < l {
                acc = (acc << 1) | r.bit()? as u64;
                read += 1;
            }
            if acc == c {
                return Some(y);
            }
        }
        None
    }

    pub fn lengths(&self) -> impl Iterator<Item = (BitString, u32)> + '_ {
        self.entries.iter().map(|e| (e.1, e.0))
    }
}
