//! Per-length table of every set reachable by a tabulated family code.
//!
//! Built once per `n` by walking every parameter choice and every body code of the
//! tabulated families; read concurrently afterwards.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::bits::{BitString, Bits, Extension};
use crate::codebook::codec::model_body_codes;
use crate::error::{Error, Result};
use crate::models::{FamilyId, FiniteModel, ModelParams};
use crate::scalar::Dyadic;

/// Largest `n` for which model tables (and hence exact complexities) are built.
pub const TABLE_MAX_N: u32 = 8;

pub struct TableEntry {
    pub model: FiniteModel,
    /// Shortest tabulated body.
    pub min_len: u32,
    /// Lexicographically first body among the shortest.
    pub witness: Bits,
    /// `sum 2^-|body|` over all tabulated bodies of this set.
    pub weight: Dyadic,
    /// Bit `f` set when family `f` produces this set.
    pub families: u8,
    /// `(body length, number of bodies)`, ascending.
    pub histogram: Vec<(u32, u64)>,
}

impl TableEntry {
    pub fn card(&self) -> u64 {
        self.model.cardinality()
    }

    pub fn ext(&self) -> &Extension {
        self.model.extension()
    }

    pub fn in_family(&self, f: FamilyId) -> bool {
        f.code() < 8 && self.families & (1 << f.code()) != 0
    }
}

pub struct ModelTable {
    n: u32,
    entries: Vec<TableEntry>,
    index: HashMap<Extension, usize>,
    total_weight: Dyadic,
}

impl ModelTable {
    pub fn build(n: u32) -> Self {
        struct Acc {
            params: ModelParams,
            min_len: u32,
            witness: Bits,
            weight: Dyadic,
            families: u8,
            histogram: std::collections::BTreeMap<u32, u64>,
        }
        let mut by_ext: HashMap<Extension, Acc> = HashMap::new();
        for f in FamilyId::TABULATED {
            for p in ModelParams::enumerate(f, n) {
                let codes = model_body_codes(&p);
                let ext = p.extension();
                let acc = by_ext.entry(ext).or_insert_with(|| Acc {
                    params: p.clone(),
                    min_len: u32::MAX,
                    witness: Bits::new(),
                    weight: Dyadic::zero(),
                    families: 0,
                    histogram: Default::default(),
                });
                acc.families |= 1 << f.code();
                for c in codes {
                    let len = c.len() as u32;
                    acc.weight += &Dyadic::pow2_neg(len);
                    *acc.histogram.entry(len).or_default() += 1;
                    if len < acc.min_len || (len == acc.min_len && c < acc.witness) {
                        acc.min_len = len;
                        acc.witness = c;
                        acc.params = p.clone();
                    }
                }
            }
        }
        let mut entries: Vec<TableEntry> = by_ext
            .into_iter()
            .map(|(ext, acc)| {
                let model = FiniteModel::from_params(acc.params);
                debug_assert_eq!(model.extension(), &ext);
                TableEntry {
                    model,
                    min_len: acc.min_len,
                    witness: acc.witness,
                    weight: acc.weight,
                    families: acc.families,
                    histogram: acc.histogram.into_iter().collect(),
                }
            })
            .collect();
        entries.sort_by(|a, b| a.model.cmp(&b.model));
        let index = entries.iter().enumerate().map(|(i, e)| (e.ext().clone(), i)).collect();
        let total_weight = entries.iter().fold(Dyadic::zero(), |acc, e| &acc + &e.weight);
        Self { n, entries, index, total_weight }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &TableEntry {
        &self.entries[i]
    }

    pub fn lookup(&self, ext: &Extension) -> Option<usize> {
        self.index.get(ext).copied()
    }

    pub fn entry_of(&self, ext: &Extension) -> Option<&TableEntry> {
        self.lookup(ext).map(|i| &self.entries[i])
    }

    /// Sum of all entry weights.
    pub fn total_weight(&self) -> &Dyadic {
        &self.total_weight
    }

    /// Entries whose set contains every string in `xs`.
    pub fn containing<'a>(&'a self, xs: &'a [BitString]) -> impl Iterator<Item = (usize, &'a TableEntry)> + 'a {
        self.entries.iter().enumerate().filter(move |(_, e)| xs.iter().all(|x| e.ext().contains_value(x.value())))
    }
}

static TABLES: [OnceLock<ModelTable>; TABLE_MAX_N as usize + 1] = [const { OnceLock::new() }; TABLE_MAX_N as usize + 1];

/// The shared table for length `n`, built on first use.
pub fn table(n: u32) -> Result<&'static ModelTable> {
    if n == 0 || n > TABLE_MAX_N {
        return Err(Error::ObjectOutOfBounds(format!(
            "exact enumeration over B^{n} (tables stop at n = {TABLE_MAX_N})"
        )));
    }
    Ok(TABLES[n as usize].get_or_init(|| ModelTable::build(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_set_indexed_once_and_sorted() {
        let t = table(3).unwrap();
        for (i, e) in t.entries().iter().enumerate() {
            assert_eq!(t.lookup(e.ext()), Some(i));
            assert_eq!(e.witness.len() as u32, e.min_len);
            if i > 0 {
                assert!(t.entries()[i - 1].model < e.model);
            }
        }
        // all singletons and the full cube are present
        for x in BitString::all(3) {
            let mut e = Extension::empty(3);
            e.insert(x.value());
            assert!(t.entry_of(&e).unwrap().in_family(FamilyId::Singletons));
        }
        let full = t.entry_of(&Extension::full(3)).unwrap();
        assert!(full.in_family(FamilyId::Cylinders) && full.in_family(FamilyId::PrefixSets));
    }

    #[test]
    fn histograms_agree_with_weights() {
        let t = table(4).unwrap();
        for e in t.entries() {
            let w = e.histogram.iter().fold(Dyadic::zero(), |acc, (l, c)| {
                &acc + &Dyadic::pow2_neg(*l).scale(&num_bigint::BigUint::from(*c))
            });
            assert_eq!(w, e.weight);
        }
    }

    #[test]
    fn out_of_range_lengths_refused() {
        assert!(matches!(table(9), Err(Error::ObjectOutOfBounds(_))));
        assert!(table(0).is_err());
    }
}
