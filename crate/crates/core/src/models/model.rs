use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::bits::{BitString, Extension, StringTuple};
use crate::error::{Error, Result};
use crate::models::family::{FamilyId, ModelParams};

/// A finite nonempty set `A` of strings of one length `n`.
///
/// Identity is the extension; the parameters the set was built from (if any) are
/// kept for display only.
#[derive(Clone)]
pub struct FiniteModel {
    ext: Extension,
    card: u64,
    origin: Option<ModelParams>,
}

impl FiniteModel {
    pub fn from_params(p: ModelParams) -> Self {
        let ext = p.extension();
        let card = ext.count();
        Self { ext, card, origin: Some(p) }
    }

    pub fn from_extension(ext: Extension) -> Result<Self> {
        let card = ext.count();
        if card == 0 {
            return Err(Error::EmptyModel);
        }
        Ok(Self { ext, card, origin: None })
    }

    pub fn explicit(members: &[BitString]) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyModel)?;
        let n = first.len();
        if n > crate::codebook::MAX_N {
            return Err(Error::ObjectOutOfBounds(format!("model over B^{n}")));
        }
        let mut ext = Extension::empty(n);
        for x in members {
            if x.len() != n {
                return Err(Error::MixedUniverse);
            }
            ext.insert(x.value());
        }
        Self::from_extension(ext)
    }

    pub fn full(n: u32) -> Self {
        let ext = Extension::full(n);
        let card = ext.count();
        Self {
            ext,
            card,
            origin: Some(ModelParams::PrefixSet { n, prefix: crate::models::family::Word::new(0, 0) }),
        }
    }

    pub fn n(&self) -> u32 {
        self.ext.n()
    }

    pub fn cardinality(&self) -> u64 {
        self.card
    }

    pub fn extension(&self) -> &Extension {
        &self.ext
    }

    pub fn origin(&self) -> Option<&ModelParams> {
        self.origin.as_ref()
    }

    pub fn family(&self) -> FamilyId {
        self.origin.as_ref().map(|p| p.family()).unwrap_or(FamilyId::Explicit)
    }

    pub fn contains(&self, x: &BitString) -> bool {
        self.ext.contains(x)
    }

    pub fn contains_all(&self, xs: &StringTuple) -> bool {
        xs.iter().all(|x| self.contains(x))
    }

    pub fn members(&self) -> impl Iterator<Item = BitString> + '_ {
        self.ext.members()
    }

    /// Ordinal of `x` among the members, if present.
    pub fn index_of(&self, x: &BitString) -> Option<u64> {
        self.contains(x).then(|| self.ext.rank(x.value()))
    }

    /// Canonical serialization: sorted member list.
    pub fn serialize(&self) -> String {
        let items: Vec<String> = self.members().map(|x| x.to_string()).collect();
        format!("{{{}}}", items.join(","))
    }

    /// Short human label: the originating parameters when known, else the member list.
    pub fn label(&self) -> String {
        match &self.origin {
            Some(p) => p.to_string(),
            None => format!("set {}", self.serialize()),
        }
    }
}

impl PartialEq for FiniteModel {
    fn eq(&self, o: &Self) -> bool {
        self.ext == o.ext
    }
}

impl Eq for FiniteModel {}

impl Hash for FiniteModel {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.ext.hash(h)
    }
}

impl PartialOrd for FiniteModel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for FiniteModel {
    /// Universe length first, then lexicographic on the serialization `{m1,m2,...}`.
    /// Since `,` sorts before `}`, a set whose member list extends another's sorts first.
    fn cmp(&self, o: &Self) -> Ordering {
        self.n().cmp(&o.n()).then_with(|| {
            let (mut a, mut b) = (self.ext.values(), o.ext.values());
            loop {
                match (a.next(), b.next()) {
                    (Some(x), Some(y)) if x == y => continue,
                    (Some(x), Some(y)) => return x.cmp(&y),
                    (Some(_), None) => return Ordering::Less,
                    (None, Some(_)) => return Ordering::Greater,
                    (None, None) => return Ordering::Equal,
                }
            }
        })
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteModel({})", self.serialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_follows_serialization() {
        let mut all = Vec::new();
        for mask in 1u32..256 {
            let mut e = Extension::empty(3);
            for v in 0..8 {
                if mask >> v & 1 == 1 {
                    e.insert(v);
                }
            }
            all.push(FiniteModel::from_extension(e).unwrap());
        }
        let mut by_ord = all.clone();
        by_ord.sort();
        all.sort_by_key(|a| a.serialize());
        assert_eq!(by_ord, all);
    }

    #[test]
    fn identity_is_extension() {
        let a = FiniteModel::full(3);
        let b = FiniteModel::from_params(ModelParams::HammingBall {
            center: "000".parse().unwrap(),
            radius: 3,
        });
        assert_eq!(a, b);
        assert_eq!(a.cardinality(), 8);
    }

    #[test]
    fn explicit_rejects_bad_input() {
        assert_eq!(FiniteModel::explicit(&[]).unwrap_err(), Error::EmptyModel);
        let mixed = ["01".parse().unwrap(), "011".parse().unwrap()];
        assert_eq!(FiniteModel::explicit(&mixed).unwrap_err(), Error::MixedUniverse);
    }

    #[test]
    fn canonical_order_is_lexicographic_on_members() {
        let a = FiniteModel::explicit(&["00".parse().unwrap(), "11".parse().unwrap()]).unwrap();
        let b = FiniteModel::explicit(&["01".parse().unwrap()]).unwrap();
        assert!(a < b);
        assert_eq!(a.serialize(), "{00,11}");
        assert_eq!(a.index_of(&"11".parse().unwrap()), Some(1));
    }
}
