//! Binary extension fields GF(2^k), 2 <= k <= 16.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Candidate moduli, indexed by `k`. Each one is re-checked for irreducibility
/// before first use.
const CANDIDATE_MODULI: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1002B,
];

fn degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of carry-less division `a mod b` over GF(2)[x].
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Brute-force factor scan: no polynomial of degree 1..=deg/2 divides `p`.
pub fn is_irreducible(p: u32) -> bool {
    let d = degree(p);
    if d < 1 {
        return false;
    }
    for q in 2u32..(1u32 << (d / 2 + 1)) {
        if degree(q) >= 1 && degree(q) <= d / 2 && poly_rem(p, q) == 0 {
            return false;
        }
    }
    true
}

static VERIFIED: OnceLock<[bool; 17]> = OnceLock::new();

fn verified() -> &'static [bool; 17] {
    VERIFIED.get_or_init(|| {
        let mut ok = [false; 17];
        for k in 2..=16 {
            let m = CANDIDATE_MODULI[k];
            ok[k] = degree(m) == k as i32 && is_irreducible(m);
        }
        ok
    })
}

/// The field GF(2^k) with its fixed, verified modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Gf {
    k: u32,
    modulus: u32,
}

impl Gf {
    pub fn new(k: u32) -> Result<Self> {
        if !(2..=16).contains(&k) {
            return Err(Error::BadFieldSize(k));
        }
        if !verified()[k as usize] {
            return Err(Error::Invalid(format!("modulus for k={k} failed the irreducibility check")));
        }
        Ok(Self { k, modulus: CANDIDATE_MODULI[k as usize] })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.k
    }

    pub fn elem(&self, value: u32) -> GfElement {
        debug_assert!(value < self.order());
        GfElement { field: *self, value }
    }

    pub fn zero(&self) -> GfElement {
        self.elem(0)
    }

    pub fn one(&self) -> GfElement {
        self.elem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElement> + '_ {
        (0..self.order()).map(|v| self.elem(v))
    }

    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let mut acc = 0u32;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << self.k) != 0 {
                a ^= self.modulus;
            }
        }
        acc
    }
}

/// An element of GF(2^k): a k-bit coefficient vector reduced by the field's modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GfElement {
    field: Gf,
    value: u32,
}

impl GfElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> Gf {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, mut e: u64) -> GfElement {
        let mut base = *self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(2^k - 2)`; `None` for zero.
    pub fn inv(&self) -> Option<GfElement> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow(self.field.order() as u64 - 2))
    }
}

impl Add for GfElement {
    type Output = GfElement;
    fn add(self, o: GfElement) -> GfElement {
        assert_eq!(self.field, o.field, "mixed fields");
        GfElement { field: self.field, value: self.value ^ o.value }
    }
}

impl Mul for GfElement {
    type Output = GfElement;
    fn mul(self, o: GfElement) -> GfElement {
        assert_eq!(self.field, o.field, "mixed fields");
        GfElement { field: self.field, value: self.field.mul_raw(self.value, o.value) }
    }
}

impl fmt::Debug for GfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})[{:#x}]", self.field.k, self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_moduli_verify() {
        for k in 2..=16 {
            let f = Gf::new(k).unwrap();
            assert!(is_irreducible(f.modulus()));
        }
        assert!(Gf::new(1).is_err());
        assert!(Gf::new(17).is_err());
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(!is_irreducible(0b10101));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for k in 2..=4 {
            let f = Gf::new(k).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), f.one());
                }
                for &b in &els {
                    assert_eq!(a * b, b * a);
                    for &c in &els {
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_randomized_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in 5..=16 {
            let f = Gf::new(k).unwrap();
            for _ in 0..200 {
                let a = f.elem(rng.gen_range(0..f.order()));
                let b = f.elem(rng.gen_range(0..f.order()));
                let c = f.elem(rng.gen_range(0..f.order()));
                assert_eq!((a * b) * c, a * (b * c));
                assert_eq!(a * (b + c), a * b + a * c);
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), f.one());
                }
            }
        }
    }
}
