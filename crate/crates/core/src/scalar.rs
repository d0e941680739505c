//! Exact number types and the scalar abstraction used by the prediction sums.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Fixed-point resolution of logarithms: 1024 units per bit.
pub const MILLIBITS_PER_BIT: i64 = 1024;

/// Non-negative dyadic rational `num / 2^exp`, kept normalised (odd numerator or `exp == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self { num: BigUint::zero(), exp: 0 }
    }

    /// `2^(-len)`.
    pub fn pow2_neg(len: u32) -> Self {
        Self { num: BigUint::one(), exp: len }
    }

    pub fn new(num: BigUint, exp: u32) -> Self {
        let mut d = Self { num, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp as u64) as u32;
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn scale(&self, k: &BigUint) -> Self {
        Self::new(&self.num * k, self.exp)
    }

    /// Multiplies by `2^(-shift)`.
    pub fn shr(&self, shift: u32) -> Self {
        Self::new(self.num.clone(), self.exp + shift)
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Self::new(&self.num * &other.num, self.exp + other.exp)
    }

    /// `self - other`, or `None` when negative.
    pub fn checked_sub(&self, o: &Dyadic) -> Option<Self> {
        let exp = self.exp.max(o.exp);
        let a = &self.num << (exp - self.exp);
        let b = &o.num << (exp - o.exp);
        (a >= b).then(|| Dyadic::new(a - b, exp))
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num.clone()), BigInt::from(BigUint::one() << self.exp))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(0.0)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, o: &Dyadic) -> Dyadic {
        let exp = self.exp.max(o.exp);
        let a = &self.num << (exp - self.exp);
        let b = &o.num << (exp - o.exp);
        Dyadic::new(a + b, exp)
    }
}

impl std::ops::AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, o: &Dyadic) {
        *self = &*self + o;
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let exp = self.exp.max(o.exp);
        (&self.num << (exp - self.exp)).cmp(&(&o.num << (exp - o.exp)))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Scalar type for weighted sums over models. Implemented for exact rationals and `f64`.
pub trait Weight: Num + Clone + PartialOrd + fmt::Debug + Send + Sync {
    fn from_dyadic(d: &Dyadic) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    /// `1 / card^l`.
    fn recip_pow(card: u64, l: u32) -> Self;
    fn approx(&self) -> f64;
}

impl Weight for BigRational {
    fn from_dyadic(d: &Dyadic) -> Self {
        d.to_rational()
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn recip_pow(card: u64, l: u32) -> Self {
        BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(card), l as usize))
    }
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Weight for f64 {
    fn from_dyadic(d: &Dyadic) -> Self {
        d.to_f64()
    }
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn recip_pow(card: u64, l: u32) -> Self {
        (card as f64).powi(-(l as i32))
    }
    fn approx(&self) -> f64 {
        *self
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^k` as an exact rational (`k` may be negative).
pub fn pow2(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

/// `floor(1024 * log2 q)` for `q > 0`, computed exactly.
pub fn log2_millibits(q: &BigRational) -> i64 {
    assert!(q.is_positive(), "log of non-positive value");
    let a = q.numer().magnitude().clone();
    let b = q.denom().magnitude().clone();
    if a.is_one() && b.count_ones() == 1 {
        return -(b.bits() as i64 - 1) * MILLIBITS_PER_BIT;
    }
    if b.is_one() && a.count_ones() == 1 {
        return (a.bits() as i64 - 1) * MILLIBITS_PER_BIT;
    }
    let big_a = num_traits::pow(a, MILLIBITS_PER_BIT as usize);
    let big_b = num_traits::pow(b, MILLIBITS_PER_BIT as usize);
    // 2^m * B <= A < 2^(m+1) * B
    let le = |m: i64| -> bool {
        if m >= 0 {
            (&big_b << m as usize) <= big_a
        } else {
            big_b <= (&big_a << (-m) as usize)
        }
    };
    let mut m = big_a.bits() as i64 - big_b.bits() as i64;
    while !le(m) {
        m -= 1;
    }
    while le(m + 1) {
        m += 1;
    }
    m
}

/// `floor(1024 * log2 k)` for an integer `k >= 1`.
pub fn log2_millibits_int(k: u64) -> i64 {
    log2_millibits(&BigRational::from_integer(BigInt::from(k)))
}

/// Least integer `L >= 0` with `2^(-L) <= p`, i.e. `ceil(-log2 p)` for `0 < p <= 1`.
pub fn ceil_neg_log2(p: &BigRational) -> u32 {
    assert!(p.is_positive());
    let num = p.numer().magnitude();
    let den = p.denom().magnitude();
    // smallest L with den <= num * 2^L
    let mut l = (den.bits() as i64 - num.bits() as i64).max(0) as u32;
    while (num << l as usize) < *den {
        l += 1;
    }
    while l > 0 && (num << (l - 1) as usize) >= *den {
        l -= 1;
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_arith() {
        let a = Dyadic::pow2_neg(3);
        let b = Dyadic::pow2_neg(3);
        let s = &a + &b;
        assert_eq!(s, Dyadic::pow2_neg(2));
        assert!(Dyadic::pow2_neg(1) > Dyadic::pow2_neg(2));
        assert_eq!(s.to_rational(), rational(1, 4));
        assert_eq!(Dyadic::pow2_neg(2).scale(&BigUint::from(3u32)).to_rational(), rational(3, 4));
    }

    #[test]
    fn millibits_exact_powers_and_bracketing() {
        assert_eq!(log2_millibits_int(1), 0);
        assert_eq!(log2_millibits_int(8), 3072);
        assert_eq!(log2_millibits(&rational(1, 16)), -4096);
        // log2(3) = 1.58496..., 1024 * that = 1623.0...
        assert_eq!(log2_millibits_int(3), 1623);
        // log2(17) = 4.08746..., times 1024 = 4185.56
        assert_eq!(log2_millibits_int(17), 4185);
        let q = rational(512, 17);
        let m = log2_millibits(&q);
        let f = 1024.0 * (512.0f64 / 17.0).log2();
        assert_eq!(m, f.floor() as i64);
    }

    #[test]
    fn ceil_neg_log2_values() {
        assert_eq!(ceil_neg_log2(&rational(1, 1)), 0);
        assert_eq!(ceil_neg_log2(&rational(1, 2)), 1);
        assert_eq!(ceil_neg_log2(&rational(1, 3)), 2);
        assert_eq!(ceil_neg_log2(&rational(17, 512)), 5);
        assert_eq!(ceil_neg_log2(&rational(1, 512)), 9);
    }

    #[test]
    fn weight_impls_agree() {
        let d = Dyadic::pow2_neg(5).scale(&BigUint::from(3u32));
        let exact = <BigRational as Weight>::from_dyadic(&d);
        let approx = <f64 as Weight>::from_dyadic(&d);
        assert!((exact.approx() - approx).abs() < 1e-15);
        assert_eq!(<BigRational as Weight>::recip_pow(3, 2), rational(1, 9));
    }
}
