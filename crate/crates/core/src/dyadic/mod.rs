//! Precision-tracked arithmetic in ℚ₂, Hilbert symbols, and the Newton-polygon
//! splitting of `x⁴ + q` over ℚ₂.
//!
//! A [`DyadicNumber`] stores `2^val · unit + O(2^prec)` with `unit` odd and reduced
//! modulo `2^(prec - val)`. A value whose visible digits are all zero is stored as
//! `O(2^prec)`. Operations follow the usual rules for the `O(·)` term:
//!
//! ```text
//! (2^e a + O(2^i)) + (2^f b + O(2^j)) = ... + O(2^min(i, j))
//! (2^e a + O(2^i)) (2^f b + O(2^j)) = 2^(e+f) a b + O(2^min(e + j, f + i))
//! ```
//!
//! so every result carries the precision it can actually certify.

mod hilbert;
mod newton;

pub use hilbert::{hilbert_2, hilbert_2_dyadic, hilbert_infinite, hilbert_odd};
pub(crate) use newton::gf2;
pub use newton::{factor_quartic_over_q2, factor_over_q2, LocalFactor, LocalFactorization};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicNumber {
    unit: BigUint,
    val: i64,
    prec: i64,
}

fn pow2(bits: i64) -> BigUint {
    debug_assert!(bits >= 0);
    BigUint::one() << (bits as usize)
}

impl DyadicNumber {
    /// `O(2^prec)`.
    pub fn zero(prec: i64) -> Self {
        DyadicNumber { unit: BigUint::zero(), val: prec, prec }
    }

    pub fn one(prec: i64) -> Self {
        Self::from_int(1, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: i64) -> Self {
        Self::normalize(n.into(), 0, prec)
    }

    /// Embeds a rational number, keeping `prec` bits of absolute precision.
    pub fn from_rational(r: &BigRational, prec: i64) -> Self {
        if r.numer().is_zero() {
            return Self::zero(prec);
        }
        let (num, vn) = split_two(r.numer());
        let (den, vd) = split_two(r.denom());
        let val = vn - vd;
        if val >= prec {
            return Self::zero(prec);
        }
        let bits = prec - val;
        let modulus = BigInt::from(pow2(bits));
        let den_inv = inverse_odd(&den.mod_floor(&modulus).to_biguint().unwrap(), bits);
        let unit = (num.mod_floor(&modulus).to_biguint().unwrap() * den_inv) % pow2(bits);
        DyadicNumber { unit, val, prec }
    }

    /// Builds `2^lo · s + O(2^prec)`, extracting the valuation of `s`.
    fn normalize(s: BigInt, lo: i64, prec: i64) -> Self {
        if lo >= prec {
            return Self::zero(prec);
        }
        let bits = prec - lo;
        let m = s.mod_floor(&BigInt::from(pow2(bits)));
        if m.is_zero() {
            return Self::zero(prec);
        }
        let m = m.to_biguint().unwrap();
        let tz = m.trailing_zeros().unwrap() as i64;
        DyadicNumber { unit: m >> (tz as usize), val: lo + tz, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// The valuation, or `None` when every visible digit is zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Valuation, failing with `PrecisionExhausted` on an invisible value.
    pub fn certified_valuation(&self) -> Result<i64> {
        self.valuation().ok_or(Error::PrecisionExhausted { at_least: self.prec })
    }

    /// Absolute precision: the value is known modulo `2^precision()`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn relative_precision(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.prec - self.val
        }
    }

    /// Odd part modulo `2^bits`, when at least that many digits are known.
    pub fn unit_residue(&self, bits: u32) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::PrecisionExhausted { at_least: self.prec });
        }
        if self.relative_precision() < bits as i64 {
            return Err(Error::PrecisionExhausted { at_least: self.prec });
        }
        Ok((&self.unit % pow2(bits as i64)).to_u64().unwrap())
    }

    pub fn unit_part(&self) -> &BigUint {
        &self.unit
    }

    /// `self mod 2^bits` for an integral value.
    pub fn residue(&self, bits: i64) -> Result<BigUint> {
        if bits > self.prec {
            return Err(Error::PrecisionExhausted { at_least: self.prec });
        }
        if self.is_zero() || self.val >= bits {
            return Ok(BigUint::zero());
        }
        if self.val < 0 {
            return Err(Error::domain("residue of a non-integral 2-adic number"));
        }
        Ok((&self.unit << (self.val as usize)) % pow2(bits))
    }

    /// Smallest nonnegative integer representative, for integral values.
    pub fn lift(&self) -> Result<BigUint> {
        self.residue(self.prec)
    }

    /// Representative in `(-2^(prec-1), 2^(prec-1)]`, scaled by `2^val`; useful for display
    /// and for comparing against small signed integers.
    pub fn centered_lift(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let bits = self.prec - self.val;
        let m = BigInt::from(pow2(bits));
        let mut u = BigInt::from(self.unit.clone());
        if &u * 2 > m {
            u -= &m;
        }
        if self.val >= 0 {
            BigRational::from_integer(u << (self.val as usize))
        } else {
            BigRational::new(u, BigInt::one() << ((-self.val) as usize))
        }
    }

    /// Lowers the absolute precision to `min(self.precision(), prec)`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero() || self.val >= prec {
            return Self::zero(prec);
        }
        DyadicNumber { unit: &self.unit % pow2(prec - self.val), val: self.val, prec }
    }

    /// Multiplication by `2^k`, exact.
    pub fn shl(&self, k: i64) -> Self {
        DyadicNumber { unit: self.unit.clone(), val: self.val + k, prec: self.prec + k }
    }

    fn signed_scaled(&self, lo: i64) -> BigInt {
        if self.is_zero() {
            BigInt::zero()
        } else {
            BigInt::from(self.unit.clone() << ((self.val - lo) as usize))
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::PrecisionExhausted { at_least: self.prec });
        }
        let bits = self.prec - self.val;
        Ok(DyadicNumber { unit: inverse_odd(&self.unit, bits), val: -self.val, prec: bits - self.val })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        if e == 0 {
            return Self::one(self.prec.max(1));
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => &a * &base,
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc.unwrap()
    }

    /// Equality modulo `2^k`; fails when either side is not known to that precision.
    pub fn eq_at(&self, other: &Self, k: i64) -> Result<bool> {
        let p = self.prec.min(other.prec);
        if k > p {
            return Err(Error::PrecisionExhausted { at_least: p });
        }
        let d = self - other;
        Ok(d.is_zero() || d.val >= k)
    }

    /// True when this is a nonzero square in ℚ₂ (even valuation, unit part ≡ 1 mod 8).
    pub fn is_square(&self) -> Result<bool> {
        let v = self.certified_valuation()?;
        if v.rem_euclid(2) == 1 {
            return Ok(false);
        }
        Ok(self.unit_residue(3)? == 1)
    }
}

/// Splits a nonzero integer into (odd part, 2-adic valuation).
fn split_two(n: &BigInt) -> (BigInt, i64) {
    let v = n.trailing_zeros().unwrap_or(0);
    (n >> (v as usize), v as i64)
}

/// Inverse of an odd integer modulo `2^bits` by Newton iteration.
fn inverse_odd(u: &BigUint, bits: i64) -> BigUint {
    if bits <= 0 {
        return BigUint::zero();
    }
    let modulus = pow2(bits);
    let u = u % &modulus;
    // u·u ≡ 1 (mod 8) for odd u
    let mut x = u.clone();
    let mut known = 3i64;
    let two = BigUint::from(2u32);
    while known < bits {
        known *= 2;
        let m = pow2(known.min(bits));
        let ux = (&u * &x) % &m;
        let corr = (&two + &m - ux) % &m;
        x = (x * corr) % &m;
    }
    x % modulus
}

impl Add for &DyadicNumber {
    type Output = DyadicNumber;
    fn add(self, rhs: &DyadicNumber) -> DyadicNumber {
        let p = self.prec.min(rhs.prec);
        let lo = self.val.min(rhs.val).min(p);
        let s = self.signed_scaled(lo) + rhs.signed_scaled(lo);
        DyadicNumber::normalize(s, lo, p)
    }
}

impl Sub for &DyadicNumber {
    type Output = DyadicNumber;
    fn sub(self, rhs: &DyadicNumber) -> DyadicNumber {
        let p = self.prec.min(rhs.prec);
        let lo = self.val.min(rhs.val).min(p);
        let s = self.signed_scaled(lo) - rhs.signed_scaled(lo);
        DyadicNumber::normalize(s, lo, p)
    }
}

impl Neg for &DyadicNumber {
    type Output = DyadicNumber;
    fn neg(self) -> DyadicNumber {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow2(self.prec - self.val);
        DyadicNumber { unit: (&m - &self.unit) % &m, val: self.val, prec: self.prec }
    }
}

impl Mul for &DyadicNumber {
    type Output = DyadicNumber;
    fn mul(self, rhs: &DyadicNumber) -> DyadicNumber {
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => DyadicNumber::zero(self.prec.saturating_add(rhs.prec)),
            (true, false) => DyadicNumber::zero(self.prec.saturating_add(rhs.val)),
            (false, true) => DyadicNumber::zero(rhs.prec.saturating_add(self.val)),
            (false, false) => {
                let val = self.val + rhs.val;
                let rel = (self.prec - self.val).min(rhs.prec - rhs.val);
                let unit = (&self.unit * &rhs.unit) % pow2(rel);
                DyadicNumber { unit, val, prec: val + rel }
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DyadicNumber {
            type Output = DyadicNumber;
            fn $m(self, rhs: DyadicNumber) -> DyadicNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for DyadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O(2^{})", self.prec)
        } else {
            write!(f, "2^{} * {} + O(2^{})", self.val, self.unit, self.prec)
        }
    }
}

/// Square root in ℚ₂.
///
/// Of the two roots `±r` the one whose unit part is `≡ 1` or `3 (mod 8)` is returned;
/// sign conventions belong to the caller. The root of a value with relative
/// precision `k` is known to relative precision `k - 1`.
pub fn sqrt_2adic(a: &DyadicNumber) -> Result<DyadicNumber> {
    if a.is_zero() {
        return Ok(DyadicNumber::zero(a.prec.div_euclid(2)));
    }
    let v = a.val;
    if v.rem_euclid(2) == 1 {
        return Err(Error::NotASquare);
    }
    let rel = a.relative_precision();
    if rel < 3 {
        return Err(Error::PrecisionExhausted { at_least: a.prec });
    }
    if a.unit_residue(3)? != 1 {
        return Err(Error::NotASquare);
    }
    // bitwise Hensel lift: x² ≡ u (mod 2^k) ⇒ x or x + 2^(k-1) works mod 2^(k+1)
    let u = &a.unit;
    let mut x = BigUint::one();
    for k in 3..rel {
        let m = pow2(k + 1);
        if (&x * &x) % &m != u % &m {
            x += pow2(k - 1);
        }
    }
    let out_rel = rel - 1;
    let m = pow2(out_rel);
    x %= &m;
    if out_rel >= 3 {
        let r8 = (&x % 8u32).to_u32().unwrap();
        if r8 == 5 || r8 == 7 {
            x = (&m - &x) % &m;
        }
    }
    Ok(DyadicNumber { unit: x, val: v / 2, prec: v / 2 + out_rel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(n: i64) -> DyadicNumber {
        DyadicNumber::from_int(n, 64)
    }

    #[test]
    fn basic_arithmetic() {
        let a = d(12);
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(a.unit_residue(2).unwrap(), 3);
        let b = d(-4);
        let s = &a + &b;
        assert_eq!(s.valuation(), Some(3));
        assert!((&a - &a).is_zero());
        assert_eq!((&a * &b).valuation(), Some(4));
        let third = d(1).checked_div(&d(3)).unwrap();
        assert!((&third * &d(3)).eq_at(&d(1), 60).unwrap());
    }

    #[test]
    fn precision_is_pessimistic() {
        // (1 + O(2^10)) * (4 + O(2^64)) = 4 + O(2^12)
        let a = DyadicNumber::from_int(1, 10);
        let p = &a * &d(4);
        assert_eq!(p.precision(), 12);
        // 4 + O(2^64) has 62 relative bits, so 3/4 is known modulo 2^60
        let q = d(3).checked_div(&d(4)).unwrap();
        assert_eq!(q.valuation(), Some(-2));
        assert_eq!(q.precision(), 60);
        let z = &DyadicNumber::from_int(5, 8) - &DyadicNumber::from_int(5, 20);
        assert!(z.is_zero());
        assert_eq!(z.precision(), 8);
        assert!(matches!(z.certified_valuation(), Err(Error::PrecisionExhausted { at_least: 8 })));
        assert!(matches!(z.eq_at(&d(0), 9), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn rationals() {
        let r = BigRational::new(BigInt::from(-5), BigInt::from(12));
        let x = DyadicNumber::from_rational(&r, 40);
        assert_eq!(x.valuation(), Some(-2));
        let back = &x * &d(12);
        assert!(back.eq_at(&d(-5), 30).unwrap());
        assert_eq!(d(-3).centered_lift(), BigRational::from_integer(BigInt::from(-3)));
    }

    #[test]
    fn sqrt_examples() {
        let one = sqrt_2adic(&d(1)).unwrap();
        assert!(one.eq_at(&d(1), 60).unwrap());
        assert_eq!(sqrt_2adic(&d(3)), Err(Error::NotASquare));
        assert_eq!(sqrt_2adic(&d(2)), Err(Error::NotASquare));
        let r = sqrt_2adic(&d(-7)).unwrap();
        let r8 = r.unit_residue(3).unwrap();
        assert!(r8 == 3 || r8 == 5);
        assert_eq!(r8, 3, "residue-smaller root");
        assert!((&r * &r).eq_at(&d(-7), 62).unwrap());
        let r = sqrt_2adic(&d(4 * 17)).unwrap();
        assert_eq!(r.valuation(), Some(1));
        assert!((&r * &r).eq_at(&d(68), 62).unwrap());
    }

    /// Oracle: exhaustive residue search modulo 2^k followed by the Hensel criterion.
    #[test]
    fn sqrt_minus_seven_against_residue_search() {
        let roots: Vec<u64> = (0..64u64).filter(|x| (x * x + 7) % 64 == 0).collect();
        let mut residues: Vec<u64> = roots.iter().map(|x| x % 8).collect();
        residues.sort();
        residues.dedup();
        assert_eq!(residues, vec![3, 5]);
        let r = sqrt_2adic(&d(-7)).unwrap();
        let low = r.residue(5).unwrap().to_u64().unwrap();
        assert!(roots.iter().any(|&x| x % 32 == low));
    }

    proptest! {
        #[test]
        fn sqrt_of_random_squares(k in 0u64..(1u64 << 40)) {
            let a = DyadicNumber::from_int(8 * k + 1, 64);
            let r = sqrt_2adic(&a).unwrap();
            prop_assert!((&r * &r).eq_at(&a, 62).unwrap());
        }

        #[test]
        fn ring_laws(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000, c in 1i64..1000) {
            let (x, y, z) = (d(a), d(b), d(c));
            prop_assert!((&(&x * &y) + &(&x * &z)).eq_at(&(&x * &(&y + &z)), 60).unwrap());
            prop_assert!((&(&x - &y) + &y).eq_at(&x, 60).unwrap());
            let n = &x * &(-&y);
            prop_assert!((&n + &(&x * &y)).eq_at(&d(0), 60).unwrap());
            let q = x.checked_div(&z).unwrap();
            let back = &q * &z;
            prop_assert!(back.eq_at(&x, back.precision()).unwrap());
        }
    }
}
