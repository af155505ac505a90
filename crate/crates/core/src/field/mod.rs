//! Exact arithmetic in `K = ℚ(√−q)` and `F = K(α)`, `α⁴ = −q`.
//!
//! K-elements are stored over the integral basis `{1, ω}`, `ω = (1 + √−q)/2`, so that
//! `ω² = ω − (1 + q)/4`. F-elements are stored over the power basis `{1, α, α², α³}`
//! with rational coordinates; `√−q = α²`.

mod basis;
mod embed;
pub(crate) mod linalg;
mod text;

pub use basis::{dedekind_z_alpha_is_2_maximal, IntegralBasis};
pub use embed::{complex_embeddings, ComplexEmbeddings};
pub use text::{format_power_basis, parse_power_basis};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{exact_isqrt_big, is_prime};
use crate::error::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// `(1 + q)/4`, the constant in `ω² = ω − t`.
fn omega_t(q: u64) -> BigRational {
    BigRational::from_integer(BigInt::from((1 + q) / 4))
}

/// Checks the standing hypothesis on `q`.
pub fn check_q(q: u64) -> Result<()> {
    if q % 4 == 3 && is_prime(q) {
        Ok(())
    } else {
        Err(Error::domain(format!("q = {q} is not a prime congruent to 3 mod 4")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElement {
    q: u64,
    c: [BigRational; 2],
}

impl KElement {
    pub fn new(q: u64, c0: BigRational, c1: BigRational) -> Self {
        KElement { q, c: [c0, c1] }
    }

    pub fn from_int(q: u64, n: i64) -> Self {
        Self::new(q, rat(n), BigRational::zero())
    }

    pub fn from_rational(q: u64, r: BigRational) -> Self {
        Self::new(q, r, BigRational::zero())
    }

    pub fn zero(q: u64) -> Self {
        Self::from_int(q, 0)
    }

    pub fn one(q: u64) -> Self {
        Self::from_int(q, 1)
    }

    pub fn omega(q: u64) -> Self {
        Self::new(q, BigRational::zero(), BigRational::one())
    }

    /// `√−q = 2ω − 1`.
    pub fn sqrt_mq(q: u64) -> Self {
        Self::new(q, rat(-1), rat(2))
    }

    /// `x + y√−q`.
    pub fn from_s_coords(q: u64, x: BigRational, y: BigRational) -> Self {
        let c1 = &y * rat(2);
        Self::new(q, x - &y, c1)
    }

    /// `(x, y)` with `self = x + y√−q`.
    pub fn s_coords(&self) -> (BigRational, BigRational) {
        let y = &self.c[1] * half();
        (&self.c[0] + &y, y)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Coordinates over `{1, ω}`.
    pub fn coords(&self) -> &[BigRational; 2] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.c[1].is_zero().then_some(&self.c[0])
    }

    /// Complex conjugation `√−q ↦ −√−q`, i.e. `ω ↦ 1 − ω`.
    pub fn conj(&self) -> Self {
        Self::new(self.q, &self.c[0] + &self.c[1], -&self.c[1])
    }

    /// `N_{K/ℚ}`, a nonnegative rational.
    pub fn norm(&self) -> BigRational {
        let [a, b] = &self.c;
        a * a + a * b + omega_t(self.q) * b * b
    }

    pub fn trace(&self) -> BigRational {
        &self.c[0] * rat(2) + &self.c[1]
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::ZeroInput);
        }
        let c = self.conj();
        Ok(Self::new(self.q, &c.c[0] / &n, &c.c[1] / &n))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(self.q, &self.c[0] * r, &self.c[1] * r)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.q);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Power-basis image in F.
    pub fn to_f(&self) -> FElement {
        let (x, y) = self.s_coords();
        FElement::new(self.q, [x, BigRational::zero(), y, BigRational::zero()])
    }
}

impl Add for &KElement {
    type Output = KElement;
    fn add(self, o: &KElement) -> KElement {
        debug_assert_eq!(self.q, o.q);
        KElement::new(self.q, &self.c[0] + &o.c[0], &self.c[1] + &o.c[1])
    }
}

impl Sub for &KElement {
    type Output = KElement;
    fn sub(self, o: &KElement) -> KElement {
        debug_assert_eq!(self.q, o.q);
        KElement::new(self.q, &self.c[0] - &o.c[0], &self.c[1] - &o.c[1])
    }
}

impl Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        KElement::new(self.q, -&self.c[0], -&self.c[1])
    }
}

impl Mul for &KElement {
    type Output = KElement;
    fn mul(self, o: &KElement) -> KElement {
        debug_assert_eq!(self.q, o.q);
        let [a0, a1] = &self.c;
        let [b0, b1] = &o.c;
        let a1b1 = a1 * b1;
        KElement::new(self.q, a0 * b0 - omega_t(self.q) * &a1b1, a0 * b1 + a1 * b0 + a1b1)
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_power_basis(self.to_f().coords()))
    }
}

/// Square root in K, when one exists.
pub fn exact_sqrt_in_k(x: &KElement) -> Result<KElement> {
    let q = x.q;
    if x.is_zero() {
        return Ok(x.clone());
    }
    let (u_big, v_big) = x.s_coords();
    // y = u + v√−q with u² − q v² = U, 2uv = V, and u² + q v² = √N(x)
    let n = rational_sqrt(&x.norm()).ok_or(Error::NotASquare)?;
    let qq = rat(q as i64);
    let u2 = (&u_big + &n) * half();
    let v2 = (&n - &u_big) * half() / &qq;
    let u = rational_sqrt(&u2).ok_or(Error::NotASquare)?;
    let mut v = rational_sqrt(&v2).ok_or(Error::NotASquare)?;
    if (&u * &v * rat(2)) != v_big {
        v = -v;
    }
    let y = KElement::from_s_coords(q, u, v);
    if &(&y * &y) == x {
        Ok(y)
    } else {
        Err(Error::NotASquare)
    }
}

pub(crate) fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = exact_isqrt_big(r.numer())?;
    let d = exact_isqrt_big(r.denom())?;
    Some(BigRational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FElement {
    q: u64,
    c: [BigRational; 4],
}

impl FElement {
    pub fn new(q: u64, c: [BigRational; 4]) -> Self {
        FElement { q, c }
    }

    pub fn from_ints(q: u64, c: [i64; 4]) -> Self {
        Self::new(q, c.map(rat))
    }

    pub fn from_int(q: u64, n: i64) -> Self {
        Self::from_ints(q, [n, 0, 0, 0])
    }

    pub fn zero(q: u64) -> Self {
        Self::from_int(q, 0)
    }

    pub fn one(q: u64) -> Self {
        Self::from_int(q, 1)
    }

    pub fn alpha(q: u64) -> Self {
        Self::from_ints(q, [0, 1, 0, 0])
    }

    /// `a + bα` for `a, b ∈ K`.
    pub fn from_relative(a: &KElement, b: &KElement) -> Self {
        let (a0, a2) = a.s_coords();
        let (b1, b3) = b.s_coords();
        Self::new(a.q, [a0, b1, a2, b3])
    }

    /// `(a, b)` with `self = a + bα`.
    pub fn relative(&self) -> (KElement, KElement) {
        let [c0, c1, c2, c3] = self.c.clone();
        (KElement::from_s_coords(self.q, c0, c2), KElement::from_s_coords(self.q, c1, c3))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one(self.q)
    }

    /// The K-element this equals, if it lies in K.
    pub fn as_k(&self) -> Option<KElement> {
        (self.c[1].is_zero() && self.c[3].is_zero())
            .then(|| KElement::from_s_coords(self.q, self.c[0].clone(), self.c[2].clone()))
    }

    /// The generator of `Gal(F/K)`: `α ↦ −α`.
    pub fn sigma(&self) -> Self {
        let [c0, c1, c2, c3] = &self.c;
        Self::new(self.q, [c0.clone(), -c1, c2.clone(), -c3])
    }

    /// `N_{F/K}(a + bα) = a² − b²√−q`.
    pub fn norm_rel(&self) -> KElement {
        let (a, b) = self.relative();
        &(&a * &a) - &(&(&b * &b) * &KElement::sqrt_mq(self.q))
    }

    /// `N_{F/ℚ}`.
    pub fn norm_abs(&self) -> BigRational {
        self.norm_rel().norm()
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm_rel();
        let ninv = n.inverse()?;
        Ok(&self.sigma() * &ninv.to_f())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.q);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(self.q, self.c.clone().map(|x| x * r))
    }

    /// Matrix of multiplication by `self` acting on row vectors in the power basis:
    /// row `j` holds the coordinates of `self · αʲ`.
    pub fn mul_matrix(&self) -> Vec<Vec<BigRational>> {
        (0..4)
            .map(|j| {
                let mut e = [0i64; 4];
                e[j] = 1;
                (self * &FElement::from_ints(self.q, e)).c.to_vec()
            })
            .collect()
    }

    /// Characteristic polynomial over ℚ, coefficients low to high (monic, degree 4).
    pub fn char_poly(&self) -> Vec<BigRational> {
        linalg::char_poly(&self.mul_matrix())
    }

    /// Integral over ℤ (characteristic polynomial has integer coefficients).
    pub fn is_algebraic_integer(&self) -> bool {
        self.char_poly().iter().all(|c| c.is_integer())
    }

    /// Lowest common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

impl Add for &FElement {
    type Output = FElement;
    fn add(self, o: &FElement) -> FElement {
        debug_assert_eq!(self.q, o.q);
        FElement::new(self.q, std::array::from_fn(|i| &self.c[i] + &o.c[i]))
    }
}

impl Sub for &FElement {
    type Output = FElement;
    fn sub(self, o: &FElement) -> FElement {
        debug_assert_eq!(self.q, o.q);
        FElement::new(self.q, std::array::from_fn(|i| &self.c[i] - &o.c[i]))
    }
}

impl Neg for &FElement {
    type Output = FElement;
    fn neg(self) -> FElement {
        FElement::new(self.q, std::array::from_fn(|i| -&self.c[i]))
    }
}

impl Mul for &FElement {
    type Output = FElement;
    fn mul(self, o: &FElement) -> FElement {
        debug_assert_eq!(self.q, o.q);
        let mut r: [BigRational; 7] = std::array::from_fn(|_| BigRational::zero());
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                r[i + j] += &self.c[i] * &o.c[j];
            }
        }
        // α⁴ = −q
        let mq = rat(-(self.q as i64));
        for k in (4..7).rev() {
            let t = &r[k] * &mq;
            r[k - 4] += t;
        }
        let [a, b, c, d, ..] = r;
        FElement::new(self.q, [a, b, c, d])
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(KElement, Add, add);
forward_owned!(KElement, Sub, sub);
forward_owned!(KElement, Mul, mul);
forward_owned!(FElement, Add, add);
forward_owned!(FElement, Sub, sub);
forward_owned!(FElement, Mul, mul);

impl fmt::Display for FElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_power_basis(&self.c))
    }
}

/// `K = ℚ(√−q)`.
#[derive(Clone, Debug)]
pub struct QuadraticField {
    pub q: u64,
}

impl QuadraticField {
    pub fn new(q: u64) -> Result<Self> {
        check_q(q)?;
        Ok(QuadraticField { q })
    }

    pub fn omega(&self) -> KElement {
        KElement::omega(self.q)
    }

    pub fn sqrt_mq(&self) -> KElement {
        KElement::sqrt_mq(self.q)
    }

    pub fn discriminant(&self) -> i64 {
        -(self.q as i64)
    }
}

/// `F = ℚ(⁴√−q)` with its ring of integers.
#[derive(Clone, Debug)]
pub struct QuarticField {
    pub q: u64,
    pub basis: Arc<IntegralBasis>,
}

impl QuarticField {
    pub fn new(q: u64) -> Result<Self> {
        check_q(q)?;
        Ok(QuarticField { q, basis: Arc::new(IntegralBasis::compute(q)) })
    }

    pub fn k(&self) -> QuadraticField {
        QuadraticField { q: self.q }
    }

    pub fn alpha(&self) -> FElement {
        FElement::alpha(self.q)
    }

    pub fn is_integral(&self, x: &FElement) -> bool {
        self.basis.contains(x)
    }

    /// Integral with `|N_{F/ℚ}| = 1`.
    pub fn is_unit(&self, x: &FElement) -> bool {
        self.is_integral(x) && x.norm_abs().abs().is_one()
    }

    /// Roots of unity of F: `μ₆` for `q = 3`, `{±1}` otherwise.
    pub fn torsion(&self) -> Vec<FElement> {
        let q = self.q;
        if q == 3 {
            // ω is a primitive sixth root of unity when q = 3
            let w = KElement::omega(q).to_f();
            let mut out = vec![FElement::one(q)];
            for _ in 1..6 {
                let next = out.last().unwrap() * &w;
                out.push(next);
            }
            out
        } else {
            vec![FElement::one(q), FElement::from_int(q, -1)]
        }
    }

    pub fn torsion_order(&self) -> i64 {
        if self.q == 3 {
            6
        } else {
            2
        }
    }

    pub fn is_torsion(&self, x: &FElement) -> bool {
        x.pow(self.torsion_order()).map(|y| y.is_one()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn felem(q: u64) -> impl Strategy<Value = FElement> {
        prop::array::uniform4((-20i64..20, 1i64..4)).prop_map(move |cs| {
            FElement::new(q, cs.map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d))))
        })
    }

    #[test]
    fn alpha_fourth_power() {
        for q in [3u64, 7, 11, 31] {
            let a = FElement::alpha(q);
            let a4 = a.pow(4).unwrap();
            assert_eq!(a4, FElement::from_int(q, -(q as i64)));
            assert_eq!((&a * &a).as_k().unwrap(), KElement::sqrt_mq(q));
        }
    }

    #[test]
    fn k_arithmetic() {
        let q = 7;
        let s = KElement::sqrt_mq(q);
        assert_eq!(&s * &s, KElement::from_int(q, -7));
        let w = KElement::omega(q);
        assert_eq!(w.norm(), rat(2));
        assert_eq!(w.trace(), rat(1));
        assert_eq!(&w * &w.inverse().unwrap(), KElement::one(q));
        assert_eq!(w.conj(), &KElement::one(q) - &w);
    }

    #[test]
    fn relative_norm_examples() {
        let q = 11;
        assert_eq!(FElement::one(q).norm_rel(), KElement::one(q));
        // N(α) = −√−q, N_{F/ℚ}(α) = N_{K/ℚ}(−√−q) = q
        assert_eq!(FElement::alpha(q).norm_rel(), -&KElement::sqrt_mq(q));
        assert_eq!(FElement::alpha(q).norm_abs(), rat(11));
        assert_eq!(FElement::from_int(q, 2).norm_abs(), rat(16));
    }

    #[test]
    fn exact_square_roots() {
        let q = 7;
        let r = exact_sqrt_in_k(&KElement::from_int(q, 4)).unwrap();
        assert!(r == KElement::from_int(q, 2) || r == KElement::from_int(q, -2));
        let r = exact_sqrt_in_k(&KElement::from_int(q, -7)).unwrap();
        assert!(r == KElement::sqrt_mq(q) || r == -&KElement::sqrt_mq(q));
        assert_eq!(exact_sqrt_in_k(&KElement::from_int(q, 2)), Err(Error::NotASquare));
        let w = KElement::new(q, BigRational::new(3.into(), 2.into()), rat(-5));
        let r = exact_sqrt_in_k(&(&w * &w)).unwrap();
        assert!(r == w || r == -&w);
    }

    /// Oracle for `√2 ∉ K`: the coordinate equations `u² − q v² = 2`, `2uv = 0` have
    /// no rational solution (v = 0 needs √2 ∈ ℚ, u = 0 needs −2/q a rational square).
    #[test]
    fn two_is_not_a_square_in_k() {
        for q in [3u64, 7, 11, 19, 23] {
            assert!(rational_sqrt(&rat(2)).is_none());
            assert!(rational_sqrt(&BigRational::new(BigInt::from(-2), BigInt::from(q))).is_none());
            assert_eq!(exact_sqrt_in_k(&KElement::from_int(q, 2)), Err(Error::NotASquare));
        }
    }

    #[test]
    fn torsion_of_q3() {
        let f = QuarticField::new(3).unwrap();
        let t = f.torsion();
        assert_eq!(t.len(), 6);
        for z in &t {
            assert!(f.is_torsion(z));
            assert!(f.is_unit(z));
        }
        assert!(!f.is_torsion(&FElement::alpha(3)));
    }

    proptest! {
        #[test]
        fn field_axioms(x in felem(7), y in felem(7), z in felem(7)) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(x.sigma().sigma(), x.clone());
            // σ fixes K and N_{F/K} lands in K
            let n = x.norm_rel();
            prop_assert_eq!(n.to_f().sigma(), n.to_f());
            prop_assert_eq!(&x * &x.sigma(), n.to_f());
            prop_assert_eq!((&x * &y).norm_abs(), x.norm_abs() * y.norm_abs());
            if !x.is_zero() {
                prop_assert!((&x * &x.inverse().unwrap()).is_one());
            }
            let (a, b) = x.relative();
            prop_assert_eq!(FElement::from_relative(&a, &b), x.clone());
            prop_assert_eq!(n, &(&a * &a) - &(&(&b * &b) * &KElement::sqrt_mq(7)));
        }
    }
}
