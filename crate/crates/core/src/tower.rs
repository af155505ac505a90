//! The completion tower `K_𝔭 ⊆ F_𝔓` at the ramified prime above 2.
//!
//! For `q ≡ 7 (mod 8)` the base `K_𝔭` is ℚ₂ and `√−q` is the root `≡ 3 (mod 4)`; this is
//! the embedding under which `x² − √−q` stays irreducible, so it selects the prime
//! `𝔭 = (2, ω)` below the ramified `𝔓`. For `q ≡ 3 (mod 8)` the base is the unramified
//! quadratic extension of ℚ₂ with basis `{1, ω}`, `ω² = ω − (1+q)/4`.
//!
//! `F_𝔓 = K_𝔭(α)` with `α² = √−q`, and `Π = α − 1` is a uniformizer. Writing
//! `x = x₀ + x₁α = (x₀ + x₁) + x₁Π`, the two summands have even and odd `𝔓`-order,
//! so `ord_𝔓(x) = min(2·v(x₀ + x₁), 2·v(x₁) + 1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::dyadic::{sqrt_2adic, DyadicNumber};
use crate::error::{Error, Result};
use crate::field::{check_q, FElement, KElement};

/// Residue-class case of `q` that decides the shape of the tower and which clause of the trichotomy applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    #[serde(rename = "3mod8")]
    ThreeMod8,
    #[serde(rename = "7mod16")]
    SevenMod16,
    #[serde(rename = "15mod16")]
    FifteenMod16,
}

impl CaseTag {
    pub fn of(q: u64) -> Result<Self> {
        check_q(q)?;
        Ok(match q % 16 {
            3 | 11 => CaseTag::ThreeMod8,
            7 => CaseTag::SevenMod16,
            _ => CaseTag::FifteenMod16,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::ThreeMod8 => "3mod8",
            CaseTag::SevenMod16 => "7mod16",
            CaseTag::FifteenMod16 => "15mod16",
        }
    }

    pub fn is_split(self) -> bool {
        self != CaseTag::ThreeMod8
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A valuation read off finite-precision data. Serializes as an integer, or as the
/// string `">=N"` for a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ord {
    Exact(i64),
    /// Every visible digit is zero; the true order is at least this.
    AtLeast(i64),
}

impl Ord {
    pub fn exact(self) -> Option<i64> {
        match self {
            Ord::Exact(v) => Some(v),
            Ord::AtLeast(_) => None,
        }
    }

    pub fn lower_bound(self) -> i64 {
        match self {
            Ord::Exact(v) | Ord::AtLeast(v) => v,
        }
    }

    /// Minimum over independent components; exact only when it sits strictly below
    /// every hidden component.
    fn min_of(items: &[Ord]) -> Ord {
        let e = items.iter().filter_map(|o| o.exact()).min();
        let b = items.iter().filter(|o| matches!(o, Ord::AtLeast(_))).map(|o| o.lower_bound()).min();
        match (e, b) {
            (Some(e), Some(b)) if e < b => Ord::Exact(e),
            (Some(e), Some(b)) => Ord::AtLeast(e.min(b)),
            (Some(e), None) => Ord::Exact(e),
            (None, Some(b)) => Ord::AtLeast(b),
            (None, None) => unreachable!(),
        }
    }

    fn scale(self, k: i64, shift: i64) -> Ord {
        match self {
            Ord::Exact(v) => Ord::Exact(k * v + shift),
            Ord::AtLeast(v) => Ord::AtLeast(k * v + shift),
        }
    }
}

impl Serialize for Ord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ord::Exact(v) => s.serialize_i64(*v),
            Ord::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

impl fmt::Display for Ord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ord::Exact(v) => write!(f, "{v}"),
            Ord::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Element of `K_𝔭`: one ℚ₂-coordinate, or two over `{1, ω}` in the unramified case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseElement {
    c: Vec<DyadicNumber>,
    /// `ω² = ω − t`; unused for ℚ₂.
    t: i64,
}

impl BaseElement {
    pub fn from_coords(c: Vec<DyadicNumber>, t: i64) -> Self {
        debug_assert!(c.len() == 1 || c.len() == 2);
        BaseElement { c, t }
    }

    pub fn coords(&self) -> &[DyadicNumber] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.len()
    }

    fn like(&self, n: i64, prec: i64) -> Self {
        let mut c = vec![DyadicNumber::from_int(n, prec)];
        if self.c.len() == 2 {
            c.push(DyadicNumber::zero(prec));
        }
        BaseElement { c, t: self.t }
    }

    pub fn precision(&self) -> i64 {
        self.c.iter().map(|x| x.precision()).min().unwrap()
    }

    /// 2-adic valuation (minimum over the coordinates, as `{1, ω}` is an integral basis
    /// with independent residues).
    pub fn valuation(&self) -> Ord {
        let items: Vec<Ord> = self
            .c
            .iter()
            .map(|x| match x.valuation() {
                Some(v) => Ord::Exact(v),
                None => Ord::AtLeast(x.precision()),
            })
            .collect();
        Ord::min_of(&items)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn truncate(&self, prec: i64) -> Self {
        BaseElement { c: self.c.iter().map(|x| x.truncate(prec)).collect(), t: self.t }
    }

    pub fn shl(&self, k: i64) -> Self {
        BaseElement { c: self.c.iter().map(|x| x.shl(k)).collect(), t: self.t }
    }

    pub fn scale(&self, r: &DyadicNumber) -> Self {
        BaseElement { c: self.c.iter().map(|x| x * r).collect(), t: self.t }
    }

    /// The nontrivial automorphism of the unramified base (identity on ℚ₂).
    pub fn frobenius(&self) -> Self {
        match self.c.as_slice() {
            [a] => BaseElement { c: vec![a.clone()], t: self.t },
            [a, b] => BaseElement { c: vec![a + b, -b], t: self.t },
            _ => unreachable!(),
        }
    }

    /// Norm to ℚ₂.
    pub fn norm_to_q2(&self) -> DyadicNumber {
        match self.c.as_slice() {
            [a] => a.clone(),
            [a, b] => &(&(a * a) + &(a * b)) + &(&(b * b) * &DyadicNumber::from_int(self.t, a.precision().max(b.precision()) + 8)),
            _ => unreachable!(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm_to_q2().inverse()?;
        Ok(self.frobenius().scale(&n))
    }

    /// Square test for a nonzero element: an even-valuation unit multiple of a square
    /// residue modulo 8 lifts by Hensel's lemma.
    pub fn is_square(&self) -> Result<bool> {
        let v = match self.valuation() {
            Ord::Exact(v) => v,
            Ord::AtLeast(p) => return Err(Error::PrecisionExhausted { at_least: p }),
        };
        if v.rem_euclid(2) == 1 {
            return Ok(false);
        }
        let u = self.shl(-v);
        if u.precision() < 3 {
            return Err(Error::PrecisionExhausted { at_least: u.precision() });
        }
        match u.c.as_slice() {
            [a] => Ok(a.unit_residue(3)? == 1),
            [a, b] => {
                let r0 = a.residue(3)?.to_i64().unwrap();
                let r1 = b.residue(3)?.to_i64().unwrap();
                let t = self.t;
                for y0 in 0..8i64 {
                    for y1 in 0..8i64 {
                        let s0 = (y0 * y0 - t * y1 * y1).rem_euclid(8);
                        let s1 = (2 * y0 * y1 + y1 * y1).rem_euclid(8);
                        if s0 == r0 && s1 == r1 {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
            _ => unreachable!(),
        }
    }
}

impl Add for &BaseElement {
    type Output = BaseElement;
    fn add(self, o: &BaseElement) -> BaseElement {
        BaseElement { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(), t: self.t }
    }
}

impl Sub for &BaseElement {
    type Output = BaseElement;
    fn sub(self, o: &BaseElement) -> BaseElement {
        BaseElement { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(), t: self.t }
    }
}

impl Neg for &BaseElement {
    type Output = BaseElement;
    fn neg(self) -> BaseElement {
        BaseElement { c: self.c.iter().map(|a| -a).collect(), t: self.t }
    }
}

impl Mul for &BaseElement {
    type Output = BaseElement;
    fn mul(self, o: &BaseElement) -> BaseElement {
        match (self.c.as_slice(), o.c.as_slice()) {
            ([a], [b]) => BaseElement { c: vec![a * b], t: self.t },
            ([a0, a1], [b0, b1]) => {
                let a1b1 = a1 * b1;
                let t = DyadicNumber::from_int(self.t, a1b1.precision().max(0) + 8);
                let c0 = &(a0 * b0) - &(&a1b1 * &t);
                let c1 = &(&(a0 * b1) + &(a1 * b0)) + &a1b1;
                BaseElement { c: vec![c0, c1], t: self.t }
            }
            _ => panic!("mixed base degrees"),
        }
    }
}

/// Element `x₀ + x₁α` of `F_𝔓`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElement {
    x0: BaseElement,
    x1: BaseElement,
    /// `α² = s`.
    s: Arc<BaseElement>,
}

impl TowerElement {
    pub fn coords(&self) -> (&BaseElement, &BaseElement) {
        (&self.x0, &self.x1)
    }

    pub fn precision(&self) -> i64 {
        self.x0.precision().min(self.x1.precision())
    }

    fn with(&self, x0: BaseElement, x1: BaseElement) -> Self {
        TowerElement { x0, x1, s: self.s.clone() }
    }

    /// `ord_𝔓` with a flag for values hidden below the precision.
    pub fn ord(&self) -> Ord {
        let y0 = &self.x0 + &self.x1;
        Ord::min_of(&[y0.valuation().scale(2, 0), self.x1.valuation().scale(2, 1)])
    }

    /// Certified `ord_𝔓`, failing when every visible digit is zero.
    pub fn ord_p(&self) -> Result<i64> {
        match self.ord() {
            Ord::Exact(v) => Ok(v),
            Ord::AtLeast(v) => Err(Error::PrecisionExhausted { at_least: v }),
        }
    }

    /// Largest `k` such that this element is known modulo `𝔓^k`.
    pub fn ord_precision(&self) -> i64 {
        let p0 = (&self.x0 + &self.x1).precision();
        (2 * p0).min(2 * self.x1.precision() + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }

    /// `σ(α) = −α`.
    pub fn sigma(&self) -> Self {
        self.with(self.x0.clone(), -&self.x1)
    }

    /// `N_{F_𝔓/K_𝔭}(x) = x₀² − s·x₁²`.
    pub fn local_norm(&self) -> BaseElement {
        &(&self.x0 * &self.x0) - &(&(&self.x1 * &self.x1) * &self.s)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.local_norm().inverse()?;
        let c = self.sigma();
        Ok(self.with(&c.x0 * &n, &c.x1 * &n))
    }

    pub fn shl(&self, k: i64) -> Self {
        self.with(self.x0.shl(k), self.x1.shl(k))
    }

    pub fn scale(&self, r: &DyadicNumber) -> Self {
        self.with(self.x0.scale(r), self.x1.scale(r))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        self.with(self.x0.truncate(prec), self.x1.truncate(prec))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc: Option<Self> = None;
        let mut b = self.clone();
        let mut e = e;
        if e == 0 {
            return self.one_like();
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => &a * &b,
                });
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc.unwrap()
    }

    pub fn one_like(&self) -> Self {
        let p = self.precision().max(1);
        self.with(self.x0.like(1, p), self.x0.like(0, p))
    }

    /// Coordinates over ℤ₂ in the basis `{1, ω?, Π, ωΠ?}`, i.e. of `(x₀ + x₁) + x₁Π`.
    pub fn z2_coordinates(&self) -> Vec<DyadicNumber> {
        let y0 = &self.x0 + &self.x1;
        y0.c.iter().chain(self.x1.c.iter()).cloned().collect()
    }
}

impl Add for &TowerElement {
    type Output = TowerElement;
    fn add(self, o: &TowerElement) -> TowerElement {
        self.with(&self.x0 + &o.x0, &self.x1 + &o.x1)
    }
}

impl Sub for &TowerElement {
    type Output = TowerElement;
    fn sub(self, o: &TowerElement) -> TowerElement {
        self.with(&self.x0 - &o.x0, &self.x1 - &o.x1)
    }
}

impl Neg for &TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        self.with(-&self.x0, -&self.x1)
    }
}

impl Mul for &TowerElement {
    type Output = TowerElement;
    fn mul(self, o: &TowerElement) -> TowerElement {
        let x0 = &(&self.x0 * &o.x0) + &(&(&self.x1 * &o.x1) * &self.s);
        let x1 = &(&self.x0 * &o.x1) + &(&self.x1 * &o.x0);
        self.with(x0, x1)
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: &BaseElement| {
            let v: Vec<String> = b.c.iter().map(|x| x.centered_lift().to_string()).collect();
            format!("({})", v.join(", "))
        };
        write!(f, "{} + {}*a + O(P^{})", show(&self.x0), show(&self.x1), self.ord_precision())
    }
}

#[derive(Clone, Debug)]
pub struct LocalTower {
    q: u64,
    case: CaseTag,
    prec: i64,
    t: i64,
    s: Arc<BaseElement>,
}

/// Builds the tower for `q` with coordinates carried to `prec` bits.
pub fn build_tower(q: u64, prec: i64) -> Result<LocalTower> {
    let case = CaseTag::of(q)?;
    if prec < 8 {
        return Err(Error::domain("tower precision must be at least 8 bits"));
    }
    let t = ((1 + q) / 4) as i64;
    let s = match case {
        CaseTag::ThreeMod8 => {
            BaseElement::from_coords(vec![DyadicNumber::from_int(-1, prec), DyadicNumber::from_int(2, prec)], t)
        }
        _ => {
            let mut r = sqrt_2adic(&DyadicNumber::from_int(-(q as i64), prec + 2))?;
            if r.unit_residue(2)? == 1 {
                r = -&r;
            }
            BaseElement::from_coords(vec![r.truncate(prec)], t)
        }
    };
    let tower = LocalTower { q, case, prec, t, s: Arc::new(s) };
    debug_assert_eq!(tower.uniformizer().ord_p().ok(), Some(1));
    Ok(tower)
}

impl LocalTower {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn case(&self) -> CaseTag {
        self.case
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// `[K_𝔭 : ℚ₂]`.
    pub fn base_degree(&self) -> usize {
        if self.case == CaseTag::ThreeMod8 {
            2
        } else {
            1
        }
    }

    pub fn residue_field_size(&self) -> u32 {
        if self.base_degree() == 2 {
            4
        } else {
            2
        }
    }

    /// The chosen `√−q ∈ K_𝔭`.
    pub fn sqrt_mq(&self) -> &BaseElement {
        &self.s
    }

    pub fn base_from_int(&self, n: i64) -> BaseElement {
        self.base_from_coords(&[BigRational::from_integer(BigInt::from(n)), BigRational::zero()])
    }

    /// Base element from rational `{1, ω}` coordinates.
    fn base_from_coords(&self, c: &[BigRational; 2]) -> BaseElement {
        let p = self.prec;
        if self.base_degree() == 2 {
            BaseElement::from_coords(c.iter().map(|x| DyadicNumber::from_rational(x, p)).collect(), self.t)
        } else {
            // ω ↦ (1 + s)/2
            let s = &self.s.c[0];
            let half = DyadicNumber::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)), p + 1);
            let w = &(&DyadicNumber::one(p + 1) + s) * &half;
            let v = &DyadicNumber::from_rational(&c[0], p) + &(&DyadicNumber::from_rational(&c[1], p + 1) * &w);
            BaseElement::from_coords(vec![v.truncate(p)], self.t)
        }
    }

    pub fn embed_k(&self, x: &KElement) -> BaseElement {
        debug_assert_eq!(x.q(), self.q);
        self.base_from_coords(x.coords())
    }

    /// The ring homomorphism `F → F_𝔓`.
    pub fn embed(&self, x: &FElement) -> TowerElement {
        let (a, b) = x.relative();
        self.element(self.embed_k(&a), self.embed_k(&b))
    }

    pub fn element(&self, x0: BaseElement, x1: BaseElement) -> TowerElement {
        TowerElement { x0, x1, s: self.s.clone() }
    }

    pub fn from_int(&self, n: i64) -> TowerElement {
        self.element(self.base_from_int(n), self.base_from_int(0))
    }

    pub fn one(&self) -> TowerElement {
        self.from_int(1)
    }

    pub fn alpha(&self) -> TowerElement {
        self.element(self.base_from_int(0), self.base_from_int(1))
    }

    /// `Π = α − 1`.
    pub fn uniformizer(&self) -> TowerElement {
        &self.alpha() - &self.one()
    }

    /// Element with integer ℤ₂-coordinates in the basis `{1, ω?, Π, ωΠ?}` (see
    /// [`TowerElement::z2_coordinates`]).
    pub fn from_z2_coordinates(&self, c: &[BigInt]) -> TowerElement {
        let d = self.base_degree();
        assert_eq!(c.len(), 2 * d);
        let mk = |v: &[BigInt]| {
            let mut co = [BigRational::zero(), BigRational::zero()];
            for (i, x) in v.iter().enumerate() {
                co[i] = BigRational::from_integer(x.clone());
            }
            self.base_from_coords(&co)
        };
        let y0 = mk(&c[..d]);
        let y1 = mk(&c[d..]);
        self.element(&y0 - &y1, y1)
    }

    /// True iff `−1` is a square in `F_𝔓`: `(a + bα)² = −1` forces `ab = 0`, so either
    /// `−1` or `−√−q` is a square in `K_𝔭`.
    pub fn contains_sqrt_minus1(&self) -> bool {
        let m1 = self.base_from_int(-1);
        let ms = -self.s.as_ref();
        m1.is_square().unwrap_or(false) || ms.is_square().unwrap_or(false)
    }

    /// 𝔓-adic logarithm on `1 + 𝔓`, computed as `log(w⁴)/4`.
    pub fn log_p(&self, w: &TowerElement) -> Result<TowerElement> {
        let one = self.one();
        let d1 = (w - &one).ord();
        if d1.lower_bound() < 1 {
            return Err(Error::domain(format!("log_P needs w ≡ 1 mod P, got ord(w - 1) = {d1}")));
        }
        let w4 = w.pow(4);
        let z = &w4 - &one;
        let target = z.ord_precision();
        let d = z.ord().lower_bound().max(4);
        if d >= target {
            return Ok(self.from_int(0).truncate(ceil_half(target - 5)));
        }
        // terms z^n/n have ord ≥ n·d − 2·v₂(n), increasing in n for d ≥ 3
        let mut sum = self.from_int(0);
        let mut zn = z.clone();
        let mut n: i64 = 1;
        while n * d - 2 * ilog2(n) < target {
            let inv_n = DyadicNumber::from_int(n, self.prec + 64).inverse()?;
            let term = zn.scale(&inv_n);
            sum = if n % 2 == 1 { &sum + &term } else { &sum - &term };
            zn = &zn * &z;
            n += 1;
        }
        let out = sum.shl(-2);
        // the omitted tail lies in 𝔓^(target − 4) after the division by 4
        Ok(out.truncate(ceil_half(target - 5)))
    }

    /// Logarithm on all units, extended through the roots of unity of the residue field:
    /// `log(w) = log(w^(N−1))/(N−1)` with `N` the residue field size.
    pub fn log_p_unit(&self, w: &TowerElement) -> Result<TowerElement> {
        if w.ord().lower_bound() > 0 || w.ord().exact().is_none() {
            return Err(Error::domain("log of a non-unit"));
        }
        let k = self.residue_field_size() as i64 - 1;
        let l = self.log_p(&w.pow(k as u32))?;
        Ok(l.scale(&DyadicNumber::from_int(k, self.prec + 64).inverse()?))
    }

    /// 𝔓-adic exponential on `𝔓³`.
    pub fn exp_p(&self, x: &TowerElement) -> Result<TowerElement> {
        let d = x.ord().lower_bound();
        if d < 3 {
            return Err(Error::domain(format!("exp_P needs ord(x) >= 3, got {}", x.ord())));
        }
        let target = x.ord_precision();
        let mut sum = self.one();
        let mut term = self.one();
        let mut n: i64 = 1;
        // x^n/n! has ord ≥ n(d − 2) + 2
        while n * (d - 2) + 2 < target {
            let inv_n = DyadicNumber::from_int(n, self.prec + 64).inverse()?;
            term = (&term * x).scale(&inv_n);
            sum = &sum + &term;
            n += 1;
        }
        Ok(sum.truncate(ceil_half(target - 1)))
    }
}

fn ceil_half(x: i64) -> i64 {
    x.div_euclid(2) + x.rem_euclid(2)
}

fn ilog2(n: i64) -> i64 {
    63 - n.leading_zeros() as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FElement;

    #[test]
    fn tower_shapes() {
        let t = build_tower(11, 64).unwrap();
        assert_eq!(t.base_degree(), 2);
        assert_eq!(t.residue_field_size(), 4);
        let t = build_tower(7, 64).unwrap();
        assert_eq!(t.residue_field_size(), 2);
        assert_eq!(t.sqrt_mq().coords()[0].unit_residue(3).unwrap(), 3);
        let t = build_tower(31, 64).unwrap();
        assert_eq!(t.sqrt_mq().coords()[0].unit_residue(3).unwrap(), 7);
    }

    #[test]
    fn basic_orders() {
        for q in [3u64, 7, 11, 31] {
            let t = build_tower(q, 64).unwrap();
            assert_eq!(t.from_int(2).ord_p().unwrap(), 2);
            assert_eq!(t.uniformizer().ord_p().unwrap(), 1);
            assert_eq!(t.one().ord_p().unwrap(), 0);
            assert_eq!(t.from_int(12).ord_p().unwrap(), 4);
            assert!(t.from_int(0).ord_p().is_err());
            let s = t.embed(&KElement::sqrt_mq(q).to_f());
            assert!((&(&s * &s) - &t.from_int(-(q as i64))).ord().lower_bound() >= 100);
        }
    }

    #[test]
    fn local_norm_examples() {
        let t = build_tower(7, 64).unwrap();
        assert_eq!(t.one().local_norm(), t.base_from_int(1));
        let n = t.alpha().local_norm();
        assert_eq!(n, -t.sqrt_mq());
        // c + dα with c, d odd has norm ≡ 2 mod 4 when q ≡ 7 mod 8
        for (c, d) in [(1, 1), (3, 1), (1, -5), (7, 9)] {
            let x = &t.from_int(c) + &(&t.from_int(d) * &t.alpha());
            let r = x.local_norm().coords()[0].residue(2).unwrap();
            assert_eq!(r, 2u32.into());
        }
    }

    #[test]
    fn sqrt_minus_one() {
        assert!(build_tower(31, 64).unwrap().contains_sqrt_minus1());
        assert!(build_tower(47, 64).unwrap().contains_sqrt_minus1());
        assert!(!build_tower(3, 64).unwrap().contains_sqrt_minus1());
        assert!(!build_tower(7, 64).unwrap().contains_sqrt_minus1());
        assert!(!build_tower(11, 64).unwrap().contains_sqrt_minus1());
    }

    #[test]
    fn log_examples() {
        let t = build_tower(7, 64).unwrap();
        let l = t.log_p(&t.one()).unwrap();
        assert!(l.ord().exact().is_none());
        let w = &t.one() + &t.uniformizer().pow(3);
        assert_eq!(t.log_p(&w).unwrap().ord_p().unwrap(), 3);
        let m1 = t.log_p(&t.from_int(-1)).unwrap();
        assert!(m1.ord().exact().is_none());
        assert!(t.log_p(&t.alpha()).is_ok());
        assert!(t.log_p(&t.from_int(3)).is_ok());
        assert!(t.log_p(&t.uniformizer()).is_err());
    }

    #[test]
    fn log_of_explicit_unit_q3() {
        let q = 3;
        let t = build_tower(q, 128).unwrap();
        let eta = &KElement::omega(q).to_f() - &FElement::alpha(q);
        let e = t.embed(&eta);
        assert!(t.log_p(&e).is_err());
        assert_eq!(t.log_p_unit(&e).unwrap().ord_p().unwrap(), 0);
    }

    fn random_one_units(t: &LocalTower, seed: u64, n: usize, min_ord: i64) -> Vec<TowerElement> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = 2 * t.base_degree();
        (0..n)
            .map(|_| {
                let c: Vec<BigInt> = (0..d).map(|_| BigInt::from(rng.gen_range(-1_000_000i64..1_000_000))).collect();
                let x = t.from_z2_coordinates(&c);
                &t.one() + &(&x * &t.uniformizer().pow(min_ord as u32))
            })
            .collect()
    }

    #[test]
    fn ord_is_multiplicative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for q in [7u64, 11] {
            let t = build_tower(q, 96).unwrap();
            let d = 2 * t.base_degree();
            for _ in 0..500 {
                let mut r = || {
                    let c: Vec<BigInt> = (0..d).map(|_| BigInt::from(rng.gen_range(-4096i64..4096))).collect();
                    t.from_z2_coordinates(&c)
                };
                let (x, y) = (r(), r());
                if let (Ok(a), Ok(b)) = (x.ord_p(), y.ord_p()) {
                    assert_eq!((&x * &y).ord_p().unwrap(), a + b);
                }
            }
        }
    }

    #[test]
    fn log_additivity_and_valuation_rule() {
        for q in [3u64, 7, 11, 31] {
            let t = build_tower(q, 96).unwrap();
            let us = random_one_units(&t, q, 40, 1);
            for pair in us.chunks(2) {
                let (u, v) = (&pair[0], &pair[1]);
                let lhs = t.log_p(&(u * v)).unwrap();
                let rhs = &t.log_p(u).unwrap() + &t.log_p(v).unwrap();
                assert!((&lhs - &rhs).ord().exact().is_none(), "q = {q}");
                let sq = t.log_p(&(u * u)).unwrap();
                assert!((&sq - &t.log_p(u).unwrap().shl(1)).ord().exact().is_none());
            }
            for k in 3..20 {
                for w in random_one_units(&t, q + k as u64, 5, k) {
                    let o = (&w - &t.one()).ord_p().unwrap();
                    assert_eq!(t.log_p(&w).unwrap().ord_p().unwrap(), o);
                }
            }
        }
    }

    #[test]
    fn log_exp_round_trip() {
        for q in [7u64, 11] {
            let t = build_tower(q, 96).unwrap();
            for w in random_one_units(&t, 99, 500, 3) {
                let x = &w - &t.one();
                let back = t.log_p(&t.exp_p(&x).unwrap()).unwrap();
                let diff = &back - &x.truncate(back.precision());
                assert!(diff.ord().exact().is_none());
                assert!(back.ord_precision() > 100);
            }
        }
    }

    #[test]
    fn exp_domain() {
        let t = build_tower(7, 64).unwrap();
        assert_eq!(t.exp_p(&t.from_int(0)).unwrap(), t.one().truncate(t.exp_p(&t.from_int(0)).unwrap().precision()));
        assert!(t.exp_p(&t.from_int(2)).is_err());
        let x = t.uniformizer().pow(3);
        let back = t.log_p(&t.exp_p(&x).unwrap()).unwrap();
        assert!((&back - &x).ord().lower_bound() >= back.ord_precision().min(x.ord_precision()) - 1);
    }
}
