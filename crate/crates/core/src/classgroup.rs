//! Class group of `K = ℚ(√−q)` via reduced binary quadratic forms of discriminant `−q`.
//!
//! The form `(A, B, C)` stands for the ideal `Aℤ + ((−B + √−q)/2)ℤ`. The prime above 2
//! that lies under the ramified prime of F is `𝔭 = (2, ω)`, found by checking which of
//! `(−B + √−q)/2`, `B = ±1`, has positive valuation under the tower embedding.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{exact_isqrt_big, ext_gcd};
use crate::error::{Error, Result};
use crate::field::{check_q, KElement};
use crate::tower::{build_tower, LocalTower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FormClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl FormClass {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn principal(q: u64) -> Self {
        FormClass { a: 1, b: 1, c: ((1 + q) / 4) as i64 }
    }

    pub fn is_reduced(&self) -> bool {
        let FormClass { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_principal(&self) -> bool {
        self.a == 1
    }

    pub fn inverse(&self) -> Self {
        FormClass { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    /// Reduced representative of the proper equivalence class.
    pub fn reduce(self) -> Self {
        let d = self.discriminant();
        let FormClass { mut a, mut b, mut c } = self;
        loop {
            // b into (−a, a]
            let two_a = 2 * a;
            let mut nb = b.rem_euclid(two_a);
            if nb > a {
                nb -= two_a;
            }
            if nb != b {
                b = nb;
                c = (b * b - d) / (4 * a);
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            break;
        }
        if a == c && b < 0 {
            b = -b;
        }
        FormClass { a, b, c }
    }

    pub fn pow(&self, e: u64) -> Self {
        let q = (-self.discriminant()) as u64;
        let mut acc = FormClass::principal(q);
        let mut base = *self;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = compose(&acc, &base);
            }
            base = compose(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Order in the class group.
    pub fn order(&self) -> u64 {
        let mut x = self.reduce();
        let mut k = 1;
        while !x.is_principal() {
            x = compose(&x, self);
            k += 1;
        }
        k
    }
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All reduced forms of discriminant `−q`, sorted.
pub fn reduced_forms(q: u64) -> Result<Vec<FormClass>> {
    check_q(q)?;
    let d = -(q as i64);
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= q as i64 {
        let mut b = -a + 1;
        while b <= a {
            let num = b * b - d;
            if b.rem_euclid(2) == 1 && num % (4 * a) == 0 {
                let f = FormClass { a, b, c: num / (4 * a) };
                if f.is_reduced() {
                    out.push(f);
                }
            }
            b += 1;
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

pub fn class_number(q: u64) -> Result<usize> {
    Ok(reduced_forms(q)?.len())
}

/// Gauss composition of primitive positive definite forms (Cohen, Alg. 5.4.7),
/// followed by reduction.
pub fn compose(f: &FormClass, g: &FormClass) -> FormClass {
    let d = f.discriminant();
    debug_assert_eq!(d, g.discriminant());
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (y1, dd) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let (g, u, _) = ext_gcd(a2, a1);
        (u, g)
    };
    let (x2, y2, d1) = if s % dd == 0 {
        (0, -1, dd)
    } else {
        let (g, x, y) = ext_gcd(s, dd);
        (x, -y, g)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - d as i128) / (4 * a3);
    FormClass { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce()
}

/// The class of `𝔭 = (2, ω)`, the prime of K below the ramified prime of F.
pub fn class_of_p2(q: u64) -> Result<FormClass> {
    check_q(q)?;
    if q % 8 == 3 {
        return Err(Error::domain(format!("2 is inert in K for q = {q}; the prime above 2 is principal")));
    }
    let tower = build_tower(q, 32)?;
    for b in [-1i64, 1] {
        // ideal (2, (−B + √−q)/2)
        let g = KElement::from_s_coords(
            q,
            BigRational::new(BigInt::from(-b), BigInt::from(2)),
            BigRational::new(BigInt::one(), BigInt::from(2)),
        );
        if tower.embed_k(&g).valuation().lower_bound() >= 1 {
            return Ok(FormClass { a: 2, b, c: (1 + q as i64) / 8 }.reduce());
        }
    }
    Err(Error::Anomaly("neither (2, ±1, c) matches the embedding".into()))
}

/// Smallest `m` with `𝔭^m` principal: 1 when 2 is inert, else the order of `[𝔭]`.
pub fn odd_generator_exponent(q: u64) -> Result<u32> {
    check_q(q)?;
    if q % 8 == 3 {
        return Ok(1);
    }
    Ok(class_of_p2(q)?.order() as u32)
}

/// `ord₂` of the embedding of a K-element into `K_𝔭` (for split 2).
fn embedded_valuation(tower: &LocalTower, x: &KElement) -> i64 {
    tower.embed_k(x).valuation().lower_bound()
}

/// Generator `π` of `𝔭^m`, normalized so that its `ω`-coordinate is positive (or its
/// rational coordinate, when that is zero).
pub fn generator_of_p_power(q: u64, m: u32) -> Result<KElement> {
    check_q(q)?;
    if q % 8 == 3 {
        if m != 1 {
            return Err(Error::NotPrincipalAtThisExponent { m });
        }
        return Ok(KElement::from_int(q, 2));
    }
    let tower = build_tower(q, m as i64 + 16)?;
    let target = BigInt::one() << m as usize;
    let qb = BigInt::from(q);
    // x² + xy + t y² = 2^m  ⟺  (2x + y)² + q y² = 4·2^m
    let four_n = &target * 4;
    let mut y = BigInt::zero();
    while &qb * &y * &y <= four_n {
        let disc = &four_n - &qb * &y * &y;
        if let Some(r) = exact_isqrt_big(&disc) {
            for root in [r.clone(), -r.clone()] {
                let twice_x = &root - &y;
                if (&twice_x % 2u32).is_zero() {
                    for sign in [1i64, -1] {
                        let x = &twice_x / 2 * sign;
                        let yy = &y * sign;
                        let pi = KElement::new(q, BigRational::from_integer(x), BigRational::from_integer(yy));
                        if embedded_valuation(&tower, &pi) >= m as i64 {
                            let pi = normalize_sign(pi);
                            debug_assert_eq!(pi.norm(), BigRational::from_integer(target.clone()));
                            debug_assert_eq!(embedded_valuation(&tower, &pi.conj()), 0);
                            return Ok(pi);
                        }
                    }
                }
            }
        }
        y += 1;
        if y.to_u64().is_some_and(|v| v > 100_000_000) {
            return Err(Error::SearchExhausted(format!("generator of p^{m} for q = {q}")));
        }
    }
    Err(Error::NotPrincipalAtThisExponent { m })
}

fn normalize_sign(pi: KElement) -> KElement {
    let [x, y] = pi.coords();
    let negate = if y.is_zero() { x < &BigRational::zero() } else { y < &BigRational::zero() };
    if negate {
        -&pi
    } else {
        pi
    }
}
