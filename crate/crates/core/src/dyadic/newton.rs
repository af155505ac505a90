//! Splitting type of a monic integer polynomial over ℚ₂ from its Newton polygon.
//!
//! The reduction mod 2 is factored first. Simple factors lift by Hensel's lemma. A
//! repeated linear factor `x - c` is handled by shifting to `f(x + c)` and reading the
//! Newton polygon of the shifted polynomial: a segment of slope `h/e` (lowest terms)
//! whose residual polynomial factors over 𝔽₂ into distinct irreducibles of degrees
//! `f₁, f₂, …` contributes local factors `(e, f₁), (e, f₂), …`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LocalFactor {
    /// Ramification index.
    pub e: u32,
    /// Residue degree.
    pub f: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalFactorization {
    /// Sorted by ramification index, then residue degree, both descending.
    pub factors: Vec<LocalFactor>,
}

impl LocalFactorization {
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|p| p.e * p.f).sum()
    }

    pub fn ramified(&self) -> impl Iterator<Item = &LocalFactor> {
        self.factors.iter().filter(|p| p.e > 1)
    }

    pub fn as_pairs(&self) -> Vec<(u32, u32)> {
        self.factors.iter().map(|p| (p.e, p.f)).collect()
    }
}

impl fmt::Display for LocalFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|p| format!("({},{})", p.e, p.f)).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Local splitting of `x⁴ + q` at 2, for primes `q ≡ 3 (mod 4)`.
pub fn factor_quartic_over_q2(q: u64) -> Result<LocalFactorization> {
    if q % 4 != 3 || !is_prime(q) {
        return Err(Error::domain(format!("{q} is not a prime congruent to 3 mod 4")));
    }
    let poly = vec![BigInt::from(q), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    factor_over_q2(&poly)
}

/// Splitting type over ℚ₂ of a monic polynomial (coefficients low to high).
pub fn factor_over_q2(poly: &[BigInt]) -> Result<LocalFactorization> {
    let n = poly.len().checked_sub(1).ok_or_else(|| Error::domain("empty polynomial"))?;
    if !poly[n].is_one() {
        return Err(Error::domain("polynomial must be monic"));
    }
    if n > 31 {
        return Err(Error::domain("degree too large"));
    }
    let reduced = gf2::from_ints(poly);
    let mut factors = Vec::new();
    for (phi, mult) in gf2::factor(reduced) {
        if mult == 1 {
            factors.push(LocalFactor { e: 1, f: gf2::degree(phi) });
            continue;
        }
        if gf2::degree(phi) != 1 {
            return Err(Error::Inconclusive(
                "repeated nonlinear factor mod 2 needs a higher-order polygon".into(),
            ));
        }
        // phi = x + c over 𝔽₂
        let c = (phi & 1) as i64;
        let mut shifted = taylor_shift(poly, c);
        let mut mult = mult as usize;
        while shifted[0].is_zero() {
            factors.push(LocalFactor { e: 1, f: 1 });
            shifted.remove(0);
            mult -= 1;
        }
        if mult > 0 {
            factors.extend(polygon_factors(&shifted[..=mult])?);
        }
    }
    factors.sort_by(|a, b| b.cmp(a));
    Ok(LocalFactorization { factors })
}

/// Coefficients of `f(x + c)`.
fn taylor_shift(poly: &[BigInt], c: i64) -> Vec<BigInt> {
    let c = BigInt::from(c);
    let mut out = poly.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &out[j + 1] * &c;
            out[j] += t;
        }
    }
    out
}

fn v2(n: &BigInt) -> Option<i64> {
    n.trailing_zeros().map(|v| v as i64)
}

/// Factors read off the Newton polygon of `coeffs[0..=k]`, where `coeffs[k]` is odd
/// and the lower coefficients are even and `coeffs[0] != 0`.
fn polygon_factors(coeffs: &[BigInt]) -> Result<Vec<LocalFactor>> {
    let k = coeffs.len() - 1;
    let pts: Vec<(i64, i64)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, a)| v2(a).map(|v| (i as i64, v)))
        .collect();
    let mut out = Vec::new();
    let mut cur = pts[0];
    while cur.0 < k as i64 {
        // steepest descent from cur, preferring the farthest point on ties
        let mut best = None::<(i64, i64)>;
        for &p in pts.iter().filter(|p| p.0 > cur.0) {
            best = match best {
                None => Some(p),
                Some(b) => {
                    let lhs = (p.1 - cur.1) * (b.0 - cur.0);
                    let rhs = (b.1 - cur.1) * (p.0 - cur.0);
                    if lhs < rhs || (lhs == rhs && p.0 > b.0) {
                        Some(p)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let next = best.unwrap();
        let len = next.0 - cur.0;
        let drop = cur.1 - next.1;
        let g = len.gcd(&drop);
        let e = len / g;
        let h = drop / g;
        let mut residual: u32 = 0;
        for j in 0..=g {
            let i = (cur.0 + j * e) as usize;
            let on_line = cur.1 - j * h;
            if v2(&coeffs[i]) == Some(on_line) {
                residual |= 1 << j;
            }
        }
        for (psi, m) in gf2::factor(residual) {
            if m > 1 {
                return Err(Error::Inconclusive("residual polynomial is not squarefree".into()));
            }
            out.push(LocalFactor { e: e as u32, f: gf2::degree(psi) });
        }
        cur = next;
    }
    Ok(out)
}

/// Polynomials over 𝔽₂ packed into bit masks (bit i = coefficient of xⁱ).
pub(crate) mod gf2 {
    use num_bigint::BigInt;
    use num_integer::Integer;

    pub fn from_ints(coeffs: &[BigInt]) -> u32 {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_odd())
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn degree(p: u32) -> u32 {
        31 - p.leading_zeros()
    }

    pub fn mul(a: u32, b: u32) -> u32 {
        (0..32).filter(|i| b >> i & 1 == 1).fold(0, |acc, i| acc ^ (a << i))
    }

    pub fn rem(mut a: u32, b: u32) -> u32 {
        let db = degree(b);
        while a != 0 && degree(a) >= db {
            a ^= b << (degree(a) - db);
        }
        a
    }

    pub fn div(mut a: u32, b: u32) -> u32 {
        let db = degree(b);
        let mut q = 0;
        while a != 0 && degree(a) >= db {
            let s = degree(a) - db;
            q |= 1 << s;
            a ^= b << s;
        }
        q
    }

    pub fn gcd(mut a: u32, mut b: u32) -> u32 {
        while b != 0 {
            let r = rem(a, b);
            a = b;
            b = r;
        }
        a
    }

    pub fn is_irreducible(p: u32) -> bool {
        let d = degree(p);
        if d == 0 {
            return false;
        }
        (2u32..(1 << (d / 2 + 1))).filter(|&g| degree(g) >= 1 && degree(g) <= d / 2).all(|g| rem(p, g) != 0)
    }

    /// Irreducible factors with multiplicities, in increasing bit-mask order.
    pub fn factor(mut p: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        let mut g = 2u32;
        while degree(p) >= 1 && g <= p {
            if is_irreducible(g) {
                let mut m = 0;
                while rem(p, g) == 0 {
                    p = div(p, g);
                    m += 1;
                }
                if m > 0 {
                    out.push((g, m));
                }
            }
            g += 1;
        }
        out
    }
}
