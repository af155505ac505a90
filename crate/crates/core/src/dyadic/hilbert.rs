//! Quadratic Hilbert symbols over ℚ₂, ℚ_p (p odd) and ℝ, by the closed formulas.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::DyadicNumber;
use crate::arith::{legendre, v_p_big};
use crate::error::{Error, Result};

/// `(a, b)_2` for nonzero rationals.
pub fn hilbert_2(a: &BigRational, b: &BigRational) -> Result<i32> {
    let (va, ua) = split_rational_2(a)?;
    let (vb, ub) = split_rational_2(b)?;
    Ok(hilbert_2_parts(va, ua, vb, ub))
}

/// `(a, b)_2` for 2-adic numbers known to at least three digits past their valuation.
pub fn hilbert_2_dyadic(a: &DyadicNumber, b: &DyadicNumber) -> Result<i32> {
    let va = a.certified_valuation()?;
    let vb = b.certified_valuation()?;
    let ua = a.unit_residue(3)?;
    let ub = b.unit_residue(3)?;
    Ok(hilbert_2_parts(va, ua, vb, ub))
}

/// `a = 2^v · u` with `u mod 8`.
fn split_rational_2(a: &BigRational) -> Result<(i64, u64)> {
    if a.numer().is_zero() {
        return Err(Error::ZeroInput);
    }
    let vn = a.numer().trailing_zeros().unwrap_or(0);
    let vd = a.denom().trailing_zeros().unwrap_or(0);
    let num = (a.numer() >> vn as usize).mod_floor(&BigInt::from(8)).to_u64().unwrap();
    // odd d satisfies d² ≡ 1 (mod 8), so d is its own inverse mod 8
    let den = (a.denom() >> vd as usize).mod_floor(&BigInt::from(8)).to_u64().unwrap();
    Ok((vn as i64 - vd as i64, num * den % 8))
}

fn eps(u: u64) -> i64 {
    (((u % 8) as i64 - 1) / 2) & 1
}

fn omega(u: u64) -> i64 {
    let u = (u % 8) as i64;
    ((u * u - 1) / 8) & 1
}

fn hilbert_2_parts(va: i64, ua: u64, vb: i64, ub: u64) -> i32 {
    let e = eps(ua) * eps(ub) + va.rem_euclid(2) * omega(ub) + vb.rem_euclid(2) * omega(ua);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(a, b)_p` for an odd prime `p` and nonzero rationals.
pub fn hilbert_odd(p: u64, a: &BigRational, b: &BigRational) -> Result<i32> {
    if p % 2 == 0 {
        return Err(Error::domain("hilbert_odd needs an odd prime"));
    }
    let (va, ua) = split_rational_p(p, a)?;
    let (vb, ub) = split_rational_p(p, b)?;
    let mut sign = 1;
    if (va * vb).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
        sign = -sign;
    }
    if vb.rem_euclid(2) == 1 {
        sign *= legendre_rational(&ua, p);
    }
    if va.rem_euclid(2) == 1 {
        sign *= legendre_rational(&ub, p);
    }
    Ok(sign)
}

fn split_rational_p(p: u64, a: &BigRational) -> Result<(i64, BigRational)> {
    if a.numer().is_zero() {
        return Err(Error::ZeroInput);
    }
    let vn = v_p_big(p, a.numer()).unwrap() as i64;
    let vd = v_p_big(p, a.denom()).unwrap() as i64;
    let pb = BigInt::from(p);
    let num = a.numer() / pb.pow(vn as u32);
    let den = a.denom() / pb.pow(vd as u32);
    Ok((vn - vd, BigRational::new(num, den)))
}

fn legendre_rational(u: &BigRational, p: u64) -> i32 {
    legendre(u.numer(), p) * legendre(u.denom(), p)
}

/// `(a, b)_∞`: −1 exactly when both are negative.
pub fn hilbert_infinite(a: &BigRational, b: &BigRational) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime_divisors;
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn rq(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn examples() {
        for b in [-7, -3, 2, 5, 6, 10] {
            assert_eq!(hilbert_2(&r(1), &r(b)).unwrap(), 1);
            assert_eq!(hilbert_odd(7, &r(1), &r(b)).unwrap(), 1);
        }
        assert_eq!(hilbert_2(&r(6), &r(3)).unwrap(), 1);
        assert_eq!(hilbert_2(&r(2), &r(3)).unwrap(), -1);
        assert_eq!(hilbert_odd(3, &r(-1), &r(3)).unwrap(), -1);
        assert_eq!(hilbert_odd(7, &r(-1), &r(7)).unwrap(), -1);
        assert_eq!(hilbert_2(&r(0), &r(3)), Err(Error::ZeroInput));
        assert_eq!(hilbert_odd(4, &r(1), &r(3)).is_err(), true);
    }

    #[test]
    fn dyadic_inputs_agree_with_rationals() {
        for a in [-7i64, -6, -3, -2, -1, 1, 2, 3, 5, 6, 10, 12, 7] {
            for b in [-5i64, -2, -1, 3, 6, 7, 14] {
                let da = DyadicNumber::from_int(a, 32);
                let db = DyadicNumber::from_int(b, 32);
                assert_eq!(hilbert_2_dyadic(&da, &db).unwrap(), hilbert_2(&r(a), &r(b)).unwrap());
            }
        }
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (1i64..400, 1i64..50, any::<bool>())
            .prop_map(|(n, d, neg)| rq(if neg { -n } else { n }, d))
    }

    proptest! {
        #[test]
        fn bilinear_and_symmetric(a in small_rational(), a2 in small_rational(), b in small_rational()) {
            let ab = hilbert_2(&(&a * &a2), &b).unwrap();
            prop_assert_eq!(ab, hilbert_2(&a, &b).unwrap() * hilbert_2(&a2, &b).unwrap());
            prop_assert_eq!(hilbert_2(&a, &b).unwrap(), hilbert_2(&b, &a).unwrap());
            for p in [3u64, 5, 7, 11] {
                let ab = hilbert_odd(p, &(&a * &a2), &b).unwrap();
                prop_assert_eq!(ab, hilbert_odd(p, &a, &b).unwrap() * hilbert_odd(p, &a2, &b).unwrap());
            }
        }

        #[test]
        fn product_formula(a in small_rational(), b in small_rational()) {
            let mut primes: Vec<u64> = Vec::new();
            for x in [a.numer(), a.denom(), b.numer(), b.denom()] {
                primes.extend(prime_divisors(x));
            }
            primes.sort();
            primes.dedup();
            let mut prod = hilbert_2(&a, &b).unwrap() * hilbert_infinite(&a, &b).unwrap();
            for p in primes.into_iter().filter(|&p| p != 2) {
                prod *= hilbert_odd(p, &a, &b).unwrap();
            }
            prop_assert_eq!(prod, 1);
        }
    }
}
