//! Small integer helpers: primality, square roots, Legendre symbols.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `q ≡ 3 (mod 4)` in `[lo, hi]`, ascending.
pub fn primes_3_mod_4(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi)
        .filter(|&n| n % 4 == 3 && is_prime(n))
        .collect()
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Exact square root of a nonnegative `i128`, if it is a perfect square.
pub fn exact_isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt_u128(n as u128);
    (r * r == n as u128).then_some(r as i128)
}

pub fn exact_isqrt_big(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// 2-adic valuation of a nonzero integer.
pub fn v2_big(n: &BigInt) -> Option<u64> {
    if n.is_zero() {
        None
    } else {
        n.trailing_zeros()
    }
}

pub fn v_p_big(p: u64, n: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (quo, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return Some(v);
        }
        n = quo;
        v += 1;
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`; `0` when `p | a`.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap_or(0);
    if r == 0 {
        return 0;
    }
    let e = (p - 1) / 2;
    let mut result: u128 = 1;
    let mut base = r as u128;
    let mut e2 = e;
    let m = p as u128;
    while e2 > 0 {
        if e2 & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        e2 >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Prime factors of `|n|` by trial division (repeated factors collapsed).
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::from(1) {
        out.push(n.to_u64().expect("trial division only used on small inputs"));
    }
    out
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Extended gcd: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}
