//! Canonical text form `c0 + c1*a + c2*a^2 + c3*a^3` over the power basis in `a = α`.
//!
//! Coefficients are integers or fractions `n/d`. Zero terms are omitted, a unit
//! coefficient is written bare (`a`, `-a^2`), and the zero element is `0`. The parser
//! accepts any ordering and repetition of terms, optional whitespace, and `*` between
//! a coefficient and the power of `a` may be omitted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn format_power_basis(c: &[BigRational; 4]) -> String {
    let mut out = String::new();
    for (i, x) in c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let neg = x.is_negative();
        let abs = x.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "a".to_string(),
            _ => format!("a^{i}"),
        };
        if i == 0 {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn parse_power_basis(s: &str) -> Result<[BigRational; 4]> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    let mut out: [BigRational; 4] = std::array::from_fn(|_| BigRational::zero());
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let bytes = compact.as_bytes();
    let mut start = 0;
    let mut sign = false;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        sign = bytes[0] == b'-';
        start = 1;
    }
    let mut i = start;
    while i <= bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^') {
            terms.push((sign, &compact[start..i]));
            if i < bytes.len() {
                sign = bytes[i] == b'-';
            }
            start = i + 1;
        }
        i += 1;
    }
    for (neg, t) in terms {
        let (coef, power) = parse_term(t)?;
        let coef = if neg { -coef } else { coef };
        out[power] += coef;
    }
    Ok(out)
}

fn parse_term(t: &str) -> Result<(BigRational, usize)> {
    let bad = || Error::Parse(format!("cannot parse term '{t}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let (coef_str, mono) = match t.find('a') {
        None => (t, None),
        Some(p) => (t[..p].trim_end_matches('*'), Some(&t[p..])),
    };
    let power = match mono {
        None => 0,
        Some("a") => 1,
        Some(m) => {
            let e = m.strip_prefix("a^").ok_or_else(bad)?;
            let e: usize = e.parse().map_err(|_| bad())?;
            if !(1..=3).contains(&e) {
                return Err(Error::Parse(format!("power a^{e} is outside the basis a^0..a^3")));
            }
            e
        }
    };
    let coef = if coef_str.is_empty() {
        if mono.is_none() {
            return Err(bad());
        }
        BigRational::one()
    } else {
        parse_rational(coef_str).ok_or_else(bad)?
    };
    Ok((coef, power))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        None => Some(BigRational::from_integer(s.parse::<BigInt>().ok()?)),
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_power_basis(&[r(0, 1), r(0, 1), r(0, 1), r(0, 1)]), "0");
        assert_eq!(format_power_basis(&[r(3, 1), r(-1, 1), r(0, 1), r(1, 2)]), "3 - a + 1/2*a^3");
        assert_eq!(format_power_basis(&[r(0, 1), r(0, 1), r(-2, 1), r(0, 1)]), "-2*a^2");
    }

    #[test]
    fn parse_examples() {
        let p = parse_power_basis("1/2 + 3*a - a^2 + a3").err();
        assert!(p.is_some());
        let p = parse_power_basis(" -a^3 + 2a + 5 - 1/2*a^2 + a ").unwrap();
        assert_eq!(p, [r(5, 1), r(3, 1), r(-1, 2), r(-1, 1)]);
        assert!(parse_power_basis("a^4").is_err());
        assert!(parse_power_basis("").is_err());
        assert!(parse_power_basis("1/0").is_err());
        assert!(parse_power_basis("x").is_err());
    }

    proptest! {
        #[test]
        fn roundtrip(cs in prop::array::uniform4((-1000i64..1000, 1i64..9))) {
            let c = cs.map(|(n, d)| r(n, d));
            let s = format_power_basis(&c);
            prop_assert_eq!(parse_power_basis(&s).unwrap(), c);
        }
    }
}
