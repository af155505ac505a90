//! Certified units `η = γ²/π`.
//!
//! `γ = a + bα` solves `N_{F/K}(γ) = a² − √−q·b² = ε·π` with `ε = ±1`. Since `𝔓` is the
//! only prime of F above `𝔭`, such an integral `γ` generates `𝔓^m`, and `γ²/π` is a unit
//! whose relative norm is 1.
//!
//! The search enumerates `b` and solves for `a` exactly. If `max_j |γ_j|² ≤ H` over the
//! complex embeddings, then `γ − σ(γ) = 2bα` gives `N_{K/ℚ}(b) ≤ H/√q`, which bounds
//! the box for `b`. Writing `b = (X + Y√−q)/2^(d+1)` and `π = (P + Q√−q)/2`,
//!
//! ```text
//! 4^(d+1)·(επ + √−q·b²) = C0 + C1·√−q,
//! C0 = 2ε·4^d·P − 2qXY,   C1 = 2ε·4^d·Q + X² − qY²,
//! ```
//!
//! and `a = (A0 + A1√−q)/2^(d+1)` exists iff `n² = C0² + qC1²`, `A0² = (C0 + n)/2`,
//! `qA1² = (n − C0)/2` all have integer solutions with `2A0A1 = C1`.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_isqrt, isqrt_u128};
use crate::error::{Error, Result};
use crate::field::{complex_embeddings, FElement, KElement, QuarticField};
use crate::tower::{build_tower, LocalTower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    BuiltInSearch,
    Imported,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitCertificate {
    pub q: u64,
    pub m: u32,
    pub pi: KElement,
    pub gamma: Option<FElement>,
    pub eta: FElement,
    /// `ε` in `N_{F/K}(γ) = ε·π`, when `γ` is known.
    pub sign_of_norm: Option<i8>,
    pub provenance: Provenance,
    /// True when `η = γ²/π` is certified, which forces `η` to be an odd power of a
    /// fundamental unit up to torsion.
    pub parity_verified: bool,
}

/// Exact check of every certificate identity; the error names the first that fails.
pub fn check_certificate(field: &QuarticField, cert: &UnitCertificate) -> Result<()> {
    let q = field.q;
    let fail = |what: &str| Err(Error::NotAUnit(format!("q = {q}: {what}")));
    if !field.is_integral(&cert.eta) {
        return fail("eta is not integral");
    }
    if !cert.eta.norm_rel().to_f().is_one() {
        return fail("norm_rel(eta) = 1 does not hold");
    }
    if !cert.pi.is_integral() {
        return fail("pi is not in O_K");
    }
    // 𝔭 has norm 2 when 2 splits in K and norm 4 when it is inert
    let norm_exp = if q % 8 == 3 { 2 * cert.m } else { cert.m };
    if cert.pi.norm() != BigRational::from_integer(BigInt::one() << norm_exp as usize) {
        return fail("N(pi) = N(p)^m does not hold");
    }
    if let Some(g) = &cert.gamma {
        if !field.is_integral(g) {
            return fail("gamma is not integral");
        }
        let n = g.norm_rel();
        let sign = if n == cert.pi {
            1
        } else if n == -&cert.pi {
            -1
        } else {
            return fail("norm_rel(gamma) = ±pi does not hold");
        };
        if cert.sign_of_norm.is_some_and(|s| s != sign) {
            return fail("sign_of_norm does not match norm_rel(gamma)");
        }
        let g2 = g * g;
        if g2 != &cert.eta * &cert.pi.to_f() {
            return fail("eta * pi = gamma^2 does not hold");
        }
    }
    let tower = build_tower(q, 64)?;
    if (&tower.embed(&cert.eta) - &tower.one()).ord().lower_bound() < 1 {
        return fail("eta ≡ 1 mod P does not hold");
    }
    Ok(())
}

/// Squared height `max_j |x_j|²` over the complex embeddings.
fn height2(x: &FElement) -> f64 {
    complex_embeddings(x).height().powi(2)
}

/// Deterministic total order on candidates: height, then canonical text.
fn candidate_cmp(a: &(f64, FElement), b: &(f64, FElement)) -> Ordering {
    a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then_with(|| a.1.to_string().cmp(&b.1.to_string()))
}

fn is_square_mod_64(n: u128) -> bool {
    // squares modulo 64 are 0, 1, 4, 9, 16, 17, 25, 33, 36, 41, 49, 57
    const MASK: u64 = (1 << 0)
        | (1 << 1)
        | (1 << 4)
        | (1 << 9)
        | (1 << 16)
        | (1 << 17)
        | (1 << 25)
        | (1 << 33)
        | (1 << 36)
        | (1 << 41)
        | (1 << 49)
        | (1 << 57);
    MASK >> (n % 64) & 1 == 1
}

/// Solves `N_{F/K}(γ) = ±π` with `max_j |γ_j|² ≤ height_bound`, returning the solution
/// of smallest height and the sign `ε`.
pub fn solve_gamma(field: &QuarticField, pi: &KElement, height_bound: u64) -> Result<(FElement, i8)> {
    solve_gamma_until(field, pi, height_bound, None)
}

pub fn solve_gamma_until(
    field: &QuarticField,
    pi: &KElement,
    height_bound: u64,
    deadline: Option<Instant>,
) -> Result<(FElement, i8)> {
    let q = field.q;
    if height_bound == 0 {
        return Err(Error::NotFound { bound: 0 });
    }
    let qi = q as i128;
    let d = field.basis.denominator_exponent_over_ok_alpha();
    let four_d: i128 = 1 << (2 * d);
    let (ps, qs) = pi.s_coords();
    let two = BigRational::from_integer(BigInt::from(2));
    let p_int = (&ps * &two).to_integer().to_i128().ok_or_else(|| Error::domain("pi too large"))?;
    let q_int = (&qs * &two).to_integer().to_i128().ok_or_else(|| Error::domain("pi too large"))?;
    // X² + qY² ≤ 4^(d+1) · H/√q
    let limit = (4.0 * four_d as f64 * height_bound as f64 / (q as f64).sqrt()).floor();
    if limit > 1e24 {
        return Err(Error::SearchExhausted(format!("height bound {height_bound} exceeds the exact search range")));
    }
    let limit = limit as i128;
    let y_max = isqrt_u128((limit / qi) as u128) as i128;
    let denom = BigRational::from_integer(BigInt::from(1i64 << (d + 1)));
    let mut best: Option<(f64, FElement, i8)> = None;
    let mut steps: u64 = 0;
    for y in -y_max..=y_max {
        let rest = limit - qi * y * y;
        if rest < 0 {
            continue;
        }
        let x_max = isqrt_u128(rest as u128) as i128;
        let mut x = -x_max;
        // X ≡ Y (mod 2)
        if (x - y).rem_euclid(2) != 0 {
            x += 1;
        }
        while x <= x_max {
            steps += 1;
            if steps & 0xffff == 0 && deadline.is_some_and(|dl| Instant::now() >= dl) {
                return Err(Error::SearchExhausted(format!("timeout at height bound {height_bound}")));
            }
            for eps in [1i128, -1] {
                let c0 = 2 * eps * four_d * p_int - 2 * qi * x * y;
                let c1 = 2 * eps * four_d * q_int + x * x - qi * y * y;
                let nn = (c0 * c0) as u128 + (qi * c1 * c1) as u128;
                if !is_square_mod_64(nn) {
                    continue;
                }
                let n = isqrt_u128(nn);
                if n * n != nn {
                    continue;
                }
                let n = n as i128;
                if (c0 + n) % 2 != 0 {
                    continue;
                }
                let Some(a0) = exact_isqrt((c0 + n) / 2) else { continue };
                let qa1 = (n - c0) / 2;
                if qa1 % qi != 0 {
                    continue;
                }
                let Some(a1) = exact_isqrt(qa1 / qi) else { continue };
                let a1 = if 2 * a0 * a1 == c1 { a1 } else { -a1 };
                if 2 * a0 * a1 != c1 || (a0 - a1).rem_euclid(2) != 0 {
                    continue;
                }
                for sgn in [1i128, -1] {
                    let coords = [sgn * a0, x, sgn * a1, y]
                        .map(|c| BigRational::from_integer(BigInt::from(c)) / &denom);
                    let gamma = FElement::new(q, coords);
                    if !field.is_integral(&gamma) {
                        continue;
                    }
                    let h = height2(&gamma);
                    if h > height_bound as f64 * (1.0 + 1e-9) {
                        continue;
                    }
                    let cand = (h, gamma, eps as i8);
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            candidate_cmp(&(cand.0, cand.1.clone()), &(b.0, b.1.clone())) == Ordering::Less
                        }
                    };
                    if better {
                        best = Some(cand);
                    }
                }
            }
            x += 2;
        }
    }
    match best {
        Some((_, g, e)) => {
            debug_assert!({
                let n = g.norm_rel();
                n == *pi || n == -pi
            });
            Ok((g, e))
        }
        None => Err(Error::NotFound { bound: height_bound }),
    }
}

/// Multiplies `η` by the first root of unity (in the order of [`QuarticField::torsion`])
/// that makes it `≡ 1 (mod 𝔓)`.
pub fn normalize_torsion(field: &QuarticField, tower: &LocalTower, eta: &FElement) -> Result<(FElement, FElement)> {
    for z in field.torsion() {
        let cand = &z * eta;
        if (&tower.embed(&cand) - &tower.one()).ord().lower_bound() >= 1 {
            return Ok((cand, z));
        }
    }
    Err(Error::NotAUnit("no torsion multiple is ≡ 1 mod P".into()))
}

/// `η = γ²/π`, normalized and checked.
pub fn eta_from_gamma(field: &QuarticField, m: u32, pi: &KElement, gamma: &FElement, sign: i8) -> Result<UnitCertificate> {
    let q = field.q;
    let eta = &(gamma * gamma) * &pi.inverse()?.to_f();
    if !field.is_unit(&eta) {
        return Err(Error::NotAUnit(format!("gamma^2/pi is not a unit for q = {q}")));
    }
    let tower = build_tower(q, 64)?;
    let (eta, zeta) = normalize_torsion(field, &tower, &eta)?;
    // a torsion factor other than ±1 would change norm_rel(eta); it is absorbed into gamma
    // only when it is a square root of 1
    if !zeta.is_one() && zeta != FElement::from_int(q, -1) {
        return Err(Error::Anomaly(format!("q = {q}: eta needed a torsion factor {zeta}")));
    }
    let cert = UnitCertificate {
        q,
        m,
        pi: pi.clone(),
        gamma: Some(gamma.clone()),
        eta,
        sign_of_norm: Some(sign),
        provenance: Provenance::BuiltInSearch,
        parity_verified: true,
    };
    // −η = γ²/(−π) keeps the identity exact
    let cert = if zeta.is_one() { cert } else { UnitCertificate { pi: -&cert.pi, sign_of_norm: Some(-sign), ..cert } };
    check_certificate(field, &cert)?;
    Ok(cert)
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub initial_bound: u64,
    pub max_bound: u64,
    pub deadline: Option<Instant>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { initial_bound: 64, max_bound: 1 << 60, deadline: None }
    }
}

/// Runs the `γ` search with height bounds growing by a factor of 4 per round.
pub fn find_certificate(field: &QuarticField, m: u32, pi: &KElement, cfg: &SearchConfig) -> Result<UnitCertificate> {
    let mut bound = cfg.initial_bound.max(1);
    loop {
        match solve_gamma_until(field, pi, bound, cfg.deadline) {
            Ok((g, s)) => return eta_from_gamma(field, m, pi, &g, s),
            Err(Error::NotFound { .. }) => {}
            Err(e) => return Err(e),
        }
        if bound >= cfg.max_bound {
            return Err(Error::NotFound { bound });
        }
        if cfg.deadline.is_some_and(|dl| Instant::now() >= dl) {
            return Err(Error::SearchExhausted(format!("timeout at height bound {bound}")));
        }
        bound = bound.saturating_mul(4).min(cfg.max_bound);
    }
}

/// Oracle: the nontorsion unit of smallest height with `max_j |x_j| ≤ height_bound`,
/// by exhaustive enumeration of power-basis coordinates.
pub fn bruteforce_fundamental_unit(field: &QuarticField, height_bound: f64) -> Result<FElement> {
    let q = field.q;
    let r = (q as f64).powf(0.25);
    let den: i64 = field.basis.elements().iter().map(|x| x.denominator().to_i64().unwrap()).max().unwrap();
    // c_i = (1/4) Σ_k x_k ζ_k^{−i} r^{−i}, so |c_i| ≤ H / r^i
    let lim: Vec<i64> = (0..4).map(|i| (height_bound / r.powi(i) * den as f64).floor() as i64).collect();
    let mut best: Option<(f64, FElement)> = None;
    let dr = BigRational::from_integer(BigInt::from(den));
    for c3 in -lim[3]..=lim[3] {
        for c2 in -lim[2]..=lim[2] {
            for c1 in -lim[1]..=lim[1] {
                for c0 in -lim[0]..=lim[0] {
                    let x = [c0, c1, c2, c3];
                    let e = {
                        let c: [f64; 4] = x.map(|v| v as f64 / den as f64);
                        let mut hs = [0.0f64; 2];
                        for (j, k) in [1.0f64, 3.0].iter().enumerate() {
                            let th = k * std::f64::consts::FRAC_PI_4;
                            let (mut re, mut im) = (0.0, 0.0);
                            for (i, ci) in c.iter().enumerate() {
                                let mag = ci * r.powi(i as i32);
                                re += mag * (th * i as f64).cos();
                                im += mag * (th * i as f64).sin();
                            }
                            hs[j] = re.hypot(im);
                        }
                        hs
                    };
                    let h = e[0].max(e[1]);
                    // units have |x_1|·|x_2| = 1; nontorsion ones have height > 1
                    if h > height_bound || h < 1.0 + 1e-9 || ((e[0] * e[1]) - 1.0).abs() > 1e-6 {
                        continue;
                    }
                    let elt = FElement::new(q, x.map(|v| BigRational::from_integer(BigInt::from(v)) / &dr));
                    if !field.is_unit(&elt) {
                        continue;
                    }
                    let better = match &best {
                        None => true,
                        Some(b) => candidate_cmp(&(h, elt.clone()), b) == Ordering::Less,
                    };
                    if better {
                        best = Some((h, elt));
                    }
                }
            }
        }
    }
    best.map(|b| b.1).ok_or(Error::NotFound { bound: height_bound as u64 })
}

/// Finds `k` and a root of unity `ζ` with `u = ζ·η₀^k`, verified exactly.
pub fn express_power(field: &QuarticField, u: &FElement, eta0: &FElement) -> Result<(i64, FElement)> {
    let l0 = complex_embeddings(eta0).abs()[0].ln();
    if l0.abs() < 1e-12 {
        return Err(Error::domain("eta0 is torsion"));
    }
    let lu = complex_embeddings(u).abs()[0].ln();
    let ratio = lu / l0;
    let k = ratio.round();
    if (ratio - k).abs() > 1e-6 {
        return Err(Error::Inconclusive(format!("log ratio {ratio} is not near an integer")));
    }
    let k = k as i64;
    let zeta = u * &eta0.pow(-k)?;
    if field.torsion().contains(&zeta) {
        Ok((k, zeta))
    } else {
        Err(Error::Inconclusive(format!("u / eta0^{k} is not a root of unity")))
    }
}
