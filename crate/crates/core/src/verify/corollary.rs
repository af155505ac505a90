//! Freeness of `log_𝔓(1 + 𝔓) / ℤ₂·log_𝔓(η)` for `q ≡ 3 (mod 8)`.
//!
//! `log` maps `1 + 𝔓³` isometrically onto `𝔓³` (its inverse is `exp`), so
//! `L = log(1 + 𝔓)` is spanned by `𝔓³` together with the logs of the 16 coset
//! representatives of `(1 + 𝔓)/(1 + 𝔓³)`. The quotient `L/ℤ₂·log η` is free of rank 3
//! exactly when `log η` is primitive in `L`. Membership of random units' logs in the
//! computed span is sampled as an independent check.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::snf::{snf_z2, SnfZ2};
use crate::dyadic::DyadicNumber;
use crate::error::{Error, Result};
use crate::tower::{LocalTower, TowerElement};

pub const SAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryOutcome {
    /// ℤ₂-rank of `L/ℤ₂·log η`.
    pub rank: u32,
    pub free: bool,
    /// Valuations of the elementary divisors of the spanning matrix of `L`.
    pub lattice_divisors: Vec<i64>,
    pub samples_checked: usize,
}

/// The ℤ₂-lattice `log(1 + 𝔓)` in `z2_coordinates`.
pub struct LogLattice {
    snf: SnfZ2,
}

impl LogLattice {
    pub fn build(tower: &LocalTower) -> Result<Self> {
        let deg = tower.base_degree();
        let n = 2 * deg;
        let pi = tower.uniformizer();
        let pi3 = pi.pow(3);
        let mut rows: Vec<Vec<DyadicNumber>> = Vec::new();
        // 𝔓³ = Π³·O with O spanned by the unit vectors of z2_coordinates
        for i in 0..n {
            let mut e = vec![BigInt::from(0); n];
            e[i] = BigInt::from(1);
            rows.push((&pi3 * &tower.from_z2_coordinates(&e)).z2_coordinates());
        }
        // representatives 1 + x, x running over 𝔓/𝔓³ with digits in {0, 1}
        for mask in 0..(1u32 << n) {
            let c: Vec<BigInt> = (0..n).map(|i| BigInt::from(mask >> i & 1)).collect();
            let x = &tower.from_z2_coordinates(&c) * &pi;
            let r = &tower.one() + &x;
            rows.push(tower.log_p(&r)?.z2_coordinates());
        }
        let snf = snf_z2(&rows, true)?;
        if snf.rank() != n {
            return Err(Error::SpanMismatch(format!("log lattice has rank {} < {n}", snf.rank())));
        }
        Ok(LogLattice { snf })
    }

    pub fn divisors(&self) -> Vec<i64> {
        self.snf.valuations()
    }

    /// Coordinates of `log` values in the lattice basis.
    pub fn coordinates(&self, v: &TowerElement) -> Result<Vec<DyadicNumber>> {
        self.snf.coordinates(&v.z2_coordinates())
    }

    /// Minimal certified valuation of the coordinates of `v`.
    pub fn min_valuation(&self, v: &TowerElement) -> Result<i64> {
        let c = self.coordinates(v)?;
        let vals: Vec<i64> = c.iter().filter_map(|x| x.valuation()).collect();
        let hidden = c.iter().filter(|x| x.is_zero()).map(|x| x.precision()).min();
        match vals.iter().min() {
            Some(&m) if hidden.is_none_or(|h| m < h) => Ok(m),
            _ => Err(Error::PrecisionExhausted { at_least: hidden.unwrap_or(0) }),
        }
    }
}

/// Random elements of `1 + 𝔓`, seeded for reproducibility.
pub fn sample_one_units(tower: &LocalTower, seed: u64, count: usize) -> Vec<TowerElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * tower.base_degree();
    (0..count)
        .map(|_| {
            let c: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen::<u64>() >> 1)).collect();
            &tower.one() + &(&tower.from_z2_coordinates(&c) * &tower.uniformizer())
        })
        .collect()
}

/// Checks that `log_eta` is primitive in `log(1 + 𝔓)`.
pub fn corollary_check(tower: &LocalTower, log_eta: &TowerElement) -> Result<CorollaryOutcome> {
    if tower.base_degree() != 2 {
        return Err(Error::domain("the corollary check applies to q ≡ 3 mod 8"));
    }
    let lattice = LogLattice::build(tower)?;
    for (k, u) in sample_one_units(tower, tower.q(), SAMPLES).iter().enumerate() {
        let l = tower.log_p(u)?;
        let c = lattice.coordinates(&l)?;
        if c.iter().any(|x| x.valuation().is_some_and(|v| v < 0)) {
            return Err(Error::SpanMismatch(format!("sample {k} has a log outside the computed lattice")));
        }
    }
    let v = lattice.min_valuation(log_eta)?;
    if v < 0 {
        return Err(Error::SpanMismatch("log eta lies outside log(1 + P)".into()));
    }
    if v > 0 {
        return Err(Error::TorsionDetected { valuation: v });
    }
    Ok(CorollaryOutcome {
        rank: (2 * tower.base_degree() - 1) as u32,
        free: true,
        lattice_divisors: lattice.divisors(),
        samples_checked: SAMPLES,
    })
}
