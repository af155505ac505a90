//! Smith normal form over ℤ₂ with column transforms.

use crate::dyadic::DyadicNumber;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SnfZ2 {
    /// Diagonal entries `d_0, …, d_{r−1}` of `P·A·Q`, nonzero at their precision.
    pub diagonal: Vec<DyadicNumber>,
    /// Column transform `Q` (square, invertible over ℤ₂).
    pub q: Vec<Vec<DyadicNumber>>,
}

impl SnfZ2 {
    pub fn valuations(&self) -> Vec<i64> {
        self.diagonal.iter().map(|d| d.valuation().unwrap()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Coordinates of `v` in the basis `{d_i · (row i of Q⁻¹)}` of the row space:
    /// `c = v·Q·D⁻¹`.
    pub fn coordinates(&self, v: &[DyadicNumber]) -> Result<Vec<DyadicNumber>> {
        let n = self.q.len();
        if v.len() != n {
            return Err(Error::domain("vector length does not match the matrix width"));
        }
        let mut out = Vec::with_capacity(self.rank());
        for (j, d) in self.diagonal.iter().enumerate() {
            let mut acc = DyadicNumber::zero(i64::MAX / 4);
            let mut first = true;
            for (i, vi) in v.iter().enumerate() {
                let t = vi * &self.q[i][j];
                acc = if first { t } else { &acc + &t };
                first = false;
            }
            out.push(acc.checked_div(d)?);
        }
        Ok(out)
    }
}

/// Smith normal form of an `r × c` matrix of 2-adic integers.
///
/// Pivots are chosen by minimal certified valuation. Elimination stops when every
/// remaining entry is zero at its precision; such a block is reported as rank loss only
/// if `require_full_rank` is false, else as `PrecisionExhausted`.
pub fn snf_z2(a: &[Vec<DyadicNumber>], require_full_rank: bool) -> Result<SnfZ2> {
    let r = a.len();
    let c = if r == 0 { 0 } else { a[0].len() };
    let prec = a.iter().flatten().map(|x| x.precision()).max().unwrap_or(64).max(1);
    let mut m: Vec<Vec<DyadicNumber>> = a.to_vec();
    let mut q: Vec<Vec<DyadicNumber>> = (0..c)
        .map(|i| (0..c).map(|j| DyadicNumber::from_int(i64::from(i == j), prec + 64)).collect())
        .collect();
    let mut diag = Vec::new();
    for k in 0..r.min(c) {
        let mut piv: Option<(usize, usize, i64)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if let Some(v) = x.valuation() {
                    if piv.is_none_or(|p| v < p.2) {
                        piv = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, pv)) = piv else {
            let floor = m.iter().skip(k).flatten().map(|x| x.precision()).min().unwrap_or(prec);
            if require_full_rank {
                return Err(Error::PrecisionExhausted { at_least: floor });
            }
            break;
        };
        // a hidden entry of lower valuation would make this pivot wrong
        let hidden_floor = m.iter().skip(k).flat_map(|row| row.iter().skip(k)).filter(|x| x.is_zero()).map(|x| x.precision()).min();
        if hidden_floor.is_some_and(|h| h <= pv) {
            return Err(Error::PrecisionExhausted { at_least: hidden_floor.unwrap() });
        }
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        for row in q.iter_mut() {
            row.swap(k, pj);
        }
        let p = m[k][k].clone();
        for i in k + 1..r {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].checked_div(&p)?;
            for j in k..c {
                let t = &f * &m[k][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
        for j in k + 1..c {
            if m[k][j].is_zero() {
                continue;
            }
            let f = m[k][j].checked_div(&p)?;
            for i in 0..r {
                let t = &f * &m[i][k];
                m[i][j] = &m[i][j] - &t;
            }
            for row in q.iter_mut() {
                let t = &f * &row[k];
                row[j] = &row[j] - &t;
            }
        }
        diag.push(p);
    }
    Ok(SnfZ2 { diagonal: diag, q })
}
