//! Dense rational and integer matrix helpers for 4×4 work.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Mat = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(BigRational::zero(), |acc, t| acc + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn vec_mat(v: &[BigRational], m: &Mat) -> Vec<BigRational> {
    (0..m[0].len())
        .map(|j| v.iter().zip(m).fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j]))
        .collect()
}

fn trace(a: &Mat) -> BigRational {
    (0..a.len()).fold(BigRational::zero(), |acc, i| acc + &a[i][i])
}

/// Characteristic polynomial `det(xI − M)` by Faddeev–LeVerrier, coefficients low to high.
pub fn char_poly(m: &Mat) -> Vec<BigRational> {
    let n = m.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk: Mat = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let t = trace(&mat_mul(m, &mk));
        coeffs[n - k] = -t / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

/// Inverse by Gauss–Jordan elimination; `None` for a singular matrix.
pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

pub fn det(m: &Mat) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d *= &a[col][col];
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    d
}

/// Upper-triangular basis (Hermite form, positive pivots, entries above each pivot
/// reduced into `[0, pivot)`) of the ℤ-lattice spanned by integer rows of full rank `n`.
pub fn hnf_rows(rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut rest: Vec<Vec<BigInt>> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for col in 0..n {
        loop {
            let nz: Vec<usize> = (0..rest.len()).filter(|&i| !rest[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rest[i][col].abs()).unwrap();
            let prow = rest[p].clone();
            for &i in nz.iter().filter(|&&i| i != p) {
                let f = rest[i][col].div_floor(&prow[col]);
                for j in 0..n {
                    let t = &f * &prow[j];
                    rest[i][j] -= t;
                }
            }
        }
        let idx = (0..rest.len())
            .find(|&i| !rest[i][col].is_zero())
            .expect("lattice must have full rank");
        let mut row = rest.swap_remove(idx);
        if row[col].is_negative() {
            row.iter_mut().for_each(|x| *x = -x.clone());
        }
        basis.push(row);
        rest.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    for col in 0..n {
        let pivot = basis[col][col].clone();
        let (above, below) = basis.split_at_mut(col);
        let prow = &below[0];
        for row in above.iter_mut() {
            let f = row[col].div_floor(&pivot);
            if !f.is_zero() {
                for j in 0..n {
                    let t = &f * &prow[j];
                    row[j] -= t;
                }
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect()
    }

    #[test]
    fn char_poly_of_companion() {
        // companion of x⁴ + 7: coefficients 7, 0, 0, 0, 1
        let c = m(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-7, 0, 0, 0]]);
        assert_eq!(char_poly(&c), vec![r(7), r(0), r(0), r(0), r(1)]);
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(det(&a), r(1));
        assert_eq!(mat_mul(&a, &inverse(&a).unwrap()), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn hnf_of_small_lattice() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let h = hnf_rows(vec![b(&[2, 0]), b(&[1, 1]), b(&[0, 2])], 2);
        assert_eq!(h, vec![b(&[1, 1]), b(&[0, 2])]);
    }
}
