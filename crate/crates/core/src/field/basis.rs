//! Integral basis of `O_F`.
//!
//! `x⁴ + q` is Eisenstein at `q`, so `ℤ[α]` can only fail to be maximal at 2. The
//! Dedekind criterion decides 2-maximality; when it fails, the order is enlarged by
//! adjoining any `x/2` (with `x` in the current order) whose characteristic polynomial
//! is integral, until no such element is left.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::{self, Mat};
use super::FElement;
use crate::dyadic::gf2;

#[derive(Clone, Debug)]
pub struct IntegralBasis {
    q: u64,
    /// Row `i` is the `i`-th basis element in power-basis coordinates.
    rows: Mat,
    inv: Mat,
    index_over_z_alpha: BigInt,
    z_alpha_2_maximal: bool,
    rounds: u32,
}

/// Dedekind criterion at 2 for `ℤ[α]`, `α⁴ = −q`.
pub fn dedekind_z_alpha_is_2_maximal(q: u64) -> bool {
    let f = vec![BigInt::from(q), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    dedekind_2_maximal(&f)
}

/// Dedekind criterion at 2 for a monic integer polynomial, coefficients low to high.
fn dedekind_2_maximal(f: &[BigInt]) -> bool {
    let fbar = gf2::from_ints(f);
    let factors = gf2::factor(fbar);
    let g = factors.iter().fold(1u32, |acc, &(phi, _)| gf2::mul(acc, phi));
    let h = gf2::div(fbar, g);
    let gh = poly_mul(&lift(g), &lift(h));
    let diff: Vec<BigInt> = (0..f.len().max(gh.len()))
        .map(|i| {
            let a = f.get(i).cloned().unwrap_or_default();
            let b = gh.get(i).cloned().unwrap_or_default();
            (a - b) / 2
        })
        .collect();
    let big_f = gf2::from_ints(&diff);
    let d = gf2::gcd(gf2::gcd(big_f, g), h);
    gf2::degree(d) == 0
}

fn lift(p: u32) -> Vec<BigInt> {
    (0..=gf2::degree(p)).map(|i| BigInt::from((p >> i) & 1)).collect()
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl IntegralBasis {
    pub fn compute(q: u64) -> Self {
        let z_alpha_2_maximal = dedekind_z_alpha_is_2_maximal(q);
        let mut rows = linalg::identity(4);
        let mut rounds = 0;
        if !z_alpha_2_maximal {
            'outer: loop {
                for mask in 1u32..16 {
                    let mut x = vec![BigRational::zero(); 4];
                    for (i, row) in rows.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            for j in 0..4 {
                                x[j] += &row[j];
                            }
                        }
                    }
                    let half = BigRational::new(BigInt::one(), BigInt::from(2));
                    let cand = FElement::new(q, std::array::from_fn(|j| &x[j] * &half));
                    if cand.is_algebraic_integer() {
                        let mut gens = rows.clone();
                        gens.push(cand.coords().to_vec());
                        rows = hnf_rational(&gens);
                        rounds += 1;
                        continue 'outer;
                    }
                }
                break;
            }
        }
        let inv = linalg::inverse(&rows).expect("basis is nonsingular");
        let det = linalg::det(&rows);
        let index = (BigRational::one() / det.abs()).to_integer();
        IntegralBasis { q, rows, inv, index_over_z_alpha: index, z_alpha_2_maximal, rounds }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn element(&self, i: usize) -> FElement {
        FElement::new(self.q, std::array::from_fn(|j| self.rows[i][j].clone()))
    }

    pub fn elements(&self) -> Vec<FElement> {
        (0..4).map(|i| self.element(i)).collect()
    }

    /// Coordinates of `x` in this basis.
    pub fn coordinates(&self, x: &FElement) -> Vec<BigRational> {
        linalg::vec_mat(x.coords(), &self.inv)
    }

    pub fn contains(&self, x: &FElement) -> bool {
        self.coordinates(x).iter().all(|c| c.is_integer())
    }

    /// `[O_F : ℤ[α]]`.
    pub fn index_over_z_alpha(&self) -> &BigInt {
        &self.index_over_z_alpha
    }

    /// `[O_F : O_K[α]]`; `O_K[α]` has index 4 over `ℤ[α]`.
    pub fn index_over_ok_alpha(&self) -> u64 {
        (&self.index_over_z_alpha / BigInt::from(4)).to_u64().unwrap()
    }

    /// The 2-part of `[O_F : ℤ[α]]`, which is the whole index.
    pub fn index_at_2(&self) -> u64 {
        self.index_over_z_alpha.to_u64().unwrap()
    }

    pub fn z_alpha_is_2_maximal(&self) -> bool {
        self.z_alpha_2_maximal
    }

    pub fn enlargement_rounds(&self) -> u32 {
        self.rounds
    }

    /// `disc(x⁴ + q) = 256 q³`.
    pub fn polynomial_discriminant(&self) -> BigInt {
        BigInt::from(256) * BigInt::from(self.q).pow(3)
    }

    pub fn discriminant(&self) -> BigInt {
        self.polynomial_discriminant() / (&self.index_over_z_alpha * &self.index_over_z_alpha)
    }

    /// Smallest `d` with `2^d O_F ⊆ O_K[α]`. Elements of `O_F` then have relative
    /// coordinates `a + bα` with `a, b ∈ 2^{-d} O_K`.
    pub fn denominator_exponent_over_ok_alpha(&self) -> u32 {
        (0..4)
            .map(|i| {
                let (a, b) = self.element(i).relative();
                let mut d = 0;
                let two = BigRational::from_integer(BigInt::from(2));
                let (mut a, mut b) = (a, b);
                while !(a.is_integral() && b.is_integral()) {
                    a = a.scale(&two);
                    b = b.scale(&two);
                    d += 1;
                }
                d
            })
            .max()
            .unwrap()
    }
}

/// Hermite basis of the lattice spanned by rational rows.
fn hnf_rational(rows: &Mat) -> Mat {
    let den = rows.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    linalg::hnf_rows(ints, 4)
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{primes_3_mod_4, v2_big};

    #[test]
    fn z_alpha_is_never_2_maximal() {
        for q in primes_3_mod_4(3, 300) {
            assert!(!dedekind_z_alpha_is_2_maximal(q), "q = {q}");
        }
    }

    #[test]
    fn dedekind_on_known_orders() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        // ℤ[i] is maximal; ℤ[√−3] is not
        assert!(dedekind_2_maximal(&b(&[1, 0, 1])));
        assert!(!dedekind_2_maximal(&b(&[3, 0, 1])));
        // ℤ[√2] is maximal
        assert!(dedekind_2_maximal(&b(&[-2, 0, 1])));
    }

    #[test]
    fn discriminant_two_adic_valuation() {
        for q in primes_3_mod_4(3, 200) {
            let ib = IntegralBasis::compute(q);
            let v = v2_big(&ib.discriminant()).unwrap();
            let (expected_v, expected_rel) = if q % 8 == 3 { (4, 1) } else { (2, 2) };
            assert_eq!(v, expected_v, "q = {q}");
            assert_eq!(ib.index_over_ok_alpha(), expected_rel, "q = {q}");
            assert_eq!(ib.discriminant() % BigInt::from(q).pow(3), BigInt::zero());
            for x in ib.elements() {
                assert!(x.is_algebraic_integer());
            }
        }
    }

    #[test]
    fn order_contains_omega_and_is_closed() {
        for q in [3u64, 7, 11, 23, 31] {
            let ib = IntegralBasis::compute(q);
            let w = crate::field::KElement::omega(q).to_f();
            assert!(ib.contains(&w));
            assert!(!ib.contains(&FElement::from_ints(q, [1, 0, 0, 0]).scale(&BigRational::new(1.into(), 2.into()))));
            for x in ib.elements() {
                for y in ib.elements() {
                    assert!(ib.contains(&(&x * &y)));
                }
            }
            let d = ib.denominator_exponent_over_ok_alpha();
            assert_eq!(d, if q % 8 == 3 { 0 } else { 1 });
        }
    }
}
