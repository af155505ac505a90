//! Complex embeddings of F, up to conjugation.
//!
//! F is totally complex of degree 4, so it has two conjugate pairs of embeddings,
//! `α ↦ q^{1/4} e^{iπ/4}` and `α ↦ q^{1/4} e^{3iπ/4}`. Values are `f64`; they drive
//! height bounds and tie-breaks in the unit search and are never used for a decision
//! that exact arithmetic could contradict.

use num_traits::ToPrimitive;

use super::FElement;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEmbeddings {
    /// `(re, im)` of the image under each embedding.
    pub values: [(f64, f64); 2],
}

impl ComplexEmbeddings {
    pub fn abs(&self) -> [f64; 2] {
        self.values.map(|(re, im)| re.hypot(im))
    }

    /// `max_j |x_j|`.
    pub fn height(&self) -> f64 {
        let [a, b] = self.abs();
        a.max(b)
    }

    /// `max_j log |x_j|`, the usual regulator-scale size of a unit.
    pub fn log_height(&self) -> f64 {
        self.height().ln()
    }
}

pub fn complex_embeddings(x: &FElement) -> ComplexEmbeddings {
    let r = (x.q() as f64).powf(0.25);
    let c: Vec<f64> = x.coords().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let values = [1.0f64, 3.0].map(|k| {
        let theta = k * std::f64::consts::FRAC_PI_4;
        let (mut re, mut im) = (0.0, 0.0);
        for (j, cj) in c.iter().enumerate() {
            let mag = cj * r.powi(j as i32);
            re += mag * (theta * j as f64).cos();
            im += mag * (theta * j as f64).sin();
        }
        (re, im)
    });
    ComplexEmbeddings { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FElement;

    #[test]
    fn alpha_has_modulus_q_quarter() {
        let e = complex_embeddings(&FElement::alpha(81));
        for a in e.abs() {
            assert!((a - 3.0).abs() < 1e-12);
        }
        // α⁴ = −q in both embeddings
        let (re, im) = e.values[1];
        let z2 = (re * re - im * im, 2.0 * re * im);
        let z4 = (z2.0 * z2.0 - z2.1 * z2.1, 2.0 * z2.0 * z2.1);
        assert!((z4.0 + 81.0).abs() < 1e-9 && z4.1.abs() < 1e-9);
    }

    #[test]
    fn norm_matches_product_of_moduli() {
        let x = FElement::from_ints(7, [3, -1, 2, 1]);
        let [a, b] = complex_embeddings(&x).abs();
        let n = num_traits::ToPrimitive::to_f64(&x.norm_abs()).unwrap();
        assert!(((a * b).powi(2) - n).abs() / n < 1e-10);
    }
}
