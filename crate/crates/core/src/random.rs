//! Seeded sampling of states, Haar unitaries and perturbed non-unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{dagger, hermitian_spectral_norm, mul, CMatrix, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix of independent standard complex Gaussians.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    CMatrix::new(rows, cols, data).expect("sized by construction")
}

pub fn random_state(dim: usize, rng: &mut impl Rng) -> CMatrix {
    gaussian_matrix(dim, 1, rng).normalized()
}

/// Haar-distributed unitary: Gram-Schmidt on a Gaussian matrix, which leaves the
/// implied triangular factor with a positive diagonal.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian_matrix(d, d, rng);
    let mut cols: Vec<Vec<C64>> = (0..d).map(|j| (0..d).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..d {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for prev in done.iter() {
            let proj: C64 = prev.iter().zip(col.iter()).map(|(p, c)| p.conj() * c).sum();
            for (c, p) in col.iter_mut().zip(prev) {
                *c -= proj * p;
            }
        }
        let norm = col.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        col.iter_mut().for_each(|a| *a /= norm);
    }
    let mut u = CMatrix::zeros(d, d);
    for (j, col) in cols.iter().enumerate() {
        for (i, a) in col.iter().enumerate() {
            u[(i, j)] = *a;
        }
    }
    u
}

/// `||M^dagger M - I||_2`.
pub fn unitarity_gap(m: &CMatrix) -> f64 {
    let d = m.rows();
    let h = mul(&dagger(m), m).expect("square").sub(&CMatrix::identity(d)).expect("square");
    hermitian_spectral_norm(&h).expect("square")
}

/// A Haar unitary plus a Gaussian perturbation, grown until `||M^dagger M - I||_2 >= min_gap`.
pub fn perturbed_nonunitary(d: usize, min_gap: f64, rng: &mut impl Rng) -> CMatrix {
    let u = haar_unitary(d, rng);
    let g = gaussian_matrix(d, d, rng);
    let mut eps = 0.25;
    loop {
        let m = u.add(&g.scale_real(eps)).expect("same shape");
        if unitarity_gap(&m) >= min_gap {
            return m;
        }
        eps *= 2.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary_and_seeded() {
        for d in 1..=8 {
            let u = haar_unitary(d, &mut rng(d as u64));
            assert!(u.unitarity_defect() < 1e-12, "d = {d}");
        }
        assert_eq!(haar_unitary(3, &mut rng(5)), haar_unitary(3, &mut rng(5)));
        assert_ne!(haar_unitary(3, &mut rng(5)), haar_unitary(3, &mut rng(6)));
    }

    #[test]
    fn perturbation_reaches_gap() {
        let mut r = rng(11);
        for d in 2..=4 {
            for _ in 0..20 {
                let m = perturbed_nonunitary(d, 0.1, &mut r);
                assert!(unitarity_gap(&m) >= 0.1);
            }
        }
    }

    #[test]
    fn states_are_normalized() {
        let s = random_state(16, &mut rng(1));
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }
}
