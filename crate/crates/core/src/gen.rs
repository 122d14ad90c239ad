//! Reproducible generators: Haar unitaries, random mixed states, and the
//! two-qubit worked example.
//!
//! Randomness comes from ChaCha8 seeded with a 64-bit value, so identical
//! seeds and parameters give bit-identical output.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::invariants::AncillarySet;
use crate::linalg::{qr_unitary, ComplexMatrix};
use crate::scalar::{cplx, Real};
use crate::state::{mixture, validate_density, DensityMatrix};

/// 64-bit generator seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

pub(crate) fn gaussian_matrix<T: Real>(n: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cplx(re * s, im * s)
    })
}

pub(crate) fn haar_with<T: Real>(n: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    loop {
        // A Gaussian matrix is singular with probability zero; retry anyway.
        if let Ok(q) = qr_unitary(&gaussian_matrix::<T>(n, rng)) {
            return q;
        }
    }
}

/// Haar-random `n x n` unitary.
pub fn haar_unitary<T: Real>(n: usize, seed: Seed) -> ComplexMatrix<T> {
    assert!(n >= 1, "haar_unitary: n must be positive");
    haar_with(n, &mut seed.rng())
}

/// Independent Haar-random `(u, w)` pair on `C^dim`.
pub fn random_local_unitary<T: Real>(dim: usize, seed: Seed) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let mut rng = seed.rng();
    let u = haar_with(dim, &mut rng);
    let w = haar_with(dim, &mut rng);
    (u, w)
}

/// Minimum pairwise relative gap between mixing weights.
pub const WEIGHT_GAP: f64 = 1e-3;

/// Mixture of `rank` orthonormal Haar-random pure states with positive,
/// pairwise distinct weights.
///
/// Raw weights are drawn uniformly from `[0.1, 1)` before normalization,
/// which bounds the ratio between the largest and smallest eigenvalue.
pub fn random_state<T: Real>(dim: usize, rank: usize, seed: Seed) -> Result<DensityMatrix<T>> {
    let d = dim * dim;
    if dim == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, max: d });
    }
    let mut rng = seed.rng();
    let basis = haar_with::<T>(d, &mut rng);
    let weights = distinct_weights(rank, &mut rng);
    let weights: Vec<T> = weights.into_iter().map(T::lit).collect();
    let vectors: Vec<Vec<Complex<T>>> = (0..rank).map(|j| basis.column(j)).collect();
    let mut m = mixture(&weights, &vectors);
    // Remove the rounding drift in the trace before validation.
    let tr = m.trace().re;
    m = m.scale_real(T::one() / tr);
    validate_density(m.hermitian_part(), dim)
}

fn distinct_weights(rank: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..rank).map(|_| rng.random_range(0.1..1.0)).collect();
        let ok = raw.iter().enumerate().all(|(i, &a)| {
            raw[i + 1..]
                .iter()
                .all(|&b| (a - b).abs() >= WEIGHT_GAP * a.max(b))
        });
        if ok {
            let total: f64 = raw.iter().sum();
            return raw.into_iter().map(|p| p / total).collect();
        }
    }
}

/// The two-qubit worked example: `rho = 1/3 |Φ+><Φ+| + 2/3 |01><01|` and
/// `rho' = 1/3 |Ψ+><Ψ+| + 2/3 |00><00|`, with the ancillary matrices used
/// to complete both reduced families.
#[derive(Clone, Debug)]
pub struct PaperExample<T> {
    pub rho: DensityMatrix<T>,
    pub rho_prime: DensityMatrix<T>,
    pub ancillary: AncillarySet<T>,
    pub ancillary_prime: AncillarySet<T>,
}

pub fn paper_example<T: Real>() -> PaperExample<T> {
    let sixth = 1.0 / 6.0;
    let two_thirds = 2.0 / 3.0;
    let rho = ComplexMatrix::from_real_rows(&[
        &[sixth, 0.0, 0.0, sixth],
        &[0.0, two_thirds, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[sixth, 0.0, 0.0, sixth],
    ]);
    let rho_prime = ComplexMatrix::from_real_rows(&[
        &[two_thirds, 0.0, 0.0, 0.0],
        &[0.0, sixth, sixth, 0.0],
        &[0.0, sixth, sixth, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
    ]);
    let raise = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let lower = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
    PaperExample {
        rho: validate_density(rho, 2).expect("example state is valid"),
        rho_prime: validate_density(rho_prime, 2).expect("example state is valid"),
        ancillary: AncillarySet {
            rhos: vec![raise.clone(), lower.clone()],
            thetas: vec![raise.clone(), lower.clone()],
        },
        ancillary_prime: AncillarySet {
            rhos: vec![raise.clone(), lower.clone()],
            thetas: vec![lower, raise],
        },
    }
}
