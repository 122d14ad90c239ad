use num_complex::Complex;

use crate::linalg::ComplexMatrix;
use crate::scalar::Real;
use crate::state::ReducedFamily;

/// Remainder-norm threshold for linear independence.
pub const INDEPENDENCE_TOL: f64 = 1e-10;

/// Orthonormal set of flattened matrices under `<A, B> = Tr(A^dagger B)`.
#[derive(Clone, Debug, Default)]
pub(crate) struct OrthoBasis<T> {
    vecs: Vec<Vec<Complex<T>>>,
}

impl<T: Real> OrthoBasis<T> {
    pub(crate) fn new() -> Self {
        Self { vecs: Vec::new() }
    }

    pub(crate) fn len(&self) -> usize {
        self.vecs.len()
    }

    /// Component of `m` orthogonal to the set (two Gram-Schmidt passes)
    /// and its norm.
    pub(crate) fn remainder(&self, m: &ComplexMatrix<T>) -> (Vec<Complex<T>>, T) {
        let mut v = m.as_slice().to_vec();
        for _ in 0..2 {
            for q in &self.vecs {
                let proj = q
                    .iter()
                    .zip(&v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        (v, norm)
    }

    /// Append a remainder of norm `norm`, normalized.
    pub(crate) fn push(&mut self, v: Vec<Complex<T>>, norm: T) {
        self.vecs.push(v.into_iter().map(|z| z / norm).collect());
    }
}

/// Greedy selection in index order: a matrix is kept iff its remainder
/// against the already-kept ones has norm above `tol`.
pub fn independent_subset<T: Real>(mats: &[ComplexMatrix<T>], tol: T) -> Vec<usize> {
    let mut basis = OrthoBasis::new();
    let mut kept = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        let (r, norm) = basis.remainder(m);
        if norm > tol {
            basis.push(r, norm);
            kept.push(i);
        }
    }
    kept
}

/// Maximal linearly independent subset of the first-factor operators,
/// as 0-based indices in eigenvalue order.
pub fn maximal_independent_subset<T: Real>(fam: &ReducedFamily<T>, tol: T) -> Vec<usize> {
    independent_subset(&fam.rhos, tol)
}
