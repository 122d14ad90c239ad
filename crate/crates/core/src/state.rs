//! Bipartite density matrices on `C^N ⊗ C^N`, their spectra, and the
//! per-eigenvector reduced operators.
//!
//! Product-basis index convention: `|k l>` sits at flat position `k * N + l`,
//! the first factor selecting the row of a coefficient matrix. The same
//! convention is used by [`ComplexMatrix::kron`], so
//! `(u ⊗ w)|v>` corresponds to `u A w^T`.

use num_complex::Complex;

use crate::error::{DensityViolation, Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix};
use crate::scalar::Real;

/// Tolerance used when validating density matrices and unitaries.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Eigenvalues at or below this are treated as zero.
pub const RANK_TOL: f64 = 1e-10;

/// A validated `N² x N²` Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    dim: usize,
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Subsystem dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }
}

/// Check every density-matrix invariant; the error names the first one
/// violated along with its measured size.
pub fn validate_density<T: Real>(raw: ComplexMatrix<T>, dim: usize) -> Result<DensityMatrix<T>> {
    let expected = dim * dim;
    if dim == 0 || raw.rows() != expected || raw.cols() != expected {
        return Err(DensityViolation::Shape {
            rows: raw.rows(),
            cols: raw.cols(),
            expected,
        }
        .into());
    }
    let tol = T::tol(VALIDATION_TOL);
    let asymmetry = raw.hermitian_defect();
    if asymmetry > tol {
        return Err(DensityViolation::NotHermitian {
            asymmetry: asymmetry.to_f64_lossy(),
        }
        .into());
    }
    let tr = raw.trace();
    if (tr - Complex::new(T::one(), T::zero())).norm() > tol {
        return Err(DensityViolation::Trace {
            re: tr.re.to_f64_lossy(),
            im: tr.im.to_f64_lossy(),
        }
        .into());
    }
    let eig = herm_eig(&raw, T::one())?;
    let min = eig.values.last().copied().unwrap_or_else(T::zero);
    if min < -tol {
        return Err(DensityViolation::NegativeEigenvalue {
            eigenvalue: min.to_f64_lossy(),
        }
        .into());
    }
    Ok(DensityMatrix { dim, mat: raw })
}

/// Nonzero spectrum of a density matrix.
///
/// Eigenpairs are stored in ascending eigenvalue order; this is the
/// canonical labeling used by every certificate in the crate.
#[derive(Clone, Debug)]
pub struct EigenSystem<T> {
    pub dim: usize,
    pub lambdas: Vec<T>,
    pub vectors: Vec<Vec<Complex<T>>>,
}

impl<T: Real> EigenSystem<T> {
    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    /// The same eigenpairs relabeled: entry `i` of the result is entry
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            dim: self.dim,
            lambdas: perm.iter().map(|&p| self.lambdas[p]).collect(),
            vectors: perm.iter().map(|&p| self.vectors[p].clone()).collect(),
        }
    }
}

/// Spectral data of `rho` with eigenvalues `<= rank_tol` discarded.
pub fn eigensystem<T: Real>(rho: &DensityMatrix<T>, rank_tol: T) -> Result<EigenSystem<T>> {
    let eig = herm_eig(rho.matrix(), T::tol(1e-8))?;
    let mut lambdas = Vec::new();
    let mut vectors = Vec::new();
    for j in (0..eig.values.len()).rev() {
        if eig.values[j] > rank_tol {
            lambdas.push(eig.values[j]);
            vectors.push(eig.vectors.column(j));
        }
    }
    Ok(EigenSystem {
        dim: rho.dim(),
        lambdas,
        vectors,
    })
}

/// Coefficient matrix `A` of `|v> = Σ a_kl |k l>`.
pub fn unfold<T: Real>(v: &[Complex<T>], dim: usize) -> Result<ComplexMatrix<T>> {
    if dim == 0 || v.len() != dim * dim {
        return Err(Error::BadVectorLength { len: v.len(), dim });
    }
    let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    if (norm - T::one()).abs() > T::tol(1e-9) {
        return Err(Error::NotNormalized {
            norm: norm.to_f64_lossy(),
        });
    }
    ComplexMatrix::new(dim, dim, v.to_vec())
}

/// Inverse of [`unfold`].
pub fn flatten<T: Real>(a: &ComplexMatrix<T>) -> Vec<Complex<T>> {
    a.as_slice().to_vec()
}

/// Reduced operators of each eigenvector: `rho_i = A A^dagger` on the first
/// factor and `theta_i = A^T A^*` on the second.
#[derive(Clone, Debug)]
pub struct ReducedFamily<T> {
    pub rhos: Vec<ComplexMatrix<T>>,
    pub thetas: Vec<ComplexMatrix<T>>,
}

impl<T: Real> ReducedFamily<T> {
    pub fn len(&self) -> usize {
        self.rhos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhos.is_empty()
    }
}

pub fn first_reduction<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a * &a.adjoint()
}

pub fn second_reduction<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    &a.transpose() * &a.conj()
}

pub fn coefficient_matrices<T: Real>(es: &EigenSystem<T>) -> Result<Vec<ComplexMatrix<T>>> {
    es.vectors.iter().map(|v| unfold(v, es.dim)).collect()
}

pub fn reduced_family<T: Real>(es: &EigenSystem<T>) -> Result<ReducedFamily<T>> {
    let coeffs = coefficient_matrices(es)?;
    Ok(ReducedFamily {
        rhos: coeffs.iter().map(first_reduction).collect(),
        thetas: coeffs.iter().map(second_reduction).collect(),
    })
}

/// Operator on the first factor obtained by contracting the second index
/// pair of an `N² x N²` matrix.
pub fn partial_trace_second<T: Real>(m: &ComplexMatrix<T>, dim: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(dim, dim, |i, k| {
        (0..dim).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
            acc + m[(i * dim + j, k * dim + j)]
        })
    })
}

/// Operator on the second factor obtained by contracting the first index pair.
pub fn partial_trace_first<T: Real>(m: &ComplexMatrix<T>, dim: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(dim, dim, |j, l| {
        (0..dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + m[(i * dim + j, i * dim + l)]
        })
    })
}

pub(crate) fn check_unitary<T: Real>(m: &ComplexMatrix<T>, dim: usize, which: &'static str) -> Result<()> {
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::DimensionMismatch {
            op: which,
            left: m.shape(),
            right: (dim, dim),
        });
    }
    let defect = m.unitarity_defect();
    if defect > T::tol(VALIDATION_TOL) {
        return Err(Error::NotUnitary {
            which,
            defect: defect.to_f64_lossy(),
        });
    }
    Ok(())
}

/// `(u ⊗ w) rho (u ⊗ w)^dagger`, re-validated.
pub fn apply_local_unitary<T: Real>(
    rho: &DensityMatrix<T>,
    u: &ComplexMatrix<T>,
    w: &ComplexMatrix<T>,
) -> Result<DensityMatrix<T>> {
    check_unitary(u, rho.dim(), "u")?;
    check_unitary(w, rho.dim(), "w")?;
    let local = u.kron(w);
    validate_density(rho.matrix().conjugate_by(&local), rho.dim())
}

/// `Σ_i weights_i |v_i><v_i|` for unit vectors `v_i` of length `N²`.
pub fn mixture<T: Real>(weights: &[T], vectors: &[Vec<Complex<T>>]) -> ComplexMatrix<T> {
    let d = vectors.first().map_or(0, Vec::len);
    let mut m = ComplexMatrix::zeros(d, d);
    for (&p, v) in weights.iter().zip(vectors) {
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += v[i] * v[j].conj() * p;
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::paper_example;
    use crate::scalar::cplx;

    type M = ComplexMatrix<f64>;

    fn basis(idx: usize) -> Vec<Complex<f64>> {
        let mut v = vec![cplx(0.0, 0.0); 4];
        v[idx] = cplx(1.0, 0.0);
        v
    }

    fn bell(a: usize, b: usize) -> Vec<Complex<f64>> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = vec![cplx(0.0, 0.0); 4];
        v[a] = cplx(s, 0.0);
        v[b] = cplx(s, 0.0);
        v
    }

    #[test]
    fn validation_accepts_and_rejects() {
        assert!(validate_density(M::diag(&[1.0, 0.0, 0.0, 0.0]), 2).is_ok());
        match validate_density(M::diag(&[1.0, 1.0, 0.0, 0.0]), 2) {
            Err(Error::InvalidDensity(DensityViolation::Trace { re, .. })) => assert_eq!(re, 2.0),
            other => panic!("unexpected {other:?}"),
        }
        match validate_density(M::diag(&[1.5, -0.5, 0.0, 0.0]), 2) {
            Err(Error::InvalidDensity(DensityViolation::NegativeEigenvalue { eigenvalue })) => {
                assert!((eigenvalue + 0.5).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        let mut skew = M::diag(&[0.5, 0.5, 0.0, 0.0]);
        skew[(0, 1)] = cplx(0.1, 0.0);
        assert!(matches!(
            validate_density(skew, 2),
            Err(Error::InvalidDensity(DensityViolation::NotHermitian { .. }))
        ));
        assert!(matches!(
            validate_density(M::identity(3), 2),
            Err(Error::InvalidDensity(DensityViolation::Shape { .. }))
        ));
    }

    #[test]
    fn spectra_of_reference_states() {
        let pure = validate_density(M::diag(&[1.0, 0.0, 0.0, 0.0]), 2).unwrap();
        let es = eigensystem(&pure, RANK_TOL).unwrap();
        assert_eq!(es.rank(), 1);
        assert!((es.lambdas[0] - 1.0).abs() < 1e-15);

        let ex = paper_example::<f64>();
        let es = eigensystem(&ex.rho, RANK_TOL).unwrap();
        assert_eq!(es.rank(), 2);
        assert!((es.lambdas[0] - 1.0 / 3.0).abs() < 1e-14);
        assert!((es.lambdas[1] - 2.0 / 3.0).abs() < 1e-14);

        let mixed = validate_density(M::identity(4).scale_real(0.25), 2).unwrap();
        let es = eigensystem(&mixed, RANK_TOL).unwrap();
        assert_eq!(es.lambdas, vec![0.25; 4]);
    }

    #[test]
    fn unfold_uses_first_factor_as_row() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = unfold(&bell(0, 3), 2).unwrap();
        assert!(a.distance(&M::identity(2).scale_real(s)) < 1e-15);
        let a = unfold(&basis(1), 2).unwrap();
        assert_eq!(a, M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
        let a = unfold(&bell(1, 2), 2).unwrap();
        assert!(a.distance(&M::from_real_rows(&[&[0.0, s], &[s, 0.0]])) < 1e-15);
        assert_eq!(flatten(&a), bell(1, 2));
    }

    #[test]
    fn unfold_errors() {
        assert!(matches!(unfold(&basis(1)[..3], 2), Err(Error::BadVectorLength { len: 3, dim: 2 })));
        let v = vec![cplx::<f64>(1.0, 0.0); 4];
        assert!(matches!(unfold(&v, 2), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn reduced_operators_of_example_vectors() {
        let half = M::identity(2).scale_real(0.5);
        let a = unfold(&bell(0, 3), 2).unwrap();
        assert!(first_reduction(&a).distance(&half) < 1e-15);
        assert!(second_reduction(&a).distance(&half) < 1e-15);

        let a = unfold(&basis(1), 2).unwrap();
        assert_eq!(first_reduction(&a), M::diag(&[1.0, 0.0]));
        assert_eq!(second_reduction(&a), M::diag(&[0.0, 1.0]));

        let a = unfold(&basis(0), 2).unwrap();
        assert_eq!(first_reduction(&a), M::diag(&[1.0, 0.0]));
        assert_eq!(second_reduction(&a), M::diag(&[1.0, 0.0]));
    }

    #[test]
    fn local_unitary_maps_example_pair() {
        let ex = paper_example::<f64>();
        let x = M::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let same = apply_local_unitary(&ex.rho, &M::identity(2), &M::identity(2)).unwrap();
        assert_eq!(same.matrix(), ex.rho.matrix());

        // Direct conjugation oracle, entry by entry.
        let big = M::identity(2).kron(&x);
        let oracle = M::from_fn(4, 4, |i, j| {
            let mut acc = cplx(0.0, 0.0);
            for k in 0..4 {
                for l in 0..4 {
                    acc += big[(i, k)] * ex.rho.matrix()[(k, l)] * big[(j, l)].conj();
                }
            }
            acc
        });
        let mapped = apply_local_unitary(&ex.rho, &M::identity(2), &x).unwrap();
        assert!(mapped.matrix().distance(&oracle) < 1e-15);
        assert!(mapped.matrix().distance(ex.rho_prime.matrix()) < 1e-15);
    }

    #[test]
    fn non_unitary_factor_rejected() {
        let ex = paper_example::<f64>();
        let bad = M::diag(&[1.0, 2.0]);
        assert!(matches!(
            apply_local_unitary(&ex.rho, &bad, &M::identity(2)),
            Err(Error::NotUnitary { which: "u", .. })
        ));
    }

    #[test]
    fn partial_traces_of_product_state() {
        let a = M::from_real_rows(&[&[0.75, 0.0], &[0.0, 0.25]]);
        let b = M::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let rho = a.kron(&b);
        assert!(partial_trace_second(&rho, 2).distance(&a) < 1e-15);
        assert!(partial_trace_first(&rho, 2).distance(&b) < 1e-15);
    }
}
