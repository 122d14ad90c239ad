use std::ops::Range;

use num_complex::Complex;

use super::Tensor3;
use crate::error::{Error, Result};
use crate::linalg::{det_and_inverse, ComplexMatrix};
use crate::scalar::Real;
use crate::state::{
    coefficient_matrices, eigensystem, first_reduction, second_reduction, DensityMatrix,
    EigenSystem, ReducedFamily, RANK_TOL,
};

/// Relative gap below which neighbouring eigenvalues are treated as equal.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Default relative pivot threshold for the genericity test.
pub const GENERICITY_TOL: f64 = 1e-10;

const IMAGINARY_RESIDUE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Genericity<T> {
    pub omega: bool,
    pub theta: bool,
    pub det_omega: T,
    pub det_theta: T,
}

impl<T> Genericity<T> {
    pub fn is_generic(&self) -> bool {
        self.omega && self.theta
    }
}

/// Invariant tables of one density matrix under the canonical
/// (ascending-eigenvalue) labeling.
///
/// When the nonzero spectrum is degenerate, each block of equal eigenvalues
/// contributes the reduction of its whole spectral projector instead of one
/// operator per eigenvector; `block_sizes` records the grouping.
#[derive(Clone, Debug)]
pub struct CertificateSet<T> {
    pub dim: usize,
    pub n: usize,
    /// One representative eigenvalue per block.
    pub lambdas: Vec<T>,
    pub block_sizes: Vec<usize>,
    pub omega: ComplexMatrix<T>,
    pub theta: ComplexMatrix<T>,
    pub x: Tensor3<T>,
    pub y: Tensor3<T>,
    /// `J^s = Tr(rho^s)` for `s = 1..=N²`.
    pub j: Vec<T>,
    pub generic: Genericity<T>,
}

impl<T: Real> CertificateSet<T> {
    pub fn is_block_coarsened(&self) -> bool {
        self.block_sizes.iter().any(|&s| s > 1)
    }
}

/// Complex Gram matrix `G_ij = Tr(M_i M_j)`.
pub fn trace_gram<T: Real>(mats: &[ComplexMatrix<T>]) -> ComplexMatrix<T> {
    let n = mats.len();
    ComplexMatrix::from_fn(n, n, |i, j| mats[i].trace_product(&mats[j]))
}

/// `Tr(M_i M_j M_k)` for all index triples.
pub fn triple_traces<T: Real>(mats: &[ComplexMatrix<T>]) -> Tensor3<T> {
    let n = mats.len();
    let pairs: Vec<ComplexMatrix<T>> = (0..n * n).map(|p| &mats[p / n] * &mats[p % n]).collect();
    Tensor3::from_fn(n, |i, j, k| pairs[i * n + j].trace_product(&mats[k]))
}

fn real_gram<T: Real>(mats: &[ComplexMatrix<T>]) -> Result<ComplexMatrix<T>> {
    let mut g = trace_gram(mats);
    let residue = g.as_slice().iter().fold(T::zero(), |acc, z| acc.max(z.im.abs()));
    if residue > T::tol(IMAGINARY_RESIDUE) {
        return Err(Error::ImaginaryResidue {
            residue: residue.to_f64_lossy(),
        });
    }
    let n = mats.len();
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = Complex::new(g[(i, j)].re, T::zero());
        }
    }
    Ok(g)
}

/// `Ω_ij = Tr(rho_i rho_j)` and `Θ_ij = Tr(theta_i theta_j)` as real
/// symmetric matrices.
pub fn omega_theta<T: Real>(fam: &ReducedFamily<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    Ok((real_gram(&fam.rhos)?, real_gram(&fam.thetas)?))
}

/// `X_ijk = Tr(rho_i rho_j rho_k)` and `Y_ijk = Tr(theta_i theta_j theta_k)`.
pub fn xy_tensors<T: Real>(fam: &ReducedFamily<T>) -> (Tensor3<T>, Tensor3<T>) {
    (triple_traces(&fam.rhos), triple_traces(&fam.thetas))
}

/// Power sums `Σ λ^s` for `s = 1..=count`.
pub fn j_moments_from<T: Real>(lambdas: &[T], count: usize) -> Vec<T> {
    (1..=count)
        .map(|s| lambdas.iter().fold(T::zero(), |acc, &l| acc + l.powi(s as i32)))
        .collect()
}

/// `J^s = Tr(rho^s)` for `s = 1..=N²`, from the nonzero spectrum.
pub fn j_moments<T: Real>(rho: &DensityMatrix<T>) -> Result<Vec<T>> {
    let es = eigensystem(rho, T::tol(RANK_TOL))?;
    Ok(j_moments_from(&es.lambdas, rho.dim() * rho.dim()))
}

/// Cholesky pivot ratios `d_k / G_kk` of a Hermitian positive semidefinite
/// Gram matrix; full rank iff every ratio exceeds `tol`.
fn full_rank_gram<T: Real>(g: &ComplexMatrix<T>, tol: T) -> bool {
    let n = g.rows();
    let mut l = ComplexMatrix::<T>::zeros(n, n);
    for k in 0..n {
        let diag = g[(k, k)].re;
        let mut d = diag;
        for j in 0..k {
            d -= l[(k, j)].norm_sqr();
        }
        if diag.is_nan() || diag <= T::zero() || d <= tol * diag {
            return false;
        }
        let lkk = d.sqrt();
        l[(k, k)] = Complex::new(lkk, T::zero());
        for i in k + 1..n {
            let mut s = g[(i, k)];
            for j in 0..k {
                s -= l[(i, j)] * l[(k, j)].conj();
            }
            l[(i, k)] = s / lkk;
        }
    }
    true
}

/// Genericity flags: `det Ω != 0` and `det Θ != 0`, decided by relative
/// Cholesky pivots so the threshold does not drift with the rank.
pub fn genericity<T: Real>(cert: &CertificateSet<T>, tol: T) -> Genericity<T> {
    gram_genericity(&cert.omega, &cert.theta, tol)
}

fn gram_genericity<T: Real>(omega: &ComplexMatrix<T>, theta: &ComplexMatrix<T>, tol: T) -> Genericity<T> {
    let det = |m: &ComplexMatrix<T>| {
        det_and_inverse(m, T::zero())
            .map(|d| d.det.re)
            .unwrap_or_else(|_| T::zero())
    };
    Genericity {
        omega: full_rank_gram(omega, tol),
        theta: full_rank_gram(theta, tol),
        det_omega: det(omega),
        det_theta: det(theta),
    }
}

/// Group ascending eigenvalues into runs whose consecutive relative gap is
/// below `rel_gap`.
pub fn eigen_blocks<T: Real>(lambdas: &[T], rel_gap: T) -> Vec<Range<usize>> {
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=lambdas.len() {
        let split = i == lambdas.len() || {
            let (a, b) = (lambdas[i - 1], lambdas[i]);
            (b - a).abs() >= rel_gap * a.abs().max(b.abs())
        };
        if split {
            blocks.push(start..i);
            start = i;
        }
    }
    blocks
}

/// Reduced family with each degenerate block replaced by the reductions of
/// its spectral projector.
pub fn block_family<T: Real>(es: &EigenSystem<T>, blocks: &[Range<usize>]) -> Result<ReducedFamily<T>> {
    let coeffs = coefficient_matrices(es)?;
    let sum = |range: &Range<usize>, f: fn(&ComplexMatrix<T>) -> ComplexMatrix<T>| {
        let mut acc = ComplexMatrix::zeros(es.dim, es.dim);
        for a in &coeffs[range.clone()] {
            acc = &acc + &f(a);
        }
        acc
    };
    Ok(ReducedFamily {
        rhos: blocks.iter().map(|b| sum(b, first_reduction)).collect(),
        thetas: blocks.iter().map(|b| sum(b, second_reduction)).collect(),
    })
}

/// Certificates of an eigensystem under a given block grouping.
pub fn certificates_for<T: Real>(es: &EigenSystem<T>, blocks: &[Range<usize>]) -> Result<CertificateSet<T>> {
    let fam = block_family(es, blocks)?;
    let (omega, theta) = omega_theta(&fam)?;
    let (x, y) = xy_tensors(&fam);
    let generic = gram_genericity(&omega, &theta, T::tol(GENERICITY_TOL));
    Ok(CertificateSet {
        dim: es.dim,
        n: blocks.len(),
        lambdas: blocks.iter().map(|b| es.lambdas[b.start]).collect(),
        block_sizes: blocks.iter().map(|b| b.len()).collect(),
        omega,
        theta,
        x,
        y,
        j: j_moments_from(&es.lambdas, es.dim * es.dim),
        generic,
    })
}

/// Canonical certificates of `rho`.
pub fn certificates<T: Real>(rho: &DensityMatrix<T>) -> Result<CertificateSet<T>> {
    let es = eigensystem(rho, T::tol(RANK_TOL))?;
    let blocks = eigen_blocks(&es.lambdas, T::tol(DEGENERACY_GAP));
    certificates_for(&es, &blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::paper_example;
    use crate::scalar::cplx;
    use crate::state::{reduced_family, validate_density};

    type M = ComplexMatrix<f64>;

    fn bell_mix() -> DensityMatrix<f64> {
        // 1/3 |Φ+><Φ+| + 2/3 |Ψ+><Ψ+|
        let a = 1.0 / 6.0;
        let b = 1.0 / 3.0;
        validate_density(
            M::from_real_rows(&[&[a, 0.0, 0.0, a], &[0.0, b, b, 0.0], &[0.0, b, b, 0.0], &[a, 0.0, 0.0, a]]),
            2,
        )
        .unwrap()
    }

    #[test]
    fn omega_of_worked_example() {
        let ex = paper_example::<f64>();
        let fam = reduced_family(&eigensystem(&ex.rho, RANK_TOL).unwrap()).unwrap();
        let (omega, theta) = omega_theta(&fam).unwrap();
        let expect = M::from_real_rows(&[&[0.5, 0.5], &[0.5, 1.0]]);
        assert!(omega.distance(&expect) < 1e-12);
        assert!(theta.distance(&expect) < 1e-12);
    }

    #[test]
    fn omega_of_pure_states() {
        let bell = validate_density(
            M::from_real_rows(&[&[0.5, 0.0, 0.0, 0.5], &[0.0; 4], &[0.0; 4], &[0.5, 0.0, 0.0, 0.5]]),
            2,
        )
        .unwrap();
        let c = certificates(&bell).unwrap();
        assert!((c.omega[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((c.x[(0, 0, 0)].re - 0.25).abs() < 1e-15);

        let product = validate_density(M::diag(&[1.0, 0.0, 0.0, 0.0]), 2).unwrap();
        let c = certificates(&product).unwrap();
        assert!((c.omega[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(c.generic.is_generic());
        assert_eq!(c.j, vec![1.0; 4]);
    }

    #[test]
    fn x_table_of_worked_example() {
        let ex = paper_example::<f64>();
        let c = certificates(&ex.rho).unwrap();
        for ((i, j, k), v) in c.x.iter_indexed() {
            let expect = match (i, j, k) {
                (1, 1, 1) => 1.0,
                (0, 0, 0) | (0, 0, 1) | (0, 1, 0) | (1, 0, 0) => 0.25,
                _ => 0.5,
            };
            assert!((v - cplx(expect, 0.0)).norm() < 1e-12, "x[{i}{j}{k}] = {v}");
            assert!((c.y[(i, j, k)] - v).norm() < 1e-12);
        }
    }

    #[test]
    fn j_moments_of_worked_example() {
        let ex = paper_example::<f64>();
        let j = j_moments(&ex.rho).unwrap();
        assert_eq!(j.len(), 4);
        assert!((j[0] - 1.0).abs() < 1e-12);
        assert!((j[1] - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn genericity_of_reference_states() {
        let ex = paper_example::<f64>();
        let c = certificates(&ex.rho).unwrap();
        assert!(c.generic.omega && c.generic.theta);
        assert!((c.generic.det_omega - 0.25).abs() < 1e-12);
        assert_eq!(genericity(&c, 1e-10), c.generic);

        let c = certificates(&bell_mix()).unwrap();
        assert!(!c.generic.omega && !c.generic.theta);
        let expect = M::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(c.omega.distance(&expect) < 1e-12);
        assert!(c.theta.distance(&expect) < 1e-12);
    }

    #[test]
    fn blocks_group_equal_eigenvalues() {
        let b = eigen_blocks(&[0.1, 0.2, 0.2 + 1e-12, 0.5], 1e-8);
        assert_eq!(b, vec![0..1, 1..3, 3..4]);
        assert_eq!(eigen_blocks::<f64>(&[], 1e-8), Vec::<Range<usize>>::new());
    }

    #[test]
    fn degenerate_spectrum_is_coarsened() {
        let mixed = validate_density(M::identity(4).scale_real(0.25), 2).unwrap();
        let c = certificates(&mixed).unwrap();
        assert!(c.is_block_coarsened());
        assert_eq!(c.n, 1);
        assert_eq!(c.block_sizes, vec![4]);
        // Tr_2 of the identity on C^2 ⊗ C^2 is 2 I, so Ω = Tr(4 I) = 8.
        assert!((c.omega[(0, 0)].re - 8.0).abs() < 1e-12);
    }
}
