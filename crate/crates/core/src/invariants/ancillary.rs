use num_complex::Complex;

use super::certificates::{omega_theta, trace_gram, triple_traces};
use super::subset::{independent_subset, OrthoBasis, INDEPENDENCE_TOL};
use super::Tensor3;
use crate::error::{Error, Result};
use crate::linalg::{det_and_inverse, ComplexMatrix};
use crate::scalar::Real;
use crate::state::{eigensystem, reduced_family, DensityMatrix, ReducedFamily, RANK_TOL};

/// Bound on `max ||rho_i rho_j - Σ_k C_ij^k rho_k||_F`.
pub const EXPANSION_RESIDUAL_BOUND: f64 = 1e-8;

/// Extra matrices completing the first- and second-factor families to bases
/// of the `N x N` matrix space.
#[derive(Clone, Debug, PartialEq)]
pub struct AncillarySet<T> {
    pub rhos: Vec<ComplexMatrix<T>>,
    pub thetas: Vec<ComplexMatrix<T>>,
}

/// Full `N²`-element bases: an independent subset of the reduced operators
/// followed by ancillary matrices.
#[derive(Clone, Debug)]
pub struct CompletedBasis<T> {
    pub dim: usize,
    /// Indices (into the reduced family) of the operators leading `rhos`.
    pub rho_subset: Vec<usize>,
    pub theta_subset: Vec<usize>,
    pub rhos: Vec<ComplexMatrix<T>>,
    pub thetas: Vec<ComplexMatrix<T>>,
    pub supplied: bool,
}

impl<T: Real> CompletedBasis<T> {
    pub fn ancillary_rhos(&self) -> &[ComplexMatrix<T>] {
        &self.rhos[self.rho_subset.len()..]
    }

    pub fn ancillary_thetas(&self) -> &[ComplexMatrix<T>] {
        &self.thetas[self.theta_subset.len()..]
    }
}

fn complete_auto<T: Real>(leading: &[ComplexMatrix<T>], dim: usize) -> Vec<ComplexMatrix<T>> {
    let tol = T::tol(INDEPENDENCE_TOL);
    let mut basis = OrthoBasis::new();
    for m in leading {
        let (r, norm) = basis.remainder(m);
        basis.push(r, norm);
    }
    let mut out = leading.to_vec();
    for k in 0..dim {
        for l in 0..dim {
            if basis.len() == dim * dim {
                return out;
            }
            let (r, norm) = basis.remainder(&ComplexMatrix::unit(dim, k, l));
            if norm > tol {
                let unit: Vec<Complex<T>> = r.iter().map(|z| z / norm).collect();
                out.push(ComplexMatrix::new(dim, dim, unit).expect("finite remainder"));
                basis.push(r, norm);
            }
        }
    }
    out
}

fn complete_supplied<T: Real>(
    leading: &[ComplexMatrix<T>],
    extra: &[ComplexMatrix<T>],
    dim: usize,
    family: &'static str,
) -> Result<Vec<ComplexMatrix<T>>> {
    let expected = dim * dim - leading.len();
    if extra.len() != expected {
        return Err(Error::AncillaryCount {
            expected,
            got: extra.len(),
        });
    }
    let mut all = leading.to_vec();
    for m in extra {
        if m.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                op: "ancillary_completion",
                left: m.shape(),
                right: (dim, dim),
            });
        }
        all.push(m.clone());
    }
    let tol = T::tol(INDEPENDENCE_TOL);
    let mut basis = OrthoBasis::new();
    for (index, m) in all.iter().enumerate() {
        let (r, norm) = basis.remainder(m);
        if norm <= tol {
            return Err(Error::DependentBasis {
                family,
                index,
                remainder: norm.to_f64_lossy(),
            });
        }
        basis.push(r, norm);
    }
    Ok(all)
}

/// Complete both reduced families to bases of the matrix space.
///
/// Each family is first reduced to its maximal independent subset. With
/// `supplied` ancillaries the combined set is checked for independence and
/// used verbatim. Otherwise matrix units `E_kl` are scanned in row-major
/// order, orthogonalized against the accepted set under `Tr(A^dagger B)`,
/// and remainders above the independence threshold are kept with unit
/// Frobenius norm.
pub fn ancillary_completion<T: Real>(
    fam: &ReducedFamily<T>,
    supplied: Option<&AncillarySet<T>>,
) -> Result<CompletedBasis<T>> {
    let dim = fam.rhos.first().map_or(0, |m| m.rows());
    let tol = T::tol(INDEPENDENCE_TOL);
    let rho_subset = independent_subset(&fam.rhos, tol);
    let theta_subset = independent_subset(&fam.thetas, tol);
    let lead_r: Vec<_> = rho_subset.iter().map(|&i| fam.rhos[i].clone()).collect();
    let lead_t: Vec<_> = theta_subset.iter().map(|&i| fam.thetas[i].clone()).collect();
    let (rhos, thetas) = match supplied {
        Some(anc) => (
            complete_supplied(&lead_r, &anc.rhos, dim, "rho")?,
            complete_supplied(&lead_t, &anc.thetas, dim, "theta")?,
        ),
        None => (complete_auto(&lead_r, dim), complete_auto(&lead_t, dim)),
    };
    Ok(CompletedBasis {
        dim,
        rho_subset,
        theta_subset,
        rhos,
        thetas,
        supplied: supplied.is_some(),
    })
}

/// Invariants over the completed bases (indices `1..=N²`).
#[derive(Clone, Debug)]
pub struct ExtendedCertificateSet<T> {
    pub basis: CompletedBasis<T>,
    /// Ω and Θ of the full reduced family.
    pub omega: ComplexMatrix<T>,
    pub theta: ComplexMatrix<T>,
    pub omega_t: ComplexMatrix<T>,
    pub theta_t: ComplexMatrix<T>,
    pub x_t: Tensor3<T>,
    pub y_t: Tensor3<T>,
}

/// Ω̃, Θ̃, X̃, Ỹ over a completed basis. The block indexed by the leading
/// subset is copied from Ω and Θ, so it agrees with them exactly.
pub fn extended_invariants<T: Real>(
    fam: &ReducedFamily<T>,
    basis: CompletedBasis<T>,
) -> Result<ExtendedCertificateSet<T>> {
    let (omega, theta) = omega_theta(fam)?;
    let mut omega_t = trace_gram(&basis.rhos);
    let mut theta_t = trace_gram(&basis.thetas);
    for (a, &ia) in basis.rho_subset.iter().enumerate() {
        for (b, &ib) in basis.rho_subset.iter().enumerate() {
            omega_t[(a, b)] = omega[(ia, ib)];
        }
    }
    for (a, &ia) in basis.theta_subset.iter().enumerate() {
        for (b, &ib) in basis.theta_subset.iter().enumerate() {
            theta_t[(a, b)] = theta[(ia, ib)];
        }
    }
    let x_t = triple_traces(&basis.rhos);
    let y_t = triple_traces(&basis.thetas);
    Ok(ExtendedCertificateSet {
        basis,
        omega,
        theta,
        omega_t,
        theta_t,
        x_t,
        y_t,
    })
}

/// Eigensystem, reduced family, completion and extended invariants of `rho`.
pub fn extended_certificates<T: Real>(
    rho: &DensityMatrix<T>,
    supplied: Option<&AncillarySet<T>>,
) -> Result<ExtendedCertificateSet<T>> {
    let es = eigensystem(rho, T::tol(RANK_TOL))?;
    let fam = reduced_family(&es)?;
    let basis = ancillary_completion(&fam, supplied)?;
    extended_invariants(&fam, basis)
}

/// Expansion coefficients `rho_i rho_j = Σ_k C_ij^k rho_k` over the
/// completed basis.
#[derive(Clone, Debug)]
pub struct StructureConstants<T> {
    /// `c[(i, j, k)] = C_ij^k`.
    pub c: Tensor3<T>,
    pub residual: T,
}

fn expand<T: Real>(
    gram: &ComplexMatrix<T>,
    triples: &Tensor3<T>,
    basis: &[ComplexMatrix<T>],
    bound: T,
) -> Result<StructureConstants<T>> {
    let di = det_and_inverse(gram, T::zero())?;
    let inv = di.inverse.ok_or(Error::Singular {
        det: di.det.norm().to_f64_lossy(),
    })?;
    let n = basis.len();
    // X̃_ijk = Σ_m C_ij^m Ω̃_mk, so C_ij^l = Σ_k X̃_ijk (Ω̃^-1)_kl.
    let c = Tensor3::from_fn(n, |i, j, l| {
        (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + triples[(i, j, k)] * inv[(k, l)])
    });
    let mut residual = T::zero();
    for i in 0..n {
        for j in 0..n {
            let mut diff = &basis[i] * &basis[j];
            for (l, m) in basis.iter().enumerate() {
                diff.add_scaled(-c[(i, j, l)], m);
            }
            residual = residual.max(diff.frobenius_norm());
        }
    }
    if residual > bound {
        return Err(Error::ExpansionResidual {
            residual: residual.to_f64_lossy(),
            bound: bound.to_f64_lossy(),
        });
    }
    Ok(StructureConstants { c, residual })
}

/// Structure constants of the first-factor basis from X̃ and Ω̃⁻¹, with the
/// expansion residual checked against [`EXPANSION_RESIDUAL_BOUND`].
pub fn structure_constants<T: Real>(ext: &ExtendedCertificateSet<T>) -> Result<StructureConstants<T>> {
    structure_constants_within(ext, T::tol(EXPANSION_RESIDUAL_BOUND))
}

pub fn structure_constants_within<T: Real>(ext: &ExtendedCertificateSet<T>, bound: T) -> Result<StructureConstants<T>> {
    expand(&ext.omega_t, &ext.x_t, &ext.basis.rhos, bound)
}

/// Structure constants of the second-factor basis from Ỹ and Θ̃⁻¹.
pub fn structure_constants_theta<T: Real>(ext: &ExtendedCertificateSet<T>) -> Result<StructureConstants<T>> {
    structure_constants_theta_within(ext, T::tol(EXPANSION_RESIDUAL_BOUND))
}

pub fn structure_constants_theta_within<T: Real>(
    ext: &ExtendedCertificateSet<T>,
    bound: T,
) -> Result<StructureConstants<T>> {
    expand(&ext.theta_t, &ext.y_t, &ext.basis.thetas, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::paper_example;
    use crate::scalar::cplx;

    type M = ComplexMatrix<f64>;

    fn example_family() -> ReducedFamily<f64> {
        let ex = paper_example::<f64>();
        reduced_family(&eigensystem(&ex.rho, RANK_TOL).unwrap()).unwrap()
    }

    #[test]
    fn supplied_ancillaries_reproduce_displayed_gram() {
        let ex = paper_example::<f64>();
        let fam = example_family();
        let basis = ancillary_completion(&fam, Some(&ex.ancillary)).unwrap();
        let ext = extended_invariants(&fam, basis).unwrap();
        let expect = M::from_real_rows(&[
            &[0.5, 0.5, 0.0, 0.0],
            &[0.5, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert!(ext.omega_t.distance(&expect) < 1e-12);
        assert!(ext.theta_t.distance(&expect) < 1e-12);
        assert!((ext.x_t[(0, 2, 3)] - cplx(0.5, 0.0)).norm() < 1e-12);
        assert!((ext.x_t[(1, 2, 3)] - cplx(1.0, 0.0)).norm() < 1e-12);
        assert!((ext.y_t[(1, 3, 2)] - cplx(1.0, 0.0)).norm() < 1e-12);
        assert!(ext.y_t[(1, 2, 3)].norm() < 1e-12);
    }

    #[test]
    fn auto_completion_is_nonsingular() {
        let fam = example_family();
        let basis = ancillary_completion(&fam, None).unwrap();
        assert_eq!(basis.rhos.len(), 4);
        assert_eq!(basis.rho_subset, vec![0, 1]);
        for m in basis.ancillary_rhos() {
            assert!((m.frobenius_norm() - 1.0).abs() < 1e-14);
        }
        let ext = extended_invariants(&fam, basis).unwrap();
        let d = det_and_inverse(&ext.omega_t, 0.0).unwrap();
        assert!(d.det.norm() > 1e-3, "det = {}", d.det);
        let d = det_and_inverse(&ext.theta_t, 0.0).unwrap();
        assert!(d.det.norm() > 1e-3, "det = {}", d.det);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(ext.omega_t[(a, b)], ext.omega[(a, b)]);
            }
        }
    }

    #[test]
    fn full_rank_completion_is_a_no_op() {
        let st = crate::gen::random_state::<f64>(2, 4, crate::gen::Seed(5)).unwrap();
        let fam = reduced_family(&eigensystem(&st, RANK_TOL).unwrap()).unwrap();
        let basis = ancillary_completion(&fam, None).unwrap();
        assert_eq!(basis.rho_subset.len(), 4);
        assert!(basis.ancillary_rhos().is_empty());
        for (a, b) in basis.rhos.iter().zip(&fam.rhos) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn dependent_supplied_set_is_reported() {
        let fam = example_family();
        let bad = AncillarySet {
            rhos: vec![M::diag(&[0.0, 1.0]), M::unit(2, 0, 1)],
            thetas: vec![M::unit(2, 0, 1), M::unit(2, 1, 0)],
        };
        // diag(0,1) = 2 (I/2) - diag(1,0) is in the span of rho_1, rho_2.
        match ancillary_completion(&fam, Some(&bad)) {
            Err(Error::DependentBasis { family: "rho", index: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let short = AncillarySet {
            rhos: vec![M::unit(2, 0, 1)],
            thetas: vec![],
        };
        assert!(matches!(
            ancillary_completion(&fam, Some(&short)),
            Err(Error::AncillaryCount { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn structure_constants_of_worked_example() {
        let ex = paper_example::<f64>();
        let fam = example_family();
        let ext = extended_invariants(&fam, ancillary_completion(&fam, Some(&ex.ancillary)).unwrap()).unwrap();
        let sc = structure_constants(&ext).unwrap();
        assert!(sc.residual < 1e-12);
        // rho_3 rho_4 = E_11 = rho_2
        for k in 0..4 {
            let expect = if k == 1 { 1.0 } else { 0.0 };
            assert!((sc.c[(2, 3, k)] - cplx(expect, 0.0)).norm() < 1e-12);
        }
        // rho_1 rho_1 = I/4 = rho_1 / 2
        for k in 0..4 {
            let expect = if k == 0 { 0.5 } else { 0.0 };
            assert!((sc.c[(0, 0, k)] - cplx(expect, 0.0)).norm() < 1e-12);
        }
        assert!(structure_constants_theta(&ext).unwrap().residual < 1e-12);
    }
}
