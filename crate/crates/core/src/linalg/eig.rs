//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{phase, Real};

/// Eigenvalues in descending order with unit eigenvectors as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    /// `V diag(values) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= self.values[j];
            }
        }
        &scaled * &self.vectors.adjoint()
    }
}

/// Stopping rule for the Jacobi sweeps.
#[derive(Clone, Copy, Debug)]
pub struct JacobiOptions {
    /// Converged once the off-diagonal Frobenius mass is below
    /// `off_tol * ||h||_F`.
    pub off_tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            off_tol: 1e-14,
            max_sweeps: 100,
        }
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// `tol` bounds the accepted asymmetry relative to the norm:
/// `||h - h^dagger||_F <= tol * ||h||_F`. The Hermitian part of `h` is
/// diagonalized. Eigenvectors are phase-normalized so their
/// largest-modulus entry is real and positive.
pub fn herm_eig<T: Real>(h: &ComplexMatrix<T>, tol: T) -> Result<EigenDecomposition<T>> {
    herm_eig_with(h, tol, JacobiOptions::default())
}

pub fn herm_eig_with<T: Real>(
    h: &ComplexMatrix<T>,
    tol: T,
    opts: JacobiOptions,
) -> Result<EigenDecomposition<T>> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            op: "herm_eig",
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let n = h.rows();
    let norm = h.frobenius_norm();
    let asymmetry = h.hermitian_defect();
    if asymmetry > tol * norm {
        return Err(Error::NotHermitian {
            asymmetry: asymmetry.to_f64_lossy(),
        });
    }

    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::<T>::identity(n);
    let off_tol = T::lit(opts.off_tol.max(8.0 * T::epsilon().to_f64_lossy()));
    let target = off_tol * norm;

    let mut converged = off_diagonal(&a) <= target;
    let mut sweep = 0;
    while !converged && sweep < opts.max_sweeps {
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweep += 1;
        converged = off_diagonal(&a) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence {
            off_diagonal: off_diagonal(&a).to_f64_lossy(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        normalize_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating `a[p][q]`; `a <- V^dagger a V`,
/// `v <- v V` with `V_pp = V_qq = c`, `V_pq = s e`, `V_qp = -s conj(e)`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == T::zero() {
        return;
    }
    let e = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let two = T::lit(2.0);
    let tau = (aqq - app) / (two * g);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let se = e * s;
    let se_conj = se.conj();
    let n = a.rows();

    // a <- a V
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * se_conj;
        a[(k, q)] = akp * se + akq * c;
    }
    // a <- V^dagger a
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * se;
        a[(q, k)] = apk * se_conj + aqk * c;
    }
    let zero = Complex::new(T::zero(), T::zero());
    a[(p, q)] = zero;
    a[(q, p)] = zero;
    a[(p, p)] = Complex::new(app - t * g, T::zero());
    a[(q, q)] = Complex::new(aqq + t * g, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * se_conj;
        v[(k, q)] = vkp * se + vkq * c;
    }
}

/// Rotate a vector so its largest-modulus entry (first on ties) is real positive.
fn normalize_phase<T: Real>(col: &mut [Complex<T>]) {
    let mut best = 0;
    let mut best_abs = T::neg_infinity();
    for (i, z) in col.iter().enumerate() {
        let r = z.norm();
        if r > best_abs {
            best_abs = r;
            best = i;
        }
    }
    let ph = phase(col[best]).conj();
    for z in col.iter_mut() {
        *z *= ph;
    }
    col[best] = Complex::new(col[best].norm(), T::zero());
}

/// Unitary polar factor of a square matrix: the unitary `Q` maximizing
/// `Re Tr(Q^dagger m)`. Directions with singular value below
/// `rel_cut * ||m||_F` are completed arbitrarily (but deterministically).
pub fn polar_unitary<T: Real>(m: &ComplexMatrix<T>, rel_cut: T) -> Result<ComplexMatrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "polar_unitary",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let gram = &m.adjoint() * m;
    let eig = herm_eig(&gram, T::tol(1e-8))?;
    let right = &eig.vectors;
    let image = m * right;
    let cut = rel_cut * m.frobenius_norm();

    // Left singular vectors for the significant directions, then completion.
    let mut left: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    let mut kept = Vec::with_capacity(n);
    for j in 0..n {
        let col = image.column(j);
        let sigma = col.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if sigma > cut {
            if let Some(u) = orthonormal_remainder(&left, col) {
                left.push(u);
                kept.push(j);
            }
        }
    }
    let mut pairs: Vec<(usize, Vec<Complex<T>>)> = kept.iter().copied().zip(left.iter().cloned()).collect();
    let missing: Vec<usize> = (0..n).filter(|j| !kept.contains(j)).collect();
    let mut basis_idx = 0;
    for j in missing {
        loop {
            let mut e = vec![Complex::new(T::zero(), T::zero()); n];
            e[basis_idx % n] = Complex::new(T::one(), T::zero());
            basis_idx += 1;
            if let Some(u) = orthonormal_remainder(&left, e) {
                left.push(u.clone());
                pairs.push((j, u));
                break;
            }
            if basis_idx > 2 * n {
                return Err(Error::RankDeficient {
                    column: j,
                    pivot: 0.0,
                });
            }
        }
    }
    let mut u_mat = ComplexMatrix::zeros(n, n);
    for (j, col) in pairs {
        u_mat.set_column(j, &col);
    }
    Ok(&u_mat * &right.adjoint())
}

/// Twice-orthogonalized remainder of `v` against an orthonormal set,
/// normalized; `None` when it vanishes.
fn orthonormal_remainder<T: Real>(basis: &[Vec<Complex<T>>], mut v: Vec<Complex<T>>) -> Option<Vec<Complex<T>>> {
    let start = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    for _ in 0..2 {
        for b in basis {
            let proj = b
                .iter()
                .zip(&v)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
    }
    let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    if norm <= T::lit(1e-3) * start || norm == T::zero() {
        return None;
    }
    Some(v.into_iter().map(|z| z / norm).collect())
}
