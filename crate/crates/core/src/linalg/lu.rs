use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Determinant together with the inverse, which is withheld when
/// `|det| <= tol`.
#[derive(Clone, Debug)]
pub struct DetInverse<T> {
    pub det: Complex<T>,
    pub inverse: Option<ComplexMatrix<T>>,
}

impl<T> DetInverse<T> {
    pub fn is_singular(&self) -> bool {
        self.inverse.is_none()
    }
}

/// Determinant and inverse by LU factorization with partial pivoting.
pub fn det_and_inverse<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<DetInverse<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "det_and_inverse",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let zero = Complex::new(T::zero(), T::zero());
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut det = Complex::new(T::one(), T::zero());

    for k in 0..n {
        let p = (k..n)
            .max_by(|&a, &b| lu[(a, k)].norm().partial_cmp(&lu[(b, k)].norm()).unwrap())
            .unwrap();
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            det = -det;
        }
        let pivot = lu[(k, k)];
        det *= pivot;
        if pivot == zero {
            return Ok(DetInverse { det: zero, inverse: None });
        }
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
        }
    }

    if det.norm() <= tol {
        return Ok(DetInverse { det, inverse: None });
    }

    let mut inv = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        // Solve L U x = P e_col.
        let mut x: Vec<Complex<T>> = perm
            .iter()
            .map(|&p| if p == col { Complex::new(T::one(), T::zero()) } else { zero })
            .collect();
        for i in 0..n {
            for k in 0..i {
                let t = x[k];
                x[i] -= lu[(i, k)] * t;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = x[k];
                x[i] -= lu[(i, k)] * t;
            }
            x[i] /= lu[(i, i)];
        }
        inv.set_column(col, &x);
    }
    Ok(DetInverse {
        det,
        inverse: Some(inv),
    })
}
