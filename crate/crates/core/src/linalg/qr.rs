use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{phase, Real};

/// Unitary factor of a Householder QR decomposition, normalized so that the
/// diagonal of `R` is real and positive. For a standard complex Gaussian
/// input the result is Haar distributed.
pub fn qr_unitary<T: Real>(g: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            op: "qr_unitary",
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    let n = g.rows();
    let scale = g.frobenius_norm();
    let cut = T::lit(64.0) * T::epsilon() * scale;
    let mut r = g.clone();
    let mut q = ComplexMatrix::<T>::identity(n);
    let zero = Complex::new(T::zero(), T::zero());

    for k in 0..n {
        let alpha = (k..n).fold(T::zero(), |acc, i| acc + r[(i, k)].norm_sqr()).sqrt();
        if alpha <= cut || alpha == T::zero() {
            return Err(Error::RankDeficient {
                column: k,
                pivot: alpha.to_f64_lossy(),
            });
        }
        let ph = phase(r[(k, k)]);
        let mut v: Vec<Complex<T>> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] += ph * alpha;
        let vnorm2 = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        let two = T::lit(2.0);

        // r <- (I - 2 v v^dagger / |v|^2) r on rows k.., cols k..
        for j in k..n {
            let mut dot = zero;
            for (off, vi) in v.iter().enumerate() {
                dot += vi.conj() * r[(k + off, j)];
            }
            let f = dot * (two / vnorm2);
            for (off, vi) in v.iter().enumerate() {
                r[(k + off, j)] -= vi * f;
            }
        }
        // q <- q (I - 2 v v^dagger / |v|^2) on cols k..
        for i in 0..n {
            let mut dot = zero;
            for (off, vi) in v.iter().enumerate() {
                dot += q[(i, k + off)] * vi;
            }
            let f = dot * (two / vnorm2);
            for (off, vi) in v.iter().enumerate() {
                q[(i, k + off)] -= f * vi.conj();
            }
        }
    }

    for k in 0..n {
        let ph = phase(r[(k, k)]);
        for i in 0..n {
            q[(i, k)] *= ph;
        }
    }
    Ok(q)
}
