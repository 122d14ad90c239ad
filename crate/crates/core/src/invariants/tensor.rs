use std::ops::Index;

use num_complex::Complex;

use crate::scalar::Real;

/// Cubic `n x n x n` complex tensor, row-major in `(i, j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Tensor3<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Entries with their index triples, in lexicographic order.
    pub fn iter_indexed(&self) -> impl Iterator<Item = ((usize, usize, usize), Complex<T>)> + '_ {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .map(move |(p, &z)| ((p / (n * n), (p / n) % n, p % n), z))
    }
}

impl<T> Index<(usize, usize, usize)> for Tensor3<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &Complex<T> {
        &self.data[(i * self.n + j) * self.n + k]
    }
}
