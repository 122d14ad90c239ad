use std::fmt;

use num_complex::Complex;

use crate::invariants::CertificateSet;
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Which invariant separated two states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// Spectral moment `Tr(rho^s)`.
    J,
    /// Number of nonzero eigenvalues.
    Rank,
    /// An individual eigenvalue, or the grouping of equal eigenvalues.
    Spectrum,
    Omega,
    Theta,
    X,
    Y,
}

impl Certificate {
    pub fn name(self) -> &'static str {
        match self {
            Certificate::J => "J",
            Certificate::Rank => "rank",
            Certificate::Spectrum => "spectrum",
            Certificate::Omega => "Omega",
            Certificate::Theta => "Theta",
            Certificate::X => "X",
            Certificate::Y => "Y",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An invariant entry whose values differ between two states. Indices are
/// 0-based; for `J` the single index is `s - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Discriminator<T> {
    pub certificate: Certificate,
    pub indices: Vec<usize>,
    pub a: Complex<T>,
    pub b: Complex<T>,
}

impl<T: Real> fmt::Display for Discriminator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}({}): {} vs {}", self.certificate, idx.join(","), self.a, self.b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Comparison<T> {
    Match,
    Mismatch(Discriminator<T>),
}

impl<T> Comparison<T> {
    pub fn is_match(&self) -> bool {
        matches!(self, Comparison::Match)
    }
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn count<T: Real>(n: usize) -> Complex<T> {
    real(T::from_usize(n).unwrap())
}

fn matrix_mismatch<T: Real>(
    which: Certificate,
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    tol: T,
) -> Option<Discriminator<T>> {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if (a[(i, j)] - b[(i, j)]).norm() > tol {
                return Some(Discriminator {
                    certificate: which,
                    indices: vec![i, j],
                    a: a[(i, j)],
                    b: b[(i, j)],
                });
            }
        }
    }
    None
}

/// Compare two certificate sets entry by entry in the order J, Ω, Θ, X, Y
/// (row-major / lexicographic within each) and report the first entry
/// differing by more than `tol`.
pub fn certificate_compare<T: Real>(a: &CertificateSet<T>, b: &CertificateSet<T>, tol: T) -> Comparison<T> {
    for (s, (&ja, &jb)) in a.j.iter().zip(&b.j).enumerate() {
        if (ja - jb).abs() > tol {
            return Comparison::Mismatch(Discriminator {
                certificate: Certificate::J,
                indices: vec![s],
                a: real(ja),
                b: real(jb),
            });
        }
    }
    let rank_a: usize = a.block_sizes.iter().sum();
    let rank_b: usize = b.block_sizes.iter().sum();
    if a.j.len() != b.j.len() || rank_a != rank_b {
        return Comparison::Mismatch(Discriminator {
            certificate: Certificate::Rank,
            indices: vec![],
            a: count(rank_a),
            b: count(rank_b),
        });
    }
    if a.block_sizes != b.block_sizes {
        let i = a
            .block_sizes
            .iter()
            .zip(&b.block_sizes)
            .position(|(x, y)| x != y)
            .unwrap_or(a.block_sizes.len().min(b.block_sizes.len()));
        return Comparison::Mismatch(Discriminator {
            certificate: Certificate::Spectrum,
            indices: vec![i],
            a: count(a.block_sizes.get(i).copied().unwrap_or(0)),
            b: count(b.block_sizes.get(i).copied().unwrap_or(0)),
        });
    }
    if let Some(d) = matrix_mismatch(Certificate::Omega, &a.omega, &b.omega, tol)
        .or_else(|| matrix_mismatch(Certificate::Theta, &a.theta, &b.theta, tol))
    {
        return Comparison::Mismatch(d);
    }
    for (which, ta, tb) in [(Certificate::X, &a.x, &b.x), (Certificate::Y, &a.y, &b.y)] {
        for ((i, j, k), va) in ta.iter_indexed() {
            let vb = tb[(i, j, k)];
            if (va - vb).norm() > tol {
                return Comparison::Mismatch(Discriminator {
                    certificate: which,
                    indices: vec![i, j, k],
                    a: va,
                    b: vb,
                });
            }
        }
    }
    Comparison::Match
}
