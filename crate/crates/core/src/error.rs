use thiserror::Error;

/// Which invariant of a density matrix failed validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityViolation {
    #[error("shape {rows}x{cols} is not {expected}x{expected}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("not Hermitian: ||m - m^dagger||_F = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },
    #[error("not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NegativeEigenvalue { eigenvalue: f64 },
    #[error("trace is {re} + {im}i, expected 1")]
    Trace { re: f64, im: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: matrix must be square, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix has {rows}x{cols} shape but {len} entries")]
    BadLength { rows: usize, cols: usize, len: usize },
    #[error("matrix dimensions must be positive")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: ||h - h^dagger||_F = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },
    #[error("Jacobi iteration did not converge: off-diagonal mass {off_diagonal:e}")]
    NoConvergence { off_diagonal: f64 },
    #[error("matrix is rank deficient at column {column} (pivot {pivot:e})")]
    RankDeficient { column: usize, pivot: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(#[from] DensityViolation),
    #[error("vector of length {len} cannot be unfolded for subsystem dimension {dim}")]
    BadVectorLength { len: usize, dim: usize },
    #[error("vector is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },
    #[error("{which} is not unitary: ||U^dagger U - I||_F = {defect:e}")]
    NotUnitary { which: &'static str, defect: f64 },
    #[error("trace products have imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },
    #[error("expected {expected} ancillary matrices, got {got}")]
    AncillaryCount { expected: usize, got: usize },
    #[error("{family} basis is dependent: matrix {index} lies in the span of the preceding ones (remainder {remainder:e})")]
    DependentBasis {
        family: &'static str,
        index: usize,
        remainder: f64,
    },
    #[error("Gram matrix is singular (|det| = {det:e})")]
    Singular { det: f64 },
    #[error("structure-constant expansion residual {residual:e} exceeds {bound:e}")]
    ExpansionResidual { residual: f64, bound: f64 },
    #[error("rank {rank} outside 1..={max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("degenerate eigenvalue block of size {size} exceeds the cap {cap}")]
    BlockTooLarge { size: usize, cap: usize },
    #[error("subsystem dimensions differ: {left} vs {right}")]
    SubsystemMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
