//! Dense complex linear algebra sized for subsystem dimensions up to about 8.

mod eig;
mod lu;
mod matrix;
mod qr;

pub use eig::{herm_eig, herm_eig_with, polar_unitary, EigenDecomposition, JacobiOptions};
pub use lu::{det_and_inverse, DetInverse};
pub use matrix::{kron, mat_mul, ComplexMatrix};
pub use qr::qr_unitary;
