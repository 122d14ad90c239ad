//! Local-unitary equivalence of bipartite mixed states.
//!
//! A state on `C^N ⊗ C^N` is decomposed into its nonzero eigenpairs; each
//! eigenvector is reshaped into an `N x N` coefficient matrix, whose two
//! reductions form the families on which every invariant here is built.
//!
//! * [`invariants`] computes the trace invariants (`J`, `Ω`, `Θ`, `X`, `Y`),
//!   their extended form over a completed operator basis, and the
//!   structure constants of that basis.
//! * [`equivalence`] compares invariants to reject, and constructs and
//!   re-verifies explicit local unitaries to accept.
//! * [`gen`] provides seeded Haar unitaries and random states.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below cover the common case.
//!
//! ```
//! use lueq::{decide, gen::paper_example, DecideOptions, Verdict};
//!
//! let ex = paper_example::<f64>();
//! let verdict = decide(&ex.rho, &ex.rho_prime, &DecideOptions::default()).unwrap();
//! assert!(matches!(verdict, Verdict::Equivalent { .. }));
//! ```

pub mod equivalence;
pub mod error;
pub mod gen;
pub mod invariants;
pub mod linalg;
pub mod scalar;
pub mod state;

pub use equivalence::{
    align_ordering, certificate_compare, decide, unitary_witness, verify_witness, Certificate, Comparison,
    DecideOptions, Discriminator, Verdict, Verification, Witness, WitnessOptions,
};
pub use error::{DensityViolation, Error, Result};
pub use gen::{haar_unitary, random_local_unitary, random_state, Seed};
pub use invariants::{
    ancillary_completion, certificates, extended_certificates, structure_constants, AncillarySet, CertificateSet,
    ExtendedCertificateSet, StructureConstants, Tensor3,
};
pub use linalg::{herm_eig, ComplexMatrix};
pub use scalar::Real;
pub use state::{apply_local_unitary, eigensystem, validate_density, DensityMatrix, EigenSystem};

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type CertificateSet64 = CertificateSet<f64>;
pub type CertificateSet32 = CertificateSet<f32>;
pub type Verdict64 = Verdict<f64>;
pub type Verdict32 = Verdict<f32>;
pub type Witness64 = Witness<f64>;
pub type Witness32 = Witness<f32>;
