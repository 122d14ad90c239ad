//! Trace-polynomial invariants of the reduced families, genericity, the
//! ancillary completion to a full operator basis, and structure constants.

mod ancillary;
mod certificates;
mod subset;
mod tensor;

pub use ancillary::{
    ancillary_completion, extended_certificates, extended_invariants, structure_constants,
    structure_constants_theta, structure_constants_theta_within, structure_constants_within, AncillarySet, CompletedBasis, ExtendedCertificateSet,
    StructureConstants, EXPANSION_RESIDUAL_BOUND,
};
pub use certificates::{
    block_family, certificates, certificates_for, eigen_blocks, genericity, j_moments,
    j_moments_from, omega_theta, trace_gram, triple_traces, xy_tensors, CertificateSet,
    Genericity, DEGENERACY_GAP, GENERICITY_TOL,
};
pub use subset::{independent_subset, maximal_independent_subset, INDEPENDENCE_TOL};
pub use tensor::Tensor3;
