//! Deciding local-unitary equivalence: invariant comparison for rejection,
//! explicit witness construction for acceptance, and direct verification of
//! every positive answer.

mod compare;
mod decide;
mod ordering;
mod witness;

pub use compare::{certificate_compare, Certificate, Comparison, Discriminator};
pub use decide::{decide, verify_witness, DecideOptions, Verdict, Verification, Witness};
pub use ordering::{align_ordering, Orderings, MAX_BLOCK};
pub use witness::{unitary_witness, UnitaryMatch, WitnessFailure, WitnessOptions};
