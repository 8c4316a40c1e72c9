//! Axiom-scheme recognition, constant specifications and Hilbert-style
//! proof verification for the axiomatic system `Σ`.

mod axioms;
mod checker;
mod cs;
mod file;

pub use axioms::{
    is_axiom_instance, normalize_diamonds, AxiomCheckError, AxiomGroup, AxiomMatch,
};
pub use checker::{
    check_inconsistency_witness, check_proof, CheckOutcome, HilbertProof, Justification,
    ProofStep, RejectReason,
};
pub use cs::{cs_contains, AxiomRange, ConstantSpec, CsPolicy, ExplicitCsError};
pub use file::{parse_proof_file, ProofFileError};
