//! Toolkit for the stit logic of justification announcements (JA-STIT).
//!
//! The crate is organised around five subsystems:
//!
//! * [`syntax`] — proof polynomials, formulas, a concrete grammar with
//!   parser and minimal-parenthesis printer, and subformula/subterm
//!   closure computation.
//! * [`model`] — finite branching-time models with choice partitions,
//!   presented-proof sets, epistemic accessibility and an evidence
//!   function; loading from a JSON document format and a validator for
//!   every semantic constraint.
//! * [`semantics`] — the satisfaction relation at moment/history pairs,
//!   per-model validity, and expansion of the defined proving modalities.
//! * [`proofs`] — axiom-scheme recognition, constant specifications, and
//!   a checker for Hilbert-style proofs in the system `Σ`.
//! * [`search`] — bounded exhaustive enumeration of valid models,
//!   seeded random model generation, and witness/countermodel search.

pub mod model;
pub mod proofs;
pub mod search;
pub mod semantics;
pub mod syntax;
