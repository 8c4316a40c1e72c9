//! Verification of Hilbert-style proofs.
//!
//! A proof is a numbered sequence of formulas, each an axiom instance,
//! a constant-specification member, or obtained from earlier lines by
//! modus ponens, K-necessitation, the `R4` rule, or (when enabled)
//! necessitation for `[]` and `[j]`.

use super::axioms::{flatten_and, flatten_or, is_axiom_instance, normalize_diamonds, AxiomGroup};
use super::cs::{cs_contains, ConstantSpec};
use crate::syntax::{Formula, ProofTerm};
use std::fmt;

/// Justification record of a proof step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom(AxiomGroup),
    /// `MP(i, j)`: line `i` is `B -> C`, line `j` is `B`, this line is `C`.
    MP(usize, usize),
    /// `KNec(i)`: this line is `K` applied to line `i`.
    KNec(usize),
    /// Constant-specification member.
    CS,
    /// `R4(i)`: from `KA -> (~[]Et1 | … | ~[]Etn)` infer
    /// `KA -> (~Et1 | … | ~Etn)`.
    R4(usize),
    /// `BoxNec(i)`: this line is `[]` applied to line `i`.
    BoxNec(usize),
    /// `AgentNec(j, i)`: this line is `[j]` applied to line `i`.
    AgentNec(String, usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(g) => write!(f, "{g}"),
            Justification::MP(i, j) => write!(f, "MP {i} {j}"),
            Justification::KNec(i) => write!(f, "KNEC {i}"),
            Justification::CS => write!(f, "CS"),
            Justification::R4(i) => write!(f, "R4 {i}"),
            Justification::BoxNec(i) => write!(f, "BOXNEC {i}"),
            Justification::AgentNec(j, i) => write!(f, "JNEC {j} {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub index: usize,
    pub formula: Formula,
    pub justification: Justification,
}

/// A Hilbert proof plus its checking options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertProof {
    pub steps: Vec<ProofStep>,
    pub nec_enabled: bool,
    pub cs: ConstantSpec,
}

impl HilbertProof {
    pub fn new(steps: Vec<ProofStep>) -> Self {
        HilbertProof { steps, nec_enabled: true, cs: ConstantSpec::axiomatic() }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }
}

/// Machine-readable rejection cause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    NonContiguousIndex { expected: usize, found: usize },
    ProveModalityInProof,
    NotAxiomInstance(AxiomGroup),
    SkeletonTooLarge,
    ForwardReference { cited: usize },
    BadModusPonens,
    BadKNecessitation,
    NecessitationDisabled,
    BadBoxNecessitation,
    BadAgentNecessitation,
    NotInConstantSpec,
    BadR4,
}

impl RejectReason {
    pub fn code(&self) -> &'static str {
        match self {
            RejectReason::NonContiguousIndex { .. } => "non-contiguous-index",
            RejectReason::ProveModalityInProof => "prove-modality-in-proof",
            RejectReason::NotAxiomInstance(_) => "not-axiom-instance",
            RejectReason::SkeletonTooLarge => "skeleton-too-large",
            RejectReason::ForwardReference { .. } => "forward-reference",
            RejectReason::BadModusPonens => "bad-modus-ponens",
            RejectReason::BadKNecessitation => "bad-k-necessitation",
            RejectReason::NecessitationDisabled => "necessitation-disabled",
            RejectReason::BadBoxNecessitation => "bad-box-necessitation",
            RejectReason::BadAgentNecessitation => "bad-agent-necessitation",
            RejectReason::NotInConstantSpec => "not-in-constant-spec",
            RejectReason::BadR4 => "bad-r4",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::NonContiguousIndex { expected, found } => {
                write!(f, "expected step index {expected}, found {found}")
            }
            RejectReason::ProveModalityInProof => {
                write!(f, "Prove/Proven are defined modalities and may not appear in proofs")
            }
            RejectReason::NotAxiomInstance(g) => write!(f, "not an instance of {g}"),
            RejectReason::SkeletonTooLarge => {
                write!(f, "boolean skeleton exceeds the 20-letter limit")
            }
            RejectReason::ForwardReference { cited } => {
                write!(f, "cites step {cited}, which is not an earlier step")
            }
            RejectReason::BadModusPonens => {
                write!(f, "cited steps do not fit modus ponens")
            }
            RejectReason::BadKNecessitation => {
                write!(f, "formula is not K applied to the cited step")
            }
            RejectReason::NecessitationDisabled => {
                write!(f, "[]/[j] necessitation is disabled")
            }
            RejectReason::BadBoxNecessitation => {
                write!(f, "formula is not [] applied to the cited step")
            }
            RejectReason::BadAgentNecessitation => {
                write!(f, "formula is not [j] applied to the cited step")
            }
            RejectReason::NotInConstantSpec => {
                write!(f, "formula is not in the constant specification")
            }
            RejectReason::BadR4 => {
                write!(f, "premise/conclusion pair does not fit R4")
            }
        }
    }
}

/// Result of checking a proof; rejection is data, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Accepted { steps: usize },
    Rejected { index: usize, reason: RejectReason },
}

impl CheckOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CheckOutcome::Accepted { .. })
    }
}

/// Checks every step of the proof; returns the first failure, if any.
pub fn check_proof(proof: &HilbertProof) -> CheckOutcome {
    for (pos, step) in proof.steps.iter().enumerate() {
        let expected = pos + 1;
        if step.index != expected {
            return CheckOutcome::Rejected {
                index: step.index,
                reason: RejectReason::NonContiguousIndex { expected, found: step.index },
            };
        }
        if let Err(reason) = check_step(proof, pos) {
            return CheckOutcome::Rejected { index: step.index, reason };
        }
    }
    CheckOutcome::Accepted { steps: proof.steps.len() }
}

fn cited<'a>(proof: &'a HilbertProof, pos: usize, cite: usize) -> Result<&'a Formula, RejectReason> {
    if cite == 0 || cite > pos {
        return Err(RejectReason::ForwardReference { cited: cite });
    }
    Ok(&proof.steps[cite - 1].formula)
}

fn check_step(proof: &HilbertProof, pos: usize) -> Result<(), RejectReason> {
    let step = &proof.steps[pos];
    if step.formula.mentions_prove_modalities() {
        return Err(RejectReason::ProveModalityInProof);
    }
    match &step.justification {
        Justification::Axiom(group) => match is_axiom_instance(&step.formula, *group) {
            Ok(Some(_)) => Ok(()),
            Ok(None) => Err(RejectReason::NotAxiomInstance(*group)),
            Err(_) => Err(RejectReason::SkeletonTooLarge),
        },
        Justification::MP(i, j) => {
            let implication = normalize_diamonds(cited(proof, pos, *i)?);
            let premise = normalize_diamonds(cited(proof, pos, *j)?);
            let conclusion = normalize_diamonds(&step.formula);
            if implication == Formula::implies(premise, conclusion) {
                Ok(())
            } else {
                Err(RejectReason::BadModusPonens)
            }
        }
        Justification::KNec(i) => {
            let premise = cited(proof, pos, *i)?;
            if step.formula == Formula::k(premise.clone()) {
                Ok(())
            } else {
                Err(RejectReason::BadKNecessitation)
            }
        }
        Justification::BoxNec(i) => {
            if !proof.nec_enabled {
                return Err(RejectReason::NecessitationDisabled);
            }
            let premise = cited(proof, pos, *i)?;
            if step.formula == Formula::boxed(premise.clone()) {
                Ok(())
            } else {
                Err(RejectReason::BadBoxNecessitation)
            }
        }
        Justification::AgentNec(agent, i) => {
            if !proof.nec_enabled {
                return Err(RejectReason::NecessitationDisabled);
            }
            let premise = cited(proof, pos, *i)?;
            if step.formula == Formula::stit(agent.clone(), premise.clone()) {
                Ok(())
            } else {
                Err(RejectReason::BadAgentNecessitation)
            }
        }
        Justification::CS => {
            if cs_contains(&proof.cs, &step.formula) {
                Ok(())
            } else {
                Err(RejectReason::NotInConstantSpec)
            }
        }
        Justification::R4(i) => {
            let premise = normalize_diamonds(cited(proof, pos, *i)?);
            let current = normalize_diamonds(&step.formula);
            check_r4(&premise, &current)
        }
    }
}

// Premise: K A -> (~[]Et1 | … | ~[]Etn); conclusion: K A -> (~Et1 | … |
// ~Etn), n >= 1, same A, same term sequence, any disjunct association.
fn check_r4(premise: &Formula, current: &Formula) -> Result<(), RejectReason> {
    let (Formula::Implies(p_lhs, p_rhs), Formula::Implies(c_lhs, c_rhs)) = (premise, current)
    else {
        return Err(RejectReason::BadR4);
    };
    let (Formula::K(_), Formula::K(_)) = (p_lhs.as_ref(), c_lhs.as_ref()) else {
        return Err(RejectReason::BadR4);
    };
    if p_lhs != c_lhs {
        return Err(RejectReason::BadR4);
    }
    let premise_terms = negated_presentations(p_rhs, true).ok_or(RejectReason::BadR4)?;
    let current_terms = negated_presentations(c_rhs, false).ok_or(RejectReason::BadR4)?;
    if premise_terms == current_terms {
        Ok(())
    } else {
        Err(RejectReason::BadR4)
    }
}

// Reads a disjunction of ~[]Et (boxed = true) or ~Et (boxed = false)
// and returns the term sequence.
fn negated_presentations(f: &Formula, boxed: bool) -> Option<Vec<&ProofTerm>> {
    let mut terms = Vec::new();
    for part in flatten_or(f) {
        let Formula::Not(inner) = part else {
            return None;
        };
        let body = if boxed {
            match inner.as_ref() {
                Formula::Box(b) => b.as_ref(),
                _ => return None,
            }
        } else {
            inner.as_ref()
        };
        let Formula::E(t) = body else {
            return None;
        };
        terms.push(t);
    }
    Some(terms)
}

/// Checks that an accepted proof witnesses the inconsistency of `gamma`:
/// its last line must be `(A1 & … & An) -> false` with every conjunct a
/// member of `gamma`, in any association.
pub fn check_inconsistency_witness(gamma: &[Formula], proof: &HilbertProof) -> bool {
    if !check_proof(proof).is_accepted() {
        return false;
    }
    let Some(Formula::Implies(lhs, rhs)) = proof.conclusion() else {
        return false;
    };
    if rhs.as_ref() != &Formula::False {
        return false;
    }
    flatten_and(lhs).iter().all(|conjunct| gamma.contains(conjunct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text, None).unwrap()
    }

    fn proof(lines: &[(&str, Justification)]) -> HilbertProof {
        let steps = lines
            .iter()
            .enumerate()
            .map(|(i, (text, just))| ProofStep {
                index: i + 1,
                formula: f(text),
                justification: just.clone(),
            })
            .collect();
        HilbertProof::new(steps)
    }

    #[test]
    fn one_line_tautology_proof() {
        let p = proof(&[("p -> p", Justification::Axiom(AxiomGroup::A0))]);
        assert_eq!(check_proof(&p), CheckOutcome::Accepted { steps: 1 });
    }

    #[test]
    fn non_tautology_rejected_at_line_one() {
        let p = proof(&[("K p -> ~[]E x", Justification::Axiom(AxiomGroup::A0))]);
        assert_eq!(
            check_proof(&p),
            CheckOutcome::Rejected {
                index: 1,
                reason: RejectReason::NotAxiomInstance(AxiomGroup::A0)
            }
        );
    }

    #[test]
    fn r4_single_disjunct() {
        // Line 1 stands in for a derived premise; the harness justifies
        // it as a (rejected) axiom but the R4 step itself must check.
        let p = proof(&[
            ("K p -> ~[]E x", Justification::Axiom(AxiomGroup::A0)),
            ("K p -> ~E x", Justification::R4(1)),
        ]);
        assert!(check_step_ok(&p, 1));
    }

    #[test]
    fn r4_multi_disjunct_requires_same_order() {
        let p = proof(&[
            ("K p -> (~[]E x | ~[]E y)", Justification::Axiom(AxiomGroup::A0)),
            ("K p -> (~E x | ~E y)", Justification::R4(1)),
            ("K p -> (~E y | ~E x)", Justification::R4(1)),
        ]);
        assert!(check_step_ok(&p, 1));
        assert!(!check_step_ok(&p, 2));
    }

    fn check_step_ok(p: &HilbertProof, pos: usize) -> bool {
        super::check_step(p, pos).is_ok()
    }

    #[test]
    fn modus_ponens_chains() {
        let p = proof(&[
            ("p -> (p | q)", Justification::Axiom(AxiomGroup::A0)),
            ("(p -> (p | q)) -> ((p | q -> q | p) -> (p -> q | p))", Justification::Axiom(AxiomGroup::A0)),
            ("(p | q -> q | p) -> (p -> q | p)", Justification::MP(2, 1)),
            ("p | q -> q | p", Justification::Axiom(AxiomGroup::A0)),
            ("p -> q | p", Justification::MP(3, 4)),
        ]);
        assert_eq!(check_proof(&p), CheckOutcome::Accepted { steps: 5 });
    }

    #[test]
    fn necessitation_obeys_the_switch() {
        let mut p = proof(&[
            ("p -> p", Justification::Axiom(AxiomGroup::A0)),
            ("K(p -> p)", Justification::KNec(1)),
            ("[](p -> p)", Justification::BoxNec(1)),
            ("[j1](p -> p)", Justification::AgentNec("j1".into(), 1)),
        ]);
        assert!(check_proof(&p).is_accepted());
        p.nec_enabled = false;
        assert_eq!(
            check_proof(&p),
            CheckOutcome::Rejected { index: 3, reason: RejectReason::NecessitationDisabled }
        );
    }

    #[test]
    fn constant_spec_steps() {
        let mut p = proof(&[("c:([]p -> p)", Justification::CS)]);
        assert!(check_proof(&p).is_accepted());
        p.cs = ConstantSpec::empty();
        assert_eq!(
            check_proof(&p),
            CheckOutcome::Rejected { index: 1, reason: RejectReason::NotInConstantSpec }
        );
    }

    #[test]
    fn prove_modalities_are_rejected() {
        let p = proof(&[("Prove(j1, x, p) -> Prove(j1, x, p)", Justification::Axiom(AxiomGroup::A0))]);
        assert_eq!(
            check_proof(&p),
            CheckOutcome::Rejected { index: 1, reason: RejectReason::ProveModalityInProof }
        );
    }

    #[test]
    fn forward_and_self_references_rejected() {
        let p = proof(&[
            ("p -> p", Justification::MP(1, 1)),
        ]);
        assert_eq!(
            check_proof(&p),
            CheckOutcome::Rejected { index: 1, reason: RejectReason::ForwardReference { cited: 1 } }
        );
    }

    #[test]
    fn appending_steps_preserves_earlier_acceptance() {
        let mut p = proof(&[
            ("p -> p", Justification::Axiom(AxiomGroup::A0)),
            ("K(p -> p)", Justification::KNec(1)),
        ]);
        assert!(check_proof(&p).is_accepted());
        p.steps.push(ProofStep {
            index: 3,
            formula: f("q -> q"),
            justification: Justification::Axiom(AxiomGroup::A0),
        });
        assert!(check_proof(&p).is_accepted());
    }

    #[test]
    fn inconsistency_witnesses() {
        let witness = proof(&[("(p & ~p) -> false", Justification::Axiom(AxiomGroup::A0))]);
        assert!(check_inconsistency_witness(&[f("p"), f("~p")], &witness));
        assert!(!check_inconsistency_witness(&[f("p")], &witness));

        let seeded = proof(&[("(q & q) -> false", Justification::Axiom(AxiomGroup::A0))]);
        // Not provable, hence not accepted, hence no witness.
        assert!(!check_inconsistency_witness(&[f("q")], &seeded));
    }

    #[test]
    fn mp_works_modulo_diamond_normalization() {
        let p = proof(&[
            ("<>p -> ~[]~p", Justification::Axiom(AxiomGroup::A0)),
            ("<>p", Justification::Axiom(AxiomGroup::A0)),
            ("~[]~p", Justification::MP(1, 2)),
        ]);
        // Step 2 is not an axiom, but the MP step itself must check.
        assert!(check_step_ok(&p, 2));
    }
}
