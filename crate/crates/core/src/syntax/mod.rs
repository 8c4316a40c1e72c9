//! Abstract syntax, concrete grammar, parser and printer for proof
//! polynomials and formulas.
//!
//! Identifier classes follow fixed letter conventions: proof variables
//! start with `x y z w u`, proof constants with `a b c d`, atoms with
//! `p q r s`, each optionally followed by a decimal suffix. Agent names
//! are arbitrary identifiers.

mod closure;
mod lexer;
mod parser;
mod printer;

pub use closure::closure_universe;
pub use parser::{parse_formula, parse_term, ParseError};
pub use printer::{print_formula, print_term};

use std::fmt;
use thiserror::Error;

/// A proof polynomial: variables and constants closed under sum,
/// application and the proof checker.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProofTerm {
    Var(String),
    Const(String),
    Sum(Box<ProofTerm>, Box<ProofTerm>),
    App(Box<ProofTerm>, Box<ProofTerm>),
    Check(Box<ProofTerm>),
}

impl ProofTerm {
    pub fn var(name: impl Into<String>) -> Self {
        ProofTerm::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        ProofTerm::Const(name.into())
    }

    pub fn sum(left: ProofTerm, right: ProofTerm) -> Self {
        ProofTerm::Sum(Box::new(left), Box::new(right))
    }

    pub fn app(left: ProofTerm, right: ProofTerm) -> Self {
        ProofTerm::App(Box::new(left), Box::new(right))
    }

    pub fn check(inner: ProofTerm) -> Self {
        ProofTerm::Check(Box::new(inner))
    }

    /// True for proof constants, the terms a constant specification can
    /// license evidence for.
    pub fn is_const(&self) -> bool {
        matches!(self, ProofTerm::Const(_))
    }
}

/// A formula of the language. `Or`, `Implies`, `False`, `Diamond`,
/// `Prove` and `Proven` are first-class derived nodes; the primitive
/// core is atoms, `And`, `Not`, `Stit`, `Box`, `Proves`, `K` and `E`.
/// Equality is plain structural equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `[j]A` — agent `j` sees to it that `A`.
    Stit(String, Box<Formula>),
    /// `[]A` — historical necessity.
    Box(Box<Formula>),
    /// `<>A` — dual of historical necessity.
    Diamond(Box<Formula>),
    /// `KA` — the strong epistemic modality.
    K(Box<Formula>),
    /// `t:A` — `t` proves `A`.
    Proves(ProofTerm, Box<Formula>),
    /// `Et` — `t` is presented to the community.
    E(ProofTerm),
    /// `Prove(j, t, A)` — `j` presently presents proof `t` of `A`.
    Prove(String, ProofTerm, Box<Formula>),
    /// `Proven(t, A)` — `t` has settled as a proof of `A`.
    Proven(ProofTerm, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn stit(agent: impl Into<String>, f: Formula) -> Self {
        Formula::Stit(agent.into(), Box::new(f))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn diamond(f: Formula) -> Self {
        Formula::Diamond(Box::new(f))
    }

    pub fn k(f: Formula) -> Self {
        Formula::K(Box::new(f))
    }

    pub fn proves(t: ProofTerm, f: Formula) -> Self {
        Formula::Proves(t, Box::new(f))
    }

    pub fn e(t: ProofTerm) -> Self {
        Formula::E(t)
    }

    pub fn prove(agent: impl Into<String>, t: ProofTerm, f: Formula) -> Self {
        Formula::Prove(agent.into(), t, Box::new(f))
    }

    pub fn proven(t: ProofTerm, f: Formula) -> Self {
        Formula::Proven(t, Box::new(f))
    }

    /// Direct child formulas, in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::False | Formula::E(_) => vec![],
            Formula::Not(f)
            | Formula::Stit(_, f)
            | Formula::Box(f)
            | Formula::Diamond(f)
            | Formula::K(f)
            | Formula::Proves(_, f)
            | Formula::Prove(_, _, f)
            | Formula::Proven(_, f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => vec![l, r],
        }
    }

    /// True if the formula contains a `Prove` or `Proven` node. The
    /// proof checker works over the core language and rejects these.
    pub fn mentions_prove_modalities(&self) -> bool {
        match self {
            Formula::Prove(..) | Formula::Proven(..) => true,
            _ => self.children().iter().any(|c| c.mentions_prove_modalities()),
        }
    }
}

/// Letter class of an identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentClass {
    Atom,
    ProofVar,
    ProofConst,
    Other,
}

/// Classifies an identifier: a single class letter plus an optional
/// decimal suffix. Anything else (including agent names) is `Other`.
pub fn classify_ident(name: &str) -> IdentClass {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return IdentClass::Other;
    };
    if !chars.all(|c| c.is_ascii_digit()) {
        return IdentClass::Other;
    }
    match first {
        'p' | 'q' | 'r' | 's' => IdentClass::Atom,
        'x' | 'y' | 'z' | 'w' | 'u' => IdentClass::ProofVar,
        'a' | 'b' | 'c' | 'd' => IdentClass::ProofConst,
        _ => IdentClass::Other,
    }
}

/// Error building an [`AgentSet`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgentSetError {
    #[error("agent set must be non-empty")]
    Empty,
    #[error("duplicate agent `{0}`")]
    Duplicate(String),
}

/// A finite, non-empty, ordered set of distinct agent identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentSet(Vec<String>);

impl AgentSet {
    pub fn new<I, S>(names: I) -> Result<Self, AgentSetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(AgentSetError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(AgentSetError::Duplicate(name.clone()));
            }
        }
        Ok(AgentSet(names))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.iter().any(|a| a == name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|a| a == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.0[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl fmt::Display for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ident_classes() {
        assert_eq!(classify_ident("p"), IdentClass::Atom);
        assert_eq!(classify_ident("q12"), IdentClass::Atom);
        assert_eq!(classify_ident("x"), IdentClass::ProofVar);
        assert_eq!(classify_ident("u3"), IdentClass::ProofVar);
        assert_eq!(classify_ident("c0"), IdentClass::ProofConst);
        assert_eq!(classify_ident("j1"), IdentClass::Other);
        assert_eq!(classify_ident("px"), IdentClass::Other);
        assert_eq!(classify_ident(""), IdentClass::Other);
    }

    #[test]
    fn agent_set_rejects_duplicates_and_empty() {
        assert_eq!(AgentSet::new(Vec::<String>::new()), Err(AgentSetError::Empty));
        assert_eq!(
            AgentSet::new(["j1", "j1"]),
            Err(AgentSetError::Duplicate("j1".into()))
        );
        let ag = AgentSet::new(["j1", "j2"]).unwrap();
        assert_eq!(ag.index_of("j2"), Some(1));
        assert!(ag.contains("j1"));
        assert!(!ag.contains("j3"));
    }
}
