//! Constant specifications: the sets of constant-prefixed axiom
//! instances a proof may introduce outright, and that a normal model's
//! evidence function implicitly contains.

use super::axioms::{any_axiom_instance, normalize_diamonds};
use crate::syntax::{Formula, ProofTerm};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Which scheme groups count as axioms when recognising specification
/// members. `R3` ranges over `A0`–`A9` while the normality condition is
/// stated for `A1`–`A9`; the wider reading is the default and the
/// narrower one stays selectable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AxiomRange {
    #[default]
    A0ToA9,
    A1ToA9,
}

impl AxiomRange {
    fn includes_a0(self) -> bool {
        matches!(self, AxiomRange::A0ToA9)
    }
}

impl fmt::Display for AxiomRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomRange::A0ToA9 => write!(f, "A0-A9"),
            AxiomRange::A1ToA9 => write!(f, "A1-A9"),
        }
    }
}

impl FromStr for AxiomRange {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "A0-A9" => Ok(AxiomRange::A0ToA9),
            "A1-A9" => Ok(AxiomRange::A1ToA9),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplicitCsError {
    #[error("`{0}` is not a chain of constant-prefixed formulas")]
    NotConstantPrefixed(String),
    #[error("body of `{0}` is not an axiom instance")]
    BodyNotAxiomInstance(String),
    #[error("`{0}` is in the list but its tail `{1}` is not (the list must be downward closed)")]
    NotDownwardClosed(String, String),
}

/// Membership policy for a constant specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CsPolicy {
    /// No members; the introduction rule is disabled.
    Empty,
    /// `c:A` for every constant `c` and axiom instance `A`.
    AxiomaticDepth1,
    /// `c_n:…:c_1:A`, any depth of constant prefixes over an axiom
    /// instance.
    IteratedAxiomatic,
    /// A finite, downward-closed list, membership modulo
    /// diamond-normalized structural equality.
    ExplicitList(BTreeSet<Formula>),
}

/// A constant specification: a membership policy plus the axiom range
/// its instance checks use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantSpec {
    pub policy: CsPolicy,
    pub range: AxiomRange,
}

impl ConstantSpec {
    pub fn empty() -> Self {
        ConstantSpec { policy: CsPolicy::Empty, range: AxiomRange::default() }
    }

    pub fn axiomatic() -> Self {
        ConstantSpec { policy: CsPolicy::AxiomaticDepth1, range: AxiomRange::default() }
    }

    pub fn iterated() -> Self {
        ConstantSpec { policy: CsPolicy::IteratedAxiomatic, range: AxiomRange::default() }
    }

    pub fn with_range(mut self, range: AxiomRange) -> Self {
        self.range = range;
        self
    }

    /// Builds an explicit-list specification, verifying the member shape
    /// `c_n:…:c_1:A` and downward closure.
    pub fn explicit<I>(members: I, range: AxiomRange) -> Result<Self, ExplicitCsError>
    where
        I: IntoIterator<Item = Formula>,
    {
        let normalized: BTreeSet<Formula> =
            members.into_iter().map(|f| normalize_diamonds(&f)).collect();
        for member in &normalized {
            let Formula::Proves(t, tail) = member else {
                return Err(ExplicitCsError::NotConstantPrefixed(member.to_string()));
            };
            if !t.is_const() {
                return Err(ExplicitCsError::NotConstantPrefixed(member.to_string()));
            }
            let body = strip_constant_chain(tail);
            if !any_axiom_instance(body, range.includes_a0()) {
                return Err(ExplicitCsError::BodyNotAxiomInstance(member.to_string()));
            }
            if matches!(tail.as_ref(), Formula::Proves(u, _) if u.is_const())
                && !normalized.contains(tail.as_ref())
            {
                return Err(ExplicitCsError::NotDownwardClosed(
                    member.to_string(),
                    tail.to_string(),
                ));
            }
        }
        Ok(ConstantSpec { policy: CsPolicy::ExplicitList(normalized), range })
    }
}

// For `c_n:…:c_1:A` (possibly with zero further prefixes) returns `A`,
// the formula under the constant chain.
fn strip_constant_chain(f: &Formula) -> &Formula {
    match f {
        Formula::Proves(t, inner) if t.is_const() => strip_constant_chain(inner),
        other => other,
    }
}

/// Decides membership of `f` in the specification.
pub fn cs_contains(cs: &ConstantSpec, f: &Formula) -> bool {
    let f = normalize_diamonds(f);
    match &cs.policy {
        CsPolicy::Empty => false,
        CsPolicy::AxiomaticDepth1 => match &f {
            Formula::Proves(t, body) if t.is_const() => {
                any_axiom_instance(body, cs.range.includes_a0())
            }
            _ => false,
        },
        CsPolicy::IteratedAxiomatic => match &f {
            Formula::Proves(t, tail) if t.is_const() => {
                any_axiom_instance(strip_constant_chain(tail), cs.range.includes_a0())
            }
            _ => false,
        },
        CsPolicy::ExplicitList(members) => members.contains(&f),
    }
}

/// Convenience entry point for evidence queries: whether the
/// specification licenses `t:a`.
pub fn cs_licenses_entry(cs: &ConstantSpec, t: &ProofTerm, a: &Formula) -> bool {
    if !t.is_const() {
        return false;
    }
    cs_contains(cs, &Formula::proves(t.clone(), a.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text, None).unwrap()
    }

    #[test]
    fn axiomatic_depth_one() {
        let cs = ConstantSpec::axiomatic();
        assert!(cs_contains(&cs, &f("c:([]p -> p)")));
        assert!(cs_contains(&cs, &f("a1:(p -> p)")));
        assert!(!cs_contains(&cs, &f("c:(p -> q)")));
        assert!(!cs_contains(&cs, &f("x:([]p -> p)")));
        assert!(!cs_contains(&cs, &f("d:c:([]p -> p)")));
    }

    #[test]
    fn empty_policy_contains_nothing() {
        let cs = ConstantSpec::empty();
        assert!(!cs_contains(&cs, &f("c:(p -> p)")));
    }

    #[test]
    fn iterated_admits_deep_chains() {
        let cs = ConstantSpec::iterated();
        assert!(cs_contains(&cs, &f("d:c:([]p -> p)")));
        assert!(cs_contains(&cs, &f("c:([]p -> p)")));
        assert!(!cs_contains(&cs, &f("d:x:([]p -> p)")));
        assert!(!cs_contains(&ConstantSpec::axiomatic(), &f("d:c:([]p -> p)")));
    }

    #[test]
    fn range_excludes_tautologies_when_narrowed() {
        let narrow = ConstantSpec::axiomatic().with_range(AxiomRange::A1ToA9);
        assert!(!cs_contains(&narrow, &f("c:(p -> p)")));
        assert!(cs_contains(&narrow, &f("c:([]p -> p)")));
    }

    #[test]
    fn explicit_list_checks_shape_and_closure() {
        let ok = ConstantSpec::explicit(
            [f("c:([]p -> p)"), f("d:c:([]p -> p)")],
            AxiomRange::A0ToA9,
        )
        .unwrap();
        assert!(cs_contains(&ok, &f("d:c:([]p -> p)")));
        assert!(!cs_contains(&ok, &f("c:(p -> p)")));

        let not_closed =
            ConstantSpec::explicit([f("d:c:([]p -> p)")], AxiomRange::A0ToA9).unwrap_err();
        assert!(matches!(not_closed, ExplicitCsError::NotDownwardClosed(..)));

        let bad_body = ConstantSpec::explicit([f("c:(p -> q)")], AxiomRange::A0ToA9).unwrap_err();
        assert!(matches!(bad_body, ExplicitCsError::BodyNotAxiomInstance(_)));

        let bad_shape = ConstantSpec::explicit([f("x:(p -> p)")], AxiomRange::A0ToA9).unwrap_err();
        assert!(matches!(bad_shape, ExplicitCsError::NotConstantPrefixed(_)));
    }
}
