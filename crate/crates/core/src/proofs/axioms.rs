//! Recognition of axiom-scheme instances.
//!
//! Matching is performed modulo the rewrite `<>A => ~[]~A`, applied to
//! the candidate before structural pattern matching; the patterns are
//! written in the rewritten form. `A0` is decided by replacing maximal
//! non-boolean subformulas with propositional letters and truth-tabling
//! the resulting skeleton.

use crate::syntax::{Formula, ProofTerm};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// The axiom scheme groups of `Σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomGroup {
    A0,
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
}

impl AxiomGroup {
    pub const ALL: [AxiomGroup; 10] = [
        AxiomGroup::A0,
        AxiomGroup::A1,
        AxiomGroup::A2,
        AxiomGroup::A3,
        AxiomGroup::A4,
        AxiomGroup::A5,
        AxiomGroup::A6,
        AxiomGroup::A7,
        AxiomGroup::A8,
        AxiomGroup::A9,
    ];
}

impl fmt::Display for AxiomGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", *self as usize)
    }
}

impl FromStr for AxiomGroup {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let idx = s.strip_prefix('A').ok_or(())?;
        let idx: usize = idx.parse().map_err(|_| ())?;
        AxiomGroup::ALL.get(idx).copied().ok_or(())
    }
}

/// A successful match: the concrete pattern inside the group plus the
/// metavariable bindings, both printed for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomMatch {
    pub pattern: &'static str,
    pub bindings: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomCheckError {
    #[error("boolean skeleton has {0} distinct letters, exceeding the limit of 20")]
    SkeletonTooLarge(usize),
}

/// Replaces every `<>A` by `~[]~A`, recursively. Idempotent.
pub fn normalize_diamonds(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::False | Formula::E(_) => f.clone(),
        Formula::Diamond(g) => Formula::not(Formula::boxed(Formula::not(normalize_diamonds(g)))),
        Formula::Not(g) => Formula::not(normalize_diamonds(g)),
        Formula::And(l, r) => Formula::and(normalize_diamonds(l), normalize_diamonds(r)),
        Formula::Or(l, r) => Formula::or(normalize_diamonds(l), normalize_diamonds(r)),
        Formula::Implies(l, r) => Formula::implies(normalize_diamonds(l), normalize_diamonds(r)),
        Formula::Stit(j, g) => Formula::stit(j.clone(), normalize_diamonds(g)),
        Formula::Box(g) => Formula::boxed(normalize_diamonds(g)),
        Formula::K(g) => Formula::k(normalize_diamonds(g)),
        Formula::Proves(t, g) => Formula::proves(t.clone(), normalize_diamonds(g)),
        Formula::Prove(j, t, g) => Formula::prove(j.clone(), t.clone(), normalize_diamonds(g)),
        Formula::Proven(t, g) => Formula::proven(t.clone(), normalize_diamonds(g)),
    }
}

/// Tests whether `f` is an instance of the given scheme group and, on
/// success, reports which concrete pattern matched and how.
pub fn is_axiom_instance(
    f: &Formula,
    group: AxiomGroup,
) -> Result<Option<AxiomMatch>, AxiomCheckError> {
    let f = normalize_diamonds(f);
    match group {
        AxiomGroup::A0 => check_tautology_instance(&f),
        AxiomGroup::A1 => {
            for (name, pat) in s5_patterns() {
                if let Some(m) = try_match(name, &pat, &f) {
                    return Ok(Some(m));
                }
            }
            Ok(None)
        }
        AxiomGroup::A2 => {
            // []A -> [J]A
            let pat = Pat::implies(Pat::boxm(Pat::meta('A')), Pat::stit('J', Pat::meta('A')));
            Ok(try_match("A2", &pat, &f))
        }
        AxiomGroup::A3 => Ok(match_a3(&f)),
        AxiomGroup::A4 => {
            // s:(A -> B) -> (t:A -> s*t:B)
            let pat = Pat::implies(
                Pat::proves(TPat::Meta('s'), Pat::implies(Pat::meta('A'), Pat::meta('B'))),
                Pat::implies(
                    Pat::proves(TPat::Meta('t'), Pat::meta('A')),
                    Pat::proves(
                        TPat::App(Box::new(TPat::Meta('s')), Box::new(TPat::Meta('t'))),
                        Pat::meta('B'),
                    ),
                ),
            );
            Ok(try_match("A4", &pat, &f))
        }
        AxiomGroup::A5 => {
            // t:A -> (!t:(t:A) & K A)
            let pat = Pat::implies(
                Pat::proves(TPat::Meta('t'), Pat::meta('A')),
                Pat::and(
                    Pat::proves(
                        TPat::Check(Box::new(TPat::Meta('t'))),
                        Pat::proves(TPat::Meta('t'), Pat::meta('A')),
                    ),
                    Pat::k(Pat::meta('A')),
                ),
            );
            Ok(try_match("A5", &pat, &f))
        }
        AxiomGroup::A6 => {
            // (s:A | t:A) -> s+t:A
            let pat = Pat::implies(
                Pat::or(
                    Pat::proves(TPat::Meta('s'), Pat::meta('A')),
                    Pat::proves(TPat::Meta('t'), Pat::meta('A')),
                ),
                Pat::proves(
                    TPat::Sum(Box::new(TPat::Meta('s')), Box::new(TPat::Meta('t'))),
                    Pat::meta('A'),
                ),
            );
            Ok(try_match("A6", &pat, &f))
        }
        AxiomGroup::A7 => {
            for (name, pat) in s4_k_patterns() {
                if let Some(m) = try_match(name, &pat, &f) {
                    return Ok(Some(m));
                }
            }
            Ok(None)
        }
        AxiomGroup::A8 => {
            // K A -> []K[]A
            let pat = Pat::implies(
                Pat::k(Pat::meta('A')),
                Pat::boxm(Pat::k(Pat::boxm(Pat::meta('A')))),
            );
            Ok(try_match("A8", &pat, &f))
        }
        AxiomGroup::A9 => {
            // []E t -> K[]E t
            let pat = Pat::implies(
                Pat::boxm(Pat::e(TPat::Meta('t'))),
                Pat::k(Pat::boxm(Pat::e(TPat::Meta('t')))),
            );
            Ok(try_match("A9", &pat, &f))
        }
    }
}

/// True when `f` instantiates some group of the given inclusive range.
/// A skeleton-size overflow on the `A0` test counts as "not an
/// instance" here; the explicit per-group entry point keeps the error.
pub(crate) fn any_axiom_instance(f: &Formula, include_a0: bool) -> bool {
    for group in AxiomGroup::ALL {
        if group == AxiomGroup::A0 && !include_a0 {
            continue;
        }
        if matches!(is_axiom_instance(f, group), Ok(Some(_))) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------
// Pattern matching with metavariables.

#[derive(Debug, Clone)]
enum TPat {
    Meta(char),
    Sum(Box<TPat>, Box<TPat>),
    App(Box<TPat>, Box<TPat>),
    Check(Box<TPat>),
}

#[derive(Debug, Clone)]
enum Pat {
    MetaF(char),
    Not(Box<Pat>),
    And(Box<Pat>, Box<Pat>),
    Or(Box<Pat>, Box<Pat>),
    Implies(Box<Pat>, Box<Pat>),
    BoxM(Box<Pat>),
    K(Box<Pat>),
    StitMeta(char, Box<Pat>),
    Proves(TPat, Box<Pat>),
    E(TPat),
}

impl Pat {
    fn meta(c: char) -> Pat {
        Pat::MetaF(c)
    }
    fn not(p: Pat) -> Pat {
        Pat::Not(Box::new(p))
    }
    fn and(l: Pat, r: Pat) -> Pat {
        Pat::And(Box::new(l), Box::new(r))
    }
    fn or(l: Pat, r: Pat) -> Pat {
        Pat::Or(Box::new(l), Box::new(r))
    }
    fn implies(l: Pat, r: Pat) -> Pat {
        Pat::Implies(Box::new(l), Box::new(r))
    }
    fn boxm(p: Pat) -> Pat {
        Pat::BoxM(Box::new(p))
    }
    fn k(p: Pat) -> Pat {
        Pat::K(Box::new(p))
    }
    fn stit(agent: char, p: Pat) -> Pat {
        Pat::StitMeta(agent, Box::new(p))
    }
    fn proves(t: TPat, p: Pat) -> Pat {
        Pat::Proves(t, Box::new(p))
    }
    fn e(t: TPat) -> Pat {
        Pat::E(t)
    }
}

#[derive(Default)]
struct Bindings<'a> {
    formulas: BTreeMap<char, &'a Formula>,
    terms: BTreeMap<char, &'a ProofTerm>,
    agents: BTreeMap<char, &'a str>,
}

impl<'a> Bindings<'a> {
    fn into_match(self, pattern: &'static str) -> AxiomMatch {
        let mut bindings = Vec::new();
        for (var, f) in self.formulas {
            bindings.push((var.to_string(), f.to_string()));
        }
        for (var, t) in self.terms {
            bindings.push((var.to_string(), t.to_string()));
        }
        for (var, a) in self.agents {
            bindings.push((var.to_string(), a.to_string()));
        }
        AxiomMatch { pattern, bindings }
    }
}

fn match_term<'a>(pat: &TPat, t: &'a ProofTerm, b: &mut Bindings<'a>) -> bool {
    match (pat, t) {
        (TPat::Meta(v), _) => match b.terms.get(v) {
            Some(bound) => *bound == t,
            None => {
                b.terms.insert(*v, t);
                true
            }
        },
        (TPat::Sum(pl, pr), ProofTerm::Sum(l, r)) => {
            match_term(pl, l, b) && match_term(pr, r, b)
        }
        (TPat::App(pl, pr), ProofTerm::App(l, r)) => {
            match_term(pl, l, b) && match_term(pr, r, b)
        }
        (TPat::Check(pi), ProofTerm::Check(i)) => match_term(pi, i, b),
        _ => false,
    }
}

fn match_formula<'a>(pat: &Pat, f: &'a Formula, b: &mut Bindings<'a>) -> bool {
    match (pat, f) {
        (Pat::MetaF(v), _) => match b.formulas.get(v) {
            Some(bound) => *bound == f,
            None => {
                b.formulas.insert(*v, f);
                true
            }
        },
        (Pat::Not(p), Formula::Not(g)) => match_formula(p, g, b),
        (Pat::And(pl, pr), Formula::And(l, r)) => {
            match_formula(pl, l, b) && match_formula(pr, r, b)
        }
        (Pat::Or(pl, pr), Formula::Or(l, r)) => {
            match_formula(pl, l, b) && match_formula(pr, r, b)
        }
        (Pat::Implies(pl, pr), Formula::Implies(l, r)) => {
            match_formula(pl, l, b) && match_formula(pr, r, b)
        }
        (Pat::BoxM(p), Formula::Box(g)) => match_formula(p, g, b),
        (Pat::K(p), Formula::K(g)) => match_formula(p, g, b),
        (Pat::StitMeta(v, p), Formula::Stit(agent, g)) => {
            let agent_ok = match b.agents.get(v) {
                Some(bound) => *bound == agent.as_str(),
                None => {
                    b.agents.insert(*v, agent);
                    true
                }
            };
            agent_ok && match_formula(p, g, b)
        }
        (Pat::Proves(pt, p), Formula::Proves(t, g)) => {
            match_term(pt, t, b) && match_formula(p, g, b)
        }
        (Pat::E(pt), Formula::E(t)) => match_term(pt, t, b),
        _ => false,
    }
}

fn try_match(name: &'static str, pat: &Pat, f: &Formula) -> Option<AxiomMatch> {
    let mut b = Bindings::default();
    if match_formula(pat, f, &mut b) {
        Some(b.into_match(name))
    } else {
        None
    }
}

// S5 group for [] and [j]: K-distribution, T, 4, and 5 in the primitive
// form ~MA -> M~MA.
fn s5_patterns() -> Vec<(&'static str, Pat)> {
    let mut pats = Vec::new();
    pats.push((
        "A1/K-box",
        Pat::implies(
            Pat::boxm(Pat::implies(Pat::meta('A'), Pat::meta('B'))),
            Pat::implies(Pat::boxm(Pat::meta('A')), Pat::boxm(Pat::meta('B'))),
        ),
    ));
    pats.push(("A1/T-box", Pat::implies(Pat::boxm(Pat::meta('A')), Pat::meta('A'))));
    pats.push((
        "A1/4-box",
        Pat::implies(Pat::boxm(Pat::meta('A')), Pat::boxm(Pat::boxm(Pat::meta('A')))),
    ));
    pats.push((
        "A1/5-box",
        Pat::implies(
            Pat::not(Pat::boxm(Pat::meta('A'))),
            Pat::boxm(Pat::not(Pat::boxm(Pat::meta('A')))),
        ),
    ));
    pats.push((
        "A1/K-stit",
        Pat::implies(
            Pat::stit('J', Pat::implies(Pat::meta('A'), Pat::meta('B'))),
            Pat::implies(Pat::stit('J', Pat::meta('A')), Pat::stit('J', Pat::meta('B'))),
        ),
    ));
    pats.push((
        "A1/T-stit",
        Pat::implies(Pat::stit('J', Pat::meta('A')), Pat::meta('A')),
    ));
    pats.push((
        "A1/4-stit",
        Pat::implies(
            Pat::stit('J', Pat::meta('A')),
            Pat::stit('J', Pat::stit('J', Pat::meta('A'))),
        ),
    ));
    pats.push((
        "A1/5-stit",
        Pat::implies(
            Pat::not(Pat::stit('J', Pat::meta('A'))),
            Pat::stit('J', Pat::not(Pat::stit('J', Pat::meta('A')))),
        ),
    ));
    pats
}

// S4 group for K: K-distribution, T, 4.
fn s4_k_patterns() -> Vec<(&'static str, Pat)> {
    vec![
        (
            "A7/K",
            Pat::implies(
                Pat::k(Pat::implies(Pat::meta('A'), Pat::meta('B'))),
                Pat::implies(Pat::k(Pat::meta('A')), Pat::k(Pat::meta('B'))),
            ),
        ),
        ("A7/T", Pat::implies(Pat::k(Pat::meta('A')), Pat::meta('A'))),
        (
            "A7/4",
            Pat::implies(Pat::k(Pat::meta('A')), Pat::k(Pat::k(Pat::meta('A')))),
        ),
    ]
}

// ---------------------------------------------------------------------
// A3: (<>[j1]A1 & ... & <>[jn]An) -> <>([j1]A1 & ... & [jn]An) with the
// agents pairwise different; both conjunctions taken modulo association.

/// Flattens the left-spine-free `And` structure into the ordered list of
/// conjuncts, recursively on both children.
pub(crate) fn flatten_and(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(l, r) => {
            let mut parts = flatten_and(l);
            parts.extend(flatten_and(r));
            parts
        }
        other => vec![other],
    }
}

pub(crate) fn flatten_or(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Or(l, r) => {
            let mut parts = flatten_or(l);
            parts.extend(flatten_or(r));
            parts
        }
        other => vec![other],
    }
}

// The input is diamond-normalized, so a diamond appears as ~[]~ here.
fn as_normalized_diamond(f: &Formula) -> Option<&Formula> {
    if let Formula::Not(g) = f {
        if let Formula::Box(h) = g.as_ref() {
            if let Formula::Not(inner) = h.as_ref() {
                return Some(inner);
            }
        }
    }
    None
}

fn match_a3(f: &Formula) -> Option<AxiomMatch> {
    let Formula::Implies(lhs, rhs) = f else {
        return None;
    };
    let mut pairs: Vec<(&str, &Formula)> = Vec::new();
    for conjunct in flatten_and(lhs) {
        let inner = as_normalized_diamond(conjunct)?;
        let Formula::Stit(agent, body) = inner else {
            return None;
        };
        pairs.push((agent, body));
    }
    for (i, (agent, _)) in pairs.iter().enumerate() {
        if pairs[..i].iter().any(|(a, _)| a == agent) {
            return None;
        }
    }
    let rhs_inner = as_normalized_diamond(rhs)?;
    let rhs_parts = flatten_and(rhs_inner);
    if rhs_parts.len() != pairs.len() {
        return None;
    }
    for (part, (agent, body)) in rhs_parts.iter().zip(&pairs) {
        let Formula::Stit(a, g) = part else {
            return None;
        };
        if a != agent || g.as_ref() != *body {
            return None;
        }
    }
    let bindings = pairs
        .iter()
        .enumerate()
        .flat_map(|(i, (agent, body))| {
            [
                (format!("j{}", i + 1), agent.to_string()),
                (format!("A{}", i + 1), body.to_string()),
            ]
        })
        .collect();
    Some(AxiomMatch { pattern: "A3", bindings })
}

// ---------------------------------------------------------------------
// A0: instance of a classical tautology.

fn is_boolean_node(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Not(_) | Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::False
    )
}

fn collect_letters<'a>(f: &'a Formula, letters: &mut Vec<&'a Formula>) {
    if is_boolean_node(f) {
        match f {
            Formula::Not(g) => collect_letters(g, letters),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                collect_letters(l, letters);
                collect_letters(r, letters);
            }
            Formula::False => {}
            _ => unreachable!(),
        }
    } else if !letters.contains(&f) {
        letters.push(f);
    }
}

fn eval_skeleton(f: &Formula, letters: &[&Formula], assignment: u32) -> bool {
    match f {
        Formula::False => false,
        Formula::Not(g) => !eval_skeleton(g, letters, assignment),
        Formula::And(l, r) => {
            eval_skeleton(l, letters, assignment) && eval_skeleton(r, letters, assignment)
        }
        Formula::Or(l, r) => {
            eval_skeleton(l, letters, assignment) || eval_skeleton(r, letters, assignment)
        }
        Formula::Implies(l, r) => {
            !eval_skeleton(l, letters, assignment) || eval_skeleton(r, letters, assignment)
        }
        leaf => {
            let idx = letters.iter().position(|g| *g == leaf).expect("letter collected");
            assignment & (1 << idx) != 0
        }
    }
}

fn check_tautology_instance(f: &Formula) -> Result<Option<AxiomMatch>, AxiomCheckError> {
    let mut letters = Vec::new();
    collect_letters(f, &mut letters);
    if letters.len() > 20 {
        return Err(AxiomCheckError::SkeletonTooLarge(letters.len()));
    }
    for assignment in 0..(1u32 << letters.len()) {
        if !eval_skeleton(f, &letters, assignment) {
            return Ok(None);
        }
    }
    let bindings = letters
        .iter()
        .enumerate()
        .map(|(i, g)| (format!("P{}", i + 1), g.to_string()))
        .collect();
    Ok(Some(AxiomMatch { pattern: "A0", bindings }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text, None).unwrap()
    }

    fn hit(text: &str, group: AxiomGroup) -> AxiomMatch {
        is_axiom_instance(&f(text), group)
            .unwrap()
            .unwrap_or_else(|| panic!("`{text}` should instantiate {group}"))
    }

    fn miss(text: &str, group: AxiomGroup) {
        assert!(
            is_axiom_instance(&f(text), group).unwrap().is_none(),
            "`{text}` should not instantiate {group}"
        );
    }

    #[test]
    fn t_for_box_is_a1() {
        assert_eq!(hit("[]p -> p", AxiomGroup::A1).pattern, "A1/T-box");
        assert_eq!(hit("[j7](p & q) -> p & q", AxiomGroup::A1).pattern, "A1/T-stit");
        miss("[]p -> []q", AxiomGroup::A1);
    }

    #[test]
    fn five_matches_primitive_form_after_normalization() {
        assert_eq!(hit("~[]p -> []~[]p", AxiomGroup::A1).pattern, "A1/5-box");
        assert_eq!(hit("<>p -> []<>p", AxiomGroup::A1).pattern, "A1/5-box");
        assert_eq!(hit("~[j1]q -> [j1]~[j1]q", AxiomGroup::A1).pattern, "A1/5-stit");
        // Distribution must use one and the same agent throughout.
        miss("[j1](p -> q) -> ([j2]p -> [j1]q)", AxiomGroup::A1);
    }

    #[test]
    fn application_scheme_a4() {
        let m = hit("x:(p -> q) -> (y:p -> x*y:q)", AxiomGroup::A4);
        assert_eq!(m.pattern, "A4");
        miss("x:(p -> q) -> (y:p -> y*x:q)", AxiomGroup::A4);
        miss("x:(p -> q) -> (y:r -> x*y:q)", AxiomGroup::A4);
    }

    #[test]
    fn checker_scheme_a5_and_sum_scheme_a6() {
        hit("x:p -> (!x:(x:p) & K p)", AxiomGroup::A5);
        miss("x:p -> (!y:(x:p) & K p)", AxiomGroup::A5);
        hit("(x:p | y:p) -> x + y:p", AxiomGroup::A6);
        miss("(x:p | y:q) -> x + y:p", AxiomGroup::A6);
    }

    #[test]
    fn epistemic_schemes() {
        assert_eq!(hit("K p -> []K[]p", AxiomGroup::A8).pattern, "A8");
        assert_eq!(hit("[]E x -> K[]E x", AxiomGroup::A9).pattern, "A9");
        assert_eq!(hit("K p -> p", AxiomGroup::A7).pattern, "A7/T");
        assert_eq!(hit("K p -> K K p", AxiomGroup::A7).pattern, "A7/4");
        miss("K p -> []K p", AxiomGroup::A8);
        miss("K p -> K K K p", AxiomGroup::A7);
    }

    #[test]
    fn independence_scheme_a3_needs_distinct_agents() {
        hit("<>[j1]p -> <>[j1]p", AxiomGroup::A3);
        hit("(<>[j1]p & <>[j2]q) -> <>([j1]p & [j2]q)", AxiomGroup::A3);
        miss("(<>[j1]p & <>[j1]q) -> <>([j1]p & [j1]q)", AxiomGroup::A3);
        miss("(<>[j1]p & <>[j2]q) -> <>([j2]q & [j1]p)", AxiomGroup::A3);
    }

    #[test]
    fn tautology_instances() {
        assert!(is_axiom_instance(&f("p -> p"), AxiomGroup::A0).unwrap().is_some());
        assert!(is_axiom_instance(&f("K p | ~K p"), AxiomGroup::A0).unwrap().is_some());
        assert!(is_axiom_instance(&f("(p & ~p) -> false"), AxiomGroup::A0)
            .unwrap()
            .is_some());
        assert!(is_axiom_instance(&f("<>p -> ~[]~p"), AxiomGroup::A0).unwrap().is_some());
        assert!(is_axiom_instance(&f("K p -> ~[]E x"), AxiomGroup::A0).unwrap().is_none());
        assert!(is_axiom_instance(&f("p -> q"), AxiomGroup::A0).unwrap().is_none());
    }

    #[test]
    fn normalization_is_idempotent_and_matching_invariant() {
        let g = f("<>(p & <>q) -> <>p");
        let once = normalize_diamonds(&g);
        assert_eq!(once, normalize_diamonds(&once));
        for group in AxiomGroup::ALL {
            assert_eq!(
                is_axiom_instance(&g, group).map(|m| m.is_some()),
                is_axiom_instance(&once, group).map(|m| m.is_some())
            );
        }
    }
}
