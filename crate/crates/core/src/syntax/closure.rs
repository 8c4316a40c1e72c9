//! Subformula and subterm closure, the finite universes that constraint
//! checking quantifies over.

use super::{Formula, ProofTerm};
use std::collections::BTreeSet;

/// Returns the subformula closure of `seed_formulas` and the subterm
/// closure of `seed_terms`, where every term occurring in a formula
/// (in `t:A`, `Et`, `Prove(j,t,A)` or `Proven(t,A)` position) also
/// enters the term closure.
pub fn closure_universe(
    seed_formulas: &[Formula],
    seed_terms: &[ProofTerm],
) -> (BTreeSet<Formula>, BTreeSet<ProofTerm>) {
    let mut formulas = BTreeSet::new();
    let mut terms = BTreeSet::new();
    for f in seed_formulas {
        add_formula(f, &mut formulas, &mut terms);
    }
    for t in seed_terms {
        add_term(t, &mut terms);
    }
    (formulas, terms)
}

fn add_formula(f: &Formula, formulas: &mut BTreeSet<Formula>, terms: &mut BTreeSet<ProofTerm>) {
    if !formulas.insert(f.clone()) {
        return;
    }
    match f {
        Formula::Proves(t, _) | Formula::Prove(_, t, _) | Formula::Proven(t, _) | Formula::E(t) => {
            add_term(t, terms);
        }
        _ => {}
    }
    for child in f.children() {
        add_formula(child, formulas, terms);
    }
}

fn add_term(t: &ProofTerm, terms: &mut BTreeSet<ProofTerm>) {
    if !terms.insert(t.clone()) {
        return;
    }
    match t {
        ProofTerm::Var(_) | ProofTerm::Const(_) => {}
        ProofTerm::Sum(l, r) | ProofTerm::App(l, r) => {
            add_term(l, terms);
            add_term(r, terms);
        }
        ProofTerm::Check(inner) => add_term(inner, terms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_term};

    fn f(text: &str) -> Formula {
        parse_formula(text, None).unwrap()
    }

    #[test]
    fn e_seed_pulls_in_its_term() {
        let (formulas, terms) = closure_universe(&[f("E x")], &[]);
        assert_eq!(formulas.into_iter().collect::<Vec<_>>(), vec![f("E x")]);
        assert_eq!(
            terms.into_iter().collect::<Vec<_>>(),
            vec![parse_term("x").unwrap()]
        );
    }

    #[test]
    fn proves_seed_closes_over_both_sides() {
        let (formulas, terms) = closure_universe(&[f("x:p & q")], &[]);
        let want: BTreeSet<Formula> =
            [f("x:p & q"), f("x:p"), f("q"), f("p")].into_iter().collect();
        assert_eq!(formulas, want);
        assert_eq!(
            terms.into_iter().collect::<Vec<_>>(),
            vec![parse_term("x").unwrap()]
        );
    }

    #[test]
    fn term_seed_closes_over_subterms() {
        let (formulas, terms) = closure_universe(&[], &[parse_term("!x").unwrap()]);
        assert!(formulas.is_empty());
        let want: BTreeSet<_> = [parse_term("!x").unwrap(), parse_term("x").unwrap()]
            .into_iter()
            .collect();
        assert_eq!(terms, want);
    }

    #[test]
    fn idempotent_and_monotone() {
        let seeds = [f("Prove(j1, x + y, K p -> q)"), f("E !z")];
        let (f1, t1) = closure_universe(&seeds, &[]);
        let fs: Vec<Formula> = f1.iter().cloned().collect();
        let ts: Vec<ProofTerm> = t1.iter().cloned().collect();
        let (f2, t2) = closure_universe(&fs, &ts);
        assert_eq!(f1, f2);
        assert_eq!(t1, t2);

        let (f3, t3) = closure_universe(&seeds[..1], &[]);
        assert!(f3.is_subset(&f1));
        assert!(t3.is_subset(&t1));
    }
}
