//! Minimal-parenthesis printing. Printed output re-parses to a
//! structurally equal AST, and no emitted parenthesis pair can be
//! dropped without changing the AST or breaking the parse.

use super::{Formula, ProofTerm};
use std::fmt;

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

pub fn print_term(t: &ProofTerm) -> String {
    t.to_string()
}

// Binding strength of a node: arguments whose own level is lower than
// the level required by their context get wrapped in parentheses.
fn term_level(t: &ProofTerm) -> u8 {
    match t {
        ProofTerm::Sum(..) => 1,
        ProofTerm::App(..) => 2,
        ProofTerm::Check(_) => 3,
        ProofTerm::Var(_) | ProofTerm::Const(_) => 4,
    }
}

fn formula_level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(_)
        | Formula::Stit(..)
        | Formula::Box(_)
        | Formula::Diamond(_)
        | Formula::K(_)
        | Formula::Proves(..)
        | Formula::E(_) => 4,
        Formula::Atom(_) | Formula::False | Formula::Prove(..) | Formula::Proven(..) => 5,
    }
}

fn write_term(t: &ProofTerm, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if term_level(t) < min {
        write!(out, "(")?;
        write_term(t, 0, out)?;
        return write!(out, ")");
    }
    match t {
        ProofTerm::Var(name) | ProofTerm::Const(name) => write!(out, "{name}"),
        ProofTerm::Sum(l, r) => {
            write_term(l, 1, out)?;
            write!(out, " + ")?;
            write_term(r, 2, out)
        }
        ProofTerm::App(l, r) => {
            write_term(l, 2, out)?;
            write!(out, " * ")?;
            write_term(r, 3, out)
        }
        ProofTerm::Check(inner) => {
            write!(out, "!")?;
            write_term(inner, 3, out)
        }
    }
}

fn write_formula(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if formula_level(f) < min {
        write!(out, "(")?;
        write_formula(f, 0, out)?;
        return write!(out, ")");
    }
    match f {
        Formula::Atom(name) => write!(out, "{name}"),
        Formula::False => write!(out, "false"),
        Formula::Implies(l, r) => {
            write_formula(l, 2, out)?;
            write!(out, " -> ")?;
            write_formula(r, 1, out)
        }
        Formula::Or(l, r) => {
            write_formula(l, 2, out)?;
            write!(out, " | ")?;
            write_formula(r, 3, out)
        }
        Formula::And(l, r) => {
            write_formula(l, 3, out)?;
            write!(out, " & ")?;
            write_formula(r, 4, out)
        }
        Formula::Not(g) => {
            write!(out, "~")?;
            write_formula(g, 4, out)
        }
        Formula::Box(g) => {
            write!(out, "[]")?;
            write_formula(g, 4, out)
        }
        Formula::Diamond(g) => {
            write!(out, "<>")?;
            write_formula(g, 4, out)
        }
        Formula::Stit(agent, g) => {
            write!(out, "[{agent}]")?;
            write_formula(g, 4, out)
        }
        Formula::K(g) => {
            write!(out, "K")?;
            if formula_level(g) < 4 {
                write_formula(g, 4, out)
            } else {
                write!(out, " ")?;
                write_formula(g, 4, out)
            }
        }
        Formula::Proves(t, g) => {
            write_term(t, 1, out)?;
            write!(out, ":")?;
            write_formula(g, 4, out)
        }
        Formula::E(t) => {
            write!(out, "E ")?;
            write_term(t, 1, out)
        }
        Formula::Prove(agent, t, g) => {
            write!(out, "Prove({agent}, ")?;
            write_term(t, 1, out)?;
            write!(out, ", ")?;
            write_formula(g, 0, out)?;
            write!(out, ")")
        }
        Formula::Proven(t, g) => {
            write!(out, "Proven(")?;
            write_term(t, 1, out)?;
            write!(out, ", ")?;
            write_formula(g, 0, out)?;
            write!(out, ")")
        }
    }
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_term, Formula, ProofTerm};

    #[test]
    fn prints_spec_forms() {
        let p = Formula::atom("p");
        let q = Formula::atom("q");
        let r = Formula::atom("r");
        assert_eq!(print_formula(&Formula::implies(p.clone(), p.clone())), "p -> p");
        assert_eq!(
            print_formula(&Formula::proves(ProofTerm::var("x"), p.clone())),
            "x:p"
        );
        assert_eq!(
            print_formula(&Formula::and(Formula::or(p, q), r)),
            "(p | q) & r"
        );
    }

    #[test]
    fn round_trips_hand_picked_formulas() {
        for text in [
            "K(~[]E x | []E y) -> (~E x | E y)",
            "Prove(j1, x, p) & Proven(y, q)",
            "x + y:p -> <>~E x * !y",
            "[](p -> q) -> ([]p -> []q)",
            "~K p | false",
            "(x + y) * z:(p & q | r)",
            "c:([]p -> p)",
        ] {
            let ast = parse_formula(text, None).unwrap();
            let printed = print_formula(&ast);
            let reparsed = parse_formula(&printed, None).unwrap();
            assert_eq!(ast, reparsed, "text `{text}` printed as `{printed}`");
        }
    }

    #[test]
    fn term_printing_needs_parens_only_where_forced() {
        let t = parse_term("(x + y) * z").unwrap();
        assert_eq!(print_term(&t), "(x + y) * z");
        let t = parse_term("x + y * z").unwrap();
        assert_eq!(print_term(&t), "x + y * z");
        let t = parse_term("!(x + y)").unwrap();
        assert_eq!(print_term(&t), "!(x + y)");
        let t = parse_term("!!x").unwrap();
        assert_eq!(print_term(&t), "!!x");
    }
}
