//! Recursive-descent parser for the concrete grammar.
//!
//! Binding from loosest to tightest: `->`/`<->` (right-associative),
//! `|`, `&`, then the prefix operators `~ K [] <> [agent] term: E term`.
//! Terms bind `+` below `*` (both left-associative) with prefix `!`
//! tightest. `<->` desugars at parse into the conjunction of the two
//! implications; every other derived connective is kept as its own node.

use super::lexer::{lex, Lexed, Tok};
use super::{classify_ident, AgentSet, Formula, IdentClass, ProofTerm};
use std::fmt;
use thiserror::Error;

/// Parse failure with the 1-based column of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(super) fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError { column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

/// Parses a formula. When `agents` is given, every agent identifier in
/// `[j]` or `Prove(j, …)` position must belong to it.
pub fn parse_formula(text: &str, agents: Option<&AgentSet>) -> Result<Formula, ParseError> {
    let lexed = lex(text)?;
    let mut p = Parser::new(lexed, agents);
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses a proof polynomial.
pub fn parse_term(text: &str) -> Result<ProofTerm, ParseError> {
    let lexed = lex(text)?;
    let mut p = Parser::new(lexed, None);
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    end: usize,
    pos: usize,
    agents: Option<&'a AgentSet>,
}

impl<'a> Parser<'a> {
    fn new(lexed: Lexed, agents: Option<&'a AgentSet>) -> Self {
        Parser { tokens: lexed.tokens, end: lexed.end, pos: 0, agents }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::new(
                self.column(),
                format!("unexpected {} after a complete input", t.describe()),
            )),
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(self.column(), format!("expected {what}, found {}", t.describe())),
            None => ParseError::new(self.column(), format!("expected {what}, found end of input")),
        }
    }

    fn check_agent(&self, name: &str, column: usize) -> Result<(), ParseError> {
        if let Some(agents) = self.agents {
            if !agents.contains(name) {
                return Err(ParseError::new(column, format!("unknown agent `{name}`")));
            }
        }
        Ok(())
    }

    // -> and <-> live on the same (loosest) tier, right-associative.
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.or_level()?;
        if self.eat(&Tok::Arrow) {
            let right = self.formula()?;
            Ok(Formula::implies(left, right))
        } else if self.eat(&Tok::Iff) {
            let right = self.formula()?;
            Ok(Formula::and(
                Formula::implies(left.clone(), right.clone()),
                Formula::implies(right, left),
            ))
        } else {
            Ok(left)
        }
    }

    fn or_level(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and_level()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.and_level()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and_level(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.prefix()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.prefix()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        let column = self.column();
        match self.peek() {
            Some(Tok::Tilde) => {
                self.bump();
                Ok(Formula::not(self.prefix()?))
            }
            Some(Tok::DiamondOp) => {
                self.bump();
                Ok(Formula::diamond(self.prefix()?))
            }
            Some(Tok::LBracket) => {
                self.bump();
                if self.eat(&Tok::RBracket) {
                    return Ok(Formula::boxed(self.prefix()?));
                }
                let agent_col = self.column();
                let Some(Tok::Ident(agent)) = self.bump() else {
                    return Err(ParseError::new(agent_col, "expected an agent name or `]`"));
                };
                self.check_agent(&agent, agent_col)?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Formula::stit(agent, self.prefix()?))
            }
            Some(Tok::Bang) => self.proves_from_term(),
            Some(Tok::LParen) => {
                // `(s + t):A` needs the term reading; otherwise this is a
                // parenthesised formula. Try the term, keep it only when a
                // colon follows.
                let saved = self.pos;
                if let Ok(t) = self.term() {
                    if self.eat(&Tok::Colon) {
                        return Ok(Formula::proves(t, self.prefix()?));
                    }
                }
                self.pos = saved;
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "K" => {
                    self.bump();
                    Ok(Formula::k(self.prefix()?))
                }
                "E" => {
                    self.bump();
                    Ok(Formula::e(self.term()?))
                }
                "false" => {
                    self.bump();
                    Ok(Formula::False)
                }
                "Prove" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let agent_col = self.column();
                    let Some(Tok::Ident(agent)) = self.bump() else {
                        return Err(ParseError::new(agent_col, "expected an agent name"));
                    };
                    self.check_agent(&agent, agent_col)?;
                    self.expect(Tok::Comma, "`,`")?;
                    let t = self.term()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let f = self.formula()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Formula::prove(agent, t, f))
                }
                "Proven" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let t = self.term()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let f = self.formula()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Formula::proven(t, f))
                }
                _ => match classify_ident(name) {
                    IdentClass::Atom => {
                        let name = name.clone();
                        self.bump();
                        Ok(Formula::Atom(name))
                    }
                    IdentClass::ProofVar | IdentClass::ProofConst => self.proves_from_term(),
                    IdentClass::Other => Err(ParseError::new(
                        column,
                        format!("identifier `{name}` is not an atom, proof variable or proof constant"),
                    )),
                },
            },
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn proves_from_term(&mut self) -> Result<Formula, ParseError> {
        let t = self.term()?;
        self.expect(Tok::Colon, "`:` after a proof term")?;
        Ok(Formula::proves(t, self.prefix()?))
    }

    fn term(&mut self) -> Result<ProofTerm, ParseError> {
        let mut acc = self.term_mul()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.term_mul()?;
            acc = ProofTerm::sum(acc, rhs);
        }
        Ok(acc)
    }

    fn term_mul(&mut self) -> Result<ProofTerm, ParseError> {
        let mut acc = self.term_unary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.term_unary()?;
            acc = ProofTerm::app(acc, rhs);
        }
        Ok(acc)
    }

    fn term_unary(&mut self) -> Result<ProofTerm, ParseError> {
        let column = self.column();
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(ProofTerm::check(self.term_unary()?))
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => match classify_ident(name) {
                IdentClass::ProofVar => {
                    let name = name.clone();
                    self.bump();
                    Ok(ProofTerm::Var(name))
                }
                IdentClass::ProofConst => {
                    let name = name.clone();
                    self.bump();
                    Ok(ProofTerm::Const(name))
                }
                _ => Err(ParseError::new(
                    column,
                    format!("expected a proof term, found `{name}`"),
                )),
            },
            _ => Err(self.unexpected("a proof term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::print_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text, None).unwrap()
    }

    #[test]
    fn parses_proposition_formula() {
        let got = f("K(~[]E x | []E y) -> (~E x | E y)");
        let x = ProofTerm::var("x");
        let y = ProofTerm::var("y");
        let want = Formula::implies(
            Formula::k(Formula::or(
                Formula::not(Formula::boxed(Formula::e(x.clone()))),
                Formula::boxed(Formula::e(y.clone())),
            )),
            Formula::or(Formula::not(Formula::e(x)), Formula::e(y)),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn parses_single_atom() {
        assert_eq!(f("p"), Formula::atom("p"));
    }

    #[test]
    fn colon_binds_tighter_than_and() {
        let want = Formula::and(
            Formula::proves(ProofTerm::var("x"), Formula::atom("p")),
            Formula::atom("q"),
        );
        assert_eq!(f("x:p & q"), want);
    }

    #[test]
    fn bare_e_is_an_error() {
        let err = parse_formula("E", None).unwrap_err();
        assert!(err.message.contains("proof term"), "{err}");
        assert_eq!(err.column, 2);
    }

    #[test]
    fn e_applied_to_atom_is_a_class_violation() {
        let err = parse_formula("E p", None).unwrap_err();
        assert!(err.message.contains("expected a proof term"), "{err}");
    }

    #[test]
    fn term_precedence() {
        let got = parse_term("!x + y*c").unwrap();
        let want = ProofTerm::sum(
            ProofTerm::check(ProofTerm::var("x")),
            ProofTerm::app(ProofTerm::var("y"), ProofTerm::constant("c")),
        );
        assert_eq!(got, want);
        assert_eq!(parse_term("x").unwrap(), ProofTerm::var("x"));
        let assoc = parse_term("x + y + z").unwrap();
        let want = ProofTerm::sum(
            ProofTerm::sum(ProofTerm::var("x"), ProofTerm::var("y")),
            ProofTerm::var("z"),
        );
        assert_eq!(assoc, want);
    }

    #[test]
    fn box_vs_stit_lookahead() {
        assert_eq!(f("[]p"), Formula::boxed(Formula::atom("p")));
        assert_eq!(f("[j1]p"), Formula::stit("j1", Formula::atom("p")));
    }

    #[test]
    fn parenthesised_term_in_proves_position() {
        let got = f("(x + y):p");
        let want = Formula::proves(
            ProofTerm::sum(ProofTerm::var("x"), ProofTerm::var("y")),
            Formula::atom("p"),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn iff_desugars_to_two_implications() {
        let got = f("p <-> q");
        let want = Formula::and(
            Formula::implies(Formula::atom("p"), Formula::atom("q")),
            Formula::implies(Formula::atom("q"), Formula::atom("p")),
        );
        assert_eq!(got, want);
        assert!(!print_formula(&got).contains("<->"));
    }

    #[test]
    fn agent_checking() {
        let agents = AgentSet::new(["j1"]).unwrap();
        assert!(parse_formula("[j1]p", Some(&agents)).is_ok());
        let err = parse_formula("[j2]p", Some(&agents)).unwrap_err();
        assert!(err.message.contains("unknown agent"), "{err}");
        let err = parse_formula("Prove(j9, x, p)", Some(&agents)).unwrap_err();
        assert!(err.message.contains("unknown agent"), "{err}");
    }

    #[test]
    fn keyword_forms() {
        assert_eq!(
            f("Prove(j1, x, p)"),
            Formula::prove("j1", ProofTerm::var("x"), Formula::atom("p"))
        );
        assert_eq!(
            f("Proven(x, p)"),
            Formula::proven(ProofTerm::var("x"), Formula::atom("p"))
        );
        assert_eq!(f("false"), Formula::False);
    }

    #[test]
    fn error_positions_point_at_the_problem() {
        let err = parse_formula("p & ", None).unwrap_err();
        assert_eq!(err.column, 5);
        let err = parse_formula("p q", None).unwrap_err();
        assert_eq!(err.column, 3);
        let err = parse_term("x + ?").unwrap_err();
        assert_eq!(err.column, 5);
    }

    #[test]
    fn nested_proves_chains() {
        let got = f("!x:(x:p)");
        let want = Formula::proves(
            ProofTerm::check(ProofTerm::var("x")),
            Formula::proves(ProofTerm::var("x"), Formula::atom("p")),
        );
        assert_eq!(got, want);
        assert_eq!(f("!x:x:p"), want);
    }
}
