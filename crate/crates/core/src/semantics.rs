//! The satisfaction relation at moment/history pairs, per-model
//! validity, and expansion of the defined proving modalities.

use crate::model::JstitModel;
use crate::syntax::Formula;
use thiserror::Error;

/// A moment/history index pair with the history passing through the
/// moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EvalPoint {
    pub moment: usize,
    pub history: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown moment `{0}`")]
    UnknownMoment(String),
    #[error("unknown history `{0}`")]
    UnknownHistory(String),
    #[error("history `{history}` does not pass through moment `{moment}`")]
    NotAPoint { moment: String, history: String },
    #[error("formula references agent `{0}`, absent from the model")]
    UnknownAgent(String),
}

impl JstitModel {
    /// Resolves a `(moment, history)` name pair into an [`EvalPoint`].
    pub fn point(&self, moment: &str, history: &str) -> Result<EvalPoint, EvalError> {
        let m = self
            .moment_index(moment)
            .ok_or_else(|| EvalError::UnknownMoment(moment.to_string()))?;
        let h = self
            .history_index(history)
            .ok_or_else(|| EvalError::UnknownHistory(history.to_string()))?;
        if !self.histories()[h].passes_through(m) {
            return Err(EvalError::NotAPoint {
                moment: moment.to_string(),
                history: history.to_string(),
            });
        }
        Ok(EvalPoint { moment: m, history: h })
    }

    /// Renders a point as `(moment, history-id)`.
    pub fn describe_point(&self, at: EvalPoint) -> String {
        format!("({}, {})", self.moment_name(at.moment), self.histories()[at.history].id)
    }
}

/// Which satisfaction clause interprets `t:A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProvesClause {
    /// Evidence membership plus truth of `A` at every point reachable
    /// along `R_e`.
    Literal,
    /// Evidence membership plus `KA`; equivalent to the literal clause
    /// on unirelational models.
    SimplifiedK,
}

/// Evaluates `f` at a point using the literal `t:A` clause.
pub fn satisfies(model: &JstitModel, at: EvalPoint, f: &Formula) -> Result<bool, EvalError> {
    satisfies_with(model, at, f, ProvesClause::Literal)
}

/// Evaluates `f` at a point with an explicit choice of `t:A` clause.
pub fn satisfies_with(
    model: &JstitModel,
    at: EvalPoint,
    f: &Formula,
    clause: ProvesClause,
) -> Result<bool, EvalError> {
    check_agents(model, f)?;
    Ok(eval(model, at.moment, at.history, f, clause))
}

/// Outcome of a per-model validity query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    FailsAt(EvalPoint),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// True at every moment/history pair, or the first failing point in
/// evaluation order (declared moment order, then history order).
pub fn valid_in_model(model: &JstitModel, f: &Formula) -> Result<Validity, EvalError> {
    check_agents(model, f)?;
    for (m, h) in model.points() {
        if !eval(model, m, h, f, ProvesClause::Literal) {
            return Ok(Validity::FailsAt(EvalPoint { moment: m, history: h }));
        }
    }
    Ok(Validity::Valid)
}

fn check_agents(model: &JstitModel, f: &Formula) -> Result<(), EvalError> {
    match f {
        Formula::Stit(agent, _) | Formula::Prove(agent, _, _) => {
            if !model.agents().contains(agent) {
                return Err(EvalError::UnknownAgent(agent.clone()));
            }
        }
        _ => {}
    }
    for child in f.children() {
        check_agents(model, child)?;
    }
    Ok(())
}

fn eval(model: &JstitModel, m: usize, h: usize, f: &Formula, clause: ProvesClause) -> bool {
    match f {
        Formula::Atom(p) => model.valuation_holds(p, m, h),
        Formula::False => false,
        Formula::Not(g) => !eval(model, m, h, g, clause),
        Formula::And(l, r) => eval(model, m, h, l, clause) && eval(model, m, h, r, clause),
        Formula::Or(l, r) => eval(model, m, h, l, clause) || eval(model, m, h, r, clause),
        Formula::Implies(l, r) => !eval(model, m, h, l, clause) || eval(model, m, h, r, clause),
        Formula::Stit(agent, g) => {
            let agent = model.agents().index_of(agent).expect("agents checked before eval");
            match model.choice_cell_of(m, agent, h) {
                Some(cell) => cell.iter().all(|&h2| eval(model, m, h2, g, clause)),
                // h outside every cell only happens on invalid models;
                // fall back to the singleton cell.
                None => eval(model, m, h, g, clause),
            }
        }
        Formula::Box(g) => {
            model.histories_through(m).iter().all(|&h2| eval(model, m, h2, g, clause))
        }
        Formula::Diamond(g) => {
            model.histories_through(m).iter().any(|&h2| eval(model, m, h2, g, clause))
        }
        Formula::K(g) => forall_reachable(model, m, g, clause, false),
        Formula::Proves(t, g) => eval_proves(model, m, t, g, clause),
        Formula::E(t) => model.act(m, h).contains(t),
        Formula::Prove(agent, t, g) => {
            let agent_idx = model.agents().index_of(agent).expect("agents checked before eval");
            let presented_on_cell = match model.choice_cell_of(m, agent_idx, h) {
                Some(cell) => cell.iter().all(|&h2| model.act(m, h2).contains(t)),
                None => model.act(m, h).contains(t),
            };
            presented_on_cell
                && eval_proves(model, m, t, g, clause)
                && model.histories_through(m).iter().any(|&h2| !model.act(m, h2).contains(t))
        }
        Formula::Proven(t, g) => {
            model.histories_through(m).iter().all(|&h2| model.act(m, h2).contains(t))
                && eval_proves(model, m, t, g, clause)
        }
    }
}

// Truth of t:A, which depends only on the moment.
fn eval_proves(
    model: &JstitModel,
    m: usize,
    t: &crate::syntax::ProofTerm,
    g: &Formula,
    clause: ProvesClause,
) -> bool {
    model.evidence_holds(m, t, g)
        && match clause {
            ProvesClause::Literal => forall_reachable(model, m, g, clause, true),
            ProvesClause::SimplifiedK => forall_reachable(model, m, g, clause, false),
        }
}

// Truth of g at every (m', h') with m' reachable from m along R (or
// R_e when `epistemic_evidence`) and h' through m'.
fn forall_reachable(
    model: &JstitModel,
    m: usize,
    g: &Formula,
    clause: ProvesClause,
    epistemic_evidence: bool,
) -> bool {
    let rel = if epistemic_evidence { model.re() } else { model.r() };
    rel.successors(m).all(|m2| {
        model.histories_through(m2).iter().all(|&h2| eval(model, m2, h2, g, clause))
    })
}

/// Recursively replaces `Prove(j, t, A)` by `[j]Et & <>~Et & t:A` and
/// `Proven(t, A)` by `[]Et & t:A`; the result is free of the defined
/// modalities.
pub fn expand_defined(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::False | Formula::E(_) => f.clone(),
        Formula::Not(g) => Formula::not(expand_defined(g)),
        Formula::And(l, r) => Formula::and(expand_defined(l), expand_defined(r)),
        Formula::Or(l, r) => Formula::or(expand_defined(l), expand_defined(r)),
        Formula::Implies(l, r) => Formula::implies(expand_defined(l), expand_defined(r)),
        Formula::Stit(j, g) => Formula::stit(j.clone(), expand_defined(g)),
        Formula::Box(g) => Formula::boxed(expand_defined(g)),
        Formula::Diamond(g) => Formula::diamond(expand_defined(g)),
        Formula::K(g) => Formula::k(expand_defined(g)),
        Formula::Proves(t, g) => Formula::proves(t.clone(), expand_defined(g)),
        Formula::Prove(j, t, g) => Formula::and(
            Formula::and(
                Formula::stit(j.clone(), Formula::e(t.clone())),
                Formula::diamond(Formula::not(Formula::e(t.clone()))),
            ),
            Formula::proves(t.clone(), expand_defined(g)),
        ),
        Formula::Proven(t, g) => Formula::and(
            Formula::boxed(Formula::e(t.clone())),
            Formula::proves(t.clone(), expand_defined(g)),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn expansion_matches_the_definitions() {
        let prove = parse_formula("Prove(j1, x, p)", None).unwrap();
        let want = parse_formula("[j1]E x & <>~E x & x:p", None).unwrap();
        assert_eq!(expand_defined(&prove), want);

        let proven = parse_formula("Proven(x, p)", None).unwrap();
        let want = parse_formula("[]E x & x:p", None).unwrap();
        assert_eq!(expand_defined(&proven), want);

        let plain = parse_formula("p & q", None).unwrap();
        assert_eq!(expand_defined(&plain), plain);

        let nested = parse_formula("~Proven(x, Prove(j1, y, p))", None).unwrap();
        let expanded = expand_defined(&nested);
        assert!(!expanded.mentions_prove_modalities());
    }
}
