//! Finite jstit models: representation, loading, history derivation and
//! the validator for the semantic constraints.

mod load;
mod validate;

pub use load::{load_model, LoadError, ModelParts};
pub use validate::{validate, ConstraintId, ValidationReport, Violation};

use crate::proofs::{cs_licenses_entry, ConstantSpec};
use crate::syntax::{closure_universe, AgentSet, Formula, ProofTerm};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

/// A binary relation over moment indices, stored as bitset rows. Models
/// are capped at 64 moments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    rows: Vec<u64>,
}

impl Relation {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64, "relations support at most 64 moments");
        Relation { n, rows: vec![0; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut rel = Relation::new(n);
        for i in 0..n {
            rel.insert(i, i);
        }
        rel
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i] & (1 << j) != 0
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.rows[i] |= 1 << j;
    }

    /// Closes the relation reflexively and transitively, in place.
    pub fn close_reflexive_transitive(&mut self) {
        for i in 0..self.n {
            self.rows[i] |= 1 << i;
        }
        // Warshall over bitset rows.
        for k in 0..self.n {
            for i in 0..self.n {
                if self.rows[i] & (1 << k) != 0 {
                    self.rows[i] |= self.rows[k];
                }
            }
        }
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    /// All related ordered pairs, in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n)
            .flat_map(move |i| (0..self.n).filter(move |&j| self.contains(i, j)).map(move |j| (i, j)))
    }

    /// Successors of `i`, ascending.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.contains(i, j))
    }
}

/// A maximal chain of moments, identified by its maximal moment. When a
/// model violates no-backward-branching two chains can share a maximal
/// moment; ids then get a `#k` suffix so they stay unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct History {
    pub id: String,
    /// Index of the maximal moment.
    pub leaf: usize,
    /// Moment indices in ascending order along the chain.
    pub chain: Vec<usize>,
}

impl History {
    pub fn passes_through(&self, moment: usize) -> bool {
        self.chain.contains(&moment)
    }
}

/// Model-level switches: implicit normality, the constant specification
/// realising it, and the unirelational claim `R_e = R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFlags {
    pub normal: bool,
    pub cs: ConstantSpec,
    pub unirelational: bool,
}

impl Default for ModelFlags {
    fn default() -> Self {
        ModelFlags { normal: true, cs: ConstantSpec::axiomatic(), unirelational: true }
    }
}

/// A finite jstit model. Immutable once built; all queries are
/// read-only.
#[derive(Debug, Clone, PartialEq)]
pub struct JstitModel {
    moments: Vec<String>,
    moment_index: BTreeMap<String, usize>,
    cover: Vec<(usize, usize)>,
    order: Relation,
    hasse_children: Vec<Vec<usize>>,
    agents: AgentSet,
    histories: Vec<History>,
    hist_through: Vec<Vec<usize>>,
    /// Fully materialised: `choice[m][agent]` is the cell list.
    choice: Vec<Vec<Vec<Vec<usize>>>>,
    act: BTreeMap<(usize, usize), BTreeSet<ProofTerm>>,
    r: Relation,
    re: Relation,
    evidence: BTreeSet<(usize, ProofTerm, Formula)>,
    valuation: BTreeMap<String, BTreeSet<(usize, usize)>>,
    term_universe: BTreeSet<ProofTerm>,
    formula_universe: BTreeSet<Formula>,
    flags: ModelFlags,
}

fn empty_term_set() -> &'static BTreeSet<ProofTerm> {
    static EMPTY: OnceLock<BTreeSet<ProofTerm>> = OnceLock::new();
    EMPTY.get_or_init(BTreeSet::new)
}

impl JstitModel {
    pub fn moment_count(&self) -> usize {
        self.moments.len()
    }

    pub fn moments(&self) -> &[String] {
        &self.moments
    }

    pub fn moment_index(&self, name: &str) -> Option<usize> {
        self.moment_index.get(name).copied()
    }

    pub fn moment_name(&self, idx: usize) -> &str {
        &self.moments[idx]
    }

    pub fn agents(&self) -> &AgentSet {
        &self.agents
    }

    pub fn order(&self) -> &Relation {
        &self.order
    }

    pub fn cover(&self) -> &[(usize, usize)] {
        &self.cover
    }

    pub fn r(&self) -> &Relation {
        &self.r
    }

    pub fn re(&self) -> &Relation {
        &self.re
    }

    /// All histories, sorted by (leaf index, chain).
    pub fn histories(&self) -> &[History] {
        &self.histories
    }

    /// Indices of the histories passing through `m`, ascending.
    pub fn histories_through(&self, m: usize) -> &[usize] {
        &self.hist_through[m]
    }

    pub fn history_index(&self, id: &str) -> Option<usize> {
        self.histories.iter().position(|h| h.id == id)
    }

    /// The choice partition of `H_m` for the given agent; absent input
    /// entries default to the vacuous partition `{H_m}`.
    pub fn choice_cells(&self, m: usize, agent: usize) -> &[Vec<usize>] {
        &self.choice[m][agent]
    }

    /// The cell of the partition containing history `h`, if any.
    pub fn choice_cell_of(&self, m: usize, agent: usize, h: usize) -> Option<&[usize]> {
        self.choice[m][agent]
            .iter()
            .find(|cell| cell.contains(&h))
            .map(Vec::as_slice)
    }

    /// The presented-proof set `Act(m, h)`; absent entries denote the
    /// empty set.
    pub fn act(&self, m: usize, h: usize) -> &BTreeSet<ProofTerm> {
        self.act.get(&(m, h)).unwrap_or_else(|| empty_term_set())
    }

    pub fn act_entries(&self) -> impl Iterator<Item = (&(usize, usize), &BTreeSet<ProofTerm>)> {
        self.act.iter()
    }

    /// Terms presented on every history through `m`.
    pub fn settled_act(&self, m: usize) -> BTreeSet<ProofTerm> {
        let mut histories = self.hist_through[m].iter();
        let Some(&first) = histories.next() else {
            return BTreeSet::new();
        };
        let mut common = self.act(m, first).clone();
        for &h in histories {
            common = common.intersection(self.act(m, h)).cloned().collect();
        }
        common
    }

    pub fn explicit_evidence(&self) -> &BTreeSet<(usize, ProofTerm, Formula)> {
        &self.evidence
    }

    /// Membership of `a` in `E(m, t)`: an explicit evidence triple, or a
    /// constant-specification entry when the model is flagged normal.
    pub fn evidence_holds(&self, m: usize, t: &ProofTerm, a: &Formula) -> bool {
        if self.evidence.contains(&(m, t.clone(), a.clone())) {
            return true;
        }
        self.flags.normal && cs_licenses_entry(&self.flags.cs, t, a)
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<(usize, usize)>> {
        &self.valuation
    }

    pub fn valuation_holds(&self, atom: &str, m: usize, h: usize) -> bool {
        self.valuation.get(atom).is_some_and(|points| points.contains(&(m, h)))
    }

    pub fn term_universe(&self) -> &BTreeSet<ProofTerm> {
        &self.term_universe
    }

    pub fn formula_universe(&self) -> &BTreeSet<Formula> {
        &self.formula_universe
    }

    pub fn flags(&self) -> &ModelFlags {
        &self.flags
    }

    pub fn set_cs(&mut self, cs: ConstantSpec) {
        self.flags.cs = cs;
    }

    /// Moment-history index pairs in evaluation order: declared moment
    /// order first, history order second.
    pub fn points(&self) -> Vec<(usize, usize)> {
        let mut points = Vec::new();
        for m in 0..self.moments.len() {
            for &h in &self.hist_through[m] {
                points.push((m, h));
            }
        }
        points
    }

    /// True when `h` and `g` pass through a common moment strictly
    /// later than `m`; `h = g` asks whether `h` continues past `m`.
    pub fn share_later_moment(&self, m: usize, h: usize, g: usize) -> bool {
        self.histories[h].chain.iter().any(|&m2| {
            m2 != m
                && self.order.contains(m, m2)
                && (h == g || self.histories[g].passes_through(m2))
        })
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_components(
        moments: Vec<String>,
        moment_index: BTreeMap<String, usize>,
        cover: Vec<(usize, usize)>,
        order: Relation,
        hasse_children: Vec<Vec<usize>>,
        agents: AgentSet,
        histories: Vec<History>,
        hist_through: Vec<Vec<usize>>,
        choice: Vec<Vec<Vec<Vec<usize>>>>,
        act: BTreeMap<(usize, usize), BTreeSet<ProofTerm>>,
        r: Relation,
        re: Relation,
        evidence: BTreeSet<(usize, ProofTerm, Formula)>,
        valuation: BTreeMap<String, BTreeSet<(usize, usize)>>,
        universe_terms: Vec<ProofTerm>,
        universe_formulas: Vec<Formula>,
        flags: ModelFlags,
    ) -> Self {
        // Universes: closure of evidence, act and valuation seeds plus
        // the declared extras.
        let mut seed_formulas: Vec<Formula> = universe_formulas;
        let mut seed_terms: Vec<ProofTerm> = universe_terms;
        for (_, t, a) in &evidence {
            seed_terms.push(t.clone());
            seed_formulas.push(a.clone());
        }
        for terms in act.values() {
            seed_terms.extend(terms.iter().cloned());
        }
        for atom in valuation.keys() {
            seed_formulas.push(Formula::Atom(atom.clone()));
        }
        let (formula_universe, term_universe) = closure_universe(&seed_formulas, &seed_terms);

        JstitModel {
            moments,
            moment_index,
            cover,
            order,
            hasse_children,
            agents,
            histories,
            hist_through,
            choice,
            act,
            r,
            re,
            evidence,
            valuation,
            term_universe,
            formula_universe,
            flags,
        }
    }

    pub(crate) fn hasse_children(&self, m: usize) -> &[usize] {
        &self.hasse_children[m]
    }
}

/// Maximal chains of a (small) partial order, each returned ascending,
/// plus the Hasse children lists.
///
/// Chains are saturated paths in the Hasse diagram from a minimal to a
/// maximal element, which is correct on any finite order, including
/// inputs that violate the tree constraints.
pub(crate) fn maximal_chains(order: &Relation) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let n = order.len();
    let mut hasse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i == j || !order.contains(i, j) {
                continue;
            }
            let intermediate =
                (0..n).any(|k| k != i && k != j && order.contains(i, k) && order.contains(k, j));
            if !intermediate {
                hasse[i].push(j);
            }
        }
    }
    let minimal: Vec<usize> =
        (0..n).filter(|&j| !(0..n).any(|i| i != j && order.contains(i, j))).collect();
    let mut chains = Vec::new();
    let mut stack: Vec<Vec<usize>> = minimal.into_iter().map(|m| vec![m]).collect();
    stack.reverse();
    while let Some(path) = stack.pop() {
        let last = *path.last().expect("paths are non-empty");
        if hasse[last].is_empty() {
            chains.push(path);
            continue;
        }
        for &child in hasse[last].iter().rev() {
            let mut extended = path.clone();
            extended.push(child);
            stack.push(extended);
        }
    }
    chains.sort_by(|a, b| (a.last(), a.clone()).cmp(&(b.last(), b.clone())));
    (chains, hasse)
}
