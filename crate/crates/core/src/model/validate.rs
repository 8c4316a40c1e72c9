//! The model validator: checks the eleven semantic constraints plus the
//! structural side conditions, reporting every violation with a
//! witness.

use super::JstitModel;
use crate::syntax::{Formula, ProofTerm};
use std::collections::BTreeSet;
use std::fmt;

/// The checked constraints. Names of the first eleven follow the
/// standard headings for jstit models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintId {
    HistoricalConnection,
    NoBackwardBranching,
    NoChoiceBetweenUndivided,
    IndependenceOfAgents,
    EvidenceMonotonicity,
    EvidenceClosure,
    Expansion,
    NoNewProofs,
    Divide,
    FutureMatters,
    Transparency,
    RSubsetRe,
    PartitionWellFormed,
}

impl ConstraintId {
    pub fn name(&self) -> &'static str {
        match self {
            ConstraintId::HistoricalConnection => "Historical connection",
            ConstraintId::NoBackwardBranching => "No backward branching",
            ConstraintId::NoChoiceBetweenUndivided => "No choice between undivided histories",
            ConstraintId::IndependenceOfAgents => "Independence of agents",
            ConstraintId::EvidenceMonotonicity => "Monotonicity of evidence",
            ConstraintId::EvidenceClosure => "Evidence closure properties",
            ConstraintId::Expansion => "Expansion of presented proofs",
            ConstraintId::NoNewProofs => "No new proofs guaranteed",
            ConstraintId::Divide => "Presenting a new proof makes histories divide",
            ConstraintId::FutureMatters => "Future always matters",
            ConstraintId::Transparency => "Presented proofs are epistemically transparent",
            ConstraintId::RSubsetRe => "R subset of R_e",
            ConstraintId::PartitionWellFormed => "Choice partition well-formedness",
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single constraint violation with a named witness tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub constraint: ConstraintId,
    pub witness: Vec<(&'static str, String)>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.constraint.name())?;
        for (i, (role, value)) in self.witness.iter().enumerate() {
            write!(f, "{} {role}={value}", if i == 0 { "" } else { "," })?;
        }
        Ok(())
    }
}

/// All violations found in a model; empty iff every check passed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// The set of distinct violated constraints.
    pub fn violated(&self) -> BTreeSet<ConstraintId> {
        self.violations.iter().map(|v| v.constraint).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "ok: all constraints satisfied")
        } else {
            for v in &self.violations {
                writeln!(f, "violation: {v}")?;
            }
            Ok(())
        }
    }
}

struct Checker<'a> {
    model: &'a JstitModel,
    settled: Vec<BTreeSet<ProofTerm>>,
    violations: Vec<Violation>,
}

/// Runs every check and reports all violations; violations are data,
/// not errors.
pub fn validate(model: &JstitModel) -> ValidationReport {
    let settled = (0..model.moment_count()).map(|m| model.settled_act(m)).collect();
    let mut checker = Checker { model, settled, violations: Vec::new() };
    checker.historical_connection();
    checker.no_backward_branching();
    checker.no_choice_between_undivided();
    checker.independence_of_agents();
    checker.evidence_monotonicity();
    checker.evidence_closure();
    checker.expansion();
    checker.no_new_proofs();
    checker.divide();
    checker.future_matters();
    checker.transparency();
    checker.r_subset_re();
    checker.partition_well_formed();
    ValidationReport { violations: checker.violations }
}

impl<'a> Checker<'a> {
    fn push(&mut self, constraint: ConstraintId, witness: Vec<(&'static str, String)>) {
        self.violations.push(Violation { constraint, witness });
    }

    fn moment(&self, m: usize) -> String {
        self.model.moment_name(m).to_string()
    }

    fn history(&self, h: usize) -> String {
        self.model.histories()[h].id.clone()
    }

    fn historical_connection(&mut self) {
        let n = self.model.moment_count();
        let order = self.model.order();
        for m in 0..n {
            for m1 in m + 1..n {
                let connected = (0..n).any(|m2| order.contains(m2, m) && order.contains(m2, m1));
                if !connected {
                    self.push(
                        ConstraintId::HistoricalConnection,
                        vec![("m", self.moment(m)), ("m1", self.moment(m1))],
                    );
                }
            }
        }
    }

    fn no_backward_branching(&mut self) {
        let n = self.model.moment_count();
        let order = self.model.order();
        for m in 0..n {
            for m1 in 0..n {
                for m2 in m1 + 1..n {
                    if order.contains(m1, m) && order.contains(m2, m) {
                        if !order.contains(m1, m2) && !order.contains(m2, m1) {
                            self.push(
                                ConstraintId::NoBackwardBranching,
                                vec![
                                    ("m", self.moment(m)),
                                    ("m1", self.moment(m1)),
                                    ("m2", self.moment(m2)),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }

    // Histories sharing a moment strictly above m must lie in the same
    // choice cell at m, for every agent.
    fn no_choice_between_undivided(&mut self) {
        let model = self.model;
        for m in 0..model.moment_count() {
            let hs = model.histories_through(m);
            for (i, &h) in hs.iter().enumerate() {
                for &g in &hs[i + 1..] {
                    let Some(shared) = self.shared_later_moment(m, h, g) else {
                        continue;
                    };
                    for agent in 0..model.agents().len() {
                        if model.choice_cell_of(m, agent, h) != model.choice_cell_of(m, agent, g) {
                            self.push(
                                ConstraintId::NoChoiceBetweenUndivided,
                                vec![
                                    ("m", self.moment(m)),
                                    ("m'", self.moment(shared)),
                                    ("h", self.history(h)),
                                    ("h'", self.history(g)),
                                    ("j", model.agents().name(agent).to_string()),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }

    fn shared_later_moment(&self, m: usize, h: usize, g: usize) -> Option<usize> {
        let histories = self.model.histories();
        histories[h]
            .chain
            .iter()
            .copied()
            .find(|&m2| m2 != m && self.model.order().contains(m, m2) && histories[g].passes_through(m2))
    }

    // Every selection of one cell per agent must intersect.
    fn independence_of_agents(&mut self) {
        let model = self.model;
        let agent_count = model.agents().len();
        for m in 0..model.moment_count() {
            let cells: Vec<&[Vec<usize>]> =
                (0..agent_count).map(|agent| model.choice_cells(m, agent)).collect();
            if cells.iter().any(|c| c.is_empty()) {
                continue; // malformed partitions are reported separately
            }
            let mut selection = vec![0usize; agent_count];
            'selections: loop {
                let mut intersection: Vec<usize> = cells[0][selection[0]].clone();
                for agent in 1..agent_count {
                    intersection.retain(|h| cells[agent][selection[agent]].contains(h));
                }
                if intersection.is_empty() {
                    let witness = std::iter::once(("m", self.moment(m)))
                        .chain((0..agent_count).map(|agent| {
                            (
                                "cell",
                                format!(
                                    "{}:{{{}}}",
                                    model.agents().name(agent),
                                    cells[agent][selection[agent]]
                                        .iter()
                                        .map(|&h| self.history(h))
                                        .collect::<Vec<_>>()
                                        .join(",")
                                ),
                            )
                        }))
                        .collect();
                    self.push(ConstraintId::IndependenceOfAgents, witness);
                }
                // advance the odometer over cell selections
                for agent in 0..=agent_count {
                    if agent == agent_count {
                        break 'selections;
                    }
                    selection[agent] += 1;
                    if selection[agent] < cells[agent].len() {
                        break;
                    }
                    selection[agent] = 0;
                }
            }
        }
    }

    // Explicit triples must persist along R_e; specification-induced
    // entries are moment-independent, hence automatically monotone.
    fn evidence_monotonicity(&mut self) {
        let model = self.model;
        let triples: Vec<_> = model.explicit_evidence().iter().cloned().collect();
        for (m, t, a) in triples {
            for m2 in model.re().successors(m) {
                if m2 != m && !model.evidence_holds(m2, &t, &a) {
                    self.push(
                        ConstraintId::EvidenceMonotonicity,
                        vec![
                            ("m", self.moment(m)),
                            ("m'", self.moment(m2)),
                            ("t", t.to_string()),
                            ("A", a.to_string()),
                        ],
                    );
                }
            }
        }
    }

    // Closure is checked over the finite universes: an instance of a
    // closure rule is tested when every term and formula it mentions
    // lies in the declared universes.
    fn evidence_closure(&mut self) {
        let model = self.model;
        let terms: Vec<&ProofTerm> = model.term_universe().iter().collect();
        let formulas: Vec<&Formula> = model.formula_universe().iter().collect();
        for m in 0..model.moment_count() {
            for &u in &terms {
                match u {
                    ProofTerm::App(s, t) => {
                        for &imp in &formulas {
                            let Formula::Implies(a, b) = imp else { continue };
                            if model.evidence_holds(m, s, imp)
                                && model.evidence_holds(m, t, a)
                                && !model.evidence_holds(m, u, b)
                            {
                                self.push(
                                    ConstraintId::EvidenceClosure,
                                    vec![
                                        ("rule", "application".into()),
                                        ("m", self.moment(m)),
                                        ("s", s.to_string()),
                                        ("t", t.to_string()),
                                        ("A", a.to_string()),
                                        ("B", b.to_string()),
                                    ],
                                );
                            }
                        }
                    }
                    ProofTerm::Sum(s, t) => {
                        for &a in &formulas {
                            if (model.evidence_holds(m, s, a) || model.evidence_holds(m, t, a))
                                && !model.evidence_holds(m, u, a)
                            {
                                self.push(
                                    ConstraintId::EvidenceClosure,
                                    vec![
                                        ("rule", "sum".into()),
                                        ("m", self.moment(m)),
                                        ("s", s.to_string()),
                                        ("t", t.to_string()),
                                        ("A", a.to_string()),
                                    ],
                                );
                            }
                        }
                    }
                    ProofTerm::Check(t) => {
                        for &pf in &formulas {
                            let Formula::Proves(t2, a) = pf else { continue };
                            if t2 != t.as_ref() {
                                continue;
                            }
                            if model.evidence_holds(m, t, a) && !model.evidence_holds(m, u, pf) {
                                self.push(
                                    ConstraintId::EvidenceClosure,
                                    vec![
                                        ("rule", "checker".into()),
                                        ("m", self.moment(m)),
                                        ("t", t.to_string()),
                                        ("A", a.to_string()),
                                    ],
                                );
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }

    // Nothing is erased: Act(m', h) ⊆ Act(m, h) whenever m' < m.
    fn expansion(&mut self) {
        let model = self.model;
        let order = model.order();
        for m in 0..model.moment_count() {
            for m1 in 0..model.moment_count() {
                if m1 == m || !order.contains(m1, m) {
                    continue;
                }
                for &h in model.histories_through(m) {
                    let earlier = model.act(m1, h);
                    let later = model.act(m, h);
                    if let Some(t) = earlier.iter().find(|t| !later.contains(*t)) {
                        self.push(
                            ConstraintId::Expansion,
                            vec![
                                ("m'", self.moment(m1)),
                                ("m", self.moment(m)),
                                ("h", self.history(h)),
                                ("t", t.to_string()),
                            ],
                        );
                    }
                }
            }
        }
    }

    // A settled proof at m must already occur somewhere strictly
    // earlier along a history through m.
    fn no_new_proofs(&mut self) {
        let model = self.model;
        let order = model.order();
        for m in 0..model.moment_count() {
            let settled = &self.settled[m];
            if settled.is_empty() {
                continue;
            }
            let mut sourced: BTreeSet<&ProofTerm> = BTreeSet::new();
            for m1 in 0..model.moment_count() {
                if m1 == m || !order.contains(m1, m) {
                    continue;
                }
                for &h in model.histories_through(m) {
                    sourced.extend(model.act(m1, h).iter());
                }
            }
            for t in settled {
                if !sourced.contains(t) {
                    self.push(
                        ConstraintId::NoNewProofs,
                        vec![("m", self.moment(m)), ("t", t.to_string())],
                    );
                }
            }
        }
    }

    // Undivided histories carry the same presented proofs.
    fn divide(&mut self) {
        let model = self.model;
        for m in 0..model.moment_count() {
            let hs = model.histories_through(m);
            for (i, &h) in hs.iter().enumerate() {
                for &g in &hs[i + 1..] {
                    if self.shared_later_moment(m, h, g).is_none() {
                        continue;
                    }
                    let left = model.act(m, h);
                    let right = model.act(m, g);
                    if left != right {
                        let t = left
                            .symmetric_difference(right)
                            .next()
                            .expect("unequal sets differ somewhere");
                        self.push(
                            ConstraintId::Divide,
                            vec![
                                ("m", self.moment(m)),
                                ("h", self.history(h)),
                                ("h'", self.history(g)),
                                ("t", t.to_string()),
                            ],
                        );
                    }
                }
            }
        }
    }

    fn future_matters(&mut self) {
        let model = self.model;
        for (m, m1) in model.order().pairs() {
            if !model.r().contains(m, m1) {
                self.push(
                    ConstraintId::FutureMatters,
                    vec![("m", self.moment(m)), ("m'", self.moment(m1))],
                );
            }
        }
    }

    // Settled proofs are known: along R_e the settled set may only grow.
    fn transparency(&mut self) {
        let model = self.model;
        for (m, m1) in model.re().pairs() {
            if m == m1 {
                continue;
            }
            if let Some(t) = self.settled[m].iter().find(|t| !self.settled[m1].contains(*t)) {
                self.push(
                    ConstraintId::Transparency,
                    vec![("m", self.moment(m)), ("m'", self.moment(m1)), ("t", t.to_string())],
                );
            }
        }
    }

    fn r_subset_re(&mut self) {
        let model = self.model;
        if model.r().is_subset_of(model.re()) {
            return;
        }
        for (m, m1) in model.r().pairs() {
            if !model.re().contains(m, m1) {
                self.push(
                    ConstraintId::RSubsetRe,
                    vec![("m", self.moment(m)), ("m'", self.moment(m1))],
                );
            }
        }
    }

    fn partition_well_formed(&mut self) {
        let model = self.model;
        for m in 0..model.moment_count() {
            let everyone: BTreeSet<usize> = model.histories_through(m).iter().copied().collect();
            for agent in 0..model.agents().len() {
                let cells = model.choice_cells(m, agent);
                let mut seen: BTreeSet<usize> = BTreeSet::new();
                let mut bad = cells.is_empty() && !everyone.is_empty();
                for cell in cells {
                    if cell.is_empty() {
                        bad = true;
                    }
                    for &h in cell {
                        if !seen.insert(h) {
                            bad = true; // overlapping cells
                        }
                    }
                }
                if seen != everyone {
                    bad = true;
                }
                if bad {
                    self.push(
                        ConstraintId::PartitionWellFormed,
                        vec![
                            ("m", self.moment(m)),
                            ("j", model.agents().name(agent).to_string()),
                        ],
                    );
                }
            }
        }
    }
}
