//! The JSON model document format and model construction.
//!
//! ```json
//! {"agents": ["j1"], "moments": ["m0", "m1", "m2"],
//!  "cover": [["m0", "m1"], ["m0", "m2"]],
//!  "r": [["m0", "m1"], ["m0", "m2"]],
//!  "choice": {"m0": {"j1": [["m1"], ["m2"]]}},
//!  "act": {"m0": {"m2": ["x"]}, "m2": {"m2": ["x"]}},
//!  "evidence": [["m0", "x", "p"], ["m1", "x", "p"], ["m2", "x", "p"]],
//!  "valuation": {"p": [["m2", "m2"]]},
//!  "flags": {"normal": true, "cs": "axiomatic", "unirelational": true}}
//! ```
//!
//! Histories are referenced by the name of their maximal moment. The
//! strict covering edges are closed into the temporal order; `r` and
//! `re` are closed into preorders; `re` defaults to `r`.

use super::{maximal_chains, History, JstitModel, ModelFlags, Relation};
use crate::proofs::{AxiomRange, ConstantSpec};
use crate::syntax::{
    classify_ident, parse_formula, parse_term, AgentSet, AgentSetError, Formula, IdentClass,
    ParseError, ProofTerm,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model has no moments")]
    NoMoments,
    #[error("models are capped at 64 moments")]
    TooManyMoments,
    #[error("duplicate moment id `{0}`")]
    DuplicateMoment(String),
    #[error("unknown moment `{0}`")]
    UnknownMoment(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error(transparent)]
    Agents(#[from] AgentSetError),
    #[error("cover edge ({0}, {0}) is reflexive; cover lists strict edges only")]
    ReflexiveCover(String),
    #[error("cycle through `{0}` in cover; the temporal order must be antisymmetric")]
    CoverCycle(String),
    #[error("no history has maximal moment `{0}`")]
    UnknownHistory(String),
    #[error("history reference `{0}` is ambiguous (several chains share that maximal moment)")]
    AmbiguousHistory(String),
    #[error("{context} entry at `{moment}` references history `{history}`, which does not pass through that moment")]
    HistoryNotThroughMoment { context: &'static str, moment: String, history: String },
    #[error("valuation key `{0}` is not an atom identifier")]
    NotAnAtom(String),
    #[error("unknown constant specification `{0}` (expected empty, axiomatic or iterated)")]
    UnknownCsPolicy(String),
    #[error("unknown normality range `{0}` (expected A0-A9 or A1-A9)")]
    UnknownNormalityRange(String),
    #[error("flags claim a unirelational model but re differs from r")]
    UnirelationalMismatch,
    #[error("in {context} `{text}`: {source}")]
    Parse { context: &'static str, text: String, source: ParseError },
}

/// Index-level model components, the input of [`ModelParts::build`].
/// Histories are referenced by the index of their maximal moment.
#[derive(Debug, Clone, Default)]
pub struct ModelParts {
    pub moments: Vec<String>,
    pub cover: Vec<(usize, usize)>,
    pub agents: Option<AgentSet>,
    /// `(moment, agent index)` to cells of leaf moment indices.
    pub choice: BTreeMap<(usize, usize), Vec<Vec<usize>>>,
    /// `(moment, leaf moment index)` to presented terms.
    pub act: BTreeMap<(usize, usize), BTreeSet<ProofTerm>>,
    pub r_edges: Vec<(usize, usize)>,
    pub re_edges: Option<Vec<(usize, usize)>>,
    pub evidence: BTreeSet<(usize, ProofTerm, Formula)>,
    /// Atom to `(moment, leaf moment index)` pairs.
    pub valuation: BTreeMap<String, BTreeSet<(usize, usize)>>,
    pub universe_terms: Vec<ProofTerm>,
    pub universe_formulas: Vec<Formula>,
    pub flags: ModelFlags,
}

impl ModelParts {
    /// Closes the orders, derives histories, resolves history
    /// references and checks the structural invariants.
    pub fn build(self) -> Result<JstitModel, LoadError> {
        let n = self.moments.len();
        if n == 0 {
            return Err(LoadError::NoMoments);
        }
        if n > 64 {
            return Err(LoadError::TooManyMoments);
        }
        let mut moment_index = BTreeMap::new();
        for (i, name) in self.moments.iter().enumerate() {
            if moment_index.insert(name.clone(), i).is_some() {
                return Err(LoadError::DuplicateMoment(name.clone()));
            }
        }

        let mut cover: Vec<(usize, usize)> = self.cover;
        cover.sort_unstable();
        cover.dedup();
        for &(a, b) in &cover {
            if a == b {
                return Err(LoadError::ReflexiveCover(self.moments[a].clone()));
            }
        }
        let mut order = Relation::new(n);
        for &(a, b) in &cover {
            order.insert(a, b);
        }
        order.close_reflexive_transitive();
        for i in 0..n {
            for j in 0..n {
                if i != j && order.contains(i, j) && order.contains(j, i) {
                    return Err(LoadError::CoverCycle(self.moments[i].clone()));
                }
            }
        }

        let (chains, hasse_children) = maximal_chains(&order);
        let mut leaf_histories: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (idx, chain) in chains.iter().enumerate() {
            leaf_histories.entry(*chain.last().expect("chains are non-empty")).or_default().push(idx);
        }
        let histories: Vec<History> = chains
            .iter()
            .enumerate()
            .map(|(idx, chain)| {
                let leaf = *chain.last().expect("chains are non-empty");
                let twins = &leaf_histories[&leaf];
                let id = if twins.len() == 1 {
                    self.moments[leaf].clone()
                } else {
                    let k = twins.iter().position(|&h| h == idx).expect("history is listed");
                    if k == 0 {
                        self.moments[leaf].clone()
                    } else {
                        format!("{}#{}", self.moments[leaf], k + 1)
                    }
                };
                History { id, leaf, chain: chain.clone() }
            })
            .collect();
        let mut hist_through: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (idx, h) in histories.iter().enumerate() {
            for &m in &h.chain {
                hist_through[m].push(idx);
            }
        }

        let resolve_leaf = |leaf: usize| -> Result<usize, LoadError> {
            match leaf_histories.get(&leaf).map(Vec::as_slice) {
                Some([single]) => Ok(*single),
                Some(_) => Err(LoadError::AmbiguousHistory(self.moments[leaf].clone())),
                None => Err(LoadError::UnknownHistory(self.moments[leaf].clone())),
            }
        };
        let through_check = |context: &'static str, m: usize, h: usize| -> Result<(), LoadError> {
            if histories[h].passes_through(m) {
                Ok(())
            } else {
                Err(LoadError::HistoryNotThroughMoment {
                    context,
                    moment: self.moments[m].clone(),
                    history: histories[h].id.clone(),
                })
            }
        };

        let agents = self.agents.ok_or(AgentSetError::Empty)?;

        // Materialise every (moment, agent) partition; absent entries
        // default to the vacuous partition {H_m}.
        let mut choice: Vec<Vec<Vec<Vec<usize>>>> = (0..n)
            .map(|m| (0..agents.len()).map(|_| vec![hist_through[m].clone()]).collect())
            .collect();
        for ((m, agent), cells) in &self.choice {
            let mut resolved: Vec<Vec<usize>> = Vec::new();
            for cell in cells {
                let mut members = Vec::new();
                for &leaf in cell {
                    let h = resolve_leaf(leaf)?;
                    through_check("choice", *m, h)?;
                    members.push(h);
                }
                members.sort_unstable();
                members.dedup();
                resolved.push(members);
            }
            resolved.sort();
            choice[*m][*agent] = resolved;
        }

        let mut act: BTreeMap<(usize, usize), BTreeSet<ProofTerm>> = BTreeMap::new();
        for ((m, leaf), terms) in &self.act {
            let h = resolve_leaf(*leaf)?;
            through_check("act", *m, h)?;
            if !terms.is_empty() {
                act.insert((*m, h), terms.clone());
            }
        }

        let mut valuation: BTreeMap<String, BTreeSet<(usize, usize)>> = BTreeMap::new();
        for (atom, points) in &self.valuation {
            if classify_ident(atom) != IdentClass::Atom {
                return Err(LoadError::NotAnAtom(atom.clone()));
            }
            let mut resolved = BTreeSet::new();
            for &(m, leaf) in points {
                let h = resolve_leaf(leaf)?;
                through_check("valuation", m, h)?;
                resolved.insert((m, h));
            }
            valuation.insert(atom.clone(), resolved);
        }

        let mut r = Relation::new(n);
        for &(a, b) in &self.r_edges {
            r.insert(a, b);
        }
        r.close_reflexive_transitive();
        let re = match &self.re_edges {
            None => r.clone(),
            Some(edges) => {
                let mut re = Relation::new(n);
                for &(a, b) in edges {
                    re.insert(a, b);
                }
                re.close_reflexive_transitive();
                re
            }
        };
        let mut flags = self.flags;
        if flags.unirelational && self.re_edges.is_some() && re != r {
            return Err(LoadError::UnirelationalMismatch);
        }
        flags.unirelational = re == r;

        Ok(JstitModel::from_components(
            self.moments,
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
            self.evidence,
            valuation,
            self.universe_terms,
            self.universe_formulas,
            flags,
        ))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    agents: Vec<String>,
    moments: Vec<String>,
    cover: Vec<(String, String)>,
    r: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    re: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    choice: Option<BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    act: Option<BTreeMap<String, BTreeMap<String, Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    evidence: Option<Vec<(String, String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    valuation: Option<BTreeMap<String, Vec<(String, String)>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    universe: Option<UniverseDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flags: Option<FlagsDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UniverseDoc {
    #[serde(default)]
    terms: Vec<String>,
    #[serde(default)]
    formulas: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unirelational: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normality_range: Option<String>,
}

/// Loads a model from its JSON document.
pub fn load_model(document: &str) -> Result<JstitModel, LoadError> {
    let doc: ModelDoc = serde_json::from_str(document)?;

    let mut moment_index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, name) in doc.moments.iter().enumerate() {
        if moment_index.insert(name.as_str(), i).is_some() {
            return Err(LoadError::DuplicateMoment(name.clone()));
        }
    }
    let agents = AgentSet::new(doc.agents.iter().cloned())?;
    let moment = |name: &str| -> Result<usize, LoadError> {
        moment_index.get(name).copied().ok_or_else(|| LoadError::UnknownMoment(name.to_string()))
    };
    let edges = |pairs: &[(String, String)]| -> Result<Vec<(usize, usize)>, LoadError> {
        pairs.iter().map(|(a, b)| Ok((moment(a)?, moment(b)?))).collect()
    };
    let term = |text: &str| -> Result<ProofTerm, LoadError> {
        parse_term(text).map_err(|source| LoadError::Parse {
            context: "term",
            text: text.to_string(),
            source,
        })
    };
    let formula = |text: &str| -> Result<Formula, LoadError> {
        parse_formula(text, Some(&agents)).map_err(|source| LoadError::Parse {
            context: "formula",
            text: text.to_string(),
            source,
        })
    };

    let mut parts = ModelParts {
        moments: doc.moments.clone(),
        cover: edges(&doc.cover)?,
        r_edges: edges(&doc.r)?,
        re_edges: doc.re.as_deref().map(edges).transpose()?,
        ..ModelParts::default()
    };

    if let Some(choice) = &doc.choice {
        for (m, per_agent) in choice {
            let m = moment(m)?;
            for (agent, cells) in per_agent {
                let agent = agents
                    .index_of(agent)
                    .ok_or_else(|| LoadError::UnknownAgent(agent.clone()))?;
                let cells: Vec<Vec<usize>> = cells
                    .iter()
                    .map(|cell| cell.iter().map(|leaf| moment(leaf)).collect())
                    .collect::<Result<_, _>>()?;
                parts.choice.insert((m, agent), cells);
            }
        }
    }
    if let Some(act) = &doc.act {
        for (m, per_leaf) in act {
            let m = moment(m)?;
            for (leaf, terms) in per_leaf {
                let leaf = moment(leaf)?;
                let terms: BTreeSet<ProofTerm> =
                    terms.iter().map(|t| term(t)).collect::<Result<_, _>>()?;
                parts.act.insert((m, leaf), terms);
            }
        }
    }
    if let Some(evidence) = &doc.evidence {
        for (m, t, a) in evidence {
            parts.evidence.insert((moment(m)?, term(t)?, formula(a)?));
        }
    }
    if let Some(valuation) = &doc.valuation {
        for (atom, points) in valuation {
            let points: BTreeSet<(usize, usize)> = points
                .iter()
                .map(|(m, leaf)| Ok((moment(m)?, moment(leaf)?)))
                .collect::<Result<_, LoadError>>()?;
            parts.valuation.insert(atom.clone(), points);
        }
    }
    if let Some(universe) = &doc.universe {
        parts.universe_terms =
            universe.terms.iter().map(|t| term(t)).collect::<Result<_, _>>()?;
        parts.universe_formulas =
            universe.formulas.iter().map(|a| formula(a)).collect::<Result<_, _>>()?;
    }

    let mut flags = ModelFlags::default();
    flags.unirelational = doc.re.is_none();
    if let Some(doc_flags) = &doc.flags {
        if let Some(normal) = doc_flags.normal {
            flags.normal = normal;
        }
        if let Some(policy) = &doc_flags.cs {
            flags.cs = match policy.as_str() {
                "empty" => ConstantSpec::empty(),
                "axiomatic" => ConstantSpec::axiomatic(),
                "iterated" => ConstantSpec::iterated(),
                other => return Err(LoadError::UnknownCsPolicy(other.to_string())),
            };
        }
        if let Some(range) = &doc_flags.normality_range {
            let range: AxiomRange = range
                .parse()
                .map_err(|()| LoadError::UnknownNormalityRange(range.clone()))?;
            flags.cs = flags.cs.with_range(range);
        }
        if let Some(unirelational) = doc_flags.unirelational {
            flags.unirelational = unirelational;
        }
    }
    parts.agents = Some(agents);
    parts.flags = flags;
    parts.build()
}

/// Serialises a model back into the document format. Intended for
/// validator-clean models, whose history ids are plain moment names.
pub(crate) fn to_document(model: &JstitModel) -> serde_json::Value {
    let name = |m: usize| model.moment_name(m).to_string();
    let hist_leaf = |h: usize| name(model.histories()[h].leaf);
    let rel_pairs = |rel: &Relation| -> Vec<(String, String)> {
        rel.pairs().filter(|(a, b)| a != b).map(|(a, b)| (name(a), name(b))).collect()
    };

    let mut choice: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>> = BTreeMap::new();
    for m in 0..model.moment_count() {
        for agent in 0..model.agents().len() {
            let cells = model.choice_cells(m, agent);
            if cells.len() == 1 {
                continue; // vacuous partition is the default
            }
            let rendered: Vec<Vec<String>> =
                cells.iter().map(|cell| cell.iter().map(|&h| hist_leaf(h)).collect()).collect();
            choice
                .entry(name(m))
                .or_default()
                .insert(model.agents().name(agent).to_string(), rendered);
        }
    }

    let mut act: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for (&(m, h), terms) in model.act_entries() {
        act.entry(name(m))
            .or_default()
            .insert(hist_leaf(h), terms.iter().map(|t| t.to_string()).collect());
    }

    let evidence: Vec<(String, String, String)> = model
        .explicit_evidence()
        .iter()
        .map(|(m, t, a)| (name(*m), t.to_string(), a.to_string()))
        .collect();

    let valuation: BTreeMap<String, Vec<(String, String)>> = model
        .valuation()
        .iter()
        .map(|(atom, points)| {
            (atom.clone(), points.iter().map(|&(m, h)| (name(m), hist_leaf(h))).collect())
        })
        .collect();

    let doc = ModelDoc {
        agents: model.agents().iter().map(str::to_string).collect(),
        moments: model.moments().to_vec(),
        cover: model.cover().iter().map(|&(a, b)| (name(a), name(b))).collect(),
        r: rel_pairs(model.r()),
        re: if model.re() == model.r() { None } else { Some(rel_pairs(model.re())) },
        choice: if choice.is_empty() { None } else { Some(choice) },
        act: if act.is_empty() { None } else { Some(act) },
        evidence: if evidence.is_empty() { None } else { Some(evidence) },
        valuation: if valuation.is_empty() { None } else { Some(valuation) },
        universe: Some(UniverseDoc {
            terms: model.term_universe().iter().map(|t| t.to_string()).collect(),
            formulas: model.formula_universe().iter().map(|f| f.to_string()).collect(),
        }),
        flags: Some(FlagsDoc {
            normal: Some(model.flags().normal),
            cs: Some(
                match model.flags().cs.policy {
                    crate::proofs::CsPolicy::Empty => "empty",
                    crate::proofs::CsPolicy::AxiomaticDepth1 => "axiomatic",
                    crate::proofs::CsPolicy::IteratedAxiomatic => "iterated",
                    // The document format names the three standard policies;
                    // explicit lists are a library-only construction.
                    crate::proofs::CsPolicy::ExplicitList(_) => "axiomatic",
                }
                .to_string(),
            ),
            unirelational: Some(model.flags().unirelational),
            normality_range: Some(model.flags().cs.range.to_string()),
        }),
    };
    serde_json::to_value(doc).expect("document serialisation cannot fail")
}

impl JstitModel {
    /// The model rendered in the JSON document format.
    pub fn to_json(&self) -> serde_json::Value {
        to_document(self)
    }
}
