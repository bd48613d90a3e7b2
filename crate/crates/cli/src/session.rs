//! Interactive refinement sessions: a tree of refinements rooted at the input
//! specification, each node caching its verdict and counter-strategy.

use serde::{Deserialize, Serialize};

use gr1_core::arena::build_arena_with_limit;
use gr1_core::candidates::{CandidateAssumption, VariableSubsets};
use gr1_core::refine::{candidates_for, check_consistency_with_limit, refine_search, SearchConfig, SearchMode, SearchReport};
use gr1_core::solver::{solve_realizability, MooreCounterStrategy};
use gr1_core::specml::{parse_part, parse_spec, parse_var_list, Gr1Part, Gr1Spec, Owner, PartClass, Vars};

use crate::dot::{counterstrategy_edges, state_predicates};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Internal(String),
}

macro_rules! bad_request_from {
    ($($t:ty),*) => {$(
        impl From<$t> for ApiError {
            fn from(e: $t) -> Self {
                ApiError::BadRequest(e.to_string())
            }
        }
    )*};
}

bad_request_from!(
    gr1_core::Error,
    gr1_core::specml::ParseError,
    gr1_core::arena::StateSpaceLimitExceeded,
    gr1_core::refine::SearchError
);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    pub id: usize,
    pub predicate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterStrategyJson {
    pub states: Vec<StateJson>,
    pub edges: Vec<[usize; 2]>,
    pub initial: usize,
}

impl CounterStrategyJson {
    pub fn new(cs: &MooreCounterStrategy) -> Self {
        CounterStrategyJson {
            states: state_predicates(cs)
                .into_iter()
                .enumerate()
                .map(|(id, predicate)| StateJson { id, predicate })
                .collect(),
            edges: counterstrategy_edges(cs).into_iter().map(|(s, t)| [s, t]).collect(),
            initial: cs.initial,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateView {
    pub index: usize,
    pub formula: String,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeView {
    pub id: usize,
    pub parent: Option<usize>,
    pub conjuncts: Vec<String>,
    pub consistent: bool,
    pub realizable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterstrategy: Option<CounterStrategyJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeView {
    pub id: String,
    pub current: usize,
    pub nodes: Vec<NodeView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplyView {
    pub node_id: usize,
    pub realizable: bool,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterstrategy: Option<CounterStrategyJson>,
}

/// On-disk form: the conjunct lists are enough to rebuild every node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistedSession {
    pub id: String,
    pub spec_text: String,
    pub subsets: VariableSubsets,
    pub current: usize,
    pub nodes: Vec<PersistedNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistedNode {
    pub parent: Option<usize>,
    pub conjuncts: Vec<String>,
}

struct Node {
    parent: Option<usize>,
    parts: Vec<Gr1Part>,
    formulas: Vec<String>,
    consistent: bool,
    realizable: bool,
    cs: Option<MooreCounterStrategy>,
}

pub struct Session {
    id: String,
    spec_text: String,
    spec: Gr1Spec,
    nodes: Vec<Node>,
    current: usize,
    subsets: VariableSubsets,
    state_limit: usize,
}

/// Parses a comma separated list of environment variable names.
pub fn parse_subset(text: &str, vars: &Vars) -> Result<Vec<usize>, ApiError> {
    let list = parse_var_list(text, vars)?;
    if let Some(&i) = list.iter().find(|&&i| i >= vars.env_count()) {
        return Err(ApiError::BadRequest(format!("`{}` is not an environment variable", vars.name(i))));
    }
    Ok(list)
}

fn parse_assumption(formula: &str, vars: &Vars) -> Result<Gr1Part, ApiError> {
    let class = if formula.starts_with("GF(") { PartClass::Liveness } else { PartClass::Trans };
    Ok(parse_part(formula, vars, Owner::Env, class)?)
}

impl Session {
    pub fn new(id: String, spec_text: String, state_limit: usize) -> Result<Session, ApiError> {
        let spec = parse_spec(&spec_text)?;
        let subsets = VariableSubsets::all(&spec.vars);
        let mut s = Session { id, spec_text, spec, nodes: Vec::new(), current: 0, subsets, state_limit };
        let root = s.evaluate(None, Vec::new(), Vec::new())?;
        s.nodes.push(root);
        Ok(s)
    }

    pub fn restore(p: &PersistedSession, state_limit: usize) -> Result<Session, ApiError> {
        let mut s = Session::new(p.id.clone(), p.spec_text.clone(), state_limit)?;
        let ni = s.spec.vars.env_count();
        let sub = &p.subsets;
        if [&sub.p1, &sub.p2, &sub.p3, &sub.p4].iter().any(|v| v.iter().any(|&i| i >= ni)) {
            return Err(ApiError::BadRequest("subsets must name environment variables".into()));
        }
        s.subsets = sub.clone();
        for (k, n) in p.nodes.iter().enumerate().skip(1) {
            if !n.parent.is_some_and(|q| q < k) {
                return Err(ApiError::BadRequest(format!("node {k} has an invalid parent")));
            }
            let parts = n
                .conjuncts
                .iter()
                .map(|f| parse_assumption(f, &s.spec.vars))
                .collect::<Result<Vec<_>, _>>()?;
            let node = s.evaluate(n.parent, parts, n.conjuncts.clone())?;
            s.nodes.push(node);
        }
        if p.current >= s.nodes.len() {
            return Err(ApiError::BadRequest(format!("unknown node {}", p.current)));
        }
        s.current = p.current;
        Ok(s)
    }

    pub fn persisted(&self) -> PersistedSession {
        PersistedSession {
            id: self.id.clone(),
            spec_text: self.spec_text.clone(),
            subsets: self.subsets.clone(),
            current: self.current,
            nodes: self
                .nodes
                .iter()
                .map(|n| PersistedNode { parent: n.parent, conjuncts: n.formulas.clone() })
                .collect(),
        }
    }

    fn evaluate(&self, parent: Option<usize>, parts: Vec<Gr1Part>, formulas: Vec<String>) -> Result<Node, ApiError> {
        let consistent = check_consistency_with_limit(&self.spec, &parts, self.state_limit)?;
        let arena = build_arena_with_limit(&self.spec.with_assumptions(&parts), self.state_limit)?;
        let res = solve_realizability(&arena);
        Ok(Node { parent, parts, formulas, consistent, realizable: res.realizable(), cs: res.counter_strategy })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn spec(&self) -> &Gr1Spec {
        &self.spec
    }

    pub fn subsets(&self) -> &VariableSubsets {
        &self.subsets
    }

    pub fn current(&self) -> usize {
        self.current
    }

    pub fn node(&self, id: usize) -> Result<NodeView, ApiError> {
        let n = self.nodes.get(id).ok_or_else(|| ApiError::NotFound(format!("unknown node {id}")))?;
        Ok(NodeView {
            id,
            parent: n.parent,
            conjuncts: n.formulas.clone(),
            consistent: n.consistent,
            realizable: n.realizable,
            counterstrategy: n.cs.as_ref().map(CounterStrategyJson::new),
        })
    }

    pub fn tree(&self) -> TreeView {
        TreeView {
            id: self.id.clone(),
            current: self.current,
            nodes: (0..self.nodes.len()).map(|i| self.node(i).unwrap()).collect(),
        }
    }

    fn current_candidates(&self) -> Result<Vec<CandidateAssumption>, ApiError> {
        let node = &self.nodes[self.current];
        let cs = node
            .cs
            .as_ref()
            .ok_or_else(|| ApiError::Conflict(format!("node {} is realizable", self.current)))?;
        Ok(candidates_for(cs, None, &self.subsets))
    }

    /// Candidates ruling out the current node's counter-strategy. The subsets
    /// are remembered for the next `apply`.
    pub fn candidates(&mut self, subsets: VariableSubsets) -> Result<Vec<CandidateView>, ApiError> {
        self.subsets = subsets;
        let base = &self.nodes[self.current].parts;
        self.current_candidates()?
            .into_iter()
            .enumerate()
            .map(|(index, c)| {
                let mut parts = base.clone();
                parts.push(c.part.clone());
                Ok(CandidateView {
                    index,
                    formula: c.formula(&self.spec.vars),
                    consistent: check_consistency_with_limit(&self.spec, &parts, self.state_limit)?,
                })
            })
            .collect()
    }

    pub fn apply(&mut self, index: usize) -> Result<ApplyView, ApiError> {
        let cands = self.current_candidates()?;
        let c = cands
            .get(index)
            .ok_or_else(|| ApiError::BadRequest(format!("no candidate {index}")))?;
        let parent = &self.nodes[self.current];
        let mut formulas = parent.formulas.clone();
        formulas.push(c.formula(&self.spec.vars));
        let existing = self
            .nodes
            .iter()
            .position(|n| n.parent == Some(self.current) && n.formulas == formulas);
        let id = match existing {
            Some(id) => id,
            None => {
                let mut parts = parent.parts.clone();
                parts.push(c.part.clone());
                let node = self.evaluate(Some(self.current), parts, formulas)?;
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        };
        self.current = id;
        let n = &self.nodes[id];
        Ok(ApplyView {
            node_id: id,
            realizable: n.realizable,
            consistent: n.consistent,
            counterstrategy: n.cs.as_ref().map(CounterStrategyJson::new),
        })
    }

    pub fn back(&mut self, node_id: usize) -> Result<NodeView, ApiError> {
        let view = self.node(node_id)?;
        self.current = node_id;
        Ok(view)
    }

    /// Automatic search on the input specification with the session subsets.
    pub fn auto(&self, alpha: usize, beta: Option<usize>, mode: SearchMode) -> Result<SearchReport, ApiError> {
        let cfg = SearchConfig {
            beta,
            mode,
            state_limit: self.state_limit,
            ..SearchConfig::new(alpha, self.subsets.clone())
        };
        Ok(refine_search(&self.spec, &cfg)?.1)
    }
}
