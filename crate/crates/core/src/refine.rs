//! Consistency checking and breadth-first search for refinements.

use std::collections::{HashSet, VecDeque};
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::abstraction::abstract_fts;
use crate::arena::{build_arena_with_limit, StateSpaceLimitExceeded, DEFAULT_STATE_LIMIT};
use crate::candidates::{generate_candidates, CandidateAssumption, VariableSubsets};
use crate::graph::fair_scc_exists;
use crate::patterns::{default_beta, generate_patterns};
use crate::rules::Rules;
use crate::solver::{decide, solve_realizability, MooreCounterStrategy, Winner};
use crate::specml::{Gr1Part, Gr1Spec};
use crate::valuation::Valuation;

/// Whether some infinite word satisfies the environment part of `spec`
/// together with `psi`. The graph over all valuations allowed by the
/// environment rules is searched for a reachable cycle that meets every
/// environment liveness set.
pub fn check_consistency(spec: &Gr1Spec, psi: &[Gr1Part]) -> Result<bool, StateSpaceLimitExceeded> {
    check_consistency_with_limit(spec, psi, DEFAULT_STATE_LIMIT)
}

pub fn check_consistency_with_limit(
    spec: &Gr1Spec,
    psi: &[Gr1Part],
    limit: usize,
) -> Result<bool, StateSpaceLimitExceeded> {
    let mut full = spec.with_assumptions(psi);
    full.responses.clear();
    let rules = Rules::compile(&full);
    let n = rules.vars.len();
    if n >= usize::BITS as usize - 1 || 1usize << n > limit {
        return Err(StateSpaceLimitExceeded { limit });
    }
    let size = 1usize << n;
    let env = &rules.env;
    let initial: Vec<usize> = (0..size).filter(|&v| env.init_holds(Valuation(v as u64))).collect();
    if initial.is_empty() {
        return Ok(false);
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    let mut seen = FixedBitSet::with_capacity(size);
    let mut stack = initial.clone();
    seen.extend(initial.iter().copied());
    while let Some(s) = stack.pop() {
        let now = Valuation(s as u64);
        for t in 0..size {
            if env.trans_holds(now, Valuation(t as u64)) {
                adj[s].push(t);
                if !seen.put(t) {
                    stack.push(t);
                }
            }
        }
    }
    let fair: Vec<FixedBitSet> = env
        .liveness
        .iter()
        .map(|e| {
            let mut set = FixedBitSet::with_capacity(size);
            set.extend((0..size).filter(|&v| e.holds(Valuation(v as u64), Valuation(v as u64))));
            set
        })
        .collect();
    Ok(fair_scc_exists(&adj, &initial, None, &fair))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    FirstRefinement,
    AllWithinDepth,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub alpha: usize,
    /// Pattern size bound; the largest outdegree of each abstraction if unset.
    pub beta: Option<usize>,
    pub subsets: VariableSubsets,
    pub mode: SearchMode,
    pub state_limit: usize,
}

impl SearchConfig {
    pub fn new(alpha: usize, subsets: VariableSubsets) -> Self {
        SearchConfig {
            alpha,
            beta: None,
            subsets,
            mode: SearchMode::AllWithinDepth,
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("alpha must be at least 1")]
    InvalidAlpha,
    #[error("beta must be at least 1")]
    InvalidBeta,
    #[error(transparent)]
    StateSpace(#[from] StateSpaceLimitExceeded),
}

/// A conjunction of candidate assumptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub conjuncts: Vec<CandidateAssumption>,
    /// Counter-strategies computed along the path to this refinement.
    pub depth: usize,
}

impl Refinement {
    pub fn parts(&self) -> Vec<Gr1Part> {
        self.conjuncts.iter().map(|c| c.part.clone()).collect()
    }

    pub fn formulas(&self, spec: &Gr1Spec) -> Vec<String> {
        self.conjuncts.iter().map(|c| c.formula(&spec.vars)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeReport {
    pub id: usize,
    pub parent: Option<usize>,
    pub conjuncts: Vec<String>,
    pub depth: usize,
    pub consistent: bool,
    /// Unset when the node was inconsistent.
    pub realizable: Option<bool>,
    /// Counter-strategy computed for this node, if it was expanded.
    pub counterstrategy: Option<usize>,
    pub candidate_count: usize,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterStrategyRecord {
    pub id: usize,
    /// Node whose specification produced it; `None` for the input.
    pub node: Option<usize>,
    pub states: usize,
    pub candidates: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub already_realizable: bool,
    pub nodes: Vec<NodeReport>,
    pub counterstrategies: Vec<CounterStrategyRecord>,
    /// Node ids of emitted refinements, in emission order.
    pub refinements: Vec<usize>,
    pub candidates_generated: usize,
    pub inconsistent: usize,
    pub merged: usize,
    /// Counter-strategies computed, indexed by the depth of the node that
    /// produced them (index 0 is the input specification).
    pub resolves_by_depth: Vec<usize>,
    pub total_time_ms: f64,
    pub candidate_time_ms: f64,
}

impl SearchReport {
    fn count_resolve(&mut self, depth: usize) {
        if self.resolves_by_depth.len() <= depth {
            self.resolves_by_depth.resize(depth + 1, 0);
        }
        self.resolves_by_depth[depth] += 1;
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

/// Abstraction, pattern generation and candidate generation for one
/// counter-strategy.
pub fn candidates_for(
    cs: &MooreCounterStrategy,
    beta: Option<usize>,
    subsets: &VariableSubsets,
) -> Vec<CandidateAssumption> {
    let (fts, preds) = abstract_fts(cs);
    let beta = beta.unwrap_or_else(|| default_beta(&fts));
    generate_candidates(&generate_patterns(&fts, beta), &preds, subsets)
}

struct Pending {
    parent: Option<usize>,
    conjuncts: Vec<CandidateAssumption>,
    depth: usize,
}

fn key(conjuncts: &[CandidateAssumption], spec: &Gr1Spec) -> Vec<String> {
    let mut k: Vec<String> = conjuncts.iter().map(|c| c.formula(&spec.vars)).collect();
    k.sort();
    k.dedup();
    k
}

/// Breadth-first refinement search. An already realizable `spec` yields the
/// single empty refinement.
pub fn refine_search(spec: &Gr1Spec, cfg: &SearchConfig) -> Result<(Vec<Refinement>, SearchReport), SearchError> {
    if cfg.alpha == 0 {
        return Err(SearchError::InvalidAlpha);
    }
    if cfg.beta == Some(0) {
        return Err(SearchError::InvalidBeta);
    }
    let start = Instant::now();
    let mut report = SearchReport::default();
    let mut candidate_time = Duration::ZERO;
    let mut found = Vec::new();

    let root = solve_realizability(&build_arena_with_limit(spec, cfg.state_limit)?);
    let Some(cs) = root.counter_strategy else {
        report.already_realizable = true;
        report.total_time_ms = ms(start.elapsed());
        return Ok((vec![Refinement { conjuncts: Vec::new(), depth: 0 }], report));
    };
    report.count_resolve(0);
    let t = Instant::now();
    let cands = candidates_for(&cs, cfg.beta, &cfg.subsets);
    candidate_time += t.elapsed();
    report.candidates_generated += cands.len();
    report.counterstrategies.push(CounterStrategyRecord {
        id: 0,
        node: None,
        states: cs.len(),
        candidates: cands.len(),
    });

    let mut seen: HashSet<Vec<String>> = HashSet::new();
    let mut queue: VecDeque<Pending> = VecDeque::new();
    for c in cands {
        let conjuncts = vec![c];
        if seen.insert(key(&conjuncts, spec)) {
            queue.push_back(Pending { parent: None, conjuncts, depth: 1 });
        } else {
            report.merged += 1;
        }
    }

    while let Some(item) = queue.pop_front() {
        let t0 = Instant::now();
        let id = report.nodes.len();
        let parts: Vec<Gr1Part> = item.conjuncts.iter().map(|c| c.part.clone()).collect();
        let mut node = NodeReport {
            id,
            parent: item.parent,
            conjuncts: item.conjuncts.iter().map(|c| c.formula(&spec.vars)).collect(),
            depth: item.depth,
            consistent: check_consistency_with_limit(spec, &parts, cfg.state_limit)?,
            realizable: None,
            counterstrategy: None,
            candidate_count: 0,
            wall_time_ms: 0.0,
        };
        if !node.consistent {
            report.inconsistent += 1;
        } else {
            let arena = build_arena_with_limit(&spec.with_assumptions(&parts), cfg.state_limit)?;
            if item.depth < cfg.alpha {
                let res = solve_realizability(&arena);
                node.realizable = Some(res.realizable());
                if let Some(cs) = res.counter_strategy {
                    report.count_resolve(item.depth);
                    let t = Instant::now();
                    let cands = candidates_for(&cs, cfg.beta, &cfg.subsets);
                    candidate_time += t.elapsed();
                    let cs_id = report.counterstrategies.len();
                    node.counterstrategy = Some(cs_id);
                    node.candidate_count = cands.len();
                    report.candidates_generated += cands.len();
                    report.counterstrategies.push(CounterStrategyRecord {
                        id: cs_id,
                        node: Some(id),
                        states: cs.len(),
                        candidates: cands.len(),
                    });
                    for c in cands {
                        let mut conjuncts = item.conjuncts.clone();
                        conjuncts.push(c);
                        if seen.insert(key(&conjuncts, spec)) {
                            queue.push_back(Pending { parent: Some(id), conjuncts, depth: item.depth + 1 });
                        } else {
                            report.merged += 1;
                        }
                    }
                }
            } else {
                node.realizable = Some(decide(&arena) == Winner::System);
            }
        }
        node.wall_time_ms = ms(t0.elapsed());
        let emitted = node.realizable == Some(true);
        report.nodes.push(node);
        if emitted {
            report.refinements.push(id);
            found.push(Refinement { conjuncts: item.conjuncts, depth: item.depth });
            if cfg.mode == SearchMode::FirstRefinement {
                break;
            }
        }
    }
    report.total_time_ms = ms(start.elapsed());
    report.candidate_time_ms = ms(candidate_time);
    Ok((found, report))
}
