//! Structure-only view of a counter-strategy.

use serde::{Deserialize, Serialize};

use crate::logic::{Cube, Literal};
use crate::solver::MooreCounterStrategy;

/// Finite transition system. State `i` corresponds to counter-strategy state
/// `i`; an optional dummy sink (with a self-loop) follows them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fts {
    pub initial: usize,
    /// Successors per state, sorted and without repeats.
    pub succ: Vec<Vec<usize>>,
    pub dummy: Option<usize>,
}

impl Fts {
    /// Adds a dummy sink for states without successors.
    pub fn new(initial: usize, mut succ: Vec<Vec<usize>>) -> Fts {
        for row in &mut succ {
            row.sort_unstable();
            row.dedup();
        }
        let dummy = if succ.iter().any(Vec::is_empty) {
            let d = succ.len();
            for row in &mut succ {
                if row.is_empty() {
                    row.push(d);
                }
            }
            succ.push(vec![d]);
            Some(d)
        } else {
            None
        };
        Fts { initial, succ, dummy }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn is_dummy(&self, q: usize) -> bool {
        self.dummy == Some(q)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().map(move |&t| (q, t)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn max_outdegree(&self) -> usize {
        self.succ.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// The state predicate of every counter-strategy state: the full input
/// valuation it emits, one literal per environment variable.
pub fn abstract_fts(cs: &MooreCounterStrategy) -> (Fts, Vec<Cube>) {
    let succ = cs
        .transitions
        .iter()
        .map(|row| row.iter().map(|&(_, t)| t).collect())
        .collect();
    let fts = Fts::new(cs.initial, succ);
    let env = cs.vars.env_indices();
    let preds = cs
        .states
        .iter()
        .map(|s| Cube::from_valuation(crate::valuation::Valuation(s.output), env.clone()))
        .collect();
    (fts, preds)
}

/// An Fts whose edges carry conjunctions over system variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledFts {
    pub fts: Fts,
    /// `labels[q][k]` labels the edge `q -> fts.succ[q][k]`.
    pub labels: Vec<Vec<Cube>>,
}

impl LabeledFts {
    pub fn label(&self, from: usize, to: usize) -> Option<&Cube> {
        let k = self.fts.succ[from].iter().position(|&t| t == to)?;
        Some(&self.labels[from][k])
    }
}

/// Labels each edge with the system literals shared by all outputs that
/// induce it (empty when they disagree on every variable). Dummy edges get
/// the empty label.
pub fn label_edges(cs: &MooreCounterStrategy) -> LabeledFts {
    let (fts, _) = abstract_fts(cs);
    let ni = cs.vars.env_count();
    let no = cs.vars.sys_count();
    let labels = fts
        .succ
        .iter()
        .enumerate()
        .map(|(q, row)| {
            row.iter()
                .map(|&t| {
                    if q >= cs.len() || fts.is_dummy(t) {
                        return Cube::default();
                    }
                    let witnesses: Vec<u64> = cs.transitions[q]
                        .iter()
                        .filter(|&&(_, target)| target == t)
                        .map(|&(o, _)| o)
                        .collect();
                    let lits = (0..no)
                        .filter_map(|b| {
                            let first = witnesses[0] >> b & 1;
                            witnesses
                                .iter()
                                .all(|o| o >> b & 1 == first)
                                .then(|| Literal::new(ni + b, first == 1))
                        })
                        .collect();
                    Cube::new(lits)
                })
                .collect()
        })
        .collect();
    LabeledFts { fts, labels }
}
