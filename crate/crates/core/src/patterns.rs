//! Temporal patterns that hold on every run of an [`Fts`].

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::abstraction::{Fts, LabeledFts};
use crate::graph::{cycle_reachable, cyclic_states, reachable};
use crate::logic::Cube;

/// Pattern shapes over sets of Fts states (each set read as the disjunction
/// of its states).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    /// `◇ C`
    Eventually(Vec<usize>),
    /// `◇□ C`
    EventuallyAlways(Vec<usize>),
    /// `◇(C1 ∧ ○ C2)`
    EventuallyNext(Vec<usize>, Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub kind: PatternKind,
    /// Disjunction of system-variable conjunctions that holds together with
    /// the (first) configuration; `None` when unlabeled or trivially true.
    pub label: Option<Vec<Cube>>,
}

impl Pattern {
    pub fn new(kind: PatternKind) -> Self {
        Pattern { kind, label: None }
    }

    fn states(&self) -> impl Iterator<Item = &usize> {
        let (a, b): (&[usize], &[usize]) = match &self.kind {
            PatternKind::Eventually(c) | PatternKind::EventuallyAlways(c) => (c, &[]),
            PatternKind::EventuallyNext(c1, c2) => (c1, c2),
        };
        a.iter().chain(b.iter())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSet {
    pub eventually_always: Option<Pattern>,
    pub eventually: Vec<Pattern>,
    pub eventually_next: Vec<Pattern>,
}

/// Pattern size bound used when none is given: the largest outdegree.
pub fn default_beta(fts: &Fts) -> usize {
    fts.max_outdegree().max(1)
}

pub fn generate_patterns(fts: &Fts, beta: usize) -> PatternSet {
    PatternSet {
        eventually_always: eventually_always_pattern(fts),
        eventually: eventually_patterns(fts, beta),
        eventually_next: eventually_next_patterns(fts, beta),
    }
}

fn bitset(n: usize, items: &[usize]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.extend(items.iter().copied());
    s
}

fn without(n: usize, removed: &[usize]) -> FixedBitSet {
    let mut s = bitset(n, removed);
    s.toggle_range(..);
    s
}

/// Minimal eventually configurations of size at most `beta`, starting with
/// `{q0}`, in order of size and then lexicographically. Dummy states are not
/// filtered here. The second component counts eventually checks performed.
pub fn eventually_configurations(fts: &Fts, beta: usize) -> (Vec<Vec<usize>>, usize) {
    let n = fts.len();
    let q0 = fts.initial;
    let mut found: Vec<Vec<usize>> = vec![vec![q0]];
    let mut masks: Vec<FixedBitSet> = Vec::new();
    let mut checks = 0;
    let others: Vec<usize> = (0..n).filter(|&q| q != q0).collect();
    for k in 1..=beta.min(others.len()) {
        for combo in others.iter().copied().combinations(k) {
            let mask = bitset(n, &combo);
            if masks.iter().any(|m| m.is_subset(&mask)) {
                continue;
            }
            checks += 1;
            if !cycle_reachable(&fts.succ, &[q0], Some(&without(n, &combo))) {
                masks.push(mask);
                found.push(combo);
            }
        }
    }
    (found, checks)
}

fn clean(fts: &Fts, p: &Pattern) -> bool {
    !p.states().any(|&q| fts.is_dummy(q))
}

pub fn eventually_patterns(fts: &Fts, beta: usize) -> Vec<Pattern> {
    eventually_configurations(fts, beta)
        .0
        .into_iter()
        .map(|c| Pattern::new(PatternKind::Eventually(c)))
        .filter(|p| clean(fts, p))
        .collect()
}

/// `◇□ Q^cycle`, where `Q^cycle` holds the states lying on some cycle; `None`
/// when that set contains the dummy sink.
pub fn eventually_always_pattern(fts: &Fts) -> Option<Pattern> {
    let cyc: Vec<usize> = cyclic_states(&fts.succ, None).ones().collect();
    let p = Pattern::new(PatternKind::EventuallyAlways(cyc));
    clean(fts, &p).then_some(p)
}

/// States reachable in one step from `c`.
pub fn next_states(fts: &Fts, c: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = c.iter().flat_map(|&q| fts.succ[q].iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn eventually_next_patterns(fts: &Fts, beta: usize) -> Vec<Pattern> {
    eventually_configurations(fts, beta)
        .0
        .into_iter()
        .map(|c| {
            let next = next_states(fts, &c);
            Pattern::new(PatternKind::EventuallyNext(c, next))
        })
        .filter(|p| clean(fts, p))
        .collect()
}

/// Every unlabeled pattern extended with the disjunction of the labels on
/// edges leaving its (first) configuration.
pub fn labeled_patterns(lfts: &LabeledFts, beta: usize) -> Vec<Pattern> {
    let fts = &lfts.fts;
    let set = generate_patterns(fts, beta);
    let outgoing = |c: &[usize]| -> Option<Vec<Cube>> {
        let mut cubes: Vec<Cube> = Vec::new();
        for &q in c {
            for label in &lfts.labels[q] {
                if label.is_true() {
                    return None;
                }
                if !cubes.contains(label) {
                    cubes.push(label.clone());
                }
            }
        }
        Some(cubes)
    };
    set.eventually_always
        .into_iter()
        .chain(set.eventually)
        .chain(set.eventually_next)
        .map(|mut p| {
            let c = match &p.kind {
                PatternKind::Eventually(c) | PatternKind::EventuallyAlways(c) => c,
                PatternKind::EventuallyNext(c, _) => c,
            };
            p.label = outgoing(c);
            p
        })
        .collect()
}

/// Decides whether the (unlabeled) pattern holds on every run from `q0`.
pub fn holds_on_all_runs(fts: &Fts, kind: &PatternKind) -> bool {
    let n = fts.len();
    let q0 = fts.initial;
    match kind {
        PatternKind::Eventually(c) => !cycle_reachable(&fts.succ, &[q0], Some(&without(n, c))),
        PatternKind::EventuallyAlways(c) => {
            let reach = reachable(&fts.succ, &[q0], None);
            let inside = bitset(n, c);
            cyclic_states(&fts.succ, Some(&reach)).is_subset(&inside)
        }
        PatternKind::EventuallyNext(c1, c2) => {
            let from = bitset(n, c1);
            let to = bitset(n, c2);
            let pruned: Vec<Vec<usize>> = fts
                .succ
                .iter()
                .enumerate()
                .map(|(q, row)| {
                    row.iter()
                        .copied()
                        .filter(|&t| !(from.contains(q) && to.contains(t)))
                        .collect()
                })
                .collect();
            !cycle_reachable(&pruned, &[q0], None)
        }
    }
}
