//! Candidate environment assumptions from patterns.
//!
//! A pattern `◇□ψ`, `◇ψ` or `◇(ψ1 ∧ ○ψ2)` holds on every run of the
//! counter-strategy once each state is replaced by its (projected) state
//! predicate; its complement `□◇¬ψ`, `□¬ψ` or `□(ψ1 → ○¬ψ2)` is a GR(1)
//! assumption that rules the counter-strategy out.

use serde::{Deserialize, Serialize};

use crate::logic::{simplify_cnf, simplify_dnf, Cube, Dnf};
use crate::patterns::{Pattern, PatternKind, PatternSet};
use crate::specml::{format_part, BoolExpr, Gr1Part, Owner, PartClass, Vars};

/// Environment variables allowed in each shape: `p1` for `◇□ψ1`, `p2` for
/// `◇ψ2`, and `p3`/`p4` for the two sides of `◇(ψ3 ∧ ○ψ4)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSubsets {
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    pub p3: Vec<usize>,
    pub p4: Vec<usize>,
}

impl VariableSubsets {
    /// Every environment variable in every subset.
    pub fn all(vars: &Vars) -> Self {
        let env: Vec<usize> = vars.env_indices().collect();
        Self::uniform(env)
    }

    pub fn uniform(vars: Vec<usize>) -> Self {
        VariableSubsets {
            p1: vars.clone(),
            p2: vars.clone(),
            p3: vars.clone(),
            p4: vars,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CandidateKind {
    Liveness,
    Safety,
    Transition,
}

/// A pattern after substituting projected state predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instantiated {
    EventuallyAlways(Dnf),
    Eventually(Dnf),
    EventuallyNext(Dnf, Dnf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateAssumption {
    pub kind: CandidateKind,
    pub part: Gr1Part,
    pub source: PatternKind,
}

impl CandidateAssumption {
    pub fn formula(&self, vars: &Vars) -> String {
        format_part(&self.part, vars)
    }
}

fn predicate_dnf(states: &[usize], preds: &[Cube], keep: &[usize]) -> Dnf {
    Dnf::dedup(states.iter().map(|&q| preds[q].project(keep)))
}

pub fn instantiate(pattern: &Pattern, preds: &[Cube], subsets: &VariableSubsets) -> Instantiated {
    match &pattern.kind {
        PatternKind::EventuallyAlways(c) => Instantiated::EventuallyAlways(predicate_dnf(c, preds, &subsets.p1)),
        PatternKind::Eventually(c) => Instantiated::Eventually(predicate_dnf(c, preds, &subsets.p2)),
        PatternKind::EventuallyNext(c1, c2) => Instantiated::EventuallyNext(
            predicate_dnf(c1, preds, &subsets.p3),
            predicate_dnf(c2, preds, &subsets.p4),
        ),
    }
}

/// `◇□φ ↦ □◇¬φ`, `◇φ ↦ □¬φ`, `◇(φ1 ∧ ○φ2) ↦ □(φ1 → ○¬φ2)`, with bodies
/// simplified.
pub fn complement_to_assumption(inst: &Instantiated, source: PatternKind) -> CandidateAssumption {
    let (kind, class, body) = match inst {
        Instantiated::EventuallyAlways(d) => (CandidateKind::Liveness, PartClass::Liveness, simplify_cnf(&d.negate())),
        Instantiated::Eventually(d) => (CandidateKind::Safety, PartClass::Trans, simplify_cnf(&d.negate())),
        Instantiated::EventuallyNext(d1, d2) => {
            let lhs = simplify_dnf(d1);
            let rhs = simplify_cnf(&d2.negate()).shift_next();
            let body = match (lhs, rhs) {
                (BoolExpr::Const(true), rhs) => rhs,
                (BoolExpr::Const(false), _) | (_, BoolExpr::Const(true)) => BoolExpr::Const(true),
                (lhs, BoolExpr::Const(false)) => BoolExpr::not(lhs),
                (lhs, rhs) => BoolExpr::implies(lhs, rhs),
            };
            (CandidateKind::Transition, PartClass::Trans, body)
        }
    };
    CandidateAssumption {
        kind,
        part: Gr1Part::new(class, Owner::Env, body),
        source,
    }
}

/// Candidates in the order liveness, safety, transition, each in pattern
/// order, without syntactic repeats. Shapes whose variable subset is empty
/// are skipped, as are bodies that came out `TRUE`.
pub fn generate_candidates(patterns: &PatternSet, preds: &[Cube], subsets: &VariableSubsets) -> Vec<CandidateAssumption> {
    let mut out: Vec<CandidateAssumption> = Vec::new();
    let mut push = |p: &Pattern| {
        let c = complement_to_assumption(&instantiate(p, preds, subsets), p.kind.clone());
        if c.part.body == BoolExpr::Const(true) || out.iter().any(|o| o.part == c.part) {
            return;
        }
        out.push(c);
    };
    if !subsets.p1.is_empty() {
        patterns.eventually_always.iter().for_each(&mut push);
    }
    if !subsets.p2.is_empty() {
        patterns.eventually.iter().for_each(&mut push);
    }
    if !subsets.p3.is_empty() && !subsets.p4.is_empty() {
        patterns.eventually_next.iter().for_each(&mut push);
    }
    out
}
