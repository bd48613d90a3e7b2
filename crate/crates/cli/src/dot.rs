//! Graphviz export for counter-strategies, abstractions and refinement trees.

use std::collections::BTreeSet;
use std::fmt::Write;

use gr1_core::abstraction::Fts;
use gr1_core::logic::Cube;
use gr1_core::solver::MooreCounterStrategy;
use gr1_core::specml::{format_expr, Vars};
use gr1_core::valuation::Valuation;

use crate::session::TreeView;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn predicate(cube: &Cube, vars: &Vars) -> String {
    format_expr(&cube.to_expr(), vars)
}

/// Distinct `(src, dst)` pairs of a counter-strategy in increasing order.
pub fn counterstrategy_edges(cs: &MooreCounterStrategy) -> Vec<(usize, usize)> {
    let set: BTreeSet<(usize, usize)> = cs
        .transitions
        .iter()
        .enumerate()
        .flat_map(|(s, row)| row.iter().map(move |&(_, t)| (s, t)))
        .collect();
    set.into_iter().collect()
}

pub fn state_predicates(cs: &MooreCounterStrategy) -> Vec<String> {
    let env: Vec<usize> = cs.vars.env_indices().collect();
    cs.states
        .iter()
        .map(|s| predicate(&Cube::from_valuation(Valuation(s.output), env.iter().copied()), &cs.vars))
        .collect()
}

pub fn counterstrategy_dot(cs: &MooreCounterStrategy) -> String {
    let mut out = String::from("digraph counterstrategy {\n  rankdir=LR;\n  init [shape=point];\n");
    for (i, p) in state_predicates(cs).iter().enumerate() {
        let _ = writeln!(out, "  s{i} [label=\"s{i}\\n{}\"];", escape(p));
    }
    let _ = writeln!(out, "  init -> s{};", cs.initial);
    for (s, t) in counterstrategy_edges(cs) {
        let _ = writeln!(out, "  s{s} -> s{t};");
    }
    out.push_str("}\n");
    out
}

/// Abstraction graph; `preds` labels the states when given.
pub fn fts_dot(fts: &Fts, preds: Option<(&[Cube], &Vars)>) -> String {
    let mut out = String::from("digraph fts {\n  rankdir=LR;\n  init [shape=point];\n");
    for q in 0..fts.len() {
        let label = match preds {
            _ if fts.is_dummy(q) => "dummy".to_string(),
            Some((p, vars)) => format!("q{q}\\n{}", escape(&predicate(&p[q], vars))),
            None => format!("q{q}"),
        };
        let _ = writeln!(out, "  q{q} [label=\"{label}\"];");
    }
    let _ = writeln!(out, "  init -> q{};", fts.initial);
    for (s, t) in fts.edges() {
        let _ = writeln!(out, "  q{s} -> q{t};");
    }
    out.push_str("}\n");
    out
}

pub fn tree_dot(tree: &TreeView) -> String {
    let mut out = String::from("digraph refinement {\n  node [shape=box];\n");
    for n in &tree.nodes {
        let verdict = match (n.consistent, n.realizable) {
            (false, _) => "inconsistent",
            (true, true) => "realizable",
            (true, false) => "unrealizable",
        };
        let label = match n.conjuncts.last() {
            None => "root".to_string(),
            Some(f) => escape(f),
        };
        let mark = if n.id == tree.current { ", penwidth=2" } else { "" };
        let _ = writeln!(out, "  n{} [label=\"{label}\\n{verdict}\"{mark}];", n.id);
    }
    for n in &tree.nodes {
        if let Some(p) = n.parent {
            let _ = writeln!(out, "  n{p} -> n{};", n.id);
        }
    }
    out.push_str("}\n");
    out
}
