mod common;

use common::load;
use gr1_core::arena::build_arena;
use gr1_core::candidates::VariableSubsets;
use gr1_core::refine::{candidates_for, check_consistency, refine_search, SearchConfig, SearchMode};
use gr1_core::solver::solve_realizability;
use gr1_core::specml::{parse_part, parse_var_list, Owner, PartClass};

#[test]
fn lift_refinements() {
    let spec = load("lift_all_floors.spec");
    let cfg = SearchConfig::new(2, VariableSubsets::all(&spec.vars));
    let (found, report) = refine_search(&spec, &cfg).unwrap();
    let got: Vec<Vec<String>> = found.iter().map(|r| r.formulas(&spec)).collect();
    assert_eq!(
        got,
        vec![vec!["GF(b1 | b2 | b3)"], vec!["G((!b1 & !b2 & !b3) -> X(b1 | b2 | b3))"]]
    );
    assert_eq!(report.counterstrategies.len(), 1);
    assert_eq!(report.candidates_generated, 3);
    assert_eq!(report.inconsistent, 1);
    assert_eq!(report.resolves_by_depth, vec![1]);
    assert_eq!(report.nodes[1].conjuncts, vec!["G(b1 | b2 | b3)"]);
    assert!(!report.nodes[1].consistent);
}

#[test]
fn lift_first_refinement_only() {
    let spec = load("lift_all_floors.spec");
    let mut cfg = SearchConfig::new(2, VariableSubsets::all(&spec.vars));
    cfg.mode = SearchMode::FirstRefinement;
    let (found, report) = refine_search(&spec, &cfg).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].formulas(&spec), vec!["GF(b1 | b2 | b3)"]);
    assert_eq!(report.nodes.len(), 1);
}

#[test]
fn lift_pressing_buttons_is_consistent() {
    let spec = load("lift_all_floors.spec");
    let psi = parse_part("GF(b1 | b2 | b3)", &spec.vars, Owner::Env, PartClass::Liveness).unwrap();
    assert!(check_consistency(&spec, &[psi]).unwrap());
}

#[test]
fn request_grant_candidates() {
    let spec = load("request_grant_live.spec");
    let cs = solve_realizability(&build_arena(&spec).unwrap()).counter_strategy.unwrap();
    let v = &spec.vars;
    let subsets = VariableSubsets {
        p1: parse_var_list("r", v).unwrap(),
        p2: parse_var_list("c", v).unwrap(),
        p3: parse_var_list("r, c", v).unwrap(),
        p4: parse_var_list("c", v).unwrap(),
    };
    let got: Vec<String> = candidates_for(&cs, Some(1), &subsets).iter().map(|c| c.formula(v)).collect();
    assert_eq!(got, vec!["GF(FALSE)", "G(!c)", "G((r & c) -> X(!c))", "G((!r & c) -> X(!c))"]);
}

#[test]
fn request_grant_two_step_refinement() {
    let spec = load("request_grant.spec");
    let v = &spec.vars;
    let r = parse_var_list("r", v).unwrap();
    let rc = parse_var_list("r c", v).unwrap();
    let subsets = VariableSubsets { p1: r, p2: rc.clone(), p3: rc.clone(), p4: rc };
    let (found, report) = refine_search(&spec, &SearchConfig::new(2, subsets)).unwrap();
    let got: Vec<Vec<String>> = found.iter().map(|r| r.formulas(&spec)).collect();
    assert!(got.contains(&vec!["G(!r | !c)".to_string(), "G(r | !c)".to_string()]));
    assert!(found.iter().all(|r| r.depth == 2 && r.conjuncts.len() == 2));
    // Depth-2 nodes are decided without computing a counter-strategy.
    assert_eq!(report.resolves_by_depth.len(), 2);
    assert_eq!(report.counterstrategies.len(), 1 + report.resolves_by_depth[1]);
}
