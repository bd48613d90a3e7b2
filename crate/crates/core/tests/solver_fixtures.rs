use gr1_core::arena::build_arena;
use gr1_core::solver::{
    solve_realizability, verify_counterstrategy, verify_system_strategy, MealyState, MealyStrategy, MooreCounterStrategy,
    MooreState, Winner,
};
use gr1_core::valuation::Valuation;
use gr1_core::specml::{parse_spec, Gr1Spec};

fn load(name: &str) -> Gr1Spec {
    let path = format!("{}/../../specs/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_spec(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn request_grant_counterstrategy_keeps_both_inputs_high() {
    let spec = load("request_grant.spec");
    let arena = build_arena(&spec).unwrap();
    let res = solve_realizability(&arena);
    assert_eq!(res.winner, Winner::Environment);
    let cs = res.counter_strategy.unwrap();
    assert!(verify_counterstrategy(&cs, &spec));
    for s in &cs.states {
        assert_eq!(s.output, 0b11);
    }
}

#[test]
fn request_grant_with_dropping_requests_is_still_unrealizable() {
    let spec = load("request_grant_live.spec");
    let res = solve_realizability(&build_arena(&spec).unwrap());
    assert_eq!(res.winner, Winner::Environment);
    let cs = res.counter_strategy.unwrap();
    assert!(verify_counterstrategy(&cs, &spec));
    // c stays high while r is dropped from time to time.
    assert!(cs.states.iter().all(|s| s.output & 0b10 != 0));
    assert!(cs.states.iter().any(|s| s.output & 0b01 == 0));
}

#[test]
fn lift() {
    let spec = load("lift.spec");
    let res = solve_realizability(&build_arena(&spec).unwrap());
    assert_eq!(res.winner, Winner::System);
    assert!(verify_system_strategy(res.system_strategy.as_ref().unwrap(), &spec));

    let spec = load("lift_all_floors.spec");
    let res = solve_realizability(&build_arena(&spec).unwrap());
    assert_eq!(res.winner, Winner::Environment);
    let cs = res.counter_strategy.unwrap();
    assert!(verify_counterstrategy(&cs, &spec));
    assert!(cs.states.iter().all(|s| s.output == 0));
}

fn constant_machine(spec: &Gr1Spec, output: u64) -> MooreCounterStrategy {
    let no = spec.desugar().vars.sys_count();
    MooreCounterStrategy {
        vars: spec.desugar().vars,
        initial: 0,
        states: vec![MooreState { output, origin: None }],
        transitions: vec![(0..1u64 << no).map(|o| (o, 0)).collect()],
    }
}

#[test]
fn machine_without_clear_is_no_counterstrategy() {
    let spec = load("request_grant.spec");
    assert!(!verify_counterstrategy(&constant_machine(&spec, 0b01), &spec));
    assert!(verify_counterstrategy(&constant_machine(&spec, 0b11), &spec));
}

#[test]
fn trivial_guarantees_admit_no_counterstrategy() {
    let spec = parse_spec("ENV_VARS: r c\nSYS_VARS: g v\n").unwrap();
    assert!(!verify_counterstrategy(&constant_machine(&spec, 0b11), &spec));
}

#[test]
fn never_granting_is_not_winning() {
    // Variables r c g v pend_g; the strategy keeps g and v low and tracks the
    // pending bit as the response encoding requires.
    let spec = load("request_grant.spec");
    let vars = spec.desugar().vars;
    let state = |input: u64, pend: u64| MealyState { valuation: Valuation(input | pend << 4), goal: 0 };
    let states: Vec<MealyState> = (0..8).map(|k| state(k & 3, k >> 2)).collect();
    let index = |input: u64, pend: u64| (input + 4 * pend) as usize;
    let transitions = states
        .iter()
        .map(|s| {
            let r = s.valuation.0 & 1;
            let pend = s.valuation.0 >> 4 & 1;
            (0..4).map(|i| (i, index(i, r | pend))).collect()
        })
        .collect();
    let st = MealyStrategy {
        vars,
        states,
        initial: (0..4).map(|i| (i, index(i, 0))).collect(),
        transitions,
    };
    assert!(!verify_system_strategy(&st, &spec));
}

#[test]
fn unsatisfiable_environment_makes_any_strategy_win() {
    let spec = parse_spec("ENV_VARS: a\nSYS_VARS: b\nENV_INIT: a & !a\nSYS_LIVENESS: GF(FALSE)\n").unwrap();
    let res = solve_realizability(&build_arena(&spec).unwrap());
    assert!(res.realizable() && res.vacuous);
    let st = res.system_strategy.unwrap();
    assert!(verify_system_strategy(&st, &spec));
    let empty = MealyStrategy { vars: spec.vars.clone(), states: vec![], initial: vec![], transitions: vec![] };
    assert!(verify_system_strategy(&empty, &spec));
}
