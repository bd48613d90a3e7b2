//! Realizability, strategy extraction and closed-loop strategy checking.

mod counter;
mod strategy;
mod verify;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::arena::Arena;

pub use counter::{extract_counterstrategy, EnvFixpoint, MooreCounterStrategy, MooreState, NotEnvironmentWinning};
pub use strategy::{extract_system_strategy, MealyState, MealyStrategy, SysFixpoint};
pub use verify::{verify_counterstrategy, verify_system_strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    System,
    Environment,
}

#[derive(Clone, Debug)]
pub struct RealizabilityResult {
    pub winner: Winner,
    /// The environment initial condition is unsatisfiable.
    pub vacuous: bool,
    pub system_strategy: Option<MealyStrategy>,
    pub counter_strategy: Option<MooreCounterStrategy>,
}

impl RealizabilityResult {
    pub fn realizable(&self) -> bool {
        self.winner == Winner::System
    }
}

pub fn solve_realizability(arena: &Arena) -> RealizabilityResult {
    let fix = SysFixpoint::compute(arena);
    if fix.realizable(arena) {
        RealizabilityResult {
            winner: Winner::System,
            vacuous: arena.is_vacuous(),
            system_strategy: Some(extract_system_strategy(arena, &fix)),
            counter_strategy: None,
        }
    } else {
        let env = EnvFixpoint::compute(arena);
        let cs = extract_counterstrategy(arena, &env).expect("environment wins");
        RealizabilityResult {
            winner: Winner::Environment,
            vacuous: false,
            system_strategy: None,
            counter_strategy: Some(cs),
        }
    }
}

/// The winner alone, skipping strategy construction.
pub fn decide(arena: &Arena) -> Winner {
    if SysFixpoint::compute(arena).realizable(arena) {
        Winner::System
    } else {
        Winner::Environment
    }
}

pub(crate) fn full(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

pub(crate) fn complement(set: &FixedBitSet) -> FixedBitSet {
    let mut s = set.clone();
    s.toggle_range(..);
    s
}

/// Liveness sets, or a single "true" set when there are none.
pub(crate) fn goals(sets: &[FixedBitSet], n: usize) -> Vec<FixedBitSet> {
    if sets.is_empty() {
        vec![full(n)]
    } else {
        sets.to_vec()
    }
}

/// States where every environment move admits a system answer inside `z`.
pub(crate) fn cpre(arena: &Arena, z: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(arena.len());
    for s in 0..arena.len() {
        if arena
            .env_moves(s)
            .iter()
            .all(|m| m.succs.iter().any(|&t| z.contains(t)))
        {
            out.insert(s);
        }
    }
    out
}

/// States with an environment move all of whose answers lie in `z`.
pub(crate) fn epre(arena: &Arena, z: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(arena.len());
    for s in 0..arena.len() {
        if arena
            .env_moves(s)
            .iter()
            .any(|m| m.succs.iter().all(|&t| z.contains(t)))
        {
            out.insert(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::build_arena;
    use crate::specml::parse_spec;

    fn winner(text: &str) -> Winner {
        decide(&build_arena(&parse_spec(text).unwrap()).unwrap())
    }

    #[test]
    fn trivial_specs() {
        assert_eq!(winner("ENV_VARS: a\nSYS_VARS: b\n"), Winner::System);
        assert_eq!(winner("ENV_VARS: a\nSYS_VARS: b\nSYS_LIVENESS: GF(b)\n"), Winner::System);
        assert_eq!(winner("ENV_VARS: a\nSYS_VARS: b\nSYS_LIVENESS: GF(a)\n"), Winner::Environment);
        assert_eq!(
            winner("ENV_VARS: a\nSYS_VARS: b\nENV_LIVENESS: GF(a)\nSYS_LIVENESS: GF(a)\n"),
            Winner::System
        );
        assert_eq!(winner("ENV_VARS: a\nSYS_VARS: b\nSYS_TRANS: G(X(b) <-> !b)\nSYS_INIT: b\nSYS_LIVENESS: GF(b)\n"), Winner::System);
        assert_eq!(winner("ENV_VARS: a\nSYS_VARS: b\nSYS_TRANS: G(X(b) <-> X(!b))\n"), Winner::Environment);
    }

    #[test]
    fn vacuous_env_init() {
        let arena = build_arena(&parse_spec("ENV_VARS: a\nSYS_VARS: b\nENV_INIT: a & !a\nSYS_LIVENESS: GF(FALSE)\n").unwrap()).unwrap();
        let res = solve_realizability(&arena);
        assert!(res.realizable());
        assert!(res.vacuous);
    }

    #[test]
    fn response_needs_grant() {
        let text = "ENV_VARS: r\nSYS_VARS: g\nSYS_RESPONSE: R(r, g)\n";
        assert_eq!(winner(text), Winner::System);
        let blocked = "ENV_VARS: r\nSYS_VARS: g\nSYS_RESPONSE: R(r, g)\nSYS_TRANS: G(X(!g))\n";
        assert_eq!(winner(blocked), Winner::Environment);
    }
}
