//! Explicit game arena over packed valuations.
//!
//! From a state `s` the environment first fixes the next inputs, then the
//! system completes them with next outputs. States are indexed in increasing
//! valuation order.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::rules::Rules;
use crate::specml::{Gr1Spec, Vars};
use crate::valuation::{blocks, Valuation};

pub const DEFAULT_STATE_LIMIT: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("state space exceeds the limit of {limit} states")]
pub struct StateSpaceLimitExceeded {
    pub limit: usize,
}

/// One environment choice of next inputs with every system completion the
/// system transition rules allow, as state indices in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvMove {
    pub input: u64,
    pub succs: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Arena {
    rules: Rules,
    states: Vec<Valuation>,
    index: HashMap<Valuation, usize>,
    initial: Vec<EnvMove>,
    moves: Vec<Vec<EnvMove>>,
    env_fair: Vec<FixedBitSet>,
    sys_fair: Vec<FixedBitSet>,
}

pub fn build_arena(spec: &Gr1Spec) -> Result<Arena, StateSpaceLimitExceeded> {
    build_arena_with_limit(spec, DEFAULT_STATE_LIMIT)
}

pub fn build_arena_with_limit(spec: &Gr1Spec, limit: usize) -> Result<Arena, StateSpaceLimitExceeded> {
    Arena::build(Rules::compile(spec), limit)
}

impl Arena {
    fn build(rules: Rules, limit: usize) -> Result<Arena, StateSpaceLimitExceeded> {
        let ni = rules.vars.env_count();
        let no = rules.vars.sys_count();
        let mut found: HashMap<Valuation, usize> = HashMap::new();
        let mut order: Vec<Valuation> = Vec::new();
        let mut discover = |v: Valuation, order: &mut Vec<Valuation>| -> Result<usize, StateSpaceLimitExceeded> {
            if let Some(&i) = found.get(&v) {
                return Ok(i);
            }
            if order.len() >= limit {
                return Err(StateSpaceLimitExceeded { limit });
            }
            found.insert(v, order.len());
            order.push(v);
            Ok(order.len() - 1)
        };

        let mut initial = Vec::new();
        for input in blocks(ni) {
            if !rules.env.init_holds(Valuation::join(input, 0, ni)) {
                continue;
            }
            let mut succs = Vec::new();
            for output in blocks(no) {
                let v = Valuation::join(input, output, ni);
                if rules.sys.init_holds(v) {
                    succs.push(discover(v, &mut order)?);
                }
            }
            initial.push(EnvMove { input, succs });
        }

        let mut raw_moves: Vec<Vec<EnvMove>> = Vec::new();
        let mut next = 0;
        while next < order.len() {
            let now = order[next];
            let mut list = Vec::new();
            for input in blocks(ni) {
                if !rules.env.trans_holds(now, Valuation::join(input, 0, ni)) {
                    continue;
                }
                let mut succs = Vec::new();
                for output in blocks(no) {
                    let v = Valuation::join(input, output, ni);
                    if rules.sys.trans_holds(now, v) {
                        succs.push(discover(v, &mut order)?);
                    }
                }
                list.push(EnvMove { input, succs });
            }
            raw_moves.push(list);
            next += 1;
        }

        // Renumber in valuation order.
        let mut perm: Vec<usize> = (0..order.len()).collect();
        perm.sort_by_key(|&i| order[i]);
        let mut rank = vec![0; order.len()];
        for (new, &old) in perm.iter().enumerate() {
            rank[old] = new;
        }
        let remap = |m: &mut EnvMove| {
            for s in &mut m.succs {
                *s = rank[*s];
            }
            m.succs.sort_unstable();
        };
        initial.iter_mut().for_each(remap);
        let mut moves = vec![Vec::new(); order.len()];
        for (old, mut list) in raw_moves.into_iter().enumerate() {
            list.iter_mut().for_each(remap);
            moves[rank[old]] = list;
        }
        let states: Vec<Valuation> = perm.iter().map(|&i| order[i]).collect();
        let index = states.iter().enumerate().map(|(i, v)| (*v, i)).collect();

        let fair = |exprs: &[crate::specml::BoolExpr]| -> Vec<FixedBitSet> {
            exprs
                .iter()
                .map(|e| {
                    let mut set = FixedBitSet::with_capacity(states.len());
                    for (i, v) in states.iter().enumerate() {
                        if e.holds(*v, *v) {
                            set.insert(i);
                        }
                    }
                    set
                })
                .collect()
        };
        let env_fair = fair(&rules.env.liveness);
        let sys_fair = fair(&rules.sys.liveness);
        Ok(Arena {
            rules,
            states,
            index,
            initial,
            moves,
            env_fair,
            sys_fair,
        })
    }

    /// Variables of the expanded specification (response sugar adds system
    /// variables after the declared ones).
    pub fn vars(&self) -> &Vars {
        &self.rules.vars
    }

    pub fn rules(&self) -> &Rules {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> Valuation {
        self.states[i]
    }

    pub fn states(&self) -> &[Valuation] {
        &self.states
    }

    pub fn index_of(&self, v: Valuation) -> Option<usize> {
        self.index.get(&v).copied()
    }

    /// Initial environment choices: every input satisfying the environment
    /// initial condition, with the initial states the system may pick.
    pub fn initial_moves(&self) -> &[EnvMove] {
        &self.initial
    }

    pub fn env_moves(&self, state: usize) -> &[EnvMove] {
        &self.moves[state]
    }

    /// System completions of `input` from `state`, if `input` is legal.
    pub fn sys_moves(&self, state: usize, input: u64) -> Option<&[usize]> {
        self.moves[state]
            .iter()
            .find(|m| m.input == input)
            .map(|m| m.succs.as_slice())
    }

    pub fn env_fair(&self) -> &[FixedBitSet] {
        &self.env_fair
    }

    pub fn sys_fair(&self) -> &[FixedBitSet] {
        &self.sys_fair
    }

    /// Whether the environment initial condition admits no input at all.
    pub fn is_vacuous(&self) -> bool {
        self.initial.is_empty()
    }

    /// Successor lists ignoring who picks what.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.moves
            .iter()
            .map(|list| {
                let mut out: Vec<usize> = list.iter().flat_map(|m| m.succs.iter().copied()).collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }

    pub fn initial_states(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.initial.iter().flat_map(|m| m.succs.iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// States from which the environment has no legal move.
pub fn env_deadlocks(arena: &Arena) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(arena.len());
    for s in 0..arena.len() {
        if arena.env_moves(s).is_empty() {
            out.insert(s);
        }
    }
    out
}

/// States where some legal environment move leaves the system without a
/// legal completion.
pub fn sys_deadlocks(arena: &Arena) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(arena.len());
    for s in 0..arena.len() {
        if arena.env_moves(s).iter().any(|m| m.succs.is_empty()) {
            out.insert(s);
        }
    }
    out
}
