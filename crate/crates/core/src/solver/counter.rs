use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{complement, epre, full, goals};
use crate::arena::{Arena, EnvMove};
use crate::specml::Vars;
use crate::valuation::Valuation;

/// Environment fixpoint, the dual of the system one:
/// `¬Z = μZ̄. ∪_j νȲ. ∩_i μX̄. (¬J_s^j ∪ epre Z̄) ∩ epre Ȳ ∩ (J_e^i ∪ epre X̄)`.
#[derive(Clone, Debug)]
pub struct EnvFixpoint {
    /// `z[k]`: states from which the environment wins within rank `k`;
    /// `z[0]` is empty and the last entry is the winning region.
    z: Vec<FixedBitSet>,
    /// `levels[k - 1][j]` for rank `k` and blocked goal `j`.
    levels: Vec<Vec<Level>>,
}

#[derive(Clone, Debug)]
struct Level {
    y: FixedBitSet,
    /// `x[i]`: cumulative layers of the least fixpoint for environment goal `i`.
    x: Vec<Vec<FixedBitSet>>,
}

impl EnvFixpoint {
    pub fn compute(arena: &Arena) -> EnvFixpoint {
        let n = arena.len();
        let sys_goals = goals(arena.sys_fair(), n);
        let env_goals = goals(arena.env_fair(), n);
        let mut z = vec![FixedBitSet::with_capacity(n)];
        let mut levels = Vec::new();
        loop {
            let prev = z.last().unwrap().clone();
            let escape = epre(arena, &prev);
            let mut next = prev.clone();
            let mut level = Vec::with_capacity(sys_goals.len());
            for goal in &sys_goals {
                let mut allowed = complement(goal);
                allowed.union_with(&escape);
                let mut y = full(n);
                let (y, x) = loop {
                    let mut stay = epre(arena, &y);
                    stay.intersect_with(&allowed);
                    let mut y_next = stay.clone();
                    let mut xs = Vec::with_capacity(env_goals.len());
                    for target in &env_goals {
                        let mut layers = Vec::new();
                        let mut x = FixedBitSet::with_capacity(n);
                        loop {
                            let mut x_next = epre(arena, &x);
                            x_next.union_with(target);
                            x_next.intersect_with(&stay);
                            if x_next == x {
                                break;
                            }
                            x = x_next;
                            layers.push(x.clone());
                        }
                        y_next.intersect_with(&x);
                        xs.push(layers);
                    }
                    if y_next == y {
                        break (y, xs);
                    }
                    y = y_next;
                };
                next.union_with(&y);
                level.push(Level { y, x });
            }
            if next == prev {
                return EnvFixpoint { z, levels };
            }
            z.push(next);
            levels.push(level);
        }
    }

    pub fn winning(&self) -> &FixedBitSet {
        self.z.last().unwrap()
    }

    fn rank(&self, s: usize) -> usize {
        self.z
            .iter()
            .position(|layer| layer.contains(s))
            .expect("state in environment winning region")
    }

    fn x_final(&self, k: usize, j: usize, i: usize) -> Option<&FixedBitSet> {
        self.levels[k - 1][j].x[i].last()
    }

    /// Keeps the memory while it is still meaningful at `t`, otherwise
    /// restarts at the rank of `t`.
    fn normalize(&self, t: usize, mem: Option<Memory>) -> Memory {
        let rank = self.rank(t);
        if let Some(m) = mem {
            if rank >= m.k && self.x_final(m.k, m.j, m.i).is_some_and(|x| x.contains(t)) {
                return m;
            }
        }
        let j = self.levels[rank - 1]
            .iter()
            .position(|l| l.y.contains(t))
            .expect("ranked state lies in some Y");
        Memory { k: rank, j, i: 0 }
    }

    /// Environment move at `s` and the memory after it.
    fn choose<'a>(&self, arena: &'a Arena, s: usize, mem: Memory) -> (&'a EnvMove, Memory) {
        let level = &self.levels[mem.k - 1][mem.j];
        let n = arena.len();
        let sys_goal = goals(arena.sys_fair(), n).swap_remove(mem.j);
        let env_goals = goals(arena.env_fair(), n);
        let pick = |target: &FixedBitSet| {
            arena
                .env_moves(s)
                .iter()
                .rev()
                .find(|m| m.succs.iter().all(|&t| target.contains(t)))
                .expect("environment strategy has a move")
        };
        if sys_goal.contains(s) {
            return (pick(&self.z[mem.k - 1]), mem);
        }
        if env_goals[mem.i].contains(s) {
            let i = (mem.i + 1) % env_goals.len();
            return (pick(&level.y), Memory { i, ..mem });
        }
        let layers = &level.x[mem.i];
        let l = layers
            .iter()
            .position(|x| x.contains(s))
            .expect("state lies in its pursuit layers");
        if l == 0 {
            return (pick(&FixedBitSet::with_capacity(n)), mem);
        }
        (pick(&layers[l - 1]), mem)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Memory {
    k: usize,
    j: usize,
    i: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("the environment does not win this game")]
pub struct NotEnvironmentWinning;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MooreState {
    /// Inputs emitted in this state.
    pub output: u64,
    /// Arena valuation the state was built from; `None` for the initial
    /// state. Informational only.
    pub origin: Option<Valuation>,
}

/// Environment counter-strategy: reads system outputs, emits inputs.
#[derive(Clone, Debug)]
pub struct MooreCounterStrategy {
    pub vars: Vars,
    pub initial: usize,
    pub states: Vec<MooreState>,
    /// Per state, `(system outputs, successor)` in increasing output order;
    /// defined exactly for the outputs the system may legally pick.
    pub transitions: Vec<Vec<(u64, usize)>>,
}

impl MooreCounterStrategy {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn step(&self, state: usize, outputs: u64) -> Option<usize> {
        self.transitions[state]
            .iter()
            .find(|(o, _)| *o == outputs)
            .map(|(_, t)| *t)
    }
}

pub fn extract_counterstrategy(arena: &Arena, fix: &EnvFixpoint) -> Result<MooreCounterStrategy, NotEnvironmentWinning> {
    let win = fix.winning();
    let start = arena
        .initial_moves()
        .iter()
        .rev()
        .find(|m| m.succs.iter().all(|&t| win.contains(t)))
        .ok_or(NotEnvironmentWinning)?;
    let ni = arena.vars().env_count();

    let mut keys: HashMap<(usize, Memory), usize> = HashMap::new();
    let mut pending: Vec<(usize, Memory)> = Vec::new();
    let mut states = vec![MooreState {
        output: start.input,
        origin: None,
    }];
    let mut transitions = vec![Vec::new()];
    let mut intern = |t: usize, mem: Memory, states: &mut Vec<MooreState>, pending: &mut Vec<(usize, Memory)>| {
        *keys.entry((t, mem)).or_insert_with(|| {
            states.push(MooreState {
                output: 0,
                origin: Some(arena.state(t)),
            });
            pending.push((t, mem));
            states.len() - 1
        })
    };

    for &t in &start.succs {
        let id = intern(t, fix.normalize(t, None), &mut states, &mut pending);
        transitions[0].push((arena.state(t).outputs(ni), id));
    }
    let mut next = 0;
    while next < pending.len() {
        let (s, mem) = pending[next];
        let id = next + 1;
        let (mv, after) = fix.choose(arena, s, mem);
        states[id].output = mv.input;
        let mut row = Vec::with_capacity(mv.succs.len());
        for &t in &mv.succs {
            let target = intern(t, fix.normalize(t, Some(after)), &mut states, &mut pending);
            row.push((arena.state(t).outputs(ni), target));
        }
        transitions.push(row);
        next += 1;
    }
    Ok(MooreCounterStrategy {
        vars: arena.vars().clone(),
        initial: 0,
        states,
        transitions,
    })
}
