use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{complement, cpre, full, goals};
use crate::arena::{Arena, EnvMove};
use crate::specml::Vars;
use crate::valuation::Valuation;

/// System fixpoint
/// `Z = νZ. ∩_j μY. ∪_i νX. (J_s^j ∩ cpre Z) ∪ cpre Y ∪ (¬J_e^i ∩ cpre X)`
/// with the intermediate sets kept for strategy construction.
#[derive(Clone, Debug)]
pub struct SysFixpoint {
    pub winning: FixedBitSet,
    /// `y[j][r]`: the `r`-th approximation of `Y` for goal `j`.
    y: Vec<Vec<FixedBitSet>>,
    /// `x[j][r][i]`.
    x: Vec<Vec<Vec<FixedBitSet>>>,
}

impl SysFixpoint {
    pub fn compute(arena: &Arena) -> SysFixpoint {
        let n = arena.len();
        let sys_goals = goals(arena.sys_fair(), n);
        let env_goals = goals(arena.env_fair(), n);
        let not_env: Vec<FixedBitSet> = env_goals.iter().map(complement).collect();
        let mut z = full(n);
        loop {
            let before = z.clone();
            let mut all_y = Vec::with_capacity(sys_goals.len());
            let mut all_x = Vec::with_capacity(sys_goals.len());
            for goal in &sys_goals {
                let mut reach_goal = cpre(arena, &z);
                reach_goal.intersect_with(goal);
                let mut y = FixedBitSet::with_capacity(n);
                let mut y_layers = Vec::new();
                let mut x_layers = Vec::new();
                loop {
                    let mut base = cpre(arena, &y);
                    base.union_with(&reach_goal);
                    let mut y_next = base.clone();
                    let mut xs = Vec::with_capacity(not_env.len());
                    for avoid in &not_env {
                        let mut x = z.clone();
                        loop {
                            let mut x_next = cpre(arena, &x);
                            x_next.intersect_with(avoid);
                            x_next.union_with(&base);
                            if x_next == x {
                                break;
                            }
                            x = x_next;
                        }
                        y_next.union_with(&x);
                        xs.push(x);
                    }
                    if y_next == y {
                        break;
                    }
                    y = y_next;
                    y_layers.push(y.clone());
                    x_layers.push(xs);
                }
                z = y;
                all_y.push(y_layers);
                all_x.push(x_layers);
            }
            if z == before {
                return SysFixpoint {
                    winning: z,
                    y: all_y,
                    x: all_x,
                };
            }
        }
    }

    /// Every initial environment choice has a system answer in the winning
    /// region (vacuously so when there is none).
    pub fn realizable(&self, arena: &Arena) -> bool {
        arena
            .initial_moves()
            .iter()
            .all(|m| m.succs.iter().any(|&t| self.winning.contains(t)))
    }

    fn rank(&self, j: usize, s: usize) -> usize {
        self.y[j]
            .iter()
            .position(|layer| layer.contains(s))
            .expect("state in winning region has a rank")
    }

    /// System answer to `mv` from winning state `s` while pursuing goal `j`;
    /// returns the successor and the next goal.
    fn answer(&self, goal_sets: &[FixedBitSet], s: usize, j: usize, mv: &EnvMove) -> (usize, usize) {
        let pick = |target: &FixedBitSet| mv.succs.iter().copied().find(|&t| target.contains(t));
        if goal_sets[j].contains(s) {
            let t = pick(&self.winning).expect("winning state keeps the play winning");
            return (t, (j + 1) % goal_sets.len());
        }
        let r = self.rank(j, s);
        if r > 0 {
            if let Some(t) = pick(&self.y[j][r - 1]) {
                return (t, j);
            }
        }
        let i = self.x[j][r]
            .iter()
            .position(|x| x.contains(s))
            .expect("ranked state lies in some X");
        let t = pick(&self.x[j][r][i]).expect("X is closed under the strategy");
        (t, j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MealyState {
    /// Valuation reached (inputs and outputs of the current step).
    pub valuation: Valuation,
    /// Index of the system liveness goal currently pursued.
    pub goal: usize,
}

/// Finite-memory system strategy: reads next inputs, answers with the next
/// full valuation.
#[derive(Clone, Debug)]
pub struct MealyStrategy {
    pub vars: Vars,
    pub states: Vec<MealyState>,
    /// Answer to each legal initial input.
    pub initial: Vec<(u64, usize)>,
    /// Per state: answer to each legal next input.
    pub transitions: Vec<Vec<(u64, usize)>>,
}

pub fn extract_system_strategy(arena: &Arena, fix: &SysFixpoint) -> MealyStrategy {
    let n = arena.len();
    let goal_sets = goals(arena.sys_fair(), n);
    let mut keys: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut intern = |key: (usize, usize), nodes: &mut Vec<(usize, usize)>| {
        *keys.entry(key).or_insert_with(|| {
            nodes.push(key);
            nodes.len() - 1
        })
    };
    let mut initial = Vec::new();
    for mv in arena.initial_moves() {
        if let Some(t) = mv.succs.iter().copied().find(|&t| fix.winning.contains(t)) {
            initial.push((mv.input, intern((t, 0), &mut nodes)));
        }
    }
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < nodes.len() {
        let (s, j) = nodes[next];
        let mut row = Vec::new();
        for mv in arena.env_moves(s) {
            let (t, j2) = fix.answer(&goal_sets, s, j, mv);
            row.push((mv.input, intern((t, j2), &mut nodes)));
        }
        transitions.push(row);
        next += 1;
    }
    MealyStrategy {
        vars: arena.vars().clone(),
        states: nodes
            .iter()
            .map(|&(s, j)| MealyState {
                valuation: arena.state(s),
                goal: j,
            })
            .collect(),
        initial,
        transitions,
    }
}
