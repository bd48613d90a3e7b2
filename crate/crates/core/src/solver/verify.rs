//! Closed-loop checks of extracted strategies against a specification,
//! evaluated directly on the specification's rules (no arena involved).

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{MealyStrategy, MooreCounterStrategy};
use crate::graph::{cyclic_states, fair_scc_exists, reachable};
use crate::rules::Rules;
use crate::specml::{BoolExpr, Gr1Spec, Vars};
use crate::valuation::{blocks, low_mask, Valuation};

fn same_shape(a: &Vars, b: &Vars) -> bool {
    a.len() == b.len() && a.env_count() == b.env_count()
}

fn fair_sets(exprs: &[BoolExpr], vals: &[Option<Valuation>]) -> Vec<FixedBitSet> {
    exprs
        .iter()
        .map(|e| {
            let mut set = FixedBitSet::with_capacity(vals.len());
            for (i, v) in vals.iter().enumerate() {
                if v.is_some_and(|v| e.holds(v, v)) {
                    set.insert(i);
                }
            }
            set
        })
        .collect()
}

/// Whether every play against `cs` satisfies the environment part of `spec`
/// and violates the system part.
pub fn verify_counterstrategy(cs: &MooreCounterStrategy, spec: &Gr1Spec) -> bool {
    let rules = Rules::compile(spec);
    if !same_shape(&rules.vars, &cs.vars) || cs.initial >= cs.len() {
        return false;
    }
    let ni = rules.vars.env_count();
    let no = rules.vars.sys_count();

    let mut ids: HashMap<(usize, Option<Valuation>), usize> = HashMap::new();
    let mut nodes: Vec<(usize, Option<Valuation>)> = vec![(cs.initial, None)];
    ids.insert((cs.initial, None), 0);
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < nodes.len() {
        let (sigma, now) = nodes[next];
        let input = cs.states[sigma].output;
        if input & !low_mask(ni) != 0 {
            return false;
        }
        let probe = Valuation::join(input, 0, ni);
        let env_ok = match now {
            None => rules.env.init_holds(probe),
            Some(v) => rules.env.trans_holds(v, probe),
        };
        if !env_ok {
            return false;
        }
        let mut row = Vec::new();
        for output in blocks(no) {
            let w = Valuation::join(input, output, ni);
            let legal = match now {
                None => rules.sys.init_holds(w),
                Some(v) => rules.sys.trans_holds(v, w),
            };
            if !legal {
                continue;
            }
            let Some(target) = cs.step(sigma, output).filter(|&t| t < cs.len()) else {
                return false;
            };
            let key = (target, Some(w));
            let id = *ids.entry(key).or_insert_with(|| {
                nodes.push(key);
                nodes.len() - 1
            });
            row.push(id);
        }
        adj.push(row);
        next += 1;
    }

    let vals: Vec<Option<Valuation>> = nodes.iter().map(|n| n.1).collect();
    let sys_fair = fair_sets(&rules.sys.liveness, &vals);
    if fair_scc_exists(&adj, &[0], None, &sys_fair) {
        return false;
    }
    let reach = reachable(&adj, &[0], None);
    for set in fair_sets(&rules.env.liveness, &vals) {
        let mut avoid = reach.clone();
        avoid.difference_with(&set);
        if !cyclic_states(&adj, Some(&avoid)).is_clear() {
            return false;
        }
    }
    true
}

/// Whether every play with `st` satisfies `spec` (environment part implies
/// system part).
pub fn verify_system_strategy(st: &MealyStrategy, spec: &Gr1Spec) -> bool {
    let rules = Rules::compile(spec);
    if !same_shape(&rules.vars, &st.vars) {
        return false;
    }
    let ni = rules.vars.env_count();
    let answer = |row: &[(u64, usize)], input: u64| row.iter().find(|(i, _)| *i == input).map(|(_, t)| *t);

    let mut roots = Vec::new();
    for input in blocks(ni) {
        if !rules.env.init_holds(Valuation::join(input, 0, ni)) {
            continue;
        }
        let Some(t) = answer(&st.initial, input).filter(|&t| t < st.states.len()) else {
            return false;
        };
        let w = st.states[t].valuation;
        if w.inputs(ni) != input || !rules.sys.init_holds(w) {
            return false;
        }
        roots.push(t);
    }

    let n = st.states.len();
    if st.transitions.len() != n {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    let mut seen = FixedBitSet::with_capacity(n);
    let mut todo = roots.clone();
    seen.extend(roots.iter().copied());
    while let Some(s) = todo.pop() {
        let v = st.states[s].valuation;
        for input in blocks(ni) {
            if !rules.env.trans_holds(v, Valuation::join(input, 0, ni)) {
                continue;
            }
            let Some(t) = answer(&st.transitions[s], input).filter(|&t| t < n) else {
                return false;
            };
            let w = st.states[t].valuation;
            if w.inputs(ni) != input || !rules.sys.trans_holds(v, w) {
                return false;
            }
            adj[s].push(t);
            if !seen.contains(t) {
                seen.insert(t);
                todo.push(t);
            }
        }
    }

    let vals: Vec<Option<Valuation>> = st.states.iter().map(|s| Some(s.valuation)).collect();
    let env_fair = fair_sets(&rules.env.liveness, &vals);
    for goal in fair_sets(&rules.sys.liveness, &vals) {
        let mut avoid = seen.clone();
        avoid.difference_with(&goal);
        let starts: Vec<usize> = avoid.ones().collect();
        if fair_scc_exists(&adj, &starts, Some(&avoid), &env_fair) {
            return false;
        }
    }
    true
}
