//! Random instance generators and brute-force oracles shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

use gr1_core::abstraction::Fts;
use gr1_core::specml::{parse_spec, BoolExpr, Gr1Part, Gr1Spec, Owner, PartClass, Vars};
use gr1_core::valuation::Valuation;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn load(name: &str) -> Gr1Spec {
    let path = format!("{}/../../specs/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_spec(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn vars(ni: usize, no: usize) -> Vars {
    Vars::new(
        (0..ni).map(|i| format!("e{i}")).collect(),
        (0..no).map(|i| format!("s{i}")).collect(),
    )
}

/// Random expression with leaves drawn from `now` (current references) and
/// `next` (next-step references).
pub fn random_expr(rng: &mut impl Rng, now: &[usize], next: &[usize], depth: usize) -> BoolExpr {
    if depth == 0 || rng.gen_bool(0.35) {
        let leaf_next = !next.is_empty() && (now.is_empty() || rng.gen_bool(0.5));
        let pool = if leaf_next { next } else { now };
        if pool.is_empty() {
            return BoolExpr::Const(rng.gen());
        }
        let v = *pool.choose(rng).unwrap();
        let e = if leaf_next { BoolExpr::next_var(v) } else { BoolExpr::var(v) };
        return if rng.gen() { e } else { BoolExpr::not(e) };
    }
    let a = random_expr(rng, now, next, depth - 1);
    let b = random_expr(rng, now, next, depth - 1);
    match rng.gen_range(0..5) {
        0 => BoolExpr::not(a),
        1 => BoolExpr::and([a, b]),
        2 => BoolExpr::or([a, b]),
        3 => BoolExpr::implies(a, b),
        _ => BoolExpr::iff(a, b),
    }
}

/// A transition body that is guaranteed to mention a next-step reference.
pub fn random_step(rng: &mut impl Rng, now: &[usize], next: &[usize]) -> BoolExpr {
    let e = random_expr(rng, now, next, 2);
    if e.has_next() {
        e
    } else {
        let v = *next.choose(rng).unwrap();
        BoolExpr::implies(e, BoolExpr::literal(v, rng.gen()).shift_next())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SpecShape {
    pub max_trans: usize,
    pub env_live: (usize, usize),
    pub sys_live: (usize, usize),
}

impl Default for SpecShape {
    fn default() -> Self {
        SpecShape {
            max_trans: 2,
            env_live: (0, 2),
            sys_live: (0, 2),
        }
    }
}

/// Random specification whose transition parts all contain `X(...)`.
pub fn random_spec(rng: &mut impl Rng, ni: usize, no: usize, shape: SpecShape) -> Gr1Spec {
    let vars = vars(ni, no);
    let env: Vec<usize> = (0..ni).collect();
    let all: Vec<usize> = (0..ni + no).collect();
    let mut spec = Gr1Spec::new(vars);
    let mut push = |class, player, body| spec.parts.push(Gr1Part::new(class, player, body));
    if rng.gen_bool(0.5) {
        push(PartClass::Init, Owner::Env, random_expr(rng, &env, &[], 1));
    }
    if rng.gen_bool(0.5) {
        push(PartClass::Init, Owner::Sys, random_expr(rng, &all, &[], 1));
    }
    for _ in 0..rng.gen_range(0..=shape.max_trans) {
        push(PartClass::Trans, Owner::Env, random_step(rng, &all, &env));
    }
    for _ in 0..rng.gen_range(0..=shape.max_trans) {
        push(PartClass::Trans, Owner::Sys, random_step(rng, &all, &all));
    }
    for _ in 0..rng.gen_range(shape.env_live.0..=shape.env_live.1) {
        push(PartClass::Liveness, Owner::Env, random_expr(rng, &all, &[], 1));
    }
    for _ in 0..rng.gen_range(shape.sys_live.0..=shape.sys_live.1) {
        push(PartClass::Liveness, Owner::Sys, random_expr(rng, &all, &[], 1));
    }
    spec
}

fn parts(spec: &Gr1Spec, player: Owner, class: PartClass) -> Vec<BoolExpr> {
    spec.parts
        .iter()
        .filter(|p| p.player == player && p.class == class)
        .map(|p| p.body.clone())
        .collect()
}

/// Winner by the GR(1) mu-calculus formula evaluated over all valuations,
/// reading the parts of `spec` directly (transition parts must contain
/// next references and there must be no response sugar). Returns whether the
/// system wins.
pub fn brute_force_realizable(spec: &Gr1Spec) -> bool {
    let ni = spec.vars.env_count();
    let n = spec.vars.len();
    let size = 1usize << n;
    let env_trans = parts(spec, Owner::Env, PartClass::Trans);
    let sys_trans = parts(spec, Owner::Sys, PartClass::Trans);
    let mut je = parts(spec, Owner::Env, PartClass::Liveness);
    let mut js = parts(spec, Owner::Sys, PartClass::Liveness);
    if je.is_empty() {
        je.push(BoolExpr::Const(true));
    }
    if js.is_empty() {
        js.push(BoolExpr::Const(true));
    }
    let val = |v: usize| Valuation(v as u64);
    let holds_all = |es: &[BoolExpr], s: usize, t: usize| es.iter().all(|e| e.holds(val(s), val(t)));
    let join = |i: usize, o: usize| i | o << ni;
    let cpre = |set: &Vec<bool>| -> Vec<bool> {
        (0..size)
            .map(|s| {
                (0..1usize << ni).all(|i| {
                    !holds_all(&env_trans, s, join(i, 0))
                        || (0..1usize << (n - ni)).any(|o| {
                            let t = join(i, o);
                            holds_all(&sys_trans, s, t) && set[t]
                        })
                })
            })
            .collect()
    };
    let sat = |e: &BoolExpr| -> Vec<bool> { (0..size).map(|s| e.holds(val(s), val(s))).collect() };
    let je: Vec<Vec<bool>> = je.iter().map(sat).collect();
    let js: Vec<Vec<bool>> = js.iter().map(sat).collect();

    let mut z = vec![true; size];
    loop {
        let cz = cpre(&z);
        let mut next_z = vec![true; size];
        for goal in &js {
            // mu Y. OR_i nu X. (goal & cpre Z) | cpre Y | (!je_i & cpre X)
            let mut y = vec![false; size];
            loop {
                let cy = cpre(&y);
                let mut acc = vec![false; size];
                for a in &je {
                    let mut x = vec![true; size];
                    loop {
                        let cx = cpre(&x);
                        let nx: Vec<bool> = (0..size)
                            .map(|s| (goal[s] && cz[s]) || cy[s] || (!a[s] && cx[s]))
                            .collect();
                        if nx == x {
                            break;
                        }
                        x = nx;
                    }
                    for s in 0..size {
                        acc[s] |= x[s];
                    }
                }
                if acc == y {
                    break;
                }
                y = acc;
            }
            for s in 0..size {
                next_z[s] &= y[s];
            }
        }
        if next_z == z {
            break;
        }
        z = next_z;
    }
    let env_init = parts(spec, Owner::Env, PartClass::Init);
    let sys_init = parts(spec, Owner::Sys, PartClass::Init);
    (0..1usize << ni).all(|i| {
        !holds_all(&env_init, join(i, 0), join(i, 0))
            || (0..1usize << (n - ni)).any(|o| {
                let v = join(i, o);
                holds_all(&sys_init, v, v) && z[v]
            })
    })
}

/// Bounded lasso search for a word satisfying the environment parts of
/// `spec` plus `psi`: a stem of at most `stem` steps from an initial
/// valuation and a loop of at most `lasso` steps visiting every liveness set.
/// Transition parts must contain next references.
pub fn lasso_consistent(spec: &Gr1Spec, psi: &[Gr1Part], stem: usize, lasso: usize) -> bool {
    let full = spec.with_assumptions(psi);
    let n = full.vars.len();
    let size = 1usize << n;
    let init = parts(&full, Owner::Env, PartClass::Init);
    let trans = parts(&full, Owner::Env, PartClass::Trans);
    let live = parts(&full, Owner::Env, PartClass::Liveness);
    let val = |v: usize| Valuation(v as u64);
    let step = |s: usize, t: usize| trans.iter().all(|e| e.holds(val(s), val(t)));
    let mask = |s: usize| -> u32 {
        live.iter()
            .enumerate()
            .filter(|(_, e)| e.holds(val(s), val(s)))
            .fold(0, |m, (k, _)| m | 1 << k)
    };
    let full_mask: u32 = (1u32 << live.len()) - 1;

    let mut frontier: Vec<bool> = (0..size).map(|v| init.iter().all(|e| e.holds(val(v), val(v)))).collect();
    let mut stems = frontier.clone();
    for _ in 0..stem {
        let next: Vec<bool> = (0..size).map(|t| (0..size).any(|s| frontier[s] && step(s, t))).collect();
        for t in 0..size {
            stems[t] |= next[t];
        }
        frontier = next;
    }
    (0..size).filter(|&s| stems[s]).any(|s| {
        let mut layer: Vec<(usize, u32)> = vec![(s, mask(s))];
        for _ in 0..lasso {
            let mut next: Vec<(usize, u32)> = Vec::new();
            for &(q, m) in &layer {
                for t in 0..size {
                    if step(q, t) {
                        let item = (t, m | mask(t));
                        if !next.contains(&item) {
                            next.push(item);
                        }
                    }
                }
            }
            if next.iter().any(|&(t, m)| t == s && m == full_mask) {
                return true;
            }
            layer = next;
        }
        false
    })
}

/// Random Fts of `n` states in which every state is reachable from `q0`.
/// Terminal states are allowed only when `terminal` is set.
pub fn random_fts(rng: &mut impl Rng, n: usize, terminal: bool) -> Fts {
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        let j = rng.gen_range(0..i);
        succ[j].push(i);
    }
    for row in succ.iter_mut() {
        for t in 0..n {
            if rng.gen_bool(0.25) {
                row.push(t);
            }
        }
    }
    if !terminal {
        for row in succ.iter_mut() {
            if row.is_empty() {
                row.push(rng.gen_range(0..n));
            }
        }
    }
    Fts::new(0, succ)
}

/// Independent graph checks on an adjacency list.
pub mod brute {
    /// States reachable from `root` using only states in `ok`.
    pub fn reach(succ: &[Vec<usize>], root: usize, ok: &dyn Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; succ.len()];
        if !ok(root) {
            return seen;
        }
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(q) = stack.pop() {
            for &t in &succ[q] {
                if ok(t) && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Whether `q` lies on a cycle among states in `ok`.
    pub fn on_cycle(succ: &[Vec<usize>], q: usize, ok: &dyn Fn(usize) -> bool) -> bool {
        ok(q) && succ[q].iter().any(|&t| ok(t) && reach(succ, t, ok)[q])
    }

    pub fn eventually(succ: &[Vec<usize>], q0: usize, c: &[usize]) -> bool {
        let ok = |q: usize| !c.contains(&q);
        let r = reach(succ, q0, &ok);
        !(0..succ.len()).any(|q| r[q] && on_cycle(succ, q, &ok))
    }

    pub fn eventually_always(succ: &[Vec<usize>], q0: usize, c: &[usize]) -> bool {
        let all = |_: usize| true;
        let r = reach(succ, q0, &all);
        (0..succ.len()).all(|q| !r[q] || !on_cycle(succ, q, &all) || c.contains(&q))
    }

    pub fn eventually_next(succ: &[Vec<usize>], q0: usize, c1: &[usize], c2: &[usize]) -> bool {
        let pruned: Vec<Vec<usize>> = succ
            .iter()
            .enumerate()
            .map(|(q, row)| {
                row.iter()
                    .copied()
                    .filter(|t| !(c1.contains(&q) && c2.contains(t)))
                    .collect()
            })
            .collect();
        let all = |_: usize| true;
        let r = reach(&pruned, q0, &all);
        !(0..succ.len()).any(|q| r[q] && on_cycle(&pruned, q, &all))
    }

    pub fn subset(mask: usize) -> Vec<usize> {
        (0..usize::BITS as usize).filter(|&b| mask >> b & 1 == 1).collect()
    }

    /// Minimal eventually configurations over `Q \ {q0}` of size at most
    /// `beta`, plus `{q0}`, ordered by size then lexicographically, with
    /// dummy-containing ones removed afterwards.
    pub fn minimal_eventually(fts: &gr1_core::abstraction::Fts, beta: usize) -> Vec<Vec<usize>> {
        let n = fts.len();
        let q0 = fts.initial;
        let good: Vec<usize> = (1usize..1 << n)
            .filter(|&m| m >> q0 & 1 == 0 && (m.count_ones() as usize) <= beta)
            .filter(|&m| eventually(&fts.succ, q0, &subset(m)))
            .collect();
        let mut minimal: Vec<Vec<usize>> = good
            .iter()
            .filter(|&&m| !good.iter().any(|&o| o != m && o & m == o))
            .map(|&m| subset(m))
            .collect();
        minimal.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        minimal.insert(0, vec![q0]);
        minimal.retain(|c| !c.iter().any(|&q| fts.is_dummy(q)));
        minimal
    }
}

/// Random Moore machine over `ni` env and `no` sys variables in which every
/// state is reachable and answers at least one system output.
pub fn random_moore(rng: &mut impl Rng, ni: usize, no: usize, n: usize) -> gr1_core::solver::MooreCounterStrategy {
    use gr1_core::solver::{MooreCounterStrategy, MooreState};
    let outs = 1u64 << no;
    loop {
        let transitions: Vec<Vec<(u64, usize)>> = (0..n)
            .map(|_| {
                let mut row: Vec<(u64, usize)> = Vec::new();
                for o in 0..outs {
                    if rng.gen_bool(0.6) {
                        row.push((o, rng.gen_range(0..n)));
                    }
                }
                if row.is_empty() {
                    row.push((rng.gen_range(0..outs), rng.gen_range(0..n)));
                }
                row
            })
            .collect();
        let succ: Vec<Vec<usize>> = transitions.iter().map(|r| r.iter().map(|&(_, t)| t).collect()).collect();
        if brute::reach(&succ, 0, &|_| true).iter().all(|&b| b) {
            return MooreCounterStrategy {
                vars: vars(ni, no),
                initial: 0,
                states: (0..n)
                    .map(|_| MooreState {
                        output: rng.gen_range(0..1u64 << ni),
                        origin: None,
                    })
                    .collect(),
                transitions,
            };
        }
    }
}
