use std::fmt;

use serde::{Deserialize, Serialize};

use crate::valuation::Valuation;

/// Which player controls a variable or owns a specification part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Owner {
    Env,
    Sys,
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Env => f.write_str("ENV"),
            Owner::Sys => f.write_str("SYS"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarId {
    pub name: String,
    pub owner: Owner,
}

/// The declared variables. Environment variables occupy indices
/// `0..env_count`, system variables follow; this is also the bit order of a
/// [`Valuation`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vars {
    names: Vec<String>,
    env_count: usize,
}

impl Vars {
    pub fn new(env: Vec<String>, sys: Vec<String>) -> Self {
        let env_count = env.len();
        let mut names = env;
        names.extend(sys);
        Vars { names, env_count }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn env_count(&self) -> usize {
        self.env_count
    }

    pub fn sys_count(&self) -> usize {
        self.names.len() - self.env_count
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn owner(&self, index: usize) -> Owner {
        if index < self.env_count {
            Owner::Env
        } else {
            Owner::Sys
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn id(&self, index: usize) -> VarId {
        VarId {
            name: self.names[index].clone(),
            owner: self.owner(index),
        }
    }

    pub fn env_indices(&self) -> std::ops::Range<usize> {
        0..self.env_count
    }

    pub fn sys_indices(&self) -> std::ops::Range<usize> {
        self.env_count..self.names.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    /// Appends a system variable and returns its index.
    pub(crate) fn push_sys(&mut self, name: String) -> usize {
        self.names.push(name);
        self.names.len() - 1
    }
}

/// A reference to a declared variable, optionally at the next time step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarRef {
    pub index: usize,
    pub next: bool,
}

/// Propositional formula over current and next-step variable references.
///
/// Conjunctions and disjunctions are n-ary and kept flat: the smart
/// constructors never produce an `And` directly under an `And` (same for
/// `Or`), which is also what the parser produces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var(VarRef),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Implies(Box<BoolExpr>, Box<BoolExpr>),
    Iff(Box<BoolExpr>, Box<BoolExpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("expression refers to the next step but no next valuation was supplied")]
pub struct MissingNextValuation;

impl BoolExpr {
    pub fn var(index: usize) -> Self {
        BoolExpr::Var(VarRef { index, next: false })
    }

    pub fn next_var(index: usize) -> Self {
        BoolExpr::Var(VarRef { index, next: true })
    }

    pub fn literal(index: usize, positive: bool) -> Self {
        let v = BoolExpr::var(index);
        if positive {
            v
        } else {
            BoolExpr::not(v)
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(e))
    }

    /// Flattening conjunction. An empty list is `TRUE`, a singleton is its
    /// only element.
    pub fn and(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        Self::nary(items, true)
    }

    /// Flattening disjunction. An empty list is `FALSE`.
    pub fn or(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        Self::nary(items, false)
    }

    fn nary(items: impl IntoIterator<Item = BoolExpr>, conj: bool) -> Self {
        let mut out = Vec::new();
        for item in items {
            match item {
                BoolExpr::And(inner) if conj => out.extend(inner),
                BoolExpr::Or(inner) if !conj => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => BoolExpr::Const(conj),
            1 => out.pop().unwrap(),
            _ if conj => BoolExpr::And(out),
            _ => BoolExpr::Or(out),
        }
    }

    pub fn implies(lhs: BoolExpr, rhs: BoolExpr) -> Self {
        BoolExpr::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: BoolExpr, rhs: BoolExpr) -> Self {
        BoolExpr::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// Marks every variable reference as a next-step reference.
    pub fn shift_next(&self) -> BoolExpr {
        self.map_refs(&|r| VarRef { next: true, ..r })
    }

    pub fn map_refs(&self, f: &impl Fn(VarRef) -> VarRef) -> BoolExpr {
        match self {
            BoolExpr::Const(b) => BoolExpr::Const(*b),
            BoolExpr::Var(r) => BoolExpr::Var(f(*r)),
            BoolExpr::Not(e) => BoolExpr::not(e.map_refs(f)),
            BoolExpr::And(es) => BoolExpr::And(es.iter().map(|e| e.map_refs(f)).collect()),
            BoolExpr::Or(es) => BoolExpr::Or(es.iter().map(|e| e.map_refs(f)).collect()),
            BoolExpr::Implies(a, b) => BoolExpr::implies(a.map_refs(f), b.map_refs(f)),
            BoolExpr::Iff(a, b) => BoolExpr::iff(a.map_refs(f), b.map_refs(f)),
        }
    }

    pub fn refs(&self) -> Vec<VarRef> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut Vec<VarRef>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(r) => out.push(*r),
            BoolExpr::Not(e) => e.collect_refs(out),
            BoolExpr::And(es) | BoolExpr::Or(es) => es.iter().for_each(|e| e.collect_refs(out)),
            BoolExpr::Implies(a, b) | BoolExpr::Iff(a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
        }
    }

    pub fn has_next(&self) -> bool {
        self.refs().iter().any(|r| r.next)
    }

    /// Evaluates the formula. `next` must be supplied whenever the formula
    /// contains next-step references.
    pub fn eval(&self, now: Valuation, next: Option<Valuation>) -> Result<bool, MissingNextValuation> {
        Ok(match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(r) => {
                if r.next {
                    next.ok_or(MissingNextValuation)?.get(r.index)
                } else {
                    now.get(r.index)
                }
            }
            BoolExpr::Not(e) => !e.eval(now, next)?,
            BoolExpr::And(es) => {
                for e in es {
                    if !e.eval(now, next)? {
                        return Ok(false);
                    }
                }
                true
            }
            BoolExpr::Or(es) => {
                for e in es {
                    if e.eval(now, next)? {
                        return Ok(true);
                    }
                }
                false
            }
            BoolExpr::Implies(a, b) => !a.eval(now, next)? || b.eval(now, next)?,
            BoolExpr::Iff(a, b) => a.eval(now, next)? == b.eval(now, next)?,
        })
    }

    /// Evaluation for callers that always supply both valuations.
    pub fn holds(&self, now: Valuation, next: Valuation) -> bool {
        self.eval(now, Some(next)).expect("next valuation supplied")
    }
}

/// Standalone evaluation entry point; see [`BoolExpr::eval`].
pub fn eval_expr(
    expr: &BoolExpr,
    now: Valuation,
    next: Option<Valuation>,
) -> Result<bool, MissingNextValuation> {
    expr.eval(now, next)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartClass {
    Init,
    Trans,
    Liveness,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gr1Part {
    pub class: PartClass,
    pub player: Owner,
    pub body: BoolExpr,
}

impl Gr1Part {
    pub fn new(class: PartClass, player: Owner, body: BoolExpr) -> Self {
        Gr1Part { class, player, body }
    }
}

/// `G(trigger -> X(F(response)))`, kept as written and expanded by
/// [`Gr1Spec::desugar`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Response {
    pub trigger: BoolExpr,
    pub response: BoolExpr,
}

/// A parsed GR(1) specification `env parts -> sys parts`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gr1Spec {
    pub vars: Vars,
    pub parts: Vec<Gr1Part>,
    pub responses: Vec<Response>,
}

impl Gr1Spec {
    pub fn new(vars: Vars) -> Self {
        Gr1Spec {
            vars,
            parts: Vec::new(),
            responses: Vec::new(),
        }
    }

    pub fn parts_of(&self, player: Owner) -> impl Iterator<Item = &Gr1Part> {
        self.parts.iter().filter(move |p| p.player == player)
    }

    pub fn parts_matching(&self, player: Owner, class: PartClass) -> impl Iterator<Item = &Gr1Part> {
        self.parts
            .iter()
            .filter(move |p| p.player == player && p.class == class)
    }

    /// The same specification with extra environment parts conjoined.
    pub fn with_assumptions<'a>(&self, extra: impl IntoIterator<Item = &'a Gr1Part>) -> Gr1Spec {
        let mut spec = self.clone();
        spec.parts.extend(extra.into_iter().cloned());
        spec
    }

    /// Rewrites every response `R(t, r)` into plain GR(1) parts using a fresh
    /// system variable `p` that records an open obligation:
    ///
    /// ```text
    /// SYS_INIT:     !p
    /// SYS_TRANS:    G(X(p) <-> ((t | p) & !X(r)))
    /// SYS_LIVENESS: GF(!p)
    /// ```
    ///
    /// Fresh variables are appended after the declared system variables, so
    /// existing indices are unchanged.
    pub fn desugar(&self) -> Gr1Spec {
        if self.responses.is_empty() {
            return self.clone();
        }
        let mut vars = self.vars.clone();
        let mut parts = self.parts.clone();
        for (k, resp) in self.responses.iter().enumerate() {
            let base = match &resp.response {
                BoolExpr::Var(r) => format!("pend_{}", self.vars.name(r.index)),
                _ => format!("pend_{k}"),
            };
            let mut name = base;
            while vars.index_of(&name).is_some() {
                name.push('_');
            }
            let p = vars.push_sys(name);
            parts.push(Gr1Part::new(
                PartClass::Init,
                Owner::Sys,
                BoolExpr::not(BoolExpr::var(p)),
            ));
            let obligation = BoolExpr::and([
                BoolExpr::or([resp.trigger.clone(), BoolExpr::var(p)]),
                BoolExpr::not(resp.response.shift_next()),
            ]);
            parts.push(Gr1Part::new(
                PartClass::Trans,
                Owner::Sys,
                BoolExpr::iff(BoolExpr::next_var(p), obligation),
            ));
            parts.push(Gr1Part::new(
                PartClass::Liveness,
                Owner::Sys,
                BoolExpr::not(BoolExpr::var(p)),
            ));
        }
        Gr1Spec {
            vars,
            parts,
            responses: Vec::new(),
        }
    }
}
