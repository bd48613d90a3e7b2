//! Literal-level normal forms used for state predicates and candidate bodies.

use serde::{Deserialize, Serialize};

use crate::specml::BoolExpr;
use crate::valuation::Valuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn negate(self) -> Self {
        Literal {
            positive: !self.positive,
            ..self
        }
    }

    pub fn holds(self, v: Valuation) -> bool {
        v.get(self.var) == self.positive
    }

    pub fn to_expr(self) -> BoolExpr {
        BoolExpr::literal(self.var, self.positive)
    }
}

/// Conjunction of literals, sorted by variable. Empty means `TRUE`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cube(pub Vec<Literal>);

impl Cube {
    pub fn new(mut lits: Vec<Literal>) -> Self {
        lits.sort();
        lits.dedup();
        Cube(lits)
    }

    /// Full assignment of the given variables as read from `v`.
    pub fn from_valuation(v: Valuation, vars: impl IntoIterator<Item = usize>) -> Self {
        Cube::new(vars.into_iter().map(|i| Literal::new(i, v.get(i))).collect())
    }

    /// Drops literals over variables outside `keep`.
    pub fn project(&self, keep: &[usize]) -> Cube {
        Cube(self.0.iter().copied().filter(|l| keep.contains(&l.var)).collect())
    }

    pub fn is_true(&self) -> bool {
        self.0.is_empty()
    }

    pub fn holds(&self, v: Valuation) -> bool {
        self.0.iter().all(|l| l.holds(v))
    }

    pub fn negate(&self) -> Clause {
        Clause(self.0.iter().map(|l| l.negate()).collect())
    }

    pub fn to_expr(&self) -> BoolExpr {
        BoolExpr::and(self.0.iter().map(|l| l.to_expr()))
    }
}

/// Disjunction of literals. Empty means `FALSE`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Clause(pub Vec<Literal>);

impl Clause {
    pub fn holds(&self, v: Valuation) -> bool {
        self.0.iter().any(|l| l.holds(v))
    }

    pub fn to_expr(&self) -> BoolExpr {
        BoolExpr::or(self.0.iter().map(|l| l.to_expr()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf(pub Vec<Clause>);

impl Cnf {
    pub fn holds(&self, v: Valuation) -> bool {
        self.0.iter().all(|c| c.holds(v))
    }

    pub fn to_expr(&self) -> BoolExpr {
        BoolExpr::and(self.0.iter().map(Clause::to_expr))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dnf(pub Vec<Cube>);

impl Dnf {
    /// Removes repeated cubes, keeping first occurrences.
    pub fn dedup(cubes: impl IntoIterator<Item = Cube>) -> Dnf {
        let mut out: Vec<Cube> = Vec::new();
        for c in cubes {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Dnf(out)
    }

    pub fn holds(&self, v: Valuation) -> bool {
        self.0.iter().any(|c| c.holds(v))
    }

    /// Complement as a conjunction of negated cubes.
    pub fn negate(&self) -> Cnf {
        Cnf(self.0.iter().map(Cube::negate).collect())
    }

    pub fn to_expr(&self) -> BoolExpr {
        BoolExpr::or(self.0.iter().map(Cube::to_expr))
    }
}

/// Simplifies a conjunction of clauses by repeatedly removing duplicate
/// clauses, collapsing complementary unit clauses to `FALSE`, and factoring
/// literals shared by every clause: `(l ∨ A) ∧ (l ∨ B) = l ∨ (A ∧ B)`.
pub fn simplify_cnf(cnf: &Cnf) -> BoolExpr {
    let groups: Vec<Vec<Literal>> = cnf.0.iter().map(|c| c.0.clone()).collect();
    simplify_groups(groups, true)
}

/// Dual of [`simplify_cnf`] for a disjunction of cubes.
pub fn simplify_dnf(dnf: &Dnf) -> BoolExpr {
    let groups: Vec<Vec<Literal>> = dnf.0.iter().map(|c| c.0.clone()).collect();
    simplify_groups(groups, false)
}

/// `cnf = true`: groups are clauses under a conjunction. Otherwise groups are
/// cubes under a disjunction.
fn simplify_groups(groups: Vec<Vec<Literal>>, cnf: bool) -> BoolExpr {
    let absorbing = BoolExpr::Const(!cnf);
    let inner = |lits: &[Literal]| {
        let items = lits.iter().map(|l| l.to_expr());
        if cnf {
            BoolExpr::or(items)
        } else {
            BoolExpr::and(items)
        }
    };
    let outer = |items: Vec<BoolExpr>| {
        if cnf {
            BoolExpr::and(items)
        } else {
            BoolExpr::or(items)
        }
    };

    let mut uniq: Vec<Vec<Literal>> = Vec::new();
    for mut g in groups {
        g.sort();
        g.dedup();
        if !uniq.contains(&g) {
            uniq.push(g);
        }
    }
    if uniq.is_empty() {
        return BoolExpr::Const(cnf);
    }
    if uniq.iter().any(|g| g.is_empty()) {
        return absorbing;
    }
    let units: Vec<Literal> = uniq.iter().filter(|g| g.len() == 1).map(|g| g[0]).collect();
    if units.iter().any(|l| units.contains(&l.negate())) {
        return absorbing;
    }
    if uniq.len() == 1 {
        return inner(&uniq[0]);
    }
    let common: Vec<Literal> = uniq[0]
        .iter()
        .copied()
        .filter(|l| uniq[1..].iter().all(|g| g.contains(l)))
        .collect();
    if common.is_empty() {
        return outer(uniq.iter().map(|g| inner(g)).collect());
    }
    let rest: Vec<Vec<Literal>> = uniq
        .iter()
        .map(|g| g.iter().copied().filter(|l| !common.contains(l)).collect())
        .collect();
    // `common` joins the remainder with the inner connective.
    let tail = if rest.iter().any(|g: &Vec<Literal>| g.is_empty()) {
        absorbing.clone()
    } else {
        simplify_groups(rest, cnf)
    };
    match tail {
        BoolExpr::Const(b) if b == !cnf => inner(&common),
        BoolExpr::Const(_) => BoolExpr::Const(cnf),
        tail => {
            let mut items: Vec<BoolExpr> = common.iter().map(|l| l.to_expr()).collect();
            items.push(tail);
            if cnf {
                BoolExpr::or(items)
            } else {
                BoolExpr::and(items)
            }
        }
    }
}
