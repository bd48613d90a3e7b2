//! Canonical printer. Compound operands are always parenthesized and maximal
//! subterms that only mention next-step variables are printed as `X(...)`,
//! so the output parses back to the same tree.

use std::fmt::Write as _;

use super::ast::{BoolExpr, Gr1Part, Gr1Spec, Owner, PartClass, Vars};

pub fn format_expr(expr: &BoolExpr, vars: &Vars) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr, vars, false);
    out
}

pub fn format_part(part: &Gr1Part, vars: &Vars) -> String {
    let body = format_expr(&part.body, vars);
    match part.class {
        PartClass::Init => body,
        PartClass::Trans => format!("G({body})"),
        PartClass::Liveness => format!("GF({body})"),
    }
}

fn header(player: Owner, class: PartClass) -> &'static str {
    match (player, class) {
        (Owner::Env, PartClass::Init) => "ENV_INIT",
        (Owner::Sys, PartClass::Init) => "SYS_INIT",
        (Owner::Env, PartClass::Trans) => "ENV_TRANS",
        (Owner::Sys, PartClass::Trans) => "SYS_TRANS",
        (Owner::Env, PartClass::Liveness) => "ENV_LIVENESS",
        (Owner::Sys, PartClass::Liveness) => "SYS_LIVENESS",
    }
}

/// Prints a whole specification. Parts keep their order; a section header
/// is repeated whenever the section changes.
pub fn format_spec(spec: &Gr1Spec) -> String {
    let vars = &spec.vars;
    let mut out = String::new();
    let names = |range: std::ops::Range<usize>| {
        range.map(|i| vars.name(i)).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(out, "ENV_VARS: {}", names(vars.env_indices()));
    let _ = writeln!(out, "SYS_VARS: {}", names(vars.sys_indices()));
    let mut open: Option<(Owner, PartClass)> = None;
    for part in &spec.parts {
        let section = (part.player, part.class);
        if open != Some(section) {
            let _ = writeln!(out, "{}:", header(part.player, part.class));
            open = Some(section);
        }
        let _ = writeln!(out, "  {}", format_part(part, vars));
    }
    if !spec.responses.is_empty() {
        out.push_str("SYS_RESPONSE:\n");
        for r in &spec.responses {
            let _ = writeln!(
                out,
                "  R({}, {})",
                format_expr(&r.trigger, vars),
                format_expr(&r.response, vars)
            );
        }
    }
    out
}

fn all_next(expr: &BoolExpr) -> bool {
    let refs = expr.refs();
    !refs.is_empty() && refs.iter().all(|r| r.next)
}

fn is_atomic(expr: &BoolExpr) -> bool {
    matches!(expr, BoolExpr::Const(_) | BoolExpr::Var(_) | BoolExpr::Not(_))
}

fn write_expr(out: &mut String, expr: &BoolExpr, vars: &Vars, in_next: bool) {
    if !in_next && all_next(expr) {
        out.push_str("X(");
        write_expr(out, expr, vars, true);
        out.push(')');
        return;
    }
    match expr {
        BoolExpr::Const(true) => out.push_str("TRUE"),
        BoolExpr::Const(false) => out.push_str("FALSE"),
        BoolExpr::Var(r) => out.push_str(vars.name(r.index)),
        BoolExpr::Not(e) => {
            out.push('!');
            write_operand(out, e, vars, in_next);
        }
        BoolExpr::And(es) => write_joined(out, es, " & ", vars, in_next),
        BoolExpr::Or(es) => write_joined(out, es, " | ", vars, in_next),
        BoolExpr::Implies(a, b) => {
            write_operand(out, a, vars, in_next);
            out.push_str(" -> ");
            write_operand(out, b, vars, in_next);
        }
        BoolExpr::Iff(a, b) => {
            write_operand(out, a, vars, in_next);
            out.push_str(" <-> ");
            write_operand(out, b, vars, in_next);
        }
    }
}

fn write_joined(out: &mut String, es: &[BoolExpr], sep: &str, vars: &Vars, in_next: bool) {
    for (i, e) in es.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        write_operand(out, e, vars, in_next);
    }
}

fn write_operand(out: &mut String, expr: &BoolExpr, vars: &Vars, in_next: bool) {
    if is_atomic(expr) || (!in_next && all_next(expr)) {
        write_expr(out, expr, vars, in_next);
    } else {
        out.push('(');
        write_expr(out, expr, vars, in_next);
        out.push(')');
    }
}
