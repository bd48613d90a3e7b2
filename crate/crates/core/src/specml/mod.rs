//! Specification language: syntax tree, reader and canonical printer.

mod ast;
mod format;
mod parser;

pub use ast::{
    eval_expr, BoolExpr, Gr1Part, Gr1Spec, MissingNextValuation, Owner, PartClass, Response, VarId,
    VarRef, Vars,
};
pub use format::{format_expr, format_part, format_spec};
pub use parser::{check_scope, parse_expr, parse_part, parse_spec, parse_var_list, ParseError};
