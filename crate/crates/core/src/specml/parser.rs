//! Line/section based reader for GR(1) specification files.
//!
//! ```text
//! # comment
//! ENV_VARS: r c
//! SYS_VARS: g v
//! SYS_RESPONSE: R(r, g)
//! SYS_TRANS:
//!   G((c | g) -> X(!g))
//!   G(c -> !v)
//! SYS_LIVENESS: GF(g & v)
//! ```
//!
//! Operator precedence, tightest first: `!`, `&`, `|`, `->` (right
//! associative), `<->`.

use super::ast::{BoolExpr, Gr1Part, Gr1Spec, Owner, PartClass, Response, VarRef, Vars};
use crate::valuation::MAX_VARS;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Scope { line: usize, message: String },
    #[error("variable `{name}` declared more than once")]
    DuplicateVar { name: String },
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

const RESERVED: &[&str] = &["X", "G", "GF", "F", "R", "TRUE", "FALSE", "true", "false"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    EnvVars,
    SysVars,
    Init(Owner),
    Trans(Owner),
    Liveness(Owner),
    Response,
}

impl Section {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "ENV_VARS" => Section::EnvVars,
            "SYS_VARS" => Section::SysVars,
            "ENV_INIT" => Section::Init(Owner::Env),
            "SYS_INIT" => Section::Init(Owner::Sys),
            "ENV_TRANS" => Section::Trans(Owner::Env),
            "SYS_TRANS" => Section::Trans(Owner::Sys),
            "ENV_LIVENESS" => Section::Liveness(Owner::Env),
            "SYS_LIVENESS" => Section::Liveness(Owner::Sys),
            "SYS_RESPONSE" => Section::Response,
            _ => return None,
        })
    }
}

/// A chunk of source text with its position in the file (1-based).
#[derive(Clone, Copy)]
struct Span<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Splits `NAME: rest` when the line opens a section.
fn section_header(line: &str) -> Option<(&str, usize)> {
    let trimmed = line.trim_start();
    let lead = line.len() - trimmed.len();
    let name_len = trimmed
        .bytes()
        .take_while(|b| b.is_ascii_uppercase() || *b == b'_')
        .count();
    if name_len == 0 {
        return None;
    }
    let after = trimmed[name_len..].trim_start();
    if !after.starts_with(':') {
        return None;
    }
    let colon = line.len() - after.len();
    Some((&trimmed[..name_len], colon + 1 - lead + lead))
}

pub fn parse_spec(text: &str) -> Result<Gr1Spec, ParseError> {
    let mut sections: Vec<(Section, Span<'_>)> = Vec::new();
    let mut current: Option<Section> = None;
    let mut seen_env = false;
    let mut seen_sys = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let (content, col) = if let Some((name, rest_at)) = section_header(line) {
            let section = Section::from_name(name).ok_or_else(|| {
                let col = line.len() - line.trim_start().len() + 1;
                syntax(line_no, col, format!("unknown section `{name}`"))
            })?;
            seen_env |= section == Section::EnvVars;
            seen_sys |= section == Section::SysVars;
            current = Some(section);
            (&line[rest_at..], rest_at + 1)
        } else {
            (line, 1)
        };
        if content.trim().is_empty() {
            continue;
        }
        let Some(section) = current else {
            return Err(syntax(line_no, 1, "content before the first section header"));
        };
        sections.push((
            section,
            Span {
                text: content,
                line: line_no,
                col,
            },
        ));
    }

    if !seen_env {
        return Err(syntax(1, 1, "missing ENV_VARS section"));
    }
    if !seen_sys {
        return Err(syntax(1, 1, "missing SYS_VARS section"));
    }

    let mut env = Vec::new();
    let mut sys = Vec::new();
    for (section, span) in &sections {
        let target = match section {
            Section::EnvVars => &mut env,
            Section::SysVars => &mut sys,
            _ => continue,
        };
        for (name, col) in split_names(span) {
            check_identifier(name, span.line, col)?;
            target.push(name.to_string());
        }
    }
    let mut all: Vec<&String> = env.iter().chain(sys.iter()).collect();
    all.sort();
    if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
        return Err(ParseError::DuplicateVar { name: w[0].clone() });
    }
    if all.len() > MAX_VARS {
        return Err(syntax(1, 1, format!("at most {MAX_VARS} variables are supported")));
    }

    let mut spec = Gr1Spec::new(Vars::new(env, sys));
    for (section, span) in &sections {
        match *section {
            Section::EnvVars | Section::SysVars => {}
            Section::Init(player) => {
                let part = parse_line(span, &spec.vars, player, PartClass::Init)?;
                spec.parts.push(part);
            }
            Section::Trans(player) => {
                let part = parse_line(span, &spec.vars, player, PartClass::Trans)?;
                spec.parts.push(part);
            }
            Section::Liveness(player) => {
                let part = parse_line(span, &spec.vars, player, PartClass::Liveness)?;
                spec.parts.push(part);
            }
            Section::Response => {
                let resp = parse_response(span, &spec.vars)?;
                spec.responses.push(resp);
            }
        }
    }
    Ok(spec)
}

/// Parses a single part in file syntax, e.g. `G((c & r) -> X(!c))` for an
/// environment transition or `GF(!r)` for a liveness part.
pub fn parse_part(text: &str, vars: &Vars, player: Owner, class: PartClass) -> Result<Gr1Part, ParseError> {
    let span = Span { text, line: 1, col: 1 };
    parse_line(&span, vars, player, class)
}

/// Parses a bare Boolean expression; `X(...)` is accepted anywhere.
pub fn parse_expr(text: &str, vars: &Vars) -> Result<BoolExpr, ParseError> {
    let span = Span { text, line: 1, col: 1 };
    let tokens = lex(&span)?;
    let mut p = Parser::new(&tokens, vars, span.line, text.len() + 1);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a comma or whitespace separated list of variable names.
pub fn parse_var_list(text: &str, vars: &Vars) -> Result<Vec<usize>, ParseError> {
    let span = Span { text, line: 1, col: 1 };
    let mut out = Vec::new();
    for (name, col) in split_names(&span) {
        let index = vars
            .index_of(name)
            .ok_or_else(|| syntax(1, col, format!("unknown variable `{name}`")))?;
        if !out.contains(&index) {
            out.push(index);
        }
    }
    Ok(out)
}

fn split_names<'a>(span: &Span<'a>) -> Vec<(&'a str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in span.text.char_indices().chain(std::iter::once((span.text.len(), ' '))) {
        let sep = ch.is_whitespace() || ch == ',';
        match (start, sep) {
            (None, false) => start = Some(i),
            (Some(s), true) => {
                out.push((&span.text[s..i], span.col + s));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn check_identifier(name: &str, line: usize, col: usize) -> Result<(), ParseError> {
    let mut chars = name.chars();
    let ok_start = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    if !ok_start || !chars.all(is_ident_char) {
        return Err(syntax(line, col, format!("invalid variable name `{name}`")));
    }
    if RESERVED.contains(&name) {
        return Err(syntax(line, col, format!("`{name}` is reserved")));
    }
    Ok(())
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '[' || c == ']' || c == '.'
}

#[derive(Clone, Debug, PartialEq)]
enum Tok<'a> {
    Ident(&'a str),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Iff,
}

fn lex<'a>(span: &Span<'a>) -> Result<Vec<(Tok<'a>, usize)>, ParseError> {
    let src = span.text;
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let col = span.col + i;
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                out.push((Tok::Implies, col));
                continue;
            }
            b'<' if src[i..].starts_with("<->") => {
                i += 3;
                out.push((Tok::Iff, col));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let len = src[i..].chars().take_while(|&c| is_ident_char(c)).count();
                out.push((Tok::Ident(&src[i..i + len]), col));
                i += len;
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(syntax(span.line, col, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'t, 'a> {
    tokens: &'t [(Tok<'a>, usize)],
    pos: usize,
    vars: &'t Vars,
    line: usize,
    end_col: usize,
    in_next: bool,
}

impl<'t, 'a> Parser<'t, 'a> {
    fn new(tokens: &'t [(Tok<'a>, usize)], vars: &'t Vars, line: usize, end_col: usize) -> Self {
        Parser {
            tokens,
            pos: 0,
            vars,
            line,
            end_col,
            in_next: false,
        }
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        syntax(self.line, self.col(), message)
    }

    fn bump(&mut self) -> Option<Tok<'a>> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok<'a>, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.tokens.len() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<BoolExpr, ParseError> {
        let mut lhs = self.implication()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let rhs = self.implication()?;
            lhs = BoolExpr::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<BoolExpr, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(BoolExpr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<BoolExpr, ParseError> {
        let mut items = vec![self.conjunction()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            items.push(self.conjunction()?);
        }
        Ok(BoolExpr::or(items))
    }

    fn conjunction(&mut self) -> Result<BoolExpr, ParseError> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(BoolExpr::and(items))
    }

    fn unary(&mut self) -> Result<BoolExpr, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            return Ok(BoolExpr::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<BoolExpr, ParseError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident("TRUE" | "true")) => Ok(BoolExpr::Const(true)),
            Some(Tok::Ident("FALSE" | "false")) => Ok(BoolExpr::Const(false)),
            Some(Tok::Ident("X")) => {
                if self.in_next {
                    return Err(syntax(self.line, col, "nested `X(...)` is not allowed"));
                }
                self.expect(Tok::LParen, "`(` after `X`")?;
                self.in_next = true;
                let e = self.expr();
                self.in_next = false;
                let e = e?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if RESERVED.contains(&name) {
                    return Err(syntax(self.line, col, format!("unexpected `{name}`")));
                }
                let index = self.vars.index_of(name).ok_or_else(|| ParseError::Scope {
                    line: self.line,
                    message: format!("undeclared variable `{name}`"),
                })?;
                Ok(BoolExpr::Var(VarRef {
                    index,
                    next: self.in_next,
                }))
            }
            Some(_) => Err(syntax(self.line, col, "expected an expression")),
            None => Err(syntax(self.line, col, "unexpected end of line")),
        }
    }

    /// `NAME(` ... `)` wrapper around a whole line.
    fn wrapped(&mut self, name: &str) -> Result<BoolExpr, ParseError> {
        match self.peek() {
            Some(Tok::Ident(n)) if *n == name => self.pos += 1,
            _ => return Err(self.error(format!("expected `{name}(...)`"))),
        }
        self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        self.finish()?;
        Ok(e)
    }
}

fn parse_line(span: &Span<'_>, vars: &Vars, player: Owner, class: PartClass) -> Result<Gr1Part, ParseError> {
    let tokens = lex(span)?;
    let mut p = Parser::new(&tokens, vars, span.line, span.col + span.text.len());
    let body = match class {
        PartClass::Init => {
            let e = p.expr()?;
            p.finish()?;
            e
        }
        PartClass::Trans => p.wrapped("G")?,
        PartClass::Liveness => p.wrapped("GF")?,
    };
    let part = Gr1Part::new(class, player, body);
    check_scope(&part, vars).map_err(|message| ParseError::Scope {
        line: span.line,
        message,
    })?;
    Ok(part)
}

fn parse_response(span: &Span<'_>, vars: &Vars) -> Result<Response, ParseError> {
    let tokens = lex(span)?;
    let mut p = Parser::new(&tokens, vars, span.line, span.col + span.text.len());
    match p.peek() {
        Some(Tok::Ident("R")) => p.pos += 1,
        _ => return Err(p.error("expected `R(trigger, response)`")),
    }
    p.expect(Tok::LParen, "`(` after `R`")?;
    let trigger = p.expr()?;
    p.expect(Tok::Comma, "`,`")?;
    let response = p.expr()?;
    p.expect(Tok::RParen, "`)`")?;
    p.finish()?;
    if trigger.has_next() || response.has_next() {
        return Err(ParseError::Scope {
            line: span.line,
            message: "`X(...)` is not allowed inside R(...)".into(),
        });
    }
    Ok(Response { trigger, response })
}

/// Checks the per-class variable restrictions of a part.
pub fn check_scope(part: &Gr1Part, vars: &Vars) -> Result<(), String> {
    for r in part.body.refs() {
        if r.index >= vars.len() {
            return Err(format!("variable index {} out of range", r.index));
        }
        let name = vars.name(r.index);
        let owner = vars.owner(r.index);
        match part.class {
            PartClass::Init | PartClass::Liveness if r.next => {
                return Err(format!("`X({name})` is not allowed in a {:?} part", part.class));
            }
            PartClass::Init if part.player == Owner::Env && owner == Owner::Sys => {
                return Err(format!("ENV_INIT may not refer to system variable `{name}`"));
            }
            PartClass::Trans if r.next && part.player == Owner::Env && owner == Owner::Sys => {
                return Err(format!("ENV_TRANS may not refer to `X({name})` of a system variable"));
            }
            _ => {}
        }
    }
    Ok(())
}
