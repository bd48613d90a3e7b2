//! `check` and `refine` subcommands, writing to caller-supplied streams.

use std::io::Write;
use std::path::Path;

use gr1_core::abstraction::abstract_fts;
use gr1_core::arena::build_arena_with_limit;
use gr1_core::candidates::VariableSubsets;
use gr1_core::refine::{refine_search, SearchConfig, SearchMode};
use gr1_core::solver::solve_realizability;
use gr1_core::specml::{parse_spec, Gr1Spec};

use crate::dot::{counterstrategy_dot, fts_dot};
use crate::session::parse_subset;

pub const EXIT_REALIZABLE: i32 = 0;
pub const EXIT_UNREALIZABLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

fn load(path: &Path) -> Result<Gr1Spec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_spec(&text).map_err(|e| format!("{}:{}", path.display(), gr1_core::Error::from(e)))
}

fn emit(target: &Path, text: &str, out: &mut dyn Write) -> Result<(), String> {
    if target == Path::new("-") {
        out.write_all(text.as_bytes()).map_err(|e| e.to_string())
    } else {
        std::fs::write(target, text).map_err(|e| format!("{}: {e}", target.display()))
    }
}

pub struct CheckArgs<'a> {
    pub spec: &'a Path,
    /// Counter-strategy graph destination; `-` for standard output.
    pub dot: Option<&'a Path>,
    pub fts_dot: Option<&'a Path>,
    pub state_limit: usize,
}

pub fn check(args: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_check(args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn run_check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32, String> {
    let spec = load(args.spec)?;
    let arena = build_arena_with_limit(&spec, args.state_limit).map_err(|e| e.to_string())?;
    let res = solve_realizability(&arena);
    let Some(cs) = res.counter_strategy else {
        writeln!(out, "REALIZABLE").map_err(|e| e.to_string())?;
        return Ok(EXIT_REALIZABLE);
    };
    writeln!(out, "UNREALIZABLE").map_err(|e| e.to_string())?;
    if let Some(path) = args.dot {
        emit(path, &counterstrategy_dot(&cs), out)?;
    }
    if let Some(path) = args.fts_dot {
        let (fts, preds) = abstract_fts(&cs);
        emit(path, &fts_dot(&fts, Some((&preds, &cs.vars))), out)?;
    }
    Ok(EXIT_UNREALIZABLE)
}

pub struct RefineArgs<'a> {
    pub spec: &'a Path,
    pub alpha: usize,
    pub beta: Option<usize>,
    /// Comma separated environment variables per subset; all of them if unset.
    pub p: [Option<&'a str>; 4],
    pub all: bool,
    /// Print the JSON report on `out` and the summary on `err`.
    pub json: bool,
    pub state_limit: usize,
}

/// Exit 0 when a refinement was found or none was needed, 1 when the search
/// came back empty, 2 on errors.
pub fn refine(args: &RefineArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_refine(args, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn run_refine(args: &RefineArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let spec = load(args.spec)?;
    let all: Vec<usize> = spec.vars.env_indices().collect();
    let mut subsets = [vec![], vec![], vec![], vec![]];
    for (slot, text) in subsets.iter_mut().zip(args.p) {
        *slot = match text {
            Some(t) => parse_subset(t, &spec.vars).map_err(|e| e.to_string())?,
            None => all.clone(),
        };
    }
    let [p1, p2, p3, p4] = subsets;
    let cfg = SearchConfig {
        beta: args.beta,
        mode: if args.all { SearchMode::AllWithinDepth } else { SearchMode::FirstRefinement },
        state_limit: args.state_limit,
        ..SearchConfig::new(args.alpha, VariableSubsets { p1, p2, p3, p4 })
    };
    let (found, report) = refine_search(&spec, &cfg).map_err(|e| gr1_core::Error::from(e).to_string())?;

    let mut summary = String::new();
    if report.already_realizable {
        summary.push_str("already realizable\n");
    } else {
        for (k, r) in found.iter().enumerate() {
            summary.push_str(&format!("refinement {} (depth {}):\n", k + 1, r.depth));
            for f in r.formulas(&spec) {
                summary.push_str(&format!("  {f}\n"));
            }
        }
        summary.push_str(&format!(
            "{} refinements, {} counter-strategies, {} candidates, {} inconsistent\n",
            found.len(),
            report.counterstrategies.len(),
            report.candidates_generated,
            report.inconsistent
        ));
    }
    let io = |e: std::io::Error| e.to_string();
    if args.json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
        writeln!(out, "{text}").map_err(io)?;
        err.write_all(summary.as_bytes()).map_err(io)?;
    } else {
        out.write_all(summary.as_bytes()).map_err(io)?;
    }
    Ok(if found.is_empty() { EXIT_UNREALIZABLE } else { EXIT_REALIZABLE })
}
