//! Command-line front end, Graphviz export and a local JSON API for the GR(1)
//! toolkit.

pub mod commands;
pub mod dot;
pub mod server;
pub mod session;

use gr1_core::arena::DEFAULT_STATE_LIMIT;

pub const STATE_LIMIT_VAR: &str = "GR1_STATE_LIMIT";

/// Arena cap from `GR1_STATE_LIMIT`, or the library default.
pub fn state_limit_from_env() -> Result<usize, String> {
    match std::env::var(STATE_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("{STATE_LIMIT_VAR} must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_STATE_LIMIT),
    }
}
