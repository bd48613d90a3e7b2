use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gr1_cli::commands::{self, CheckArgs, RefineArgs, EXIT_ERROR};
use gr1_cli::server::{self, AppState};

#[derive(Parser)]
#[command(name = "gr1", version, about = "GR(1) realizability checking and assumption mining")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide realizability; exit 0 realizable, 1 unrealizable, 2 error.
    Check {
        spec: PathBuf,
        /// Write the counter-strategy as DOT (`-` for stdout).
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the counter-strategy's abstraction as DOT (`-` for stdout).
        #[arg(long)]
        fts_dot: Option<PathBuf>,
    },
    /// Search for environment assumptions that make the spec realizable.
    Refine {
        spec: PathBuf,
        /// Maximum number of counter-strategies along a search path.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        alpha: u64,
        /// Pattern size bound; defaults to the largest outdegree.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        beta: Option<u64>,
        /// Environment variables for eventually-always patterns.
        #[arg(long)]
        p1: Option<String>,
        /// Environment variables for eventually patterns.
        #[arg(long)]
        p2: Option<String>,
        /// Environment variables for the current step of eventually-next patterns.
        #[arg(long)]
        p3: Option<String>,
        /// Environment variables for the next step of eventually-next patterns.
        #[arg(long)]
        p4: Option<String>,
        /// Report every refinement within depth alpha instead of the first.
        #[arg(long)]
        all: bool,
        /// Print the search report as JSON; the summary goes to stderr.
        #[arg(long)]
        json: bool,
    },
    /// Serve the JSON API for interactive sessions.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        bind: IpAddr,
        /// Keep one JSON file per session in this directory.
        #[arg(long)]
        persist: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let state_limit = match gr1_cli::state_limit_from_env() {
        Ok(n) => n,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let (mut out, mut err) = (std::io::stdout(), std::io::stderr());
    let code = match cli.command {
        Command::Check { spec, dot, fts_dot } => commands::check(
            &CheckArgs { spec: &spec, dot: dot.as_deref(), fts_dot: fts_dot.as_deref(), state_limit },
            &mut out,
            &mut err,
        ),
        Command::Refine { spec, alpha, beta, p1, p2, p3, p4, all, json } => commands::refine(
            &RefineArgs {
                spec: &spec,
                alpha: alpha as usize,
                beta: beta.map(|b| b as usize),
                p: [p1.as_deref(), p2.as_deref(), p3.as_deref(), p4.as_deref()],
                all,
                json,
                state_limit,
            },
            &mut out,
            &mut err,
        ),
        Command::Serve { port, bind, persist } => {
            let state = match &persist {
                Some(dir) => match AppState::with_persistence(state_limit, dir) {
                    Ok(s) => s,
                    Err(e) => {
                        eprintln!("error: {}: {e}", dir.display());
                        return ExitCode::from(EXIT_ERROR as u8);
                    }
                },
                None => AppState::new(state_limit),
            };
            let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
            match rt.block_on(server::serve(SocketAddr::new(bind, port), state)) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_ERROR
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
