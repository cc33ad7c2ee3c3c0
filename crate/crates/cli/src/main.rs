mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, Outcome};

#[derive(Debug, Parser)]
#[command(name = "nu", version, about = "Boundary-complexity invariant of ordered handle decompositions")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replay a trace and print e_mu per prefix.
    Compute { trace: PathBuf },
    /// Minimise over orderings of the trace's handles.
    Search {
        trace: PathBuf,
        /// Maximum number of orderings to visit.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Enumerate every ordering regardless of budget.
        #[arg(long)]
        all_orderings: bool,
    },
    /// Boundary union of two traces.
    Compose {
        m: PathBuf,
        n: PathBuf,
        #[arg(long)]
        glue: PathBuf,
        /// Compare the composite value with the parts.
        #[arg(long)]
        check: bool,
    },
    /// Interface and first-Betti bounds for a piece graph.
    Obstruct { graph: PathBuf },
    /// Handle-budget test for a decomposition into pieces.
    Refute {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        z: u64,
        #[arg(long)]
        hmax: u64,
        #[arg(long = "hW")]
        h_w: u64,
    },
    /// List, show, verify or export built-in manifolds.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        verify: bool,
        /// Print the entry's traces as trace JSON.
        #[arg(long)]
        export: bool,
    },
    /// Report every problem with a trace.
    Validate { trace: PathBuf },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Compute { trace } => commands::compute(&trace),
        Command::Search {
            trace,
            budget,
            all_orderings,
        } => commands::search(&trace, if all_orderings { usize::MAX } else { budget }),
        Command::Compose { m, n, glue, check } => commands::compose(&m, &n, &glue, check),
        Command::Obstruct { graph } => commands::obstruct(&graph),
        Command::Refute { l, z, hmax, h_w } => Ok(commands::refute(l, z, hmax, h_w)),
        Command::Catalog { name, verify, export } => commands::catalog(name.as_deref(), verify, export),
        Command::Validate { trace } => commands::validate(&trace),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let json = cli.json;
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(cli) {
        Ok(out) => {
            let text = if json {
                render::json_report(&argv, &out)
            } else {
                out.human.clone()
            };
            println!("{text}");
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
