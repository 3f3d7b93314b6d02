//! `operad-forge` — presentations, completion, dimensions, named
//! verifications and generating functions from one binary.
//!
//! Exit codes: 0 success / all checks pass; 1 a verification failed;
//! 2 usage or input error; 3 a resource limit was hit.

mod cache;
mod run;

use clap::{Parser, Subcommand};
use operad_forge_core::{Error, DEFAULT_STEP_LIMIT};
use run::{Format, OrderName, RunConfig, RunOpts, SourceOpts};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "operad-forge",
    version,
    about = "Shuffle-operad rewriting workbench",
    long_about = "Completes operad presentations into rewriting systems, counts normal \
                  monomials, runs the named verifications, and evaluates the companion \
                  generating-function identities."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete a presentation and print dimensions for arities 1..max
    Dims {
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Reduce an element (relation-expression or monomial-sum syntax) to
    /// its normal form
    NormalForm {
        /// Element text, e.g. "(a1 o a2) o a3" or "m(m(1,2),3) - m(1,m(2,3))"
        element: String,
        /// Also print the reduction certificate
        #[arg(long)]
        certificate: bool,
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Complete a presentation and write the rewriting-system dump (JSON)
    Complete {
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a named verification, or all of them
    Verify {
        /// Check name, or "all"
        name: String,
        /// Override the check's default arity bound
        #[arg(long, value_name = "N")]
        max_arity: Option<usize>,
        /// Reduction step budget
        #[arg(long, value_name = "K", default_value_t = DEFAULT_STEP_LIMIT)]
        step_limit: u64,
        /// Monomial order (the named checks run under pathlex)
        #[arg(long, value_enum, default_value_t = OrderName::Pathlex)]
        order: OrderName,
        /// Cap on worker threads
        #[arg(long, value_name = "T")]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write to a file instead of stdout
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Exact exponential generating functions
    Series {
        #[command(subcommand)]
        which: SeriesCommand,
    },
}

#[derive(Subcommand)]
enum SeriesCommand {
    /// The rooted-tree series f = t*exp(f); dims view n^(n-1)
    TreeEgf {
        /// Truncation order
        #[arg(long, value_name = "N", default_value_t = operad_forge_core::series::DEFAULT_ORDER)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// The three Euler-characteristic series and their sum t - t*exp(-t)
    EulerChain {
        #[arg(long, value_name = "N", default_value_t = operad_forge_core::series::DEFAULT_ORDER)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Compositional inverse of a series expression
    Invert {
        /// Series expression, e.g. "t*exp(-t)"
        #[arg(long, value_name = "EXPR")]
        input: String,
        #[arg(long, value_name = "N", default_value_t = operad_forge_core::series::DEFAULT_ORDER)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code_for(&e));
        }
    }
}

/// 2 for usage and input problems, 3 when a resource budget was exhausted.
fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::StepLimitExceeded(_) | Error::InterReductionDiverged(_) => 3,
        _ => 2,
    }
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Dims { source, opts } => {
            run::cap_threads(opts.threads)?;
            run::cmd_dims(&RunConfig::resolve(&source, &opts)?)
        }
        Command::NormalForm {
            element,
            certificate,
            source,
            opts,
        } => {
            run::cap_threads(opts.threads)?;
            run::cmd_normal_form(&RunConfig::resolve(&source, &opts)?, &element, certificate)
        }
        Command::Complete { source, opts } => {
            run::cap_threads(opts.threads)?;
            run::cmd_complete(&RunConfig::resolve(&source, &opts)?)
        }
        Command::Verify {
            name,
            max_arity,
            step_limit,
            order,
            threads,
            format,
            output,
        } => {
            run::cap_threads(threads)?;
            run::cmd_verify(&name, max_arity, step_limit, order, format, output.as_deref())
        }
        Command::Series { which } => match which {
            SeriesCommand::TreeEgf { order, format, output } => {
                run::cmd_series_tree_egf(order, format, output.as_deref())
            }
            SeriesCommand::EulerChain { order, format, output } => {
                run::cmd_series_euler_chain(order, format, output.as_deref())
            }
            SeriesCommand::Invert {
                input,
                order,
                format,
                output,
            } => run::cmd_series_invert(&input, order, format, output.as_deref()),
        },
    }
}
