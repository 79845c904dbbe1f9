use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mouldlab::acceptance::AcceptanceConfig;
use mouldlab::checks::Mode;
use mouldlab_cli::commands::{
    cmd_check, cmd_eval, cmd_ma, cmd_report, threads_from_env, Format, Outcome, Property, EXIT_USAGE,
};
use mouldlab_cli::dsl::EvalConfig;

#[derive(Parser)]
#[command(name = "mouldlab", version, about = "Exact mould calculus from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Truncation depth.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=64))]
    max_depth: u64,
    /// Weight bound (builder indices, series truncation).
    #[arg(long, default_value_t = 14)]
    max_weight: usize,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the output to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print its canonical form.
    Eval {
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check a property of the mould an expression evaluates to.
    Check {
        #[arg(value_enum)]
        property: PropertyArg,
        expr: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance suite.
    Report {
        #[arg(long, value_enum, default_value_t = Suite::Acceptance)]
        suite: Suite,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Apply ma to a series in the letters a, b (e.g. "[a,b] + 1/2*[b,[b,a]]").
    Ma {
        series: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Corrected,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Acceptance,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Alternal,
    Push,
    Circneutral,
    Firstalt,
    Fay,
    Krv,
    Equiv,
}

fn format(common: &Common, default: Format) -> Format {
    match common.format {
        None => default,
        Some(FormatArg::Text) => Format::Text,
        Some(FormatArg::Json) => Format::Json,
    }
}

fn eval_cfg(common: &Common) -> EvalConfig {
    EvalConfig { max_depth: common.max_depth as usize, max_weight: common.max_weight }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out) = match &cli.command {
        Command::Eval { expr, common } => (cmd_eval(expr, &eval_cfg(common), format(common, Format::Text)), &common.out),
        Command::Check { property, expr, mode, common } => {
            let property = match property {
                PropertyArg::Alternal => Property::Alternal,
                PropertyArg::Push => Property::Push,
                PropertyArg::Circneutral => Property::CircNeutral,
                PropertyArg::Firstalt => Property::FirstAlt,
                PropertyArg::Fay => Property::Fay,
                PropertyArg::Krv => Property::Krv,
                PropertyArg::Equiv => Property::Equiv,
            };
            let mode = match mode {
                ModeArg::Strict => Mode::Strict,
                ModeArg::Corrected => Mode::Corrected,
            };
            (cmd_check(property, expr, mode, &eval_cfg(common), format(common, Format::Json)), &common.out)
        }
        Command::Report { suite: Suite::Acceptance, seed, common } => {
            let cfg = AcceptanceConfig { seed: *seed, max_depth: common.max_depth as usize, max_weight: common.max_weight };
            let outcome = match threads_from_env() {
                Ok(threads) => cmd_report(&cfg, format(common, Format::Json), threads),
                Err(msg) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
            };
            (outcome, &common.out)
        }
        Command::Ma { series, common } => (cmd_ma(series, common.max_weight, format(common, Format::Text)), &common.out),
    };
    eprint!("{}", outcome.stderr);
    let written = match out {
        Some(path) => std::fs::write(path, &outcome.stdout),
        None => std::io::stdout().write_all(outcome.stdout.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(outcome.code as u8)
}
