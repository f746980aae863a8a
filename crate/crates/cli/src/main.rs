//! `tc`: compile, check, transform and query tractable circuits.
//!
//! Query commands print the numeric answer on the final line of standard
//! output. Exit codes: 0 success, 1 usage error, 2 property or precondition
//! failure, 3 I/O or format error.

mod boolean;
mod numeric;
mod oracle;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "tc", version, about = "Knowledge compilation and tractable circuit toolkit")]
struct Cli {
    /// Log progress to standard error (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a CNF into a Decision-DNNF circuit.
    Compile(boolean::CompileArgs),
    /// Check structural properties of an NNF circuit.
    Check(boolean::CheckArgs),
    /// Make every Or gate smooth.
    Smooth(boolean::SmoothArgs),
    /// Model count, optionally under evidence.
    Count(boolean::CountArgs),
    /// Weighted model count.
    Wmc(boolean::WmcArgs),
    /// Maximize over X the weighted count of the remaining variables.
    Emajsat(boolean::EmajsatArgs),
    /// Sentential decision diagrams.
    #[command(subcommand)]
    Sdd(boolean::SddCommand),
    /// Arithmetic-circuit queries.
    #[command(subcommand)]
    Ac(numeric::AcCommand),
    /// Probabilistic SDDs.
    #[command(subcommand)]
    Psdd(numeric::PsddCommand),
    /// Bayesian networks.
    #[command(subcommand)]
    Bn(numeric::BnCommand),
    /// Brute-force reference answers for the query commands.
    #[command(subcommand)]
    Oracle(oracle::OracleCommand),
}

/// Everything that can stop a command, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    /// A checked property does not hold; the report is already printed.
    Property(String),
    Core(tc_core::Error),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Property(_) => 2,
            Failure::Core(tc_core::Error::Precondition(_) | tc_core::Error::CapExceeded { .. }) => 2,
            Failure::Core(_) | Failure::Io(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Property(m) => write!(f, "{m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<tc_core::Error> for Failure {
    fn from(e: tc_core::Error) -> Self {
        Failure::Core(e)
    }
}

pub type Outcome = Result<(), Failure>;

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out`, or to standard output without one.
pub fn emit(out: Option<&PathBuf>, text: &str) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Flags shared by every command that trusts or checks determinism.
#[derive(Args, Clone, Copy)]
pub struct Trust {
    /// Accept determinism without a certificate.
    #[arg(long)]
    assume_deterministic: bool,
    /// Variable cap for exhaustive checks.
    #[arg(long, default_value_t = tc_core::DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
}

impl Trust {
    pub fn options(self) -> tc_core::TrustOptions {
        tc_core::TrustOptions { assume_deterministic: self.assume_deterministic, oracle_cap: self.oracle_cap }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    And,
    Or,
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Compile(a) => boolean::compile(a),
        Command::Check(a) => boolean::check(a),
        Command::Smooth(a) => boolean::smooth(a),
        Command::Count(a) => boolean::count(a),
        Command::Wmc(a) => boolean::wmc(a),
        Command::Emajsat(a) => boolean::emajsat(a),
        Command::Sdd(c) => boolean::sdd(c),
        Command::Ac(c) => numeric::ac(c),
        Command::Psdd(c) => numeric::psdd(c),
        Command::Bn(c) => numeric::bn(c),
        Command::Oracle(c) => oracle::run(c),
    }
}

fn main() -> ExitCode {
    // Exit quietly when a downstream reader such as `head` closes the pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tc: {f}");
            ExitCode::from(f.code())
        }
    }
}
