use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lgb::cli::{run_command, Flags, Verb, EXIT_PARSE};

#[derive(Parser)]
#[command(name = "lgb", version, about = "Gröbner bases over Laurent polynomial rings and polytopal affinoid algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Problem file.
    file: PathBuf,
    /// Polynomial argument for reduce, member and info.
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Scale basis elements to leading coefficient 1.
    #[arg(long)]
    normalize: bool,
    /// Series cap, overriding the file's `precision`.
    #[arg(long)]
    precision: Option<String>,
    #[arg(long)]
    max_basis: Option<usize>,
    /// member: treat the generators as a basis and certify it first.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print a Gröbner basis, one element per line.
    Gb(Common),
    /// Divide --poly by the generators: remainder, then quotients.
    Reduce(Common),
    /// Exit 0 if --poly is in the ideal, 3 if not.
    Member(Common),
    /// Run the Buchberger criterion on the generators.
    Check(Common),
    /// Leading data of --poly, or a summary of the problem.
    Info(Common),
    /// Compare the engine with the brute-force oracles.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (verb, common, seed) = match cli.command {
        Command::Gb(c) => (Verb::Gb, Some(c), 0),
        Command::Reduce(c) => (Verb::Reduce, Some(c), 0),
        Command::Member(c) => (Verb::Member, Some(c), 0),
        Command::Check(c) => (Verb::Check, Some(c), 0),
        Command::Info(c) => (Verb::Info, Some(c), 0),
        Command::Selftest { seed } => (Verb::Selftest, None, seed),
    };
    let mut flags = Flags {
        seed,
        ..Flags::default()
    };
    let mut text = String::new();
    if let Some(c) = common {
        text = match std::fs::read_to_string(&c.file) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", c.file.display());
                return ExitCode::from(EXIT_PARSE as u8);
            }
        };
        flags.poly = c.poly;
        flags.normalize = c.normalize;
        flags.precision = c.precision;
        flags.max_basis = c.max_basis;
        flags.strict = c.strict;
    }
    let out = run_command(verb, &text, &flags);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
