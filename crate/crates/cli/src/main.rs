use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod failure;

use failure::Failure;

#[derive(Parser)]
#[command(
    name = "twistlab",
    version,
    about = "Local solubility, special fibres and no-root prime densities for twists d*y^2 = f(x)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, discriminant, bad primes and irreducibility of f.
    Analyze(AnalyzeArgs),
    /// Special fibre of d*y^2 = f(x) at a good odd prime p.
    Fiber(FiberArgs),
    /// Decide whether d*y^2 = f(x) has a Q_p-point.
    Solubility(SolubilityArgs),
    /// Sieve the primes p <= N at which f has no root.
    Sieve(SieveArgs),
    /// Check every no-root prime twist p*y^2 = f(x) with p <= N.
    SearchTwists(SearchArgs),
    /// List the registered algorithm variants.
    Methods,
}

#[derive(Args)]
struct PolySource {
    /// Polynomial, as an expression ("x^4+2x+1") or constant-first CSV ("1,2,0,0,1").
    #[arg(long = "f", allow_hyphen_values = true, required_unless_present = "f_file", conflicts_with = "f_file")]
    f: Option<String>,
    /// Read the polynomial from a file instead.
    #[arg(long)]
    f_file: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    poly: PolySource,
    /// Treat f as irreducible over Q when no certificate is found.
    #[arg(long)]
    assume_irreducible: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FiberArgs {
    #[command(flatten)]
    poly: PolySource,
    #[arg(long)]
    p: u64,
    /// Twist parameter; reduced modulo squares.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    d: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SolubilityArgs {
    #[command(flatten)]
    poly: PolySource,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    d: String,
    #[arg(long)]
    p: u64,
    /// Nested zoom limit per residue class (default v_p(disc) + 2g + 4).
    #[arg(long)]
    max_depth: Option<u32>,
    #[arg(long, default_value = "residue-tree")]
    method: String,
    #[arg(long)]
    assume_irreducible: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SieveArgs {
    #[command(flatten)]
    poly: PolySource,
    #[arg(long)]
    bound: u64,
    #[arg(long, default_value = "gcd")]
    root_method: String,
    /// Include the list of primes in S_f.
    #[arg(long)]
    members: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    poly: PolySource,
    #[arg(long)]
    bound: u64,
    #[arg(long, default_value = "residue-tree")]
    method: String,
    #[arg(long)]
    assume_irreducible: bool,
    #[command(flatten)]
    output: Output,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (rendered, output, falsified) = match cli.command {
        Command::Analyze(a) => {
            let f = commands::read_poly(&a.poly.f, &a.poly.f_file)?;
            (commands::analyze(&f, a.assume_irreducible, a.output.format)?, a.output, false)
        }
        Command::Fiber(a) => {
            let f = commands::read_poly(&a.poly.f, &a.poly.f_file)?;
            let d = commands::parse_twist(&a.d)?;
            (commands::fiber(&f, &d, a.p, a.output.format)?, a.output, false)
        }
        Command::Solubility(a) => {
            let f = commands::read_poly(&a.poly.f, &a.poly.f_file)?;
            let d = commands::parse_twist(&a.d)?;
            let opts = commands::SolubilityOptions {
                max_depth: a.max_depth,
                method: &a.method,
                assume_irreducible: a.assume_irreducible,
            };
            (commands::solubility(&f, &d, a.p, &opts, a.output.format)?, a.output, false)
        }
        Command::Sieve(a) => {
            let f = commands::read_poly(&a.poly.f, &a.poly.f_file)?;
            let workers = commands::worker_count()?;
            let text = commands::sieve(&f, a.bound, &a.root_method, a.members, workers, a.output.format)?;
            (text, a.output, false)
        }
        Command::SearchTwists(a) => {
            let f = commands::read_poly(&a.poly.f, &a.poly.f_file)?;
            let (text, falsified) =
                commands::search_twists(&f, a.bound, &a.method, a.assume_irreducible, a.output.format)?;
            (text, a.output, falsified)
        }
        Command::Methods => {
            print!("{}", commands::methods());
            return Ok(());
        }
    };
    match &output.out {
        Some(path) => std::fs::write(path, &rendered)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    if falsified {
        return Err(Failure::Falsification);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("twistlab: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
