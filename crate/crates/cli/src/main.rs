use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

mod commands;
mod report;

/// Knot groups, duality checks and genus certificates for one-dimensional
/// minimal sets given by flow expansions.
#[derive(Parser, Debug)]
#[command(name = "flowknot", version)]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a built-in embedding stage end to end.
    Fixture {
        /// One of dyadic_unknotted, dyadic_trefoil, fibonacci_unknotted,
        /// fibonacci_trefoil, thue_morse_simplified.
        name: String,
    },
    /// Knot-group system, unknottedness verdict and Čech H¹ of an expansion file.
    Expansion {
        file: PathBuf,
        /// Number of stages to process.
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Sturmian substitutions for a continued-fraction prefix.
    Sturmian {
        #[arg(required = true, num_args = 1..)]
        cf: Vec<u32>,
        /// Second prefix to test for a common tail.
        #[arg(long, num_args = 1..)]
        compare: Option<Vec<u32>>,
    },
    /// The σ_w re-embedding for a seed word.
    SigmaW {
        /// Digits, or comma-separated letters for alphabets above 10.
        w: String,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
    },
    /// Re-embeddings with pairwise distinct knot types.
    Certificate(CertificateArgs),
    /// Count homomorphisms from a presentation file into a small finite group.
    Homs {
        file: PathBuf,
        /// s2, s3, s4 or z/m.
        #[arg(long)]
        target: String,
    },
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("base").required(true).args(["sub", "cf"])))]
struct CertificateArgs {
    /// Substitution file `{"alphabet": 2, "images": [...]}`.
    #[arg(long)]
    sub: Option<PathBuf>,
    /// Continued-fraction prefix, comma separated.
    #[arg(long, value_delimiter = ',')]
    cf: Option<Vec<u32>>,
    /// Number of distinct knot types wanted.
    #[arg(short = 'm', long = "count", value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    /// Maximum seed length.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fixture { name } => commands::fixture(&name),
        Command::Expansion { file, depth } => commands::expansion(&file, depth),
        Command::Sturmian { cf, compare } => commands::sturmian(cf, compare),
        Command::SigmaW { w, alphabet } => commands::sigma_w(&w, alphabet),
        Command::Certificate(a) => commands::certificate(a.sub.as_deref(), a.cf, a.m as usize, a.budget as usize),
        Command::Homs { file, target } => commands::homs(&file, &target),
    };
    match result {
        Ok(report) => {
            print!("{}", if cli.json { report.to_json() } else { report.to_text() });
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
