use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monpres::sweep::Family;
use monpres_cli::{cmd_analyze, cmd_sweep, cmd_verify, oracle_set, read_input, Exit, InputError, Output};

#[derive(Parser)]
#[command(
    name = "monpres",
    version,
    about = "Normality and class groups of monoids with at most two monomial relations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    One,
    Two,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize, decide normality and compute the class group.
    Analyze {
        /// Presentation file, `-` for stdin, or an inline presentation.
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Check the combinatorial results against brute-force oracles.
    Verify {
        input: String,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 8)]
        degree_bound: usize,
        /// Any of cancel, normal, class, all (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "all")]
        oracle: Vec<String>,
    },
    /// Run analyze and verify over a family of small presentations.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        max_exp: u64,
        #[arg(long, default_value_t = 8)]
        degree_bound: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn fail(e: InputError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(Exit::Input as u8)
}

fn emit(out: Output) -> ExitCode {
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.exit as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { input, json } => match read_input(&input).and_then(|t| cmd_analyze(&t, json)) {
            Ok(out) => emit(out),
            Err(e) => fail(e),
        },
        Command::Verify {
            input,
            json,
            degree_bound,
            oracle,
        } => {
            let run = oracle_set(&oracle)
                .and_then(|set| read_input(&input).and_then(|t| cmd_verify(&t, degree_bound, set, json)));
            match run {
                Ok(out) => emit(out),
                Err(e) => fail(e),
            }
        }
        Command::Sweep {
            family,
            max_n,
            max_exp,
            degree_bound,
            out,
        } => {
            let family = match family {
                FamilyArg::One => Family::One,
                FamilyArg::Two => Family::Two,
            };
            match cmd_sweep(family, max_n, max_exp, degree_bound, out.as_deref()) {
                Ok((summary, csv)) => {
                    print!("{csv}");
                    eprintln!(
                        "{} rows, {} disagreeing, {} unfinished",
                        summary.rows, summary.disagreements, summary.unfinished
                    );
                    ExitCode::from(summary.exit as u8)
                }
                Err(e) => fail(e),
            }
        }
    }
}
