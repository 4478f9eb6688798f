//! `coarse-nash`: corpus generation, solving and axiom checks from the shell.
//!
//! Exit codes: 0 when everything ran and matched expectations, 1 when a check
//! or profile expectation failed, 2 on bad input.

mod commands;
mod corpus;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "coarse-nash", version, about = "Coarse Nash bargaining solutions and axiom checks")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sampled trials per check.
    #[arg(long, global = true, default_value_t = 200)]
    pub trials: usize,
    /// Dominance and argmax tolerance, within [1e-12, 1e-3].
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Expectation profile: theorem1, coarse, lemma1, prop2, prop3.
    #[arg(long, global = true)]
    pub profile: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a corpus of random problem files into `--out`.
    Gen(commands::GenArgs),
    /// Solve problem files; one CSV row per chosen point.
    Solve(commands::SolveArgs),
    /// Run the sampled axiom suite on a rule.
    CheckAxioms(commands::CheckArgs),
    /// Validate an improving set against its defining conditions.
    ValidateSet(commands::SetArgs),
    /// Find a separating weight for an improving set.
    Separate(commands::SetArgs),
    /// Check the revealed relation of a rule and dump its probe cloud.
    Rationalize(commands::RationalizeArgs),
    /// Compare the chosen sets of two rules problem by problem.
    Compare(commands::CompareArgs),
}

/// What a command concluded, as distinct from whether it could run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Mismatch,
}

fn check_globals(g: &GlobalOpts) -> Result<()> {
    if let Some(tol) = g.tol {
        if !(1e-12..=1e-3).contains(&tol) {
            bail!("--tol must lie in [1e-12, 1e-3], got {tol}");
        }
    }
    if g.trials == 0 {
        bail!("--trials must be positive");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    check_globals(&cli.global)?;
    let g = &cli.global;
    match cli.command {
        Command::Gen(a) => commands::gen(g, &a),
        Command::Solve(a) => commands::solve(g, &a),
        Command::CheckAxioms(a) => commands::check_axioms(g, &a),
        Command::ValidateSet(a) => commands::validate_set(g, &a),
        Command::Separate(a) => commands::separate(g, &a),
        Command::Rationalize(a) => commands::rationalize(g, &a),
        Command::Compare(a) => commands::compare(g, &a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
