//! `faircake`: run cake-cutting mechanisms and audits from scenario files.
//!
//! Exit status is 0 on success, 1 when an `--expect-*` assertion fails and 2
//! when the input cannot be used.

mod commands;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use faircake::lp::FairnessConstraint;
use faircake::mechanism::MechanismKind;

use commands::{CliError, Output};

#[derive(Parser)]
#[command(name = "faircake", version, about = "Exact cake cutting from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mechanism on the scenario's agents.
    Run {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        mechanism: Mechanism,
        /// Print the scenario with the result as its allocation and profile
        /// instead of the report.
        #[arg(long)]
        emit_scenario: bool,
        #[command(flatten)]
        expect: Expectations,
    },
    /// Audit the scenario's allocation.
    Audit {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        expect: Expectations,
    },
    /// Check whether the scenario's profile is a Length Game equilibrium.
    Equilibrium {
        #[command(flatten)]
        input: Input,
        /// Reduce the profile first instead of rejecting unreduced ones.
        #[arg(long)]
        reduce: bool,
        #[command(flatten)]
        expect: Expectations,
    },
    /// Optimal allocation, optionally under a fairness criterion.
    Optimal {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Objective::Utilitarian)]
        objective: Objective,
        #[arg(long, default_value = "none", value_parser = parse_criterion)]
        criterion: FairnessConstraint,
        /// Write the simplex tableau trace to stderr.
        #[arg(long)]
        verbose_lp: bool,
        #[command(flatten)]
        expect: Expectations,
    },
    /// Price of a fairness criterion: unconstrained over constrained optimum.
    Pof {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = parse_criterion)]
        criterion: FairnessConstraint,
    },
    /// Query counts of a Robertson-Webb mechanism over a range of agent counts.
    Bench {
        #[arg(long, value_enum)]
        mechanism: Mechanism,
        #[arg(long, default_value = "2..16", value_parser = parse_range)]
        n_range: (usize, usize),
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Args)]
struct Input {
    /// Scenario file; standard input when absent or `-`.
    file: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Default)]
pub struct Expectations {
    #[arg(long)]
    pub expect_proportional: bool,
    #[arg(long)]
    pub expect_envy_free: bool,
    #[arg(long)]
    pub expect_equitable: bool,
    #[arg(long)]
    pub expect_non_wasteful: bool,
    #[arg(long)]
    pub expect_equilibrium: bool,
}

impl Expectations {
    fn names(&self) -> Vec<&'static str> {
        [
            (self.expect_proportional, "proportional"),
            (self.expect_envy_free, "envy-free"),
            (self.expect_equitable, "equitable"),
            (self.expect_non_wasteful, "non-wasteful"),
            (self.expect_equilibrium, "equilibrium"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mechanism {
    CutAndChoose,
    LastDiminisher,
    EvenPaz,
    Selfridge,
    LexOrder,
    LengthGame,
    Procaccia,
}

impl Mechanism {
    pub fn kind(self) -> MechanismKind {
        match self {
            Mechanism::CutAndChoose => MechanismKind::CutAndChoose,
            Mechanism::LastDiminisher => MechanismKind::LastDiminisher,
            Mechanism::EvenPaz => MechanismKind::EvenPaz,
            Mechanism::Selfridge => MechanismKind::Selfridge,
            Mechanism::LexOrder => MechanismKind::LexOrder,
            Mechanism::LengthGame => MechanismKind::LengthGame,
            Mechanism::Procaccia => MechanismKind::Procaccia,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    Utilitarian,
    Egalitarian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

fn parse_criterion(s: &str) -> Result<FairnessConstraint, String> {
    s.parse()
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("empty or zero-based range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn read_input(file: &Option<PathBuf>) -> Result<String, CliError> {
    match file {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display()))),
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn execute(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Run { input, mechanism, emit_scenario, expect } => {
            let text = read_input(&input.file)?;
            commands::run(&text, mechanism, emit_scenario, input.format, &expect)
        }
        Command::Audit { input, expect } => commands::audit(&read_input(&input.file)?, input.format, &expect),
        Command::Equilibrium { input, reduce, expect } => {
            commands::equilibrium(&read_input(&input.file)?, reduce, input.format, &expect)
        }
        Command::Optimal { input, objective, criterion, verbose_lp, expect } => {
            let text = read_input(&input.file)?;
            commands::optimal(&text, objective, criterion, verbose_lp, input.format, &expect)
        }
        Command::Pof { input, criterion } => commands::pof(&read_input(&input.file)?, criterion, input.format),
        Command::Bench { mechanism, n_range, seed, format } => commands::bench(mechanism, n_range, seed, format),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            if out.failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("expectation failed: {}", out.failed.join(", "));
                ExitCode::from(1)
            }
        }
        Err(CliError::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
