use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use quatfield_core::Convention;
use serde::Serialize;

use crate::commands;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "quatfield", version, about = "Quaternionic scalar field checks: classical waves, lattice runs, Fock spaces and associators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the momentum constraints of a plane-wave spec
    Validate(Common),
    /// Evolve the four component fields on a periodic 1+1D lattice
    Evolve(Common),
    /// Tabulate energy and charge over an occupation basis
    Spectrum(Common),
    /// Rebuild the classical wave from quantized matrix elements on a grid
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Dagger pattern 1-4; overrides the config
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        variant: Option<u8>,
    },
    /// Print the associator derivation and the ladder checks
    Associator(Common),
    /// Run the ladder and field commutator suite
    FockCheck(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Paper,
    Rescaled,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => Convention::Paper,
            ConventionArg::Rescaled => Convention::Rescaled,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON input document
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file, written atomically; stdout when absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Tolerance override for the command's main assertion
    #[arg(long, value_name = "FLOAT")]
    pub tol: Option<f64>,
    /// Keep (paper) or drop (rescaled) the 1/4 weight of the four-component sums
    #[arg(long, value_enum, default_value_t = ConventionArg::Paper)]
    pub convention: ConventionArg,
    /// Seed for randomized checks
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Common {
    pub fn convention(&self) -> Convention {
        self.convention.into()
    }

    pub fn require_config(&self) -> Result<&Path, CliError> {
        self.config.as_deref().ok_or_else(|| CliError::Usage("--config is required".into()))
    }

    pub fn tol_or(&self, default: f64) -> Result<f64, CliError> {
        match self.tol {
            None => Ok(default),
            Some(t) if t > 0.0 && t.is_finite() => Ok(t),
            Some(t) => Err(CliError::Usage(format!("--tol must be positive, got {t}"))),
        }
    }

    pub fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Default, PartialEq)]
pub struct Outcome {
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

#[derive(Serialize)]
struct FailureRecord<'a> {
    command: &'a str,
    failures: &'a [String],
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Evolve(_) => "evolve",
            Command::Spectrum(_) => "spectrum",
            Command::Reconstruct { .. } => "reconstruct",
            Command::Associator(_) => "associator",
            Command::FockCheck(_) => "fock-check",
        }
    }
}

pub fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate(c) => commands::validate::run(c),
        Command::Evolve(c) => commands::evolve::run(c),
        Command::Spectrum(c) => commands::spectrum::run(c),
        Command::Reconstruct { common, variant } => commands::reconstruct::run(common, *variant),
        Command::Associator(c) => commands::associator::run(c),
        Command::FockCheck(c) => commands::fock_check::run(c),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(outcome) if outcome.pass() => 0,
        Ok(outcome) => {
            let record = FailureRecord { command: cli.command.name(), failures: &outcome.failures };
            eprintln!("{}", serde_json::to_string(&record).expect("plain strings serialize"));
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(tol: Option<f64>) -> Common {
        Common { config: None, out: None, tol, convention: ConventionArg::Paper, seed: 0 }
    }

    #[test]
    fn tolerance_override() {
        assert_eq!(common(None).tol_or(1e-6).unwrap(), 1e-6);
        assert_eq!(common(Some(1e-3)).tol_or(1e-6).unwrap(), 1e-3);
        for bad in [0.0, -1.0, f64::INFINITY, f64::NAN] {
            assert!(matches!(common(Some(bad)).tol_or(1e-6), Err(CliError::Usage(_))));
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["quatfield", "associator", "--out", "/nonexistent/dir/x.json"]), 2);
        assert_eq!(run(["quatfield", "validate"]), 2);
        assert_eq!(run(["quatfield", "--version"]), 0);
        assert_eq!(run(["quatfield", "spectrum", "--seed", "x"]), 2);
    }

    #[test]
    fn outcome_collects_failures() {
        let mut o = Outcome::default();
        assert!(o.pass());
        o.check(true, || unreachable!());
        o.check(false, || "bad".into());
        assert!(!o.pass());
        assert_eq!(o.failures, ["bad"]);
    }

    #[test]
    fn convention_flag() {
        let cli = Cli::try_parse_from(["quatfield", "evolve", "--convention", "rescaled"]).unwrap();
        let Command::Evolve(c) = cli.command else { panic!() };
        assert_eq!(c.convention(), Convention::Rescaled);
        assert_eq!(cli_name(&["quatfield", "fock-check"]), "fock-check");
    }

    fn cli_name(args: &[&str]) -> &'static str {
        Cli::try_parse_from(args).unwrap().command.name()
    }
}
