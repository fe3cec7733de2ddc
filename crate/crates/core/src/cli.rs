//! `qds` command-line front end.
//!
//! Exit codes: 0 success, 2 parse/usage/I-O error, 3 dimension mismatch,
//! 4 map not decomposable, 5 a verification check failed.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use crate::basis::gell_mann_basis;
use crate::certify::{run_checks, CertificateConfig, Check};
use crate::error::QdsError;
use crate::gksl::{classify_detailed, decompose_gksl, reconstruct_gksl, reconstruct_k, sample_generator, Verdict};
use crate::io::{
    to_json_string, trajectory_to_csv, CertificateJson, DecodedForm, GksFormJson, MatrixJson, ReportJson,
    SuperOperatorJson,
};
use crate::semigroup::propagate;
use crate::superop::SuperOperator;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DIMENSION: i32 = 3;
pub const EXIT_NOT_DECOMPOSABLE: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

const AFTER_HELP: &str = "\
Exit codes: 0 ok, 2 parse/usage/I-O error, 3 dimension mismatch, 4 not decomposable, 5 verification failed.

Superoperator files: {\"kind\":\"matrix\",\"n\":N,\"mat\":M} with M an N^2 x N^2 matrix acting on
column-stacked vectors, or {\"kind\":\"sandwich\",\"n\":N,\"terms\":[{\"X\":M,\"Y\":M},...]} for A -> sum X A Y.
Matrices: {\"n\":n,\"re\":[[...]],\"im\":[[...]]} with n x n row-major arrays.";

const PROPAGATE_HELP: &str = "\
CSV layout: header t,re_1_1,im_1_1,re_1_2,im_1_2,...,re_N_N,im_N_N (1-based row, column).
One row per time; the state is flattened row-major with real and imaginary parts interleaved.
Numbers use 17 significant digits.";

#[derive(Debug, Parser)]
#[command(name = "qds", version, about = "Classify, decompose and certify quantum dynamical semigroup generators", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct VerifyFlags {
    /// decompose/reconstruct round trip within 1e-9
    #[arg(long)]
    roundtrip: bool,
    /// Choi matrix of e^{tL} PSD at t = 0.1, 1, 10
    #[arg(long)]
    cp: bool,
    /// trace of e^{tL}(rho) preserved on random states
    #[arg(long)]
    trace: bool,
    /// resolvent (1 - L/lambda)^-1 maps PSD to PSD at lambda = 2||L||
    #[arg(long)]
    resolvent: bool,
    /// dissipation form D(x) PSD on random and structured x
    #[arg(long)]
    dissipativity: bool,
    /// projection-family rates equal the decomposition rates
    #[arg(long = "rate-oracle")]
    rate_oracle: bool,
}

impl VerifyFlags {
    fn selected(&self) -> Vec<Check> {
        let flags = [self.roundtrip, self.cp, self.trace, self.resolvent, self.dissipativity, self.rate_oracle];
        let chosen: Vec<Check> = Check::ALL.into_iter().zip(flags).filter(|(_, on)| *on).map(|(c, _)| c).collect();
        if chosen.is_empty() {
            Check::ALL.to_vec()
        } else {
            chosen
        }
    }
}

fn parse_class(s: &str) -> Result<Verdict, String> {
    match s.parse::<Verdict>()? {
        Verdict::General => Err("GENERAL cannot be sampled from the command line".into()),
        v => Ok(v),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the classification report of a superoperator
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Write the GKSL form of a Hermiticity-preserving, trace-annihilating map
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// complete the jump list to N^2-1 orthonormal operators with zero rates
        #[arg(long)]
        pad_zero_jumps: bool,
    },
    /// Rebuild the superoperator from a GKSL (or K-form) file
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evolve rho0 under e^{tL} and write a CSV trajectory
    #[command(after_help = PROPAGATE_HELP)]
    Propagate {
        #[arg(long = "in")]
        input: PathBuf,
        /// initial state as a matrix file
        #[arg(long)]
        rho0: PathBuf,
        /// ascending nonnegative times, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run certificate suites (all of them when no flag is given)
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        flags: VerifyFlags,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a seeded random generator of the given class
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// QDS_GEN, STAR_TRACE_SEMIGROUP_GEN or STAR_SEMIGROUP_GEN
        #[arg(long, value_parser = parse_class)]
        class: Verdict,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<QdsError> for CliError {
    fn from(e: QdsError) -> Self {
        let code = match e {
            QdsError::DimensionMismatch(_) | QdsError::NonSquare { .. } | QdsError::InvalidDimension(_) => EXIT_DIMENSION,
            QdsError::NotHermiticityPreserving { .. } | QdsError::NotTraceAnnihilating { .. } => EXIT_NOT_DECOMPOSABLE,
            _ => EXIT_PARSE,
        };
        CliError { code, message: e.to_string() }
    }
}

fn parse_error(message: String) -> CliError {
    CliError { code: EXIT_PARSE, message }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_error(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| parse_error(format!("{}: {e}", path.display())))
}

fn read_superop(path: &Path) -> Result<SuperOperator, CliError> {
    Ok(read_json::<SuperOperatorJson>(path)?.to_superop()?)
}

fn report(l: &SuperOperator, certificates: BTreeMap<String, CertificateJson>) -> ReportJson {
    let c = classify_detailed(l);
    ReportJson {
        verdict: c.class.verdict.as_str().to_string(),
        hermiticity_preserving: c.class.hermiticity_preserving,
        trace_annihilating: c.class.trace_annihilating,
        rates_nonnegative: c.class.rates_nonnegative,
        rates: c.rates,
        certificates,
    }
}

/// Runs one parsed command, writing reports to `stdout`.
fn execute(command: Command, stdout: &mut String) -> Result<i32, CliError> {
    match command {
        Command::Classify { input } => {
            let l = read_superop(&input)?;
            stdout.push_str(&to_json_string(&report(&l, BTreeMap::new())));
        }
        Command::Decompose { input, out, pad_zero_jumps } => {
            let l = read_superop(&input)?;
            let basis = gell_mann_basis(l.n())?;
            let mut form = decompose_gksl(&l, &basis)?;
            if pad_zero_jumps {
                form = form.padded()?;
            }
            write_file(&out, &to_json_string(&GksFormJson::from_gksl(&form)))?;
        }
        Command::Reconstruct { input, out } => {
            let form: GksFormJson = read_json(&input)?;
            let l = match form.decode()? {
                DecodedForm::Gksl(f) => reconstruct_gksl(&f)?,
                DecodedForm::K(f) => reconstruct_k(&f)?,
            };
            write_file(&out, &to_json_string(&SuperOperatorJson::from_superop(&l)))?;
        }
        Command::Propagate { input, rho0, times, out } => {
            let l = read_superop(&input)?;
            let rho = read_json::<MatrixJson>(&rho0)?.to_matrix()?;
            let traj = propagate(&l, &rho, &times)?;
            write_file(&out, &trajectory_to_csv(&traj, l.n()))?;
        }
        Command::Verify { input, flags, seed } => {
            let l = read_superop(&input)?;
            let outcomes = run_checks(&l, &flags.selected(), &CertificateConfig::default(), seed)?;
            let all_pass = outcomes.iter().all(|(_, o)| o.pass);
            let certificates = outcomes
                .into_iter()
                .map(|(c, o)| (c.name().to_string(), CertificateJson { pass: o.pass, worst_value: o.worst_value }))
                .collect();
            stdout.push_str(&to_json_string(&report(&l, certificates)));
            return Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED });
        }
        Command::Sample { n, seed, class, out } => {
            let l = sample_generator(n, seed, class)?;
            write_file(&out, &to_json_string(&SuperOperatorJson::from_superop(&l)))?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut stdout = String::new();
    let code = match execute(cli.command, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qds: error: {e}");
            e.code
        }
    };
    print!("{stdout}");
    code
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn verify_defaults_to_every_check() {
        let flags = VerifyFlags { roundtrip: false, cp: false, trace: false, resolvent: false, dissipativity: false, rate_oracle: false };
        assert_eq!(flags.selected(), Check::ALL.to_vec());
        let flags = VerifyFlags { cp: true, trace: true, ..flags };
        assert_eq!(flags.selected(), vec![Check::Cp, Check::Trace]);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(QdsError::DimensionMismatch("x".into())).code, EXIT_DIMENSION);
        assert_eq!(CliError::from(QdsError::NotTraceAnnihilating { defect: 1.0 }).code, EXIT_NOT_DECOMPOSABLE);
        assert_eq!(CliError::from(QdsError::InvariantViolation("x".into())).code, EXIT_PARSE);
        assert!(parse_class("GENERAL").is_err());
        assert_eq!(parse_class("QDS_GEN"), Ok(Verdict::QdsGen));
    }
}
