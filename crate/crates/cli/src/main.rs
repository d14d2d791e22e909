//! `weil`: posets, dimension tables, projector coefficients, orbit reports and
//! the numerical verification suite from the command line.
//!
//! Exit codes: 0 success, 1 failed verification or computation error,
//! 2 usage error.

mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use weil_core::arith::prime_power;
use weil_core::decomposition::QLambda;
use weil_core::group::GroupSpec;
use weil_core::numerics::{run_verification, Tolerances, VerifyConfig, DEFAULT_MATRIX_CAP};
use weil_core::orbit::{closure_orbits, DEFAULT_ORBIT_CAP, DEFAULT_PAIR_LIMIT};
use weil_core::poset::{Partition, PLambdaPoset, DEFAULT_IDEAL_CAP};
use weil_core::{Error, Execution};

use render::*;

#[derive(Parser)]
#[command(name = "weil", version, about = "Decompose the Weil representation of a finite abelian p-group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format (default: table, or json for `verify`).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Accept parts in any order instead of requiring them non-increasing.
    #[arg(long, global = true)]
    sort: bool,
    /// Cap on |A| for dense matrices.
    #[arg(long, global = true, env = "WEIL_CAP", default_value_t = DEFAULT_MATRIX_CAP)]
    cap: u128,
    /// Cap on |K| = |A|² for orbit closure.
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_CAP)]
    orbit_cap: u128,
    /// Cap on the number of order ideals enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_IDEAL_CAP)]
    ideal_cap: usize,
    /// Run every loop on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Points, multiplicities and cover relations of P_λ.
    Poset { lambda: String },
    /// Every order ideal with its weight, smallness and perp.
    Ideals { lambda: String },
    /// The elements (I, φ) of Q_λ.
    Qlambda { lambda: String },
    /// Dimension polynomial of every irreducible piece.
    Dims {
        lambda: String,
        /// Evaluate at an odd prime power q.
        #[arg(long)]
        eval: Option<u64>,
    },
    /// Projector coefficients α_L(I, φ) in factored form.
    Alpha {
        lambda: String,
        #[arg(long)]
        eval: Option<u64>,
    },
    /// Symplectic orbits on K = A × Â by closure under generators.
    Orbits { lambda: String, p: u64 },
    /// Run the numerical verification suite.
    Verify {
        lambda: String,
        p: u64,
        /// Tolerance override: `VALUE` for all checks, or `NAME=VALUE` with
        /// NAME one of exhaustive, product, alpha, projector, trace.
        #[arg(long = "tol")]
        tol: Vec<String>,
        /// Largest |K| checked over every pair by the generator check.
        #[arg(long, default_value_t = DEFAULT_PAIR_LIMIT)]
        pair_limit: u128,
    },
}

/// A failure, with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidPartition(_) | Error::InvalidPrime(_) | Error::InvalidEvaluationPoint(_) | Error::Parse(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

fn parse_eval(q: Option<u64>) -> Result<Option<BigInt>, Failure> {
    match q {
        None => Ok(None),
        Some(q) => match prime_power(q) {
            Some((p, _)) if p != 2 => Ok(Some(BigInt::from(q))),
            _ => Err(Error::InvalidEvaluationPoint(q.to_string()).into()),
        },
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn no_dot(command: &str) -> Failure {
    usage(format!("--format dot is not available for `{command}`"))
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    let c = &cli.common;
    let exec = if c.sequential { Execution::Sequential } else { Execution::Parallel };
    let partition = |s: &str| Partition::parse(s, c.sort);
    let format = c.format;
    let q_lambda = |s: &str| -> Result<QLambda, Failure> { Ok(QLambda::new(partition(s)?, c.ideal_cap, exec)?) };

    let out = match &cli.command {
        Command::Poset { lambda } => {
            let poset = PLambdaPoset::new(partition(lambda)?)?;
            match format.unwrap_or(Format::Table) {
                Format::Dot => poset.to_dot(None),
                Format::Json => json(&PosetReport::new(&poset)),
                Format::Table => PosetReport::new(&poset).table(),
            }
        }
        Command::Ideals { lambda } => {
            let poset = PLambdaPoset::new(partition(lambda)?)?;
            let rows = ideal_rows(&poset, &poset.enumerate_ideals(c.ideal_cap)?);
            match format.unwrap_or(Format::Table) {
                Format::Dot => return Err(no_dot("ideals")),
                Format::Json => json(&rows),
                Format::Table => ideal_table(&rows),
            }
        }
        Command::Qlambda { lambda } => {
            let ql = q_lambda(lambda)?;
            match format.unwrap_or(Format::Table) {
                Format::Dot => q_dot(&ql, &dim_rows(&ql, None)?),
                Format::Json => json(&q_rows(&ql)?),
                Format::Table => q_table(&q_rows(&ql)?),
            }
        }
        Command::Dims { lambda, eval } => {
            let q = parse_eval(*eval)?;
            let ql = q_lambda(lambda)?;
            let rows = dim_rows(&ql, q.as_ref())?;
            match format.unwrap_or(Format::Table) {
                Format::Dot => q_dot(&ql, &rows),
                Format::Json => json(&rows),
                Format::Table => dim_table(&rows),
            }
        }
        Command::Alpha { lambda, eval } => {
            let q = parse_eval(*eval)?;
            let ql = q_lambda(lambda)?;
            let tables = alpha_tables(&ql, q.as_ref())?;
            match format.unwrap_or(Format::Table) {
                Format::Dot => return Err(no_dot("alpha")),
                Format::Json => json(&tables),
                Format::Table => alpha_table(&tables),
            }
        }
        Command::Orbits { lambda, p } => {
            let spec = GroupSpec::new(*p, partition(lambda)?)?;
            let orbits = closure_orbits(&spec, c.orbit_cap, exec)?;
            let n = spec.order().unwrap_or(u128::MAX);
            let report = OrbitReport {
                p: *p,
                lambda: spec.partition().parts().to_vec(),
                k_order: n.saturating_mul(n),
                orbits: &orbits,
            };
            match format.unwrap_or(Format::Table) {
                Format::Dot => return Err(no_dot("orbits")),
                Format::Json => json(&report),
                Format::Table => orbit_table(&report),
            }
        }
        Command::Verify { lambda, p, tol, pair_limit } => {
            let spec = GroupSpec::new(*p, partition(lambda)?)?;
            let ql = q_lambda(lambda)?;
            let mut tolerances = Tolerances::default();
            for t in tol {
                match t.split_once('=') {
                    Some((name, value)) => {
                        let v = value.parse().map_err(|_| usage(format!("bad tolerance value '{value}'")))?;
                        tolerances.set(name, v)?;
                    }
                    None => {
                        let v: f64 = t.parse().map_err(|_| usage(format!("bad tolerance '{t}'")))?;
                        for name in Tolerances::NAMES {
                            tolerances.set(name, v)?;
                        }
                    }
                }
            }
            let cfg = VerifyConfig {
                matrix_cap: c.cap,
                orbit_cap: c.orbit_cap,
                weyl_exhaustive_limit: c.orbit_cap,
                pair_limit: *pair_limit,
                tolerances,
                exec,
            };
            let report = run_verification(&spec, &ql, &cfg)?;
            let text = match format.unwrap_or(Format::Json) {
                Format::Dot => return Err(no_dot("verify")),
                Format::Json => json(&report),
                Format::Table => verify_table(&report),
            };
            if let Some(first) = report.first_failure() {
                eprintln!("verification failed: {} (deviation {:e} > {:e})", first.name, first.max_deviation, first.tolerance);
            }
            return Ok((text, report.passed));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok((text, passed)) => {
            print!("{text}");
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
