//! Command-line front end for `sqadd-core`.

mod render;
mod theorem;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use sqadd_core::multfn::{
    check_functional_equation_parallel, check_multiplicativity, make_family, FactorSieve,
    FamilySpec, FamilyTag, Violation,
};
use sqadd_core::rational::{parse_q, serde_q_opt, Q};
use sqadd_core::repr::{
    brute_k_squares, dubouis_predict, exceptions_up_to, four_splits, FourSplit,
};
use sqadd_core::solver::{classify, replay, CaseTree, ClassifyConfig, Outcome, VisitOrder};
use sqadd_core::Atom;

pub use theorem::{check_theorem, FamilyCheck, Finding, InstanceMatch, LeafMatch, TheoremReport};

/// Largest `n` the `dubouis` command cross-checks against the brute-force
/// oracle.
pub const ORACLE_LIMIT: u64 = 5000;

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "sqadd",
    version,
    about = "Multiplicative functions additive on sums of four squares"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Integers up to LIMIT that are not sums of K nonzero squares.
    Dubouis {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        limit: u64,
    },
    /// Ways to write N as a sum of two sums of two nonzero squares.
    Splits {
        #[arg(long)]
        n: u64,
    },
    /// Check a function family against the equation and multiplicativity.
    Verify {
        #[arg(long)]
        family: FamilyTag,
        /// f(3)
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        #[serde(with = "serde_q_opt", default, skip_serializing_if = "Option::is_none")]
        y: Option<Q>,
        /// f(9)
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        #[serde(with = "serde_q_opt", default, skip_serializing_if = "Option::is_none")]
        w: Option<Q>,
        /// f(11)
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        #[serde(with = "serde_q_opt", default, skip_serializing_if = "Option::is_none")]
        v: Option<Q>,
        #[arg(long, default_value_t = 2000)]
        bound: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Derive the case tree and its ledger from the equation instances.
    Deduce {
        #[arg(long, default_value_t = 200)]
        bound: u64,
        /// Split order, e.g. f5,f3,f11,f9.
        #[arg(long, value_delimiter = ',')]
        pivots: Vec<Atom>,
    },
    /// Deduce, then compare the leaves with the known solution families.
    CheckTheorem {
        #[arg(long, default_value_t = 200)]
        bound: u64,
        #[arg(long, default_value_t = 2000)]
        verify_bound: u64,
        /// Seed for the sampled nonzero values of free atoms.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

/// A validated invocation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sqadd_core::Error),
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("serializing report: {0}")]
    Json(#[from] serde_json::Error),
}

fn require_bound(name: &str, bound: u64) -> Result<(), CliError> {
    if bound < 4 {
        return Err(CliError::Usage(format!(
            "{name} must be at least 4, got {bound}"
        )));
    }
    Ok(())
}

fn require_jobs(jobs: usize) -> Result<(), CliError> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let config = RunConfig {
            command: cli.command,
            format: cli.format,
            out: cli.out,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match &self.command {
            Command::Dubouis { k, .. } => {
                if *k < 4 {
                    return Err(sqadd_core::Error::NoClosedForm { k: *k }.into());
                }
            }
            Command::Splits { n } => {
                if *n == 0 {
                    return Err(CliError::Usage("--n must be positive".into()));
                }
            }
            Command::Verify { bound, jobs, .. } => {
                require_bound("--bound", *bound)?;
                require_jobs(*jobs)?;
                self.family_spec()
                    .expect("verify has a family")
                    .validate()?;
            }
            Command::Deduce { bound, pivots } => {
                require_bound("--bound", *bound)?;
                let sieve = FactorSieve::new(pivots.iter().map(|a| a.0).max().unwrap_or(2));
                if let Some(a) = pivots.iter().find(|a| !sieve.is_prime_power(a.0)) {
                    return Err(CliError::Usage(format!("pivot {a} is not a prime power")));
                }
            }
            Command::CheckTheorem {
                bound,
                verify_bound,
                jobs,
                ..
            } => {
                require_bound("--bound", *bound)?;
                require_bound("--verify-bound", *verify_bound)?;
                require_jobs(*jobs)?;
            }
        }
        Ok(())
    }

    pub fn family_spec(&self) -> Option<FamilySpec> {
        match &self.command {
            Command::Verify {
                family, y, w, v, ..
            } => Some(FamilySpec {
                tag: *family,
                y: y.clone(),
                w: w.clone(),
                v: v.clone(),
            }),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub checked_up_to: u64,
    pub mismatches: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub family: FamilySpec,
    pub bound: u64,
    pub equation_violations: Vec<Violation>,
    pub multiplicativity_violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.equation_violations.is_empty() && self.multiplicativity_violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafReport {
    pub path: Vec<(Atom, bool)>,
    pub outcome: String,
    pub free_atoms: Vec<Atom>,
    pub ledger_steps: usize,
    /// Replaying the leaf's ledger from the empty state reproduces its table
    /// (solutions) or its contradiction step.
    pub replay_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeduceReport {
    pub bound: u64,
    pub pivots: Vec<Atom>,
    pub leaves: Vec<LeafReport>,
    pub tree: CaseTree,
}

impl DeduceReport {
    pub fn is_clean(&self) -> bool {
        self.leaves
            .iter()
            .all(|l| l.replay_matches && l.outcome != "incomplete")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Exceptions {
        k: u32,
        limit: u64,
        exceptions: Vec<u64>,
        oracle: OracleCheck,
    },
    Splits {
        n: u64,
        splits: Vec<FourSplit>,
    },
    Verify(VerifyReport),
    Deduce(Box<DeduceReport>),
    Theorem(Box<TheoremReport>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_us: u64,
}

/// The envelope every command emits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub payload: Payload,
    pub timing: Timing,
    pub version: String,
}

impl Report {
    pub fn exit_status(&self) -> i32 {
        let clean = match &self.payload {
            Payload::Exceptions { oracle, .. } => oracle.mismatches.is_empty(),
            Payload::Splits { .. } => true,
            Payload::Verify(v) => v.is_clean(),
            Payload::Deduce(d) => d.is_clean(),
            Payload::Theorem(t) => t.is_clean(),
        };
        if clean {
            EXIT_CLEAN
        } else {
            EXIT_VIOLATION
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render::payload(&mut out, &self.payload);
        let _ = writeln!(out, "elapsed: {:.3} s", self.timing.elapsed_us as f64 / 1e6);
        out
    }
}

/// `f` checked against the equation and multiplicativity up to `bound`.
pub fn verify_family(spec: &FamilySpec, bound: u64, jobs: usize) -> Result<VerifyReport, CliError> {
    let f = make_family(spec, bound)?;
    let equation_violations = check_functional_equation_parallel(&f, bound, jobs)?;
    let multiplicativity_violations = check_multiplicativity(&f.tabulate())?;
    Ok(VerifyReport {
        family: spec.clone(),
        bound,
        equation_violations,
        multiplicativity_violations,
    })
}

pub fn deduce(bound: u64, pivots: &[Atom]) -> Result<DeduceReport, CliError> {
    let mut config = ClassifyConfig::new(bound);
    if !pivots.is_empty() {
        config.pivot_order = pivots.to_vec();
    }
    config.order = VisitOrder::Ascending;
    let tree = classify(&config)?;
    let leaves = tree
        .leaves()
        .iter()
        .map(|leaf| {
            let replayed = replay(&leaf.ledger).ok();
            let (outcome, free_atoms, replay_matches) = match leaf.outcome {
                Outcome::Solution(s) => (
                    "solution",
                    s.free_atoms.clone(),
                    replayed
                        .is_some_and(|k| k.table() == s.table && k.free_atoms() == s.free_atoms),
                ),
                Outcome::Contradiction { step, .. } => (
                    "contradiction",
                    Vec::new(),
                    replayed.is_some_and(|k| k.contradiction == Some(*step)),
                ),
                Outcome::Incomplete { .. } => ("incomplete", Vec::new(), replayed.is_some()),
                Outcome::Branch { .. } => unreachable!("leaves are not branches"),
            };
            LeafReport {
                path: leaf.path.clone(),
                outcome: outcome.to_string(),
                free_atoms,
                ledger_steps: leaf.ledger.len(),
                replay_matches,
            }
        })
        .collect();
    Ok(DeduceReport {
        bound,
        pivots: config.pivot_order,
        leaves,
        tree,
    })
}

fn dubouis(k: u32, limit: u64) -> Result<Payload, CliError> {
    let exceptions = exceptions_up_to(k, limit)?;
    let checked_up_to = limit.min(ORACLE_LIMIT);
    let mut mismatches = Vec::new();
    for n in 1..=checked_up_to {
        if dubouis_predict(n, k)? != brute_k_squares(n, k) {
            mismatches.push(n);
        }
    }
    Ok(Payload::Exceptions {
        k,
        limit,
        exceptions,
        oracle: OracleCheck {
            checked_up_to,
            mismatches,
        },
    })
}

/// Executes a validated configuration.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let payload = match &config.command {
        Command::Dubouis { k, limit } => dubouis(*k, *limit)?,
        Command::Splits { n } => Payload::Splits {
            n: *n,
            splits: four_splits(*n),
        },
        Command::Verify { bound, jobs, .. } => {
            let spec = config.family_spec().expect("verify has a family");
            Payload::Verify(verify_family(&spec, *bound, *jobs)?)
        }
        Command::Deduce { bound, pivots } => Payload::Deduce(Box::new(deduce(*bound, pivots)?)),
        Command::CheckTheorem {
            bound,
            verify_bound,
            seed,
            jobs,
        } => Payload::Theorem(Box::new(check_theorem(
            *bound,
            *verify_bound,
            *seed,
            *jobs,
        )?)),
    };
    Ok(Report {
        config: config.clone(),
        payload,
        timing: Timing {
            elapsed_us: start.elapsed().as_micros() as u64,
        },
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn emit(report: &Report) -> Result<(), CliError> {
    let text = match report.config.format {
        Format::Json => report.to_json()? + "\n",
        Format::Text => report.to_text(),
    };
    match &report.config.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses `args`, runs, writes the report, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_CLEAN
            };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|config| {
        let report = run(&config)?;
        emit(&report)?;
        Ok(report.exit_status())
    });
    match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
