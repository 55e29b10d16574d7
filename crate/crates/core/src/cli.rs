//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 verification failure,
//! 4 I/O error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::checks::{self, Bundle, CheckParams};
use crate::dual::{self, DualError};
use crate::exactmat::{parse_rational_list, Rational};
use crate::families::{self, DeformationFamily, FamilyError};
use crate::search::{self, SearchError};

pub const SEED_ENV: &str = "FLEXIPLEX_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<DualError> for CliError {
    fn from(e: DualError) -> Self {
        match e {
            DualError::TransferMismatch { .. }
            | DualError::CalibrationInconsistent(_)
            | DualError::NotInU0(_) => CliError::Verification(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Io(_) | SearchError::Log { .. } => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Family,
    Sweep,
    Dual,
    Search,
    LemmaCheck,
}

/// A fully resolved run. Two equal configs produce byte-identical output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

/// What a run produced: the artifact text and whether verification passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub artifact: String,
    pub failure: Option<String>,
}

#[derive(Debug, Parser)]
#[command(
    name = "flexiplex",
    version,
    about = "Flexible pseudo-simplices: families, sweeps, duals and search"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// n4, n5, or matrix (the odd/even construction chosen by --n)
    #[arg(long, visible_alias = "family")]
    kind: Option<String>,
    /// Comma-separated rationals, e.g. 1,1,-2
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Build a deformation family and print its descriptor.
    Family {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a family over a t grid.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated positive rationals
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Build the dual family and verify the transfer claims.
    Dual {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample sign-pattern pairs and append results to a log.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        log: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a named verification bundle.
    LemmaCheck {
        bundle: String,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn insert(params: &mut BTreeMap<String, String>, key: &str, value: Option<impl ToString>) {
    if let Some(v) = value {
        params.insert(key.into(), v.to_string());
    }
}

fn family_params(params: &mut BTreeMap<String, String>, f: FamilyArgs) {
    insert(params, "kind", f.kind);
    insert(params, "a", f.a);
    insert(params, "b", f.b);
    insert(params, "n", f.n);
}

/// Resolves parsed arguments and the environment into a `RunConfig`.
fn resolve(cli: Cli, env_seed: Option<String>) -> Result<RunConfig, CliError> {
    let mut params = BTreeMap::new();
    let (command, common, default_format) = match cli.command {
        Sub::Family { family, common } => {
            family_params(&mut params, family);
            (Command::Family, common, Format::Json)
        }
        Sub::Sweep {
            family,
            grid,
            common,
        } => {
            family_params(&mut params, family);
            insert(&mut params, "grid", grid);
            (Command::Sweep, common, Format::Csv)
        }
        Sub::Dual {
            family,
            grid,
            common,
        } => {
            family_params(&mut params, family);
            insert(&mut params, "grid", grid);
            (Command::Dual, common, Format::Json)
        }
        Sub::Search {
            n,
            samples,
            log,
            common,
        } => {
            insert(&mut params, "n", Some(n));
            insert(&mut params, "samples", Some(samples));
            insert(&mut params, "log", Some(log.display()));
            (Command::Search, common, Format::Json)
        }
        Sub::LemmaCheck { bundle, n, common } => {
            insert(&mut params, "bundle", Some(bundle));
            insert(&mut params, "n", n);
            (Command::LemmaCheck, common, Format::Json)
        }
    };
    let seed = match env_seed {
        Some(s) => s.trim().parse().map_err(|_| {
            CliError::Config(format!("{SEED_ENV}={s:?} is not an unsigned integer"))
        })?,
        None => common.seed.unwrap_or(DEFAULT_SEED),
    };
    Ok(RunConfig {
        command,
        params,
        seed,
        output_path: common.output,
        format: common.format.unwrap_or(default_format),
    })
}

fn param<'a>(config: &'a RunConfig, key: &str) -> Option<&'a str> {
    config.params.get(key).map(String::as_str)
}

fn parse_usize(config: &RunConfig, key: &str) -> Result<Option<usize>, CliError> {
    param(config, key)
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Config(format!("--{key} {s:?} is not an unsigned integer")))
        })
        .transpose()
}

fn parse_list(config: &RunConfig, key: &str) -> Result<Option<Vec<Rational>>, CliError> {
    param(config, key)
        .map(|s| parse_rational_list(s).map_err(|e| CliError::Config(format!("--{key}: {e}"))))
        .transpose()
}

fn build_family(config: &RunConfig) -> Result<DeformationFamily, CliError> {
    let n = parse_usize(config, "n")?;
    let kind = param(config, "kind").map(str::to_ascii_lowercase);
    match kind.as_deref() {
        Some(k @ ("n4" | "n5")) => {
            let a = parse_list(config, "a")?
                .ok_or_else(|| CliError::Config(format!("--kind {k} needs --a")))?;
            let b = parse_list(config, "b")?
                .ok_or_else(|| CliError::Config(format!("--kind {k} needs --b")))?;
            Ok(if k == "n4" {
                families::family_n4(&a, &b)?
            } else {
                families::family_n5(&a, &b)?
            })
        }
        None | Some("matrix" | "odd_n" | "even_n") => {
            let n = n.ok_or_else(|| CliError::Config("matrix families need --n".into()))?;
            let family = families::matrix_family(n, config.seed)?;
            match kind.as_deref() {
                Some("odd_n") if n % 2 == 0 => {
                    Err(CliError::Config(format!("--kind odd_n with even n = {n}")))
                }
                Some("even_n") if n % 2 == 1 => {
                    Err(CliError::Config(format!("--kind even_n with odd n = {n}")))
                }
                _ => Ok(family),
            }
        }
        Some(other) => Err(CliError::Config(format!(
            "unknown family kind {other:?}; expected n4, n5, matrix, odd_n or even_n"
        ))),
    }
}

fn require_json(config: &RunConfig, what: &str) -> Result<(), CliError> {
    match config.format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Config(format!("{what} output is JSON only"))),
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// Executes a resolved configuration, returning the artifact without writing
/// it anywhere (except the search log, which is appended to).
pub fn execute(config: &RunConfig) -> Result<RunOutput, CliError> {
    match config.command {
        Command::Family => {
            require_json(config, "family")?;
            let family = build_family(config)?;
            Ok(RunOutput {
                artifact: with_newline(family.to_json()),
                failure: None,
            })
        }
        Command::Sweep => {
            let family = build_family(config)?;
            let grid = parse_list(config, "grid")?.unwrap_or_else(families::default_grid);
            let report = families::sweep(&family, &grid)?;
            let artifact = match config.format {
                Format::Csv => report.to_csv().map_err(|e| CliError::Io(e.to_string()))?,
                Format::Json => with_newline(report.to_json()),
            };
            let failure = (!report.verdicts.minors_constant)
                .then(|| "order-2 principal minors are not constant".to_string());
            Ok(RunOutput { artifact, failure })
        }
        Command::Dual => {
            require_json(config, "dual")?;
            let family = build_family(config)?;
            let grid = parse_list(config, "grid")?.unwrap_or_else(dual::dual_grid);
            let report = dual::family_dual_report(&family, &grid)?;
            let v = &report.verdicts;
            let failed: Vec<&str> = [
                ("transfer_consistent", v.transfer_consistent),
                ("codim2_constant", v.codim2_constant),
                ("non_congruent", v.non_congruent),
                ("euclidean_angles", v.euclidean_angles),
            ]
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect();
            Ok(RunOutput {
                artifact: with_newline(report.to_json()),
                failure: (!failed.is_empty()).then(|| failed.join(", ")),
            })
        }
        Command::Search => {
            require_json(config, "search summary")?;
            let n = parse_usize(config, "n")?
                .ok_or_else(|| CliError::Config("search needs --n".into()))?;
            let samples: u64 = param(config, "samples")
                .unwrap_or("10000")
                .parse()
                .map_err(|_| CliError::Config("--samples is not an unsigned integer".into()))?;
            let log = PathBuf::from(
                param(config, "log")
                    .ok_or_else(|| CliError::Config("search needs --log".into()))?,
            );
            let run = search::append_run(&log, n, samples, config.seed)?;
            if n == 4 {
                if let Some((rank, count)) = run.member_ranks.iter().find(|(r, _)| **r >= 2) {
                    eprintln!("WARNING: n = 4 produced {count} member(s) of D with rank {rank}; the rank-1 expectation is violated");
                }
            }
            let summary = json!({
                "n": run.n,
                "seed": run.seed,
                "start": run.start,
                "samples": run.samples,
                "counts": run.counts.iter().map(|(c, k)| (serde_json::to_value(c).expect("enum").as_str().expect("string").to_string(), *k)).collect::<BTreeMap<String, u64>>(),
                "rank_filtered": run.rank_filtered,
                "member_ranks": run.member_ranks.iter().map(|(r, k)| (r.to_string(), *k)).collect::<BTreeMap<String, u64>>(),
                "hits": run.hits.len(),
            });
            Ok(RunOutput {
                artifact: with_newline(
                    serde_json::to_string_pretty(&summary).expect("serializable"),
                ),
                failure: None,
            })
        }
        Command::LemmaCheck => {
            require_json(config, "lemma-check")?;
            let name = param(config, "bundle").unwrap_or_default();
            let bundle: Bundle = name.parse().map_err(CliError::Config)?;
            let n = parse_usize(config, "n")?;
            let report = checks::run_bundle(
                bundle,
                &CheckParams {
                    n,
                    seed: config.seed,
                },
            );
            let failed: Vec<String> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.clone())
                .collect();
            Ok(RunOutput {
                artifact: with_newline(report.to_json()),
                failure: (!failed.is_empty()).then(|| failed.join("; ")),
            })
        }
    }
}

/// Executes `config` and writes the artifact to the output path or stdout.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let out = execute(config)?;
    match &config.output_path {
        Some(path) => fs::write(path, &out.artifact)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(out.artifact.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    match out.failure {
        Some(f) => Err(CliError::Verification(f)),
        None => Ok(()),
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
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
    let result = resolve(cli, std::env::var(SEED_ENV).ok()).and_then(|config| run(&config));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("flexiplex: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str], env: Option<&str>) -> Result<RunConfig, CliError> {
        let cli =
            Cli::try_parse_from(std::iter::once("flexiplex").chain(args.iter().copied())).unwrap();
        resolve(cli, env.map(String::from))
    }

    #[test]
    fn env_seed_overrides_flag() {
        let c = config(&["family", "--n", "5", "--seed", "3"], Some("9")).unwrap();
        assert_eq!(c.seed, 9);
        let c = config(&["family", "--n", "5", "--seed", "3"], None).unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(
            config(&["family", "--n", "5"], Some("x"))
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn degenerate_n4_is_config_error() {
        let c = config(
            &["family", "--kind", "n4", "--a", "1,1,-2", "--b", "1,-2,1"],
            None,
        )
        .unwrap();
        let e = execute(&c).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("a2*b3 = a3*b2"), "{e}");
    }

    #[test]
    fn sweep_defaults_to_csv() {
        let c = config(
            &["sweep", "--family", "n4", "--a", "1,1,-2", "--b", "2,-3,1"],
            None,
        )
        .unwrap();
        assert_eq!(c.format, Format::Csv);
        let out = execute(&c).unwrap();
        assert!(out.artifact.starts_with("t,det,p,q,z,"));
        assert!(out.failure.is_none());
    }

    #[test]
    fn unknown_bundle_and_kind_rejected() {
        let c = config(&["lemma-check", "lemma-0.0"], None).unwrap();
        assert_eq!(execute(&c).unwrap_err().exit_code(), 2);
        let c = config(&["family", "--kind", "n9"], None).unwrap();
        assert_eq!(execute(&c).unwrap_err().exit_code(), 2);
        let c = config(&["family", "--kind", "n4", "--a", "1,1,-2"], None).unwrap();
        assert_eq!(execute(&c).unwrap_err().exit_code(), 2);
    }
}
