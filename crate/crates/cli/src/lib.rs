//! Command-line front end: argument parsing, report files and run records.

pub mod commands;
pub mod manifest;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use commands::{CliError, Outcome, EXIT_FAIL, EXIT_INPUT, EXIT_PASS, EXIT_RETRIES};
use manifest::{sha256_hex, RunRecord};

#[derive(Debug, Parser)]
#[command(name = "conic-forge", version, about = "Exact verification of conic bundles over finite fields")]
pub struct Cli {
    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Directory for report.json, run.json and any extra artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the identities of the HPT fixture.
    VerifyHpt {
        #[arg(long)]
        prime: u64,
        /// Run the exhaustive P^3 rank scan only up to this prime.
        #[arg(long, default_value_t = 101)]
        exhaustive_bound: u64,
    },
    /// Build the (6,6,6) example, verify it and compute its Brauer data.
    BuildExample {
        #[arg(long, default_value_t = 10007)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        retries: usize,
    },
    /// Compute H and the Brauer quotient of a discriminant graph file.
    Brauer { graph: PathBuf },
    /// Run generic checks on a bundle file.
    CheckBundle {
        bundle: PathBuf,
        /// JSON file with the discriminant components (and optional nodes and curves).
        #[arg(long)]
        factors: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 101)]
        scan_bound: u64,
    },
}

/// Worker count from CONIC_FORGE_THREADS, if set.
pub fn configure_threads() -> Result<usize, CliError> {
    if let Ok(v) = std::env::var("CONIC_FORGE_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Input(format!("CONIC_FORGE_THREADS={v:?} is not a number")))?;
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(rayon::current_num_threads())
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::VerifyHpt { prime, exhaustive_bound } => commands::verify_hpt(*prime, *exhaustive_bound),
        Command::BuildExample { prime, seed, retries } => commands::build_example(*prime, *seed, *retries),
        Command::Brauer { graph } => commands::brauer(graph),
        Command::CheckBundle { bundle, factors, seed, scan_bound } => {
            commands::check_bundle(bundle, factors.as_deref(), *seed, *scan_bound)
        }
    }
}

pub fn to_json_bytes(v: &impl Serialize) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(v).expect("serializable");
    b.push(b'\n');
    b
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Write report.json, the artifacts and run.json into `dir`.
pub fn write_outputs(dir: &Path, outcome: &Outcome, threads: usize) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    let mut digests = BTreeMap::new();
    let report = to_json_bytes(&outcome.document);
    digests.insert("report.json".to_string(), sha256_hex(&report));
    write_file(dir, "report.json", &report)?;
    for (name, value) in &outcome.artifacts {
        let bytes = to_json_bytes(value);
        digests.insert(name.clone(), sha256_hex(&bytes));
        write_file(dir, name, &bytes)?;
    }
    let record = RunRecord { manifest: outcome.manifest.clone(), threads, timings: outcome.timings.clone(), outputs: digests };
    write_file(dir, "run.json", &to_json_bytes(&record))
}

/// Parse-free entry point shared by the binary and tests; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = configure_threads().and_then(|threads| {
        let outcome = execute(&cli.command)?;
        if let Some(dir) = &cli.out {
            write_outputs(dir, &outcome, threads)?;
        }
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let body = if cli.text { outcome.text.into_bytes() } else { to_json_bytes(&outcome.document) };
            let _ = stdout.write_all(&body);
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
