//! `saca` — suffix-array construction from the command line.
//!
//! Exit codes: 0 success, 2 unreadable input, 3 input contains byte 0,
//! 4 unwritable output, 5 unknown algorithm, 6 input over `--max-bytes`,
//! 7 verification failed.

use std::path::PathBuf;
use std::process;

use clap::{Parser, ValueEnum};
use saca::cli::{run, RunConfig};
use saca::sa_io::OutputFormat;
use saca::Algorithm;

/// Shard count used when neither `--shards` nor the environment override is
/// given.
const DEFAULT_SHARDS: usize = 4;
/// Environment variable overriding the default shard count.
const SHARDS_ENV: &str = "SACA_SHARDS";

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    /// One ASCII decimal index per line.
    Text,
    /// `SAF1` magic, little-endian u64 count, little-endian u64 indices.
    Binary,
}

#[derive(Debug, Parser)]
#[command(
    name = "saca",
    version,
    about = "Suffix-array construction on a deterministic sharded-dataflow core"
)]
struct Args {
    /// Algorithm: pd-sort | pd-isa | pd-discard | pq | dc3 | dc7 | oracle
    #[arg(long)]
    algo: String,

    /// Input file, read as raw bytes (byte value 0 is rejected)
    #[arg(long)]
    input: PathBuf,

    /// Output file for the suffix array
    #[arg(long)]
    output: PathBuf,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Shard count (default: $SACA_SHARDS, or 4)
    #[arg(long)]
    shards: Option<usize>,

    /// Verify the result before writing (linear checker always; brute-force
    /// cross-check up to 64 KiB)
    #[arg(long)]
    check: bool,

    /// Write the iteration trace to <output>.trace
    #[arg(long)]
    trace: bool,

    /// Refuse inputs larger than this many bytes
    #[arg(long)]
    max_bytes: Option<u64>,
}

fn shards_from_env() -> Option<usize> {
    let raw = std::env::var(SHARDS_ENV).ok()?;
    match raw.trim().parse::<usize>() {
        Ok(p) if p >= 1 => Some(p),
        _ => {
            eprintln!("saca: ignoring {SHARDS_ENV}={raw:?} (expected a positive integer)");
            None
        }
    }
}

fn main() {
    process::exit(real_main());
}

fn real_main() -> i32 {
    let args = Args::parse();

    let Some(algo) = Algorithm::from_name(&args.algo) else {
        let known: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        eprintln!(
            "saca: unknown algorithm {:?}; expected one of: {}",
            args.algo,
            known.join(", ")
        );
        return 5;
    };

    let shards = args
        .shards
        .or_else(shards_from_env)
        .unwrap_or(DEFAULT_SHARDS)
        .max(1);

    let cfg = RunConfig {
        algo,
        input: args.input,
        output: args.output,
        format: match args.format {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Binary => OutputFormat::Binary,
        },
        shards,
        check: args.check,
        trace: args.trace,
        max_bytes: args.max_bytes,
    };

    match run(&cfg) {
        Ok(summary) => {
            let mut line = format!(
                "saca: algo={} n={} shards={} time={:.3}s",
                summary.algo.name(),
                summary.text_len,
                summary.shards,
                summary.elapsed.as_secs_f64()
            );
            if let Some(k) = summary.iterations {
                line.push_str(&format!(" iterations={k}"));
            }
            if let Some(l) = summary.levels {
                line.push_str(&format!(" levels={l}"));
            }
            if summary.checked {
                line.push_str(" checked=ok");
            }
            if let Some(tp) = &summary.trace_path {
                line.push_str(&format!(" trace={}", tp.display()));
            }
            eprintln!("{line}");
            0
        }
        Err(e) => {
            eprintln!("saca: error: {e}");
            e.exit_code()
        }
    }
}
