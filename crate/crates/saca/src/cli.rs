//! File-based front end: read a text, run an algorithm, write the suffix
//! array, optionally verify and trace.
//!
//! Lives in the library (rather than the binary) so the whole flow is unit
//! testable; the binary's job is flag parsing and exit codes.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::sa_io::{self, OutputFormat};
use crate::text::{Text, TextError};
use crate::trace::Trace;
use crate::verify::{check_suffix_array, oracle_suffix_sort};
use crate::{run_algorithm, Algorithm};

/// Inputs larger than this skip the brute-force cross-check under `--check`
/// (the linear checker still runs at every size).
pub const ORACLE_CHECK_LIMIT: usize = 65536;

/// Everything one invocation needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algo: Algorithm,
    pub input: PathBuf,
    pub output: PathBuf,
    pub format: OutputFormat,
    pub shards: usize,
    pub check: bool,
    pub trace: bool,
    pub max_bytes: Option<u64>,
}

/// What a successful run reports on stderr.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub algo: Algorithm,
    pub text_len: usize,
    pub shards: usize,
    pub elapsed: Duration,
    pub iterations: Option<u32>,
    pub levels: Option<u32>,
    pub checked: bool,
    pub trace_path: Option<PathBuf>,
}

/// Run failures, each mapped to a stable process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read input {path}: {source}")]
    UnreadableInput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{source} (the 0 byte is reserved as the terminator sentinel)")]
    ZeroByte {
        #[source]
        source: TextError,
    },
    #[error("cannot write {path}: {source}")]
    UnwritableOutput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("input is {len} bytes, over the --max-bytes limit of {max}")]
    TooLarge { len: u64, max: u64 },
    #[error("verification failed: {reason}")]
    CheckFailed { reason: String },
}

impl CliError {
    /// The process exit code the binary reports for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnreadableInput { .. } => 2,
            CliError::ZeroByte { .. } => 3,
            CliError::UnwritableOutput { .. } => 4,
            // 5 is reserved for "unknown algorithm", rejected at flag
            // parsing before a RunConfig exists.
            CliError::TooLarge { .. } => 6,
            CliError::CheckFailed { .. } => 7,
        }
    }
}

/// The trace file sits next to the output: `<output>.trace`.
pub fn trace_path_for(output: &Path) -> PathBuf {
    let mut os = output.as_os_str().to_owned();
    os.push(".trace");
    PathBuf::from(os)
}

/// Executes one configured run end to end.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let bytes = fs::read(&cfg.input).map_err(|source| CliError::UnreadableInput {
        path: cfg.input.clone(),
        source,
    })?;
    if let Some(max) = cfg.max_bytes {
        if bytes.len() as u64 > max {
            return Err(CliError::TooLarge { len: bytes.len() as u64, max });
        }
    }
    let text = Text::from_bytes(bytes).map_err(|source| CliError::ZeroByte { source })?;

    let mut trace = if cfg.trace { Some(Trace::new()) } else { None };
    let started = Instant::now();
    let outcome = run_algorithm(cfg.algo, &text, cfg.shards, trace.as_mut());
    let elapsed = started.elapsed();

    if cfg.check {
        check_suffix_array(&text, &outcome.sa)
            .map_err(|e| CliError::CheckFailed { reason: e.to_string() })?;
        if text.len() <= ORACLE_CHECK_LIMIT && oracle_suffix_sort(&text) != outcome.sa {
            return Err(CliError::CheckFailed {
                reason: "result differs from the brute-force order".into(),
            });
        }
    }

    write_output(&cfg.output, cfg.format, &outcome.sa)?;

    let trace_path = match trace {
        Some(t) => {
            let path = trace_path_for(&cfg.output);
            let file = File::create(&path).map_err(|source| CliError::UnwritableOutput {
                path: path.clone(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            t.write_to(&mut w)
                .and_then(|()| w.flush())
                .map_err(|source| CliError::UnwritableOutput { path: path.clone(), source })?;
            Some(path)
        }
        None => None,
    };

    Ok(RunSummary {
        algo: cfg.algo,
        text_len: text.len(),
        shards: cfg.shards,
        elapsed,
        iterations: outcome.iterations,
        levels: outcome.levels,
        checked: cfg.check,
        trace_path,
    })
}

fn write_output(
    path: &Path,
    format: OutputFormat,
    sa: &crate::text::SuffixArray,
) -> Result<(), CliError> {
    let unwritable = |source| CliError::UnwritableOutput { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(unwritable)?;
    let mut w = BufWriter::new(file);
    match format {
        OutputFormat::Text => sa_io::write_text(sa, &mut w).map_err(unwritable)?,
        OutputFormat::Binary => sa_io::write_binary(sa, &mut w).map_err(unwritable)?,
    }
    w.flush().map_err(unwritable)
}
