//! A suffix-array construction toolkit built on a deterministic,
//! shard-parallel dataflow core.
//!
//! The crate has three layers:
//!
//! * [`dataflow`] — a small single-process engine for *distributed immutable
//!   arrays* (DIAs): ordered, sharded sequences with a fixed set of
//!   operations (`map`, `filter`, `window`, `flat_window`, `prefix_sum`,
//!   `sort`, `merge`, `union`, `zip`, `zip_with_index`, `max`, `size`). Every
//!   operation is deterministic and its result is independent of the shard
//!   count, so algorithm output never depends on parallel layout.
//! * Algorithm families built *only* from those operations:
//!   [`pd`] (prefix doubling with sorting- or inverse-based refinement,
//!   a discarding variant, and a quadrupling variant) and [`dcx`]
//!   (difference-cover algorithms for the covers of period 3 and 7).
//! * Verification and plumbing: [`verify`] (a brute-force oracle and an
//!   independent checker), [`sa_io`] (text and binary output formats), and
//!   [`cli`] (the file-based front end behind the `saca` binary).
//!
//! ```
//! use saca::text::Text;
//! use saca::{run_algorithm, Algorithm};
//!
//! let text = Text::from_str_lossy("banana");
//! let run = run_algorithm(Algorithm::Dc3, &text, 4, None);
//! assert_eq!(run.sa.as_slice(), &[5, 3, 1, 0, 4, 2]);
//! ```

pub mod cli;
pub mod dataflow;
pub mod dcx;
pub mod pd;
pub mod sa_io;
pub mod text;
pub mod trace;
pub mod verify;

#[cfg(doctest)]
mod guide;

use text::{SuffixArray, Text};
use trace::Trace;

/// The algorithms selectable by name, in the CLI and programmatically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Prefix doubling, sorting-based refinement.
    PdSort,
    /// Prefix doubling, inverse-array refinement.
    PdIsa,
    /// Prefix doubling with discarding of finished suffixes.
    PdDiscard,
    /// Prefix quadrupling (radix-4 doubling).
    PrefixQuadrupling,
    /// Difference cover of period 3.
    Dc3,
    /// Difference cover of period 7.
    Dc7,
    /// Brute-force reference sort.
    Oracle,
}

impl Algorithm {
    /// All algorithm variants, in CLI-name order.
    pub const ALL: [Algorithm; 7] = [
        Algorithm::PdSort,
        Algorithm::PdIsa,
        Algorithm::PdDiscard,
        Algorithm::PrefixQuadrupling,
        Algorithm::Dc3,
        Algorithm::Dc7,
        Algorithm::Oracle,
    ];

    /// The six dataflow algorithms (everything except the oracle).
    pub const DATAFLOW: [Algorithm; 6] = [
        Algorithm::PdSort,
        Algorithm::PdIsa,
        Algorithm::PdDiscard,
        Algorithm::PrefixQuadrupling,
        Algorithm::Dc3,
        Algorithm::Dc7,
    ];

    /// The CLI spelling of this algorithm.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PdSort => "pd-sort",
            Algorithm::PdIsa => "pd-isa",
            Algorithm::PdDiscard => "pd-discard",
            Algorithm::PrefixQuadrupling => "pq",
            Algorithm::Dc3 => "dc3",
            Algorithm::Dc7 => "dc7",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Parses a CLI spelling.
    pub fn from_name(name: &str) -> Option<Algorithm> {
        Algorithm::ALL.iter().copied().find(|a| a.name() == name)
    }
}

/// Outcome of one algorithm run, with enough instrumentation for the
/// iteration-bound and progress assertions in the test suite.
#[derive(Debug, Clone)]
pub struct AlgorithmRun {
    /// The computed suffix array.
    pub sa: SuffixArray,
    /// Doubling iterations performed (naming passes); `None` for the
    /// difference-cover algorithms and the oracle.
    pub iterations: Option<u32>,
    /// Recursion levels entered (the top level counts as 1); `None` for the
    /// doubling family and the oracle.
    pub levels: Option<u32>,
}

/// Runs `algo` on `text` with the given shard count, optionally emitting a
/// trace of intermediate values.
pub fn run_algorithm(
    algo: Algorithm,
    text: &Text,
    shards: usize,
    trace: Option<&mut Trace>,
) -> AlgorithmRun {
    match algo {
        Algorithm::PdSort => {
            let run = pd::pd_sorting_run(text, shards, trace);
            AlgorithmRun { sa: run.sa, iterations: Some(run.iterations), levels: None }
        }
        Algorithm::PdIsa => {
            let run = pd::pd_isa_run(text, shards, trace);
            AlgorithmRun { sa: run.sa, iterations: Some(run.iterations), levels: None }
        }
        Algorithm::PdDiscard => {
            let run = pd::pd_discarding_run(text, shards, trace);
            AlgorithmRun { sa: run.sa, iterations: Some(run.iterations), levels: None }
        }
        Algorithm::PrefixQuadrupling => {
            let run = pd::pd_quadrupling_run(text, shards, trace);
            AlgorithmRun { sa: run.sa, iterations: Some(run.iterations), levels: None }
        }
        Algorithm::Dc3 => {
            let run = dcx::dc3_run(text, shards, trace);
            AlgorithmRun { sa: run.sa, iterations: None, levels: Some(run.levels) }
        }
        Algorithm::Dc7 => {
            let run = dcx::dc7_run(text, shards, trace);
            AlgorithmRun { sa: run.sa, iterations: None, levels: Some(run.levels) }
        }
        Algorithm::Oracle => AlgorithmRun {
            sa: verify::oracle_suffix_sort(text),
            iterations: None,
            levels: None,
        },
    }
}
