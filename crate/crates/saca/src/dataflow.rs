//! A single-process engine for *distributed immutable arrays* (DIAs).
//!
//! A [`Dia<T>`] is an ordered sequence of items split into shards. The shard
//! layout models how a cluster would partition the data, but it is **not part
//! of the observable contract**: every operation produces the same logical
//! sequence regardless of how many shards the inputs use or how items are
//! distributed across them. Operations may process shards in parallel
//! (via a work-stealing thread pool), and results are still bit-identical to
//! a single-threaded run — there is no nondeterministic reduction order
//! anywhere.
//!
//! # Operations
//!
//! The engine deliberately exposes a small, closed set of operations —
//! `map`, `filter`, `window`, `flat_window`, `prefix_sum`, `sort`, `merge`,
//! `union`, `zip`/`zip3`/`zip4`, `zip_with_index`, `max`, and `size` — and
//! the suffix-array algorithms in this crate are written against exactly
//! this set. Anything expressible here parallelizes shard-by-shard with only
//! coarse-grained communication (splitter exchange in `sort`, carry
//! propagation in `prefix_sum`), which is what makes the algorithms scale in
//! their natural distributed setting.
//!
//! # Windows and sentinels
//!
//! `window` and `flat_window` read `width` consecutive items. Near the end of
//! the sequence a window may extend past the last item; those slots are
//! filled with [`Sentinel::sentinel`], a per-type value that never occurs as
//! real data (byte `0` for texts, an out-of-range index for tuple types).
//! Callbacks receive the window's global start position and the total size,
//! so they can distinguish real items from padding without inspecting values.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

/// Padding value used by [`Dia::window`] / [`Dia::flat_window`] for window
/// slots past the end of the sequence. Implementations must return a value
/// that cannot occur as real data, so callbacks never confuse padding with
/// items (texts exclude byte `0`; tuple types use an impossible index).
pub trait Sentinel {
    fn sentinel() -> Self;
}

impl Sentinel for u8 {
    fn sentinel() -> u8 {
        0
    }
}

impl Sentinel for u64 {
    fn sentinel() -> u64 {
        0
    }
}

/// Errors surfaced by operations with input preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataflowError {
    /// `zip` requires equally sized inputs; the offending sizes are listed in
    /// argument order.
    #[error("zip inputs must have equal sizes, got {sizes:?}")]
    ZipSizeMismatch { sizes: Vec<u64> },
    /// `max` of an empty array is undefined.
    #[error("max of an empty array is undefined")]
    EmptyMax,
}

/// An ordered, sharded, immutable sequence.
///
/// Cloning is cheap (shards are reference-counted). The logical content of
/// every operation's result is independent of shard count and layout.
///
/// ```
/// use saca::dataflow::Dia;
///
/// let d = Dia::from_vec((0u64..10).collect(), 3);
/// let evens = d.filter(|x| x % 2 == 0);
/// assert_eq!(evens.to_vec(), vec![0, 2, 4, 6, 8]);
/// assert_eq!(evens.size(), 5);
///
/// // Same pipeline, different shard count: identical logical result.
/// let d1 = Dia::from_vec((0u64..10).collect(), 1);
/// assert_eq!(d1.filter(|x| x % 2 == 0).to_vec(), evens.to_vec());
/// ```
pub struct Dia<T> {
    shards: Vec<Arc<Vec<T>>>,
}

impl<T> Clone for Dia<T> {
    fn clone(&self) -> Self {
        Dia { shards: self.shards.clone() }
    }
}

impl<T: fmt::Debug> fmt::Debug for Dia<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dia(p={}, [", self.shards.len())?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x:?}")?;
        }
        write!(f, "])")
    }
}

/// Logical equality: same items in the same order, regardless of sharding.
impl<T: PartialEq> PartialEq for Dia<T> {
    fn eq(&self, other: &Self) -> bool {
        self.size() == other.size() && self.iter().eq(other.iter())
    }
}

impl<T: Eq> Eq for Dia<T> {}

fn split_balanced<T>(items: Vec<T>, parts: usize) -> Vec<Arc<Vec<T>>> {
    let parts = parts.max(1);
    let n = items.len();
    let base = n / parts;
    let extra = n % parts;
    let mut out = Vec::with_capacity(parts);
    let mut iter = items.into_iter();
    for s in 0..parts {
        let take = base + usize::from(s < extra);
        out.push(Arc::new(iter.by_ref().take(take).collect::<Vec<T>>()));
    }
    out
}

impl<T> Dia<T> {
    /// Iterates the logical sequence (shards in order).
    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.shards.iter().flat_map(|s| s.iter())
    }

    /// Total number of items.
    pub fn size(&self) -> u64 {
        self.shards.iter().map(|s| s.len() as u64).sum()
    }

    /// True when the array holds no items.
    pub fn is_empty(&self) -> bool {
        self.shards.iter().all(|s| s.is_empty())
    }

    /// Number of shards the array is split into.
    pub fn shard_count(&self) -> usize {
        self.shards.len()
    }

    /// Per-shard item counts (diagnostics and tests only; not a contract).
    pub fn shard_sizes(&self) -> Vec<usize> {
        self.shards.iter().map(|s| s.len()).collect()
    }

    /// Global index of each shard's first item.
    fn shard_offsets(&self) -> Vec<u64> {
        let mut offsets = Vec::with_capacity(self.shards.len());
        let mut acc = 0u64;
        for s in &self.shards {
            offsets.push(acc);
            acc += s.len() as u64;
        }
        offsets
    }
}

impl<T: Clone + Send + Sync> Dia<T> {
    /// Builds an array from a vector, split into `shards` balanced shards
    /// (`shards` is clamped to at least 1; shards may be empty when the data
    /// is smaller than the shard count).
    pub fn from_vec(items: Vec<T>, shards: usize) -> Self {
        Dia { shards: split_balanced(items, shards) }
    }

    /// Materializes the logical sequence.
    pub fn to_vec(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.size() as usize);
        for s in &self.shards {
            out.extend_from_slice(s);
        }
        out
    }

    /// Gathers up to `count` items starting at global position `start`.
    fn collect_range(&self, start: u64, count: usize) -> Vec<T> {
        let mut out = Vec::with_capacity(count);
        let mut skip = start;
        for s in &self.shards {
            let len = s.len() as u64;
            if skip >= len {
                skip -= len;
                continue;
            }
            for x in &s[skip as usize..] {
                if out.len() == count {
                    return out;
                }
                out.push(x.clone());
            }
            skip = 0;
        }
        out
    }

    /// Applies `f` to every item, preserving order.
    pub fn map<B, F>(&self, f: F) -> Dia<B>
    where
        B: Clone + Send + Sync,
        F: Fn(&T) -> B + Sync,
    {
        let shards = self
            .shards
            .par_iter()
            .map(|s| Arc::new(s.iter().map(&f).collect::<Vec<B>>()))
            .collect();
        Dia { shards }
    }

    /// Keeps the items satisfying `keep`, preserving order.
    pub fn filter<F>(&self, keep: F) -> Dia<T>
    where
        F: Fn(&T) -> bool + Sync,
    {
        let shards = self
            .shards
            .par_iter()
            .map(|s| Arc::new(s.iter().filter(|x| keep(x)).cloned().collect::<Vec<T>>()))
            .collect();
        Dia { shards }
    }

    /// Sliding window of `width` consecutive items, one output per input item.
    ///
    /// The callback receives the window's global start index and a slice of
    /// exactly `width` items; windows reaching past the end are padded with
    /// [`Sentinel::sentinel`]. Shards only need the `width - 1` items
    /// following their range, so the operation stays local up to a bounded
    /// exchange at shard boundaries.
    pub fn window<B, F>(&self, width: usize, f: F) -> Dia<B>
    where
        T: Sentinel,
        B: Clone + Send + Sync,
        F: Fn(u64, &[T]) -> B + Sync,
    {
        assert!(width >= 1, "window width must be at least 1");
        let offsets = self.shard_offsets();
        let shards = self
            .shards
            .par_iter()
            .enumerate()
            .map(|(si, local)| {
                let buf = self.extended_buffer(si, &offsets, width);
                let off = offsets[si];
                Arc::new(
                    (0..local.len())
                        .map(|j| f(off + j as u64, &buf[j..j + width]))
                        .collect::<Vec<B>>(),
                )
            })
            .collect();
        Dia { shards }
    }

    /// Sliding window of `width` items where the callback may emit any number
    /// of outputs per window; emissions are concatenated in window order.
    ///
    /// With `include_partial = false`, only full windows are visited (none if
    /// the array is shorter than `width`). With `include_partial = true`,
    /// every start position is visited and trailing slots carry
    /// [`Sentinel::sentinel`]; the callback receives the total array size so
    /// it can tell how many slots are real.
    pub fn flat_window<B, F>(&self, width: usize, include_partial: bool, f: F) -> Dia<B>
    where
        T: Sentinel,
        B: Clone + Send + Sync,
        F: Fn(u64, &[T], u64, &mut Vec<B>) + Sync,
    {
        assert!(width >= 1, "window width must be at least 1");
        let total = self.size();
        let offsets = self.shard_offsets();
        let shards = self
            .shards
            .par_iter()
            .enumerate()
            .map(|(si, local)| {
                let buf = self.extended_buffer(si, &offsets, width);
                let off = offsets[si];
                let mut out = Vec::new();
                for j in 0..local.len() {
                    let g = off + j as u64;
                    if include_partial || g + width as u64 <= total {
                        f(g, &buf[j..j + width], total, &mut out);
                    }
                }
                Arc::new(out)
            })
            .collect();
        Dia { shards }
    }

    /// Shard-local buffer extended by the `width - 1` items after the shard
    /// (taken from following shards, then sentinel padding at the global end).
    fn extended_buffer(&self, si: usize, offsets: &[u64], width: usize) -> Vec<T>
    where
        T: Sentinel,
    {
        let local = &self.shards[si];
        let mut buf = Vec::with_capacity(local.len() + width - 1);
        buf.extend_from_slice(local);
        let after = offsets[si] + local.len() as u64;
        buf.extend(self.collect_range(after, width - 1));
        while buf.len() < local.len() + width - 1 {
            buf.push(T::sentinel());
        }
        buf
    }

    /// Inclusive prefix combination: output `i` is
    /// `combine(x_0, combine(x_1, ... x_i))` folded left to right.
    ///
    /// `combine` must be associative — local scans are combined with one
    /// carried value per shard, so non-associative combiners would make the
    /// result depend on the shard layout. Debug builds spot-check
    /// associativity on sampled triples of consecutive items.
    pub fn prefix_sum<F>(&self, combine: F) -> Dia<T>
    where
        T: PartialEq,
        F: Fn(&T, &T) -> T + Sync,
    {
        #[cfg(debug_assertions)]
        self.spot_check_associativity(&combine);

        // Pass 1: independent per-shard inclusive scans.
        let locals: Vec<Vec<T>> = self
            .shards
            .par_iter()
            .map(|s| {
                let mut acc: Option<T> = None;
                let mut v = Vec::with_capacity(s.len());
                for x in s.iter() {
                    let next = match &acc {
                        None => x.clone(),
                        Some(a) => combine(a, x),
                    };
                    v.push(next.clone());
                    acc = Some(next);
                }
                v
            })
            .collect();

        // Pass 2: sequential carry across shard totals.
        let mut carry: Option<T> = None;
        let mut carries: Vec<Option<T>> = Vec::with_capacity(locals.len());
        for local in &locals {
            carries.push(carry.clone());
            if let Some(last) = local.last() {
                carry = Some(match &carry {
                    None => last.clone(),
                    Some(c) => combine(c, last),
                });
            }
        }

        // Pass 3: apply carries shard-locally.
        let shards = locals
            .into_par_iter()
            .zip(carries.into_par_iter())
            .map(|(local, carry)| match carry {
                None => Arc::new(local),
                Some(c) => Arc::new(local.iter().map(|x| combine(&c, x)).collect::<Vec<T>>()),
            })
            .collect();
        Dia { shards }
    }

    #[cfg(debug_assertions)]
    fn spot_check_associativity<F>(&self, combine: &F)
    where
        T: PartialEq,
        F: Fn(&T, &T) -> T,
    {
        let n = self.size();
        if n < 3 {
            return;
        }
        // A handful of deterministic sample positions spread over the array.
        let picks = [0, n / 4, n / 2, (3 * n) / 4, n.saturating_sub(3)];
        for &p in &picks {
            let w = self.collect_range(p.min(n - 3), 3);
            let (a, b, c) = (&w[0], &w[1], &w[2]);
            assert!(
                combine(&combine(a, b), c) == combine(a, &combine(b, c)),
                "prefix_sum combiner is not associative on sampled items"
            );
        }
    }

    /// Sorts by the strict order `less`, stably: items tied under `less` keep
    /// their input order.
    ///
    /// Implemented as a sample sort so the work stays shard-parallel: shards
    /// sort locally, deterministic evenly spaced samples elect `P - 1`
    /// splitters, every shard partitions its run against the splitters, and
    /// each output bucket merges its pieces. Items are decorated with their
    /// global position, making the order total — splitter election and bucket
    /// boundaries are therefore unambiguous, which is what makes the result
    /// independent of the shard layout.
    pub fn sort<F>(&self, less: F) -> Dia<T>
    where
        F: Fn(&T, &T) -> bool + Sync,
    {
        let p = self.shards.len();
        let cmp = |a: &(T, u64), b: &(T, u64)| -> Ordering {
            if less(&a.0, &b.0) {
                Ordering::Less
            } else if less(&b.0, &a.0) {
                Ordering::Greater
            } else {
                a.1.cmp(&b.1)
            }
        };

        // Decorate with global positions; sort each shard locally.
        let offsets = self.shard_offsets();
        let runs: Vec<Vec<(T, u64)>> = self
            .shards
            .par_iter()
            .zip(offsets.par_iter())
            .map(|(s, &off)| {
                let mut run: Vec<(T, u64)> = s
                    .iter()
                    .enumerate()
                    .map(|(j, x)| (x.clone(), off + j as u64))
                    .collect();
                run.sort_unstable_by(cmp);
                run
            })
            .collect();

        // Elect splitters from evenly spaced local samples (deterministic).
        const SAMPLES_PER_SHARD: usize = 8;
        let mut samples: Vec<(T, u64)> = Vec::new();
        for run in &runs {
            if run.is_empty() {
                continue;
            }
            for q in 0..SAMPLES_PER_SHARD {
                samples.push(run[(q * run.len()) / SAMPLES_PER_SHARD].clone());
            }
        }
        if samples.is_empty() {
            return Dia { shards: vec![Arc::new(Vec::new()); p] };
        }
        samples.sort_unstable_by(cmp);
        let splitters: Vec<(T, u64)> = (0..p.saturating_sub(1))
            .map(|i| samples[((i + 1) * samples.len()) / p].clone())
            .collect();

        // Partition each sorted run at the splitters.
        let boundaries: Vec<Vec<usize>> = runs
            .par_iter()
            .map(|run| {
                splitters
                    .iter()
                    .map(|sp| run.partition_point(|x| cmp(x, sp) == Ordering::Less))
                    .collect()
            })
            .collect();

        // Each bucket merges its piece of every run.
        let shards: Vec<Arc<Vec<T>>> = (0..p)
            .into_par_iter()
            .map(|b| {
                let pieces: Vec<&[(T, u64)]> = runs
                    .iter()
                    .zip(boundaries.iter())
                    .map(|(run, bounds)| {
                        let lo = if b == 0 { 0 } else { bounds[b - 1] };
                        let hi = if b + 1 == p { run.len() } else { bounds[b] };
                        &run[lo..hi]
                    })
                    .collect();
                Arc::new(merge_pieces(&pieces, &cmp))
            })
            .collect();
        Dia { shards }
    }

    /// Merges already-sorted inputs into one sorted array. Ties across inputs
    /// resolve in argument order; order within an input is preserved.
    ///
    /// Debug builds verify that each input is sorted under `less`.
    pub fn merge<F>(inputs: &[&Dia<T>], less: F) -> Dia<T>
    where
        F: Fn(&T, &T) -> bool + Sync,
    {
        #[cfg(debug_assertions)]
        for d in inputs {
            let v = d.to_vec();
            for w in v.windows(2) {
                debug_assert!(!less(&w[1], &w[0]), "merge input is not sorted");
            }
        }

        let flats: Vec<Vec<T>> = inputs.iter().map(|d| d.to_vec()).collect();
        let total: usize = flats.iter().map(Vec::len).sum();
        let mut cursors = vec![0usize; flats.len()];
        let mut out = Vec::with_capacity(total);
        for _ in 0..total {
            let mut best: Option<usize> = None;
            for (i, flat) in flats.iter().enumerate() {
                if cursors[i] >= flat.len() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    // Strict comparison: a later input replaces the leader
                    // only when strictly smaller, so ties go to the earliest
                    // input.
                    Some(j) if less(&flat[cursors[i]], &flats[j][cursors[j]]) => Some(i),
                    keep => keep,
                };
            }
            let i = best.expect("cursor accounting");
            out.push(flats[i][cursors[i]].clone());
            cursors[i] += 1;
        }
        let p = inputs.iter().map(|d| d.shard_count()).max().unwrap_or(1);
        Dia::from_vec(out, p)
    }

    /// Concatenates the inputs in argument order.
    pub fn union(inputs: &[&Dia<T>]) -> Dia<T> {
        let total: usize = inputs.iter().map(|d| d.size() as usize).sum();
        let mut items = Vec::with_capacity(total);
        for d in inputs {
            items.extend(d.iter().cloned());
        }
        let p = inputs.iter().map(|d| d.shard_count()).max().unwrap_or(1);
        Dia::from_vec(items, p)
    }

    /// Pairs items positionally with `other`. Errors unless sizes match.
    pub fn zip<U, B, F>(&self, other: &Dia<U>, f: F) -> Result<Dia<B>, DataflowError>
    where
        U: Clone + Send + Sync,
        B: Clone + Send + Sync,
        F: Fn(&T, &U) -> B + Sync,
    {
        if self.size() != other.size() {
            return Err(DataflowError::ZipSizeMismatch {
                sizes: vec![self.size(), other.size()],
            });
        }
        let flat: Vec<U> = other.to_vec();
        let offsets = self.shard_offsets();
        let shards = self
            .shards
            .par_iter()
            .zip(offsets.par_iter())
            .map(|(s, &off)| {
                Arc::new(
                    s.iter()
                        .enumerate()
                        .map(|(j, x)| f(x, &flat[off as usize + j]))
                        .collect::<Vec<B>>(),
                )
            })
            .collect();
        Ok(Dia { shards })
    }

    /// Three-way positional zip. Errors unless all sizes match.
    pub fn zip3<U, V, B, F>(
        &self,
        b: &Dia<U>,
        c: &Dia<V>,
        f: F,
    ) -> Result<Dia<B>, DataflowError>
    where
        U: Clone + Send + Sync,
        V: Clone + Send + Sync,
        B: Clone + Send + Sync,
        F: Fn(&T, &U, &V) -> B + Sync,
    {
        if self.size() != b.size() || self.size() != c.size() {
            return Err(DataflowError::ZipSizeMismatch {
                sizes: vec![self.size(), b.size(), c.size()],
            });
        }
        let fb: Vec<U> = b.to_vec();
        let fc: Vec<V> = c.to_vec();
        let offsets = self.shard_offsets();
        let shards = self
            .shards
            .par_iter()
            .zip(offsets.par_iter())
            .map(|(s, &off)| {
                Arc::new(
                    s.iter()
                        .enumerate()
                        .map(|(j, x)| {
                            let g = off as usize + j;
                            f(x, &fb[g], &fc[g])
                        })
                        .collect::<Vec<B>>(),
                )
            })
            .collect();
        Ok(Dia { shards })
    }

    /// Four-way positional zip. Errors unless all sizes match.
    pub fn zip4<U, V, W, B, F>(
        &self,
        b: &Dia<U>,
        c: &Dia<V>,
        d: &Dia<W>,
        f: F,
    ) -> Result<Dia<B>, DataflowError>
    where
        U: Clone + Send + Sync,
        V: Clone + Send + Sync,
        W: Clone + Send + Sync,
        B: Clone + Send + Sync,
        F: Fn(&T, &U, &V, &W) -> B + Sync,
    {
        if self.size() != b.size() || self.size() != c.size() || self.size() != d.size() {
            return Err(DataflowError::ZipSizeMismatch {
                sizes: vec![self.size(), b.size(), c.size(), d.size()],
            });
        }
        let fb: Vec<U> = b.to_vec();
        let fc: Vec<V> = c.to_vec();
        let fd: Vec<W> = d.to_vec();
        let offsets = self.shard_offsets();
        let shards = self
            .shards
            .par_iter()
            .zip(offsets.par_iter())
            .map(|(s, &off)| {
                Arc::new(
                    s.iter()
                        .enumerate()
                        .map(|(j, x)| {
                            let g = off as usize + j;
                            f(x, &fb[g], &fc[g], &fd[g])
                        })
                        .collect::<Vec<B>>(),
                )
            })
            .collect();
        Ok(Dia { shards })
    }

    /// Pairs every item with its global position.
    pub fn zip_with_index<B, F>(&self, f: F) -> Dia<B>
    where
        B: Clone + Send + Sync,
        F: Fn(u64, &T) -> B + Sync,
    {
        let offsets = self.shard_offsets();
        let shards = self
            .shards
            .par_iter()
            .zip(offsets.par_iter())
            .map(|(s, &off)| {
                Arc::new(
                    s.iter()
                        .enumerate()
                        .map(|(j, x)| f(off + j as u64, x))
                        .collect::<Vec<B>>(),
                )
            })
            .collect();
        Dia { shards }
    }

    /// The first maximal item under `less` (ties keep the earliest).
    /// Errors on an empty array.
    pub fn max<F>(&self, less: F) -> Result<T, DataflowError>
    where
        F: Fn(&T, &T) -> bool + Sync,
    {
        // Per-shard first-maximum, then a left fold that replaces only on
        // strictly greater — both steps keep the earliest of any tie.
        let locals: Vec<Option<T>> = self
            .shards
            .par_iter()
            .map(|s| {
                let mut best: Option<&T> = None;
                for x in s.iter() {
                    best = match best {
                        None => Some(x),
                        Some(b) if less(b, x) => Some(x),
                        keep => keep,
                    };
                }
                best.cloned()
            })
            .collect();
        let mut best: Option<T> = None;
        for candidate in locals.into_iter().flatten() {
            best = match best {
                None => Some(candidate),
                Some(b) if less(&b, &candidate) => Some(candidate),
                keep => keep,
            };
        }
        best.ok_or(DataflowError::EmptyMax)
    }
}

/// K-way merge of sorted slices under a total order; used by `sort`'s bucket
/// phase. The order is total (it includes the position tiebreak), so the
/// minimum head is always unique and the merge is deterministic.
fn merge_pieces<T: Clone>(
    pieces: &[&[(T, u64)]],
    cmp: &impl Fn(&(T, u64), &(T, u64)) -> Ordering,
) -> Vec<T> {
    let total: usize = pieces.iter().map(|p| p.len()).sum();
    let mut cursors = vec![0usize; pieces.len()];
    let mut out = Vec::with_capacity(total);
    for _ in 0..total {
        let mut best: Option<usize> = None;
        for (i, piece) in pieces.iter().enumerate() {
            if cursors[i] >= piece.len() {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(j) if cmp(&piece[cursors[i]], &pieces[j][cursors[j]]) == Ordering::Less => {
                    Some(i)
                }
                keep => keep,
            };
        }
        let i = best.expect("cursor accounting");
        out.push(pieces[i][cursors[i]].0.clone());
        cursors[i] += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHARD_COUNTS: [usize; 4] = [1, 2, 3, 8];

    #[test]
    fn from_vec_balances_and_preserves_order() {
        let d = Dia::from_vec((0u64..10).collect(), 3);
        assert_eq!(d.shard_sizes(), vec![4, 3, 3]);
        assert_eq!(d.to_vec(), (0..10).collect::<Vec<u64>>());
        // More shards than items: trailing shards are empty.
        let d = Dia::from_vec(vec![1u64, 2], 5);
        assert_eq!(d.shard_count(), 5);
        assert_eq!(d.to_vec(), vec![1, 2]);
        assert_eq!(d.size(), 2);
    }

    #[test]
    fn map_and_filter_basic() {
        for p in SHARD_COUNTS {
            let d = Dia::from_vec((1u64..=6).collect(), p);
            assert_eq!(d.map(|x| x * 10).to_vec(), vec![10, 20, 30, 40, 50, 60]);
            assert_eq!(d.filter(|x| x % 3 != 0).to_vec(), vec![1, 2, 4, 5]);
            assert_eq!(d.filter(|_| false).to_vec(), Vec::<u64>::new());
        }
    }

    #[test]
    fn window_pads_with_sentinels() {
        // Pair windows over a text: one window per position, the final
        // window reads the sentinel 0.
        for p in SHARD_COUNTS {
            let d = Dia::from_vec(b"abc".to_vec(), p);
            let pairs = d.window(2, |i, w| (i, w[0], w[1]));
            assert_eq!(
                pairs.to_vec(),
                vec![(0, b'a', b'b'), (1, b'b', b'c'), (2, b'c', 0)]
            );
        }
    }

    #[test]
    fn window_wider_than_input() {
        let d = Dia::from_vec(vec![7u64, 8], 3);
        let w = d.window(4, |i, w| (i, w.to_vec()));
        assert_eq!(
            w.to_vec(),
            vec![(0, vec![7, 8, 0, 0]), (1, vec![8, 0, 0, 0])]
        );
    }

    #[test]
    fn flat_window_full_and_partial() {
        for p in SHARD_COUNTS {
            let d = Dia::from_vec((1u64..=5).collect(), p);
            // Full windows of width 3: starts 0..=2.
            let full = d.flat_window(3, false, |i, w, _, out| out.push((i, w[0], w[1], w[2])));
            assert_eq!(full.to_vec(), vec![(0, 1, 2, 3), (1, 2, 3, 4), (2, 3, 4, 5)]);
            // Partial windows: every start, sentinel padding, total visible.
            let all = d.flat_window(3, true, |i, w, total, out| {
                assert_eq!(total, 5);
                out.push((i, w[0], w[1], w[2]));
            });
            assert_eq!(
                all.to_vec(),
                vec![(0, 1, 2, 3), (1, 2, 3, 4), (2, 3, 4, 5), (3, 4, 5, 0), (4, 5, 0, 0)]
            );
            // Multiple emissions per window are concatenated in window order.
            let doubled = d.flat_window(2, false, |i, w, _, out| {
                out.push((i, w[0]));
                out.push((i, w[1]));
            });
            assert_eq!(doubled.size(), 8);
            // Width larger than the array with full windows only: no output.
            let none = d.flat_window(9, false, |_, _, _, out| out.push(0u64));
            assert_eq!(none.to_vec(), Vec::<u64>::new());
        }
    }

    #[test]
    fn prefix_sum_max_rule() {
        // The combiner used by the doubling naming pass: keep the running
        // maximum of the second component.
        for p in SHARD_COUNTS {
            let d = Dia::from_vec(vec![(2u64, 0u64), (6, 0), (8, 2), (0, 3), (4, 0)], p);
            let summed = d.prefix_sum(|a, b| (b.0, a.1.max(b.1)));
            assert_eq!(
                summed.to_vec(),
                vec![(2, 0), (6, 0), (8, 2), (0, 3), (4, 3)]
            );
        }
    }

    #[test]
    fn prefix_sum_addition() {
        for p in SHARD_COUNTS {
            let d = Dia::from_vec((1u64..=8).collect(), p);
            assert_eq!(
                d.prefix_sum(|a, b| a + b).to_vec(),
                vec![1, 3, 6, 10, 15, 21, 28, 36]
            );
        }
    }

    #[test]
    fn sort_is_stable_and_shard_invariant() {
        // Pairs sorted by first component only: ties must keep input order.
        let items = vec![(3u64, 'a'), (1, 'b'), (3, 'c'), (1, 'd'), (2, 'e'), (1, 'f')];
        let expected = vec![(1, 'b'), (1, 'd'), (1, 'f'), (2, 'e'), (3, 'a'), (3, 'c')];
        for p in SHARD_COUNTS {
            let d = Dia::from_vec(items.clone(), p);
            assert_eq!(d.sort(|a, b| a.0 < b.0).to_vec(), expected, "p={p}");
        }
    }

    #[test]
    fn sort_handles_degenerate_inputs() {
        for p in SHARD_COUNTS {
            let empty: Dia<u64> = Dia::from_vec(vec![], p);
            assert_eq!(empty.sort(|a, b| a < b).to_vec(), Vec::<u64>::new());
            let single = Dia::from_vec(vec![42u64], p);
            assert_eq!(single.sort(|a, b| a < b).to_vec(), vec![42]);
            let equal = Dia::from_vec(vec![5u64; 17], p);
            assert_eq!(equal.sort(|a, b| a < b).to_vec(), vec![5; 17]);
        }
    }

    #[test]
    fn merge_respects_input_order_on_ties() {
        for p in SHARD_COUNTS {
            let a = Dia::from_vec(vec![(1u64, 'a'), (3, 'a'), (5, 'a')], p);
            let b = Dia::from_vec(vec![(1u64, 'b'), (2, 'b'), (5, 'b')], 2);
            let m = Dia::merge(&[&a, &b], |x, y| x.0 < y.0);
            assert_eq!(
                m.to_vec(),
                vec![(1, 'a'), (1, 'b'), (2, 'b'), (3, 'a'), (5, 'a'), (5, 'b')]
            );
        }
    }

    #[test]
    fn merge_three_inputs_equals_sorted_union() {
        let a = Dia::from_vec(vec![2u64, 4, 9], 2);
        let b = Dia::from_vec(vec![1u64, 9, 9], 1);
        let c = Dia::from_vec(vec![0u64, 5], 3);
        let merged = Dia::merge(&[&a, &b, &c], |x, y| x < y);
        let mut expected = Dia::union(&[&a, &b, &c]).to_vec();
        expected.sort();
        assert_eq!(merged.to_vec(), expected);
    }

    #[test]
    fn union_concatenates_in_argument_order() {
        let a = Dia::from_vec(vec![1u64, 2], 2);
        let b = Dia::from_vec(Vec::<u64>::new(), 1);
        let c = Dia::from_vec(vec![3u64], 4);
        assert_eq!(Dia::union(&[&a, &b, &c]).to_vec(), vec![1, 2, 3]);
        assert_eq!(Dia::union(&[&c, &a, &a]).to_vec(), vec![3, 1, 2, 1, 2]);
    }

    #[test]
    fn zip_pairs_positionally_and_checks_sizes() {
        let a = Dia::from_vec(vec![1u64, 2, 3], 2);
        let b = Dia::from_vec(vec![10u64, 20, 30], 3);
        assert_eq!(
            a.zip(&b, |x, y| x + y).unwrap().to_vec(),
            vec![11, 22, 33]
        );
        let short = Dia::from_vec(vec![1u64], 1);
        assert_eq!(
            a.zip(&short, |x, y| x + y).unwrap_err(),
            DataflowError::ZipSizeMismatch { sizes: vec![3, 1] }
        );
        let c = Dia::from_vec(vec![100u64, 200, 300], 1);
        assert_eq!(
            a.zip3(&b, &c, |x, y, z| x + y + z).unwrap().to_vec(),
            vec![111, 222, 333]
        );
        assert_eq!(
            a.zip3(&b, &short, |x, y, z| x + y + z).unwrap_err(),
            DataflowError::ZipSizeMismatch { sizes: vec![3, 3, 1] }
        );
        let d = Dia::from_vec(vec![1000u64, 2000, 3000], 2);
        assert_eq!(
            a.zip4(&b, &c, &d, |x, y, z, w| x + y + z + w).unwrap().to_vec(),
            vec![1111, 2222, 3333]
        );
    }

    #[test]
    fn zip_with_index_supplies_global_positions() {
        for p in SHARD_COUNTS {
            let d = Dia::from_vec(vec![b'x', b'y', b'z'], p);
            assert_eq!(
                d.zip_with_index(|i, x| (i, *x)).to_vec(),
                vec![(0, b'x'), (1, b'y'), (2, b'z')]
            );
        }
    }

    #[test]
    fn max_returns_first_maximal_item() {
        for p in SHARD_COUNTS {
            let d = Dia::from_vec(vec![(1u64, 'a'), (7, 'b'), (7, 'c'), (3, 'd')], p);
            assert_eq!(d.max(|x, y| x.0 < y.0).unwrap(), (7, 'b'), "p={p}");
            let empty: Dia<u64> = Dia::from_vec(vec![], p);
            assert_eq!(empty.max(|x, y| x < y).unwrap_err(), DataflowError::EmptyMax);
        }
    }

    #[test]
    fn size_counts_all_shards() {
        let d = Dia::from_vec((0u64..7).collect(), 4);
        assert_eq!(d.size(), 7);
        assert_eq!(d.filter(|x| *x > 4).size(), 2);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            /// Every operation's logical output is invariant under re-sharding.
            #[test]
            fn reshard_invariance(items in prop::collection::vec(0u64..50, 0..120)) {
                let reference = Dia::from_vec(items.clone(), 1);
                let ref_map = reference.map(|x| x * 3).to_vec();
                let ref_filter = reference.filter(|x| x % 2 == 0).to_vec();
                let ref_window = reference.window(3, |i, w| (i, w[0], w[1], w[2])).to_vec();
                let ref_flat = reference
                    .flat_window(2, true, |i, w, total, out| {
                        if i + 2 <= total {
                            out.push((i, w[0] + w[1]));
                        } else {
                            out.push((i, w[0]));
                        }
                    })
                    .to_vec();
                let ref_scan = reference.prefix_sum(|a, b| *a.max(b)).to_vec();
                let ref_sort = reference.sort(|a, b| (a % 7, *a) < (b % 7, *b)).to_vec();
                for p in [2usize, 3, 8] {
                    let d = Dia::from_vec(items.clone(), p);
                    prop_assert_eq!(d.map(|x| x * 3).to_vec(), ref_map.clone());
                    prop_assert_eq!(d.filter(|x| x % 2 == 0).to_vec(), ref_filter.clone());
                    prop_assert_eq!(
                        d.window(3, |i, w| (i, w[0], w[1], w[2])).to_vec(),
                        ref_window.clone()
                    );
                    prop_assert_eq!(
                        d.flat_window(2, true, |i, w, total, out| {
                            if i + 2 <= total {
                                out.push((i, w[0] + w[1]));
                            } else {
                                out.push((i, w[0]));
                            }
                        })
                        .to_vec(),
                        ref_flat.clone()
                    );
                    prop_assert_eq!(d.prefix_sum(|a, b| *a.max(b)).to_vec(), ref_scan.clone());
                    prop_assert_eq!(
                        d.sort(|a, b| (a % 7, *a) < (b % 7, *b)).to_vec(),
                        ref_sort.clone()
                    );
                }
            }

            /// `sort` agrees with a stable standard-library sort.
            #[test]
            fn sort_matches_std_stable_sort(
                items in prop::collection::vec((0u64..10, 0u64..1000), 0..200),
                p in 1usize..9,
            ) {
                let d = Dia::from_vec(items.clone(), p);
                let sorted = d.sort(|a, b| a.0 < b.0).to_vec();
                let mut expected = items;
                expected.sort_by_key(|x| x.0); // stable
                prop_assert_eq!(sorted, expected);
            }

            /// `merge` of sorted inputs equals sorting their union.
            #[test]
            fn merge_equals_sort_of_union(
                mut a in prop::collection::vec(0u64..30, 0..60),
                mut b in prop::collection::vec(0u64..30, 0..60),
                p in 1usize..9,
            ) {
                a.sort();
                b.sort();
                let da = Dia::from_vec(a, p);
                let db = Dia::from_vec(b, (p % 3) + 1);
                let merged = Dia::merge(&[&da, &db], |x, y| x < y).to_vec();
                let sorted = Dia::union(&[&da, &db]).sort(|x, y| x < y).to_vec();
                prop_assert_eq!(merged, sorted);
            }

            /// `prefix_sum` equals a sequential inclusive scan.
            #[test]
            fn prefix_sum_matches_sequential_scan(
                items in prop::collection::vec(0u64..1000, 0..150),
                p in 1usize..9,
            ) {
                let d = Dia::from_vec(items.clone(), p);
                let got = d.prefix_sum(|a, b| a + b).to_vec();
                let mut acc = 0;
                let expected: Vec<u64> = items.iter().map(|x| { acc += x; acc }).collect();
                prop_assert_eq!(got, expected);
            }

            /// Window emission counts: `window` emits one output per item;
            /// full-only `flat_window` visits `max(0, n - width + 1)` starts.
            #[test]
            fn window_counts(
                items in prop::collection::vec(0u64..10, 0..80),
                width in 1usize..6,
                p in 1usize..9,
            ) {
                let n = items.len();
                let d = Dia::from_vec(items, p);
                prop_assert_eq!(d.window(width, |i, _| i).size(), n as u64);
                let full = d.flat_window(width, false, |i, _, _, out| out.push(i));
                prop_assert_eq!(full.size(), (n + 1).saturating_sub(width) as u64);
            }
        }
    }
}
