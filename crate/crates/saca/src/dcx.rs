//! Difference-cover suffix sorting (the DC3 / DC7 family), built from
//! [`crate::dataflow`] operations.
//!
//! # The difference-cover idea
//!
//! Fix a period `X` and a set `D` of residues modulo `X` such that every
//! residue is a difference of two elements of `D` (a *difference cover*).
//! Positions whose residue lies in `D` are *samples*. The algorithm:
//!
//! 1. ranks every sample suffix by recursing on a reduced text (one symbol
//!    per sample), and
//! 2. merges *all* suffixes in one pass: for any two positions `a` and `b`
//!    there is a shift `delta < X` such that `a + delta` and `b + delta` are
//!    both samples, so comparing `delta` characters and then one pair of
//!    sample ranks decides the order.
//!
//! Step 2 needs each suffix to carry only a bounded *representative*: its
//! first few characters and the ranks of the next few samples. The tables in
//! [`CoverTable`] say exactly how many of each a residue class needs.
//!
//! The covers used here are `D = {1, 2}` for `X = 3` and `D = {0, 1, 3}` for
//! `X = 7`.
//!
//! # Sentinels and the rank shift
//!
//! Reduced texts store `name + 1`, never the raw 0-based name: symbol 0 is
//! reserved for padding beyond the end of the text (array padding and the
//! virtual terminator), and a genuine name 0 must never be mistaken for it.
//! Sample ranks are 1-based for the same reason: rank 0 means "past the
//! end", which orders below every real suffix, exactly like `$`. Traces
//! print the unshifted names.

use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::dataflow::{Dia, Sentinel};
use crate::text::{Index, Name, SuffixArray, Text};
use crate::trace::{emit, seq, sym, Trace};
use crate::verify::oracle_suffix_sort_symbols;

/// Largest period supported (DC7).
const MAX_X: usize = 7;
/// Largest cover size supported (DC7 uses three residues).
const MAX_COVER: usize = 3;

/// Precomputed geometry of one difference cover: which shifts align any two
/// residue classes on samples, and what every class's representative must
/// carry.
#[derive(Debug, Clone)]
pub struct CoverTable {
    /// The period `X`.
    pub x: usize,
    /// The cover residues, ascending.
    pub cover: Vec<usize>,
    /// `delta[a][b]`: the smallest shift `d` with `(a + d) % x` and
    /// `(b + d) % x` both in the cover. Always `< x` — that is the
    /// difference-cover property.
    pub delta: Vec<Vec<usize>>,
    /// Per class: how many leading characters a representative stores
    /// (`max_b delta[c][b]`).
    pub char_span: Vec<usize>,
    /// Per class: the shifts `d < x` for which `c + d` is a sample, ascending.
    /// Representatives store the sample ranks at exactly these shifts.
    pub rank_offsets: Vec<Vec<usize>>,
    /// Per class: shift -> slot in `rank_offsets`, if the shift is valid.
    rank_slot: Vec<Vec<Option<usize>>>,
    /// Residue -> index in `cover`, if the residue is a sample class.
    cover_slot: Vec<Option<usize>>,
}

impl CoverTable {
    /// Builds the table for period `x` and the given cover residues.
    ///
    /// Panics if the residues do not form a difference cover (some pair of
    /// classes would have no aligning shift).
    pub fn new(x: usize, cover: &[usize]) -> Self {
        assert!(x <= MAX_X, "period larger than the supported maximum");
        assert!(cover.len() <= MAX_COVER);
        assert!(cover.windows(2).all(|w| w[0] < w[1]), "cover must be ascending");
        assert!(cover.iter().all(|&c| c < x), "cover residues must be < x");

        let cover_slot: Vec<Option<usize>> =
            (0..x).map(|r| cover.iter().position(|&c| c == r)).collect();
        let in_cover = |r: usize| cover_slot[r % x].is_some();

        let delta: Vec<Vec<usize>> = (0..x)
            .map(|a| {
                (0..x)
                    .map(|b| {
                        (0..x)
                            .find(|&d| in_cover(a + d) && in_cover(b + d))
                            .expect("not a difference cover: classes never align")
                    })
                    .collect()
            })
            .collect();
        let char_span: Vec<usize> =
            (0..x).map(|a| (0..x).map(|b| delta[a][b]).max().unwrap()).collect();
        let rank_offsets: Vec<Vec<usize>> =
            (0..x).map(|c| (0..x).filter(|&d| in_cover(c + d)).collect()).collect();
        let rank_slot: Vec<Vec<Option<usize>>> = (0..x)
            .map(|c| (0..x).map(|d| rank_offsets[c].iter().position(|&o| o == d)).collect())
            .collect();

        for c in 0..x {
            debug_assert_eq!(rank_offsets[c].len(), cover.len());
            debug_assert!(char_span[c] < x);
        }

        CoverTable { x, cover: cover.to_vec(), delta, char_span, rank_offsets, rank_slot, cover_slot }
    }

    /// The period-3 cover `{1, 2}`.
    pub fn dc3() -> Self {
        Self::new(3, &[1, 2])
    }

    /// The period-7 cover `{0, 1, 3}`.
    pub fn dc7() -> Self {
        Self::new(7, &[0, 1, 3])
    }

    fn is_sample(&self, pos: u64) -> bool {
        self.cover_slot[(pos % self.x as u64) as usize].is_some()
    }

    /// True when position `n` itself falls in a cover class other than the
    /// final one. That class's last real tuple sits at `n - x` with no
    /// past-the-end padding, so its name need not be unique, and comparisons
    /// inside the reduced text could run across the segment boundary. A
    /// virtual all-padding sample at `n` restores the invariant that every
    /// non-final segment ends in a unique name.
    fn needs_end_sample(&self, n: u64) -> bool {
        let r = (n % self.x as u64) as usize;
        self.cover_slot[r].is_some() && r != *self.cover.last().expect("cover is nonempty")
    }
}

fn dc3_table() -> &'static CoverTable {
    static TABLE: OnceLock<CoverTable> = OnceLock::new();
    TABLE.get_or_init(CoverTable::dc3)
}

fn dc7_table() -> &'static CoverTable {
    static TABLE: OnceLock<CoverTable> = OnceLock::new();
    TABLE.get_or_init(CoverTable::dc7)
}

/// `(position, next X characters)` of one sample position; slots past the end
/// of the text hold 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleTuple {
    pub i: Index,
    pub c: [u64; MAX_X],
}

impl Sentinel for SampleTuple {
    fn sentinel() -> Self {
        SampleTuple { i: u64::MAX, c: [0; MAX_X] }
    }
}

/// One aligned group of `X` text positions: its characters plus the ranks of
/// the samples inside it (slot `m` holds the rank of position
/// `x * g + cover[m]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Group {
    c: [u64; MAX_X],
    r: [u64; MAX_COVER],
}

impl Sentinel for Group {
    fn sentinel() -> Self {
        // All-zero: characters and ranks past the end of the text.
        Group { c: [0; MAX_X], r: [0; MAX_COVER] }
    }
}

/// A group paired with its successor (the last group pairs with the all-zero
/// sentinel), enough to cut any representative that starts inside `cur`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct GroupPair {
    g: u64,
    cur: Group,
    next: Group,
}

/// The bounded representative of one suffix: its residue class, position,
/// `char_span[class]` leading characters, and the sample ranks at the
/// class's `rank_offsets`. Everything any cover comparison can need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rep {
    pub class: u8,
    pub i: Index,
    pub chars: [u64; MAX_X - 1],
    pub ranks: [u64; MAX_COVER],
}

/// Compares two representatives: `delta[a.class][b.class]` characters, then
/// the sample ranks at that shift. Total order on distinct positions — rank
/// ties are impossible because sample ranks are unique and the all-past-end
/// case is decided earlier by a character.
pub fn cover_compare(tbl: &CoverTable, a: &Rep, b: &Rep) -> Ordering {
    let d = tbl.delta[a.class as usize][b.class as usize];
    for m in 0..d {
        match a.chars[m].cmp(&b.chars[m]) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    let sa = tbl.rank_slot[a.class as usize][d].expect("delta lands on a sample class (left)");
    let sb = tbl.rank_slot[b.class as usize][d].expect("delta lands on a sample class (right)");
    a.ranks[sa].cmp(&b.ranks[sb])
}

/// [`cover_compare`] for the period-3 cover.
pub fn compare_dc3(a: &Rep, b: &Rep) -> Ordering {
    cover_compare(dc3_table(), a, b)
}

/// [`cover_compare`] for the period-7 cover.
pub fn compare_dc7(a: &Rep, b: &Rep) -> Ordering {
    cover_compare(dc7_table(), a, b)
}

/// Names sorted sample tuples 0-based: equal neighbors share a name, each
/// distinct tuple starts a new one. Returned in the sorted order.
pub fn lexicographic_names(sorted: &Dia<SampleTuple>) -> Dia<Name> {
    let marks: Dia<u64> = sorted.flat_window(2, false, |j, w, _, out| {
        if j == 0 {
            out.push(0);
        }
        out.push(if w[0].c == w[1].c { 0 } else { 1 });
    });
    marks.prefix_sum(|a, b| a + b)
}

/// Arranges the sample names into the reduced text: one segment per cover
/// residue, each segment listing its class's names by position. Symbols are
/// shifted to `name + 1` so that 0 stays reserved for past-the-end padding.
pub fn build_reduced_text(
    tbl: &CoverTable,
    sample_order: &Dia<Index>,
    names: &Dia<Name>,
) -> Vec<u64> {
    let x = tbl.x as u64;
    let paired = sample_order
        .zip(names, |&pos, &name| (pos, name))
        .expect("one name per sample position");
    let segment = |pos: u64| tbl.cover_slot[(pos % x) as usize].expect("samples only");
    let arranged = paired.sort(|a, b| (segment(a.0), a.0 / x) < (segment(b.0), b.0 / x));
    arranged.map(|&(_, name)| name + 1).to_vec()
}

/// How many positions `< n` fall in residue class `c`.
fn class_count(n: u64, c: u64, x: u64) -> u64 {
    if n > c {
        (n - c).div_ceil(x)
    } else {
        0
    }
}

/// Maps a reduced-text position back to the original text position. When a
/// virtual end sample exists it occupies the extra slot at the tail of its
/// segment, and the arithmetic maps it to `n` (filtered out by the caller).
fn reduced_to_text(tbl: &CoverTable, n: u64, p: u64) -> u64 {
    let x = tbl.x as u64;
    let end_class = if tbl.needs_end_sample(n) { Some((n % x) as usize) } else { None };
    let mut start = 0;
    for &c in &tbl.cover {
        let mut len = class_count(n, c as u64, x);
        if end_class == Some(c) {
            len += 1;
        }
        if p < start + len {
            return c as u64 + (p - start) * x;
        }
        start += len;
    }
    unreachable!("reduced position out of range");
}

/// Splits `(text position, 1-based rank)` pairs into one rank array per cover
/// class, ordered by position and padded with rank 0 to `ceil(n / x)` entries
/// so all arrays zip against the character groups.
pub fn invert_and_split(
    tbl: &CoverTable,
    n: u64,
    ranked: &Dia<(Index, u64)>,
    level: u32,
    trace: &mut Option<&mut Trace>,
) -> Vec<Dia<u64>> {
    let x = tbl.x as u64;
    let by_pos = ranked.sort(|a, b| a.0 < b.0);
    let groups = n.div_ceil(x);
    tbl.cover
        .iter()
        .map(|&c| {
            let class = by_pos.filter(move |&(pos, _)| pos % x == c as u64).map(|&(_, r)| r);
            emit(trace, || {
                format!("level={level} R{c}={}", seq(class.iter(), |r| r.to_string()))
            });
            let pad = groups - class.size();
            if pad == 0 {
                class
            } else {
                let zeros = Dia::from_vec(vec![0u64; pad as usize], 1);
                Dia::union(&[&class, &zeros])
            }
        })
        .collect()
}

/// Cuts the representative of position `x * g + class` out of a group pair.
fn make_rep(tbl: &CoverTable, class: usize, gp: &GroupPair) -> Rep {
    let x = tbl.x;
    let i = gp.g * x as u64 + class as u64;
    let mut chars = [0u64; MAX_X - 1];
    for (m, slot) in chars.iter_mut().enumerate().take(tbl.char_span[class]) {
        let off = class + m;
        *slot = if off < x { gp.cur.c[off] } else { gp.next.c[off - x] };
    }
    let mut ranks = [0u64; MAX_COVER];
    for (slot, &d) in tbl.rank_offsets[class].iter().enumerate() {
        let off = class + d;
        let m = tbl.cover_slot[off % x].expect("rank offsets land on sample classes");
        ranks[slot] = if off < x { gp.cur.r[m] } else { gp.next.r[m] };
    }
    Rep { class: class as u8, i, chars, ranks }
}

/// Trace form of a representative: the position, then per shift the stored
/// character (while the class stores one) and the stored rank (where the
/// shift lands on a sample).
fn render_rep(tbl: &CoverTable, r: &Rep) -> String {
    let c = r.class as usize;
    let mut parts = vec![r.i.to_string()];
    for d in 0..tbl.x {
        if d < tbl.char_span[c] {
            parts.push(sym(r.chars[d]));
        }
        if let Some(slot) = tbl.rank_slot[c][d] {
            parts.push(r.ranks[slot].to_string());
        }
    }
    format!("({})", parts.join(","))
}

/// Small-input cutoff for recursion levels: below this size the reduced text
/// is sorted brute-force instead of another cover round.
const RECURSION_CUTOFF: usize = 16;

/// One level of the cover algorithm over `symbols` (all `>= 1`; 0 is the
/// reserved past-the-end symbol). Returns the suffix array of `symbols`.
fn dcx_symbols(
    symbols: &[u64],
    tbl: &CoverTable,
    shards: usize,
    depth: u32,
    deepest: &mut u32,
    trace: &mut Option<&mut Trace>,
) -> Vec<Index> {
    *deepest = (*deepest).max(depth);
    let n = symbols.len() as u64;
    let x = tbl.x as u64;
    emit(trace, || format!("level={depth} n={n}"));

    // Base cases: recursion levels fall back to brute force once small; the
    // top level does so only when even one full group does not exist.
    if (depth >= 1 && symbols.len() <= RECURSION_CUTOFF) || n < x {
        let sa = oracle_suffix_sort_symbols(symbols);
        emit(trace, || format!("level={depth} result={}", seq(sa.iter(), |i| i.to_string())));
        return sa;
    }

    let t: Dia<u64> = Dia::from_vec(symbols.to_vec(), shards);

    // Sample tuples: the next X characters at every sample position.
    let tuples: Dia<SampleTuple> = t.flat_window(tbl.x, true, |i, w, _, out| {
        if tbl.is_sample(i) {
            let mut c = [0u64; MAX_X];
            c[..w.len()].copy_from_slice(w);
            out.push(SampleTuple { i, c });
        }
    });
    // A virtual all-padding sample at `n` when that position's class is a
    // non-final cover class: it sorts first among all tuples (real first
    // characters are >= 1), so it takes the smallest name and doubles as the
    // terminator of its reduced-text segment.
    let has_end_sample = tbl.needs_end_sample(n);
    let tuples = if has_end_sample {
        let end = Dia::from_vec(vec![SampleTuple { i: n, c: [0; MAX_X] }], 1);
        Dia::union(&[&tuples, &end])
    } else {
        tuples
    };
    let sorted = tuples.sort(|a, b| a.c < b.c);
    let sample_order: Dia<Index> = sorted.map(|tup| tup.i);
    emit(trace, || {
        format!("level={depth} I_S={}", seq(sample_order.iter(), |i| i.to_string()))
    });
    let names = lexicographic_names(&sorted);
    emit(trace, || format!("level={depth} N={}", seq(names.iter(), |r| r.to_string())));

    let n_sub = names.size();
    debug_assert!(n_sub >= 2, "a full group guarantees at least two samples");
    let max_name = names.max(|a, b| a < b).expect("samples are nonempty");

    // Rank every sample suffix, 1-based.
    let ranked: Dia<(Index, u64)> = if max_name + 1 == n_sub {
        // Every sample tuple is distinct: the tuple order is the suffix
        // order, ranks read off directly and no recursion is needed.
        sample_order.zip_with_index(|q, &pos| (pos, q + 1))
    } else {
        let reduced = build_reduced_text(tbl, &sample_order, &names);
        emit(trace, || {
            format!("level={depth} T_R={}", seq(reduced.iter(), |s| (s - 1).to_string()))
        });
        let sa_r = dcx_symbols(&reduced, tbl, shards, depth + 1, deepest, trace);
        emit(trace, || {
            format!("level={depth} SA_R={}", seq(sa_r.iter(), |i| i.to_string()))
        });
        Dia::from_vec(sa_r, shards)
            .zip_with_index(|q, &p| (reduced_to_text(tbl, n, p), q + 1))
    };
    // The virtual end sample carries a rank but no suffix of its own.
    let ranked = if has_end_sample { ranked.filter(move |&(pos, _)| pos < n) } else { ranked };
    let rank_arrays = invert_and_split(tbl, n, &ranked, depth, trace);

    // Aligned character groups, zipped with the rank arrays.
    let group_chars: Dia<[u64; MAX_X]> = t.flat_window(tbl.x, true, |i, w, _, out| {
        if i % x == 0 {
            let mut c = [0u64; MAX_X];
            c[..w.len()].copy_from_slice(w);
            out.push(c);
        }
    });
    let zipped: Dia<Group> = match rank_arrays.len() {
        2 => group_chars
            .zip3(&rank_arrays[0], &rank_arrays[1], |c, &r0, &r1| Group {
                c: *c,
                r: [r0, r1, 0],
            })
            .expect("rank arrays are padded to the group count"),
        3 => group_chars
            .zip4(&rank_arrays[0], &rank_arrays[1], &rank_arrays[2], |c, &r0, &r1, &r2| Group {
                c: *c,
                r: [r0, r1, r2],
            })
            .expect("rank arrays are padded to the group count"),
        k => unreachable!("unsupported cover size {k}"),
    };
    let pairs: Dia<GroupPair> = zipped.window(2, |g, w| GroupPair { g, cur: w[0], next: w[1] });

    // Per-class representative arrays, each sorted by the cover order.
    let classes: Vec<Dia<Rep>> = (0..tbl.x)
        .map(|class| {
            let reps = pairs
                .map(|gp| make_rep(tbl, class, gp))
                .filter(|rep| rep.i < n);
            let sorted_class = reps.sort(|a, b| cover_compare(tbl, a, b) == Ordering::Less);
            emit(trace, || {
                format!(
                    "level={depth} S{class}={}",
                    seq(sorted_class.iter(), |rep| render_rep(tbl, rep))
                )
            });
            sorted_class
        })
        .collect();
    let refs: Vec<&Dia<Rep>> = classes.iter().collect();
    let merged = Dia::merge(&refs, |a, b| cover_compare(tbl, a, b) == Ordering::Less);
    let result = merged.map(|rep| rep.i).to_vec();
    emit(trace, || format!("level={depth} result={}", seq(result.iter(), |i| i.to_string())));
    result
}

/// Result of a cover run.
#[derive(Debug, Clone)]
pub struct DcxRun {
    /// The computed suffix array.
    pub sa: SuffixArray,
    /// Recursion levels entered (1 when the top level resolved directly).
    pub levels: u32,
}

fn dcx_run(text: &Text, tbl: &CoverTable, shards: usize, mut trace: Option<&mut Trace>) -> DcxRun {
    emit(&mut trace, || {
        format!("T={}", seq(text.as_bytes().iter(), |c| sym(*c as u64)))
    });
    let symbols: Vec<u64> = text.as_bytes().iter().map(|&b| b as u64).collect();
    let mut deepest = 0;
    let sa = dcx_symbols(&symbols, tbl, shards, 0, &mut deepest, &mut trace);
    DcxRun { sa: SuffixArray::new(sa), levels: deepest + 1 }
}

/// Suffix sorting with the period-3 cover.
///
/// ```
/// use saca::dcx::dc3_run;
/// use saca::text::Text;
///
/// let run = dc3_run(&Text::from_str_lossy("banana"), 2, None);
/// assert_eq!(run.sa.as_slice(), &[5, 3, 1, 0, 4, 2]);
/// ```
pub fn dc3_run(text: &Text, shards: usize, trace: Option<&mut Trace>) -> DcxRun {
    dcx_run(text, dc3_table(), shards, trace)
}

/// Suffix sorting with the period-7 cover.
///
/// ```
/// use saca::dcx::dc7_run;
/// use saca::text::Text;
///
/// let run = dc7_run(&Text::from_str_lossy("banana"), 2, None);
/// assert_eq!(run.sa.as_slice(), &[5, 3, 1, 0, 4, 2]);
/// ```
pub fn dc7_run(text: &Text, shards: usize, trace: Option<&mut Trace>) -> DcxRun {
    dcx_run(text, dc7_table(), shards, trace)
}
