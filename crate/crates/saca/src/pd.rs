//! The prefix-doubling family of suffix sorters, built entirely from
//! [`crate::dataflow`] operations.
//!
//! # How doubling works
//!
//! All variants maintain, per suffix, a *name*: the number of suffixes that
//! are strictly smaller when comparing only the first `2^k` characters
//! (equivalently, the first position of the suffix's run when suffixes are
//! sorted by that bounded prefix). One iteration doubles the comparison
//! depth: each suffix pairs its own name with the name of the suffix `2^k`
//! positions later, the pairs are ranked, and ranking pairs of depth-`2^k`
//! names yields exact depth-`2^(k+1)` names. Once every name is unique the
//! name order *is* the suffix array. The variants differ in how they gather
//! the successor name:
//!
//! * **Sorting refinement** ([`refine_sorting`]) reorders the names by
//!   `(i mod 2^k, i div 2^k)`, which makes position `i + 2^k` physically
//!   adjacent to `i`, so a width-2 window pairs them.
//! * **Inverse refinement** ([`refine_isa`]) reorders the names by position
//!   (the inverse-permutation view) and reads the successor with a window of
//!   width `2^k + 1`.
//! * **Discarding** ([`pd_discarding_run`]) additionally retires suffixes
//!   whose name is already unique: they are moved to a *done* pile as soon as
//!   no future pairing can need their name, so late iterations touch only the
//!   still-ambiguous remainder.
//! * **Quadrupling** ([`pd_quadrupling_run`]) multiplies the depth by 4 per
//!   iteration, pairing each name with three successors at distances `4^k`,
//!   `2 * 4^k`, and `3 * 4^k`.
//!
//! # Sentinels
//!
//! A suffix whose successor position falls beyond the text pairs with
//! *absent* (`Option::None`), which orders below every real name — exactly
//! the virtual `$` terminator. Traces print it as `0` for compactness; it is
//! **not** the name `0`, which real suffixes can carry. Keeping the two apart
//! is what lets texts like `"abab"` (where a genuine name 0 and an absent
//! successor meet in the same run) converge.

use crate::dataflow::{Dia, Sentinel};
use crate::text::{ceil_log2, ceil_log4, Index, Name, SuffixArray, Text};
use crate::trace::{emit, opt_name, seq, sym, Trace};

/// `(position, two leading characters)` — the seed tuples of the pair
/// variants; the second character of the final position is the sentinel `$`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharPair {
    pub i: Index,
    pub c: [u8; 2],
}

impl Sentinel for CharPair {
    fn sentinel() -> Self {
        CharPair { i: u64::MAX, c: [0; 2] }
    }
}

/// `(position, name)` — one entry of a naming array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdxName {
    pub i: Index,
    pub r: Name,
}

impl Sentinel for IdxName {
    fn sentinel() -> Self {
        IdxName { i: u64::MAX, r: 0 }
    }
}

/// `(position, own name, successor name)` — the pair tuples of one doubling
/// iteration. `r1` is `None` when the successor position lies beyond the
/// text; `None` orders below every real name, like the `$` it stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NamePair {
    pub i: Index,
    pub r0: Name,
    pub r1: Option<Name>,
}

impl Sentinel for NamePair {
    fn sentinel() -> Self {
        NamePair { i: u64::MAX, r0: 0, r1: None }
    }
}

/// `(position, four leading characters)` — seed tuples of the quadrupling
/// variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharQuad {
    pub i: Index,
    pub c: [u8; 4],
}

impl Sentinel for CharQuad {
    fn sentinel() -> Self {
        CharQuad { i: u64::MAX, c: [0; 4] }
    }
}

/// `(position, own name, three successor names)` — quadrupling tuples; the
/// successors sit `4^k`, `2 * 4^k`, and `3 * 4^k` positions ahead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NameQuad {
    pub i: Index,
    pub r0: Name,
    pub rs: [Option<Name>; 3],
}

impl Sentinel for NameQuad {
    fn sentinel() -> Self {
        NameQuad { i: u64::MAX, r0: 0, rs: [None; 3] }
    }
}

/// A tuple type the doubling loop can sort and name: it has a position and a
/// comparable key (the characters or the name pair).
pub trait DoublingTuple: Copy + PartialEq + Send + Sync + Sentinel + 'static {
    fn index(&self) -> Index;
    fn key_less(&self, other: &Self) -> bool;
    fn key_eq(&self, other: &Self) -> bool;
    /// Trace rendering, `(i,key components...)`.
    fn render(&self) -> String;
}

impl DoublingTuple for CharPair {
    fn index(&self) -> Index {
        self.i
    }
    fn key_less(&self, other: &Self) -> bool {
        self.c < other.c
    }
    fn key_eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
    fn render(&self) -> String {
        format!("({},{},{})", self.i, sym(self.c[0] as u64), sym(self.c[1] as u64))
    }
}

impl DoublingTuple for NamePair {
    fn index(&self) -> Index {
        self.i
    }
    fn key_less(&self, other: &Self) -> bool {
        (self.r0, self.r1) < (other.r0, other.r1)
    }
    fn key_eq(&self, other: &Self) -> bool {
        (self.r0, self.r1) == (other.r0, other.r1)
    }
    fn render(&self) -> String {
        format!("({},{},{})", self.i, self.r0, opt_name(self.r1))
    }
}

impl DoublingTuple for CharQuad {
    fn index(&self) -> Index {
        self.i
    }
    fn key_less(&self, other: &Self) -> bool {
        self.c < other.c
    }
    fn key_eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
    fn render(&self) -> String {
        format!(
            "({},{},{},{},{})",
            self.i,
            sym(self.c[0] as u64),
            sym(self.c[1] as u64),
            sym(self.c[2] as u64),
            sym(self.c[3] as u64)
        )
    }
}

impl DoublingTuple for NameQuad {
    fn index(&self) -> Index {
        self.i
    }
    fn key_less(&self, other: &Self) -> bool {
        (self.r0, self.rs) < (other.r0, other.rs)
    }
    fn key_eq(&self, other: &Self) -> bool {
        (self.r0, self.rs) == (other.r0, other.rs)
    }
    fn render(&self) -> String {
        format!(
            "({},{},{},{},{})",
            self.i,
            self.r0,
            opt_name(self.rs[0]),
            opt_name(self.rs[1]),
            opt_name(self.rs[2])
        )
    }
}

/// Names sorted tuples: the first tuple gets name 0; every other tuple gets
/// name `j + 1` (its 0-based position) when its key differs from its
/// predecessor's, and the placeholder 0 when the keys tie. A later maximum
/// prefix combination ([`propagate_names`]) turns the placeholders into the
/// run-start names.
///
/// Expects at least two tuples (the callers short-circuit smaller inputs).
pub fn cmp_name<P: DoublingTuple>(sorted: &Dia<P>) -> Dia<IdxName> {
    sorted.flat_window(2, false, |j, w, _, out| {
        if j == 0 {
            out.push(IdxName { i: w[0].index(), r: 0 });
        }
        let r = if w[0].key_eq(&w[1]) { 0 } else { j + 1 };
        out.push(IdxName { i: w[1].index(), r });
    })
}

/// Turns [`cmp_name`] placeholders into names by propagating the running
/// maximum: a tied tuple inherits the name of its run's first tuple.
pub fn propagate_names(named: &Dia<IdxName>) -> Dia<IdxName> {
    named.prefix_sum(|a, b| IdxName { i: b.i, r: a.r.max(b.r) })
}

/// Counts entries whose name slot is still the placeholder 0.
fn zero_names(named: &Dia<IdxName>) -> u64 {
    named.filter(|x| x.r == 0).size()
}

/// Sorting-based refinement: reorders names by `(i mod 2^k, i div 2^k)` so
/// that position `i + 2^k` follows `i` directly, then pairs neighbors with a
/// width-2 window. The successor slot is filled only when the next entry
/// really is `i + 2^k`; otherwise the suffix's comparison window ends within
/// the text and the slot is the absent marker.
pub fn refine_sorting(
    names: &Dia<IdxName>,
    k: u32,
    mut trace: Option<&mut Trace>,
) -> Dia<NamePair> {
    let d = 1u64 << k;
    let reordered = names.sort(|a, b| (a.i % d, a.i / d) < (b.i % d, b.i / d));
    emit(&mut trace, || {
        format!("k={k} N={}", seq(reordered.iter(), |x| format!("({},{})", x.i, x.r)))
    });
    let pairs = reordered.window(2, move |_, w| NamePair {
        i: w[0].i,
        r0: w[0].r,
        r1: if w[0].i + d == w[1].i { Some(w[1].r) } else { None },
    });
    emit(&mut trace, || format!("k={k} S={}", seq(pairs.iter(), |x| x.render())));
    pairs
}

/// Inverse-based refinement: reorders names by position (the inverse
/// permutation), so entry `j` of the array is suffix `j`'s name, then reads
/// the successor name `2^k` slots ahead with a wide window.
pub fn refine_isa(
    names: &Dia<IdxName>,
    k: u32,
    n: u64,
    mut trace: Option<&mut Trace>,
) -> Dia<NamePair> {
    let d = 1u64 << k;
    let reordered = names.sort(|a, b| a.i < b.i);
    emit(&mut trace, || {
        format!("k={k} N={}", seq(reordered.iter(), |x| format!("({},{})", x.i, x.r)))
    });
    // Window slots past position d are never read (the guard fires first),
    // so the width can be capped at the array size.
    let width = (d + 1).min(n + 1) as usize;
    let pairs = reordered.window(width, move |j, w| {
        debug_assert_eq!(w[0].i, j, "inverse layout: entry j names suffix j");
        NamePair {
            i: w[0].i,
            r0: w[0].r,
            r1: if j + d < n { Some(w[d as usize].r) } else { None },
        }
    });
    emit(&mut trace, || format!("k={k} S={}", seq(pairs.iter(), |x| x.render())));
    pairs
}

/// Which refinement [`pd_generic`] uses between naming passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefineStrategy {
    /// Reorder by `(i mod 2^k, i div 2^k)` and pair adjacent entries.
    Sorting,
    /// Reorder by position and read the successor through a wide window.
    Isa,
}

/// Result of a doubling run.
#[derive(Debug, Clone)]
pub struct PdRun {
    /// The computed suffix array.
    pub sa: SuffixArray,
    /// Naming passes performed; bounded by `ceil(log2 n)` for the pair
    /// variants and `ceil(log4 n)` for quadrupling.
    pub iterations: u32,
    /// Per-iteration count of tuples still tied to their predecessor — the
    /// figure traced as `rank0=` (at the final iteration the structural zero
    /// of the first tuple is the only one left, displayed as 1).
    pub zero_counts: Vec<u64>,
}

/// One sort + name + count pass. Returns the suffix array if all names came
/// out distinct, otherwise the propagated naming array for refinement.
enum NamingStep {
    Done(Vec<Index>),
    Continue(Dia<IdxName>),
}

fn naming_step<P: DoublingTuple>(
    tuples: &Dia<P>,
    k: u32,
    zero_counts: &mut Vec<u64>,
    trace: &mut Option<&mut Trace>,
) -> NamingStep {
    let sorted = tuples.sort(|a, b| a.key_less(b));
    emit(trace, || format!("k={k} S={}", seq(sorted.iter(), |x| x.render())));
    let named = cmp_name(&sorted);
    emit(trace, || format!("k={k} N={}", seq(named.iter(), |x| format!("({},{})", x.i, x.r))));
    let zeros = zero_names(&named);
    if zeros == 1 {
        // Only the structural zero of the first tuple remains: every tuple
        // key is distinct, the sorted order is the suffix order.
        zero_counts.push(1);
        emit(trace, || format!("k={k} rank0=1"));
        return NamingStep::Done(named.map(|x| x.i).to_vec());
    }
    // Display rule: while iterating, report the tuples tied to their
    // predecessor (excluding the first tuple's structural zero).
    zero_counts.push(zeros - 1);
    emit(trace, || format!("k={k} rank0={}", zeros - 1));
    let propagated = propagate_names(&named);
    emit(trace, || {
        format!("k={k} N={}", seq(propagated.iter(), |x| format!("({},{})", x.i, x.r)))
    });
    NamingStep::Continue(propagated)
}

/// Prefix doubling with a pluggable refinement strategy.
///
/// ```
/// use saca::pd::{pd_generic, RefineStrategy};
/// use saca::text::Text;
///
/// let text = Text::from_str_lossy("bdacbdacb");
/// let run = pd_generic(&text, RefineStrategy::Sorting, 3, None);
/// assert_eq!(run.sa.as_slice(), &[6, 2, 8, 4, 0, 7, 3, 5, 1]);
/// assert_eq!(run.iterations, 3);
/// ```
pub fn pd_generic(
    text: &Text,
    strategy: RefineStrategy,
    shards: usize,
    mut trace: Option<&mut Trace>,
) -> PdRun {
    let n = text.len() as u64;
    if n <= 1 {
        return PdRun {
            sa: SuffixArray::new((0..n).collect()),
            iterations: 0,
            zero_counts: Vec::new(),
        };
    }

    let t = Dia::from_vec(text.as_bytes().to_vec(), shards);
    emit(&mut trace, || {
        format!("T={}", seq(text.as_bytes().iter(), |c| sym(*c as u64)))
    });
    let seed: Dia<CharPair> = t.window(2, |i, w| CharPair { i, c: [w[0], w[1]] });
    emit(&mut trace, || format!("S={}", seq(seed.iter(), |x| x.render())));

    let kmax = ceil_log2(n);
    let mut zero_counts = Vec::new();

    let refine = |names: &Dia<IdxName>, k: u32, trace: Option<&mut Trace>| match strategy {
        RefineStrategy::Sorting => refine_sorting(names, k, trace),
        RefineStrategy::Isa => refine_isa(names, k, n, trace),
    };

    // Iteration 1 names character pairs; later iterations name name pairs.
    let mut pairs: Dia<NamePair> =
        match naming_step(&seed, 1, &mut zero_counts, &mut trace) {
            NamingStep::Done(sa) => {
                return finish_pd(sa, 1, zero_counts, &mut trace);
            }
            NamingStep::Continue(names) => refine(&names, 1, trace.as_deref_mut()),
        };
    for k in 2..=kmax {
        match naming_step(&pairs, k, &mut zero_counts, &mut trace) {
            NamingStep::Done(sa) => {
                return finish_pd(sa, k, zero_counts, &mut trace);
            }
            NamingStep::Continue(names) => {
                pairs = refine(&names, k, trace.as_deref_mut());
            }
        }
    }
    unreachable!("naming at depth 2^ceil(log2 n) separates all suffixes");
}

fn finish_pd(
    sa: Vec<Index>,
    iterations: u32,
    zero_counts: Vec<u64>,
    trace: &mut Option<&mut Trace>,
) -> PdRun {
    emit(trace, || format!("result={}", seq(sa.iter(), |i| i.to_string())));
    PdRun { sa: SuffixArray::new(sa), iterations, zero_counts }
}

/// Prefix doubling with sorting-based refinement.
pub fn pd_sorting_run(text: &Text, shards: usize, trace: Option<&mut Trace>) -> PdRun {
    pd_generic(text, RefineStrategy::Sorting, shards, trace)
}

/// Prefix doubling with inverse-based refinement.
pub fn pd_isa_run(text: &Text, shards: usize, trace: Option<&mut Trace>) -> PdRun {
    pd_generic(text, RefineStrategy::Isa, shards, trace)
}

// ---------------------------------------------------------------------------
// Discarding variant
// ---------------------------------------------------------------------------

/// Result of a discarding run, with the per-iteration set sizes the progress
/// assertions check.
#[derive(Debug, Clone)]
pub struct DiscardRun {
    pub sa: SuffixArray,
    pub iterations: u32,
    /// Undecided-set size after each iteration's partition.
    pub undecided_sizes: Vec<u64>,
    /// Cumulative done-pile size after each iteration's partition.
    pub discarded_sizes: Vec<u64>,
}

/// Decision state attached to an entry while it flows through an iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DecideState {
    /// Name is unique and no future pairing can need it: retire to the done
    /// pile.
    Discard,
    /// Name is unique but a neighbor may still need it: keep carrying it.
    Unique,
    /// Name is still shared: pair and rename.
    Undecided,
}

/// `(position, name, unique?)` — an entry of the working set `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct StateItem {
    i: Index,
    r: Name,
    unique: bool,
}

impl Sentinel for StateItem {
    fn sentinel() -> Self {
        StateItem { i: u64::MAX, r: u64::MAX, unique: true }
    }
}

/// A paired entry plus its decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Decided {
    pair: NamePair,
    state: DecideState,
}

impl Sentinel for Decided {
    fn sentinel() -> Self {
        Decided { pair: NamePair::sentinel(), state: DecideState::Unique }
    }
}

/// Marks each naming entry unique when its name differs from both neighbors
/// in name order. Boundary items with an impossible name stand in for the
/// missing neighbors of the first and last entry, so a width-3 full window
/// emits exactly one state per real entry.
fn classify_unique(names: &Dia<IdxName>) -> Dia<StateItem> {
    let boundary = Dia::from_vec(vec![IdxName { i: u64::MAX, r: u64::MAX }], 1);
    let extended = Dia::union(&[&boundary, names, &boundary]);
    extended.flat_window(3, false, |_, w, _, out| {
        let unique = w[0].r != w[1].r && w[1].r != w[2].r;
        out.push(StateItem { i: w[1].i, r: w[1].r, unique });
    })
}

/// Pairs every entry of the reordered working set with its successor name
/// and decides its fate.
///
/// The working set is sorted by `(i mod 2^k, i div 2^k)`, so an undecided
/// entry's successor `i + 2^k` — when it exists and is not yet retired — is
/// the directly following entry; the discard rule below guarantees a live
/// undecided entry never has a retired successor. A unique entry retires
/// once either of the two preceding entries is unique: the chain of suffixes
/// that could still need its name then resolves through those entries'
/// uniqueness before ever reaching back to it. Two synthetic unique items
/// precede the data (the first two entries have no in-range predecessors to
/// serve) and one follows it, so a width-4 full window decides each real
/// entry exactly once.
fn npairs(reordered: &Dia<StateItem>, d: u64) -> Dia<Decided> {
    let sentinel = StateItem::sentinel();
    let pre = Dia::from_vec(vec![sentinel, sentinel], 1);
    let post = Dia::from_vec(vec![sentinel], 1);
    let extended = Dia::union(&[&pre, reordered, &post]);
    extended.flat_window(4, false, move |_, w, _, out| {
        let (back2, back1, item, succ) = (w[0], w[1], w[2], w[3]);
        let decided = if item.unique {
            Decided {
                pair: NamePair { i: item.i, r0: item.r, r1: None },
                state: if back1.unique || back2.unique {
                    DecideState::Discard
                } else {
                    DecideState::Unique
                },
            }
        } else {
            let r1 = if item.i + d == succ.i { Some(succ.r) } else { None };
            Decided {
                pair: NamePair { i: item.i, r0: item.r, r1 },
                state: DecideState::Undecided,
            }
        };
        out.push(decided);
    })
}

/// Renames the undecided entries from their name pairs without global
/// renumbering.
///
/// Input must be sorted by `(r0, r1)`. Entries sharing `r0` form a group that
/// occupied one run of the previous naming; within the group, each distinct
/// `r1` starts a sub-run. The new name is `r0 + (sub-run start - group
/// start)`: the group's old name plus the number of group members that are
/// now strictly smaller. Unique names elsewhere are never touched, and the
/// new names stay inside the group's old name interval, so no collision with
/// any retired or carried name is possible.
pub fn name_discarding(undecided_sorted: &Dia<NamePair>) -> Dia<IdxName> {
    /// `(entry, group-start marker, sub-run-start marker)`, positions 1-based.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    struct Marked {
        i: Index,
        old: Name,
        group: u64,
        sub: u64,
    }

    let marked = undecided_sorted.flat_window(2, false, |j, w, _, out| {
        if j == 0 {
            out.push(Marked { i: w[0].i, old: w[0].r0, group: 1, sub: 1 });
        }
        let p = j + 2; // 1-based position of w[1]
        let (a, b) = (w[0], w[1]);
        let m = if a.r0 != b.r0 {
            Marked { i: b.i, old: b.r0, group: p, sub: p }
        } else if a.r1 != b.r1 {
            Marked { i: b.i, old: b.r0, group: 1, sub: p }
        } else {
            Marked { i: b.i, old: b.r0, group: 1, sub: 1 }
        };
        out.push(m);
    });
    let propagated = marked.prefix_sum(|x, y| Marked {
        i: y.i,
        old: y.old,
        group: x.group.max(y.group),
        sub: x.sub.max(y.sub),
    });
    propagated.map(|m| IdxName { i: m.i, r: m.old + (m.sub - m.group) })
}

/// Prefix doubling with discarding.
///
/// ```
/// use saca::pd::pd_discarding_run;
/// use saca::text::Text;
///
/// let run = pd_discarding_run(&Text::from_str_lossy("bdacbdacb"), 3, None);
/// assert_eq!(run.sa.as_slice(), &[6, 2, 8, 4, 0, 7, 3, 5, 1]);
/// assert_eq!(*run.discarded_sizes.last().unwrap(), 9);
/// ```
pub fn pd_discarding_run(
    text: &Text,
    shards: usize,
    mut trace: Option<&mut Trace>,
) -> DiscardRun {
    let n = text.len() as u64;
    if n <= 1 {
        return DiscardRun {
            sa: SuffixArray::new((0..n).collect()),
            iterations: 0,
            undecided_sizes: Vec::new(),
            discarded_sizes: Vec::new(),
        };
    }

    let t = Dia::from_vec(text.as_bytes().to_vec(), shards);
    emit(&mut trace, || {
        format!("T={}", seq(text.as_bytes().iter(), |c| sym(*c as u64)))
    });
    let seed: Dia<CharPair> = t.window(2, |i, w| CharPair { i, c: [w[0], w[1]] });
    emit(&mut trace, || format!("S={}", seq(seed.iter(), |x| x.render())));

    // Initial naming at depth 2 (no termination check: the first iteration's
    // classification handles the all-distinct case naturally).
    let sorted = seed.sort(|a, b| a.key_less(b));
    emit(&mut trace, || format!("k=0 S={}", seq(sorted.iter(), |x| x.render())));
    let mut names = propagate_names(&cmp_name(&sorted));
    emit(&mut trace, || {
        format!("k=0 N={}", seq(names.iter(), |x| format!("({},{})", x.i, x.r)))
    });

    let mut carried: Dia<StateItem> = Dia::from_vec(Vec::new(), shards);
    let mut done: Dia<IdxName> = Dia::from_vec(Vec::new(), shards);
    let mut undecided_sizes = Vec::new();
    let mut discarded_sizes = Vec::new();

    let kmax = ceil_log2(n);
    for k in 1..=kmax {
        let d = 1u64 << k;
        let classified = classify_unique(&names);
        let working = Dia::union(&[&classified, &carried]);
        let reordered = working.sort(|a, b| (a.i % d, a.i / d) < (b.i % d, b.i / d));
        let decided = npairs(&reordered, d);

        let retired = decided
            .filter(|x| x.state == DecideState::Discard)
            .map(|x| IdxName { i: x.pair.i, r: x.pair.r0 });
        done = Dia::union(&[&done, &retired]);
        carried = decided
            .filter(|x| x.state == DecideState::Unique)
            .map(|x| StateItem { i: x.pair.i, r: x.pair.r0, unique: true });
        let undecided = decided
            .filter(|x| x.state == DecideState::Undecided)
            .map(|x| x.pair);

        undecided_sizes.push(undecided.size());
        discarded_sizes.push(done.size());
        emit(&mut trace, || {
            format!(
                "k={k} undecided={} carried={} discarded={}",
                undecided.size(),
                carried.size(),
                done.size()
            )
        });

        if undecided.is_empty() {
            // Every entry of this iteration's working set was unique, so the
            // retire rule (both predecessors unique) fired for all of them.
            assert_eq!(done.size(), n, "done pile must hold every suffix");
            assert!(carried.is_empty());
            let sa: Vec<Index> = done.sort(|a, b| a.r < b.r).map(|x| x.i).to_vec();
            emit(&mut trace, || format!("result={}", seq(sa.iter(), |i| i.to_string())));
            return DiscardRun {
                sa: SuffixArray::new(sa),
                iterations: k,
                undecided_sizes,
                discarded_sizes,
            };
        }

        // The shared-name groups stay whole under classification, so the
        // undecided set is never a single orphan entry.
        debug_assert!(undecided.size() >= 2);
        let regrouped = undecided.sort(|a, b| (a.r0, a.r1) < (b.r0, b.r1));
        names = name_discarding(&regrouped);
        emit(&mut trace, || {
            format!("k={k} N={}", seq(names.iter(), |x| format!("({},{})", x.i, x.r)))
        });
    }
    unreachable!("doubling with discarding resolves within ceil(log2 n) iterations");
}

// ---------------------------------------------------------------------------
// Quadrupling variant
// ---------------------------------------------------------------------------

/// Quadrupling refinement: reorders names by `(i mod 4^k, i div 4^k)` and
/// gathers the three successor names from a width-4 window. Each slot is
/// filled only when the window entry really is the successor at the required
/// distance (entries from the next residue class can never collide with a
/// required distance, so per-slot position checks are exact).
fn refine_quadrupling(
    names: &Dia<IdxName>,
    k: u32,
    mut trace: Option<&mut Trace>,
) -> Dia<NameQuad> {
    let d = 1u64 << (2 * k);
    let reordered = names.sort(|a, b| (a.i % d, a.i / d) < (b.i % d, b.i / d));
    emit(&mut trace, || {
        format!("k={k} N={}", seq(reordered.iter(), |x| format!("({},{})", x.i, x.r)))
    });
    let quads = reordered.window(4, move |_, w| {
        let slot = |m: u64| {
            let entry = w[m as usize];
            if w[0].i + m * d == entry.i {
                Some(entry.r)
            } else {
                None
            }
        };
        NameQuad { i: w[0].i, r0: w[0].r, rs: [slot(1), slot(2), slot(3)] }
    });
    emit(&mut trace, || format!("k={k} S={}", seq(quads.iter(), |x| x.render())));
    quads
}

/// Prefix quadrupling: doubling with radix 4. Each naming pass covers depth
/// `4^k`, so the iteration count is halved at the cost of wider tuples.
///
/// ```
/// use saca::pd::pd_quadrupling_run;
/// use saca::text::Text;
///
/// let run = pd_quadrupling_run(&Text::from_str_lossy("bdacbdacb"), 3, None);
/// assert_eq!(run.sa.as_slice(), &[6, 2, 8, 4, 0, 7, 3, 5, 1]);
/// assert_eq!(run.iterations, 2);
/// ```
pub fn pd_quadrupling_run(text: &Text, shards: usize, mut trace: Option<&mut Trace>) -> PdRun {
    let n = text.len() as u64;
    if n <= 1 {
        return PdRun {
            sa: SuffixArray::new((0..n).collect()),
            iterations: 0,
            zero_counts: Vec::new(),
        };
    }

    let t = Dia::from_vec(text.as_bytes().to_vec(), shards);
    emit(&mut trace, || {
        format!("T={}", seq(text.as_bytes().iter(), |c| sym(*c as u64)))
    });
    let seed: Dia<CharQuad> = t.window(4, |i, w| CharQuad { i, c: [w[0], w[1], w[2], w[3]] });
    emit(&mut trace, || format!("S={}", seq(seed.iter(), |x| x.render())));

    let kmax = ceil_log4(n).max(1);
    let mut zero_counts = Vec::new();

    let mut quads: Dia<NameQuad> =
        match naming_step(&seed, 1, &mut zero_counts, &mut trace) {
            NamingStep::Done(sa) => return finish_pd(sa, 1, zero_counts, &mut trace),
            NamingStep::Continue(names) => refine_quadrupling(&names, 1, trace.as_deref_mut()),
        };
    for k in 2..=kmax {
        match naming_step(&quads, k, &mut zero_counts, &mut trace) {
            NamingStep::Done(sa) => return finish_pd(sa, k, zero_counts, &mut trace),
            NamingStep::Continue(names) => {
                quads = refine_quadrupling(&names, k, trace.as_deref_mut());
            }
        }
    }
    unreachable!("naming at depth 4^ceil(log4 n) separates all suffixes");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Text;
    use crate::verify::{check_suffix_array, naive_rank_names, oracle_suffix_sort};

    fn t(s: &str) -> Text {
        Text::from_str_lossy(s)
    }

    const REFERENCE_TEXTS: [&str; 12] = [
        "bdacbdacb",
        "dbacbacbd",
        "banana",
        "mississippi",
        "abracadabra",
        "abab",
        "aaa",
        "aaaaaaaaaaaaaaaa",
        "abababababab",
        "ba",
        "z",
        "yabbadabbado",
    ];

    #[test]
    fn all_variants_match_oracle_on_reference_texts() {
        for s in REFERENCE_TEXTS {
            let text = t(s);
            let expected = oracle_suffix_sort(&text);
            for shards in [1, 3] {
                assert_eq!(
                    pd_sorting_run(&text, shards, None).sa,
                    expected,
                    "pd-sort {s:?} p={shards}"
                );
                assert_eq!(
                    pd_isa_run(&text, shards, None).sa,
                    expected,
                    "pd-isa {s:?} p={shards}"
                );
                assert_eq!(
                    pd_discarding_run(&text, shards, None).sa,
                    expected,
                    "pd-discard {s:?} p={shards}"
                );
                assert_eq!(
                    pd_quadrupling_run(&text, shards, None).sa,
                    expected,
                    "pq {s:?} p={shards}"
                );
            }
        }
    }

    #[test]
    fn degenerate_inputs() {
        for s in ["", "q"] {
            let text = t(s);
            let expected = oracle_suffix_sort(&text);
            assert_eq!(pd_sorting_run(&text, 4, None).sa, expected);
            assert_eq!(pd_isa_run(&text, 4, None).sa, expected);
            assert_eq!(pd_discarding_run(&text, 4, None).sa, expected);
            assert_eq!(pd_quadrupling_run(&text, 4, None).sa, expected);
        }
    }

    #[test]
    fn repeated_name_zero_and_absent_successor_stay_distinct() {
        // "abab": suffix 0 pairs with a real name 0 at distance 2, while
        // suffix 2's comparison window ends within the text. If the absent
        // marker collapsed into name 0 the two suffixes could never separate.
        for s in ["abab", "cdcd", "ababab", "xyxyxyxy"] {
            let text = t(s);
            let expected = oracle_suffix_sort(&text);
            assert_eq!(pd_sorting_run(&text, 2, None).sa, expected, "{s:?}");
            assert_eq!(pd_isa_run(&text, 2, None).sa, expected, "{s:?}");
            assert_eq!(pd_discarding_run(&text, 2, None).sa, expected, "{s:?}");
        }
    }

    #[test]
    fn iteration_bounds_hold() {
        for s in REFERENCE_TEXTS {
            let text = t(s);
            let n = text.len() as u64;
            if n <= 1 {
                continue;
            }
            assert!(pd_sorting_run(&text, 3, None).iterations <= ceil_log2(n));
            assert!(pd_isa_run(&text, 3, None).iterations <= ceil_log2(n));
            assert!(pd_discarding_run(&text, 3, None).iterations <= ceil_log2(n));
            assert!(pd_quadrupling_run(&text, 3, None).iterations <= ceil_log4(n) + 1);
        }
    }

    #[test]
    fn names_after_each_iteration_match_naive_depth_names() {
        // The doubling invariant: after the naming pass of iteration k, the
        // (index, name) pairs equal brute-force naming at depth 2^k — as a
        // mapping (the array order may interleave runs differently).
        let as_map = |mut v: Vec<(u64, u64)>| {
            v.sort();
            v
        };
        for s in ["bdacbdacb", "mississippi", "abababababab"] {
            let text = t(s);
            let mut trace = Trace::new();
            pd_sorting_run(&text, 3, Some(&mut trace));
            // Collect the propagated N lines: the second `k=<k> N=` line per
            // iteration (the first is pre-propagation, the third reordered).
            let mut per_iter: Vec<Vec<Vec<(u64, u64)>>> = Vec::new();
            for line in trace.lines() {
                if let Some(rest) = line.strip_prefix("k=") {
                    let (k_str, tail) = rest.split_once(' ').unwrap();
                    let k: usize = k_str.parse().unwrap();
                    if per_iter.len() < k {
                        per_iter.resize(k, Vec::new());
                    }
                    if let Some(body) = tail.strip_prefix("N=") {
                        per_iter[k - 1].push(parse_pairs(body));
                    }
                }
            }
            for (k0, lines) in per_iter.iter().enumerate() {
                if lines.len() < 2 {
                    continue; // final iteration: naming terminated
                }
                let depth = 1usize << (k0 + 1);
                assert_eq!(
                    as_map(lines[1].clone()),
                    as_map(naive_rank_names(&text, depth)),
                    "text {s:?}, iteration {}",
                    k0 + 1
                );
            }
        }
    }

    fn parse_pairs(body: &str) -> Vec<(u64, u64)> {
        body.trim_start_matches('[')
            .trim_end_matches(']')
            .split("),(")
            .filter(|s| !s.is_empty())
            .map(|s| {
                let s = s.trim_start_matches('(').trim_end_matches(')');
                let (a, b) = s.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn discarding_progress_on_adversarial_families() {
        for s in ["aaaaaaaaaaaaaaa", "abababababababab", "aaaaaaaaaaaaaaaa"] {
            let text = t(s);
            let run = pd_discarding_run(&text, 3, None);
            assert_eq!(run.sa, oracle_suffix_sort(&text), "{s:?}");
            for w in run.undecided_sizes.windows(2) {
                assert!(w[1] < w[0], "undecided sizes must strictly decrease: {s:?}");
            }
            assert_eq!(*run.undecided_sizes.last().unwrap(), 0);
            assert_eq!(*run.discarded_sizes.last().unwrap(), text.len() as u64);
            for w in run.discarded_sizes.windows(2) {
                assert!(w[1] >= w[0]);
            }
        }
    }

    #[test]
    fn results_are_checkable() {
        for s in REFERENCE_TEXTS {
            let text = t(s);
            assert!(check_suffix_array(&text, &pd_sorting_run(&text, 2, None).sa).is_ok());
            assert!(check_suffix_array(&text, &pd_quadrupling_run(&text, 2, None).sa).is_ok());
        }
    }
}
