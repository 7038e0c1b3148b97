//! Reference implementations and independent checkers.
//!
//! Everything in this module is deliberately simple and slow: these functions
//! define *what the right answer is*, and the production algorithms are tested
//! against them. None of them share code with the dataflow pipelines.

use thiserror::Error;

use crate::text::{Index, Name, SuffixArray, Text};

/// Brute-force suffix sorting by direct suffix comparison.
///
/// `O(n^2 log n)` worst case, but byte-slice comparison compiles to `memcmp`,
/// so it is comfortably fast at test scale. This is the ground truth every
/// other algorithm is measured against.
///
/// ```
/// use saca::text::Text;
/// use saca::verify::oracle_suffix_sort;
///
/// let sa = oracle_suffix_sort(&Text::from_str_lossy("banana"));
/// assert_eq!(sa.as_slice(), &[5, 3, 1, 0, 4, 2]);
/// ```
pub fn oracle_suffix_sort(text: &Text) -> SuffixArray {
    SuffixArray::new(oracle_suffix_sort_symbols(text.as_bytes()))
}

/// The same brute-force sort over an arbitrary ordered symbol type.
///
/// Used directly by the difference-cover recursion, whose reduced texts have
/// `u64` symbols. Shorter-is-prefix ties resolve in favor of the shorter
/// suffix, which is the `$`-terminated order as long as no real symbol equals
/// the minimum (the crate-wide sentinel convention).
pub fn oracle_suffix_sort_symbols<S: Ord>(text: &[S]) -> Vec<Index> {
    let mut order: Vec<Index> = (0..text.len() as Index).collect();
    order.sort_by(|&a, &b| text[a as usize..].cmp(&text[b as usize..]));
    order
}

/// Which comparison clause an adjacent suffix pair violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolatedClause {
    /// The first bytes of the two suffixes are already out of order.
    FirstByte,
    /// First bytes tie, but the successor suffixes' ranks are out of order
    /// (treating the empty suffix as smaller than everything).
    NextRank,
}

/// Why a candidate suffix array was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaCheckError {
    /// The array length does not match the text length.
    #[error("array has {sa_len} entries but the text has {text_len} suffixes")]
    LengthMismatch { text_len: u64, sa_len: u64 },
    /// The array is not a permutation of `0..n`; `position` is the first
    /// entry that is out of range or a repeat of an earlier entry.
    #[error("entry {value} at position {position} is out of range or repeated")]
    NotPermutation { position: u64, value: u64 },
    /// Adjacent suffixes at `position` and `position + 1` are out of order.
    #[error("suffixes at positions {position} and {} are out of order ({clause:?})", position + 1)]
    OrderViolation {
        position: u64,
        clause: ViolatedClause,
    },
}

/// Validates a suffix array against a text without re-sorting.
///
/// Accepts exactly the arrays that are (a) a permutation of `0..n` and
/// (b) ordered: for every adjacent pair the suffix at `sa[k]` is
/// lexicographically smaller than the suffix at `sa[k+1]`. The order test
/// runs in linear time using the inverse permutation: for `a = sa[k]`,
/// `b = sa[k+1]`, suffix order holds iff `text[a] < text[b]`, or
/// `text[a] == text[b]` and suffix `a+1` precedes suffix `b+1` — where the
/// empty suffix precedes everything. Given (a), ranks of the successor
/// suffixes decide that recursive comparison in O(1), and induction from the
/// shortest suffixes upward shows the clause is equivalent to full
/// lexicographic comparison.
///
/// The first violated position and the failing clause are reported.
///
/// ```
/// use saca::text::{SuffixArray, Text};
/// use saca::verify::{check_suffix_array, SaCheckError, ViolatedClause};
///
/// let t = Text::from_str_lossy("banana");
/// assert!(check_suffix_array(&t, &SuffixArray::new(vec![5, 3, 1, 0, 4, 2])).is_ok());
///
/// // Swapping two entries is caught, with the first offending position.
/// let bad = SuffixArray::new(vec![3, 5, 1, 0, 4, 2]);
/// assert_eq!(
///     check_suffix_array(&t, &bad),
///     Err(SaCheckError::OrderViolation {
///         position: 0,
///         clause: ViolatedClause::NextRank,
///     })
/// );
/// ```
pub fn check_suffix_array(text: &Text, sa: &SuffixArray) -> Result<(), SaCheckError> {
    let n = text.len();
    if sa.len() != n {
        return Err(SaCheckError::LengthMismatch {
            text_len: n as u64,
            sa_len: sa.len() as u64,
        });
    }

    let order = sa.as_slice();
    let mut seen = vec![false; n];
    for (position, &value) in order.iter().enumerate() {
        if value >= n as u64 || seen[value as usize] {
            return Err(SaCheckError::NotPermutation {
                position: position as u64,
                value,
            });
        }
        seen[value as usize] = true;
    }

    let bytes = text.as_bytes();
    let isa = sa.inverse();
    for k in 0..n.saturating_sub(1) {
        let a = order[k] as usize;
        let b = order[k + 1] as usize;
        let (ca, cb) = (bytes[a], bytes[b]);
        if ca < cb {
            continue;
        }
        if ca > cb {
            return Err(SaCheckError::OrderViolation {
                position: k as u64,
                clause: ViolatedClause::FirstByte,
            });
        }
        // Equal first bytes: compare successor suffixes by rank, treating the
        // empty suffix (position n) as smaller than every nonempty suffix.
        let ok = match (a + 1 == n, b + 1 == n) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => unreachable!("a and b are distinct"),
            (false, false) => isa[a + 1] < isa[b + 1],
        };
        if !ok {
            return Err(SaCheckError::OrderViolation {
                position: k as u64,
                clause: ViolatedClause::NextRank,
            });
        }
    }
    Ok(())
}

/// Brute-force prefix naming: ranks every suffix by its depth-`depth` prefix.
///
/// Returns `(index, name)` pairs in prefix order (ties by index), where a
/// suffix's name is the position of the first suffix with the same
/// depth-limited prefix — the "run start" naming the doubling algorithms
/// produce after their naming pass. Prefixes shorter than `depth` (suffixes
/// near the end of the text) sort below any extension, matching `$`-padding.
///
/// ```
/// use saca::verify::naive_rank_names;
/// use saca::text::Text;
///
/// let t = Text::from_str_lossy("bdacbdacb");
/// assert_eq!(
///     naive_rank_names(&t, 2),
///     vec![(2, 0), (6, 0), (8, 2), (0, 3), (4, 3), (3, 5), (7, 5), (1, 7), (5, 7)],
/// );
/// ```
pub fn naive_rank_names(text: &Text, depth: usize) -> Vec<(Index, Name)> {
    let bytes = text.as_bytes();
    let n = bytes.len();
    let prefix = |i: usize| &bytes[i..(i + depth).min(n)];

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| prefix(a).cmp(prefix(b)).then(a.cmp(&b)));

    let mut out = Vec::with_capacity(n);
    let mut run_start = 0usize;
    for (pos, &i) in order.iter().enumerate() {
        if pos > 0 && prefix(order[pos - 1]) != prefix(i) {
            run_start = pos;
        }
        out.push((i as Index, run_start as Name));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Text {
        Text::from_str_lossy(s)
    }

    #[test]
    fn oracle_on_classic_texts() {
        assert_eq!(oracle_suffix_sort(&t("banana")).as_slice(), &[5, 3, 1, 0, 4, 2]);
        assert_eq!(
            oracle_suffix_sort(&t("abracadabra")).as_slice(),
            &[10, 7, 0, 3, 5, 8, 1, 4, 6, 9, 2]
        );
        assert_eq!(oracle_suffix_sort(&t("aaaa")).as_slice(), &[3, 2, 1, 0]);
        assert_eq!(oracle_suffix_sort(&t("a")).as_slice(), &[0]);
        assert_eq!(oracle_suffix_sort(&t("")).as_slice(), &[] as &[u64]);
        // The reference text used throughout the doubling examples.
        assert_eq!(
            oracle_suffix_sort(&t("bdacbdacb")).as_slice(),
            &[6, 2, 8, 4, 0, 7, 3, 5, 1]
        );
        // The reference text used by the difference-cover examples.
        assert_eq!(
            oracle_suffix_sort(&t("dbacbacbd")).as_slice(),
            &[2, 5, 1, 4, 7, 3, 6, 8, 0]
        );
    }

    #[test]
    fn oracle_generic_symbols_match_bytes() {
        let text = t("mississippi");
        let as_u64: Vec<u64> = text.as_bytes().iter().map(|&b| b as u64).collect();
        assert_eq!(
            oracle_suffix_sort(&text).as_slice(),
            oracle_suffix_sort_symbols(&as_u64).as_slice()
        );
    }

    #[test]
    fn checker_accepts_oracle_output() {
        for s in ["banana", "bdacbdacb", "dbacbacbd", "aaaaaaa", "abababab", "z", ""] {
            let text = t(s);
            let sa = oracle_suffix_sort(&text);
            assert_eq!(check_suffix_array(&text, &sa), Ok(()), "text {s:?}");
        }
    }

    #[test]
    fn checker_reports_length_mismatch() {
        let text = t("abc");
        let sa = SuffixArray::new(vec![2, 1]);
        assert_eq!(
            check_suffix_array(&text, &sa),
            Err(SaCheckError::LengthMismatch { text_len: 3, sa_len: 2 })
        );
    }

    #[test]
    fn checker_reports_first_non_permutation_entry() {
        let text = t("abc");
        assert_eq!(
            check_suffix_array(&text, &SuffixArray::new(vec![0, 3, 1])),
            Err(SaCheckError::NotPermutation { position: 1, value: 3 })
        );
        assert_eq!(
            check_suffix_array(&text, &SuffixArray::new(vec![2, 0, 2])),
            Err(SaCheckError::NotPermutation { position: 2, value: 2 })
        );
    }

    #[test]
    fn checker_reports_byte_and_rank_clauses() {
        let text = t("banana");
        // [5,3,1,0,4,2] is correct; move 'b' (0) before 'a' suffixes.
        assert_eq!(
            check_suffix_array(&text, &SuffixArray::new(vec![0, 3, 1, 5, 4, 2])),
            Err(SaCheckError::OrderViolation { position: 0, clause: ViolatedClause::FirstByte })
        );
        // Swap the two "na" suffixes. The rank clause reads the candidate's own
        // inverse, so the damage surfaces at the first pair whose comparison
        // depends on the swapped suffixes: ("ana", "anana") at position 1,
        // where rank[3+1] = 5 is not below rank[1+1] = 4.
        assert_eq!(
            check_suffix_array(&text, &SuffixArray::new(vec![5, 3, 1, 0, 2, 4])),
            Err(SaCheckError::OrderViolation { position: 1, clause: ViolatedClause::NextRank })
        );
    }

    #[test]
    fn checker_handles_prefix_suffix_ties() {
        // "aa": suffix 1 = "a" must precede suffix 0 = "aa".
        let text = t("aa");
        assert_eq!(check_suffix_array(&text, &SuffixArray::new(vec![1, 0])), Ok(()));
        assert_eq!(
            check_suffix_array(&text, &SuffixArray::new(vec![0, 1])),
            Err(SaCheckError::OrderViolation { position: 0, clause: ViolatedClause::NextRank })
        );
    }

    #[test]
    fn naive_names_at_doubling_depths() {
        let text = t("bdacbdacb");
        // Depth 2: matches the first naming pass of the doubling family.
        assert_eq!(
            naive_rank_names(&text, 2),
            vec![(2, 0), (6, 0), (8, 2), (0, 3), (4, 3), (3, 5), (7, 5), (1, 7), (5, 7)]
        );
        // Depth 4: matches the second naming pass.
        assert_eq!(
            naive_rank_names(&text, 4),
            vec![(6, 0), (2, 1), (8, 2), (0, 3), (4, 3), (7, 5), (3, 6), (1, 7), (5, 7)]
        );
        // Depth >= n ranks full suffixes: names become distinct and the index
        // column is the suffix array.
        let deep = naive_rank_names(&text, 16);
        let idx: Vec<u64> = deep.iter().map(|&(i, _)| i).collect();
        assert_eq!(idx, oracle_suffix_sort(&text).into_vec());
        let names: Vec<u64> = deep.iter().map(|&(_, r)| r).collect();
        assert_eq!(names, (0..9).collect::<Vec<u64>>());
    }

    #[test]
    fn naive_names_depth_one_groups_by_first_byte() {
        let text = t("banana");
        assert_eq!(
            naive_rank_names(&text, 1),
            vec![(1, 0), (3, 0), (5, 0), (0, 3), (2, 4), (4, 4)]
        );
    }
}
