//! Core value types shared by every algorithm in this crate: input texts,
//! suffix arrays, and the index/name vocabulary.
//!
//! # Conventions
//!
//! * Positions and names are `u64` throughout, so texts larger than 4 GiB
//!   remain addressable without a type change.
//! * A [`Text`] holds bytes from the alphabet `1..=255`. Byte `0` is reserved
//!   as the virtual end-of-text symbol `$`, which compares below every real
//!   symbol; keeping it out of the input makes the padded-window trick used by
//!   the dataflow algorithms sound (a `0` inside a window is always padding,
//!   never data).
//! * A [`SuffixArray`] lists suffix start positions in increasing
//!   lexicographic order of the suffixes.

use std::fmt;

use thiserror::Error;

/// A position into a text (or into a derived sequence).
pub type Index = u64;

/// A lexicographic name, also called a rank: the number of strictly smaller
/// keys in the sequence under consideration. Names of partially sorted data
/// are "run starts" — every element of a tied run carries the run's first
/// position.
pub type Name = u64;

/// An inverse-permutation view: `Isa[i]` is the rank of suffix `i`. Produced
/// by [`SuffixArray::inverse`].
pub type Isa = Vec<Name>;

/// Error raised when constructing a [`Text`] from raw bytes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    /// The input contained the reserved byte `0` at the given offset.
    #[error("input contains reserved byte 0 at offset {0}; the alphabet is 1..=255")]
    ZeroByte(usize),
}

/// An input text over the byte alphabet `1..=255`.
///
/// ```
/// use saca::text::Text;
///
/// let t = Text::from_bytes(b"banana".to_vec()).unwrap();
/// assert_eq!(t.len(), 6);
/// assert_eq!(t.suffix(4), b"na");
///
/// // Byte 0 is reserved for the virtual end-of-text symbol.
/// assert!(Text::from_bytes(vec![b'a', 0, b'b']).is_err());
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    bytes: Vec<u8>,
}

impl Text {
    /// Validates and wraps raw bytes. Returns an error identifying the first
    /// offending offset if any byte is `0`.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self, TextError> {
        if let Some(pos) = bytes.iter().position(|&b| b == 0) {
            return Err(TextError::ZeroByte(pos));
        }
        Ok(Text { bytes })
    }

    /// Convenience constructor for tests and examples; panics on byte `0`.
    pub fn from_str_lossy(s: &str) -> Self {
        Text::from_bytes(s.as_bytes().to_vec()).expect("literal text must not contain byte 0")
    }

    /// The underlying bytes.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Number of characters (and therefore suffixes).
    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    /// True for the empty text, whose suffix array is empty.
    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    /// The suffix starting at position `i` as a byte slice.
    ///
    /// Because no real byte is `0`, plain slice comparison of two suffixes is
    /// exactly the `$`-terminated lexicographic order: when one suffix is a
    /// proper prefix of another, the shorter (ending at `$`) sorts first.
    pub fn suffix(&self, i: usize) -> &[u8] {
        &self.bytes[i..]
    }
}

impl fmt::Display for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bytes {
            if b.is_ascii_graphic() || b == b' ' {
                write!(f, "{}", b as char)?;
            } else {
                write!(f, "<{b:02x}>")?;
            }
        }
        Ok(())
    }
}

/// A suffix array: the starting positions of all suffixes of a text, listed
/// in increasing lexicographic order of the suffixes.
///
/// ```
/// use saca::text::SuffixArray;
///
/// let sa = SuffixArray::new(vec![5, 3, 1, 0, 4, 2]);
/// assert_eq!(sa.len(), 6);
/// assert_eq!(sa.as_slice()[0], 5);
/// assert_eq!(sa.inverse(), vec![3, 2, 5, 1, 4, 0]);
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixArray {
    order: Vec<Index>,
}

impl SuffixArray {
    /// Wraps a position vector. No validation is performed here; use
    /// [`crate::verify::check_suffix_array`] to validate against a text.
    pub fn new(order: Vec<Index>) -> Self {
        SuffixArray { order }
    }

    /// The positions in lexicographic suffix order.
    pub fn as_slice(&self) -> &[Index] {
        &self.order
    }

    /// Consumes the array, returning the position vector.
    pub fn into_vec(self) -> Vec<Index> {
        self.order
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    /// True when the array holds no entries (empty text).
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The inverse permutation: `inverse()[i]` is the rank of suffix `i`.
    /// Meaningful only when the array is a permutation of `0..len`.
    pub fn inverse(&self) -> Isa {
        let mut isa = vec![0 as Name; self.order.len()];
        for (rank, &pos) in self.order.iter().enumerate() {
            isa[pos as usize] = rank as Name;
        }
        isa
    }
}

/// Smallest `k` with `2^k >= n`, i.e. `ceil(log2 n)`; `0` for `n <= 1`.
/// The doubling algorithms never need more than this many naming passes:
/// after the pass at iteration `k`, names distinguish suffixes by their first
/// `2^k` characters, and depth `n` distinguishes every pair.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Smallest `k` with `4^k >= n`, i.e. `ceil(log4 n)`; `0` for `n <= 1`.
pub fn ceil_log4(n: u64) -> u32 {
    ceil_log2(n).div_ceil(2)
}
