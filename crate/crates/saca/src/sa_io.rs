//! Suffix-array file formats: newline-separated decimal text and a compact
//! binary framing.
//!
//! * **Text**: one ASCII decimal index per line, each line terminated by
//!   `\n`. Human-diffable and tool-friendly.
//! * **Binary**: the 4-byte magic `SAF1`, the entry count as a little-endian
//!   `u64`, then every index as a little-endian `u64`.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::text::{Index, SuffixArray};

/// Magic bytes opening the binary format.
pub const BINARY_MAGIC: [u8; 4] = *b"SAF1";

/// Serialization format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Binary,
}

/// Why a suffix-array file failed to parse.
#[derive(Debug, Error)]
pub enum ReadError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("bad magic {found:?}, expected {BINARY_MAGIC:?}")]
    BadMagic { found: [u8; 4] },
    #[error("file declares {declared} entries but holds {found}")]
    LengthMismatch { declared: u64, found: u64 },
    #[error("line {line} is not a decimal index: {content:?}")]
    InvalidLine { line: usize, content: String },
}

/// Writes one decimal index per line.
pub fn write_text(sa: &SuffixArray, w: &mut impl Write) -> io::Result<()> {
    for &i in sa.as_slice() {
        writeln!(w, "{i}")?;
    }
    Ok(())
}

/// Writes the binary framing: magic, count, indices (all integers `u64` LE).
pub fn write_binary(sa: &SuffixArray, w: &mut impl Write) -> io::Result<()> {
    w.write_all(&BINARY_MAGIC)?;
    w.write_all(&(sa.len() as u64).to_le_bytes())?;
    for &i in sa.as_slice() {
        w.write_all(&i.to_le_bytes())?;
    }
    Ok(())
}

/// Parses the text format.
pub fn read_text(r: &mut impl Read) -> Result<SuffixArray, ReadError> {
    let mut content = String::new();
    r.read_to_string(&mut content)?;
    let mut order = Vec::new();
    for (ln, line) in content.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: Index = trimmed.parse().map_err(|_| ReadError::InvalidLine {
            line: ln + 1,
            content: line.to_string(),
        })?;
        order.push(value);
    }
    Ok(SuffixArray::new(order))
}

/// Parses the binary format, validating magic and declared count.
pub fn read_binary(r: &mut impl Read) -> Result<SuffixArray, ReadError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != BINARY_MAGIC {
        return Err(ReadError::BadMagic { found: magic });
    }
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    let declared = u64::from_le_bytes(word);
    let mut order = Vec::new();
    loop {
        match r.read_exact(&mut word) {
            Ok(()) => order.push(u64::from_le_bytes(word)),
            Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        }
    }
    if order.len() as u64 != declared {
        return Err(ReadError::LengthMismatch { declared, found: order.len() as u64 });
    }
    Ok(SuffixArray::new(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sa(v: &[u64]) -> SuffixArray {
        SuffixArray::new(v.to_vec())
    }

    #[test]
    fn text_format_is_one_decimal_per_line() {
        let mut buf = Vec::new();
        write_text(&sa(&[2, 0, 1]), &mut buf).unwrap();
        assert_eq!(buf, b"2\n0\n1\n");
        assert_eq!(read_text(&mut buf.as_slice()).unwrap(), sa(&[2, 0, 1]));
    }

    #[test]
    fn binary_format_is_magic_count_indices() {
        let mut buf = Vec::new();
        write_binary(&sa(&[2, 0, 1]), &mut buf).unwrap();
        let mut expected = b"SAF1".to_vec();
        expected.extend(3u64.to_le_bytes());
        expected.extend(2u64.to_le_bytes());
        expected.extend(0u64.to_le_bytes());
        expected.extend(1u64.to_le_bytes());
        assert_eq!(buf, expected);
        assert_eq!(read_binary(&mut buf.as_slice()).unwrap(), sa(&[2, 0, 1]));
    }

    #[test]
    fn empty_arrays_round_trip() {
        let mut buf = Vec::new();
        write_text(&sa(&[]), &mut buf).unwrap();
        assert_eq!(buf, b"");
        assert_eq!(read_text(&mut buf.as_slice()).unwrap(), sa(&[]));

        let mut buf = Vec::new();
        write_binary(&sa(&[]), &mut buf).unwrap();
        assert_eq!(buf.len(), 12);
        assert_eq!(read_binary(&mut buf.as_slice()).unwrap(), sa(&[]));
    }

    #[test]
    fn binary_rejects_bad_magic_and_bad_counts() {
        let mut buf = Vec::new();
        write_binary(&sa(&[4, 5]), &mut buf).unwrap();
        let mut wrong = buf.clone();
        wrong[0] = b'X';
        assert!(matches!(
            read_binary(&mut wrong.as_slice()),
            Err(ReadError::BadMagic { .. })
        ));
        let mut short = buf.clone();
        short.truncate(buf.len() - 8);
        assert!(matches!(
            read_binary(&mut short.as_slice()),
            Err(ReadError::LengthMismatch { declared: 2, found: 1 })
        ));
    }

    #[test]
    fn text_rejects_garbage_lines() {
        let err = read_text(&mut b"3\nxyz\n".as_slice()).unwrap_err();
        assert!(matches!(err, ReadError::InvalidLine { line: 2, .. }));
    }
}
