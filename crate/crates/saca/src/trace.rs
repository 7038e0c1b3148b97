//! Line-oriented capture of algorithm intermediates.
//!
//! Every algorithm accepts an optional [`Trace`] and, when given one, records
//! each named intermediate array exactly as it exists in the dataflow —
//! sorted tuples, naming arrays, per-iteration counts. The golden tests pin
//! these lines verbatim, and the CLI writes them next to the output file, so
//! the format is part of the crate's interface:
//!
//! ```text
//! T=[b,d,a,c,b,d,a,c,b]
//! k=1 S=[(2,a,c),(6,a,c),...]
//! k=1 N=[(2,0),(6,0),...]
//! k=1 rank0=4
//! result=[6,2,8,4,0,7,3,5,1]
//! ```
//!
//! Characters print as themselves, the end-of-text sentinel as `$`, and an
//! absent successor name as `0` (it orders below every real name, exactly
//! like the sentinel it stands for).

use std::io::{self, Write};

/// An in-memory list of trace lines.
#[derive(Debug, Default, Clone)]
pub struct Trace {
    lines: Vec<String>,
}

impl Trace {
    /// An empty trace.
    pub fn new() -> Self {
        Trace::default()
    }

    /// Appends one line.
    pub fn push(&mut self, line: String) {
        self.lines.push(line);
    }

    /// All recorded lines in emission order.
    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    /// Renders the trace as one string with trailing newline per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    /// Writes the trace to `w`, one line per record.
    pub fn write_to(&self, w: &mut impl Write) -> io::Result<()> {
        for l in &self.lines {
            writeln!(w, "{l}")?;
        }
        Ok(())
    }
}

/// Appends a lazily formatted line when tracing is enabled. Keeping the
/// formatting behind a closure means disabled traces cost nothing.
pub(crate) fn emit(trace: &mut Option<&mut Trace>, line: impl FnOnce() -> String) {
    if let Some(t) = trace.as_deref_mut() {
        t.push(line());
    }
}

/// Formats a symbol for traces: `$` for the sentinel 0, the character itself
/// for printable bytes, and the decimal value otherwise (reduced-text symbols
/// are numeric names).
pub(crate) fn sym(c: u64) -> String {
    if c == 0 {
        "$".to_string()
    } else if c <= 255 && (c as u8).is_ascii_graphic() {
        (c as u8 as char).to_string()
    } else {
        c.to_string()
    }
}

/// Formats an optional successor name: `0` when absent (the sentinel it
/// denotes), the name itself otherwise.
pub(crate) fn opt_name(r: Option<u64>) -> String {
    match r {
        None => "0".to_string(),
        Some(v) => v.to_string(),
    }
}

/// Formats a sequence as `[a,b,c]` using the given item formatter.
pub(crate) fn seq<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> String) -> String {
    let mut out = String::from("[");
    for (i, x) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&f(x));
    }
    out.push(']');
    out
}
