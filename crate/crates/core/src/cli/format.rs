//! The `LINEMARK 1` text format.
//!
//! ```text
//! LINEMARK 1
//! k=<k> n=<n> a=<a> b=<b>
//! <k^(n-1) digits for direction 0>
//! ...
//! <k^(n-1) digits for direction n-1>
//! ```
//!
//! Digits are separated by single spaces and listed by ascending base index;
//! every line ends in `\n`.

use std::fmt::{self, Write as _};

use crate::feasibility::Params;
use crate::grid::{Marking, Shape, DEFAULT_CELL_CAP};

pub const MAGIC: &str = "LINEMARK 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkingFile {
    pub a: usize,
    pub b: usize,
    pub marking: Marking,
}

impl MarkingFile {
    pub fn params(&self) -> Params {
        Params {
            k: self.marking.k(),
            n: self.marking.n(),
            a: self.a,
            b: self.b,
        }
    }
}

/// Position is 1-based; `column` points at the offending character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

pub fn render(file: &MarkingFile) -> String {
    let m = &file.marking;
    let per_dir = m.shape().lines_per_dir() as usize;
    let mut out = String::with_capacity(32 + m.marks().len() * 2);
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "k={} n={} a={} b={}", m.k(), m.n(), file.a, file.b);
    for row in m.marks().chunks(per_dir) {
        for (i, d) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{d}");
        }
        out.push('\n');
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Splits on single spaces, returning each token with its 1-based column.
fn tokens(text: &str, line: usize) -> Result<Vec<(usize, &str)>, ParseError> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in text
        .char_indices()
        .chain(std::iter::once((text.len(), ' ')))
    {
        if ch == ' ' {
            if i == start {
                return Err(err(
                    line,
                    i + 1,
                    "expected a token, found a space or end of line",
                ));
            }
            out.push((start + 1, &text[start..i]));
            start = i + 1;
        }
    }
    Ok(out)
}

fn number(tok: &str, line: usize, column: usize) -> Result<u64, ParseError> {
    if tok.is_empty() || !tok.bytes().all(|c| c.is_ascii_digit()) {
        return Err(err(
            line,
            column,
            format!("expected a decimal integer, found {tok:?}"),
        ));
    }
    if tok.len() > 1 && tok.starts_with('0') {
        return Err(err(line, column, format!("leading zero in {tok:?}")));
    }
    tok.parse()
        .map_err(|_| err(line, column, format!("integer {tok:?} is too large")))
}

fn header(text: &str) -> Result<(u64, u64, u64, u64), ParseError> {
    let toks = tokens(text, 2)?;
    let mut values = [0u64; 4];
    for (i, key) in ["k", "n", "a", "b"].iter().enumerate() {
        let Some(&(col, tok)) = toks.get(i) else {
            return Err(err(2, text.len() + 1, format!("missing field {key}=")));
        };
        let value = tok
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| err(2, col, format!("expected {key}=<int>, found {tok:?}")))?;
        values[i] = number(value, 2, col + key.len() + 1)?;
    }
    if let Some(&(col, tok)) = toks.get(4) {
        return Err(err(2, col, format!("unexpected field {tok:?}")));
    }
    Ok((values[0], values[1], values[2], values[3]))
}

pub fn parse(text: &str) -> Result<MarkingFile, ParseError> {
    parse_with_cap(text, DEFAULT_CELL_CAP)
}

pub fn parse_with_cap(text: &str, cap: u128) -> Result<MarkingFile, ParseError> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    // a well-formed file ends in '\n', leaving one empty piece
    match lines.pop() {
        Some("") => {}
        Some(last) => {
            return Err(err(
                lines.len() + 1,
                last.len() + 1,
                "missing newline at end of file",
            ));
        }
        None => unreachable!(),
    }
    if let Some((i, l)) = lines.iter().enumerate().find(|(_, l)| l.contains('\r')) {
        return Err(err(
            i + 1,
            l.find('\r').unwrap() + 1,
            "carriage return; expected LF line endings",
        ));
    }
    match lines.first() {
        Some(&MAGIC) => {}
        Some(other) => {
            let col = other
                .bytes()
                .zip(MAGIC.bytes())
                .position(|(x, y)| x != y)
                .unwrap_or(other.len().min(MAGIC.len()))
                + 1;
            return Err(err(1, col, format!("expected {MAGIC:?}")));
        }
        None => return Err(err(1, 1, "empty file")),
    }
    let Some(head) = lines.get(1) else {
        return Err(err(2, 1, "missing parameter line"));
    };
    let (k, n, a, b) = header(head)?;
    let (k, n, a, b) = match (
        u32::try_from(k),
        usize::try_from(n),
        usize::try_from(a),
        usize::try_from(b),
    ) {
        (Ok(k), Ok(n), Ok(a), Ok(b)) => (k, n, a, b),
        _ => return Err(err(2, 1, "parameter out of range")),
    };
    Params::new(k, n, a, b).map_err(|e| err(2, 1, e.to_string()))?;
    let shape = Shape::with_cap(k, n, cap).map_err(|e| err(2, 1, e.to_string()))?;

    let body = &lines[2..];
    if body.len() != n {
        let line = 2 + body.len().min(n) + 1;
        return Err(err(
            line,
            1,
            format!("expected {n} direction lines, found {}", body.len()),
        ));
    }
    let per_dir = shape.lines_per_dir() as usize;
    let mut marks = Vec::with_capacity(shape.num_lines() as usize);
    for (dir, text) in body.iter().enumerate() {
        let line = dir + 3;
        let toks = tokens(text, line)?;
        if toks.len() != per_dir {
            let col = toks.get(per_dir).map_or(text.len() + 1, |t| t.0);
            return Err(err(
                line,
                col,
                format!(
                    "expected {per_dir} digits for direction {dir}, found {}",
                    toks.len()
                ),
            ));
        }
        for (col, tok) in toks {
            let d = number(tok, line, col)?;
            if d >= k as u64 {
                return Err(err(line, col, format!("digit {d} out of range for k={k}")));
            }
            marks.push(d as u16);
        }
    }
    let marking = Marking::new(shape, marks).map_err(|e| err(3, 1, e.to_string()))?;
    Ok(MarkingFile { a, b, marking })
}
