//! Plain-text file formats.
//!
//! SDS records, one per line:
//!
//! ```text
//! # comment
//! (7;3,1;1) [0,1,3] [0]
//! (3;1,0;0) [0] []
//! ```
//!
//! Whitespace between tokens is ignored. Blocks must be listed in strictly
//! ascending order and there must be exactly one block per block size.
//!
//! Design matrices: a header line `DO <order>` followed by `order` rows of
//! `+` and `-` characters. A file may hold several matrices.

use std::fmt::Write as _;

use crate::designmat::DesignMatrix;
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::sds::Sds;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, want: u8) -> std::result::Result<(), String> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(format!(
                "expected '{}' at column {}, found '{}'",
                want as char,
                self.pos + 1,
                c as char
            )),
            None => Err(format!("expected '{}', found end of line", want as char)),
        }
    }

    fn number(&mut self) -> std::result::Result<u32, String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(format!("expected a number at column {}", start + 1));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|e| format!("bad number at column {}: {e}", start + 1))
    }

    /// `n (',' n)*` up to but not including `close`.
    fn list(&mut self, close: u8) -> std::result::Result<Vec<u32>, String> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.peek() == Some(b',') {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }
}

fn parse_record_inner(text: &str) -> std::result::Result<Sds, String> {
    let mut cur = Cursor::new(text);
    cur.expect(b'(')?;
    let v = cur.number()?;
    cur.expect(b';')?;
    let sizes = cur.list(b';')?;
    if sizes.is_empty() {
        return Err("parameter set needs at least one block size".into());
    }
    cur.expect(b';')?;
    let lambda = cur.number()?;
    cur.expect(b')')?;
    let mut blocks = Vec::new();
    while cur.peek().is_some() {
        cur.expect(b'[')?;
        let block = cur.list(b']')?;
        cur.expect(b']')?;
        if block.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!(
                "block {} is not strictly ascending",
                blocks.len() + 1
            ));
        }
        blocks.push(block);
    }
    if blocks.len() != sizes.len() {
        return Err(format!(
            "expected {} blocks, found {}",
            sizes.len(),
            blocks.len()
        ));
    }
    Sds::new(ParameterSet::new(v, sizes, lambda), blocks).map_err(|e| e.to_string())
}

/// Parse a single record. `line` is used only for error messages.
pub fn parse_sds_record(text: &str, line: usize) -> Result<Sds> {
    parse_record_inner(text).map_err(|message| Error::Parse { line, message })
}

pub fn format_sds_record(sds: &Sds) -> String {
    let mut out = sds.params().to_string();
    for block in sds.blocks() {
        out.push_str(" [");
        for (i, e) in block.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{e}").expect("write to string");
        }
        out.push(']');
    }
    out
}

/// All records in a file with their 1-based line numbers. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_sds_file(text: &str) -> Result<Vec<(usize, Sds)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_sds_record(l, i + 1).map(|s| (i + 1, s)))
        .collect()
}

pub fn format_matrix(design: &DesignMatrix) -> String {
    let mut out = format!("DO {}\n", design.order());
    for row in design.rows() {
        out.extend(row.iter().map(|&e| if e > 0 { '+' } else { '-' }));
        out.push('\n');
    }
    out
}

/// Parse every matrix in a file. Blank lines between matrices are allowed.
pub fn parse_matrix_file(text: &str) -> Result<Vec<DesignMatrix>> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    let err = |line: usize, message: String| Error::Parse {
        line: line + 1,
        message,
    };
    while let Some((i, header)) = lines.next() {
        let header = header.trim();
        if header.is_empty() {
            continue;
        }
        let order: usize = header
            .strip_prefix("DO")
            .map(str::trim)
            .and_then(|n| n.parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| err(i, format!("expected header 'DO <order>', found '{header}'")))?;
        let mut rows = Vec::with_capacity(order);
        for _ in 0..order {
            let (j, row) = lines
                .next()
                .ok_or_else(|| err(i, format!("matrix truncated after {} rows", rows.len())))?;
            let row: Vec<i8> = row
                .trim()
                .chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    other => Err(err(j, format!("unexpected character '{other}'"))),
                })
                .collect::<Result<_>>()?;
            if row.len() != order {
                return Err(err(
                    j,
                    format!("row has {} entries, expected {order}", row.len()),
                ));
            }
            rows.push(row);
        }
        out.push(DesignMatrix::from_rows(rows).map_err(|e| err(i, e.to_string()))?);
    }
    Ok(out)
}
