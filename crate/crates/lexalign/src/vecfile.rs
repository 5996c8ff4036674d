//! Text vector format used by word2vec and fastText `.vec` files.
//!
//! ```text
//! n d
//! token v1 v2 ... vd
//! ```
//!
//! ASCII space is the only separator. Trailing spaces and `\r` are ignored,
//! since pretrained fastText files end every row with a space. The final
//! newline is optional. Lines after the `n` declared rows are not read.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use lexalign_core::embedding::is_valid_token;
use lexalign_core::{Embedding, Matrix, Vocab};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: usize = 4;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VecOptions {
    /// Keep only the first `max_vocab` unique tokens.
    pub max_vocab: Option<usize>,
    pub expected_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEmbedding {
    pub embedding: Embedding,
    /// Rows skipped because their token was already seen.
    pub duplicates: usize,
    /// Row count from the header.
    pub declared_rows: usize,
    /// True when the file ended before the declared number of rows.
    pub truncated: bool,
}

/// Reads one line without its terminator; `None` at end of input.
pub(crate) fn read_line<R: BufRead>(reader: &mut R, buf: &mut Vec<u8>, line: usize) -> Result<Option<String>> {
    buf.clear();
    let n = reader.read_until(b'\n', buf).map_err(|e| Error::io(format!("reading line {line}"), e))?;
    if n == 0 {
        return Ok(None);
    }
    while matches!(buf.last(), Some(b'\n' | b'\r')) {
        buf.pop();
    }
    match std::str::from_utf8(buf) {
        Ok(s) => Ok(Some(s.to_owned())),
        Err(_) => Err(Error::InvalidUtf8 { line }),
    }
}

fn parse_header(line: Option<String>) -> Result<(usize, usize)> {
    let line = line.unwrap_or_default();
    let fields: Vec<&str> = line.trim_end_matches(' ').split(' ').collect();
    let positive = |s: &str| s.parse::<usize>().ok().filter(|&v| v > 0);
    match fields.as_slice() {
        [n, d] => match (positive(n), positive(d)) {
            (Some(n), Some(d)) => Ok((n, d)),
            _ => Err(Error::MalformedHeader { found: line.clone() }),
        },
        _ => Err(Error::MalformedHeader { found: line.clone() }),
    }
}

pub fn parse_vec<R: BufRead>(mut reader: R, opts: VecOptions) -> Result<ParsedEmbedding> {
    let mut buf = Vec::new();
    let (declared, dim) = parse_header(read_line(&mut reader, &mut buf, 1)?)?;
    if let Some(expected) = opts.expected_dim {
        if expected != dim {
            return Err(Error::DimensionMismatch { line: 1, expected, found: dim });
        }
    }
    let limit = opts.max_vocab.unwrap_or(usize::MAX);

    let mut tokens = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut duplicates = 0;
    let mut data_lines = 0;
    while data_lines < declared && tokens.len() < limit {
        let line_no = data_lines + 2;
        let Some(line) = read_line(&mut reader, &mut buf, line_no)? else {
            break;
        };
        data_lines += 1;
        let mut fields = line.trim_end_matches(' ').split(' ');
        let token = fields.next().unwrap_or_default();
        if token.is_empty() {
            return Err(Error::EmptyToken { line: line_no });
        }
        if !is_valid_token(token) {
            return Err(Error::InvalidToken { line: line_no, token: token.into() });
        }
        let start = values.len();
        let mut count = 0;
        for field in fields {
            count += 1;
            if count > dim {
                continue;
            }
            let v: f64 = field.parse().map_err(|_| Error::NonNumericValue { line: line_no, value: field.into() })?;
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { line: line_no, value: field.into() });
            }
            values.push(v);
        }
        if count != dim {
            return Err(Error::DimensionMismatch { line: line_no, expected: dim, found: count });
        }
        if !seen.contains(token) {
            seen.insert(token.to_owned());
            tokens.push(token.to_owned());
        } else {
            values.truncate(start);
            duplicates += 1;
        }
    }
    let truncated = data_lines < declared && tokens.len() < limit;
    if tokens.is_empty() {
        return Err(Error::TruncatedFile { declared });
    }
    let matrix = Matrix::from_vec(tokens.len(), dim, values)?;
    let embedding = Embedding::new(Vocab::new(tokens)?, matrix)?;
    Ok(ParsedEmbedding { embedding, duplicates, declared_rows: declared, truncated })
}

pub fn load_vec(path: &Path, opts: VecOptions) -> Result<ParsedEmbedding> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    parse_vec(BufReader::new(file), opts)
}

/// Writes `n d`, then one `token v1 ... vd` line per row with `precision`
/// decimal places.
pub fn write_vec<W: Write>(embedding: &Embedding, mut sink: W, precision: usize) -> Result<()> {
    let io = |e| Error::io("writing embedding", e);
    writeln!(sink, "{} {}", embedding.len(), embedding.dim()).map_err(io)?;
    for (token, row) in embedding.vocab().tokens().iter().zip(embedding.matrix().row_iter()) {
        sink.write_all(token.as_bytes()).map_err(io)?;
        for v in row {
            write!(sink, " {v:.precision$}").map_err(io)?;
        }
        sink.write_all(b"\n").map_err(io)?;
    }
    sink.flush().map_err(io)
}
