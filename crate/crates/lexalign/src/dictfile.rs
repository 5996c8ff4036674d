//! Bilingual dictionary files: one `source<TAB>target` or `source target`
//! pair per line. Blank lines and lines starting with `#` are skipped.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use lexalign_core::embedding::is_valid_token;
use lexalign_core::BilingualDictionary;

use crate::error::{Error, Result};
use crate::vecfile::read_line;

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDictionary {
    pub dictionary: BilingualDictionary,
    /// Exact duplicate pairs dropped (first occurrence kept).
    pub duplicates: usize,
}

fn split_pair(line: &str) -> Option<(&str, &str)> {
    let fields: Vec<&str> = if line.contains('\t') {
        line.split('\t').map(|f| f.trim_matches(' ')).collect()
    } else {
        line.split(' ').filter(|f| !f.is_empty()).collect()
    };
    match fields.as_slice() {
        [s, t] if is_valid_token(s) && is_valid_token(t) => Some((s, t)),
        _ => None,
    }
}

pub fn parse_dictionary<R: BufRead>(mut reader: R) -> Result<ParsedDictionary> {
    let mut buf = Vec::new();
    let mut pairs = Vec::new();
    let mut line_no = 0;
    while let Some(line) = {
        line_no += 1;
        read_line(&mut reader, &mut buf, line_no)?
    } {
        let trimmed = line.trim_matches(' ');
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (s, t) = split_pair(trimmed).ok_or(Error::MalformedLine { line: line_no })?;
        pairs.push((s.to_owned(), t.to_owned()));
    }
    let (dictionary, duplicates) = BilingualDictionary::from_pairs(pairs)?;
    Ok(ParsedDictionary { dictionary, duplicates })
}

pub fn load_dictionary(path: &Path) -> Result<ParsedDictionary> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    parse_dictionary(BufReader::new(file))
}

/// Writes one `source<TAB>target` line per pair.
pub fn write_dictionary<W: Write>(dict: &BilingualDictionary, mut sink: W) -> Result<()> {
    let io = |e| Error::io("writing dictionary", e);
    for (s, t) in dict.pairs() {
        writeln!(sink, "{s}\t{t}").map_err(io)?;
    }
    sink.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<ParsedDictionary> {
        parse_dictionary(s.as_bytes())
    }

    fn pairs(p: &ParsedDictionary) -> Vec<(&str, &str)> {
        p.dictionary.pairs().iter().map(|(s, t)| (s.as_str(), t.as_str())).collect()
    }

    #[test]
    fn single_tab_pair() {
        assert_eq!(pairs(&parse("sea\tòkun\n").unwrap()), [("sea", "òkun")]);
    }

    #[test]
    fn duplicates_and_multiple_translations() {
        let p = parse("a x\na y\na x\n").unwrap();
        assert_eq!(pairs(&p), [("a", "x"), ("a", "y")]);
        assert_eq!(p.duplicates, 1);
    }

    #[test]
    fn comments_blanks_and_mixed_separators() {
        let p = parse("# header\n\nwater   omi\r\nsea\tòkun\n  \n").unwrap();
        assert_eq!(pairs(&p), [("water", "omi"), ("sea", "òkun")]);
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(parse("a\n"), Err(Error::MalformedLine { line: 1 })));
        assert!(matches!(parse("ok fine\na b c\n"), Err(Error::MalformedLine { line: 2 })));
        assert!(matches!(parse("a\tb\tc\n"), Err(Error::MalformedLine { line: 1 })));
        assert!(matches!(parse("old age\tìgbà àgbà\n"), Err(Error::MalformedLine { line: 1 })));
    }

    #[test]
    fn empty() {
        let err = parse("# nothing\n\n").unwrap_err();
        assert_eq!(err.category(), "EmptyDictionary");
    }
}
