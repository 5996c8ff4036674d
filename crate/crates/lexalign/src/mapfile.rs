//! Alignment map persistence.
//!
//! ```text
//! d 2
//! 0.8660254037844387 -0.5
//! 0.5 0.8660254037844387
//! #meta mode=none
//! #meta anchors=3
//! ```
//!
//! Values are written in shortest round-trip form, so a saved map reloads
//! bit-identically.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use lexalign_core::{AlignmentMap, MapMeta, Matrix, PreprocessMode};

use crate::error::{Error, Result};
use crate::vecfile::read_line;

pub fn write_map<W: Write>(map: &AlignmentMap, mut sink: W) -> Result<()> {
    let io = |e| Error::io("writing alignment map", e);
    let w = map.matrix();
    writeln!(sink, "d {}", w.rows()).map_err(io)?;
    for row in w.row_iter() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(sink, "{}", line.join(" ")).map_err(io)?;
    }
    let m = &map.meta;
    writeln!(sink, "#meta mode={}", m.mode).map_err(io)?;
    writeln!(sink, "#meta anchors={}", m.anchors).map_err(io)?;
    writeln!(sink, "#meta source_id={}", m.source_id).map_err(io)?;
    writeln!(sink, "#meta target_id={}", m.target_id).map_err(io)?;
    writeln!(sink, "#meta degenerate={}", m.degenerate).map_err(io)?;
    sink.flush().map_err(io)
}

pub fn save_map(map: &AlignmentMap, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    write_map(map, BufWriter::new(file))
}

pub fn read_map<R: BufRead>(mut reader: R) -> Result<AlignmentMap> {
    let bad = |msg: String| Error::MalformedMap(msg);
    let mut buf = Vec::new();
    let header = read_line(&mut reader, &mut buf, 1)?.unwrap_or_default();
    let d: usize = header
        .strip_prefix("d ")
        .and_then(|s| s.trim().parse().ok())
        .filter(|&d| d > 0)
        .ok_or_else(|| bad(format!("header must be \"d <n>\", got {header:?}")))?;
    let mut values = Vec::with_capacity(d * d);
    for i in 0..d {
        let line = read_line(&mut reader, &mut buf, i + 2)?.ok_or_else(|| bad(format!("expected {d} matrix rows, found {i}")))?;
        let row: Vec<f64> = line
            .split_ascii_whitespace()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad(format!("line {}: non-numeric entry", i + 2)))?;
        if row.len() != d {
            return Err(bad(format!("line {}: expected {d} values, found {}", i + 2, row.len())));
        }
        values.extend(row);
    }
    let mut meta = MapMeta::default();
    let mut saw_mode = false;
    let mut line_no = d + 1;
    while let Some(line) = {
        line_no += 1;
        read_line(&mut reader, &mut buf, line_no)?
    } {
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = line
            .strip_prefix("#meta ")
            .and_then(|kv| kv.split_once('='))
            .ok_or_else(|| bad(format!("line {line_no}: expected \"#meta key=value\"")))?;
        match key {
            "mode" => {
                meta.mode = value.parse::<PreprocessMode>().map_err(|_| bad(format!("unknown mode {value:?}")))?;
                saw_mode = true;
            }
            "anchors" => meta.anchors = value.parse().map_err(|_| bad(format!("bad anchor count {value:?}")))?,
            "source_id" => meta.source_id = value.into(),
            "target_id" => meta.target_id = value.into(),
            "degenerate" => meta.degenerate = value.parse().map_err(|_| bad(format!("bad flag {value:?}")))?,
            _ => {}
        }
    }
    if !saw_mode {
        return Err(bad("missing \"#meta mode=\" line".into()));
    }
    let w = Matrix::from_vec(d, d, values)?;
    Ok(AlignmentMap::new(w, meta)?)
}

pub fn load_map(path: &Path) -> Result<AlignmentMap> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    read_map(BufReader::new(file))
}
