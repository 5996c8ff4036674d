//! Evaluation report output.
//!
//! JSON carries the whole report. TSV is a one-row-per-condition summary:
//!
//! ```text
//! condition	P@1	P@5	P@10
//! curated-norm	19.38	23.75	29.38
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use lexalign_core::EvalReport;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Tsv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "tsv" => Ok(ReportFormat::Tsv),
            _ => Err(Error::Usage(format!("unknown report format {s:?}"))),
        }
    }
}

pub fn tsv_header(ks: &[usize]) -> String {
    let mut line = String::from("condition");
    for k in ks {
        line.push_str(&format!("\tP@{k}"));
    }
    line
}

pub fn tsv_row(report: &EvalReport) -> String {
    let mut line = report.meta.condition.clone();
    for k in &report.ks {
        let p = report.precision_at(*k).unwrap_or(f64::NAN);
        line.push_str(&format!("\t{p:.2}"));
    }
    line
}

/// Writes a header from the first report's `ks` and one row per report.
pub fn write_table<'a, W: Write>(reports: impl IntoIterator<Item = &'a EvalReport>, mut sink: W) -> Result<()> {
    let io = |e| Error::io("writing report table", e);
    let mut header_written = false;
    for report in reports {
        if !header_written {
            writeln!(sink, "{}", tsv_header(&report.ks)).map_err(io)?;
            header_written = true;
        }
        writeln!(sink, "{}", tsv_row(report)).map_err(io)?;
    }
    sink.flush().map_err(io)
}

pub fn write_report<W: Write>(report: &EvalReport, mut sink: W, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut sink, report).map_err(|e| Error::io("writing JSON report", e.into()))?;
            sink.write_all(b"\n").map_err(|e| Error::io("writing JSON report", e))?;
            sink.flush().map_err(|e| Error::io("writing JSON report", e))
        }
        ReportFormat::Tsv => write_table([report], sink),
    }
}

pub fn save_report(report: &EvalReport, path: &Path, format: ReportFormat) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    write_report(report, BufWriter::new(file), format)
}

pub fn read_report<R: Read>(reader: R) -> Result<EvalReport> {
    serde_json::from_reader(reader).map_err(|e| {
        if e.is_io() {
            Error::io("reading JSON report", e.into())
        } else {
            Error::MalformedReport(e.to_string())
        }
    })
}

pub fn load_report(path: &Path) -> Result<EvalReport> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    read_report(BufReader::new(file))
}
