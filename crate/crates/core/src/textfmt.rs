//! Plain-text formats used by the CLI.
//!
//! A record is a header line `n=<n> kind=<hive|gt|square>` followed by its
//! rows, one per line, values separated by whitespace:
//!
//! * `hive`: `n+1` rows, row `j` holding `h(0,j) … h(j,j)`;
//! * `gt`: `n` rows, row `k` holding `λ_{1,k} … λ_{k,k}`;
//! * `square`: `n+1` rows of `n+1` values, row `i` holding `k̃(i,0) … k̃(i,n)`.
//!
//! A file may hold several records. Blank lines and lines starting with `#`
//! are ignored everywhere. A spectrum file is a bare list of numbers in
//! non-increasing order, spread over any number of lines.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hive_gt::{GtPattern, Hive};
use crate::octahedron::SquareFunction;
use crate::spectra::SpecTuple;

/// Largest `n` accepted in a header. Keeps a hostile header from steering
/// allocation; real inputs are far smaller.
pub const MAX_HEADER_N: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub enum Record {
    Hive(Hive),
    Gt(GtPattern),
    Square(SquareFunction),
}

impl Record {
    pub fn kind(&self) -> &'static str {
        match self {
            Record::Hive(_) => "hive",
            Record::Gt(_) => "gt",
            Record::Square(_) => "square",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Record::Hive(h) => h.n(),
            Record::Gt(g) => g.n(),
            Record::Square(s) => s.n(),
        }
    }
}

/// 17 significant digits, which round-trips every finite `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_row(out: &mut String, row: &[f64]) {
    for (k, x) in row.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        out.push_str(&fmt_f64(*x));
    }
    out.push('\n');
}

pub fn write_record(out: &mut String, rec: &Record) {
    let _ = writeln!(out, "n={} kind={}", rec.n(), rec.kind());
    match rec {
        Record::Hive(h) => (0..=h.n()).for_each(|j| push_row(out, h.row(j))),
        Record::Gt(g) => (1..=g.n()).for_each(|k| push_row(out, g.row(k))),
        Record::Square(s) => (0..=s.n()).for_each(|i| push_row(out, s.row(i))),
    }
}

pub fn to_text(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        write_record(&mut out, r);
    }
    out
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_values(line_no: usize, line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| {
            let x: f64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("not a number: {tok:?}")))?;
            if !x.is_finite() {
                return Err(Error::parse(line_no, format!("non-finite value {tok:?}")));
            }
            Ok(x)
        })
        .collect()
}

fn parse_header(line_no: usize, line: &str) -> Result<(usize, String)> {
    let mut n = None;
    let mut kind = None;
    for tok in line.split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("expected key=value, got {tok:?}")))?;
        match key {
            "n" => {
                let v: usize = value
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad n {value:?}")))?;
                if v > MAX_HEADER_N {
                    return Err(Error::parse(line_no, format!("n = {v} exceeds {MAX_HEADER_N}")));
                }
                n = Some(v);
            }
            "kind" => kind = Some(value.to_string()),
            _ => return Err(Error::parse(line_no, format!("unknown header key {key:?}"))),
        }
    }
    match (n, kind) {
        (Some(n), Some(kind)) => Ok((n, kind)),
        _ => Err(Error::parse(line_no, "header needs both n= and kind=")),
    }
}

/// All records in `text`, in order.
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut lines = content_lines(text).peekable();
    let mut out = Vec::new();
    while let Some((line_no, header)) = lines.next() {
        let (n, kind) = parse_header(line_no, header)?;
        let row_count = match kind.as_str() {
            "hive" | "square" => n + 1,
            "gt" => n,
            other => return Err(Error::parse(line_no, format!("unknown kind {other:?}"))),
        };
        let mut rows = Vec::new();
        for r in 0..row_count {
            let (row_no, line) = lines.next().ok_or_else(|| {
                Error::parse(line_no, format!("{kind} record ends after {r} of {row_count} rows"))
            })?;
            let row = parse_values(row_no, line)?;
            let want = match kind.as_str() {
                "hive" => r + 1,
                "gt" => r + 1,
                _ => n + 1,
            };
            if row.len() != want {
                return Err(Error::parse(
                    row_no,
                    format!("expected {want} values, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        let rec = match kind.as_str() {
            "hive" => Record::Hive(Hive::from_rows(&rows)?),
            "gt" => {
                if n == 0 {
                    return Err(Error::parse(line_no, "gt record needs n ≥ 1"));
                }
                Record::Gt(GtPattern::from_rows(&rows)?)
            }
            _ => Record::Square(SquareFunction::from_rows(&rows)?),
        };
        out.push(rec);
    }
    Ok(out)
}

/// A non-increasing list of numbers.
pub fn parse_spectrum(text: &str) -> Result<SpecTuple> {
    let mut v = Vec::new();
    for (line_no, line) in content_lines(text) {
        v.extend(parse_values(line_no, line)?);
    }
    if v.is_empty() {
        return Err(Error::parse(0, "empty spectrum"));
    }
    SpecTuple::new(v)
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_string(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_records(path: &Path) -> Result<Vec<Record>> {
    parse_records(&read_to_string(path)?)
}

pub fn write_records(path: &Path, records: &[Record]) -> Result<()> {
    write_string(path, &to_text(records))
}

/// The single GT pattern in a file.
pub fn read_gt(path: &Path) -> Result<GtPattern> {
    match read_records(path)?.as_slice() {
        [Record::Gt(g)] => Ok(g.clone()),
        other => Err(Error::parse(
            0,
            format!(
                "{}: expected one gt record, found {}",
                path.display(),
                describe(other)
            ),
        )),
    }
}

/// The single square function in a file.
pub fn read_square(path: &Path) -> Result<SquareFunction> {
    match read_records(path)?.as_slice() {
        [Record::Square(s)] => Ok(s.clone()),
        other => Err(Error::parse(
            0,
            format!(
                "{}: expected one square record, found {}",
                path.display(),
                describe(other)
            ),
        )),
    }
}

fn describe(recs: &[Record]) -> String {
    if recs.is_empty() {
        return "nothing".into();
    }
    recs.iter().map(Record::kind).collect::<Vec<_>>().join(", ")
}
