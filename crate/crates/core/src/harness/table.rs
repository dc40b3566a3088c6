use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Deserializer};

use super::config::TableFormat;
use crate::error::{Error, Result};
use crate::textfmt::{fmt_f64, write_string};

pub const COLUMNS: [&str; 10] = [
    "n",
    "v_i",
    "v_j",
    "N",
    "mean",
    "var",
    "var_over_n4",
    "ci_lo",
    "ci_hi",
    "seed",
];

/// Per-`(n, v)` statistics of `h(v)`; `ci_lo`, `ci_hi` bound `var/n⁴`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub v_i: usize,
    pub v_j: usize,
    #[serde(rename = "N")]
    pub trials: usize,
    #[serde(deserialize_with = "nullable")]
    pub mean: f64,
    #[serde(deserialize_with = "nullable")]
    pub var: f64,
    #[serde(deserialize_with = "nullable")]
    pub var_over_n4: f64,
    #[serde(deserialize_with = "nullable")]
    pub ci_lo: f64,
    #[serde(deserialize_with = "nullable")]
    pub ci_hi: f64,
    pub seed: u64,
}

fn nullable<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// 17 significant digits; JSON has no NaN so it becomes `null` there.
fn json_f64(x: f64) -> String {
    if x.is_finite() {
        fmt_f64(x)
    } else {
        "null".into()
    }
}

pub fn render(rows: &[SummaryRow], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&COLUMNS.join(","));
            out.push('\n');
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.n,
                    r.v_i,
                    r.v_j,
                    r.trials,
                    fmt_f64(r.mean),
                    fmt_f64(r.var),
                    fmt_f64(r.var_over_n4),
                    fmt_f64(r.ci_lo),
                    fmt_f64(r.ci_hi),
                    r.seed
                );
            }
        }
        TableFormat::Json => {
            out.push('[');
            for (k, r) in rows.iter().enumerate() {
                out.push_str(if k == 0 { "\n  " } else { ",\n  " });
                let _ = write!(
                    out,
                    "{{\"n\":{},\"v_i\":{},\"v_j\":{},\"N\":{},\"mean\":{},\"var\":{},\"var_over_n4\":{},\"ci_lo\":{},\"ci_hi\":{},\"seed\":{}}}",
                    r.n,
                    r.v_i,
                    r.v_j,
                    r.trials,
                    json_f64(r.mean),
                    json_f64(r.var),
                    json_f64(r.var_over_n4),
                    json_f64(r.ci_lo),
                    json_f64(r.ci_hi),
                    r.seed
                );
            }
            out.push_str(if rows.is_empty() { "]\n" } else { "\n]\n" });
        }
    }
    out
}

pub fn emit(rows: &[SummaryRow], format: TableFormat, path: &Path) -> Result<()> {
    write_string(path, &render(rows, format))
}

fn field<T: std::str::FromStr>(line: usize, name: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {name} value {s:?}")))
}

pub fn parse_csv(text: &str) -> Result<Vec<SummaryRow>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    if header.trim() != COLUMNS.join(",") {
        return Err(Error::parse(1, format!("unexpected header {header:?}")));
    }
    lines
        .map(|(k, line)| {
            let k = k + 1;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != COLUMNS.len() {
                return Err(Error::parse(
                    k,
                    format!("expected {} fields, found {}", COLUMNS.len(), f.len()),
                ));
            }
            Ok(SummaryRow {
                n: field(k, "n", f[0])?,
                v_i: field(k, "v_i", f[1])?,
                v_j: field(k, "v_j", f[2])?,
                trials: field(k, "N", f[3])?,
                mean: field(k, "mean", f[4])?,
                var: field(k, "var", f[5])?,
                var_over_n4: field(k, "var_over_n4", f[6])?,
                ci_lo: field(k, "ci_lo", f[7])?,
                ci_hi: field(k, "ci_hi", f[8])?,
                seed: field(k, "seed", f[9])?,
            })
        })
        .collect()
}

pub fn parse_json(text: &str) -> Result<Vec<SummaryRow>> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
}

pub fn parse_table(text: &str, format: TableFormat) -> Result<Vec<SummaryRow>> {
    match format {
        TableFormat::Csv => parse_csv(text),
        TableFormat::Json => parse_json(text),
    }
}
