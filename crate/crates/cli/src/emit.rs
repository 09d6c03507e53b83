//! Deterministic rendering: JSON with sorted keys and 12 significant digits,
//! CSV, and plain text tables.

use std::fmt::Write as _;

use anyhow::Result;
use hodd_core::classify::{ConditionTable, PointReport};
use hodd_core::{Error, ExtReal};
use serde::Serialize;
use serde_json::{Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Rounds to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    if !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

fn round_tree(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round12(n.as_f64().expect("f64 number"));
            *n = Number::from_f64(r).expect("finite after rounding");
        }
        Value::Array(items) => items.iter_mut().for_each(round_tree),
        Value::Object(map) => map.values_mut().for_each(round_tree),
        _ => {}
    }
}

/// Pretty JSON, keys sorted, floats rounded, trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_tree(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        let r = round12(v);
        if r == 0.0 {
            "0".into()
        } else if r.abs() < 1e-4 || r.abs() >= 1e12 {
            format!("{r:e}")
        } else {
            format!("{r}")
        }
    } else if v > 0.0 {
        "+inf".into()
    } else {
        "-inf".into()
    }
}

pub fn fmt_ext(v: ExtReal) -> String {
    fmt_num(v.to_f64())
}

fn text_report(r: &PointReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "point {:?}  stationary_order {}", r.point, r.stationary_order);
    let _ = writeln!(out, "{:<12} {:>5}  {:>20}  sign", "family", "order", "value");
    for (family, rows) in &r.tables {
        for (k, cell) in rows {
            let value = cell.value.map(fmt_ext).unwrap_or_else(|| "undefined".into());
            let sign = cell.sign.map(|s| format!("{s:?}").to_lowercase()).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{family:<12} {k:>5}  {value:>20}  {sign}");
        }
    }
    out
}

/// Renders a point report.
pub fn emit_report(r: &PointReport, format: Format) -> hodd_core::Result<Vec<u8>> {
    match format {
        Format::Json => to_json(r).map(String::into_bytes).map_err(|e| Error::Eval(e.to_string())),
        Format::Text => Ok(text_report(r).into_bytes()),
        Format::Csv => Err(Error::UnsupportedFormat("point reports are emitted as json or text".into())),
    }
}

/// Condition table as aligned text: one line per family and order.
pub fn condition_text(t: &ConditionTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<8} {:>5}  {:<13} witness", "family", "order", "status");
    for fam in ["D", "N", "S", "G"] {
        if let Some(rows) = t.rows.get(fam) {
            for (k, c) in rows {
                let status = format!("{:?}", c.status).to_lowercase();
                let witness = c
                    .witness
                    .as_ref()
                    .map(|w| w.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(","))
                    .unwrap_or_default();
                let _ = writeln!(out, "{fam:<8} {k:>5}  {status:<13} {witness}");
            }
        }
    }
    out
}

/// One row of a direction sweep.
pub struct SweepRow {
    pub direction: Vec<f64>,
    pub hadamard: ExtReal,
    pub studniarski: ExtReal,
    pub sign: String,
}

pub fn sweep_csv(dim: usize, rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=dim).map(|i| format!("u{i}")).collect();
    header.extend(["hadamard", "studniarski", "sign"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = r.direction.iter().map(|v| fmt_num(*v)).collect();
        rec.extend([fmt_ext(r.hadamard), fmt_ext(r.studniarski), r.sign.clone()]);
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
