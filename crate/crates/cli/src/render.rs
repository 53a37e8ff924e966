//! Text, JSON and CSV rendering. Output is a pure function of the inputs:
//! no timestamps, no locale, `.` as decimal separator, LF line endings.

use clap::ValueEnum;
use metallic_core::{ConvergenceReport, Evaluated, Verification};
use serde::Serialize;
use serde_json::{json, Value};

use crate::EXIT_FAILS;

/// Bumped whenever the JSON or CSV layout changes.
pub const FORMAT_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 4] = ["index", "value_exact", "value_decimal", "abs_error"];

const UNDEFINED: &str = "undefined";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Serialize)]
struct Envelope<'a> {
    version: u32,
    command: &'a str,
    params: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<&'a Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub struct Output {
    command: &'static str,
    params: Value,
    result: Value,
    text: String,
    rows: Option<Vec<[String; 4]>>,
    pub exit_code: u8,
}

impl Output {
    pub fn new(command: &'static str, params: Value, result: Value, text: String) -> Self {
        Self {
            command,
            params,
            result,
            text,
            rows: None,
            exit_code: 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => to_json_line(&Envelope {
                version: FORMAT_VERSION,
                command: self.command,
                params: &self.params,
                result: Some(&self.result),
                error: None,
            }),
            Format::Csv => {
                let mut writer = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(vec![]);
                writer.write_record(CSV_HEADER).expect("in-memory write");
                for row in self.rows.iter().flatten() {
                    writer.write_record(row).expect("in-memory write");
                }
                String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
            }
        }
    }
}

pub fn error_envelope(
    command: &str,
    argv: &[String],
    code: u8,
    kind: &str,
    message: &str,
) -> String {
    to_json_line(&Envelope {
        version: FORMAT_VERSION,
        command,
        params: &json!({ "argv": argv }),
        result: None,
        error: Some(json!({ "code": code, "kind": kind, "message": message })),
    })
}

fn cells(report: &ConvergenceReport) -> Vec<[String; 4]> {
    report
        .rows
        .iter()
        .map(|row| match (&row.value, &row.decimal, &row.abs_error) {
            (Some(value), Some(decimal), Some(error)) => [
                row.index.to_string(),
                value.to_string(),
                decimal.to_string(),
                error.to_string(),
            ],
            _ => [
                row.index.to_string(),
                UNDEFINED.into(),
                UNDEFINED.into(),
                UNDEFINED.into(),
            ],
        })
        .collect()
}

fn aligned(rows: &[[String; 4]]) -> String {
    let mut widths = CSV_HEADER.map(str::len);
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cols: [&str; 4]| {
        let mut s = String::new();
        for (i, (cell, w)) in cols.iter().zip(widths).enumerate() {
            if i + 1 == cols.len() {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  "));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(CSV_HEADER);
    for row in rows {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3]]));
    }
    out
}

pub fn table_output(
    command: &'static str,
    params: Value,
    report: &ConvergenceReport,
    _format: Format,
) -> Output {
    let rows = cells(report);
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let defined = r[1] != UNDEFINED;
            json!({
                "index": r[0].parse::<u64>().expect("index"),
                "value_exact": defined.then(|| r[1].clone()),
                "value_decimal": defined.then(|| r[2].clone()),
                "abs_error": defined.then(|| r[3].clone()),
            })
        })
        .collect();
    let result = json!({
        "target": report.target.to_string(),
        "digits": report.digits,
        "convergence_guaranteed": report.convergence_guaranteed,
        "eventually_decreasing": report.eventually_decreasing(),
        "decreasing_from": report.decreasing_from,
        "rows": json_rows,
    });
    let mut text = aligned(&rows);
    text.push_str(&format!("target: {}\n", report.target));
    text.push_str(&format!(
        "convergence: {}\n",
        if report.convergence_guaranteed {
            "guaranteed"
        } else {
            "not guaranteed"
        }
    ));
    match report.decreasing_from {
        Some(n) => text.push_str(&format!("error trend: non-increasing from row {n}\n")),
        None => text.push_str("error trend: no eventual decrease\n"),
    }
    let mut output = Output::new(command, params, result, text);
    output.rows = Some(rows);
    output
}

fn evaluated_json(e: &Evaluated) -> Value {
    Value::from(e.to_string())
}

pub fn verification_output(params: Value, v: &Verification) -> Output {
    let verdict = if v.holds { "holds" } else { "fails" };
    let mut text = format!("{verdict}\n{v}\n");
    if let (Some(dev), Some(tol)) = (&v.deviation_ulps, v.tolerance_ulps) {
        text.push_str(&format!("deviation: {dev} ulp (tolerance {tol} ulp)\n"));
    }
    let result = json!({
        "identity": v.identity.name(),
        "holds": v.holds,
        "lhs": evaluated_json(&v.lhs),
        "rhs": evaluated_json(&v.rhs),
        "summands": v.summands.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "tolerance_ulps": v.tolerance_ulps,
        "deviation_ulps": v.deviation_ulps.as_ref().map(|d| d.to_string()),
        "display": v.to_string(),
    });
    let mut output = Output::new("verify", params, result, text);
    if !v.holds {
        output.exit_code = EXIT_FAILS;
    }
    output
}
