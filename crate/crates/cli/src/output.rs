use std::io::Write;

use serde_json::{Map, Number, Value as Json};

use crate::config::OutputFormat;
use crate::CliError;

const SIGNIFICANT: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
    Text(String),
}

/// Ordered `key → value` pairs; all rows of one run share the same keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputRow(pub Vec<(String, Value)>);

impl OutputRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn real(mut self, key: &str, v: f64) -> Self {
        self.0.push((key.to_string(), Value::Real(v)));
        self
    }

    pub fn int(mut self, key: &str, v: i64) -> Self {
        self.0.push((key.to_string(), Value::Int(v)));
        self
    }

    pub fn text(mut self, key: &str, v: &str) -> Self {
        self.0.push((key.to_string(), Value::Text(v.to_string())));
        self
    }

    pub fn keys(&self) -> Vec<&str> {
        self.0.iter().map(|(k, _)| k.as_str()).collect()
    }
}

/// `%g`-style formatting with nine significant digits.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= SIGNIFICANT as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Real(x) => format_real(*x),
        Value::Int(i) => i.to_string(),
        Value::Text(t) => t.clone(),
    }
}

fn json_value(v: &Value) -> Json {
    match v {
        Value::Real(x) => format_real(*x)
            .parse::<f64>()
            .ok()
            .and_then(Number::from_f64)
            .map_or(Json::Null, Json::Number),
        Value::Int(i) => Json::from(*i),
        Value::Text(t) => Json::from(t.as_str()),
    }
}

pub fn render(rows: &[OutputRow], format: OutputFormat, header: &[&str]) -> Result<String, CliError> {
    for r in rows {
        if r.keys() != header {
            return Err(CliError::Internal(format!("row keys {:?} differ from header {header:?}", r.keys())));
        }
    }
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(header).map_err(|e| CliError::Internal(e.to_string()))?;
            for r in rows {
                w.write_record(r.0.iter().map(|(_, v)| cell(v)))
                    .map_err(|e| CliError::Internal(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        OutputFormat::Json => {
            let items: Vec<Json> = rows
                .iter()
                .map(|r| Json::Object(r.0.iter().map(|(k, v)| (k.clone(), json_value(v))).collect::<Map<_, _>>()))
                .collect();
            let mut s = serde_json::to_string_pretty(&items).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}

/// Parses CSV produced by [`render`] back into rows of cells.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r
        .headers()
        .map_err(|e| CliError::Input(e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(|e| CliError::Input(e.to_string()))?.iter().map(String::from).collect());
    }
    Ok((header, rows))
}
