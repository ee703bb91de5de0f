//! Report documents and CSV tables with 17-significant-digit numbers.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use crate::bounds::{CertificateInputs, CertificateReport, Direction};
use crate::rng;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats like C's `%.17g`: shortest of fixed or exponent notation with 17
/// significant digits and trailing zeros removed.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Pretty JSON formatter writing floats with [`format_number`].
struct SigFigFormatter(PrettyFormatter<'static>);

impl Formatter for SigFigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_number(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, sort_keys(v))).collect();
            Value::Object(sorted.into_iter().collect::<Map<String, Value>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys, 17 significant digits and a final newline.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = sort_keys(serde_json::to_value(value)?);
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter(PrettyFormatter::new()));
    v.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub n: Option<u64>,
    #[serde(rename = "M")]
    pub ceiling: f64,
    pub mean: f64,
    pub variance: f64,
    pub delta: Option<f64>,
}

impl From<&CertificateInputs> for ReportInputs {
    fn from(inputs: &CertificateInputs) -> Self {
        match inputs {
            CertificateInputs::Population(s) => ReportInputs {
                n: None,
                ceiling: s.ceiling(),
                mean: s.mean(),
                variance: s.variance(),
                delta: None,
            },
            CertificateInputs::Empirical(e) => ReportInputs {
                n: Some(e.n as u64),
                ceiling: e.ceiling,
                mean: e.mean,
                variance: e.variance,
                delta: Some(e.delta),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Ok,
    RadiusExceedsValidity,
}

/// Top-level JSON document emitted by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub command: String,
    pub status: ReportStatus,
    pub seed: Option<u64>,
    pub inputs: Option<ReportInputs>,
    pub radius: Option<f64>,
    pub direction: Option<Direction>,
    pub bound: Option<f64>,
    pub max_valid_radius: Option<f64>,
    pub decisions: BTreeMap<String, Value>,
    pub details: Map<String, Value>,
    pub timestamp: Option<String>,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        let mut decisions = BTreeMap::new();
        decisions.insert("rng".into(), Value::from(rng::GENERATOR));
        decisions.insert("number_format".into(), Value::from("17 significant digits"));
        ReportDocument {
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            status: ReportStatus::Ok,
            seed: None,
            inputs: None,
            radius: None,
            direction: None,
            bound: None,
            max_valid_radius: None,
            decisions,
            details: Map::new(),
            timestamp: None,
        }
    }

    /// Copies the certificate fields of `report`.
    pub fn with_certificate(mut self, report: &CertificateReport) -> Self {
        self.inputs = Some(ReportInputs::from(&report.inputs));
        self.radius = Some(report.radius.value());
        self.direction = Some(report.direction);
        self.bound = Some(report.bound);
        self.max_valid_radius = Some(report.max_valid_radius);
        self.details.insert("raw_bound".into(), Value::from(report.raw_bound));
        self.details.insert("saturated".into(), Value::from(report.saturated));
        if let Some(c) = report.confidence {
            self.details.insert("confidence".into(), Value::from(c));
        }
        self
    }

    pub fn decision(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.decisions.insert(key.into(), value.into());
        self
    }

    pub fn detail(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).expect("detail values serialize");
        self.details.insert(key.into(), v);
        self
    }

    pub fn to_json(&self) -> String {
        to_json_string(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.into())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// CSV text with LF line endings.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 cells")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn number_format_examples() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-2.5), "-2.5");
        assert_eq!(format_number(0.1), "0.10000000000000001");
        assert_eq!(format_number(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_number(123456.0), "123456");
        assert_eq!(format_number(1e20), "1e+20");
        assert_eq!(format_number(0.0001), "0.0001");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn json_sorted_and_round_trips() {
        let doc = ReportDocument::new("certify")
            .decision("z_last", true)
            .decision("a_first", 0.3)
            .detail("values", vec![0.1, 1.0 / 3.0]);
        let text = doc.to_json();
        let a = text.find("\"a_first\"").unwrap();
        let z = text.find("\"z_last\"").unwrap();
        assert!(a < z);
        assert!(text.find("\"bound\"").unwrap() < text.find("\"command\"").unwrap());
        assert!(text.contains("0.33333333333333331"));
        let back = ReportDocument::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn csv_table() {
        let mut t = Table::new(&["x", "name", "ok"]);
        t.push(vec![Cell::from(0.1), Cell::from("a,b"), Cell::from(true)]);
        assert_eq!(t.to_csv(), "x,name,ok\n0.10000000000000001,\"a,b\",true\n");
    }

    proptest! {
        #[test]
        fn number_format_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = format_number(x);
            prop_assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }
}
