//! Parsing of loss, prediction and score files.
//!
//! CSV files carry exactly one of the headers `loss`, `pred,label` or
//! `score,label`. JSONL files hold one object per line with the keys
//! `loss`, `pred` and `label`, or `score` and `label`. Errors name the
//! offending line.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Line { line: u64, message: String },
    #[error("expected header `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("input contains no records")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    CsvLosses,
    CsvPredictions,
    CsvScores,
    Jsonl,
}

impl RecordFormat {
    fn header(self) -> &'static [&'static str] {
        match self {
            RecordFormat::CsvLosses => &["loss"],
            RecordFormat::CsvPredictions => &["pred", "label"],
            RecordFormat::CsvScores => &["score", "label"],
            RecordFormat::Jsonl => &[],
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path)
        .map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

fn is_jsonl(text: &str) -> bool {
    text.lines().map(str::trim).find(|l| !l.is_empty()).is_some_and(|l| l.starts_with('{'))
}

fn line_err(line: u64, message: impl Into<String>) -> InputError {
    InputError::Line { line, message: message.into() }
}

fn parse_jsonl<T: DeserializeOwned>(text: &str) -> Result<Vec<(u64, T)>, InputError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let v: T = serde_json::from_str(raw).map_err(|e| line_err(line, e.to_string()))?;
        out.push((line, v));
    }
    if out.is_empty() {
        return Err(InputError::Empty);
    }
    Ok(out)
}

/// Records of a headered CSV file as `(line, fields)`.
fn parse_csv(text: &str, format: RecordFormat) -> Result<Vec<(u64, Vec<String>)>, InputError> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let expected = format.header();
    let found: Vec<String> =
        reader.headers().map_err(|e| line_err(1, e.to_string()))?.iter().map(str::to_string).collect();
    if found != expected {
        return Err(InputError::Header { expected: expected.join(","), found: found.join(",") });
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            line_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        out.push((line, rec.iter().map(str::to_string).collect()));
    }
    if out.is_empty() {
        return Err(InputError::Empty);
    }
    Ok(out)
}

fn number(line: u64, field: &str, what: &str) -> Result<f64, InputError> {
    let x: f64 = field.parse().map_err(|_| line_err(line, format!("{what} `{field}` is not a number")))?;
    if !x.is_finite() {
        return Err(line_err(line, format!("{what} `{field}` is not finite")));
    }
    Ok(x)
}

fn integer(line: u64, field: &str, what: &str) -> Result<i64, InputError> {
    field.parse().map_err(|_| line_err(line, format!("{what} `{field}` is not an integer")))
}

fn check_loss(line: u64, loss: f64, ceiling: f64) -> Result<f64, InputError> {
    if !loss.is_finite() || !(0.0..=ceiling).contains(&loss) {
        return Err(line_err(line, format!("loss {loss} outside [0, {ceiling}]")));
    }
    Ok(loss)
}

#[derive(Deserialize)]
struct LossLine {
    loss: f64,
}

#[derive(Deserialize)]
struct PredictionLine {
    pred: i64,
    label: i64,
}

#[derive(Deserialize)]
struct ScoreLine {
    score: f64,
    label: i64,
}

/// Losses from a `loss` CSV or JSONL file, each checked against `[0, M]`.
pub fn parse_losses(text: &str, ceiling: f64) -> Result<Vec<f64>, InputError> {
    if is_jsonl(text) {
        parse_jsonl::<LossLine>(text)?
            .into_iter()
            .map(|(line, r)| check_loss(line, r.loss, ceiling))
            .collect()
    } else {
        parse_csv(text, RecordFormat::CsvLosses)?
            .into_iter()
            .map(|(line, f)| check_loss(line, number(line, &f[0], "loss")?, ceiling))
            .collect()
    }
}

/// `(predicted, true)` label pairs.
pub fn parse_predictions(text: &str) -> Result<Vec<(i64, i64)>, InputError> {
    if is_jsonl(text) {
        Ok(parse_jsonl::<PredictionLine>(text)?.into_iter().map(|(_, r)| (r.pred, r.label)).collect())
    } else {
        parse_csv(text, RecordFormat::CsvPredictions)?
            .into_iter()
            .map(|(line, f)| Ok((integer(line, &f[0], "pred")?, integer(line, &f[1], "label")?)))
            .collect()
    }
}

fn check_label(line: u64, label: i64) -> Result<i8, InputError> {
    match label {
        1 => Ok(1),
        -1 => Ok(-1),
        other => Err(line_err(line, format!("label {other} is not -1 or +1"))),
    }
}

/// `(score, label)` pairs with labels in `{-1, +1}`.
pub fn parse_scores(text: &str) -> Result<Vec<(f64, i8)>, InputError> {
    if is_jsonl(text) {
        parse_jsonl::<ScoreLine>(text)?
            .into_iter()
            .map(|(line, r)| {
                if !r.score.is_finite() {
                    return Err(line_err(line, "score is not finite"));
                }
                Ok((r.score, check_label(line, r.label)?))
            })
            .collect()
    } else {
        parse_csv(text, RecordFormat::CsvScores)?
            .into_iter()
            .map(|(line, f)| {
                let label = integer(line, &f[1], "label")?;
                Ok((number(line, &f[0], "score")?, check_label(line, label)?))
            })
            .collect()
    }
}
