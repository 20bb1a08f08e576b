//! JSON documents for games, allocations and decomposition certificates.
//!
//! Columns and values are always in bitmask order on disk. Numbers are
//! written with 17 significant digits so every `f64` reads back exactly,
//! and documents are rendered by one printer so output is byte-stable.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::allocation::AllocationMatrix;
use crate::coalition::{check_player_count, coalition_count, Coalition, SetChain};
use crate::decomposition::{Decomposition, DecompositionTerm};
use crate::game::Game;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}: malformed JSON at line {line}, column {column}: {message}")]
    Syntax { context: String, line: usize, column: usize, message: String },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
}

fn invalid(context: &str, message: impl ToString) -> DocError {
    DocError::Invalid { context: context.to_owned(), message: message.to_string() }
}

/// Decimal rendering with 17 significant digits, trailing zeros removed.
/// Plain notation for exponents in `-7..17`, scientific otherwise.
pub fn format_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_owned();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let mut digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    while digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-7..17).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                out.push_str(&digits);
                out.extend(std::iter::repeat_n('0', int_len - digits.len()));
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        } else {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
            out.push_str(&digits);
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        write!(out, "e{exp}").expect("write to String");
    }
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, k: usize| out.extend(std::iter::repeat_n(' ', k));
    match v {
        Value::Number(num) => {
            if let Some(u) = num.as_u64() {
                write!(out, "{u}").unwrap();
            } else if let Some(i) = num.as_i64() {
                write!(out, "{i}").unwrap();
            } else {
                out.push_str(&format_number(num.as_f64().unwrap_or(0.0)));
            }
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, indent);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, item, indent + 2);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&serde_json::to_string(key).expect("string key"));
                out.push_str(": ");
                write_value(out, item, indent + 2);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalar")),
    }
}

/// Renders any serializable value in the canonical layout, with a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialize to JSON");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameDocument {
    pub n: usize,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllocationDocument {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDocument {
    pub permutation: Vec<usize>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDocument {
    pub n: usize,
    pub terms: Vec<TermDocument>,
}

fn bitmask_labels(n: usize) -> Vec<String> {
    Coalition::all(n).map(Coalition::label).collect()
}

impl From<&Game> for GameDocument {
    fn from(g: &Game) -> Self {
        GameDocument { n: g.n(), values: g.values().to_vec(), labels: Some(bitmask_labels(g.n())) }
    }
}

impl From<&AllocationMatrix> for AllocationDocument {
    fn from(a: &AllocationMatrix) -> Self {
        AllocationDocument { n: a.n(), rows: a.to_rows(), labels: Some(bitmask_labels(a.n())) }
    }
}

impl From<&Decomposition> for DecompositionDocument {
    fn from(d: &Decomposition) -> Self {
        DecompositionDocument {
            n: d.n,
            terms: d
                .terms
                .iter()
                .map(|t| TermDocument { permutation: t.chain.one_based(), weight: t.weight })
                .collect(),
        }
    }
}

/// Maps position `k` of a labelled column list to its bitmask index.
fn column_order(context: &str, n: usize, labels: &[String]) -> Result<Vec<usize>, DocError> {
    let width = coalition_count(n);
    if labels.len() != width {
        return Err(invalid(context, format!("expected {width} labels, got {}", labels.len())));
    }
    let mut seen = vec![false; width];
    let mut order = Vec::with_capacity(width);
    for (k, label) in labels.iter().enumerate() {
        let c: Coalition = label.parse().map_err(|e| invalid(context, format!("label {}: {e}", k + 1)))?;
        if !c.is_valid_for(n) || seen[c.index()] {
            return Err(invalid(context, format!("label {} ({label}) is out of range or repeated", k + 1)));
        }
        seen[c.index()] = true;
        order.push(c.index());
    }
    Ok(order)
}

fn reorder(values: &[f64], order: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    for (k, &idx) in order.iter().enumerate() {
        out[idx] = values[k];
    }
    out
}

impl GameDocument {
    pub fn to_game(&self) -> Result<Game, DocError> {
        let ctx = "game document";
        check_player_count(self.n).map_err(|e| invalid(ctx, e))?;
        let expected = coalition_count(self.n);
        if self.values.len() != expected {
            return Err(invalid(
                ctx,
                format!("n = {} needs {expected} values, got {}", self.n, self.values.len()),
            ));
        }
        let values = match &self.labels {
            Some(labels) => reorder(&self.values, &column_order(ctx, self.n, labels)?),
            None => self.values.clone(),
        };
        Game::new(self.n, values).map_err(|e| invalid(ctx, e))
    }
}

impl AllocationDocument {
    pub fn to_matrix(&self) -> Result<AllocationMatrix, DocError> {
        let ctx = "allocation document";
        check_player_count(self.n).map_err(|e| invalid(ctx, e))?;
        let rows = match &self.labels {
            Some(labels) => {
                let order = column_order(ctx, self.n, labels)?;
                let width = order.len();
                self.rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        if r.len() != width {
                            Err(invalid(
                                ctx,
                                format!("row {} has {} entries, expected {width}", i + 1, r.len()),
                            ))
                        } else {
                            Ok(reorder(r, &order))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            None => self.rows.clone(),
        };
        AllocationMatrix::from_rows(self.n, rows).map_err(|e| invalid(ctx, e))
    }
}

impl DecompositionDocument {
    pub fn to_decomposition(&self) -> Result<Decomposition, DocError> {
        let ctx = "certificate document";
        check_player_count(self.n).map_err(|e| invalid(ctx, e))?;
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                if t.permutation.len() != self.n || t.permutation.contains(&0) {
                    return Err(invalid(
                        ctx,
                        format!("term {} is not a permutation of 1..={}", k + 1, self.n),
                    ));
                }
                let chain = SetChain::new(t.permutation.iter().map(|p| p - 1).collect())
                    .map_err(|e| invalid(ctx, format!("term {}: {e}", k + 1)))?;
                if !t.weight.is_finite() {
                    return Err(invalid(ctx, format!("term {} has a non-finite weight", k + 1)));
                }
                Ok(DecompositionTerm { chain, weight: t.weight })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Decomposition { n: self.n, terms })
    }
}

fn parse_value(context: &str, text: &str) -> Result<Value, DocError> {
    serde_json::from_str(text).map_err(|e| DocError::Syntax {
        context: context.to_owned(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(message: &str) -> String {
    message.rsplit_once(" at line ").map_or(message, |(head, _)| head).to_owned()
}

/// Accepts the document itself or any object holding it under one of `keys`
/// (for instance the output of another command).
fn select<'a>(v: &'a Value, marker: &str, keys: &[&str]) -> Option<&'a Value> {
    if v.get(marker).is_some() {
        return Some(v);
    }
    for key in keys {
        if let Some(inner) = v.get(*key).or_else(|| v.get("result").and_then(|r| r.get(*key))) {
            if inner.get(marker).is_some() {
                return Some(inner);
            }
        }
    }
    None
}

fn extract<T: for<'de> Deserialize<'de>>(
    context: &str,
    text: &str,
    marker: &str,
    keys: &[&str],
) -> Result<T, DocError> {
    let v = parse_value(context, text)?;
    let doc =
        select(&v, marker, keys).ok_or_else(|| invalid(context, format!("no `{marker}` field found")))?;
    T::deserialize(doc).map_err(|e| invalid(context, e))
}

pub fn parse_game(text: &str) -> Result<Game, DocError> {
    extract::<GameDocument>("game document", text, "values", &["game"])?.to_game()
}

pub fn parse_allocation(text: &str) -> Result<AllocationMatrix, DocError> {
    extract::<AllocationDocument>("allocation document", text, "rows", &["allocation"])?.to_matrix()
}

pub fn parse_decomposition(text: &str) -> Result<Decomposition, DocError> {
    extract::<DecompositionDocument>(
        "certificate document",
        text,
        "terms",
        &["decomposition", "certificate"],
    )?
    .to_decomposition()
}

fn read(path: &Path) -> Result<String, DocError> {
    fs::read_to_string(path).map_err(|source| DocError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, text: &str) -> Result<(), DocError> {
    fs::write(path, text).map_err(|source| DocError::Io { path: path.to_owned(), source })
}

fn with_path<T>(path: &Path, r: Result<T, DocError>) -> Result<T, DocError> {
    r.map_err(|e| match e {
        DocError::Syntax { line, column, message, .. } => {
            DocError::Syntax { context: path.display().to_string(), line, column, message }
        }
        DocError::Invalid { message, context } => {
            DocError::Invalid { context: format!("{}: {context}", path.display()), message }
        }
        io => io,
    })
}

pub fn load_game(path: impl AsRef<Path>) -> Result<Game, DocError> {
    let path = path.as_ref();
    with_path(path, parse_game(&read(path)?))
}

pub fn save_game(game: &Game, path: impl AsRef<Path>) -> Result<(), DocError> {
    write(path.as_ref(), &to_canonical_json(&GameDocument::from(game)))
}

pub fn load_allocation(path: impl AsRef<Path>) -> Result<AllocationMatrix, DocError> {
    let path = path.as_ref();
    with_path(path, parse_allocation(&read(path)?))
}

pub fn save_allocation(a: &AllocationMatrix, path: impl AsRef<Path>) -> Result<(), DocError> {
    write(path.as_ref(), &to_canonical_json(&AllocationDocument::from(a)))
}

pub fn load_decomposition(path: impl AsRef<Path>) -> Result<Decomposition, DocError> {
    let path = path.as_ref();
    with_path(path, parse_decomposition(&read(path)?))
}

pub fn save_decomposition(d: &Decomposition, path: impl AsRef<Path>) -> Result<(), DocError> {
    write(path.as_ref(), &to_canonical_json(&DecompositionDocument::from(d)))
}
