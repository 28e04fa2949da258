//! The `qpair-state/1` file format.
//!
//! ```json
//! {"format": "qpair-state/1",
//!  "s": [sx, sy, sz], "t": [tx, ty, tz],
//!  "C": [[Cxx, Cxy, Cxz], [Cyx, Cyy, Cyz], [Czx, Czy, Czz]],
//!  "metadata": {"key": "value"}}
//! ```
//!
//! or, instead of `s`/`t`/`C`, a density matrix in the basis
//! |00⟩, |01⟩, |10⟩, |11⟩ as `"rho": {"re": [[..]; 4], "im": [[..]; 4]}`.
//! Numbers are written with 17 significant digits, which round-trips every
//! finite `f64`.

use std::collections::BTreeMap;
use std::fmt;

use qpair::linalg::CMat4;
use qpair::{DensityMatrix, Mat3, TwoQubitState, Vec3};
use serde_json::{Map, Value};

use crate::json;

pub const FORMAT_TAG: &str = "qpair-state/1";

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Syntax { line: usize, column: usize, message: String },
    UnknownFormat { found: String },
    Shape { path: String, expected: String },
    NonFinite { location: String },
    Payload { message: String },
}

impl ParseError {
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "syntax",
            ParseError::UnknownFormat { .. } => "unknown-format",
            ParseError::Shape { .. } => "shape",
            ParseError::NonFinite { .. } => "non-finite",
            ParseError::Payload { .. } => "payload",
        }
    }

    /// Where in the input the problem sits, if known.
    pub fn location(&self) -> Option<String> {
        match self {
            ParseError::Syntax { line, column, .. } => Some(format!("line {line}, column {column}")),
            ParseError::Shape { path, .. } => Some(path.clone()),
            ParseError::NonFinite { location } => Some(location.clone()),
            ParseError::UnknownFormat { .. } => Some("$.format".into()),
            ParseError::Payload { .. } => None,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, column, message } => {
                write!(f, "malformed input at line {line}, column {column}: {message}")
            }
            ParseError::UnknownFormat { found } => write!(f, "unknown format tag {found:?} (expected {FORMAT_TAG:?})"),
            ParseError::Shape { path, expected } => write!(f, "{path}: expected {expected}"),
            ParseError::NonFinite { location } => write!(f, "non-finite number at {location}"),
            ParseError::Payload { message } => write!(f, "{message}"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Payload {
    Pauli,
    Rho,
}

impl Payload {
    pub fn name(self) -> &'static str {
        match self {
            Payload::Pauli => "pauli",
            Payload::Rho => "rho",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateFile {
    pub state: TwoQubitState,
    pub payload: Payload,
    pub metadata: BTreeMap<String, String>,
}

impl StateFile {
    pub fn new(state: TwoQubitState) -> Self {
        StateFile { state, payload: Payload::Pauli, metadata: BTreeMap::new() }
    }
}

const NON_FINITE_TOKENS: [&str; 5] = ["NaN", "Infinity", "-Infinity", "inf", "-inf"];

fn syntax_error(bytes: &[u8], err: serde_json::Error) -> ParseError {
    let (line, column) = (err.line(), err.column());
    let msg = err.to_string();
    let location = format!("line {line}, column {column}");
    if msg.contains("number out of range") {
        return ParseError::NonFinite { location };
    }
    // serde_json reports the column of the offending token's first byte
    if let Some(text) = std::str::from_utf8(bytes).ok().and_then(|s| s.lines().nth(line.saturating_sub(1))) {
        let rest = text.get(column.saturating_sub(1)..).unwrap_or("");
        if NON_FINITE_TOKENS.iter().any(|t| rest.starts_with(t)) {
            return ParseError::NonFinite { location };
        }
    }
    let message = msg.split(" at line ").next().unwrap_or(&msg).to_string();
    ParseError::Syntax { line, column, message }
}

fn shape(path: &str, expected: &str) -> ParseError {
    ParseError::Shape { path: path.into(), expected: expected.into() }
}

fn number(v: &Value, path: &str) -> Result<f64, ParseError> {
    let x = v.as_f64().ok_or_else(|| shape(path, "a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ParseError::NonFinite { location: path.into() })
    }
}

fn vector(v: &Value, path: &str, n: usize) -> Result<Vec<f64>, ParseError> {
    match v.as_array() {
        Some(a) if a.len() == n => a.iter().enumerate().map(|(k, x)| number(x, &format!("{path}[{k}]"))).collect(),
        _ => Err(shape(path, &format!("an array of {n} numbers"))),
    }
}

fn matrix(v: &Value, path: &str, n: usize) -> Result<Vec<Vec<f64>>, ParseError> {
    match v.as_array() {
        Some(rows) if rows.len() == n => {
            rows.iter().enumerate().map(|(k, r)| vector(r, &format!("{path}[{k}]"), n)).collect()
        }
        _ => Err(shape(path, &format!("a {n}×{n} array of numbers"))),
    }
}

fn pauli_payload(obj: &Map<String, Value>) -> Result<TwoQubitState, ParseError> {
    let get = |k: &str| obj.get(k).ok_or_else(|| shape(&format!("$.{k}"), "a value"));
    let s = vector(get("s")?, "$.s", 3)?;
    let t = vector(get("t")?, "$.t", 3)?;
    let c = matrix(get("C")?, "$.C", 3)?;
    TwoQubitState::new(
        Vec3::from_column_slice(&s),
        Vec3::from_column_slice(&t),
        Mat3::from_fn(|a, b| c[a][b]),
    )
    .map_err(|e| ParseError::Payload { message: e.to_string() })
}

fn rho_payload(v: &Value) -> Result<TwoQubitState, ParseError> {
    let obj = v.as_object().ok_or_else(|| shape("$.rho", "an object with \"re\" and \"im\""))?;
    let part = |k: &str| {
        let path = format!("$.rho.{k}");
        obj.get(k).ok_or_else(|| shape(&path, "a 4×4 array of numbers")).and_then(|m| matrix(m, &path, 4))
    };
    let (re, im) = (part("re")?, part("im")?);
    let m = CMat4::from_fn(|i, j| qpair::linalg::Complex64::new(re[i][j], im[i][j]));
    let rho = DensityMatrix::new(m).map_err(|e| ParseError::Payload { message: e.to_string() })?;
    Ok(TwoQubitState::from_density_matrix(&rho))
}

pub fn parse_state(bytes: &[u8]) -> Result<StateFile, ParseError> {
    let root: Value = serde_json::from_slice(bytes).map_err(|e| syntax_error(bytes, e))?;
    let obj = root.as_object().ok_or_else(|| shape("$", "an object"))?;
    match obj.get("format") {
        Some(Value::String(tag)) if tag == FORMAT_TAG => {}
        Some(Value::String(tag)) => return Err(ParseError::UnknownFormat { found: tag.clone() }),
        Some(_) => return Err(shape("$.format", "a string")),
        None => return Err(shape("$.format", &format!("the format tag {FORMAT_TAG:?}"))),
    }
    let pauli = ["s", "t", "C"].iter().any(|k| obj.contains_key(*k));
    let (state, payload) = match (pauli, obj.get("rho")) {
        (true, Some(_)) => {
            return Err(ParseError::Payload { message: "both s/t/C and rho payloads present".into() })
        }
        (false, None) => return Err(ParseError::Payload { message: "no s/t/C or rho payload".into() }),
        (true, None) => (pauli_payload(obj)?, Payload::Pauli),
        (false, Some(r)) => (rho_payload(r)?, Payload::Rho),
    };
    let mut metadata = BTreeMap::new();
    if let Some(m) = obj.get("metadata") {
        let m = m.as_object().ok_or_else(|| shape("$.metadata", "an object of strings"))?;
        for (k, v) in m {
            let v = v.as_str().ok_or_else(|| shape(&format!("$.metadata.{k}"), "a string"))?;
            metadata.insert(k.clone(), v.to_string());
        }
    }
    Ok(StateFile { state, payload, metadata })
}

/// The Pauli-payload JSON object of a state file.
pub fn to_value(file: &StateFile) -> Value {
    let st = &file.state;
    let mut obj = Map::new();
    obj.insert("format".into(), FORMAT_TAG.into());
    obj.insert("s".into(), json::vec3(st.s()));
    obj.insert("t".into(), json::vec3(st.t()));
    obj.insert("C".into(), json::mat3(st.c()));
    if !file.metadata.is_empty() {
        let m = file.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        obj.insert("metadata".into(), Value::Object(m));
    }
    Value::Object(obj)
}

/// Serialized state file, numbers at 17 significant digits.
pub fn serialize_state(file: &StateFile, pretty: bool) -> String {
    json::to_string(&to_value(file), pretty)
}
