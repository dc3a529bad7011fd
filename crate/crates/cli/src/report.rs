//! Reports: canonical JSON documents with sorted keys.
//!
//! Polynomials are written in their canonical text form, generators and
//! cochain tuples are numbered from 1.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use qlift_core::koszul::Cochain;
use qlift_core::lift::{Certificate, CorrectionStep, Obstruction, ObstructionKind};
use qlift_core::polyring::{HSeries, Poly};

pub const SCHEMA: &str = "qlift-report/1";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Involutive,
    NonInvolutive,
    Quantised,
    Obstructed,
    AnomalyZero,
    AnomalyExact,
    AnomalyUnresolved,
    NotALift,
    Computed,
    Generated,
    Verified,
    Rejected,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Involutive => "involutive",
            Status::NonInvolutive => "non-involutive",
            Status::Quantised => "quantised",
            Status::Obstructed => "obstructed",
            Status::AnomalyZero => "anomaly-zero",
            Status::AnomalyExact => "anomaly-exact",
            Status::AnomalyUnresolved => "anomaly-unresolved",
            Status::NotALift => "not-a-lift",
            Status::Computed => "computed",
            Status::Generated => "generated",
            Status::Verified => "verified",
            Status::Rejected => "rejected",
        }
    }

    /// 0 for positive results, 2 for expected negative ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::NonInvolutive
            | Status::Obstructed
            | Status::AnomalyUnresolved
            | Status::NotALift
            | Status::Rejected => 2,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub status: Status,
    pub payload: Value,
}

impl Report {
    pub fn new(command: &str, input: &[u8], status: Status, payload: Value) -> Self {
        Report {
            command: command.to_string(),
            input_digest: digest(input),
            status,
            payload,
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "input_digest": self.input_digest,
            "status": self.status.as_str(),
            "payload": self.payload,
            "tool_version": env!("CARGO_PKG_VERSION"),
        })
    }

    /// Pretty-printed with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{:x}", Sha256::digest(bytes))
}

pub fn poly(p: &Poly) -> Value {
    Value::String(p.to_string())
}

pub fn polys(ps: &[Poly]) -> Value {
    Value::Array(ps.iter().map(poly).collect())
}

/// Coefficients from `hbar^0` upwards.
pub fn series(s: &HSeries) -> Value {
    Value::Array(s.coeffs().iter().map(poly).collect())
}

pub fn cochain(c: &Cochain) -> Value {
    let entries: Vec<Value> = c
        .entries()
        .map(|(t, m)| {
            json!({
                "tuple": t.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "entry": m.to_string(),
            })
        })
        .collect();
    json!({ "degree": c.degree(), "entries": entries })
}

fn correction(step: &CorrectionStep) -> Value {
    json!({
        "level": step.level,
        "anomaly": cochain(&step.anomaly),
        "correction": polys(&step.correction),
    })
}

pub fn certificate(c: &Certificate) -> Value {
    json!({
        "n": c.system[0].n(),
        "system": polys(&c.system),
        "order": c.order,
        "series": c.series.iter().map(series).collect::<Vec<_>>(),
        "max_order_checked": c.max_order_checked,
        "corrections": c.corrections.iter().map(correction).collect::<Vec<_>>(),
    })
}

pub fn obstruction(o: &Obstruction) -> Value {
    let mut m = Map::new();
    m.insert("level".into(), json!(o.level));
    m.insert("anomaly".into(), cochain(&o.anomaly));
    m.insert("degree_bound".into(), json!(o.degree_bound));
    match &o.kind {
        ObstructionKind::NoSolutionWithinBound { degree_bound } => {
            m.insert(
                "classification".into(),
                json!("no solution within degree bound"),
            );
            m.insert(
                "suggestion".into(),
                json!(format!(
                    "retry with --degree-bound larger than {degree_bound}"
                )),
            );
        }
        ObstructionKind::NonzeroGradedClass {
            internal_degree,
            unknowns,
            equations,
        } => {
            m.insert(
                "classification".into(),
                json!("nonzero class in graded slice"),
            );
            m.insert(
                "slice".into(),
                json!({
                    "internal_degree": internal_degree,
                    "unknowns": unknowns,
                    "equations": equations,
                }),
            );
        }
    }
    Value::Object(m)
}

/// Witness of non-involutivity, with one-based indices.
pub fn witness(i: usize, j: usize, bracket: &Poly) -> Value {
    json!({ "i": i + 1, "j": j + 1, "bracket": bracket.to_string() })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed certificate document: {0}")]
pub struct DecodeError(pub String);

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, DecodeError> {
    v.get(key)
        .ok_or_else(|| DecodeError(format!("missing field `{key}`")))
}

fn uint(v: &Value, key: &str) -> Result<usize, DecodeError> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| DecodeError(format!("field `{key}` is not a nonnegative integer")))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>, DecodeError> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| DecodeError(format!("field `{key}` is not an array")))
}

fn read_poly(v: &Value, n: usize) -> Result<Poly, DecodeError> {
    let s = v
        .as_str()
        .ok_or_else(|| DecodeError("polynomial is not a string".into()))?;
    Poly::parse(s, n).map_err(|e| DecodeError(format!("polynomial {s:?}: {e}")))
}

fn read_polys(v: &[Value], n: usize) -> Result<Vec<Poly>, DecodeError> {
    v.iter().map(|p| read_poly(p, n)).collect()
}

fn read_cochain(v: &Value, n: usize, width: usize) -> Result<Cochain, DecodeError> {
    let degree = uint(v, "degree")?;
    let mut entries = Vec::new();
    for e in array(v, "entries")? {
        let tuple = array(e, "tuple")?
            .iter()
            .map(|i| match i.as_u64() {
                Some(i) if i >= 1 => Ok(i as usize - 1),
                _ => Err(DecodeError("bad cochain tuple".into())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        entries.push((tuple, read_poly(field(e, "entry")?, n)?));
    }
    Cochain::from_entries(n, width, degree, entries).map_err(|e| DecodeError(e.to_string()))
}

/// Reads a certificate from either a bare certificate object or a quantize report.
pub fn read_certificate(doc: &Value) -> Result<Certificate, DecodeError> {
    let v = match doc.get("payload") {
        Some(p) => field(p, "certificate")?,
        None => doc,
    };
    let n = uint(v, "n")?;
    let system = read_polys(array(v, "system")?, n)?;
    let width = system.len();
    let series = array(v, "series")?
        .iter()
        .map(|s| {
            let coeffs = s
                .as_array()
                .ok_or_else(|| DecodeError("series is not an array".into()))?;
            HSeries::from_coeffs(read_polys(coeffs, n)?).map_err(|e| DecodeError(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let corrections = array(v, "corrections")?
        .iter()
        .map(|c| {
            Ok(CorrectionStep {
                level: uint(c, "level")?,
                anomaly: read_cochain(field(c, "anomaly")?, n, width)?,
                correction: read_polys(array(c, "correction")?, n)?,
            })
        })
        .collect::<Result<Vec<_>, DecodeError>>()?;
    Ok(Certificate {
        system,
        order: uint(v, "order")?,
        series,
        max_order_checked: uint(v, "max_order_checked")?,
        corrections,
    })
}
