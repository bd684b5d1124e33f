//! On-disk formats: newform records (JSON), serialized Jordan elements
//! (JSON), and Siegel table files (line-oriented text). These schemas are the
//! stable contract; everything else routes through them.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use e7lift_core::jordan::JordanElement;
use e7lift_core::newform::{Character, NewformError, NewformRecord};
use e7lift_core::octonion::Octonion;
use e7lift_core::scalar::{Int, Rational};
use e7lift_core::siegel::{
    InvariantKey, Provenance, SiegelEntry, SiegelPolynomial, SiegelProvider,
};

use crate::scalars::{parse_rational, parse_scalar, rational_string};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad value {value:?} in {context}: {message}")]
    BadValue {
        context: String,
        value: String,
        message: String,
    },
    #[error("newform record rejected:{}", .0.iter().map(|e| format!("\n  - {e}")).collect::<String>())]
    InvalidNewform(Vec<NewformError>),
    #[error("{path}:{line}: {message}")]
    Table {
        path: String,
        line: usize,
        message: String,
    },
}

// ---------------------------------------------------------------- newform

#[derive(Deserialize)]
struct NewformFile {
    level: u64,
    weight: u32,
    #[serde(default = "default_character")]
    character: Value,
    coefficients: Vec<String>,
    #[serde(default)]
    precision_bits: Option<u32>,
    #[serde(default)]
    atkin_lehner: BTreeMap<String, i8>,
}

fn default_character() -> Value {
    Value::String("trivial".into())
}

/// Loads and validates a newform record; any violated invariant is listed.
pub fn load_newform(path: &Path) -> Result<NewformRecord, FormatError> {
    let text = fs::read_to_string(path)?;
    newform_from_str(&text)
}

pub fn newform_from_str(text: &str) -> Result<NewformRecord, FormatError> {
    let file: NewformFile = serde_json::from_str(text)?;
    let character = parse_character(&file.character)?;
    let mut coefficients = Vec::with_capacity(file.coefficients.len());
    for (i, s) in file.coefficients.iter().enumerate() {
        let q = parse_rational(s).map_err(|e| FormatError::BadValue {
            context: format!("coefficients[{}]", i),
            value: s.clone(),
            message: e.to_string(),
        })?;
        coefficients.push(q);
    }
    let mut atkin_lehner = BTreeMap::new();
    for (k, v) in file.atkin_lehner {
        let p: u64 = k.parse().map_err(|_| FormatError::BadValue {
            context: "atkin_lehner".into(),
            value: k.clone(),
            message: "keys must be primes".into(),
        })?;
        atkin_lehner.insert(p, v);
    }
    let rec = NewformRecord {
        level: file.level,
        weight: file.weight,
        character,
        coefficients,
        precision_bits: file.precision_bits,
        atkin_lehner,
    };
    let violations = rec.validate();
    if violations.is_empty() {
        Ok(rec)
    } else {
        Err(FormatError::InvalidNewform(violations))
    }
}

/// Serializes a record back to the on-disk schema (the normalized form:
/// exact strings, sorted Atkin-Lehner keys).
pub fn newform_to_json(rec: &NewformRecord) -> Value {
    let character = match &rec.character {
        Character::Trivial => Value::String("trivial".into()),
        Character::Table { modulus, values } => serde_json::json!({
            "modulus": modulus,
            "values": values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        }),
    };
    let mut obj = serde_json::json!({
        "level": rec.level,
        "weight": rec.weight,
        "character": character,
        "coefficients": rec.coefficients.iter().map(rational_string).collect::<Vec<_>>(),
        "atkin_lehner": rec
            .atkin_lehner
            .iter()
            .map(|(p, e)| (p.to_string(), *e))
            .collect::<BTreeMap<String, i8>>(),
    });
    if let Some(bits) = rec.precision_bits {
        obj["precision_bits"] = Value::from(bits);
    }
    obj
}

fn parse_character(v: &Value) -> Result<Character, FormatError> {
    match v {
        Value::String(s) if s == "trivial" => Ok(Character::Trivial),
        Value::Object(map) => {
            let modulus = map
                .get("modulus")
                .and_then(Value::as_u64)
                .ok_or_else(|| FormatError::BadValue {
                    context: "character".into(),
                    value: v.to_string(),
                    message: "missing integer modulus".into(),
                })?;
            let values = map
                .get("values")
                .and_then(Value::as_array)
                .ok_or_else(|| FormatError::BadValue {
                    context: "character".into(),
                    value: v.to_string(),
                    message: "missing values array".into(),
                })?;
            let mut parsed = Vec::with_capacity(values.len());
            for (i, item) in values.iter().enumerate() {
                let s = item.as_str().ok_or_else(|| FormatError::BadValue {
                    context: format!("character.values[{}]", i),
                    value: item.to_string(),
                    message: "values must be exact-scalar strings".into(),
                })?;
                parsed.push(parse_scalar(s).map_err(|e| FormatError::BadValue {
                    context: format!("character.values[{}]", i),
                    value: s.to_string(),
                    message: e.to_string(),
                })?);
            }
            Ok(Character::Table {
                modulus,
                values: parsed,
            })
        }
        other => Err(FormatError::BadValue {
            context: "character".into(),
            value: other.to_string(),
            message: "expected \"trivial\" or a table object".into(),
        }),
    }
}

// ----------------------------------------------------------------- jordan

#[derive(Serialize, Deserialize)]
pub struct JordanJson {
    pub diag: [String; 3],
    pub c1: Vec<String>,
    pub c2: Vec<String>,
    pub c3: Vec<String>,
}

pub fn jordan_to_json(b: &JordanElement) -> JordanJson {
    let oct = |o: &Octonion| o.coords.iter().map(rational_string).collect();
    JordanJson {
        diag: [
            rational_string(&b.a),
            rational_string(&b.b),
            rational_string(&b.c),
        ],
        c1: oct(&b.c1),
        c2: oct(&b.c2),
        c3: oct(&b.c3),
    }
}

pub fn jordan_from_json(j: &JordanJson) -> Result<JordanElement, FormatError> {
    let q = |s: &str, ctx: &str| -> Result<Rational, FormatError> {
        parse_rational(s).map_err(|e| FormatError::BadValue {
            context: ctx.into(),
            value: s.into(),
            message: e.to_string(),
        })
    };
    let oct = |v: &[String], ctx: &str| -> Result<Octonion, FormatError> {
        if v.len() != 8 {
            return Err(FormatError::BadValue {
                context: ctx.into(),
                value: format!("{} entries", v.len()),
                message: "octonions need exactly 8 coordinates".into(),
            });
        }
        let mut o = Octonion::zero();
        for (i, s) in v.iter().enumerate() {
            o.coords[i] = q(s, ctx)?;
        }
        Ok(o)
    };
    Ok(JordanElement {
        a: q(&j.diag[0], "diag[0]")?,
        b: q(&j.diag[1], "diag[1]")?,
        c: q(&j.diag[2], "diag[2]")?,
        c1: oct(&j.c1, "c1")?,
        c2: oct(&j.c2, "c2")?,
        c3: oct(&j.c3, "c3")?,
    })
}

// ----------------------------------------------------------------- siegel

/// Parses one table file into the provider. Line format:
/// `p <p> key <d | a,b,c> coeffs <a_d ... a_1 1> [steinberg <value>]`,
/// `#` starts a comment. Coefficients are listed constant-term first, ending
/// with the leading 1. Every entry passes the validation gate on insert.
pub fn load_siegel_table(provider: &mut SiegelProvider, path: &Path) -> Result<usize, FormatError> {
    let text = fs::read_to_string(path)?;
    let name = path.display().to_string();
    let mut added = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (p, key, entry) = parse_siegel_line(line, &name, lineno + 1)?;
        provider
            .insert(p, key, entry)
            .map_err(|e| FormatError::Table {
                path: name.clone(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
        added += 1;
    }
    Ok(added)
}

fn parse_siegel_line(
    line: &str,
    path: &str,
    lineno: usize,
) -> Result<(u64, InvariantKey, SiegelEntry), FormatError> {
    let err = |message: String| FormatError::Table {
        path: path.into(),
        line: lineno,
        message,
    };
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let mut i = 0usize;
    let expect_word = |w: &str, i: &mut usize| -> Result<(), FormatError> {
        if tokens.get(*i) == Some(&w) {
            *i += 1;
            Ok(())
        } else {
            Err(err(format!(
                "expected {:?}, found {:?}",
                w,
                tokens.get(*i).unwrap_or(&"<eol>")
            )))
        }
    };
    expect_word("p", &mut i)?;
    let p: u64 = tokens
        .get(i)
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err("bad prime".into()))?;
    i += 1;
    expect_word("key", &mut i)?;
    let key_tok = tokens.get(i).ok_or_else(|| err("missing key".into()))?;
    let key = if key_tok.contains(',') {
        let parts: Vec<u32> = key_tok
            .split(',')
            .map(|t| t.parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| err(format!("bad triple key {:?}", key_tok)))?;
        if parts.len() != 3 {
            return Err(err("triple key needs three valuations".into()));
        }
        let mut t = [parts[0], parts[1], parts[2]];
        t.sort_unstable();
        InvariantKey::Triple(t[0], t[1], t[2])
    } else {
        InvariantKey::Degree(
            key_tok
                .parse()
                .map_err(|_| err(format!("bad degree key {:?}", key_tok)))?,
        )
    };
    i += 1;
    expect_word("coeffs", &mut i)?;
    let mut coeffs: Vec<Int> = Vec::new();
    let mut steinberg = None;
    while let Some(tok) = tokens.get(i) {
        if *tok == "steinberg" {
            i += 1;
            let v = tokens
                .get(i)
                .ok_or_else(|| err("missing steinberg value".into()))?;
            let q = parse_rational(v).map_err(|e| err(format!("bad steinberg value: {}", e)))?;
            steinberg = Some(q);
            i += 1;
            break;
        }
        let c: Int = tok
            .parse()
            .map_err(|_| err(format!("bad coefficient {:?}", tok)))?;
        coeffs.push(c);
        i += 1;
    }
    if i != tokens.len() {
        return Err(err("trailing tokens".into()));
    }
    if coeffs.is_empty() {
        return Err(err("empty coefficient list".into()));
    }
    let d = (coeffs.len() - 1) as u32;
    Ok((
        p,
        key,
        SiegelEntry {
            poly: SiegelPolynomial { p, d, coeffs },
            steinberg,
            provenance: Provenance::TableLine(lineno),
        },
    ))
}
