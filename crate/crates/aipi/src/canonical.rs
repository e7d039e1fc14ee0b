//! Canonical JSON emission and content hashing.
//!
//! Every file a release emits goes through this module so that two builds
//! from identical inputs are byte-identical: object keys sorted (serde_json's
//! `Value` map is a `BTreeMap`), numbers printed as the shortest round-trip
//! decimal of their 9-decimal-rounded value, LF line endings, trailing
//! newline.

use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Error;

/// Decimal places retained by [`round9`]. All published numeric values are
/// rounded once to this precision.
pub const DECIMALS: u32 = 9;

/// Round to 9 decimal places, ties to even.
pub fn round9(v: f64) -> f64 {
    let scale = 10f64.powi(DECIMALS as i32);
    let r = (v * scale).round_ties_even() / scale;
    // normalize -0.0 so formatting is stable
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Serialize to canonical JSON text: sorted keys, 2-space indent, LF,
/// trailing newline. Every float is rounded to 9 decimals and printed as its
/// shortest round-trip decimal; integers pass through untouched.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String, Error> {
    let mut v = serde_json::to_value(value)?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn round_floats(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) => {
            if n.is_f64() {
                let r = round9(n.as_f64().unwrap());
                *n = serde_json::Number::from_f64(r).expect("rounded value is finite");
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_floats),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Write canonical JSON to a file, returning the emitted bytes.
pub fn write_canonical<T: Serialize>(path: &Path, value: &T) -> Result<Vec<u8>, Error> {
    let s = to_canonical_string(value)?;
    fs::write(path, s.as_bytes())?;
    Ok(s.into_bytes())
}

/// Lowercase hex SHA-256 digest.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Shortest round-trip decimal of a 9-decimal-rounded value, for CSV cells.
pub fn fmt_num(v: f64) -> String {
    format!("{}", round9(v))
}

/// CSV cell for an optional value; undefined serializes as an empty field.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}
