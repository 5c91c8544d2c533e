//! Canonical report serialization.
//!
//! Object keys are sorted, floats are rounded to 12 significant digits and
//! printed in shortest round-trip form, and every file ends with a newline,
//! so equal reports are equal byte strings.

use serde_json::{Number, Value};
use sha2::{Digest, Sha256};

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("valid float")
}

/// Rounds every float in `v`. Non-finite floats become `null`.
pub fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

pub fn to_canonical_string(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonicalize(v)).expect("serializable");
    s.push('\n');
    s
}

/// CSV cell for a float with the same rounding as JSON reports.
pub fn csv_float(x: f64) -> String {
    let r = round_sig(x);
    if r.is_finite() {
        r.to_string()
    } else {
        String::new()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
