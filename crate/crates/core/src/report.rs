//! Canonical JSON: sorted keys, floats rounded to 12 significant digits.
//!
//! Parsing canonical output and writing it again yields the same bytes.

use serde::Serialize;
use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn canonicalize(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, canonicalize(v)))
                .collect(),
        ),
        other => other,
    }
}

/// Canonical value of any serializable report.
pub fn to_canonical_value<T: Serialize>(value: &T) -> serde_json::Result<Value> {
    Ok(canonicalize(serde_json::to_value(value)?))
}

/// Pretty-printed canonical JSON.
pub fn to_canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string_pretty(&to_canonical_value(value)?)
}
