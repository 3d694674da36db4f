//! Small helpers for deterministic JSON output.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::Value;

/// Integers that fit in an `i64` become JSON numbers, larger ones decimal strings.
pub fn bigint(value: &BigInt) -> Value {
    match value.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(value.to_string()),
    }
}
