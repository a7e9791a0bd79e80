//! JSON encoding for arbitrary-precision integers: a plain number when it
//! fits in `i64`, otherwise a decimal string.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serializer;
use serde_json::Value;

pub fn to_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

pub fn serialize_opt<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize(v, s),
        None => s.serialize_none(),
    }
}

pub fn serialize_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(to_value))
}
