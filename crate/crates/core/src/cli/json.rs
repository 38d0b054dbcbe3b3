//! JSON output conventions: fractions stay "p/q" strings (handled by the
//! types themselves), floats are rewritten with 17 significant digits and
//! non-finite floats become "inf", "-inf" or "nan".

use serde::Serialize;
use serde_json::{Number, Value};

pub fn float(x: f64) -> Value {
    if x.is_nan() {
        return Value::String("nan".into());
    }
    if x.is_infinite() {
        return Value::String(if x > 0.0 { "inf" } else { "-inf" }.into());
    }
    let text = if x == 0.0 {
        "0.0".to_string()
    } else {
        let exp = x.abs().log10().floor() as i32;
        if (-5..16).contains(&exp) {
            format!("{:.*}", (16 - exp) as usize, x)
        } else {
            format!("{x:.16e}")
        }
    };
    Value::Number(text.parse::<Number>().expect("formatted float is valid JSON"))
}

fn is_integer(n: &Number) -> bool {
    n.is_i64() || n.is_u64()
}

/// Rewrites every non-integer number with [`float`].
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if !is_integer(&n) => n.as_f64().map(float).unwrap_or(Value::Number(n)),
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    normalize(serde_json::to_value(x).expect("report types serialize"))
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
