//! Round-trip-exact number formatting shared by the JSON and CSV writers.

use serde_json::Value;

/// Shortest decimal that parses back to the same `f64`; non-finite values
/// become `inf`, `-inf` or `nan`.
pub fn real(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        serde_json::Number::from_f64(x)
            .map(|n| n.to_string())
            .unwrap_or_default()
    }
}

/// JSON value for a real; non-finite values are encoded as strings.
pub fn real_json(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(real(x)),
    }
}

/// Inverse of [`real_json`].
pub fn parse_real_json(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => parse_real(s),
        _ => None,
    }
}

/// Parses the output of [`real`].
pub fn parse_real(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        t => t.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for &x in &[0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0, 1.0, f64::MAX, 5e-324] {
            assert_eq!(parse_real(&real(x)).unwrap().to_bits(), x.to_bits());
            assert_eq!(parse_real_json(&real_json(x)).unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(real(f64::NEG_INFINITY), "-inf");
        assert_eq!(parse_real_json(&real_json(f64::INFINITY)), Some(f64::INFINITY));
    }
}
