//! Number formatting shared by the CSV and JSON writers.

/// Round-trip decimal with 17 significant digits, e.g. `5.2377761180260870e-1`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Rewrites every floating-point number in `value` with [`format_number`]
/// precision; non-finite numbers become `null`. Integers are left alone.
pub fn normalize_json(value: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match value {
        Value::Number(n) if n.is_f64() => json_number(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => Value::Array(items.into_iter().map(normalize_json).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, normalize_json(v)))
                .collect(),
        ),
        other => other,
    }
}

/// A JSON number carrying 17 significant digits, or `null` if `x` is not finite.
pub fn json_number(x: f64) -> serde_json::Value {
    if !x.is_finite() {
        return serde_json::Value::Null;
    }
    format_number(x)
        .parse::<serde_json::Number>()
        .map_or(serde_json::Value::Null, serde_json::Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers_keep_seventeen_digits() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        let v = normalize_json(json!({"a": [0.5, 3], "b": f64::NAN, "c": "x"}));
        assert_eq!(
            v.to_string(),
            r#"{"a":[5.0000000000000000e-1,3],"b":null,"c":"x"}"#
        );
        let back: f64 =
            serde_json::from_str(&json_number(std::f64::consts::PI).to_string()).unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }
}
