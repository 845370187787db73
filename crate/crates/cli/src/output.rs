//! Result documents: float rounding and CSV rendering.

use serde_json::{Map, Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every non-integer number in the document. Non-finite values,
/// which JSON cannot carry, become strings.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            Number::from_f64(round_sig(x)).map_or_else(|| Value::String(x.to_string()), Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

pub fn render_json(v: Value) -> String {
    let mut s = serde_json::to_string(&round_floats(v)).expect("document serializes");
    s.push('\n');
    s
}

/// Writes rows of already-formatted cells as CSV.
pub fn render_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

pub fn fmt_float(x: f64) -> String {
    round_sig(x).to_string()
}
