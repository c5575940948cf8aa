//! Deterministic JSON / CSV / text emission for reports.

use std::io;

use serde::{Serialize, Serializer};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

/// A real that serializes non-finite values as strings (`"inf"`, `"-inf"`,
/// `"nan"`) instead of JSON `null`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else if self.0.is_nan() {
            s.serialize_str("nan")
        } else if self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real(x)
    }
}

/// Pretty JSON with every float written with 17 significant digits.
struct FixedDigits<'a>(PrettyFormatter<'a>);

impl Formatter for FixedDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Canonical JSON: struct field order, 17 significant digits, trailing
/// newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> crate::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Renders a JSON value as indented `key: value` lines.
pub fn to_text(value: &Value) -> String {
    let mut out = String::new();
    text_into(&mut out, value, 0, None);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn text_into(out: &mut String, v: &Value, depth: usize, key: Option<&str>) {
    let pad = "  ".repeat(depth);
    let label = key.map(|k| format!("{k}:")).unwrap_or_else(|| "-".into());
    match v {
        Value::Object(map) => {
            if key.is_some() || depth > 0 {
                out.push_str(&format!("{pad}{label}\n"));
            }
            let inner = if key.is_some() || depth > 0 { depth + 1 } else { depth };
            for (k, x) in map {
                text_into(out, x, inner, Some(k));
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}{label} [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{label}\n"));
            for x in items {
                text_into(out, x, depth + 1, None);
            }
        }
        _ => out.push_str(&format!("{pad}{label} {}\n", scalar(v))),
    }
}

/// Flattens a list of JSON objects into CSV: nested keys are joined with
/// `.`, arrays of scalars with `;`. Columns follow first appearance.
pub fn to_csv(rows: &[Value]) -> crate::Result<String> {
    let flat: Vec<Vec<(String, String)>> = rows
        .iter()
        .map(|r| {
            let mut cells = Vec::new();
            flatten(&mut cells, String::new(), r);
            cells
        })
        .collect();
    let mut header: Vec<String> = Vec::new();
    for row in &flat {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in &flat {
        let record: Vec<&str> = header
            .iter()
            .map(|h| row.iter().find(|(k, _)| k == h).map_or("", |(_, v)| v.as_str()))
            .collect();
        w.write_record(&record)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
}

fn flatten(cells: &mut Vec<(String, String)>, prefix: String, v: &Value) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(cells, join(k), x);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object()) => {
            let parts: Vec<String> = items
                .iter()
                .map(|x| match x {
                    Value::Array(inner) => inner.iter().map(scalar).collect::<Vec<_>>().join(" "),
                    _ => scalar(x),
                })
                .collect();
            cells.push((prefix, parts.join(";")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(cells, join(&i.to_string()), x);
            }
        }
        _ => cells.push((prefix, scalar(v))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[derive(Serialize)]
    struct Sample {
        b: f64,
        a: Real,
        n: u32,
    }

    #[test]
    fn json_digits_and_order() {
        let s = to_json(&Sample {
            b: 0.1,
            a: Real(f64::INFINITY),
            n: 3,
        })
        .unwrap();
        assert_eq!(s, "{\n  \"b\": 1.0000000000000001e-1,\n  \"a\": \"inf\",\n  \"n\": 3\n}\n");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64().unwrap(), 0.1);
    }

    #[test]
    fn round_trip_is_exact() {
        for x in [1.0 / 3.0, 2f64.sqrt(), 1e-300, 123456.789, -0.5] {
            let s = to_json(&x).unwrap();
            assert_eq!(s.trim().parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_flattening() {
        let rows = vec![json!({"theorem": "T1", "inputs": {"n": 4}, "ok": true}), json!({"theorem": "T2", "extra": [1, 2]})];
        let s = to_csv(&rows).unwrap();
        assert_eq!(s, "theorem,inputs.n,ok,extra\nT1,4,true,\nT2,,,1;2\n");
    }

    #[test]
    fn text_rendering() {
        let t = to_text(&json!({"a": 1, "b": {"c": "x"}, "d": [1, 2]}));
        assert_eq!(t, "a: 1\nb:\n  c: x\nd: [1, 2]\n");
    }
}
