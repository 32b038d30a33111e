//! Deterministic CSV, JSON and SVG rendering.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const SCHEMA: &str = "pseudospec/1";

/// Fixed 17-significant-digit scientific notation.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:.16e}")
    }
}

/// JSON object with the schema tag, command, config and constraint block
/// merged with the payload keys. Keys serialize in sorted order.
pub fn envelope<C: Serialize, F: Serialize>(command: &str, config: &C, constraints: &F, payload: Value) -> Result<Value, CliError> {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(command));
    map.insert("config".into(), serde_json::to_value(config)?);
    map.insert("constraints".into(), serde_json::to_value(constraints)?);
    if let Value::Object(extra) = payload {
        map.extend(extra);
    }
    Ok(Value::Object(map))
}

/// `#` comment lines carrying the same metadata as [`envelope`].
pub fn csv_header<C: Serialize, F: Serialize>(command: &str, config: &C, constraints: &F, notes: &[String]) -> Result<String, CliError> {
    let mut s = format!("# schema: {SCHEMA}\n# command: {command}\n");
    s += &format!("# config: {}\n", serde_json::to_string(config)?);
    s += &format!("# constraints: {}\n", serde_json::to_string(constraints)?);
    for n in notes {
        s += &format!("# note: {n}\n");
    }
    Ok(s)
}

pub fn json_text(v: &Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub struct Curve<'a> {
    pub points: Vec<(f64, f64)>,
    pub color: &'a str,
    pub label: String,
}

/// Line plot with a fixed layout; points outside the y-range are clipped.
pub fn svg_plot(title: &str, curves: &[Curve], x_range: (f64, f64), y_range: (f64, f64)) -> String {
    let (w, h, pad) = (800.0, 500.0, 50.0);
    let sx = |x: f64| pad + (x - x_range.0) / (x_range.1 - x_range.0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y_range.0) / (y_range.1 - y_range.0) * (h - 2.0 * pad);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{pad}\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\">{title}</text>\n\
         <rect x=\"{pad}\" y=\"{pad}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    s += &format!(
        "<text x=\"{pad}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">x: [{:.4}, {:.4}]  y: [{:.4}, {:.4}]</text>\n",
        h - 15.0,
        x_range.0,
        x_range.1,
        y_range.0,
        y_range.1
    );
    for (i, c) in curves.iter().enumerate() {
        let mut segment = Vec::new();
        let flush = |seg: &mut Vec<String>, s: &mut String| {
            if seg.len() > 1 {
                *s += &format!("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", c.color, seg.join(" "));
            }
            seg.clear();
        };
        for &(x, y) in &c.points {
            if y.is_finite() && y >= y_range.0 && y <= y_range.1 {
                segment.push(format!("{:.2},{:.2}", sx(x), sy(y)));
            } else {
                flush(&mut segment, &mut s);
            }
        }
        flush(&mut segment, &mut s);
        s += &format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}</text>\n",
            w - pad - 150.0,
            pad + 18.0 * (i as f64 + 1.0),
            c.color,
            c.label
        );
    }
    s + "</svg>\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(float(0.75), "7.5000000000000000e-1");
        assert_eq!(float(f64::NAN), "NaN");
    }

    #[test]
    fn envelope_keys() {
        let v = envelope("x", &json!({"a": 1}), &json!({}), json!({"rows": []})).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "config", "constraints", "rows", "schema"]);
    }

    #[test]
    fn svg_clips() {
        let c = Curve { points: vec![(0.0, 0.0), (0.5, 10.0), (1.0, 0.5)], color: "red", label: "v".into() };
        let s = svg_plot("t", &[c], (0.0, 1.0), (0.0, 1.0));
        assert!(s.starts_with("<svg") && !s.contains("polyline"));
    }
}
