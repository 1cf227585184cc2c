//! Deterministic JSON document builder and writer.
//!
//! Output must be byte-identical across repeated invocations, so objects
//! keep their fields in insertion order (a vector of pairs, never a hash
//! map) and every float is printed the same way: scientific notation with
//! 17 significant digits, enough to round-trip any finite `f64` exactly.
//!
//! Layout is deliberately simple: objects and arrays of containers break
//! across lines with two-space indentation, while arrays whose elements
//! are all scalars stay on one line so numeric tables remain readable.

use std::fmt::Write as _;

/// A JSON value with deterministic serialization.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    /// Integer written without a decimal point (counts, seeds, indices).
    Int(i64),
    /// Unsigned integer (shot counts can exceed `i64::MAX` in principle).
    UInt(u64),
    /// Finite float, written as `{:.16e}` (17 significant digits).
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    /// Fields serialize in insertion order.
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    /// Array of floats from any iterable.
    pub fn nums<I: IntoIterator<Item = f64>>(it: I) -> Json {
        Json::Arr(it.into_iter().map(Json::Num).collect())
    }

    /// Serializes the document with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_value(&mut out, self, 0);
        out.push('\n');
        out
    }
}

/// Ordered-object builder, the only way command code assembles output.
#[derive(Debug, Default)]
pub struct ObjBuilder {
    fields: Vec<(String, Json)>,
}

impl ObjBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: Json) -> Self {
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn build(self) -> Json {
        Json::Obj(self.fields)
    }
}

/// `{:.16e}` gives one leading digit plus 16 fractional digits: 17
/// significant digits, the minimum that round-trips every finite `f64`.
/// The `e0`-style exponent is valid JSON. Non-finite values must never
/// reach serialization; commands validate before assembling output.
pub fn fmt_f64(x: f64) -> String {
    debug_assert!(x.is_finite(), "non-finite value in JSON output");
    format!("{x:.16e}")
}

fn is_scalar(v: &Json) -> bool {
    !matches!(v, Json::Arr(_) | Json::Obj(_))
}

fn write_indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

pub fn escape_str(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn write_value(out: &mut String, v: &Json, depth: usize) {
    match v {
        Json::Null => out.push_str("null"),
        Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Json::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Json::UInt(u) => {
            let _ = write!(out, "{u}");
        }
        Json::Num(x) => out.push_str(&fmt_f64(*x)),
        Json::Str(s) => escape_str(out, s),
        Json::Arr(items) => write_array(out, items, depth),
        Json::Obj(fields) => write_object(out, fields, depth),
    }
}

fn write_array(out: &mut String, items: &[Json], depth: usize) {
    if items.is_empty() {
        out.push_str("[]");
        return;
    }
    if items.iter().all(is_scalar) {
        out.push('[');
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write_value(out, item, depth);
        }
        out.push(']');
        return;
    }
    out.push_str("[\n");
    for (i, item) in items.iter().enumerate() {
        write_indent(out, depth + 1);
        write_value(out, item, depth + 1);
        if i + 1 < items.len() {
            out.push(',');
        }
        out.push('\n');
    }
    write_indent(out, depth);
    out.push(']');
}

fn write_object(out: &mut String, fields: &[(String, Json)], depth: usize) {
    if fields.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    for (i, (k, v)) in fields.iter().enumerate() {
        write_indent(out, depth + 1);
        escape_str(out, k);
        out.push_str(": ");
        write_value(out, v, depth + 1);
        if i + 1 < fields.len() {
            out.push(',');
        }
        out.push('\n');
    }
    write_indent(out, depth);
    out.push('}');
}
