use std::fmt;

/// A value read from a cell, before it becomes an RDF term.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarValue {
    Text(String),
    Number(f64),
    Integer(i64),
    Boolean(bool),
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Text(s) => f.write_str(s),
            ScalarValue::Number(n) => f.write_str(&render_number(*n)),
            ScalarValue::Integer(i) => write!(f, "{i}"),
            ScalarValue::Boolean(b) => write!(f, "{b}"),
        }
    }
}

/// Shortest round-trip decimal, without a fractional part when integral.
pub fn render_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "INF".into() } else { "-INF".into() }
    } else if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

/// Lexical form used for `xsd:double` literals: plain decimal for
/// magnitudes in [1e-3, 1e15), exponent notation otherwise.
pub fn double_lexical(v: f64) -> String {
    let a = v.abs();
    if !v.is_finite() || v == 0.0 || (1e-3..1e15).contains(&a) {
        render_number(v)
    } else {
        format!("{v:e}").replace('e', "E")
    }
}
