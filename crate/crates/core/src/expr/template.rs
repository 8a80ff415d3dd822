use std::fmt;
use std::str::FromStr;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use super::reference::{eval_ref, parse_ref_expr, RefExpr};
use super::EvalContext;
use crate::error::{Error, Result};

/// Everything except ALPHA / DIGIT / `-` `.` `_` `~` gets percent-encoded.
const IRI_UNSAFE: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplatePart {
    Literal(String),
    Placeholder(RefExpr),
}

/// A string with `{reference}` placeholders.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Template {
    pub parts: Vec<TemplatePart>,
}

impl Template {
    pub fn placeholders(&self) -> impl Iterator<Item = &RefExpr> {
        self.parts.iter().filter_map(|p| match p {
            TemplatePart::Placeholder(r) => Some(r),
            TemplatePart::Literal(_) => None,
        })
    }

    /// Substitutes every placeholder. One absent value makes the whole
    /// result absent.
    pub fn expand(&self, ctx: &EvalContext<'_>, iri_safe: bool) -> Result<Option<String>> {
        let mut out = String::new();
        for part in &self.parts {
            match part {
                TemplatePart::Literal(s) => out.push_str(s),
                TemplatePart::Placeholder(r) => {
                    let Some(value) = eval_ref(r, ctx)? else {
                        return Ok(None);
                    };
                    let value = value.to_string();
                    if iri_safe {
                        out.extend(utf8_percent_encode(&value, IRI_UNSAFE));
                    } else {
                        out.push_str(&value);
                    }
                }
            }
        }
        Ok(Some(out))
    }
}

pub fn iri_safe_encode(value: &str) -> String {
    utf8_percent_encode(value, IRI_UNSAFE).to_string()
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for part in &self.parts {
            match part {
                TemplatePart::Literal(s) => {
                    for c in s.chars() {
                        if matches!(c, '{' | '}' | '\\') {
                            write!(f, "\\")?;
                        }
                        write!(f, "{c}")?;
                    }
                }
                TemplatePart::Placeholder(r) => write!(f, "{{{r}}}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_template(s)
    }
}

/// Parses a template. `\{`, `\}` and `\\` stand for the literal character;
/// any other backslash is kept as is. Unknown variable names inside a
/// placeholder are reported as `E_UNKNOWN_VARIABLE`, all other problems as
/// `E_TEMPLATE_SYNTAX`.
pub fn parse_template(text: &str) -> Result<Template> {
    let bad = |message: String| Error::TemplateSyntax {
        text: text.to_owned(),
        message,
    };
    let mut parts = Vec::new();
    let mut literal = String::new();
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => match chars.peek() {
                Some(&(_, e @ ('{' | '}' | '\\'))) => {
                    literal.push(e);
                    chars.next();
                }
                _ => literal.push('\\'),
            },
            '{' => {
                let start = i + 1;
                let end = loop {
                    match chars.next() {
                        Some((j, '}')) => break j,
                        Some((j, '{')) => return Err(bad(format!("nested '{{' at offset {j}"))),
                        Some(_) => {}
                        None => return Err(bad(format!("unclosed '{{' at offset {i}"))),
                    }
                };
                let inner = &text[start..end];
                let r = parse_ref_expr(inner).map_err(|e| match e {
                    Error::UnknownVariable(_) => e,
                    other => bad(other.to_string()),
                })?;
                if !literal.is_empty() {
                    parts.push(TemplatePart::Literal(std::mem::take(&mut literal)));
                }
                parts.push(TemplatePart::Placeholder(r));
            }
            '}' => return Err(bad(format!("unbalanced '}}' at offset {i}"))),
            c => literal.push(c),
        }
    }
    if !literal.is_empty() {
        parts.push(TemplatePart::Literal(literal));
    }
    Ok(Template { parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::VariableName;
    use crate::workbook::{parse_a1, Cell, CellValue, Workbook};

    #[test]
    fn listing_template() {
        let t = parse_template("http://example.org/{address}").unwrap();
        assert_eq!(
            t.parts,
            [
                TemplatePart::Literal("http://example.org/".into()),
                TemplatePart::Placeholder(RefExpr::current(VariableName::Address)),
            ]
        );
        assert_eq!(t.to_string(), "http://example.org/{address}");
    }

    #[test]
    fn escapes_and_errors() {
        let t = parse_template("no placeholders").unwrap();
        assert_eq!(t.parts, [TemplatePart::Literal("no placeholders".into())]);
        assert_eq!(parse_template("a\\{b").unwrap().parts, [TemplatePart::Literal("a{b".into())]);
        assert_eq!(parse_template("a\\\\b\\x").unwrap().parts, [TemplatePart::Literal("a\\b\\x".into())]);
        assert!(parse_template("").unwrap().parts.is_empty());
        for bad in ["{address", "x}", "{{address}}", "{}", "{(1,2)value}"] {
            assert_eq!(parse_template(bad).unwrap_err().code(), "E_TEMPLATE_SYNTAX", "{bad}");
        }
        assert_eq!(parse_template("{valueStrng}").unwrap_err().code(), "E_UNKNOWN_VARIABLE");
    }

    #[test]
    fn expansion() {
        let mut wb = Workbook::new();
        let s = wb.sheet_mut("S");
        s.insert(Cell::new(parse_a1("A2").unwrap(), CellValue::Text("a b/ü".into())));
        s.insert(Cell::new(parse_a1("B2").unwrap(), CellValue::Blank));
        let ctx = EvalContext::new(&wb, "S", parse_a1("A2").unwrap());

        let t = parse_template("http://example.org/{address}").unwrap();
        assert_eq!(t.expand(&ctx, true).unwrap().as_deref(), Some("http://example.org/A2"));
        let t = parse_template("http://example.org/{valueString}").unwrap();
        assert_eq!(
            t.expand(&ctx, true).unwrap().as_deref(),
            Some("http://example.org/a%20b%2F%C3%BC")
        );
        assert_eq!(t.expand(&ctx, false).unwrap().as_deref(), Some("http://example.org/a b/ü"));
        let t = parse_template("x{(1,0).value}").unwrap();
        assert_eq!(t.expand(&ctx, true).unwrap(), None);
    }
}
