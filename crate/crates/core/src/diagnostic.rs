use std::fmt;

use serde::Serialize;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A problem found while parsing, validating or executing a mapping.
/// Serializes to one flat JSON object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triples_map: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub focus_node: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl Diagnostic {
    pub fn error(code: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, code.into(), message.into())
    }

    pub fn warning(code: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, code.into(), message.into())
    }

    fn new(severity: Severity, code: String, message: String) -> Self {
        Diagnostic {
            severity,
            code,
            message,
            triples_map: None,
            cell: None,
            focus_node: None,
            line: None,
            column: None,
        }
    }

    /// IRIs are stored bare, without the angle brackets of their N-Triples
    /// form; blank nodes keep their `_:` label.
    pub fn with_triples_map(mut self, id: impl fmt::Display) -> Self {
        self.triples_map = Some(node_text(id));
        self
    }

    pub fn with_cell(mut self, cell: impl fmt::Display) -> Self {
        self.cell = Some(cell.to_string());
        self
    }

    pub fn with_focus(mut self, node: impl fmt::Display) -> Self {
        self.focus_node = Some(node_text(node));
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostics always serialize")
    }
}

impl From<&Error> for Diagnostic {
    fn from(e: &Error) -> Self {
        let mut d = Diagnostic::error(e.code(), e.to_string());
        if let Error::Syntax { line, column, .. } | Error::UndefinedPrefix { line, column, .. } = e {
            d.line = Some(*line);
            d.column = Some(*column);
        }
        d
    }
}

impl From<Error> for Diagnostic {
    fn from(e: Error) -> Self {
        Diagnostic::from(&e)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{severity}[{}]: {}", self.code, self.message)?;
        if let Some(cell) = &self.cell {
            write!(f, " (cell {cell})")?;
        }
        Ok(())
    }
}

fn node_text(node: impl fmt::Display) -> String {
    let s = node.to_string();
    match s.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
        Some(iri) => iri.to_owned(),
        None => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let d = Diagnostic::warning("W_NO_SUBJECT", "no subject")
            .with_triples_map("<http://ex/m>")
            .with_cell("A2");
        assert_eq!(
            d.to_json(),
            r#"{"severity":"warning","code":"W_NO_SUBJECT","message":"no subject","triplesMap":"http://ex/m","cell":"A2"}"#
        );
        let e = Error::Syntax {
            line: 3,
            column: 7,
            message: "expected '.'".into(),
        };
        let d = Diagnostic::from(e);
        assert!(d.is_error());
        assert_eq!((d.line, d.column), (Some(3), Some(7)));
        assert_eq!(d.code, "E_SYNTAX");
    }
}
