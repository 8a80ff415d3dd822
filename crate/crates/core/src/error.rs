use thiserror::Error;

/// Every failure the library can report. Each variant carries a stable code
/// (see [`Error::code`]) that also shows up in diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undefined prefix '{prefix}:' at line {line}, column {column}")]
    UndefinedPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },
    #[error("malformed RDF list at {0}")]
    MalformedList(String),

    #[error("i/o error: {0}")]
    Io(String),
    #[error("not a readable xlsx workbook: {0}")]
    Format(String),
    #[error("invalid cell address '{0}'")]
    Address(String),
    #[error("invalid cell range '{0}'")]
    Range(String),
    #[error("sheet '{0}' not found")]
    SheetNotFound(String),
    #[error("type error: {0}")]
    Type(String),

    #[error("logical source {node} lacks {field}")]
    MissingSourceField { node: String, field: &'static str },
    #[error("bad term map: {0}")]
    BadTermMap(String),
    #[error("zip pairing not applicable: {0}")]
    ZipShape(String),

    #[error("invalid reference '{text}': {message}")]
    RefSyntax { text: String, message: String },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("invalid template '{text}': {message}")]
    TemplateSyntax { text: String, message: String },
    #[error("filter syntax error at offset {position} in '{text}': {message}")]
    FilterSyntax {
        text: String,
        position: usize,
        message: String,
    },
    #[error("filter type error: {0}")]
    FilterType(String),

    #[error("function <{0}> is not registered")]
    FnUnregistered(String),
    #[error("function <{function}>: {message}")]
    FnParam { function: String, message: String },
    #[error("function <{function}> failed: {message}")]
    FnRuntime { function: String, message: String },

    #[error("'{0}' is not a valid absolute IRI")]
    BadIri(String),
    #[error("zip needs equally long lists, got {predicates} predicates and {objects} objects")]
    ZipLength { predicates: usize, objects: usize },
    #[error("graph-valued function result does not parse: {0}")]
    GraphParse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "E_SYNTAX",
            Error::UndefinedPrefix { .. } => "E_UNDEFINED_PREFIX",
            Error::MalformedList(_) => "E_MALFORMED_LIST",
            Error::Io(_) => "E_IO",
            Error::Format(_) => "E_FORMAT",
            Error::Address(_) => "E_ADDRESS",
            Error::Range(_) => "E_RANGE",
            Error::SheetNotFound(_) => "E_SHEET_NOT_FOUND",
            Error::Type(_) => "E_TYPE",
            Error::MissingSourceField { .. } => "E_MISSING_SOURCE_FIELD",
            Error::BadTermMap(_) => "E_BAD_TERMMAP",
            Error::ZipShape(_) => "E_ZIP_SHAPE",
            Error::RefSyntax { .. } => "E_REF_SYNTAX",
            Error::UnknownVariable(_) => "E_UNKNOWN_VARIABLE",
            Error::TemplateSyntax { .. } => "E_TEMPLATE_SYNTAX",
            Error::FilterSyntax { .. } => "E_FILTER_SYNTAX",
            Error::FilterType(_) => "E_FILTER_TYPE",
            Error::FnUnregistered(_) => "E_FN_UNREGISTERED",
            Error::FnParam { .. } => "E_FN_PARAM",
            Error::FnRuntime { .. } => "E_FN_RUNTIME",
            Error::BadIri(_) => "E_BAD_IRI",
            Error::ZipLength { .. } => "E_ZIP_LENGTH",
            Error::GraphParse(_) => "E_GRAPH_PARSE",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
