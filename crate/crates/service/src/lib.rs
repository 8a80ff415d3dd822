//! HTTP backend for the gridrml playground.
//!
//! Routes:
//!
//! - `POST /api/map` runs a mapping against an uploaded workbook or a
//!   bundled example. Accepts JSON (workbook as base64) or multipart.
//! - `GET /api/examples` lists the bundled examples.
//! - `GET /api/examples/{id}/workbook` downloads an example workbook.
//! - `GET /healthz` answers `ok`.
//!
//! Mapping documents never reach the filesystem: `ss:url` is matched only
//! against the name of the workbook sent with the request.

use std::time::Instant;

use axum::extract::{DefaultBodyLimit, FromRequest, Multipart, Path, Request};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::Engine as _;
use gridrml::engine::{Engine, ExecutionOptions, MemoryResolver, Stats, DEFAULT_BASE_IRI};
use gridrml::rdf::{serialize_graph, RdfFormat, Term};
use gridrml::workbook::Workbook;
use gridrml::Diagnostic;
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};

pub const DEFAULT_BODY_LIMIT: usize = 10 * 1024 * 1024;

/// Name given to an uploaded workbook when the request does not supply one.
pub const DEFAULT_WORKBOOK_NAME: &str = "workbook.xlsx";

const XLSX_MIME: &str = "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Largest accepted request body in bytes.
    pub body_limit: usize,
    /// Origin allowed by CORS. `None` allows any origin.
    pub allowed_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            body_limit: DEFAULT_BODY_LIMIT,
            allowed_origin: None,
        }
    }
}

pub struct Example {
    pub id: &'static str,
    pub title: &'static str,
    pub description: &'static str,
    pub mapping_text: &'static str,
    pub workbook_name: &'static str,
    pub workbook: &'static [u8],
}

pub static EXAMPLES: [Example; 3] = [
    Example {
        id: "listing-1-2",
        title: "Filtered scores",
        description: "Cells whose text matches /Know\\w*/ become subjects; the score two columns to the right becomes the object, the header above it the predicate.",
        mapping_text: include_str!("../assets/listing.ttl"),
        workbook_name: "papers.xlsx",
        workbook: include_bytes!("../assets/papers.xlsx"),
    },
    Example {
        id: "zip-demo",
        title: "Zipped color lists",
        description: "A split function turns each color list into several objects, paired one to one with a list of predicates.",
        mapping_text: include_str!("../assets/zip.ttl"),
        workbook_name: "colors.xlsx",
        workbook: include_bytes!("../assets/colors.xlsx"),
    },
    Example {
        id: "graph-demo",
        title: "Authors as a graph",
        description: "A function returns a small graph of person resources per cell; its selected nodes become the objects.",
        mapping_text: include_str!("../assets/graph.ttl"),
        workbook_name: "books.xlsx",
        workbook: include_bytes!("../assets/books.xlsx"),
    },
];

pub fn find_example(id: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.id == id)
}

/// # Panics
///
/// If `allowed_origin` is not a valid header value.
pub fn router(config: ServiceConfig) -> Router {
    let origin = match &config.allowed_origin {
        Some(o) => AllowOrigin::exact(HeaderValue::from_str(o).expect("valid origin header")),
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/api/examples", get(list_examples))
        .route("/api/examples/{id}/workbook", get(example_workbook))
        .route("/api/map", post(map))
        .layer(DefaultBodyLimit::max(config.body_limit))
        .layer(cors)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExampleSummary {
    pub id: String,
    pub title: String,
    pub mapping_text: String,
    pub workbook_url: String,
    pub description: String,
}

async fn list_examples() -> Json<Vec<ExampleSummary>> {
    Json(
        EXAMPLES
            .iter()
            .map(|e| ExampleSummary {
                id: e.id.into(),
                title: e.title.into(),
                mapping_text: e.mapping_text.into(),
                workbook_url: format!("/api/examples/{}/workbook", e.id),
                description: e.description.into(),
            })
            .collect(),
    )
}

async fn example_workbook(Path(id): Path<String>) -> Response {
    match find_example(&id) {
        Some(e) => (
            [
                (header::CONTENT_TYPE, XLSX_MIME.to_owned()),
                (
                    header::CONTENT_DISPOSITION,
                    format!("attachment; filename=\"{}\"", e.workbook_name),
                ),
            ],
            e.workbook,
        )
            .into_response(),
        None => bad(StatusCode::NOT_FOUND, format!("unknown example '{id}'")),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MapOptions {
    /// `ntriples` (default) or `turtle`.
    pub format: Option<String>,
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub include_blank: bool,
    pub base_iri: Option<String>,
}

/// JSON form of a map request. `workbook` is base64.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MapRequest {
    pub mapping_text: Option<String>,
    pub workbook: Option<String>,
    pub workbook_name: Option<String>,
    pub example_id: Option<String>,
    #[serde(default)]
    pub options: MapOptions,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResponseStats {
    #[serde(flatten)]
    pub stats: Stats,
    pub elapsed_millis: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MapResponse {
    pub rdf: String,
    pub diagnostics: Vec<Diagnostic>,
    pub stats: ResponseStats,
}

/// A request after transport decoding.
struct Job {
    mapping_text: String,
    workbook_name: String,
    workbook: Vec<u8>,
    format: RdfFormat,
    options: ExecutionOptions,
}

fn bad(status: StatusCode, message: impl Into<String>) -> Response {
    #[derive(Serialize)]
    struct ErrorBody {
        error: String,
    }
    (status, Json(ErrorBody { error: message.into() })).into_response()
}

/// Keeps 413 for oversize bodies; every other rejection is a 400.
fn rejected(status: StatusCode, message: String) -> Response {
    if status == StatusCode::PAYLOAD_TOO_LARGE {
        bad(status, message)
    } else {
        bad(StatusCode::BAD_REQUEST, message)
    }
}

async fn map(req: Request) -> Response {
    let multipart = req
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("multipart/form-data"));
    let request = if multipart {
        match Multipart::from_request(req, &()).await {
            Ok(m) => read_multipart(m).await,
            Err(e) => Err(rejected(e.status(), e.body_text())),
        }
    } else {
        match Json::<MapRequest>::from_request(req, &()).await {
            Ok(Json(r)) => decode_json(r),
            Err(e) => Err(rejected(e.status(), e.body_text())),
        }
    };
    let job = match request.and_then(into_job) {
        Ok(j) => j,
        Err(resp) => return resp,
    };
    let started = Instant::now();
    match tokio::task::spawn_blocking(move || run_job(job)).await {
        Ok((rdf, diagnostics, stats)) => {
            let elapsed_millis = started.elapsed().as_millis().try_into().unwrap_or(u64::MAX);
            Json(MapResponse {
                rdf,
                diagnostics,
                stats: ResponseStats {
                    stats,
                    elapsed_millis,
                },
            })
            .into_response()
        }
        Err(e) => bad(StatusCode::INTERNAL_SERVER_ERROR, format!("engine task failed: {e}")),
    }
}

#[allow(clippy::result_large_err)]
fn decode_json(r: MapRequest) -> Result<(MapRequest, Option<Vec<u8>>), Response> {
    let bytes = match &r.workbook {
        Some(b64) => Some(
            base64::engine::general_purpose::STANDARD
                .decode(b64.trim())
                .map_err(|e| bad(StatusCode::BAD_REQUEST, format!("workbook is not base64: {e}")))?,
        ),
        None => None,
    };
    Ok((r, bytes))
}

async fn read_multipart(mut m: Multipart) -> Result<(MapRequest, Option<Vec<u8>>), Response> {
    let mut req = MapRequest::default();
    let mut bytes = None;
    let fail = |e: axum::extract::multipart::MultipartError| rejected(e.status(), e.body_text());
    while let Some(field) = m.next_field().await.map_err(fail)? {
        let name = field.name().unwrap_or_default().to_owned();
        match name.as_str() {
            "workbook" => {
                if req.workbook_name.is_none() {
                    req.workbook_name = field.file_name().map(str::to_owned);
                }
                bytes = Some(field.bytes().await.map_err(fail)?.to_vec());
            }
            "mappingText" => req.mapping_text = Some(field.text().await.map_err(fail)?),
            "workbookName" => req.workbook_name = Some(field.text().await.map_err(fail)?),
            "exampleId" => req.example_id = Some(field.text().await.map_err(fail)?),
            "options" => {
                let text = field.text().await.map_err(fail)?;
                req.options = serde_json::from_str(&text).map_err(|e| {
                    bad(StatusCode::BAD_REQUEST, format!("options: {e}"))
                })?;
            }
            other => {
                return Err(bad(
                    StatusCode::BAD_REQUEST,
                    format!("unexpected form field '{other}'"),
                ))
            }
        }
    }
    Ok((req, bytes))
}

#[allow(clippy::result_large_err)]
fn into_job((req, bytes): (MapRequest, Option<Vec<u8>>)) -> Result<Job, Response> {
    let (mapping_text, workbook_name, workbook) = match (bytes, &req.example_id) {
        (Some(_), Some(_)) => {
            return Err(bad(
                StatusCode::BAD_REQUEST,
                "send either a workbook or an exampleId, not both",
            ))
        }
        (None, None) => {
            return Err(bad(StatusCode::BAD_REQUEST, "a workbook or an exampleId is required"))
        }
        (Some(bytes), None) => {
            let text = req
                .mapping_text
                .ok_or_else(|| bad(StatusCode::BAD_REQUEST, "mappingText is required"))?;
            let name = req
                .workbook_name
                .filter(|n| !n.is_empty())
                .unwrap_or_else(|| DEFAULT_WORKBOOK_NAME.to_owned());
            (text, name, bytes)
        }
        (None, Some(id)) => {
            let example = find_example(id)
                .ok_or_else(|| bad(StatusCode::BAD_REQUEST, format!("unknown exampleId '{id}'")))?;
            let text = req
                .mapping_text
                .unwrap_or_else(|| example.mapping_text.to_owned());
            (text, example.workbook_name.to_owned(), example.workbook.to_vec())
        }
    };
    let format = match &req.options.format {
        Some(f) => f
            .parse::<RdfFormat>()
            .map_err(|e| bad(StatusCode::BAD_REQUEST, e))?,
        None => RdfFormat::NTriples,
    };
    let base_iri = req
        .options
        .base_iri
        .unwrap_or_else(|| DEFAULT_BASE_IRI.to_owned());
    if Term::checked_iri(base_iri.as_str()).is_err() {
        return Err(bad(
            StatusCode::BAD_REQUEST,
            format!("baseIri '{base_iri}' is not an absolute IRI"),
        ));
    }
    Ok(Job {
        mapping_text,
        workbook_name,
        workbook,
        format,
        options: ExecutionOptions {
            base_iri,
            strict: req.options.strict,
            include_blank_cells: req.options.include_blank,
        },
    })
}

fn run_job(job: Job) -> (String, Vec<Diagnostic>, Stats) {
    let workbook = match Workbook::from_bytes(&job.workbook) {
        Ok(wb) => wb,
        Err(e) => {
            let d = Diagnostic::from(&e).with_focus(&job.workbook_name);
            return (String::new(), vec![d], Stats::default());
        }
    };
    let mut resolver = MemoryResolver::new();
    resolver.insert(job.workbook_name, workbook);
    let exec = Engine::new(job.options).run_text(&job.mapping_text, &resolver);
    (
        serialize_graph(&exec.graph, job.format),
        exec.diagnostics,
        exec.stats,
    )
}
