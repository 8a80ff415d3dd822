//! The `gridrml` command.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;

use crate::engine::{Engine, ExecutionOptions, FsResolver, DEFAULT_BASE_IRI};
use crate::rdf::{serialize_graph, RdfFormat, Term};

/// Map spreadsheet cells to RDF with an RML mapping document.
#[derive(Debug, Parser)]
#[command(name = "gridrml", version)]
struct Args {
    /// Mapping document (Turtle).
    #[arg(short = 'm', long, value_name = "FILE")]
    mapping: PathBuf,

    /// Write RDF here instead of standard output.
    #[arg(short = 'o', long, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Output syntax: ntriples or turtle.
    #[arg(long, default_value = "ntriples")]
    format: RdfFormat,

    /// Directory `ss:url` paths are resolved against. Defaults to the
    /// mapping document's directory.
    #[arg(long, value_name = "DIR", env = "GRIDRML_WORKBOOK_ROOT")]
    workbook_root: Option<PathBuf>,

    /// Base IRI for relative IRIs in the mapping and in generated terms.
    #[arg(long, value_name = "IRI", default_value = DEFAULT_BASE_IRI)]
    base: String,

    /// Stop at the first error and emit no RDF.
    #[arg(long)]
    strict: bool,

    /// Also iterate cells that carry only formatting.
    #[arg(long)]
    include_blank: bool,
}

/// Runs the command line. Returns the process exit code: 0 on success, 1
/// when error diagnostics were reported, 2 for usage and I/O failures.
///
/// RDF goes to `stdout` (or `--output`); diagnostics go to `stderr` as
/// one JSON object per line.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if informational {
                let _ = stdout.write_all(rendered.as_bytes());
                return 0;
            }
            let _ = stderr.write_all(rendered.as_bytes());
            return 2;
        }
    };
    if Term::checked_iri(args.base.as_str()).is_err() {
        let _ = writeln!(stderr, "error: --base '{}' is not an absolute IRI", args.base);
        return 2;
    }
    let text = match std::fs::read_to_string(&args.mapping) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", args.mapping.display());
            return 2;
        }
    };
    let root = args.workbook_root.clone().unwrap_or_else(|| {
        args.mapping
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    });

    let engine = Engine::new(ExecutionOptions {
        base_iri: args.base.clone(),
        strict: args.strict,
        include_blank_cells: args.include_blank,
    });
    let exec = engine.run_text(&text, &FsResolver::new(root));
    for d in &exec.diagnostics {
        let _ = writeln!(stderr, "{}", d.to_json());
    }
    let rdf = serialize_graph(&exec.graph, args.format);
    let written = match &args.output {
        Some(path) => std::fs::write(path, rdf.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(rdf.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(message) = written {
        let _ = writeln!(stderr, "error: {message}");
        return 2;
    }
    if exec.has_errors() {
        1
    } else {
        0
    }
}
