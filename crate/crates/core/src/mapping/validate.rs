use super::model::{TermMapKind, TermType, TriplesMap};
use crate::diagnostic::Diagnostic;
use crate::functions::FunctionRegistry;
use crate::rdf::Term;

/// Static checks over parsed maps. Only literal subjects are errors; the
/// rest are warnings about maps that cannot produce output as written.
pub fn validate_model(maps: &[TriplesMap], registry: &FunctionRegistry) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for m in maps {
        let literal_subject = m.subject.effective_term_type(false) == TermType::Literal
            || matches!(m.subject.kind, TermMapKind::Constant(Term::Literal(_)));
        if literal_subject {
            out.push(
                Diagnostic::error("E_LITERAL_SUBJECT", "subject maps cannot produce literals")
                    .with_triples_map(&m.id),
            );
        }
        if m.classes.is_empty() && m.predicate_object_maps.is_empty() {
            out.push(
                Diagnostic::warning(
                    "W_UNREACHABLE_MAP",
                    "triples map has neither classes nor predicate-object maps",
                )
                .with_triples_map(&m.id),
            );
        }
        if m.source.filter.as_ref().is_some_and(|f| f.is_constant_false()) {
            out.push(
                Diagnostic::warning("W_UNREACHABLE_MAP", "filter is constantly false")
                    .with_triples_map(&m.id),
            );
        }
        for tm in m.term_maps() {
            match &tm.kind {
                TermMapKind::Unresolved { text, variable, .. } => out.push(
                    Diagnostic::warning(
                        "W_UNKNOWN_VARIABLE",
                        format!("unknown variable '{variable}' in '{text}'"),
                    )
                    .with_triples_map(&m.id),
                ),
                TermMapKind::Function(f) if !registry.contains(&f.function) => out.push(
                    Diagnostic::warning(
                        "W_UNREGISTERED_FUNCTION",
                        format!("function <{}> is not registered", f.function),
                    )
                    .with_triples_map(&m.id),
                ),
                _ => {}
            }
        }
    }
    out
}
