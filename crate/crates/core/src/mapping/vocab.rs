//! Mapping vocabulary IRIs.

pub const SS: &str = "http://www.dfki.uni-kl.de/~mschroeder/ld/ss#";
pub const SS_WORKBOOK: &str = "http://www.dfki.uni-kl.de/~mschroeder/ld/ss#Workbook";
pub const SS_URL: &str = "http://www.dfki.uni-kl.de/~mschroeder/ld/ss#url";
pub const SS_SHEET_NAME: &str = "http://www.dfki.uni-kl.de/~mschroeder/ld/ss#sheetName";
pub const SS_RANGE: &str = "http://www.dfki.uni-kl.de/~mschroeder/ld/ss#range";
pub const SS_JAVASCRIPT_FILTER: &str = "http://www.dfki.uni-kl.de/~mschroeder/ld/ss#javaScriptFilter";
pub const SS_ZIP: &str = "http://www.dfki.uni-kl.de/~mschroeder/ld/ss#zip";
pub const SS_GRAPH: &str = "http://www.dfki.uni-kl.de/~mschroeder/ld/ss#Graph";
pub const SS_SELECTED_OBJECTS: &str = "http://www.dfki.uni-kl.de/~mschroeder/ld/ss#SelectedObjects";

pub const RR: &str = "http://www.w3.org/ns/r2rml#";
pub const RR_TRIPLES_MAP: &str = "http://www.w3.org/ns/r2rml#TriplesMap";
pub const RR_SUBJECT_MAP: &str = "http://www.w3.org/ns/r2rml#subjectMap";
pub const RR_SUBJECT: &str = "http://www.w3.org/ns/r2rml#subject";
pub const RR_PREDICATE_OBJECT_MAP: &str = "http://www.w3.org/ns/r2rml#predicateObjectMap";
pub const RR_PREDICATE_MAP: &str = "http://www.w3.org/ns/r2rml#predicateMap";
pub const RR_PREDICATE: &str = "http://www.w3.org/ns/r2rml#predicate";
pub const RR_OBJECT_MAP: &str = "http://www.w3.org/ns/r2rml#objectMap";
pub const RR_OBJECT: &str = "http://www.w3.org/ns/r2rml#object";
pub const RR_CONSTANT: &str = "http://www.w3.org/ns/r2rml#constant";
pub const RR_TEMPLATE: &str = "http://www.w3.org/ns/r2rml#template";
pub const RR_TERM_TYPE: &str = "http://www.w3.org/ns/r2rml#termType";
pub const RR_IRI: &str = "http://www.w3.org/ns/r2rml#IRI";
pub const RR_BLANK_NODE: &str = "http://www.w3.org/ns/r2rml#BlankNode";
pub const RR_LITERAL: &str = "http://www.w3.org/ns/r2rml#Literal";
pub const RR_DATATYPE: &str = "http://www.w3.org/ns/r2rml#datatype";
pub const RR_LANGUAGE: &str = "http://www.w3.org/ns/r2rml#language";
pub const RR_CLASS: &str = "http://www.w3.org/ns/r2rml#class";
pub const RR_PARENT_TRIPLES_MAP: &str = "http://www.w3.org/ns/r2rml#parentTriplesMap";
pub const RR_GRAPH_MAP: &str = "http://www.w3.org/ns/r2rml#graphMap";

pub const RML: &str = "http://semweb.mmlab.be/ns/rml#";
pub const RML_LOGICAL_SOURCE: &str = "http://semweb.mmlab.be/ns/rml#logicalSource";
pub const RML_LOGICAL_SOURCE_CLASS: &str = "http://semweb.mmlab.be/ns/rml#LogicalSource";
pub const RML_SOURCE: &str = "http://semweb.mmlab.be/ns/rml#source";
pub const RML_REFERENCE_FORMULATION: &str = "http://semweb.mmlab.be/ns/rml#referenceFormulation";
pub const RML_REFERENCE: &str = "http://semweb.mmlab.be/ns/rml#reference";

pub const QL: &str = "http://semweb.mmlab.be/ns/ql#";
pub const QL_SPREADSHEET: &str = "http://semweb.mmlab.be/ns/ql#Spreadsheet";

pub const FNML: &str = "http://semweb.mmlab.be/ns/fnml#";
pub const FNML_FUNCTION_VALUE: &str = "http://semweb.mmlab.be/ns/fnml#functionValue";
pub const FNO: &str = "https://w3id.org/function/ontology#";
pub const FNO_EXECUTES: &str = "https://w3id.org/function/ontology#executes";
