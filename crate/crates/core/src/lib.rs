//! FAIR Digital Object toolkit.
//!
//! Parses named-graph datasets, lifts them into the FDOF conceptual model
//! (information objects, media objects, metadata records), validates them
//! against the identification, typing, materialization and metadata rules,
//! and stores deposited objects for identifier resolution.

pub mod graph;
pub mod identifiers;
pub mod model;
pub mod registry;
pub mod typing;
pub mod validator;

#[cfg(feature = "testing")]
pub mod testing;

pub use graph::{
    merge_documents, parse_trig, serialize_trig, Dataset, GraphName, Iri, Literal, Node, ParseError, Quad, Term,
};
pub use identifiers::{check_uri_syntax, is_gupri, Identification, IdentificationSpace, Minter};
pub use model::{extract_model, Classification, FdofModel, FdofObject, FmrRecord, ObjectKind};
pub use registry::{DepositEntry, RegistryError, RegistryStore, Resolution};
pub use typing::{conformance, load_shapes, ShapeRegistry, TypeShape};
pub use validator::{
    brute_force_c3, render_report, validate, Finding, ReportFormat, RuleId, Severity, ValidateOptions, ValidationReport,
};
