#![allow(dead_code)]

use std::path::PathBuf;

use fdof_core::{merge_documents, parse_trig, Dataset, Node};

pub const EX1: &str = "https://w3id.org/fdof/fois23-paper/ex1/";
pub const CORPUS_FILES: [&str; 4] = [
    "identification.trig",
    "record.trig",
    "materialization.trig",
    "media_identifiers.trig",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn corpus_of(files: &[&str]) -> Dataset {
    let docs: Vec<Dataset> = files.iter().map(|f| parse_trig(&fixture(f)).unwrap()).collect();
    merge_documents(&docs)
}

/// The three example documents plus the media object identifiers.
pub fn corpus() -> Dataset {
    corpus_of(&CORPUS_FILES)
}

pub fn ex1(local: &str) -> Node {
    Node::iri(format!("{EX1}{local}")).unwrap()
}

pub fn shapes() -> fdof_core::ShapeRegistry {
    fdof_core::load_shapes(&fixture("shapes.toml")).unwrap()
}
