//! Shared inputs for the benchmarks.

use fdof_core::testing::{fdof_corpus, rng, uri_negative, uri_positive};
use fdof_core::{load_shapes, merge_documents, parse_trig, serialize_trig, Dataset, ShapeRegistry};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures");

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{FIXTURES}/{name}")).expect("fixture")
}

/// The example documents with media identifiers, merged.
pub fn example_corpus() -> Dataset {
    let docs: Vec<Dataset> = [
        "identification.trig",
        "record.trig",
        "materialization.trig",
        "media_identifiers.trig",
    ]
    .iter()
    .map(|f| parse_trig(&fixture(f)).expect("fixture parses"))
    .collect();
    merge_documents(&docs)
}

pub fn example_shapes() -> ShapeRegistry {
    load_shapes(&fixture("shapes.toml")).expect("shapes parse")
}

/// `count` generated corpora, serialized into one document each.
pub fn generated_documents(count: u64, max_nodes: usize, max_quads: usize) -> Vec<String> {
    (0..count)
        .map(|seed| serialize_trig(&fdof_corpus(&mut rng(seed), max_nodes, max_quads)))
        .collect()
}

pub fn uri_strings(count: usize) -> Vec<String> {
    let mut r = rng(3);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                uri_positive(&mut r)
            } else {
                uri_negative(&mut r)
            }
        })
        .collect()
}
