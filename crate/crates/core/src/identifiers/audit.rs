use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::graph::Node;

/// A value bound to two or more distinct subjects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub value: String,
    /// Sorted, deduplicated.
    pub subjects: Vec<Node>,
}

/// Reports every value bound to more than one distinct subject, sorted by
/// value. The same value repeated on one subject is not a collision.
pub fn uniqueness_audit<'a>(values: impl IntoIterator<Item = (&'a str, &'a Node)>) -> Vec<Collision> {
    let mut bound: BTreeMap<&str, BTreeSet<&Node>> = BTreeMap::new();
    for (value, subject) in values {
        bound.entry(value).or_default().insert(subject);
    }
    bound
        .into_iter()
        .filter(|(_, subjects)| subjects.len() > 1)
        .map(|(value, subjects)| Collision {
            value: value.to_owned(),
            subjects: subjects.into_iter().cloned().collect(),
        })
        .collect()
}
