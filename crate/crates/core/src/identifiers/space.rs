use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::uri::check_uri_syntax;
use crate::graph::Iri;

type Grammar = dyn Fn(&str) -> bool + Send + Sync;

/// The set of admissible values of one identification system, given as a
/// total membership predicate.
#[derive(Clone)]
pub struct IdentificationSpace {
    name: String,
    grammar: Arc<Grammar>,
}

impl IdentificationSpace {
    pub fn new(name: impl Into<String>, grammar: impl Fn(&str) -> bool + Send + Sync + 'static) -> Self {
        IdentificationSpace {
            name: name.into(),
            grammar: Arc::new(grammar),
        }
    }

    /// The built-in space of absolute URIs.
    pub fn uri() -> Self {
        Self::new("uri", |v| check_uri_syntax(v).is_ok())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn accepts(&self, value: &str) -> bool {
        (self.grammar)(value)
    }
}

impl fmt::Debug for IdentificationSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentificationSpace")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Identifier {
    pub value: String,
    /// Name of the space the value was checked against.
    pub space: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Gupri {
    pub base: Identifier,
    pub resolvable_hint: Option<Iri>,
}

impl Gupri {
    pub fn value(&self) -> &str {
        &self.base.value
    }
}

/// URI syntax plus membership in `space`. Uniqueness and resolvability are
/// checked elsewhere (corpus audit, registry).
pub fn is_gupri(value: &str, space: &IdentificationSpace) -> bool {
    check_uri_syntax(value).is_ok() && space.accepts(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uri_space_membership() {
        let uri = IdentificationSpace::uri();
        assert!(is_gupri("https://w3id.org/fdof/fois23-paper/amazonTop50", &uri));
        assert!(!is_gupri("", &uri));
        assert!(!is_gupri("foo/bar", &uri));
    }

    #[test]
    fn custom_space_narrows_uri_space() {
        let w3id = IdentificationSpace::new("w3id", |v| v.starts_with("https://w3id.org/"));
        assert!(is_gupri("https://w3id.org/x", &w3id));
        assert!(!is_gupri("https://example.org/x", &w3id));
        // space accepts it, but URI syntax does not
        assert!(!is_gupri("https://w3id.org/a b", &w3id));
    }
}
