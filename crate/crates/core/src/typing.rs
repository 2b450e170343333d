//! Information object types as declarative shapes.
//!
//! Shapes are loaded from a TOML document:
//!
//! ```toml
//! [prefixes]                      # optional; rdf, rdfs, xsd, fdof are predeclared
//! fdoft = "https://w3id.org/fdof/types#"
//! dct = "http://purl.org/dc/terms/"
//!
//! [[shape]]
//! type = "fdoft:Dataset"          # IRI or prefixed name
//! label = "Dataset"
//! parent = "fdoft:Resource"       # optional
//! mandatory = [
//!   { property = "dct:license", value_kind = "iri" },
//!   { property = "dct:issued", min_count = 1, value_kind = "xsd:date" },
//! ]
//! optional = [{ property = "dct:title", value_kind = "literal" }]
//! ```
//!
//! `min_count` defaults to 1. `value_kind` is `any` (default), `iri`,
//! `literal`, or a datatype IRI. A shape's effective requirements are its
//! own plus everything inherited along the parent chain; for a property
//! required more than once the larger `min_count` and the narrower value
//! kind apply.
//!
//! A mandatory requirement is met when the node has at least `min_count`
//! distinct values of the right kind for the property, counted over every
//! graph. Optional requirements document expected properties and never
//! produce findings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::graph::{Iri, Node, Term};
use crate::model::{FdofModel, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum ValueKind {
    Any,
    Iri,
    Literal,
    Datatype(Iri),
}

impl ValueKind {
    pub fn matches(&self, term: &Term) -> bool {
        match self {
            ValueKind::Any => true,
            ValueKind::Iri => matches!(term, Term::Iri(_)),
            ValueKind::Literal => matches!(term, Term::Literal(_)),
            ValueKind::Datatype(dt) => term.as_literal().is_some_and(|l| l.datatype() == dt),
        }
    }

    /// The kind admitting exactly the values both admit, when that is one
    /// of the expressible kinds.
    fn narrowest(&self, other: &ValueKind) -> Option<ValueKind> {
        use ValueKind::*;
        match (self, other) {
            (Any, k) | (k, Any) => Some(k.clone()),
            (Iri, Iri) => Some(Iri),
            (Literal, Literal) => Some(Literal),
            (Literal, Datatype(d)) | (Datatype(d), Literal) => Some(Datatype(d.clone())),
            (Datatype(a), Datatype(b)) if a == b => Some(Datatype(a.clone())),
            _ => None,
        }
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueKind::Any => f.write_str("any"),
            ValueKind::Iri => f.write_str("iri"),
            ValueKind::Literal => f.write_str("literal"),
            ValueKind::Datatype(dt) => write!(f, "literal of <{dt}>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyRequirement {
    pub property: Iri,
    pub min_count: u32,
    pub value_kind: ValueKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeShape {
    pub type_iri: Iri,
    pub label: String,
    pub mandatory: Vec<PropertyRequirement>,
    pub optional: Vec<PropertyRequirement>,
    pub parent: Option<Iri>,
}

/// Requirements after folding in the parent chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveShape {
    pub type_iri: Iri,
    pub mandatory: Vec<PropertyRequirement>,
    pub optional: Vec<PropertyRequirement>,
}

#[derive(Debug, Clone, Default)]
pub struct ShapeRegistry {
    shapes: IndexMap<Iri, TypeShape>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {message}")]
    Invalid {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("shape {shape} names unknown parent {parent}")]
    UnknownParent { shape: Iri, parent: Iri },
    #[error("inheritance cycle: {}", .0.iter().map(Iri::as_str).collect::<Vec<_>>().join(" -> "))]
    Cycle(Vec<Iri>),
    #[error("shape {shape}: conflicting value kinds for {property} along the parent chain")]
    KindConflict { shape: Iri, property: Iri },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    #[serde(default)]
    shape: Vec<RawShape>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShape {
    #[serde(rename = "type")]
    type_iri: Spanned<String>,
    #[serde(default)]
    label: String,
    parent: Option<Spanned<String>>,
    #[serde(default)]
    mandatory: Vec<RawRequirement>,
    #[serde(default)]
    optional: Vec<RawRequirement>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRequirement {
    property: Spanned<String>,
    min_count: Option<Spanned<i64>>,
    value_kind: Option<Spanned<String>>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Resolver<'a> {
    text: &'a str,
    prefixes: BTreeMap<String, String>,
}

impl Resolver<'_> {
    fn invalid(&self, offset: usize, message: String) -> ShapeError {
        let (line, column) = line_col(self.text, offset);
        ShapeError::Invalid { line, column, message }
    }

    fn iri(&self, raw: &Spanned<String>) -> Result<Iri, ShapeError> {
        let value = raw.get_ref();
        let expanded = match value.split_once(':') {
            Some((label, local)) if self.prefixes.contains_key(label) => {
                format!("{}{}", self.prefixes[label], local)
            }
            _ => value.clone(),
        };
        Iri::new(expanded).map_err(|e| self.invalid(raw.span().start, format!("{value:?}: {e}")))
    }

    fn requirement(&self, raw: &RawRequirement, mandatory: bool) -> Result<PropertyRequirement, ShapeError> {
        let property = self.iri(&raw.property)?;
        let min_count = match &raw.min_count {
            None => 1,
            Some(m) => u32::try_from(*m.get_ref())
                .map_err(|_| self.invalid(m.span().start, "min_count must be a non-negative integer".into()))?,
        };
        if mandatory && min_count == 0 {
            let at = raw
                .min_count
                .as_ref()
                .map_or(raw.property.span().start, |m| m.span().start);
            return Err(self.invalid(at, format!("mandatory requirement on {property} needs min_count >= 1")));
        }
        let value_kind = match &raw.value_kind {
            None => ValueKind::Any,
            Some(k) => match k.get_ref().as_str() {
                "any" => ValueKind::Any,
                "iri" => ValueKind::Iri,
                "literal" => ValueKind::Literal,
                _ => ValueKind::Datatype(self.iri(k)?),
            },
        };
        Ok(PropertyRequirement {
            property,
            min_count,
            value_kind,
        })
    }
}

const BUILTIN_PREFIXES: [(&str, &str); 4] = [
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
    ("xsd", "http://www.w3.org/2001/XMLSchema#"),
    ("fdof", "https://w3id.org/fdof/ontology#"),
];

pub fn load_shapes(text: &str) -> Result<ShapeRegistry, ShapeError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = line_col(text, e.span().map_or(0, |s| s.start));
        ShapeError::Parse {
            line,
            column,
            message: e.message().to_owned(),
        }
    })?;
    let mut prefixes: BTreeMap<String, String> = BUILTIN_PREFIXES
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    prefixes.extend(raw.prefixes);
    let resolver = Resolver { text, prefixes };

    let mut shapes: IndexMap<Iri, TypeShape> = IndexMap::new();
    for rs in &raw.shape {
        let type_iri = resolver.iri(&rs.type_iri)?;
        let mandatory = rs
            .mandatory
            .iter()
            .map(|r| resolver.requirement(r, true))
            .collect::<Result<Vec<_>, _>>()?;
        let optional = rs
            .optional
            .iter()
            .map(|r| resolver.requirement(r, false))
            .collect::<Result<Vec<_>, _>>()?;
        let mut seen = BTreeSet::new();
        for (req, raw_req) in mandatory
            .iter()
            .chain(&optional)
            .zip(rs.mandatory.iter().chain(&rs.optional))
        {
            if !seen.insert(req.property.clone()) {
                return Err(resolver.invalid(
                    raw_req.property.span().start,
                    format!("property {} listed twice in shape {type_iri}", req.property),
                ));
            }
        }
        let parent = rs.parent.as_ref().map(|p| resolver.iri(p)).transpose()?;
        if shapes.contains_key(&type_iri) {
            return Err(resolver.invalid(rs.type_iri.span().start, format!("shape {type_iri} declared twice")));
        }
        shapes.insert(
            type_iri.clone(),
            TypeShape {
                type_iri,
                label: rs.label.clone(),
                mandatory,
                optional,
                parent,
            },
        );
    }

    let registry = ShapeRegistry { shapes };
    for shape in registry.shapes.values() {
        let chain = registry.chain(&shape.type_iri)?;
        registry.merge(&chain)?;
    }
    Ok(registry)
}

impl ShapeRegistry {
    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn get(&self, type_iri: &Iri) -> Option<&TypeShape> {
        self.shapes.get(type_iri)
    }

    pub fn shapes(&self) -> impl Iterator<Item = &TypeShape> {
        self.shapes.values()
    }

    /// The shape followed by its ancestors, nearest first.
    fn chain(&self, type_iri: &Iri) -> Result<Vec<&TypeShape>, ShapeError> {
        let mut chain: Vec<&TypeShape> = Vec::new();
        let mut current = self.shapes.get(type_iri);
        while let Some(shape) = current {
            if chain.iter().any(|s| s.type_iri == shape.type_iri) {
                let mut cycle: Vec<Iri> = chain.iter().map(|s| s.type_iri.clone()).collect();
                cycle.push(shape.type_iri.clone());
                return Err(ShapeError::Cycle(cycle));
            }
            chain.push(shape);
            current = match &shape.parent {
                None => None,
                Some(p) => Some(self.shapes.get(p).ok_or_else(|| ShapeError::UnknownParent {
                    shape: shape.type_iri.clone(),
                    parent: p.clone(),
                })?),
            };
        }
        Ok(chain)
    }

    fn merge(&self, chain: &[&TypeShape]) -> Result<EffectiveShape, ShapeError> {
        let type_iri = chain[0].type_iri.clone();
        let mut mandatory: IndexMap<Iri, PropertyRequirement> = IndexMap::new();
        let mut optional: IndexMap<Iri, PropertyRequirement> = IndexMap::new();
        for shape in chain {
            for req in &shape.mandatory {
                match mandatory.get_mut(&req.property) {
                    None => {
                        mandatory.insert(req.property.clone(), req.clone());
                    }
                    Some(existing) => {
                        existing.min_count = existing.min_count.max(req.min_count);
                        existing.value_kind =
                            existing
                                .value_kind
                                .narrowest(&req.value_kind)
                                .ok_or_else(|| ShapeError::KindConflict {
                                    shape: type_iri.clone(),
                                    property: req.property.clone(),
                                })?;
                    }
                }
            }
            for req in &shape.optional {
                optional.entry(req.property.clone()).or_insert_with(|| req.clone());
            }
        }
        optional.retain(|p, _| !mandatory.contains_key(p));
        Ok(EffectiveShape {
            type_iri,
            mandatory: mandatory.into_values().collect(),
            optional: optional.into_values().collect(),
        })
    }

    /// Own plus inherited requirements; None for an unregistered type.
    pub fn effective(&self, type_iri: &Iri) -> Option<EffectiveShape> {
        self.shapes.get(type_iri)?;
        let chain = self.chain(type_iri).expect("registry validated at load");
        Some(self.merge(&chain).expect("registry validated at load"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Problem {
    Missing,
    CountBelow {
        found: usize,
        required: u32,
    },
    WrongValueKind {
        expected: ValueKind,
        matching: usize,
        required: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RequirementFinding {
    pub type_iri: Iri,
    pub property: Iri,
    pub problem: Problem,
}

impl fmt::Display for RequirementFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type <{}> requires <{}>: ", self.type_iri, self.property)?;
        match &self.problem {
            Problem::Missing => f.write_str("property is missing"),
            Problem::CountBelow { found, required } => {
                write!(f, "{found} value(s), at least {required} required")
            }
            Problem::WrongValueKind {
                expected,
                matching,
                required,
            } => write!(
                f,
                "{matching} value(s) of kind {expected}, at least {required} required"
            ),
        }
    }
}

/// One finding per unmet mandatory requirement of `shape` on `node`.
pub fn conformance(
    model: &FdofModel,
    node: &Node,
    shape: &EffectiveShape,
) -> Result<Vec<RequirementFinding>, ModelError> {
    model.object(node)?;
    let mut findings = Vec::new();
    for req in &shape.mandatory {
        let values = model.values_of(node, &req.property);
        let matching = values.iter().filter(|t| req.value_kind.matches(t)).count();
        if matching >= req.min_count as usize {
            continue;
        }
        let problem = if values.is_empty() {
            Problem::Missing
        } else if values.len() >= req.min_count as usize {
            Problem::WrongValueKind {
                expected: req.value_kind.clone(),
                matching,
                required: req.min_count,
            }
        } else {
            Problem::CountBelow {
                found: values.len(),
                required: req.min_count,
            }
        };
        findings.push(RequirementFinding {
            type_iri: shape.type_iri.clone(),
            property: req.property.clone(),
            problem,
        });
    }
    Ok(findings)
}
