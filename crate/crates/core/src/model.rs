//! Typed FDOF view over a dataset: which nodes are information objects,
//! media objects and metadata records, and how they are identified,
//! typed, materialized and described.
//!
//! Extraction is total. Malformed structures still produce a model, and
//! the validator reports what is missing.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use indexmap::IndexSet;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Dataset, GraphName, Iri, Node, Quad, Term, RDFS_SUBCLASS_OF, RDF_TYPE};

pub mod vocab {
    pub const NS: &str = "https://w3id.org/fdof/ontology#";

    pub const FAIR_DIGITAL_OBJECT: &str = "https://w3id.org/fdof/ontology#FAIRDigitalObject";
    pub const FAIR_DIGITAL_INFORMATION_OBJECT: &str = "https://w3id.org/fdof/ontology#FAIRDigitalInformationObject";
    pub const FAIR_DIGITAL_MEDIA_OBJECT: &str = "https://w3id.org/fdof/ontology#FAIRDigitalMediaObject";
    pub const FAIR_METADATA_RECORD: &str = "https://w3id.org/fdof/ontology#FAIRMetadataRecord";
    pub const IDENTIFIER: &str = "https://w3id.org/fdof/ontology#Identifier";

    pub const GUPRI: &str = "https://w3id.org/fdof/ontology#gupri";
    pub const IS_IDENTIFIED_BY: &str = "https://w3id.org/fdof/ontology#isIdentifiedBy";
    pub const IS_METADATA_OF: &str = "https://w3id.org/fdof/ontology#isMetadataOf";
    pub const IS_MATERIALIZED_BY: &str = "https://w3id.org/fdof/ontology#isMaterializedBy";
    pub const HAS_ENCODING_FORMAT: &str = "https://w3id.org/fdof/ontology#hasEncodingFormat";
    pub const HAS_INFORMATION_OBJECT_TYPE: &str = "https://w3id.org/fdof/ontology#hasInformationObjectType";

    pub const CLASSES: [&str; 5] = [
        FAIR_DIGITAL_OBJECT,
        FAIR_DIGITAL_INFORMATION_OBJECT,
        FAIR_DIGITAL_MEDIA_OBJECT,
        FAIR_METADATA_RECORD,
        IDENTIFIER,
    ];

    pub const PROPERTIES: [&str; 6] = [
        GUPRI,
        IS_IDENTIFIED_BY,
        IS_METADATA_OF,
        IS_MATERIALIZED_BY,
        HAS_ENCODING_FORMAT,
        HAS_INFORMATION_OBJECT_TYPE,
    ];

    pub fn is_class(iri: &str) -> bool {
        CLASSES.contains(&iri)
    }

    pub fn is_property(iri: &str) -> bool {
        PROPERTIES.contains(&iri)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ObjectKind {
    InformationObject,
    MediaObject,
    MetadataRecord,
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectKind::InformationObject => "InformationObject",
            ObjectKind::MediaObject => "MediaObject",
            ObjectKind::MetadataRecord => "MetadataRecord",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdofObject {
    pub node: Node,
    pub kinds: BTreeSet<ObjectKind>,
    /// Typed `fdof:FAIRDigitalObject` directly.
    pub declared_fdo: bool,
    /// Typed `fdof:Identifier`.
    pub typed_identifier: bool,
    pub gupris: Vec<String>,
    pub identifier_nodes: Vec<Node>,
    pub info_types: Vec<Iri>,
    pub materialized_by: Vec<Node>,
    pub encoding_formats: Vec<Iri>,
    /// Record nodes whose graph states `isMetadataOf` this node.
    pub described_by: Vec<Node>,
    /// Non-structural statements about the node, across all graphs.
    pub attributions: Vec<(Iri, Term)>,
}

impl FdofObject {
    fn new(node: Node) -> Self {
        FdofObject {
            node,
            kinds: BTreeSet::new(),
            declared_fdo: false,
            typed_identifier: false,
            gupris: Vec::new(),
            identifier_nodes: Vec::new(),
            info_types: Vec::new(),
            materialized_by: Vec::new(),
            encoding_formats: Vec::new(),
            described_by: Vec::new(),
            attributions: Vec::new(),
        }
    }

    /// Any FAIR Digital Object, including one typed only with the abstract
    /// `fdof:FAIRDigitalObject` class.
    pub fn is_fdo(&self) -> bool {
        self.declared_fdo || !self.kinds.is_empty()
    }

    pub fn has(&self, kind: ObjectKind) -> bool {
        self.kinds.contains(&kind)
    }
}

/// A metadata record realized as the named graph carrying the record's
/// own IRI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FmrRecord {
    pub record_node: Node,
    pub graph: Node,
    pub targets: Vec<Node>,
    pub statements: Dataset,
}

#[derive(Debug, Clone)]
pub struct FdofModel {
    pub objects: BTreeMap<Node, FdofObject>,
    pub records: BTreeMap<Node, FmrRecord>,
    pub source: Dataset,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown node {0}")]
    UnknownNode(Node),
}

/// Answer to "what type of object does this identifier identify": the
/// kinds, the intent (information object types) and the structure
/// (encoding formats).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub node: Node,
    pub kinds: Vec<ObjectKind>,
    pub info_types: Vec<Iri>,
    pub encoding_formats: Vec<Iri>,
}

fn push_unique<T: PartialEq>(list: &mut Vec<T>, item: T) {
    if !list.contains(&item) {
        list.push(item);
    }
}

/// Type IRIs that count as information object types: declared subclasses
/// of `fdof:FAIRDigitalInformationObject`, directly or through one
/// intermediate class.
fn information_object_types(ds: &Dataset) -> HashSet<Iri> {
    let mut supers: HashMap<&Node, Vec<&Term>> = HashMap::new();
    for q in ds {
        if q.predicate.as_str() == RDFS_SUBCLASS_OF {
            supers.entry(&q.subject).or_default().push(&q.object);
        }
    }
    let is_fdio = |t: &Term| {
        t.as_iri()
            .is_some_and(|i| i.as_str() == vocab::FAIR_DIGITAL_INFORMATION_OBJECT)
    };
    supers
        .iter()
        .filter(|(_, ups)| {
            ups.iter().any(|u| {
                is_fdio(u)
                    || u.as_node()
                        .and_then(|n| supers.get(&n))
                        .is_some_and(|ups2| ups2.iter().any(|u2| is_fdio(u2)))
            })
        })
        .filter_map(|(t, _)| t.as_iri().cloned())
        .collect()
}

fn is_structural(q: &Quad) -> bool {
    vocab::is_property(q.predicate.as_str())
        || (q.predicate.as_str() == RDF_TYPE && q.object.as_iri().is_some_and(|o| vocab::is_class(o.as_str())))
}

pub fn extract_model(ds: &Dataset) -> FdofModel {
    let io_types = information_object_types(ds);
    let mut objects: BTreeMap<Node, FdofObject> = BTreeMap::new();
    let mut order: IndexSet<Node> = IndexSet::new();

    for q in ds {
        if !is_structural(q) {
            continue;
        }
        order.insert(q.subject.clone());
        let obj = objects
            .entry(q.subject.clone())
            .or_insert_with(|| FdofObject::new(q.subject.clone()));
        match q.predicate.as_str() {
            RDF_TYPE => match q.object.as_iri().map(Iri::as_str) {
                Some(vocab::FAIR_DIGITAL_OBJECT) => obj.declared_fdo = true,
                Some(vocab::FAIR_DIGITAL_INFORMATION_OBJECT) => {
                    obj.kinds.insert(ObjectKind::InformationObject);
                }
                Some(vocab::FAIR_DIGITAL_MEDIA_OBJECT) => {
                    obj.kinds.insert(ObjectKind::MediaObject);
                }
                Some(vocab::FAIR_METADATA_RECORD) => {
                    obj.kinds.insert(ObjectKind::MetadataRecord);
                    obj.kinds.insert(ObjectKind::InformationObject);
                }
                Some(vocab::IDENTIFIER) => obj.typed_identifier = true,
                _ => unreachable!("is_structural admits only vocabulary classes"),
            },
            vocab::GUPRI => {
                let value = match &q.object {
                    Term::Literal(l) => Some(l.lexical().to_owned()),
                    Term::Iri(i) => Some(i.as_str().to_owned()),
                    Term::Blank(_) => None,
                };
                if let Some(v) = value {
                    push_unique(&mut obj.gupris, v);
                }
            }
            vocab::IS_IDENTIFIED_BY => {
                if let Some(n) = q.object.as_node() {
                    push_unique(&mut obj.identifier_nodes, n);
                }
            }
            vocab::IS_MATERIALIZED_BY => {
                if let Some(n) = q.object.as_node() {
                    push_unique(&mut obj.materialized_by, n);
                }
            }
            vocab::HAS_ENCODING_FORMAT => {
                if let Term::Iri(i) = &q.object {
                    push_unique(&mut obj.encoding_formats, i.clone());
                }
            }
            vocab::HAS_INFORMATION_OBJECT_TYPE => {
                if let Term::Iri(i) = &q.object {
                    if io_types.contains(i) {
                        obj.kinds.insert(ObjectKind::InformationObject);
                    }
                    push_unique(&mut obj.info_types, i.clone());
                }
            }
            // isMetadataOf is read per record graph below
            _ => {}
        }
    }

    for q in ds {
        if is_structural(q) {
            continue;
        }
        if let Some(obj) = objects.get_mut(&q.subject) {
            push_unique(&mut obj.attributions, (q.predicate.clone(), q.object.clone()));
        }
    }

    let mut records = BTreeMap::new();
    let mut described: Vec<(Node, Node)> = Vec::new();
    for node in &order {
        let obj = &objects[node];
        if !obj.has(ObjectKind::MetadataRecord) {
            continue;
        }
        let statements = ds.graph_slice(node);
        let mut targets = Vec::new();
        for q in &statements {
            if &q.subject == node && q.predicate.as_str() == vocab::IS_METADATA_OF {
                if let Some(t) = q.object.as_node() {
                    push_unique(&mut targets, t);
                }
            }
        }
        if targets.is_empty() {
            continue;
        }
        for t in &targets {
            described.push((t.clone(), node.clone()));
        }
        records.insert(
            node.clone(),
            FmrRecord {
                record_node: node.clone(),
                graph: node.clone(),
                targets,
                statements,
            },
        );
    }
    for (target, record) in described {
        if let Some(obj) = objects.get_mut(&target) {
            push_unique(&mut obj.described_by, record);
        }
    }

    FdofModel {
        objects,
        records,
        source: ds.clone(),
    }
}

impl FdofModel {
    pub fn object(&self, node: &Node) -> Result<&FdofObject, ModelError> {
        self.objects
            .get(node)
            .ok_or_else(|| ModelError::UnknownNode(node.clone()))
    }

    pub fn classify(&self, node: &Node) -> Result<Classification, ModelError> {
        let obj = self.object(node)?;
        Ok(Classification {
            node: node.clone(),
            kinds: obj.kinds.iter().copied().collect(),
            info_types: obj.info_types.clone(),
            encoding_formats: obj.encoding_formats.clone(),
        })
    }

    /// Every node carrying `value` among its gupris. More than one hit
    /// means the corpus breaks identifier uniqueness.
    pub fn lookup_by_gupri(&self, value: &str) -> Vec<Node> {
        self.objects
            .values()
            .filter(|o| o.gupris.iter().any(|g| g == value))
            .map(|o| o.node.clone())
            .collect()
    }

    pub fn count_kind(&self, kind: ObjectKind) -> usize {
        self.objects.values().filter(|o| o.has(kind)).count()
    }

    /// Distinct objects of `(node, property, _)` across all graphs.
    pub fn values_of(&self, node: &Node, property: &Iri) -> Vec<&Term> {
        let mut out: Vec<&Term> = Vec::new();
        for q in &self.source {
            if &q.subject == node && &q.predicate == property && !out.contains(&&q.object) {
                out.push(&q.object);
            }
        }
        out
    }

    /// Quads in `graph` with `node` as subject and a predicate from `preds`.
    pub fn statements_in_graph<'a>(
        &'a self,
        graph: &'a Node,
        node: &'a Node,
        preds: &'a [&str],
    ) -> impl Iterator<Item = &'a Quad> + 'a {
        self.source.iter().filter(move |q| {
            q.graph == GraphName::Named(graph.clone()) && &q.subject == node && preds.contains(&q.predicate.as_str())
        })
    }
}

pub fn classify(model: &FdofModel, node: &Node) -> Result<Classification, ModelError> {
    model.classify(node)
}

pub fn lookup_by_gupri(model: &FdofModel, value: &str) -> Vec<Node> {
    model.lookup_by_gupri(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_trig;

    const PRE: &str = "@prefix : <http://ex.org/> .\n@prefix fdof: <https://w3id.org/fdof/ontology#> .\n@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n";

    fn model(body: &str) -> FdofModel {
        extract_model(&parse_trig(&format!("{PRE}{body}")).unwrap())
    }

    fn n(s: &str) -> Node {
        Node::iri(format!("http://ex.org/{s}")).unwrap()
    }

    #[test]
    fn empty_dataset_has_no_objects() {
        let m = extract_model(&Dataset::new());
        assert!(m.objects.is_empty());
        assert!(m.records.is_empty());
    }

    #[test]
    fn metadata_record_implies_information_object() {
        let m = model(":r a fdof:FAIRMetadataRecord .");
        let r = &m.objects[&n("r")];
        assert!(r.has(ObjectKind::MetadataRecord) && r.has(ObjectKind::InformationObject));
        // no named graph, so no record structure
        assert!(m.records.is_empty());
    }

    #[test]
    fn info_type_subclass_chaining_is_one_level() {
        let m = model(
            ":T1 rdfs:subClassOf fdof:FAIRDigitalInformationObject .\n\
             :T2 rdfs:subClassOf :T1 .\n\
             :T3 rdfs:subClassOf :T2 .\n\
             :a fdof:hasInformationObjectType :T1 .\n\
             :b fdof:hasInformationObjectType :T2 .\n\
             :c fdof:hasInformationObjectType :T3 .\n\
             :d fdof:hasInformationObjectType :Unrelated .",
        );
        assert!(m.objects[&n("a")].has(ObjectKind::InformationObject));
        assert!(m.objects[&n("b")].has(ObjectKind::InformationObject));
        assert!(!m.objects[&n("c")].has(ObjectKind::InformationObject));
        assert!(m.objects[&n("d")].kinds.is_empty());
        assert_eq!(m.objects[&n("d")].info_types.len(), 1);
    }

    #[test]
    fn record_requires_is_metadata_of_inside_own_graph() {
        let m = model(
            ":r a fdof:FAIRMetadataRecord .\n:r fdof:isMetadataOf :x .\n:r { :x :p :q }\n\
             :s a fdof:FAIRMetadataRecord .\n:s { :s fdof:isMetadataOf :x , :y . }\n\
             :x a fdof:FAIRDigitalInformationObject .",
        );
        assert!(!m.records.contains_key(&n("r")));
        let s = &m.records[&n("s")];
        assert_eq!(s.targets, vec![n("x"), n("y")]);
        assert_eq!(s.statements.len(), 2);
        assert_eq!(m.objects[&n("x")].described_by, vec![n("s")]);
    }

    #[test]
    fn attributions_skip_structural_statements() {
        let m = model(
            ":a a fdof:FAIRDigitalInformationObject, :Dataset ; fdof:gupri \"urn:a\" ; :license :cc0 .\n\
             :g { :a :license :cc0 . :a :title \"A\" }",
        );
        let a = &m.objects[&n("a")];
        let preds: Vec<&str> = a.attributions.iter().map(|(p, _)| p.as_str()).collect();
        assert_eq!(preds, vec![RDF_TYPE, "http://ex.org/license", "http://ex.org/title"]);
        assert_eq!(a.gupris, vec!["urn:a".to_owned()]);
    }

    #[test]
    fn classify_and_lookup() {
        let m = model(":a a fdof:FAIRDigitalMediaObject ; fdof:hasEncodingFormat :csv ; fdof:gupri \"urn:a\" .\n:b fdof:gupri \"urn:a\" .");
        let c = m.classify(&n("a")).unwrap();
        assert_eq!(c.kinds, vec![ObjectKind::MediaObject]);
        assert_eq!(c.encoding_formats, vec![Iri::new("http://ex.org/csv").unwrap()]);
        assert_eq!(m.classify(&n("zz")), Err(ModelError::UnknownNode(n("zz"))));
        assert_eq!(m.lookup_by_gupri("urn:a"), vec![n("a"), n("b")]);
        assert!(m.lookup_by_gupri("urn:none").is_empty());
    }
}
