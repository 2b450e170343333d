//! Named-graph data model, TriG-subset reader/writer and isomorphism.

mod dataset;
mod iso;
mod serialize;
mod term;
mod trig;

pub use dataset::Dataset;
pub use iso::{isomorphic, isomorphic_with_bound, BoundExceeded, DEFAULT_BLANK_BOUND};
pub use serialize::serialize_trig;
pub use term::{
    BlankNode, GraphName, Iri, Literal, Node, Quad, Term, TermError, RDFS_SUBCLASS_OF, RDF_LANG_STRING, RDF_TYPE,
    XSD_STRING,
};
pub use trig::{parse_trig, ParseError, ParseErrorKind};

/// Merges several documents into one dataset. With more than one
/// document, blank node `_:x` of document `i` becomes `_:f{i}_x` so labels
/// from different files never meet. The first declaration of a prefix wins.
pub fn merge_documents(docs: &[Dataset]) -> Dataset {
    if let [only] = docs {
        return only.clone();
    }
    let mut out = Dataset::new();
    for (i, doc) in docs.iter().enumerate() {
        for (label, ns) in doc.prefixes() {
            if !out.prefixes().contains_key(label) {
                out.set_prefix(label.clone(), ns.clone());
            }
        }
        let rename = |n: &Node| match n {
            Node::Blank(b) => {
                Node::Blank(BlankNode::new(format!("f{i}_{}", b.label())).expect("prefixed label stays valid"))
            }
            other => other.clone(),
        };
        for q in doc {
            let object = match &q.object {
                Term::Blank(b) => Term::from(rename(&Node::Blank(b.clone()))),
                other => other.clone(),
            };
            let graph = match &q.graph {
                GraphName::Named(g) => GraphName::Named(rename(g)),
                GraphName::Default => GraphName::Default,
            };
            out.insert(Quad::new(rename(&q.subject), q.predicate.clone(), object, graph));
        }
    }
    out
}

/// Quads whose graph component is `graph`; empty when the graph is absent.
pub fn graph_slice(ds: &Dataset, graph: &Node) -> Dataset {
    ds.graph_slice(graph)
}
