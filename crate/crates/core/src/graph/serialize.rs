use indexmap::IndexMap;

use super::dataset::Dataset;
use super::term::{escape_string, GraphName, Iri, Literal, Node, Term, RDF_TYPE, XSD_STRING};

/// Local parts we are willing to abbreviate; anything else is written as a
/// full IRI.
fn safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
        Some(_) => false,
    }
}

fn safe_prefix_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'),
        Some(_) => false,
    }
}

struct Writer<'a> {
    prefixes: Vec<(&'a str, &'a Iri)>,
    out: String,
}

impl Writer<'_> {
    fn iri(&mut self, iri: &Iri) {
        // longest namespace match wins
        let best = self
            .prefixes
            .iter()
            .filter_map(|(label, ns)| {
                iri.as_str()
                    .strip_prefix(ns.as_str())
                    .filter(|local| safe_local(local))
                    .map(|local| (label, ns.as_str().len(), local))
            })
            .max_by_key(|(_, len, _)| *len);
        match best {
            Some((label, _, local)) => {
                self.out.push_str(label);
                self.out.push(':');
                self.out.push_str(local);
            }
            None => {
                self.out.push('<');
                self.out.push_str(iri.as_str());
                self.out.push('>');
            }
        }
    }

    fn node(&mut self, node: &Node) {
        match node {
            Node::Iri(iri) => self.iri(iri),
            Node::Blank(b) => self.out.push_str(&b.to_string()),
        }
    }

    fn literal(&mut self, lit: &Literal) {
        self.out.push('"');
        escape_string(lit.lexical(), &mut self.out);
        self.out.push('"');
        if let Some(tag) = lit.language() {
            self.out.push('@');
            self.out.push_str(tag);
        } else if lit.datatype().as_str() != XSD_STRING {
            self.out.push_str("^^");
            self.iri(lit.datatype());
        }
    }

    fn term(&mut self, term: &Term) {
        match term {
            Term::Iri(iri) => self.iri(iri),
            Term::Blank(b) => self.out.push_str(&b.to_string()),
            Term::Literal(l) => self.literal(l),
        }
    }

    fn triples(&mut self, ds: &Dataset, graph: &GraphName, indent: &str) {
        // subject -> predicate -> objects, all in first-appearance order
        let mut grouped: IndexMap<&Node, IndexMap<&Iri, Vec<&Term>>> = IndexMap::new();
        for q in ds.iter().filter(|q| &q.graph == graph) {
            grouped
                .entry(&q.subject)
                .or_default()
                .entry(&q.predicate)
                .or_default()
                .push(&q.object);
        }
        for (subject, predicates) in grouped {
            self.out.push_str(indent);
            self.node(subject);
            let n = predicates.len();
            for (i, (predicate, objects)) in predicates.into_iter().enumerate() {
                if i == 0 {
                    self.out.push(' ');
                } else {
                    self.out.push_str("\n    ");
                    self.out.push_str(indent);
                }
                if predicate.as_str() == RDF_TYPE {
                    self.out.push('a');
                } else {
                    self.iri(predicate);
                }
                for (j, object) in objects.into_iter().enumerate() {
                    self.out.push_str(if j == 0 { " " } else { ", " });
                    self.term(object);
                }
                self.out.push_str(if i + 1 == n { " .\n" } else { " ;" });
            }
        }
    }
}

/// Writes `ds` as a TriG-subset document that [`super::parse_trig`] reads
/// back to the same quad set. Blank node and graph labels are kept verbatim.
pub fn serialize_trig(ds: &Dataset) -> String {
    let prefixes: Vec<(&str, &Iri)> = ds
        .prefixes()
        .iter()
        .filter(|(label, _)| safe_prefix_label(label))
        .map(|(l, ns)| (l.as_str(), ns))
        .collect();
    let mut w = Writer {
        prefixes,
        out: String::new(),
    };
    for (label, ns) in w.prefixes.clone() {
        w.out.push_str(&format!("@prefix {label}: <{ns}> .\n"));
    }
    let has_default = ds.iter().any(|q| q.graph == GraphName::Default);
    let graphs = ds.graph_names();
    if !w.prefixes.is_empty() && (has_default || !graphs.is_empty()) {
        w.out.push('\n');
    }
    if has_default {
        w.triples(ds, &GraphName::Default, "");
    }
    for (i, g) in graphs.iter().enumerate() {
        if has_default || i > 0 {
            w.out.push('\n');
        }
        w.node(g);
        w.out.push_str(" {\n");
        w.triples(ds, &GraphName::Named(g.clone()), "  ");
        w.out.push_str("}\n");
    }
    w.out
}
