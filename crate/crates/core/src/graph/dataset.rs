use indexmap::{IndexMap, IndexSet};

use super::term::{GraphName, Iri, Node, Quad};

/// A set of quads with insertion order retained, plus the prefix map the
/// document declared.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    quads: IndexSet<Quad>,
    prefixes: IndexMap<String, Iri>,
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the quad was already present.
    pub fn insert(&mut self, quad: Quad) -> bool {
        self.quads.insert(quad)
    }

    pub fn remove(&mut self, quad: &Quad) -> bool {
        self.quads.shift_remove(quad)
    }

    pub fn contains(&self, quad: &Quad) -> bool {
        self.quads.contains(quad)
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Quad> {
        self.quads.iter()
    }

    pub fn prefixes(&self) -> &IndexMap<String, Iri> {
        &self.prefixes
    }

    /// Later declarations of the same label override earlier ones.
    pub fn set_prefix(&mut self, label: impl Into<String>, namespace: Iri) {
        self.prefixes.insert(label.into(), namespace);
    }

    /// Expands `label:local` against the declared prefixes.
    pub fn expand(&self, pname: &str) -> Option<Iri> {
        let (label, local) = pname.split_once(':')?;
        let ns = self.prefixes.get(label)?;
        Iri::new(format!("{ns}{local}")).ok()
    }

    /// Graph names in order of first appearance.
    pub fn graph_names(&self) -> Vec<Node> {
        let mut seen = IndexSet::new();
        for q in &self.quads {
            if let GraphName::Named(g) = &q.graph {
                seen.insert(g.clone());
            }
        }
        seen.into_iter().collect()
    }

    fn filtered(&self, keep: impl Fn(&Quad) -> bool) -> Dataset {
        Dataset {
            quads: self.quads.iter().filter(|q| keep(q)).cloned().collect(),
            prefixes: self.prefixes.clone(),
        }
    }

    /// Exactly the quads of the named graph `graph`.
    pub fn graph_slice(&self, graph: &Node) -> Dataset {
        self.filtered(|q| q.graph.node() == Some(graph))
    }

    pub fn default_graph(&self) -> Dataset {
        self.filtered(|q| q.graph == GraphName::Default)
    }

    pub fn subject_slice(&self, subject: &Node) -> Dataset {
        self.filtered(|q| &q.subject == subject)
    }

    /// Adds every quad of `other`; prefixes already bound here are kept.
    pub fn extend_from(&mut self, other: &Dataset) {
        for (label, ns) in &other.prefixes {
            if !self.prefixes.contains_key(label) {
                self.prefixes.insert(label.clone(), ns.clone());
            }
        }
        self.quads.extend(other.quads.iter().cloned());
    }

    /// Quads sorted by their N-Quads rendering.
    pub fn sorted_quads(&self) -> Vec<&Quad> {
        let mut lines: Vec<(String, &Quad)> = self.quads.iter().map(|q| (q.to_string(), q)).collect();
        lines.sort_by(|a, b| a.0.cmp(&b.0));
        lines.into_iter().map(|(_, q)| q).collect()
    }

    /// Sorted, newline-terminated N-Quads. Literals are already normalized
    /// on construction (language tags lowercased, explicit datatypes).
    pub fn canonical_nquads(&self) -> String {
        let mut lines: Vec<String> = self.quads.iter().map(|q| q.to_string()).collect();
        lines.sort();
        let mut out = String::new();
        for line in lines {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn same_quads(&self, other: &Dataset) -> bool {
        self.len() == other.len() && self.quads.iter().all(|q| other.contains(q))
    }
}

impl PartialEq for Dataset {
    /// Set equality on quads; prefixes and order are presentation only.
    fn eq(&self, other: &Self) -> bool {
        self.same_quads(other)
    }
}

impl Eq for Dataset {}

impl FromIterator<Quad> for Dataset {
    fn from_iter<T: IntoIterator<Item = Quad>>(iter: T) -> Self {
        Dataset {
            quads: iter.into_iter().collect(),
            prefixes: IndexMap::new(),
        }
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a Quad;
    type IntoIter = indexmap::set::Iter<'a, Quad>;

    fn into_iter(self) -> Self::IntoIter {
        self.quads.iter()
    }
}
