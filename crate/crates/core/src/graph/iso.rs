//! Dataset isomorphism up to blank node renaming.
//!
//! Blank nodes are grouped by an iteratively refined signature (the colour
//! of each blank node given its neighbourhood), then a backtracking search
//! tries bijections between equally coloured nodes only.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::dataset::Dataset;
use super::term::{BlankNode, GraphName, Node, Quad, Term};

pub const DEFAULT_BLANK_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("undecided at configured bound: {found} blank nodes exceed the limit of {bound}")]
pub struct BoundExceeded {
    pub found: usize,
    pub bound: usize,
}

fn blanks_of(q: &Quad) -> impl Iterator<Item = &BlankNode> {
    let s = match &q.subject {
        Node::Blank(b) => Some(b),
        _ => None,
    };
    let o = match &q.object {
        Term::Blank(b) => Some(b),
        _ => None,
    };
    let g = match &q.graph {
        GraphName::Named(Node::Blank(b)) => Some(b),
        _ => None,
    };
    s.into_iter().chain(o).chain(g)
}

fn blank_set(ds: &Dataset) -> BTreeSet<&BlankNode> {
    ds.iter().flat_map(blanks_of).collect()
}

/// Renders a quad with blank nodes replaced by their current colour.
fn pattern(q: &Quad, colour: &HashMap<&BlankNode, u64>) -> String {
    let node = |n: &Node| match n {
        Node::Blank(b) => format!("_#{}", colour[b]),
        other => other.to_string(),
    };
    let object = match &q.object {
        Term::Blank(b) => format!("_#{}", colour[b]),
        other => other.to_string(),
    };
    let graph = match &q.graph {
        GraphName::Default => String::new(),
        GraphName::Named(g) => node(g),
    };
    format!("{} <{}> {} {}", node(&q.subject), q.predicate, object, graph)
}

/// Pairs each blank node with its current colour and sorted signature.
fn keyed<'a>(
    colours: &HashMap<&'a BlankNode, u64>,
    sigs: &mut BTreeMap<&'a BlankNode, Vec<String>>,
) -> Vec<(&'a BlankNode, (u64, Vec<String>))> {
    let mut out = Vec::new();
    for (&n, &c) in colours {
        let mut sig = sigs.remove(n).unwrap_or_default();
        sig.sort();
        out.push((n, (c, sig)));
    }
    out
}

/// Colour refinement shared by both sides so colours are comparable.
fn refine<'a>(a: &'a Dataset, b: &'a Dataset) -> (HashMap<&'a BlankNode, u64>, HashMap<&'a BlankNode, u64>) {
    let mut ca: HashMap<&BlankNode, u64> = blank_set(a).into_iter().map(|n| (n, 0)).collect();
    let mut cb: HashMap<&BlankNode, u64> = blank_set(b).into_iter().map(|n| (n, 0)).collect();
    let classes = |c: &HashMap<&BlankNode, u64>| c.values().collect::<BTreeSet<_>>().len();
    loop {
        let before = classes(&ca) + classes(&cb);
        let mut sig_a: BTreeMap<&BlankNode, Vec<String>> = BTreeMap::new();
        let mut sig_b: BTreeMap<&BlankNode, Vec<String>> = BTreeMap::new();
        for (ds, colours, sigs) in [(a, &ca, &mut sig_a), (b, &cb, &mut sig_b)] {
            for q in ds {
                let p = pattern(q, colours);
                for (role, n) in [
                    ("s", matches!(q.subject, Node::Blank(_)).then(|| &q.subject)),
                    ("g", q.graph.node().filter(|g| g.is_blank())),
                ] {
                    if let Some(Node::Blank(bn)) = n {
                        sigs.entry(bn).or_default().push(format!("{role}|{p}"));
                    }
                }
                if let Term::Blank(bn) = &q.object {
                    sigs.entry(bn).or_default().push(format!("o|{p}"));
                }
            }
        }
        // dense relabelling over the union so both sides share colour ids
        let mut palette: BTreeMap<(u64, Vec<String>), u64> = BTreeMap::new();
        let ka = keyed(&ca, &mut sig_a);
        let kb = keyed(&cb, &mut sig_b);
        for (_, key) in ka.iter().chain(kb.iter()) {
            let next = palette.len() as u64;
            palette.entry(key.clone()).or_insert(next);
        }
        ca = ka.into_iter().map(|(n, k)| (n, palette[&k])).collect();
        cb = kb.into_iter().map(|(n, k)| (n, palette[&k])).collect();
        if classes(&ca) + classes(&cb) == before {
            return (ca, cb);
        }
    }
}

fn map_quad(q: &Quad, m: &HashMap<&BlankNode, &BlankNode>) -> Quad {
    let node = |n: &Node| match n {
        Node::Blank(b) => Node::Blank((*m.get(b).unwrap_or(&b)).clone()),
        other => other.clone(),
    };
    Quad {
        subject: node(&q.subject),
        predicate: q.predicate.clone(),
        object: match &q.object {
            Term::Blank(b) => Term::Blank((*m.get(b).unwrap_or(&b)).clone()),
            other => other.clone(),
        },
        graph: match &q.graph {
            GraphName::Named(g) => GraphName::Named(node(g)),
            GraphName::Default => GraphName::Default,
        },
    }
}

struct Search<'a> {
    a: &'a Dataset,
    b: &'a Dataset,
    order: Vec<&'a BlankNode>,
    candidates: HashMap<&'a BlankNode, Vec<&'a BlankNode>>,
}

impl<'a> Search<'a> {
    fn consistent(&self, m: &HashMap<&'a BlankNode, &'a BlankNode>) -> bool {
        // every quad of `a` whose blanks are all mapped must exist in `b`
        self.a.iter().all(|q| {
            if blanks_of(q).all(|bn| m.contains_key(bn)) {
                self.b.contains(&map_quad(q, m))
            } else {
                true
            }
        })
    }

    fn run(
        &self,
        depth: usize,
        m: &mut HashMap<&'a BlankNode, &'a BlankNode>,
        used: &mut BTreeSet<&'a BlankNode>,
    ) -> bool {
        if depth == self.order.len() {
            return self.consistent(m);
        }
        let src = self.order[depth];
        for &dst in &self.candidates[src] {
            if used.contains(dst) {
                continue;
            }
            m.insert(src, dst);
            used.insert(dst);
            if self.consistent(m) && self.run(depth + 1, m, used) {
                return true;
            }
            m.remove(src);
            used.remove(dst);
        }
        false
    }
}

/// Isomorphism with the default bound of twelve combined blank nodes.
pub fn isomorphic(a: &Dataset, b: &Dataset) -> Result<bool, BoundExceeded> {
    isomorphic_with_bound(a, b, DEFAULT_BLANK_BOUND)
}

pub fn isomorphic_with_bound(a: &Dataset, b: &Dataset, bound: usize) -> Result<bool, BoundExceeded> {
    let ba = blank_set(a);
    let bb = blank_set(b);
    let found = ba.len() + bb.len();
    if found > bound {
        return Err(BoundExceeded { found, bound });
    }
    if a.len() != b.len() || ba.len() != bb.len() {
        return Ok(false);
    }
    if ba.is_empty() {
        return Ok(a.same_quads(b));
    }
    // ground quads must match exactly
    let ground_ok = a
        .iter()
        .filter(|q| blanks_of(q).next().is_none())
        .all(|q| b.contains(q));
    if !ground_ok {
        return Ok(false);
    }
    let (ca, cb) = refine(a, b);
    let mut hist_a: BTreeMap<u64, usize> = BTreeMap::new();
    let mut hist_b: BTreeMap<u64, usize> = BTreeMap::new();
    for c in ca.values() {
        *hist_a.entry(*c).or_default() += 1;
    }
    for c in cb.values() {
        *hist_b.entry(*c).or_default() += 1;
    }
    if hist_a != hist_b {
        return Ok(false);
    }
    let mut order: Vec<&BlankNode> = ba.iter().copied().collect();
    order.sort_by_key(|n| (hist_a[&ca[n]], *n));
    let candidates = order
        .iter()
        .map(|n| {
            let c = ca[n];
            let mut cs: Vec<&BlankNode> = bb.iter().copied().filter(|m| cb[m] == c).collect();
            cs.sort();
            (*n, cs)
        })
        .collect();
    let search = Search {
        a,
        b,
        order,
        candidates,
    };
    Ok(search.run(0, &mut HashMap::new(), &mut BTreeSet::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_trig;

    const PRE: &str = "@prefix : <http://ex.org/> .\n";

    fn ds(body: &str) -> Dataset {
        parse_trig(&format!("{PRE}{body}")).unwrap()
    }

    #[test]
    fn ground_equality() {
        assert!(isomorphic(&ds(":a :p :b . :c :p :d ."), &ds(":c :p :d . :a :p :b .")).unwrap());
        assert!(!isomorphic(&ds(":a :p :b ."), &ds(":a :p :c .")).unwrap());
    }

    #[test]
    fn renamed_blanks() {
        let a = ds("_:x :p _:y . _:y :p _:x . _:g { _:x :q \"1\" }");
        let b = ds("_:m :p _:n . _:n :p _:m . _:h { _:m :q \"1\" }");
        assert!(isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn structure_matters() {
        let a = ds("_:x :p _:y . _:y :p _:z .");
        let b = ds("_:x :p _:y . _:x :p _:z .");
        assert!(!isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn regular_graphs_need_search() {
        // two 6-cycles vs a 3-cycle pair: same degrees, different structure
        let six = ds("_:a :p _:b . _:b :p _:c . _:c :p _:d . _:d :p _:e . _:e :p _:f . _:f :p _:a .");
        let threes = ds("_:a :p _:b . _:b :p _:c . _:c :p _:a . _:d :p _:e . _:e :p _:f . _:f :p _:d .");
        assert!(!isomorphic(&six, &threes).unwrap());
        let six_renamed = ds("_:u :p _:v . _:v :p _:w . _:w :p _:x . _:x :p _:y . _:y :p _:z . _:z :p _:u .");
        assert!(isomorphic(&six, &six_renamed).unwrap());
    }

    #[test]
    fn bound_is_enforced() {
        let body: String = (0..7).map(|i| format!("_:b{i} :p :o .\n")).collect();
        let a = ds(&body);
        let err = isomorphic(&a, &a).unwrap_err();
        assert_eq!(err, BoundExceeded { found: 14, bound: 12 });
        assert!(isomorphic_with_bound(&a, &a, 14).unwrap());
    }
}
