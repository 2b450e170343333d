//! Seeded generators and reference implementations for differential tests.
//! Compiled only with the `testing` feature.

use std::collections::BTreeSet;
use std::rc::Rc;

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

use crate::graph::{BlankNode, Dataset, GraphName, Iri, Literal, Node, Quad, Term, RDFS_SUBCLASS_OF, RDF_TYPE};
use crate::model::vocab;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn iri(s: &str) -> Iri {
    Iri::new(s).expect("generator IRIs are absolute")
}

// ---------------------------------------------------------------------
// Arbitrary datasets within the supported TriG subset

const IRI_POOL: &[&str] = &[
    "http://ex.org/a",
    "http://ex.org/b",
    "http://ex.org/c-d",
    "http://ex.org/e_f",
    "http://ex.org/9",
    "http://ex.org/g.h",
    "http://ex.org/trailing.",
    "http://ex.org/with%20pct",
    "http://ex.org/q?x=1#frag",
    "http://ex.org/ns#term",
    "http://ex.org/",
    "urn:isbn:0451450523",
    "http://ex.org/\u{e9}t\u{e9}",
    "https://w3id.org/fdof/ontology#gupri",
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type",
];

const BLANK_POOL: &[&str] = &["b0", "b1", "b2", "x.y", "_u", "n-1", "\u{e9}"];

const STRING_PIECES: &[&str] = &[
    "",
    "plain",
    " ",
    "\"",
    "'",
    "''",
    "'''",
    "\"\"\"",
    "\\",
    "\n",
    "\r",
    "\t",
    "\u{8}",
    "\u{c}",
    "\u{1}",
    "\u{7f}",
    "\u{e9}",
    "\u{1F600}",
    "#",
    "@en",
    "^^",
    "<x>",
    "{",
    "}",
    ".",
    ";",
    ",",
];

const DATATYPES: &[&str] = &[
    "http://www.w3.org/2001/XMLSchema#string",
    "http://www.w3.org/2001/XMLSchema#date",
    "http://www.w3.org/2001/XMLSchema#integer",
    "http://ex.org/dt",
];

fn random_string(rng: &mut StdRng) -> String {
    (0..rng.random_range(0..5))
        .map(|_| *STRING_PIECES.choose(rng).expect("non-empty"))
        .collect()
}

fn random_node(rng: &mut StdRng) -> Node {
    if rng.random_bool(0.25) {
        Node::Blank(BlankNode::new(*BLANK_POOL.choose(rng).expect("non-empty")).expect("valid label"))
    } else {
        Node::Iri(iri(IRI_POOL.choose(rng).expect("non-empty")))
    }
}

fn random_term(rng: &mut StdRng) -> Term {
    match rng.random_range(0..6) {
        0 | 1 => Term::from(random_node(rng)),
        2 => Term::Literal(Literal::string(random_string(rng))),
        3 => Term::Literal(
            Literal::lang(
                random_string(rng),
                ["en", "EN-us", "de-CH-1996", "x-private"]
                    .choose(rng)
                    .expect("non-empty"),
            )
            .expect("valid tag"),
        ),
        _ => Term::Literal(Literal::typed(
            random_string(rng),
            iri(DATATYPES.choose(rng).expect("non-empty")),
        )),
    }
}

/// A dataset of up to `max_quads` quads spread over the default graph and
/// a few named graphs, with some prefix declarations.
pub fn random_dataset(rng: &mut StdRng, max_quads: usize) -> Dataset {
    let mut ds = Dataset::new();
    for (label, ns) in [
        ("ex", "http://ex.org/"),
        ("", "http://ex.org/ns#"),
        ("fdof", vocab::NS),
        ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ] {
        if rng.random_bool(0.6) {
            ds.set_prefix(label, iri(ns));
        }
    }
    let n = rng.random_range(0..=max_quads);
    for _ in 0..n {
        let graph = match rng.random_range(0..4) {
            0 | 1 => GraphName::Default,
            _ => GraphName::Named(random_node(rng)),
        };
        let predicate = iri(IRI_POOL.choose(rng).expect("non-empty"));
        ds.insert(Quad::new(random_node(rng), predicate, random_term(rng), graph));
    }
    ds
}

// ---------------------------------------------------------------------
// FDOF corpora

const EX: &str = "http://ex.org/";

fn ex(local: &str) -> Node {
    Node::iri(format!("{EX}{local}")).expect("valid")
}

struct Builder {
    ds: Dataset,
    cap: usize,
}

impl Builder {
    fn add(&mut self, s: &Node, p: &str, o: impl Into<Term>, g: &GraphName) {
        if self.ds.len() < self.cap {
            self.ds.insert(Quad::new(s.clone(), iri(p), o, g.clone()));
        }
    }

    fn typed(&mut self, s: &Node, class: &str) {
        self.add(s, RDF_TYPE, iri(class), &GraphName::Default);
    }
}

/// A random corpus over at most `max_nodes` candidate objects and at most
/// `max_quads` quads. Roles, identifiers, record graphs and type
/// hierarchies are drawn independently, so corpora range from conforming
/// to thoroughly broken.
pub fn fdof_corpus(rng: &mut StdRng, max_nodes: usize, max_quads: usize) -> Dataset {
    let mut b = Builder {
        ds: Dataset::new(),
        cap: max_quads,
    };
    b.ds.set_prefix("", iri(EX));
    b.ds.set_prefix("fdof", iri(vocab::NS));
    let dg = GraphName::Default;

    // :Sub -> FDIO, :Deep -> :Sub, :Deeper -> :Deep, each declared or not
    let hierarchy = [
        ("Sub", vocab::FAIR_DIGITAL_INFORMATION_OBJECT.to_owned()),
        ("Deep", format!("{EX}Sub")),
        ("Deeper", format!("{EX}Deep")),
    ];
    for (sub, sup) in &hierarchy {
        if rng.random_bool(0.7) {
            b.add(&ex(sub), RDFS_SUBCLASS_OF, iri(sup), &dg);
        }
    }
    let info_types = ["Sub", "Deep", "Deeper", "Plain"];

    let n = rng.random_range(1..=max_nodes.max(1));
    let nodes: Vec<Node> = (0..n)
        .map(|i| {
            if rng.random_bool(0.05) {
                Node::Blank(BlankNode::new(format!("n{i}")).expect("valid"))
            } else {
                ex(&format!("n{i}"))
            }
        })
        .collect();
    let mut records = Vec::new();
    for node in &nodes {
        match rng.random_range(0..8) {
            0 | 1 => b.typed(node, vocab::FAIR_DIGITAL_INFORMATION_OBJECT),
            2 | 3 => b.typed(node, vocab::FAIR_DIGITAL_MEDIA_OBJECT),
            4 | 5 => {
                b.typed(node, vocab::FAIR_METADATA_RECORD);
                records.push(node.clone());
            }
            6 => b.typed(node, vocab::FAIR_DIGITAL_OBJECT),
            _ => {}
        }
        if rng.random_bool(0.3) {
            let t = info_types.choose(rng).expect("non-empty");
            b.add(node, vocab::HAS_INFORMATION_OBJECT_TYPE, iri(&format!("{EX}{t}")), &dg);
        }
        if rng.random_bool(0.8) {
            let value = if let Node::Iri(i) = node {
                i.as_str().to_owned()
            } else {
                "urn:blank".to_owned()
            };
            b.add(node, vocab::GUPRI, Literal::string(value), &dg);
        }
        if rng.random_bool(0.3) {
            let m = nodes.choose(rng).expect("non-empty");
            b.add(node, vocab::IS_MATERIALIZED_BY, m.clone(), &dg);
        }
        if rng.random_bool(0.3) {
            b.add(
                node,
                vocab::HAS_ENCODING_FORMAT,
                iri("https://iana.org/assignments/media-types/text/csv"),
                &dg,
            );
        }
    }
    // a few untyped nodes that still state isMetadataOf
    records.extend(nodes.iter().filter(|_| rng.random_bool(0.1)).cloned());

    for rec in &records {
        let targets = rng.random_range(0..=3);
        for _ in 0..targets {
            let target = nodes.choose(rng).expect("non-empty").clone();
            let graph = match rng.random_range(0..10) {
                0 => GraphName::Default,
                1 => GraphName::Named(nodes.choose(rng).expect("non-empty").clone()),
                _ => GraphName::Named(rec.clone()),
            };
            b.add(rec, vocab::IS_METADATA_OF, target.clone(), &graph);
            if rng.random_bool(0.5) {
                if let Node::Iri(i) = &target {
                    b.add(&target, vocab::GUPRI, Literal::string(i.as_str()), &graph);
                }
            }
        }
    }
    b.ds
}

/// Only metadata records, each with a record graph describing one or more
/// records of the same corpus (possibly itself).
pub fn fmr_only_corpus(rng: &mut StdRng, max_records: usize) -> Dataset {
    let mut b = Builder {
        ds: Dataset::new(),
        cap: usize::MAX,
    };
    let n = rng.random_range(1..=max_records.max(1));
    let nodes: Vec<Node> = (0..n).map(|i| ex(&format!("r{i}"))).collect();
    for node in &nodes {
        b.typed(node, vocab::FAIR_METADATA_RECORD);
        let value = node.as_iri().expect("iri").as_str().to_owned();
        b.add(node, vocab::GUPRI, Literal::string(value), &GraphName::Default);
        let graph = GraphName::Named(node.clone());
        for _ in 0..rng.random_range(1..=2) {
            let target = nodes.choose(rng).expect("non-empty").clone();
            b.add(node, vocab::IS_METADATA_OF, target, &graph);
        }
    }
    b.ds
}

// ---------------------------------------------------------------------
// URI strings

const UNRESERVED_EXTRA: &[char] = &['-', '.', '_', '~'];
const SUB_DELIMS: &[char] = &['!', '$', '&', '\'', '(', ')', '*', '+', ',', ';', '='];
const HEX: &[u8] = b"0123456789abcdefABCDEF";

fn pct(rng: &mut StdRng) -> String {
    format!(
        "%{}{}",
        *HEX.choose(rng).expect("non-empty") as char,
        *HEX.choose(rng).expect("non-empty") as char
    )
}

fn alnum(rng: &mut StdRng) -> char {
    *b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        .choose(rng)
        .expect("non-empty") as char
}

/// Random run drawn from alphanumerics, `extra`, and percent escapes.
fn run(rng: &mut StdRng, max: usize, extra: &[char]) -> String {
    run_with(rng, max, extra, true)
}

fn run_with(rng: &mut StdRng, max: usize, extra: &[char], escapes: bool) -> String {
    let mut s = String::new();
    for _ in 0..rng.random_range(0..=max) {
        match rng.random_range(0..10) {
            0 if escapes => s.push_str(&pct(rng)),
            1..=3 if !extra.is_empty() => s.push(*extra.choose(rng).expect("non-empty")),
            _ => s.push(alnum(rng)),
        }
    }
    s
}

fn pchar_extra() -> Vec<char> {
    [UNRESERVED_EXTRA, SUB_DELIMS, &[':', '@']].concat()
}

fn h16(rng: &mut StdRng) -> String {
    (0..rng.random_range(1..=4))
        .map(|_| *HEX.choose(rng).expect("non-empty") as char)
        .collect()
}

fn ipv4(rng: &mut StdRng) -> String {
    (0..4)
        .map(|_| rng.random_range(0..=255u32).to_string())
        .collect::<Vec<_>>()
        .join(".")
}

fn ipv6(rng: &mut StdRng) -> String {
    let v4_tail = rng.random_bool(0.2);
    let total = if v4_tail { 6 } else { 8 };
    let groups: Vec<String> = (0..total).map(|_| h16(rng)).collect();
    let tail = if v4_tail { Some(ipv4(rng)) } else { None };
    let joined = |gs: &[String]| gs.join(":");
    if rng.random_bool(0.4) {
        let mut s = joined(&groups);
        if let Some(t) = tail {
            s = format!("{s}:{t}");
        }
        return s;
    }
    // compress: keep h head and t tail groups with h + t < total
    let kept = rng.random_range(0..total);
    let head = rng.random_range(0..=kept);
    let tail_n = kept - head;
    let mut s = format!("{}::", joined(&groups[..head]));
    let tail_groups = joined(&groups[total - tail_n..]);
    match (tail_groups.is_empty(), tail) {
        (true, Some(t)) => s.push_str(&t),
        (true, None) => {}
        (false, Some(t)) => s.push_str(&format!("{tail_groups}:{t}")),
        (false, None) => s.push_str(&tail_groups),
    }
    s
}

fn host(rng: &mut StdRng) -> String {
    match rng.random_range(0..6) {
        0 => ipv4(rng),
        1 => format!("[{}]", ipv6(rng)),
        2 => format!(
            "[v{}.{}]",
            h16(rng),
            run_with(rng, 4, &[UNRESERVED_EXTRA, SUB_DELIMS, &[':']].concat(), false) + "x"
        ),
        _ => run(rng, 12, &[UNRESERVED_EXTRA, SUB_DELIMS].concat()),
    }
}

fn segment(rng: &mut StdRng, non_empty: bool) -> String {
    let s = run(rng, 6, &pchar_extra());
    if non_empty && s.is_empty() {
        alnum(rng).to_string()
    } else {
        s
    }
}

/// A string derived from the absolute-URI grammar, so always valid.
pub fn uri_positive(rng: &mut StdRng) -> String {
    let mut s = String::new();
    s.push(
        *b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
            .choose(rng)
            .expect("non-empty") as char,
    );
    for _ in 0..rng.random_range(0..5) {
        s.push(match rng.random_range(0..5) {
            0 => *['+', '-', '.'].choose(rng).expect("non-empty"),
            _ => alnum(rng),
        });
    }
    s.push(':');
    match rng.random_range(0..4) {
        0 | 1 => {
            s.push_str("//");
            if rng.random_bool(0.2) {
                s.push_str(&run(rng, 5, &[UNRESERVED_EXTRA, SUB_DELIMS, &[':']].concat()));
                s.push('@');
            }
            s.push_str(&host(rng));
            if rng.random_bool(0.3) {
                s.push(':');
                if rng.random_bool(0.8) {
                    s.push_str(&rng.random_range(0..70000u32).to_string());
                }
            }
            for _ in 0..rng.random_range(0..4) {
                s.push('/');
                s.push_str(&segment(rng, false));
            }
        }
        2 => {
            s.push('/');
            if rng.random_bool(0.7) {
                s.push_str(&segment(rng, true));
                for _ in 0..rng.random_range(0..3) {
                    s.push('/');
                    s.push_str(&segment(rng, false));
                }
            }
        }
        _ => {
            if rng.random_bool(0.8) {
                s.push_str(&segment(rng, true));
                for _ in 0..rng.random_range(0..3) {
                    s.push('/');
                    s.push_str(&segment(rng, false));
                }
            }
        }
    }
    let qf_extra = [pchar_extra(), vec!['/', '?']].concat();
    if rng.random_bool(0.3) {
        s.push('?');
        s.push_str(&run(rng, 8, &qf_extra));
    }
    if rng.random_bool(0.3) {
        s.push('#');
        s.push_str(&run(rng, 8, &qf_extra));
    }
    s
}

const NOISE: &[char] = &[
    ' ', '<', '>', '"', '{', '}', '|', '\\', '^', '`', '%', '#', '?', '[', ']', '@', ':', '/', '\u{e9}', '\u{0}', '\n',
    'G',
];

/// A grammar-derived string with one to three random edits. Usually
/// invalid, sometimes still valid.
pub fn uri_negative(rng: &mut StdRng) -> String {
    let mut chars: Vec<char> = uri_positive(rng).chars().collect();
    for _ in 0..rng.random_range(1..=3) {
        let at = rng.random_range(0..=chars.len());
        match rng.random_range(0..4) {
            0 => chars.insert(at, *NOISE.choose(rng).expect("non-empty")),
            1 if at < chars.len() => {
                chars.remove(at);
            }
            2 if at < chars.len() => chars[at] = *NOISE.choose(rng).expect("non-empty"),
            _ => chars.truncate(at),
        }
    }
    chars.into_iter().collect()
}

// ---------------------------------------------------------------------
// Reference URI recognizer: a literal transcription of the URI grammar
// as nondeterministic combinators over end-position sets.

type Ends = BTreeSet<usize>;
type Rule = Rc<dyn Fn(&[u8], usize) -> Ends>;

fn class(f: fn(u8) -> bool) -> Rule {
    Rc::new(move |s, i| {
        if i < s.len() && f(s[i]) {
            [i + 1].into()
        } else {
            Ends::new()
        }
    })
}

fn lit(t: &'static str) -> Rule {
    Rc::new(move |s, i| {
        if s[i.min(s.len())..].starts_with(t.as_bytes()) {
            [i + t.len()].into()
        } else {
            Ends::new()
        }
    })
}

fn empty() -> Rule {
    Rc::new(|_, i| [i].into())
}

fn seq(rules: Vec<Rule>) -> Rule {
    Rc::new(move |s, i| {
        let mut ends: Ends = [i].into();
        for r in &rules {
            ends = ends.iter().flat_map(|&e| r(s, e)).collect();
            if ends.is_empty() {
                break;
            }
        }
        ends
    })
}

fn alt(rules: Vec<Rule>) -> Rule {
    Rc::new(move |s, i| rules.iter().flat_map(|r| r(s, i)).collect())
}

/// `min*max rule`; `None` is unbounded.
fn rep(min: usize, max: Option<usize>, r: Rule) -> Rule {
    Rc::new(move |s, i| {
        let mut all = Ends::new();
        let mut frontier: Ends = [i].into();
        for count in 0.. {
            if count >= min {
                all.extend(frontier.iter().copied());
            }
            if frontier.is_empty() || max.is_some_and(|m| count >= m) {
                break;
            }
            let mut next: Ends = frontier.iter().flat_map(|&e| r(s, e)).collect();
            if count >= min {
                next.retain(|e| !all.contains(e));
            }
            frontier = next;
        }
        all
    })
}

fn opt(r: Rule) -> Rule {
    alt(vec![r, empty()])
}

fn absolute_uri_grammar() -> Rule {
    let alpha = class(|c| c.is_ascii_alphabetic());
    let digit = class(|c| c.is_ascii_digit());
    let hexdig = class(|c| c.is_ascii_hexdigit());
    let unreserved = class(|c| c.is_ascii_alphanumeric() || b"-._~".contains(&c));
    let sub_delims = class(|c| b"!$&'()*+,;=".contains(&c));
    let pct_encoded = seq(vec![lit("%"), hexdig.clone(), hexdig.clone()]);
    let pchar = alt(vec![
        unreserved.clone(),
        pct_encoded.clone(),
        sub_delims.clone(),
        lit(":"),
        lit("@"),
    ]);

    let scheme = seq(vec![
        alpha.clone(),
        rep(0, None, alt(vec![alpha, digit.clone(), lit("+"), lit("-"), lit(".")])),
    ]);
    let userinfo = rep(
        0,
        None,
        alt(vec![
            unreserved.clone(),
            pct_encoded.clone(),
            sub_delims.clone(),
            lit(":"),
        ]),
    );

    let dec_octet = alt(vec![
        digit.clone(),
        seq(vec![class(|c| (b'1'..=b'9').contains(&c)), digit.clone()]),
        seq(vec![lit("1"), digit.clone(), digit.clone()]),
        seq(vec![lit("2"), class(|c| (b'0'..=b'4').contains(&c)), digit.clone()]),
        seq(vec![lit("25"), class(|c| (b'0'..=b'5').contains(&c))]),
    ]);
    let ipv4 = seq(vec![
        dec_octet.clone(),
        lit("."),
        dec_octet.clone(),
        lit("."),
        dec_octet.clone(),
        lit("."),
        dec_octet,
    ]);
    let h16 = rep(1, Some(4), hexdig.clone());
    let h16c = seq(vec![h16.clone(), lit(":")]);
    let ls32 = alt(vec![seq(vec![h16.clone(), lit(":"), h16.clone()]), ipv4.clone()]);
    let head = |n: usize| opt(seq(vec![rep(0, Some(n), h16c.clone()), h16.clone()]));
    let ipv6 = alt(vec![
        seq(vec![rep(6, Some(6), h16c.clone()), ls32.clone()]),
        seq(vec![lit("::"), rep(5, Some(5), h16c.clone()), ls32.clone()]),
        seq(vec![
            opt(h16.clone()),
            lit("::"),
            rep(4, Some(4), h16c.clone()),
            ls32.clone(),
        ]),
        seq(vec![head(1), lit("::"), rep(3, Some(3), h16c.clone()), ls32.clone()]),
        seq(vec![head(2), lit("::"), rep(2, Some(2), h16c.clone()), ls32.clone()]),
        seq(vec![head(3), lit("::"), h16c.clone(), ls32.clone()]),
        seq(vec![head(4), lit("::"), ls32]),
        seq(vec![head(5), lit("::"), h16.clone()]),
        seq(vec![head(6), lit("::")]),
    ]);
    let ipvfuture = seq(vec![
        lit("v"),
        rep(1, None, hexdig),
        lit("."),
        rep(1, None, alt(vec![unreserved.clone(), sub_delims.clone(), lit(":")])),
    ]);
    let ip_literal = seq(vec![lit("["), alt(vec![ipv6, ipvfuture]), lit("]")]);
    let reg_name = rep(0, None, alt(vec![unreserved, pct_encoded, sub_delims]));
    let host = alt(vec![ip_literal, ipv4, reg_name]);
    let port = rep(0, None, digit);
    let authority = seq(vec![
        opt(seq(vec![userinfo, lit("@")])),
        host,
        opt(seq(vec![lit(":"), port])),
    ]);

    let segment = rep(0, None, pchar.clone());
    let segment_nz = rep(1, None, pchar.clone());
    let slash_segments = rep(0, None, seq(vec![lit("/"), segment]));
    let path_abempty = slash_segments.clone();
    let path_absolute = seq(vec![
        lit("/"),
        opt(seq(vec![segment_nz.clone(), slash_segments.clone()])),
    ]);
    let path_rootless = seq(vec![segment_nz, slash_segments]);
    let hier_part = alt(vec![
        seq(vec![lit("//"), authority, path_abempty]),
        path_absolute,
        path_rootless,
        empty(),
    ]);
    let query = rep(0, None, alt(vec![pchar, lit("/"), lit("?")]));
    seq(vec![
        scheme,
        lit(":"),
        hier_part,
        opt(seq(vec![lit("?"), query.clone()])),
        opt(seq(vec![lit("#"), query])),
    ])
}

/// Whether `value` is an absolute URI with optional fragment.
pub fn reference_uri_accepts(value: &str) -> bool {
    thread_local! {
        static GRAMMAR: Rule = absolute_uri_grammar();
    }
    let bytes = value.as_bytes();
    GRAMMAR.with(|g| g(bytes, 0).contains(&bytes.len()))
}

// ---------------------------------------------------------------------
// Isomorphism by exhaustive relabelling

/// Tries every bijection between the blank nodes of `a` and `b`. Only for
/// small inputs (factorial in the number of blank nodes).
pub fn isomorphic_exhaustive(a: &Dataset, b: &Dataset) -> bool {
    fn blanks(ds: &Dataset) -> Vec<BlankNode> {
        let mut out = BTreeSet::new();
        for q in ds {
            for n in [Some(q.subject.clone()), q.object.as_node(), q.graph.node().cloned()]
                .into_iter()
                .flatten()
            {
                if let Node::Blank(b) = n {
                    out.insert(b);
                }
            }
        }
        out.into_iter().collect()
    }
    fn relabel(ds: &Dataset, from: &[BlankNode], to: &[BlankNode]) -> Dataset {
        let map = |n: &Node| match n {
            Node::Blank(b) => Node::Blank(to[from.iter().position(|x| x == b).expect("known blank")].clone()),
            other => other.clone(),
        };
        ds.iter()
            .map(|q| {
                let object = match &q.object {
                    Term::Blank(b) => Term::from(map(&Node::Blank(b.clone()))),
                    t => t.clone(),
                };
                let graph = match &q.graph {
                    GraphName::Named(n) => GraphName::Named(map(n)),
                    GraphName::Default => GraphName::Default,
                };
                Quad::new(map(&q.subject), q.predicate.clone(), object, graph)
            })
            .collect()
    }
    fn permute(k: usize, perm: &mut Vec<BlankNode>, visit: &mut dyn FnMut(&[BlankNode]) -> bool) -> bool {
        if k == perm.len() {
            return visit(perm);
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            if permute(k + 1, perm, visit) {
                return true;
            }
            perm.swap(k, i);
        }
        false
    }
    if a.len() != b.len() {
        return false;
    }
    let (ba, bb) = (blanks(a), blanks(b));
    if ba.len() != bb.len() {
        return false;
    }
    let mut perm = bb.clone();
    permute(0, &mut perm, &mut |p| relabel(a, &ba, p) == *b)
}
