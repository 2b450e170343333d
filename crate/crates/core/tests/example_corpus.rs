mod common;

use common::{corpus, corpus_of, ex1, fixture, shapes};
use fdof_core::graph::{isomorphic, ParseErrorKind};
use fdof_core::model::vocab;
use fdof_core::typing::conformance;
use fdof_core::{
    brute_force_c3, extract_model, parse_trig, validate, Iri, ObjectKind, Quad, RegistryStore, RuleId, Severity,
    ValidateOptions,
};

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

#[test]
fn raw_identification_parses() {
    let ds = parse_trig(&fixture("raw/identification.trig")).unwrap();
    assert_eq!(ds.len(), 2);
    let m = extract_model(&ds);
    assert_eq!(
        m.lookup_by_gupri("https://w3id.org/fdof/fois23-paper/amazonTop50"),
        vec![ex1("amazonTop50")]
    );
}

#[test]
fn raw_record_needs_rdf_and_xsd_prefixes() {
    let text = format!(
        "{}\n{}",
        fixture("raw/identification.trig")
            .lines()
            .take(6)
            .collect::<Vec<_>>()
            .join("\n"),
        fixture("raw/record.trig")
    );
    let err = parse_trig(&text).unwrap_err();
    assert!(
        matches!(err.kind, ParseErrorKind::UndefinedPrefix(ref p) if p == "rdf"),
        "{err}"
    );
    assert_eq!((err.line, err.column), (8, 23));
}

#[test]
fn raw_materialization_statement_break_is_a_positioned_error() {
    let header: String = fixture("materialization.trig")
        .lines()
        .take(9)
        .map(|l| format!("{l}\n"))
        .collect();
    let err = parse_trig(&format!("{header}{}", fixture("raw/materialization.trig"))).unwrap_err();
    assert_eq!(err.line, 11, "{err}");
    assert!(matches!(err.kind, ParseErrorKind::Syntax { .. }), "{err}");
}

#[test]
fn model_matches_the_object_graph() {
    let m = extract_model(&corpus());
    let fdos: Vec<String> = m
        .objects
        .values()
        .filter(|o| o.is_fdo())
        .map(|o| o.node.key())
        .collect();
    assert_eq!(fdos.len(), 4);
    let kinds = |l: &str| m.object(&ex1(l)).unwrap().kinds.iter().copied().collect::<Vec<_>>();
    assert_eq!(kinds("amazonTop50"), [ObjectKind::InformationObject]);
    assert_eq!(
        kinds("amazonTop50Metadata"),
        [ObjectKind::InformationObject, ObjectKind::MetadataRecord]
    );
    assert_eq!(kinds("amazonTop50Csv"), [ObjectKind::MediaObject]);
    assert_eq!(kinds("amazonTop50MetadataTrig"), [ObjectKind::MediaObject]);

    let top = m.object(&ex1("amazonTop50")).unwrap();
    assert_eq!(top.materialized_by, [ex1("amazonTop50Csv")]);
    assert_eq!(top.described_by, [ex1("amazonTop50Metadata")]);
    assert_eq!(
        top.gupris,
        [
            "https://w3id.org/fdof/fois23-paper/amazonTop50",
            "https://w3id.org/fdof/fois23-paper/ex1/amazonTop50"
        ]
    );
    assert_eq!(top.identifier_nodes.len(), 1);
    let csv = m.object(&ex1("amazonTop50Csv")).unwrap();
    assert_eq!(
        csv.encoding_formats,
        [iri("https://iana.org/assignments/media-types/text/csv")]
    );

    assert_eq!(m.records.len(), 1);
    let rec = &m.records[&ex1("amazonTop50Metadata")];
    assert_eq!(rec.targets, [ex1("amazonTop50")]);
    assert_eq!(rec.statements.len(), 7);
    // statements outside the record graph stay with the object
    let meta = m.object(&ex1("amazonTop50Metadata")).unwrap();
    assert!(meta
        .attributions
        .iter()
        .any(|(p, _)| p.as_str() == "http://purl.org/dc/terms/license"));
}

#[test]
fn classification_answers() {
    let m = extract_model(&corpus());
    let c = m.classify(&ex1("amazonTop50")).unwrap();
    assert_eq!(c.kinds, [ObjectKind::InformationObject]);
    assert_eq!(c.info_types, [iri("https://w3id.org/fdof/types#Dataset")]);
    assert!(m.classify(&ex1("nothing")).is_err());
    assert!(m.lookup_by_gupri("https://example.org/unseen").is_empty());
}

#[test]
fn dataset_shape_is_met() {
    let m = extract_model(&corpus());
    let reg = shapes();
    assert_eq!(reg.len(), 2);
    let shape = reg.effective(&iri("https://w3id.org/fdof/types#Dataset")).unwrap();
    assert_eq!(shape.mandatory.len(), 2);
    assert!(conformance(&m, &ex1("amazonTop50"), &shape).unwrap().is_empty());
}

#[test]
fn merged_documents_conform() {
    let ds = corpus();
    let report = validate(&extract_model(&ds), &shapes(), &ValidateOptions::default());
    assert!(report.conforms(), "{:#?}", report.findings);
    // the media objects have no record of their own
    let warned: Vec<_> = report.warnings().map(|f| (f.rule, f.focus.key())).collect();
    assert_eq!(
        warned,
        [
            (RuleId::C3, format!("{}amazonTop50Csv", common::EX1)),
            (RuleId::C3, format!("{}amazonTop50MetadataTrig", common::EX1)),
        ]
    );
    let oracle = brute_force_c3(&ds).unwrap();
    assert_eq!(oracle.len(), 2);
}

fn violations_after(remove: impl Fn(&Quad) -> bool) -> Vec<(RuleId, String)> {
    let mut ds = corpus();
    let doomed: Vec<Quad> = ds.iter().filter(|q| remove(q)).cloned().collect();
    assert!(!doomed.is_empty());
    for q in &doomed {
        ds.remove(q);
    }
    let report = validate(&extract_model(&ds), &shapes(), &ValidateOptions::default());
    report
        .finding_set(Severity::Violation)
        .into_iter()
        .map(|(r, k)| (r, k.trim_start_matches(common::EX1).to_owned()))
        .collect()
}

#[test]
fn mutation_findings() {
    assert_eq!(
        violations_after(|q| q.predicate.as_str() == vocab::IS_METADATA_OF),
        [
            (RuleId::C3, "amazonTop50".into()),
            (RuleId::C4, "amazonTop50Metadata".into())
        ]
    );
    assert_eq!(
        violations_after(|q| q.predicate.as_str() == vocab::HAS_ENCODING_FORMAT && q.subject == ex1("amazonTop50Csv")),
        [(RuleId::C6, "amazonTop50Csv".into())]
    );
    assert_eq!(
        violations_after(|q| q.predicate.as_str() == "http://purl.org/dc/terms/issued"),
        [(RuleId::C9, "amazonTop50".into())]
    );
}

#[test]
fn corpus_without_media_identifiers_fail_identification() {
    let ds = corpus_of(&["identification.trig", "record.trig", "materialization.trig"]);
    let report = validate(&extract_model(&ds), &shapes(), &ValidateOptions::default());
    let c1: Vec<_> = report.violations().filter(|f| f.rule == RuleId::C1).collect();
    assert_eq!(c1.len(), 2);
}

#[test]
fn registry_serves_every_object() {
    let ds = corpus();
    let store = RegistryStore::in_memory(shapes(), ValidateOptions::default());
    let receipt = store.deposit(&ds, false).unwrap();
    assert_eq!(receipt.len(), 4);

    let res = store.resolve("https://w3id.org/fdof/fois23-paper/amazonTop50").unwrap();
    let record_graph = ds.graph_slice(&ex1("amazonTop50Metadata"));
    assert!(res.dataset.same_quads(&record_graph));
    assert!(isomorphic(&parse_trig(&res.trig()).unwrap(), &record_graph).unwrap());

    let csv = store
        .describe_type("https://w3id.org/fdof/fois23-paper/ex1/amazonTop50Csv")
        .unwrap();
    assert_eq!(csv.kinds, [ObjectKind::MediaObject]);
    assert_eq!(
        csv.encoding_formats,
        [iri("https://iana.org/assignments/media-types/text/csv")]
    );
    assert!(store.resolve("https://w3id.org/fdof/fois23-paper/unknown").is_err());
}
