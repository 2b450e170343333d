//! Rule engine over an extracted model.
//!
//! | rule | checks | severity |
//! |------|--------|----------|
//! | C1 | every FDO has a gupri or an `fdof:Identifier` node; blank nodes always fail | violation |
//! | C2 | no gupri value identifies two nodes | violation |
//! | C3 | every FDO other than a metadata record is the target of some record | violation, warning for pure media objects |
//! | C4 | every record names a graph holding its `isMetadataOf`, and its targets are identifiable | violation; warning when the graph holds no identifier statement for a target |
//! | C5 | every information object is materialized by a media object | violation, or warning with `relax_c5` |
//! | C6 | every media object has exactly one encoding format | violation for none, warning for several |
//! | C7 | nodes typed `fdof:FAIRDigitalObject` are also information or media objects | violation |
//! | C8 | every information object has an information object type | warning |
//! | C9 | information object types with a shape are met | violation; warning for unshaped types |
//! | C10 | gupri values are absolute URIs | violation |
//!
//! Findings are ordered by rule, then focus key, then message.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Dataset, GraphName, Node, Quad, Term, RDFS_SUBCLASS_OF, RDF_TYPE};
use crate::identifiers::{is_gupri, uniqueness_audit, IdentificationSpace};
use crate::model::{vocab, FdofModel, FdofObject, ObjectKind};
use crate::typing::{conformance, Problem, ShapeRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::C1,
        RuleId::C2,
        RuleId::C3,
        RuleId::C4,
        RuleId::C5,
        RuleId::C6,
        RuleId::C7,
        RuleId::C8,
        RuleId::C9,
        RuleId::C10,
    ];
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Violation,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Violation => "violation",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub rule: RuleId,
    pub severity: Severity,
    pub focus: Node,
    pub message: String,
    /// Source quads behind the finding; empty when something is absent.
    pub evidence: Vec<Quad>,
}

impl Finding {
    fn new(rule: RuleId, severity: Severity, focus: &Node, message: impl Into<String>) -> Self {
        Finding {
            rule,
            severity,
            focus: focus.clone(),
            message: message.into(),
            evidence: Vec::new(),
        }
    }

    fn with_evidence(mut self, evidence: Vec<Quad>) -> Self {
        self.evidence = evidence;
        self
    }

    fn sort_key(&self) -> (RuleId, String, &str) {
        (self.rule, self.focus.key(), &self.message)
    }
}

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    /// Report C5 as a warning, for corpora that only carry metadata.
    pub relax_c5: bool,
    /// Rules whose warnings are raised to violations.
    pub tighten: BTreeSet<RuleId>,
    /// Warn about information object types without a registered shape.
    pub warn_unshaped: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            relax_c5: false,
            tighten: BTreeSet::new(),
            warn_unshaped: true,
        }
    }
}

impl ValidateOptions {
    /// Every warning becomes a violation.
    pub fn strict() -> Self {
        ValidateOptions {
            tighten: RuleId::ALL.into_iter().collect(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub objects: usize,
    pub information_objects: usize,
    pub media_objects: usize,
    pub metadata_records: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCount {
    pub rule: RuleId,
    pub violations: usize,
    pub warnings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    pub summary: CorpusSummary,
}

impl ValidationReport {
    pub fn conforms(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Violation)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }

    /// Counts for every rule that produced at least one finding.
    pub fn stats(&self) -> Vec<RuleCount> {
        let mut counts: BTreeMap<RuleId, RuleCount> = BTreeMap::new();
        for f in &self.findings {
            let c = counts.entry(f.rule).or_insert(RuleCount {
                rule: f.rule,
                violations: 0,
                warnings: 0,
            });
            match f.severity {
                Severity::Violation => c.violations += 1,
                Severity::Warning => c.warnings += 1,
            }
        }
        counts.into_values().collect()
    }

    /// `(rule, focus key)` for every finding of the given severity.
    pub fn finding_set(&self, severity: Severity) -> BTreeSet<(RuleId, String)> {
        self.findings
            .iter()
            .filter(|f| f.severity == severity)
            .map(|f| (f.rule, f.focus.key()))
            .collect()
    }
}

fn quads_of<'a>(ds: &'a Dataset, node: &'a Node, predicate: &'a str) -> impl Iterator<Item = &'a Quad> + 'a {
    ds.iter()
        .filter(move |q| &q.subject == node && q.predicate.as_str() == predicate)
}

fn identifiable(model: &FdofModel, obj: &FdofObject) -> bool {
    !obj.node.is_blank()
        && (!obj.gupris.is_empty()
            || obj
                .identifier_nodes
                .iter()
                .any(|n| model.objects.get(n).is_some_and(|o| o.typed_identifier)))
}

fn check_c1(model: &FdofModel, out: &mut Vec<Finding>) {
    for obj in model.objects.values().filter(|o| o.is_fdo()) {
        if obj.node.is_blank() {
            out.push(Finding::new(
                RuleId::C1,
                Severity::Violation,
                &obj.node,
                "blank node cannot carry a globally unique identifier",
            ));
        } else if !identifiable(model, obj) {
            out.push(Finding::new(
                RuleId::C1,
                Severity::Violation,
                &obj.node,
                "no gupri and no identifier node typed fdof:Identifier",
            ));
        }
    }
}

fn check_c2(model: &FdofModel, out: &mut Vec<Finding>) {
    let pairs = model
        .objects
        .values()
        .flat_map(|o| o.gupris.iter().map(move |g| (g.as_str(), &o.node)));
    for collision in uniqueness_audit(pairs) {
        for node in &collision.subjects {
            let others: Vec<String> = collision
                .subjects
                .iter()
                .filter(|n| *n != node)
                .map(|n| n.key())
                .collect();
            let evidence = quads_of(&model.source, node, vocab::GUPRI)
                .filter(|q| match &q.object {
                    Term::Literal(l) => l.lexical() == collision.value,
                    Term::Iri(i) => i.as_str() == collision.value,
                    Term::Blank(_) => false,
                })
                .cloned()
                .collect();
            out.push(
                Finding::new(
                    RuleId::C2,
                    Severity::Violation,
                    node,
                    format!("gupri {:?} also identifies {}", collision.value, others.join(", ")),
                )
                .with_evidence(evidence),
            );
        }
    }
}

fn check_c3(model: &FdofModel, out: &mut Vec<Finding>) {
    for obj in model.objects.values() {
        if !obj.is_fdo() || obj.has(ObjectKind::MetadataRecord) || !obj.described_by.is_empty() {
            continue;
        }
        let media_only = obj.has(ObjectKind::MediaObject) && !obj.has(ObjectKind::InformationObject);
        let severity = if media_only {
            Severity::Warning
        } else {
            Severity::Violation
        };
        out.push(Finding::new(
            RuleId::C3,
            severity,
            &obj.node,
            "no metadata record describes this object",
        ));
    }
}

fn check_c4(model: &FdofModel, out: &mut Vec<Finding>) {
    for obj in model.objects.values().filter(|o| o.has(ObjectKind::MetadataRecord)) {
        let node = &obj.node;
        let Some(record) = model.records.get(node) else {
            let named = GraphName::Named(node.clone());
            let message = if model.source.iter().any(|q| q.graph == named) {
                "record graph has no isMetadataOf statement for the record"
            } else {
                "no named graph carries this record"
            };
            out.push(Finding::new(RuleId::C4, Severity::Violation, node, message));
            continue;
        };
        for target in &record.targets {
            let evidence: Vec<Quad> = quads_of(&record.statements, node, vocab::IS_METADATA_OF)
                .filter(|q| q.object.is_node(target))
                .cloned()
                .collect();
            let ok = model.objects.get(target).is_some_and(|t| identifiable(model, t));
            if !ok {
                out.push(
                    Finding::new(
                        RuleId::C4,
                        Severity::Violation,
                        node,
                        format!("described object {} has no extractable identifier", target.key()),
                    )
                    .with_evidence(evidence),
                );
                continue;
            }
            let stated = record.statements.iter().any(|q| {
                &q.subject == target && matches!(q.predicate.as_str(), vocab::GUPRI | vocab::IS_IDENTIFIED_BY)
            });
            if !stated {
                out.push(
                    Finding::new(
                        RuleId::C4,
                        Severity::Warning,
                        node,
                        format!("record graph states no identifier for {}", target.key()),
                    )
                    .with_evidence(evidence),
                );
            }
        }
    }
}

fn check_c5(model: &FdofModel, options: &ValidateOptions, out: &mut Vec<Finding>) {
    let severity = if options.relax_c5 {
        Severity::Warning
    } else {
        Severity::Violation
    };
    for obj in model.objects.values().filter(|o| o.has(ObjectKind::InformationObject)) {
        let materialized = obj
            .materialized_by
            .iter()
            .any(|m| model.objects.get(m).is_some_and(|o| o.has(ObjectKind::MediaObject)));
        if !materialized {
            let evidence = quads_of(&model.source, &obj.node, vocab::IS_MATERIALIZED_BY)
                .cloned()
                .collect();
            out.push(
                Finding::new(RuleId::C5, severity, &obj.node, "not materialized by any media object")
                    .with_evidence(evidence),
            );
        }
    }
}

fn check_c6(model: &FdofModel, out: &mut Vec<Finding>) {
    for obj in model.objects.values().filter(|o| o.has(ObjectKind::MediaObject)) {
        match obj.encoding_formats.len() {
            0 => out.push(Finding::new(
                RuleId::C6,
                Severity::Violation,
                &obj.node,
                "media object has no encoding format",
            )),
            1 => {}
            n => out.push(
                Finding::new(
                    RuleId::C6,
                    Severity::Warning,
                    &obj.node,
                    format!("media object has {n} encoding formats"),
                )
                .with_evidence(
                    quads_of(&model.source, &obj.node, vocab::HAS_ENCODING_FORMAT)
                        .cloned()
                        .collect(),
                ),
            ),
        }
    }
}

fn check_c7(model: &FdofModel, out: &mut Vec<Finding>) {
    for obj in model.objects.values() {
        if obj.declared_fdo && !obj.has(ObjectKind::InformationObject) && !obj.has(ObjectKind::MediaObject) {
            let evidence = quads_of(&model.source, &obj.node, RDF_TYPE)
                .filter(|q| {
                    q.object
                        .as_iri()
                        .is_some_and(|i| i.as_str() == vocab::FAIR_DIGITAL_OBJECT)
                })
                .cloned()
                .collect();
            out.push(
                Finding::new(
                    RuleId::C7,
                    Severity::Violation,
                    &obj.node,
                    "typed only as the abstract FAIRDigitalObject class",
                )
                .with_evidence(evidence),
            );
        }
    }
}

fn check_c8(model: &FdofModel, out: &mut Vec<Finding>) {
    for obj in model.objects.values() {
        if obj.has(ObjectKind::InformationObject) && obj.info_types.is_empty() {
            out.push(Finding::new(
                RuleId::C8,
                Severity::Warning,
                &obj.node,
                "information object has no information object type",
            ));
        }
    }
}

fn check_c9(model: &FdofModel, registry: &ShapeRegistry, options: &ValidateOptions, out: &mut Vec<Finding>) {
    for obj in model.objects.values() {
        for info_type in &obj.info_types {
            let Some(shape) = registry.effective(info_type) else {
                if options.warn_unshaped {
                    out.push(Finding::new(
                        RuleId::C9,
                        Severity::Warning,
                        &obj.node,
                        format!("no shape registered for type <{info_type}>"),
                    ));
                }
                continue;
            };
            let findings = conformance(model, &obj.node, &shape).expect("node taken from the model");
            for rf in findings {
                let evidence = match rf.problem {
                    Problem::Missing => Vec::new(),
                    _ => quads_of(&model.source, &obj.node, rf.property.as_str())
                        .cloned()
                        .collect(),
                };
                out.push(
                    Finding::new(RuleId::C9, Severity::Violation, &obj.node, rf.to_string()).with_evidence(evidence),
                );
            }
        }
    }
}

fn check_c10(model: &FdofModel, out: &mut Vec<Finding>) {
    let space = IdentificationSpace::uri();
    for obj in model.objects.values() {
        for g in &obj.gupris {
            if !is_gupri(g, &space) {
                let evidence = quads_of(&model.source, &obj.node, vocab::GUPRI)
                    .filter(|q| q.object.as_literal().is_some_and(|l| l.lexical() == g))
                    .cloned()
                    .collect();
                out.push(
                    Finding::new(
                        RuleId::C10,
                        Severity::Violation,
                        &obj.node,
                        format!("gupri {g:?} is not an absolute URI"),
                    )
                    .with_evidence(evidence),
                );
            }
        }
    }
}

pub fn validate(model: &FdofModel, registry: &ShapeRegistry, options: &ValidateOptions) -> ValidationReport {
    let mut findings = Vec::new();
    check_c1(model, &mut findings);
    check_c2(model, &mut findings);
    check_c3(model, &mut findings);
    check_c4(model, &mut findings);
    check_c5(model, options, &mut findings);
    check_c6(model, &mut findings);
    check_c7(model, &mut findings);
    check_c8(model, &mut findings);
    check_c9(model, registry, options, &mut findings);
    check_c10(model, &mut findings);

    for f in &mut findings {
        if f.severity == Severity::Warning && options.tighten.contains(&f.rule) {
            f.severity = Severity::Violation;
        }
    }
    findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));

    let summary = CorpusSummary {
        objects: model.objects.values().filter(|o| o.is_fdo()).count(),
        information_objects: model.count_kind(ObjectKind::InformationObject),
        media_objects: model.count_kind(ObjectKind::MediaObject),
        metadata_records: model.count_kind(ObjectKind::MetadataRecord),
    };
    ValidationReport { findings, summary }
}

/// Largest dataset [`brute_force_c3`] accepts.
pub const C3_ORACLE_BOUND: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("dataset of {0} quads exceeds the oracle bound of {C3_ORACLE_BOUND}")]
pub struct OracleBoundExceeded(pub usize);

/// Nodes failing the metadata existence rule, computed by direct scans of
/// the quads: x is a digital object and not a metadata record, and no
/// record y states `y isMetadataOf x` inside the graph named y.
pub fn brute_force_c3(ds: &Dataset) -> Result<BTreeSet<Node>, OracleBoundExceeded> {
    if ds.len() > C3_ORACLE_BOUND {
        return Err(OracleBoundExceeded(ds.len()));
    }
    let quads: Vec<&Quad> = ds.iter().collect();
    let typed = |x: &Node, class: &str| {
        quads.iter().any(|q| {
            &q.subject == x
                && q.predicate.as_str() == RDF_TYPE
                && q.object.as_iri().is_some_and(|o| o.as_str() == class)
        })
    };
    let sub_of_fdio = |t: &Term| {
        let direct = |s: &Term, sup: &dyn Fn(&Term) -> bool| {
            quads.iter().any(|q| {
                q.predicate.as_str() == RDFS_SUBCLASS_OF && Term::from(q.subject.clone()) == *s && sup(&q.object)
            })
        };
        let is_fdio = |o: &Term| {
            o.as_iri()
                .is_some_and(|i| i.as_str() == vocab::FAIR_DIGITAL_INFORMATION_OBJECT)
        };
        direct(t, &is_fdio) || direct(t, &|mid: &Term| direct(mid, &is_fdio))
    };
    let fdo_classes = [
        vocab::FAIR_DIGITAL_OBJECT,
        vocab::FAIR_DIGITAL_INFORMATION_OBJECT,
        vocab::FAIR_DIGITAL_MEDIA_OBJECT,
        vocab::FAIR_METADATA_RECORD,
    ];
    let is_fdo = |x: &Node| {
        fdo_classes.iter().any(|c| typed(x, c))
            || quads.iter().any(|q| {
                &q.subject == x
                    && q.predicate.as_str() == vocab::HAS_INFORMATION_OBJECT_TYPE
                    && matches!(q.object, Term::Iri(_))
                    && sub_of_fdio(&q.object)
            })
    };
    let described = |x: &Node| {
        quads.iter().any(|q| {
            q.predicate.as_str() == vocab::IS_METADATA_OF
                && q.object.is_node(x)
                && q.graph == GraphName::Named(q.subject.clone())
                && typed(&q.subject, vocab::FAIR_METADATA_RECORD)
        })
    };
    let candidates: HashSet<&Node> = quads.iter().map(|q| &q.subject).collect();
    Ok(candidates
        .into_iter()
        .filter(|x| is_fdo(x) && !typed(x, vocab::FAIR_METADATA_RECORD) && !described(x))
        .cloned()
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Finding as it appears in the json report. Evidence quads are N-Quads
/// lines without the trailing newline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindingRecord {
    pub rule: RuleId,
    pub severity: Severity,
    pub focus: String,
    pub message: String,
    pub evidence: Vec<String>,
}

impl From<&Finding> for FindingRecord {
    fn from(f: &Finding) -> Self {
        FindingRecord {
            rule: f.rule,
            severity: f.severity,
            focus: f.focus.key(),
            message: f.message.clone(),
            evidence: f.evidence.iter().map(|q| q.to_string()).collect(),
        }
    }
}

/// Top-level json report document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub conforms: bool,
    pub summary: CorpusSummary,
    pub stats: Vec<RuleCount>,
    pub findings: Vec<FindingRecord>,
}

impl From<&ValidationReport> for ReportDocument {
    fn from(r: &ValidationReport) -> Self {
        ReportDocument {
            conforms: r.conforms(),
            summary: r.summary,
            stats: r.stats(),
            findings: r.findings.iter().map(FindingRecord::from).collect(),
        }
    }
}

/// Text: one line per finding, `RULE severity focus: message`, then a
/// summary line. Json: a [`ReportDocument`], pretty-printed.
pub fn render_report(report: &ValidationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&ReportDocument::from(report)).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut s = String::new();
            for f in &report.findings {
                s.push_str(&format!("{} {} {}: {}\n", f.rule, f.severity, f.focus.key(), f.message));
            }
            let sm = &report.summary;
            s.push_str(&format!(
                "{} objects ({} information, {} media, {} metadata records); {} violations, {} warnings; {}\n",
                sm.objects,
                sm.information_objects,
                sm.media_objects,
                sm.metadata_records,
                report.violations().count(),
                report.warnings().count(),
                if report.conforms() {
                    "conforms"
                } else {
                    "does not conform"
                }
            ));
            s
        }
    }
}
