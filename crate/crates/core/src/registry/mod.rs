//! Deposit, resolution and type description keyed by gupri.
//!
//! A deposit yields one entry per identified digital object. The entry's
//! slice is what `resolve` returns:
//!
//! - a metadata record: its own graph plus the statements about it,
//! - an object described by a record: the describing record graph(s),
//! - any other object: the statements with the object as subject.
//!
//! Every gupri of an object resolves to the same entry; the first one in
//! document order is the entry's primary key. Etags are the lowercase hex
//! SHA-256 of the slice's canonical N-Quads.

mod journal;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{Arc, RwLock};

use chrono::{DateTime, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use journal::{read_records, Journal, JournalError, JournalRecord, MAGIC};

use crate::graph::{parse_trig, serialize_trig, Dataset, Node, ParseError};
use crate::identifiers::{Clock, SystemClock};
use crate::model::{extract_model, Classification, FdofModel, ObjectKind};
use crate::typing::ShapeRegistry;
use crate::validator::{validate, ValidateOptions, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepositEntry {
    pub gupri: String,
    /// Further gupris of the same node.
    pub aliases: Vec<String>,
    pub node: Node,
    pub record_graph: Option<Node>,
    pub dataset: Dataset,
    pub deposited_at: DateTime<Utc>,
    pub etag: String,
    /// Deposited with validation skipped.
    pub forced: bool,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Deposited {
    pub gupri: String,
    pub etag: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub gupri: String,
    pub node: Node,
    pub etag: String,
    pub dataset: Dataset,
}

impl Resolution {
    pub fn trig(&self) -> String {
        serialize_trig(&self.dataset)
    }
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("unknown gupri {0:?}")]
    NotFound(String),
    #[error("gupri {0:?} has no describing metadata record")]
    Unprocessable(String),
    #[error("gupri {gupri:?} is already bound to different content (etag {existing})")]
    Conflict { gupri: String, existing: String },
    #[error("deposit does not conform: {} violation(s)", .0.violations().count())]
    Invalid(Box<ValidationReport>),
    #[error(transparent)]
    Journal(#[from] JournalError),
    #[error("journal record {index}: {source}")]
    Replay { index: usize, source: ParseError },
}

pub fn etag(ds: &Dataset) -> String {
    hex::encode(Sha256::digest(ds.canonical_nquads().as_bytes()))
}

#[derive(Default)]
struct State {
    entries: BTreeMap<String, Arc<DepositEntry>>,
    journal: Option<Journal>,
}

/// Many readers, one writer. A deposit becomes visible all at once, after
/// its journal record is on disk.
pub struct RegistryStore {
    shapes: ShapeRegistry,
    options: ValidateOptions,
    clock: Box<dyn Clock>,
    state: RwLock<State>,
}

fn slice_for(model: &FdofModel, node: &Node) -> (Option<Node>, Dataset) {
    let obj = &model.objects[node];
    if let Some(record) = model.records.get(node) {
        let mut ds = record.statements.clone();
        ds.extend_from(&model.source.subject_slice(node));
        return (Some(record.graph.clone()), ds);
    }
    if !obj.described_by.is_empty() {
        let mut ds = Dataset::new();
        for r in &obj.described_by {
            ds.extend_from(&model.records[r].statements);
        }
        return (Some(model.records[&obj.described_by[0]].graph.clone()), ds);
    }
    (None, model.source.subject_slice(node))
}

/// Entries a dataset would produce, without touching any store.
pub fn plan_entries(ds: &Dataset, deposited_at: DateTime<Utc>, forced: bool) -> Vec<DepositEntry> {
    let model = extract_model(ds);
    let mut entries = Vec::new();
    for obj in model.objects.values() {
        if !obj.is_fdo() || obj.gupris.is_empty() || obj.node.is_blank() {
            continue;
        }
        let (record_graph, mut dataset) = slice_for(&model, &obj.node);
        for (label, ns) in ds.prefixes() {
            dataset.set_prefix(label.clone(), ns.clone());
        }
        entries.push(DepositEntry {
            gupri: obj.gupris[0].clone(),
            aliases: obj.gupris[1..].to_vec(),
            node: obj.node.clone(),
            record_graph,
            etag: etag(&dataset),
            dataset,
            deposited_at,
            forced,
            classification: model.classify(&obj.node).expect("object from model"),
        });
    }
    entries
}

impl RegistryStore {
    pub fn in_memory(shapes: ShapeRegistry, options: ValidateOptions) -> Self {
        RegistryStore {
            shapes,
            options,
            clock: Box::new(SystemClock),
            state: RwLock::new(State::default()),
        }
    }

    /// Opens the journal at `path`, creating it if needed, and replays it.
    pub fn open(
        path: impl AsRef<Path>,
        shapes: ShapeRegistry,
        options: ValidateOptions,
    ) -> Result<Self, RegistryError> {
        let (journal, records) = Journal::open(path)?;
        let store = Self::in_memory(shapes, options);
        {
            let mut state = store.state.write().expect("registry lock poisoned");
            for (index, rec) in records.iter().enumerate() {
                let ds = parse_trig(&rec.trig).map_err(|source| RegistryError::Replay { index, source })?;
                let planned = plan_entries(&ds, rec.deposited_at, rec.forced);
                Self::check_conflicts(&state, &planned)?;
                Self::apply(&mut state, planned);
            }
            state.journal = Some(journal);
        }
        Ok(store)
    }

    pub fn with_clock(mut self, clock: impl Clock + 'static) -> Self {
        self.clock = Box::new(clock);
        self
    }

    /// Conflicts with existing entries, or among the planned ones. Returns
    /// whether anything is new.
    fn check_conflicts(state: &State, planned: &[DepositEntry]) -> Result<bool, RegistryError> {
        let mut fresh = false;
        let mut seen: BTreeMap<&str, &DepositEntry> = BTreeMap::new();
        for entry in planned {
            for g in std::iter::once(&entry.gupri).chain(&entry.aliases) {
                if let Some(other) = seen.insert(g, entry) {
                    if other.node != entry.node {
                        return Err(RegistryError::Conflict {
                            gupri: g.clone(),
                            existing: other.etag.clone(),
                        });
                    }
                }
                match state.entries.get(g) {
                    Some(existing) if existing.etag != entry.etag || existing.node != entry.node => {
                        return Err(RegistryError::Conflict {
                            gupri: g.clone(),
                            existing: existing.etag.clone(),
                        });
                    }
                    Some(_) => {}
                    None => fresh = true,
                }
            }
        }
        Ok(fresh)
    }

    fn apply(state: &mut State, planned: Vec<DepositEntry>) {
        for entry in planned {
            let entry = Arc::new(entry);
            for g in std::iter::once(&entry.gupri).chain(&entry.aliases) {
                state.entries.entry(g.clone()).or_insert_with(|| Arc::clone(&entry));
            }
        }
    }

    /// Validates (unless `force`), then stores one entry per identified
    /// object. All or nothing; an identical re-deposit changes nothing.
    pub fn deposit(&self, ds: &Dataset, force: bool) -> Result<Vec<Deposited>, RegistryError> {
        if !force {
            let report = validate(&extract_model(ds), &self.shapes, &self.options);
            if !report.conforms() {
                return Err(RegistryError::Invalid(Box::new(report)));
            }
        }
        let mut state = self.state.write().expect("registry lock poisoned");
        let now = self.clock.now();
        let planned = plan_entries(ds, now, force);
        let fresh = Self::check_conflicts(&state, &planned)?;
        let receipt: Vec<Deposited> = planned
            .iter()
            .map(|e| Deposited {
                gupri: e.gupri.clone(),
                etag: e.etag.clone(),
            })
            .collect();
        if fresh {
            if let Some(journal) = state.journal.as_mut() {
                journal.append(&JournalRecord {
                    deposited_at: now,
                    forced: force,
                    trig: serialize_trig(ds),
                })?;
            }
            Self::apply(&mut state, planned);
        }
        Ok(receipt)
    }

    pub fn entry(&self, gupri: &str) -> Result<Arc<DepositEntry>, RegistryError> {
        self.state
            .read()
            .expect("registry lock poisoned")
            .entries
            .get(gupri)
            .cloned()
            .ok_or_else(|| RegistryError::NotFound(gupri.to_owned()))
    }

    /// The metadata describing the identified object; for a metadata
    /// record, the record itself. Media objects nobody describes resolve to
    /// their own statements.
    pub fn resolve(&self, gupri: &str) -> Result<Resolution, RegistryError> {
        let entry = self.entry(gupri)?;
        let kinds = &entry.classification.kinds;
        let media_only = kinds.contains(&ObjectKind::MediaObject) && !kinds.contains(&ObjectKind::InformationObject);
        if entry.record_graph.is_none() && !media_only {
            return Err(RegistryError::Unprocessable(gupri.to_owned()));
        }
        Ok(Resolution {
            gupri: gupri.to_owned(),
            node: entry.node.clone(),
            etag: entry.etag.clone(),
            dataset: entry.dataset.clone(),
        })
    }

    pub fn describe_type(&self, gupri: &str) -> Result<Classification, RegistryError> {
        Ok(self.entry(gupri)?.classification.clone())
    }

    /// Distinct entries ordered by primary gupri.
    pub fn entries(&self) -> Vec<Arc<DepositEntry>> {
        let state = self.state.read().expect("registry lock poisoned");
        let mut out: Vec<Arc<DepositEntry>> = state
            .entries
            .iter()
            .filter(|(k, e)| **k == e.gupri)
            .map(|(_, e)| Arc::clone(e))
            .collect();
        out.sort_by(|a, b| a.gupri.cmp(&b.gupri));
        out
    }

    pub fn len(&self) -> usize {
        self.entries().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
