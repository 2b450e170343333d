use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, RwLock};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::space::{is_gupri, Gupri, IdentificationSpace, Identifier};
use crate::graph::Iri;

/// Attempts per mint before giving up on fresh-token collisions.
pub const MINT_RETRY_BOUND: usize = 8;

const SLOT: &str = "{}";

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FixedClock(pub DateTime<Utc>);

impl Clock for FixedClock {
    fn now(&self) -> DateTime<Utc> {
        self.0
    }
}

/// Provenance of one identifier assignment: who bound which value to which
/// object, and when.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identification {
    pub identifier: String,
    pub space: String,
    pub object: Iri,
    pub agent: Iri,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MintError {
    #[error("template must contain exactly one '{{}}' slot, found {0}")]
    Template(usize),
    #[error("minted value {value:?} is not a member of the {space} space")]
    NotInSpace { value: String, space: String },
    #[error("object {0} already has a minted identifier")]
    DuplicateObject(Iri),
    #[error("value {0:?} is already bound in this ledger")]
    DuplicateValue(String),
    #[error("no fresh value after {0} attempts")]
    Exhausted(usize),
}

/// Renders a 128-bit token as 26 lowercase base-32 characters.
pub fn render_token(token: u128) -> String {
    data_encoding::BASE32_NOPAD
        .encode(&token.to_be_bytes())
        .to_ascii_lowercase()
}

#[derive(Debug, Default)]
struct Ledger {
    values: HashSet<String>,
    by_object: HashMap<Iri, String>,
    records: Vec<Identification>,
}

type TokenSource = Box<dyn FnMut() -> u128 + Send>;

/// Mints identifiers in one space and keeps the uniqueness ledger. Values
/// are never removed or rebound once recorded. Mints are serialized.
pub struct Minter {
    space: IdentificationSpace,
    ledger: RwLock<Ledger>,
    tokens: Mutex<TokenSource>,
}

impl Minter {
    pub fn new(space: IdentificationSpace) -> Self {
        Self::with_tokens(space, rand::random::<u128>)
    }

    pub fn with_tokens(space: IdentificationSpace, tokens: impl FnMut() -> u128 + Send + 'static) -> Self {
        Minter {
            space,
            ledger: RwLock::new(Ledger::default()),
            tokens: Mutex::new(Box::new(tokens)),
        }
    }

    pub fn space(&self) -> &IdentificationSpace {
        &self.space
    }

    pub fn mint(
        &self,
        template: &str,
        agent: &Iri,
        object: &Iri,
        clock: &dyn Clock,
    ) -> Result<(Gupri, Identification), MintError> {
        let slots = template.matches(SLOT).count();
        if slots != 1 {
            return Err(MintError::Template(slots));
        }
        let mut ledger = self.ledger.write().expect("ledger lock poisoned");
        if ledger.by_object.contains_key(object) {
            return Err(MintError::DuplicateObject(object.clone()));
        }
        let mut tokens = self.tokens.lock().expect("token lock poisoned");
        for _ in 0..MINT_RETRY_BOUND {
            let value = template.replacen(SLOT, &render_token(tokens()), 1);
            if !is_gupri(&value, &self.space) {
                return Err(MintError::NotInSpace {
                    value,
                    space: self.space.name().to_owned(),
                });
            }
            if ledger.values.contains(&value) {
                continue;
            }
            let record = Identification {
                identifier: value.clone(),
                space: self.space.name().to_owned(),
                object: object.clone(),
                agent: agent.clone(),
                timestamp: clock.now(),
            };
            ledger.values.insert(value.clone());
            ledger.by_object.insert(object.clone(), value.clone());
            ledger.records.push(record.clone());
            let gupri = Gupri {
                base: Identifier {
                    value,
                    space: self.space.name().to_owned(),
                },
                resolvable_hint: None,
            };
            return Ok((gupri, record));
        }
        Err(MintError::Exhausted(MINT_RETRY_BOUND))
    }

    /// Replays a previously issued identification into the ledger.
    pub fn record(&self, record: Identification) -> Result<(), MintError> {
        let mut ledger = self.ledger.write().expect("ledger lock poisoned");
        if ledger.by_object.contains_key(&record.object) {
            return Err(MintError::DuplicateObject(record.object));
        }
        if ledger.values.contains(&record.identifier) {
            return Err(MintError::DuplicateValue(record.identifier));
        }
        ledger.values.insert(record.identifier.clone());
        ledger
            .by_object
            .insert(record.object.clone(), record.identifier.clone());
        ledger.records.push(record);
        Ok(())
    }

    pub fn contains_value(&self, value: &str) -> bool {
        self.ledger.read().expect("ledger lock poisoned").values.contains(value)
    }

    pub fn records(&self) -> Vec<Identification> {
        self.ledger.read().expect("ledger lock poisoned").records.clone()
    }

    pub fn len(&self) -> usize {
        self.ledger.read().expect("ledger lock poisoned").records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use chrono::TimeZone;

    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("https://ex.org/{s}")).unwrap()
    }

    fn clock() -> FixedClock {
        FixedClock(Utc.with_ymd_and_hms(2023, 7, 17, 9, 0, 0).unwrap())
    }

    #[test]
    fn token_rendering() {
        assert_eq!(render_token(0), "a".repeat(26));
        let t = render_token(u128::MAX);
        assert_eq!(t.len(), 26);
        assert!(t.chars().all(|c| c.is_ascii_lowercase() || ('2'..='7').contains(&c)));
    }

    #[test]
    fn mint_records_provenance() {
        let minter = Minter::new(IdentificationSpace::uri());
        let (gupri, record) = minter
            .mint("https://ex.org/fdo/{}", &iri("agentA"), &iri("obj1"), &clock())
            .unwrap();
        assert!(gupri.value().starts_with("https://ex.org/fdo/"));
        assert_eq!(gupri.value().len(), "https://ex.org/fdo/".len() + 26);
        assert_eq!(record.identifier, gupri.value());
        assert_eq!(record.agent, iri("agentA"));
        assert_eq!(record.object, iri("obj1"));
        assert_eq!(record.timestamp, clock().0);
        assert!(minter.contains_value(gupri.value()));
    }

    #[test]
    fn second_mint_for_same_object_fails() {
        let minter = Minter::new(IdentificationSpace::uri());
        minter
            .mint("https://ex.org/fdo/{}", &iri("a"), &iri("obj1"), &clock())
            .unwrap();
        assert_eq!(
            minter.mint("https://ex.org/fdo/{}", &iri("a"), &iri("obj1"), &clock()),
            Err(MintError::DuplicateObject(iri("obj1")))
        );
    }

    #[test]
    fn template_errors() {
        let minter = Minter::new(IdentificationSpace::uri());
        let a = iri("a");
        assert_eq!(
            minter.mint("https://ex.org/x", &a, &a, &clock()),
            Err(MintError::Template(0))
        );
        assert_eq!(
            minter.mint("https://ex.org/{}/{}", &a, &a, &clock()),
            Err(MintError::Template(2))
        );
        assert!(matches!(
            minter.mint("not a uri/{}", &a, &a, &clock()),
            Err(MintError::NotInSpace { .. })
        ));
        assert!(minter.is_empty());
    }

    #[test]
    fn collisions_retry_then_give_up() {
        let mut seq = vec![7u128, 7, 7, 9].into_iter();
        let minter = Minter::with_tokens(IdentificationSpace::uri(), move || seq.next().unwrap_or(7));
        let t = "https://ex.org/{}";
        minter.mint(t, &iri("a"), &iri("o1"), &clock()).unwrap();
        // 7 collides twice, then 9 is fresh
        let (g, _) = minter.mint(t, &iri("a"), &iri("o2"), &clock()).unwrap();
        assert_eq!(g.value(), format!("https://ex.org/{}", render_token(9)));
        assert_eq!(
            minter.mint(t, &iri("a"), &iri("o3"), &clock()),
            Err(MintError::Exhausted(MINT_RETRY_BOUND))
        );
    }

    #[test]
    fn thousand_mints_are_distinct() {
        let minter = Minter::new(IdentificationSpace::uri());
        let mut seen = HashSet::new();
        for i in 0..1000 {
            let (g, _) = minter
                .mint("https://ex.org/fdo/{}", &iri("a"), &iri(&format!("o{i}")), &clock())
                .unwrap();
            seen.insert(g.value().to_owned());
        }
        assert_eq!(seen.len(), 1000);
        assert_eq!(minter.len(), 1000);
    }

    #[test]
    fn concurrent_mints_never_collide() {
        let minter = Arc::new(Minter::new(IdentificationSpace::uri()));
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let minter = Arc::clone(&minter);
                std::thread::spawn(move || {
                    (0..100)
                        .map(|i| {
                            let o = iri(&format!("t{t}/o{i}"));
                            minter.mint("urn:fdo:{}", &o, &o, &SystemClock).unwrap().0.base.value
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let all: HashSet<String> = handles.into_iter().flat_map(|h| h.join().unwrap()).collect();
        assert_eq!(all.len(), 400);
    }

    #[test]
    fn replayed_records_guard_the_ledger() {
        let minter = Minter::new(IdentificationSpace::uri());
        let (_, rec) = minter.mint("urn:x:{}", &iri("a"), &iri("o"), &clock()).unwrap();
        let fresh = Minter::new(IdentificationSpace::uri());
        fresh.record(rec.clone()).unwrap();
        assert!(matches!(fresh.record(rec), Err(MintError::DuplicateObject(_))));
        assert!(matches!(
            fresh.mint("urn:x:{}", &iri("a"), &iri("o"), &clock()),
            Err(MintError::DuplicateObject(_))
        ));
    }
}
