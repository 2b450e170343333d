//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use fdof_cli::{client, server};
use fdof_core::graph::isomorphic;
use fdof_core::identifiers::check_uri_syntax;
use fdof_core::model::vocab;
use fdof_core::testing::{
    fdof_corpus, fmr_only_corpus, random_dataset, reference_uri_accepts, rng, uri_negative, uri_positive,
};
use fdof_core::validator::ReportDocument;
use fdof_core::{
    brute_force_c3, extract_model, load_shapes, merge_documents, parse_trig, serialize_trig, validate, Dataset, Node,
    ObjectKind, Quad, RegistryStore, RuleId, Severity, ShapeRegistry, ValidateOptions,
};
use rand::Rng;

const EX1: &str = "https://w3id.org/fdof/fois23-paper/ex1/";
const DOCUMENTS: [&str; 3] = ["identification.trig", "record.trig", "materialization.trig"];
const CORPUS: [&str; 4] = [
    "identification.trig",
    "record.trig",
    "materialization.trig",
    "media_identifiers.trig",
];

type Verdict = Result<String, String>;
type Criterion = fn() -> Verdict;
type Case = (&'static str, Dataset, Vec<(RuleId, &'static str)>);

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures().join(name)).unwrap()
}

fn corpus_of(files: &[&str]) -> Dataset {
    let docs: Vec<Dataset> = files.iter().map(|f| parse_trig(&fixture(f)).unwrap()).collect();
    merge_documents(&docs)
}

fn shapes() -> ShapeRegistry {
    load_shapes(&fixture("shapes.toml")).unwrap()
}

fn ex1(local: &str) -> Node {
    Node::iri(format!("{EX1}{local}")).unwrap()
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn golden_model() -> Verdict {
    let start = Instant::now();
    let m = extract_model(&corpus_of(&DOCUMENTS));
    let fdos: BTreeSet<String> = m
        .objects
        .values()
        .filter(|o| o.is_fdo())
        .map(|o| o.node.key().trim_start_matches(EX1).to_owned())
        .collect();
    let expected: BTreeSet<String> = [
        "amazonTop50",
        "amazonTop50Metadata",
        "amazonTop50Csv",
        "amazonTop50MetadataTrig",
    ]
    .map(String::from)
    .into();
    check(fdos == expected, || format!("FDO nodes {fdos:?}"))?;
    check(m.count_kind(ObjectKind::InformationObject) == 2, || {
        "information objects".into()
    })?;
    check(m.count_kind(ObjectKind::MediaObject) == 2, || "media objects".into())?;
    check(m.count_kind(ObjectKind::MetadataRecord) == 1, || {
        "metadata records".into()
    })?;
    let meta = &m.objects[&ex1("amazonTop50Metadata")];
    check(
        meta.has(ObjectKind::InformationObject) && meta.has(ObjectKind::MetadataRecord),
        || "the record is not an information object".into(),
    )?;

    let mut materializations = BTreeSet::new();
    let mut formats = BTreeSet::new();
    for o in m.objects.values() {
        for t in &o.materialized_by {
            materializations.insert((o.node.key(), t.key()));
        }
        for f in &o.encoding_formats {
            formats.insert((o.node.key(), f.as_str().to_owned()));
        }
    }
    let expect_mat: BTreeSet<(String, String)> = [
        ("amazonTop50", "amazonTop50Csv"),
        ("amazonTop50Metadata", "amazonTop50MetadataTrig"),
    ]
    .iter()
    .map(|(a, b)| (format!("{EX1}{a}"), format!("{EX1}{b}")))
    .collect();
    check(materializations == expect_mat, || {
        format!("materialization edges {materializations:?}")
    })?;
    let media = "https://iana.org/assignments/media-types/";
    let expect_fmt: BTreeSet<(String, String)> = [
        ("amazonTop50Csv", "text/csv"),
        ("amazonTop50MetadataTrig", "application/trig"),
    ]
    .iter()
    .map(|(a, b)| (format!("{EX1}{a}"), format!("{media}{b}")))
    .collect();
    check(formats == expect_fmt, || format!("encoding edges {formats:?}"))?;
    let meta_edges: Vec<(String, String)> = m
        .records
        .values()
        .flat_map(|r| r.targets.iter().map(|t| (r.record_node.key(), t.key())))
        .collect();
    check(
        meta_edges == [(format!("{EX1}amazonTop50Metadata"), format!("{EX1}amazonTop50"))],
        || format!("isMetadataOf edges {meta_edges:?}"),
    )?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("4 FDOs, 2+2 edges, 1 record in {elapsed:.0?}"))
}

struct CliRun {
    code: i32,
    stdout: String,
}

fn fdof(args: &[&str]) -> CliRun {
    let out = Command::new(env!("CARGO_BIN_EXE_fdof"))
        .args(args)
        .output()
        .expect("run fdof");
    CliRun {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
    }
}

fn cli_violations(dir: &Path, name: &str, ds: &Dataset) -> Result<(i32, BTreeSet<(RuleId, String)>), String> {
    let path = dir.join(name);
    std::fs::write(&path, serialize_trig(ds)).unwrap();
    let shapes = fixtures().join("shapes.toml");
    let run = fdof(&[
        "validate",
        path.to_str().unwrap(),
        "--shapes",
        shapes.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let doc: ReportDocument = serde_json::from_str(&run.stdout).map_err(|e| format!("{name}: {e}"))?;
    let set = doc
        .findings
        .iter()
        .filter(|f| f.severity == Severity::Violation)
        .map(|f| (f.rule, f.focus.trim_start_matches(EX1).to_owned()))
        .collect();
    Ok((run.code, set))
}

fn without(ds: &Dataset, doomed: impl Fn(&Quad) -> bool) -> Dataset {
    let mut out = ds.clone();
    let gone: Vec<Quad> = ds.iter().filter(|q| doomed(q)).cloned().collect();
    for q in &gone {
        out.remove(q);
    }
    out
}

fn use_case_conformance() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec!["validate".into()];
    args.extend(CORPUS.iter().map(|f| fixtures().join(f).to_string_lossy().into_owned()));
    args.extend([
        "--shapes".into(),
        fixtures().join("shapes.toml").to_string_lossy().into_owned(),
    ]);
    args.extend(["--format".into(), "json".into()]);
    let run = fdof(&args.iter().map(String::as_str).collect::<Vec<_>>());
    let doc: ReportDocument = serde_json::from_str(&run.stdout).map_err(|e| e.to_string())?;
    let violations = doc
        .findings
        .iter()
        .filter(|f| f.severity == Severity::Violation)
        .count();
    check(run.code == 0 && violations == 0, || {
        format!("exit {} with {violations} violation(s)", run.code)
    })?;

    let ds = corpus_of(&CORPUS);
    let cases: [Case; 3] = [
        (
            "no-metadata-of.trig",
            without(&ds, |q| q.predicate.as_str() == vocab::IS_METADATA_OF),
            vec![(RuleId::C3, "amazonTop50"), (RuleId::C4, "amazonTop50Metadata")],
        ),
        (
            "no-csv-format.trig",
            without(&ds, |q| {
                q.predicate.as_str() == vocab::HAS_ENCODING_FORMAT && q.subject == ex1("amazonTop50Csv")
            }),
            vec![(RuleId::C6, "amazonTop50Csv")],
        ),
        (
            "no-issued.trig",
            without(&ds, |q| q.predicate.as_str() == "http://purl.org/dc/terms/issued"),
            vec![(RuleId::C9, "amazonTop50")],
        ),
    ];
    for (name, mutated, expected) in cases {
        check(mutated.len() < ds.len(), || format!("{name}: nothing removed"))?;
        let (code, got) = cli_violations(dir.path(), name, &mutated)?;
        let expected: BTreeSet<(RuleId, String)> = expected.into_iter().map(|(r, f)| (r, f.to_owned())).collect();
        check(got == expected && code == 1, || format!("{name}: exit {code}, {got:?}"))?;
    }
    Ok("exit 0, 3 mutation sets exact".into())
}

fn c3_foci(ds: &Dataset) -> BTreeSet<Node> {
    validate(
        &extract_model(ds),
        &ShapeRegistry::default(),
        &ValidateOptions::default(),
    )
    .findings
    .into_iter()
    .filter(|f| f.rule == RuleId::C3)
    .map(|f| f.focus)
    .collect()
}

const CORPORA: u64 = 250;

fn c3_oracle() -> Verdict {
    let start = Instant::now();
    let mut discrepancies = 0;
    let mut flagged = 0;
    for seed in 0..CORPORA {
        let ds = fdof_corpus(&mut rng(seed), 20, 200);
        let fdos = extract_model(&ds).objects.values().filter(|o| o.is_fdo()).count();
        check(fdos <= 20 && ds.len() <= 200, || {
            format!("seed {seed}: corpus out of bounds")
        })?;
        let got = c3_foci(&ds);
        let oracle = brute_force_c3(&ds).map_err(|e| e.to_string())?;
        flagged += got.len();
        if got != oracle {
            discrepancies += 1;
        }
    }
    let elapsed = start.elapsed();
    check(discrepancies == 0, || format!("{discrepancies} discrepant corpora"))?;
    check(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{CORPORA} corpora, {flagged} C3 foci, 0 discrepancies in {elapsed:.0?}"
    ))
}

fn fmr_exemption() -> Verdict {
    for seed in 0..CORPORA {
        let ds = fdof_corpus(&mut rng(seed), 20, 200);
        let m = extract_model(&ds);
        if let Some(n) = c3_foci(&ds).into_iter().find(|n| m.records.contains_key(n)) {
            return Err(format!("seed {seed}: record {n} flagged"));
        }
        let only = fmr_only_corpus(&mut rng(seed), 10);
        check(!extract_model(&only).records.is_empty(), || {
            format!("seed {seed}: no records generated")
        })?;
        let foci = c3_foci(&only);
        check(foci.is_empty(), || {
            format!("seed {seed}: record-only corpus flagged {foci:?}")
        })?;
    }
    Ok(format!("{CORPORA} mixed and {CORPORA} record-only corpora"))
}

const ROUND_TRIPS: u64 = 600;
const FUZZ_INPUTS: usize = 100_000;
const HANG_LIMIT: Duration = Duration::from_secs(5);
const NOISE: &[char] = &[
    '<', '>', '"', '\'', '@', '^', ':', ';', ',', '.', '{', '}', '[', ']', '(', ')', '_', '#', '\\', ' ', '\n', 'a',
    'Z', '0', '9', '-', '+', 'e', 'é', '%', '/',
];

fn mutate(r: &mut impl Rng, seed: &[char]) -> String {
    let mut chars = seed.to_vec();
    for _ in 0..r.random_range(1..=4) {
        let len = chars.len();
        let at = if len == 0 { 0 } else { r.random_range(0..len) };
        match r.random_range(0..5) {
            0 if len > 0 => {
                let end = (at + r.random_range(1..=8)).min(len);
                chars.drain(at..end);
            }
            1 => chars.insert(at, NOISE[r.random_range(0..NOISE.len())]),
            2 if len > 0 => {
                let end = (at + r.random_range(1..=16)).min(len);
                let span: Vec<char> = chars[at..end].to_vec();
                let to = r.random_range(0..=len);
                chars.splice(to..to, span);
            }
            3 if len > 0 => chars.truncate(at),
            _ if len > 1 => {
                let other = r.random_range(0..len);
                chars.swap(at, other);
            }
            _ => chars.push(NOISE[r.random_range(0..NOISE.len())]),
        }
    }
    chars.into_iter().collect()
}

fn parser_round_trip() -> Verdict {
    for seed in 0..ROUND_TRIPS {
        let ds = random_dataset(&mut rng(seed), 40);
        let again = parse_trig(&serialize_trig(&ds)).map_err(|e| format!("seed {seed}: {e}"))?;
        check(again == ds, || format!("seed {seed}: quad set changed"))?;
    }

    let mut seeds: Vec<Vec<char>> = [
        "identification.trig",
        "record.trig",
        "materialization.trig",
        "media_identifiers.trig",
    ]
    .iter()
    .chain(["raw/record.trig", "raw/materialization.trig"].iter())
    .map(|f| fixture(f).chars().collect())
    .collect();
    seeds.extend((0..16).map(|s| {
        serialize_trig(&random_dataset(&mut rng(1000 + s), 30))
            .chars()
            .collect()
    }));

    let progress = Arc::new(AtomicUsize::new(0));
    let done = Arc::new(AtomicBool::new(false));
    let worker = {
        let (progress, done) = (progress.clone(), done.clone());
        std::thread::spawn(move || {
            let mut r = rng(7);
            let mut crashes = Vec::new();
            let mut rejected = 0usize;
            for i in 0..FUZZ_INPUTS {
                let input = mutate(&mut r, &seeds[i % seeds.len()]);
                match panic::catch_unwind(AssertUnwindSafe(|| parse_trig(&input))) {
                    Ok(Err(_)) => rejected += 1,
                    Ok(Ok(_)) => {}
                    Err(_) => crashes.push(input),
                }
                progress.store(i + 1, Ordering::Relaxed);
            }
            done.store(true, Ordering::Release);
            (crashes, rejected)
        })
    };
    let mut last = (0, Instant::now());
    while !done.load(Ordering::Acquire) {
        std::thread::sleep(Duration::from_millis(50));
        let now = progress.load(Ordering::Relaxed);
        if now != last.0 {
            last = (now, Instant::now());
        } else if last.1.elapsed() > HANG_LIMIT && !done.load(Ordering::Acquire) {
            return Err(format!("parser stalled on fuzz input {now}"));
        }
    }
    let (crashes, rejected) = worker.join().map_err(|_| "fuzz worker died".to_string())?;
    check(crashes.is_empty(), || {
        format!("{} crash(es), first {:?}", crashes.len(), crashes[0])
    })?;
    Ok(format!(
        "{ROUND_TRIPS} round trips, {FUZZ_INPUTS} fuzz inputs ({rejected} rejected), no crash or hang"
    ))
}

const URI_STRINGS: u64 = 3000;

fn uri_agreement() -> Verdict {
    let mut r = rng(42);
    let mut accepted = 0;
    for i in 0..URI_STRINGS {
        let s = if i % 2 == 0 {
            uri_positive(&mut r)
        } else {
            uri_negative(&mut r)
        };
        let ours = check_uri_syntax(&s).is_ok();
        if ours != reference_uri_accepts(&s) {
            return Err(format!("disagreement on {s:?}"));
        }
        accepted += ours as usize;
    }
    Ok(format!("{URI_STRINGS} strings ({accepted} accepted), 100% agreement"))
}

async fn registry_round_trip_async(journal: &Path) -> Verdict {
    let start = Instant::now();
    let ds = corpus_of(&CORPUS);
    let store =
        Arc::new(RegistryStore::open(journal, shapes(), ValidateOptions::default()).map_err(|e| e.to_string())?);
    let (addr, handle) = server::spawn(store.clone(), "127.0.0.1:0".parse().unwrap())
        .await
        .map_err(|e| e.to_string())?;
    let endpoint = format!("http://{addr}");

    let receipt = match client::deposit(&endpoint, serialize_trig(&ds), false)
        .await
        .map_err(|e| e.to_string())?
    {
        client::Outcome::Found { body, .. } => body,
        client::Outcome::Refused { status, detail } => return Err(format!("deposit {status}: {detail}")),
    };
    let receipt: Vec<serde_json::Value> = serde_json::from_str(&receipt).map_err(|e| e.to_string())?;
    let gupris: Vec<String> = receipt
        .iter()
        .map(|v| v["gupri"].as_str().unwrap().to_owned())
        .collect();
    check(gupris.len() == 4, || format!("{} receipts", gupris.len()))?;

    let mut etags = Vec::new();
    for g in &gupris {
        let (body, etag) = match client::resolve(&endpoint, g).await.map_err(|e| e.to_string())? {
            client::Outcome::Found { body, etag } => (body, etag),
            client::Outcome::Refused { status, detail } => return Err(format!("{g}: {status} {detail}")),
        };
        let payload = parse_trig(&body).map_err(|e| format!("{g}: {e}"))?;
        let stored = store.resolve(g).map_err(|e| e.to_string())?;
        check(isomorphic(&payload, &stored.dataset) == Ok(true), || {
            format!("{g}: payload not isomorphic")
        })?;
        check(etag.as_deref() == Some(stored.etag.as_str()), || {
            format!("{g}: etag header {etag:?}")
        })?;
        etags.push(stored.etag);
    }
    let cached = reqwest::Client::new()
        .get(client::fdo_url(&endpoint, &gupris[0], ""))
        .header("if-none-match", format!("\"{}\"", etags[0]))
        .send()
        .await
        .map_err(|e| e.to_string())?;
    check(cached.status() == 304, || {
        format!("conditional get gave {}", cached.status())
    })?;

    let unknown = client::resolve(&endpoint, "https://w3id.org/fdof/fois23-paper/ex1/nothing").await;
    check(
        matches!(unknown, Ok(client::Outcome::Refused { status: 404, .. })),
        || format!("unknown gave {unknown:?}"),
    )?;
    handle.abort();
    drop(store);

    let reopened =
        Arc::new(RegistryStore::open(journal, shapes(), ValidateOptions::default()).map_err(|e| e.to_string())?);
    let (addr, handle) = server::spawn(reopened, "127.0.0.1:0".parse().unwrap())
        .await
        .map_err(|e| e.to_string())?;
    let endpoint = format!("http://{addr}");
    for (g, before) in gupris.iter().zip(&etags) {
        match client::resolve(&endpoint, g).await.map_err(|e| e.to_string())? {
            client::Outcome::Found { etag, .. } => check(etag.as_deref() == Some(before.as_str()), || {
                format!("{g}: etag changed after replay")
            })?,
            client::Outcome::Refused { status, .. } => return Err(format!("{g}: {status} after replay")),
        }
    }
    handle.abort();
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "4 gupris resolved and isomorphic, etags stable across replay, 404 on unknown in {elapsed:.0?}"
    ))
}

fn registry_round_trip() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let rt = tokio::runtime::Runtime::new().unwrap();
    rt.block_on(registry_round_trip_async(&dir.path().join("registry.journal")))
}

fn determinism() -> Verdict {
    let mut args: Vec<String> = vec!["validate".into(), "--format".into(), "json".into()];
    args.extend(CORPUS.iter().map(|f| fixtures().join(f).to_string_lossy().into_owned()));
    args.extend([
        "--shapes".into(),
        fixtures().join("shapes.toml").to_string_lossy().into_owned(),
    ]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let a = fdof(&args).stdout;
    let b = fdof(&args).stdout;
    check(!a.is_empty() && a == b, || "outputs differ".into())?;

    let mutated = without(&corpus_of(&CORPUS), |q| q.predicate.as_str() == vocab::IS_METADATA_OF);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mutated.trig");
    std::fs::write(&path, serialize_trig(&mutated)).unwrap();
    let args = ["validate", "--format", "json", path.to_str().unwrap()];
    let (c, d) = (fdof(&args).stdout, fdof(&args).stdout);
    check(!c.is_empty() && c == d, || "outputs differ on a failing corpus".into())?;
    Ok(format!("{} and {} bytes, identical across runs", a.len(), c.len()))
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("golden object graph", golden_model),
        ("use case conformance and mutations", use_case_conformance),
        ("C3 oracle equivalence", c3_oracle),
        ("metadata record exemption", fmr_exemption),
        ("parser round trip and fuzz", parser_round_trip),
        ("gupri grammar agreement", uri_agreement),
        ("registry round trip", registry_round_trip),
        ("report determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let verdict = panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match verdict {
            Ok(detail) => println!("PASS {}: {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {}: {name}: {reason}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
