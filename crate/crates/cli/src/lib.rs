//! `fdof` command line: validation, inspection, minting, and the registry
//! service and its client.

use std::fs::{self, OpenOptions};
use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fdof_core::identifiers::SystemClock;
use fdof_core::validator::RuleId;
use fdof_core::{
    extract_model, load_shapes, merge_documents, parse_trig, render_report, serialize_trig, validate, Dataset,
    FdofModel, FdofObject, Identification, IdentificationSpace, Iri, Minter, Node, RegistryStore, ReportFormat,
    ShapeRegistry, ValidateOptions,
};
use serde::Serialize;

pub mod client;
pub mod server;

/// Exit status: success, or the input conforms.
pub const EXIT_OK: u8 = 0;
/// Violations found, or the requested object does not exist.
pub const EXIT_FAIL: u8 = 1;
/// Unreadable input, bad arguments, or an unreachable service.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "fdof", version, about = "FAIR Digital Object toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check TriG documents against the object rules.
    Validate(ValidateArgs),
    /// Show what the documents say about the objects they describe.
    Inspect(InspectArgs),
    /// Mint a gupri for an object.
    Mint(MintArgs),
    /// Run the registry service.
    Serve(ServeArgs),
    /// Fetch an object from a registry service.
    Resolve(ResolveArgs),
    /// Deposit documents into a registry service or journal.
    Deposit(DepositArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Type shape configuration (TOML).
    #[arg(long)]
    pub shapes: Option<PathBuf>,
    /// Raise every warning to a violation.
    #[arg(long)]
    pub strict: bool,
    /// Rules to relax; only `c5` is accepted.
    #[arg(long, value_name = "RULE")]
    pub relax: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Node IRI, prefixed name or gupri. All objects when absent.
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MintArgs {
    /// Gupri template with one `{}` slot for the token.
    #[arg(long)]
    pub template: String,
    /// IRI of the agent doing the identification.
    #[arg(long)]
    pub agent: String,
    /// IRI of the object being identified.
    #[arg(long)]
    pub object: String,
    /// JSON-lines ledger of earlier identifications; the new one is appended.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Append-only deposit journal; replayed at startup.
    #[arg(long)]
    pub journal: Option<PathBuf>,
    #[arg(long, env = "FDOF_BIND", default_value = "127.0.0.1:8080")]
    pub bind: SocketAddr,
    #[command(flatten)]
    pub shape: ShapeArgs,
}

#[derive(Debug, Args)]
pub struct ResolveArgs {
    pub gupri: String,
    #[arg(long, env = "FDOF_ENDPOINT", default_value = "http://127.0.0.1:8080")]
    pub endpoint: String,
    /// Print the classification instead of the record.
    #[arg(long = "type")]
    pub type_only: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["endpoint", "journal"])))]
pub struct DepositArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub endpoint: Option<String>,
    /// Deposit straight into a journal file instead of a running service.
    #[arg(long)]
    pub journal: Option<PathBuf>,
    /// Skip validation.
    #[arg(long)]
    pub force: bool,
    #[command(flatten)]
    pub shape: ShapeArgs,
}

/// Failure that ends a command with [`EXIT_ERROR`].
#[derive(Debug)]
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<u8, Fatal>;

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Validate(a) => cmd_validate(a, out, err),
        Command::Inspect(a) => cmd_inspect(a, out, err),
        Command::Mint(a) => cmd_mint(a, out),
        Command::Serve(a) => cmd_serve(a),
        Command::Resolve(a) => cmd_resolve(a, out, err),
        Command::Deposit(a) => cmd_deposit(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

pub fn read_inputs(paths: &[PathBuf]) -> Result<Dataset, String> {
    let mut docs = Vec::with_capacity(paths.len());
    for path in paths {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let ds = parse_trig(&text).map_err(|e| format!("{}:{e}", path.display()))?;
        docs.push(ds);
    }
    Ok(merge_documents(&docs))
}

fn load_shape_args(args: &ShapeArgs) -> Result<(ShapeRegistry, ValidateOptions), Fatal> {
    let shapes = match &args.shapes {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
            load_shapes(&text).map_err(|e| Fatal(format!("{}:{e}", path.display())))?
        }
        None => ShapeRegistry::default(),
    };
    let mut options = if args.strict {
        ValidateOptions::strict()
    } else {
        ValidateOptions::default()
    };
    for rule in &args.relax {
        match rule.parse::<RuleId>() {
            Ok(RuleId::C5) => options.relax_c5 = true,
            _ => return Err(Fatal(format!("--relax accepts only c5, got {rule:?}"))),
        }
    }
    Ok((shapes, options))
}

fn inputs_or_report(paths: &[PathBuf], err: &mut dyn Write) -> Result<Option<Dataset>, Fatal> {
    match read_inputs(paths) {
        Ok(ds) => Ok(Some(ds)),
        Err(msg) => {
            writeln!(err, "{msg}")?;
            Ok(None)
        }
    }
}

fn cmd_validate(args: ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (shapes, options) = load_shape_args(&args.shape)?;
    let Some(ds) = inputs_or_report(&args.inputs, err)? else {
        return Ok(EXIT_ERROR);
    };
    let report = validate(&extract_model(&ds), &shapes, &options);
    let format = match args.format {
        Format::Text => ReportFormat::Text,
        Format::Json => ReportFormat::Json,
    };
    out.write_all(render_report(&report, format).as_bytes())?;
    Ok(if report.conforms() { EXIT_OK } else { EXIT_FAIL })
}

/// Shortest `prefix:local` form of `iri` under the dataset's prefixes.
pub fn compact(ds: &Dataset, iri: &Iri) -> String {
    ds.prefixes()
        .iter()
        .filter_map(|(label, ns)| {
            let local = iri.as_str().strip_prefix(ns.as_str())?;
            let plain = local
                .chars()
                .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
                && !local.ends_with('.')
                && !local.starts_with(['-', '.']);
            plain.then(|| format!("{label}:{local}"))
        })
        .min_by_key(String::len)
        .unwrap_or_else(|| format!("<{iri}>"))
}

fn compact_node(ds: &Dataset, node: &Node) -> String {
    match node {
        Node::Iri(iri) => compact(ds, iri),
        Node::Blank(b) => b.to_string(),
    }
}

#[derive(Debug, Serialize)]
struct ObjectView {
    node: String,
    kinds: Vec<String>,
    gupris: Vec<String>,
    info_types: Vec<String>,
    encoding_formats: Vec<String>,
    materialized_by: Vec<String>,
    described_by: Vec<String>,
    /// Objects described, when the node is a metadata record.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    describes: Vec<String>,
    attributions: Vec<(String, String)>,
}

fn view(model: &FdofModel, obj: &FdofObject) -> ObjectView {
    let ds = &model.source;
    let nodes = |ns: &[Node]| ns.iter().map(|n| n.key()).collect::<Vec<_>>();
    let iris = |is: &[Iri]| is.iter().map(|i| i.as_str().to_owned()).collect::<Vec<_>>();
    ObjectView {
        node: obj.node.key(),
        kinds: obj.kinds.iter().map(ToString::to_string).collect(),
        gupris: obj.gupris.clone(),
        info_types: iris(&obj.info_types),
        encoding_formats: iris(&obj.encoding_formats),
        materialized_by: nodes(&obj.materialized_by),
        described_by: nodes(&obj.described_by),
        describes: model
            .records
            .get(&obj.node)
            .map(|r| nodes(&r.targets))
            .unwrap_or_default(),
        attributions: obj
            .attributions
            .iter()
            .map(|(p, o)| (compact(ds, p), o.to_string()))
            .collect(),
    }
}

fn write_view(out: &mut dyn Write, model: &FdofModel, obj: &FdofObject) -> io::Result<()> {
    let ds = &model.source;
    let kinds: Vec<String> = obj.kinds.iter().map(ToString::to_string).collect();
    writeln!(out, "{}", compact_node(ds, &obj.node))?;
    writeln!(
        out,
        "  kinds: {}",
        if kinds.is_empty() {
            "FAIRDigitalObject".into()
        } else {
            kinds.join(", ")
        }
    )?;
    let mut line = |label: &str, items: Vec<String>| -> io::Result<()> {
        if !items.is_empty() {
            writeln!(out, "  {label}: {}", items.join(", "))?;
        }
        Ok(())
    };
    line("gupri", obj.gupris.clone())?;
    line(
        "information types",
        obj.info_types.iter().map(|i| compact(ds, i)).collect(),
    )?;
    line(
        "encoding formats",
        obj.encoding_formats.iter().map(|i| compact(ds, i)).collect(),
    )?;
    line(
        "materialized by",
        obj.materialized_by.iter().map(|n| compact_node(ds, n)).collect(),
    )?;
    line(
        "described by",
        obj.described_by.iter().map(|n| compact_node(ds, n)).collect(),
    )?;
    if let Some(rec) = model.records.get(&obj.node) {
        line("describes", rec.targets.iter().map(|n| compact_node(ds, n)).collect())?;
    }
    for (p, o) in &obj.attributions {
        let o = match o.as_iri() {
            Some(i) => compact(ds, i),
            None => o.to_string(),
        };
        writeln!(out, "  {} {o}", compact(ds, p))?;
    }
    Ok(())
}

/// Finds the object named by a node IRI, a prefixed name or a gupri.
fn find_object<'m>(model: &'m FdofModel, id: &str) -> Option<&'m FdofObject> {
    let by_node = |node: Node| model.objects.get(&node);
    if let Some(obj) = Node::iri(id.trim_matches(['<', '>'])).ok().and_then(by_node) {
        return Some(obj);
    }
    if let Some(obj) = model.source.expand(id).map(Node::Iri).and_then(by_node) {
        return Some(obj);
    }
    model
        .lookup_by_gupri(id)
        .into_iter()
        .next()
        .and_then(|n| model.objects.get(&n))
}

fn cmd_inspect(args: InspectArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let Some(ds) = inputs_or_report(&args.inputs, err)? else {
        return Ok(EXIT_ERROR);
    };
    let model = extract_model(&ds);
    let selected: Vec<&FdofObject> = match &args.id {
        Some(id) => match find_object(&model, id) {
            Some(obj) => vec![obj],
            None => {
                writeln!(err, "no object matches {id:?}")?;
                return Ok(EXIT_ERROR);
            }
        },
        None => model.objects.values().filter(|o| o.is_fdo()).collect(),
    };
    match args.format {
        Format::Json => {
            let views: Vec<ObjectView> = selected.iter().map(|o| view(&model, o)).collect();
            let text = if args.id.is_some() {
                serde_json::to_string_pretty(&views[0])?
            } else {
                serde_json::to_string_pretty(&views)?
            };
            writeln!(out, "{text}")?;
        }
        Format::Text => {
            for (i, obj) in selected.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write_view(out, &model, obj)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_mint(args: MintArgs, out: &mut dyn Write) -> Outcome {
    let agent = Iri::new(args.agent)?;
    let object = Iri::new(args.object)?;
    let minter = Minter::new(IdentificationSpace::uri());
    if let Some(path) = &args.ledger {
        if path.exists() {
            let file = fs::File::open(path)?;
            for (n, line) in io::BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: Identification =
                    serde_json::from_str(&line).map_err(|e| Fatal(format!("{}:{}: {e}", path.display(), n + 1)))?;
                minter.record(rec)?;
            }
        }
    }
    let (gupri, record) = minter.mint(&args.template, &agent, &object, &SystemClock)?;
    if let Some(path) = &args.ledger {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        writeln!(file, "{}", serde_json::to_string(&record)?)?;
    }
    writeln!(out, "{}", gupri.value())?;
    writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
    Ok(EXIT_OK)
}

fn open_store(journal: Option<&Path>, shape: &ShapeArgs) -> Result<RegistryStore, Fatal> {
    let (shapes, options) = load_shape_args(shape)?;
    Ok(match journal {
        Some(path) => RegistryStore::open(path, shapes, options)?,
        None => RegistryStore::in_memory(shapes, options),
    })
}

fn runtime() -> Result<tokio::runtime::Runtime, Fatal> {
    Ok(tokio::runtime::Builder::new_multi_thread().enable_all().build()?)
}

fn cmd_serve(args: ServeArgs) -> Outcome {
    let store = Arc::new(open_store(args.journal.as_deref(), &args.shape)?);
    eprintln!("{} gupri(s) loaded", store.len());
    runtime()?.block_on(server::run(store, args.bind))?;
    Ok(EXIT_OK)
}

fn report_refusal(err: &mut dyn Write, status: u16, detail: &str) -> Outcome {
    writeln!(err, "{status}: {detail}")?;
    Ok(if status == 404 || status == 409 || status == 422 {
        EXIT_FAIL
    } else {
        EXIT_ERROR
    })
}

fn cmd_resolve(args: ResolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let rt = runtime()?;
    let outcome = rt.block_on(async {
        if args.type_only {
            client::describe_type(&args.endpoint, &args.gupri).await
        } else {
            client::resolve(&args.endpoint, &args.gupri).await
        }
    })?;
    match outcome {
        client::Outcome::Found { body, .. } => {
            out.write_all(body.as_bytes())?;
            if !body.ends_with('\n') {
                writeln!(out)?;
            }
            Ok(EXIT_OK)
        }
        client::Outcome::Refused { status, detail } => report_refusal(err, status, &detail),
    }
}

fn cmd_deposit(args: DepositArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let Some(ds) = inputs_or_report(&args.inputs, err)? else {
        return Ok(EXIT_ERROR);
    };
    if let Some(endpoint) = &args.endpoint {
        let outcome = runtime()?.block_on(client::deposit(endpoint, serialize_trig(&ds), args.force))?;
        return match outcome {
            client::Outcome::Found { body, .. } => {
                writeln!(out, "{}", body.trim_end())?;
                Ok(EXIT_OK)
            }
            client::Outcome::Refused { status, detail } => report_refusal(err, status, &detail),
        };
    }
    let journal = args.journal.as_deref().expect("clap requires a target");
    let store = open_store(Some(journal), &args.shape)?;
    match store.deposit(&ds, args.force) {
        Ok(receipts) => {
            writeln!(out, "{}", serde_json::to_string_pretty(&receipts)?)?;
            Ok(EXIT_OK)
        }
        Err(fdof_core::RegistryError::Invalid(report)) => {
            err.write_all(render_report(&report, ReportFormat::Text).as_bytes())?;
            Ok(EXIT_FAIL)
        }
        Err(e @ fdof_core::RegistryError::Conflict { .. }) => {
            writeln!(err, "{e}")?;
            Ok(EXIT_FAIL)
        }
        Err(e) => Err(e.into()),
    }
}
