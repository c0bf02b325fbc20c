use std::collections::HashSet;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use clap::{Parser, Subcommand};
use graphdb_core::canonical::canonical_form;
use graphdb_core::codecs::{decode_stream, write_record, CodecError, EncodedGraph, Format};
use graphdb_core::invariants::{compute, InvariantId};
use graphdb_core::layout::{export_svg, export_tikz, spring_embed, ExportOptions, LayoutParams};
use graphdb_core::search::WireQuery;
use graphdb_core::search::{evaluate, export_results};
use graphdb_core::scheduler::{QueueConfig, WorkerPool};
use graphdb_core::store::{Store, StoreComputer, StoreError, StoreOptions, UploadMeta, UploadOutcome};
use graphdb_core::{Budget, Graph};
use graphdb_service::Config;

#[derive(Parser)]
#[command(name = "graphdb", version, about = "Graph database tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the listen address from the config file.
        #[arg(long)]
        listen: Option<String>,
    },
    /// Compute invariants of graph6 lines, one TSV row per value.
    Compute {
        /// Invariant slug or display name; repeatable. Defaults to all.
        #[arg(long = "invariant", short = 'i')]
        invariants: Vec<String>,
        /// Per-value time limit in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        #[arg(long, short = 'j')]
        jobs: Option<usize>,
        #[arg(default_value = "-")]
        input: String,
    },
    /// Print the canonical graph6 form of every input graph.
    Canon {
        #[arg(long)]
        unique: bool,
        #[arg(long, default_value = "g6")]
        from: Format,
        #[arg(default_value = "-")]
        input: String,
    },
    /// Transcode a stream of graphs.
    Convert {
        #[arg(long)]
        from: Format,
        #[arg(long)]
        to: Format,
        #[arg(default_value = "-")]
        input: String,
    },
    /// Spring-embed every input graph and export the drawing.
    Layout {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "svg", value_parser = ["svg", "tikz"])]
        format: String,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        labels: bool,
        #[arg(long, default_value = "g6")]
        from: Format,
        /// Write one file per graph instead of concatenating to stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(default_value = "-")]
        input: String,
    },
    /// Run a JSON query against a store directory.
    Search {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        query: String,
        /// Print every match in this format instead of the result page.
        #[arg(long)]
        export: Option<Format>,
    },
    /// Upload graphs into a store, printing `index<TAB>id<TAB>new|duplicate`.
    Import {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value = "g6")]
        from: Format,
        #[arg(long, default_value = "cli")]
        author: String,
        /// Compute all pending invariants before exiting.
        #[arg(long)]
        compute: bool,
        /// Queue level time limits in seconds, used with --compute.
        #[arg(long, value_delimiter = ',', default_value = "60,600,6000")]
        levels: Vec<f64>,
        #[arg(long, short = 'j')]
        jobs: Option<usize>,
        #[arg(default_value = "-")]
        input: String,
    },
    /// Import a graph6 list as a graph class.
    ImportClass {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        slug: String,
        #[arg(long)]
        description: Option<String>,
        #[arg(default_value = "-")]
        input: String,
    },
    /// Write the store in the interchange format.
    Dump {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replace the store contents with a dump.
    Restore {
        #[arg(long)]
        store: PathBuf,
        #[arg(default_value = "-")]
        input: String,
    },
    /// `graphdb <invariant>` reads one graph6 line and prints `name<TAB>value`.
    #[command(external_subcommand)]
    Invariant(Vec<String>),
}

enum Fail {
    Usage(String),
    Store(String),
    Io(io::Error),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Io(_) => 1,
            Fail::Usage(_) => 2,
            Fail::Store(_) => 3,
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::Io(e)
    }
}

impl From<CodecError> for Fail {
    fn from(e: CodecError) -> Self {
        Fail::Usage(e.to_string())
    }
}

impl From<StoreError> for Fail {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Parse(_)
            | StoreError::ClassLine { .. }
            | StoreError::InvalidSlug(_)
            | StoreError::Dump { .. }
            | StoreError::SchemaVersionMismatch { .. } => Fail::Usage(e.to_string()),
            _ => Fail::Store(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Fail::Usage(m) | Fail::Store(m) => eprintln!("graphdb: {m}"),
                Fail::Io(e) => eprintln!("graphdb: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Serve { config, listen } => serve(config.as_deref(), listen),
        Command::Compute { invariants, timeout, jobs, input } => {
            let ids = invariant_list(&invariants)?;
            if !(timeout.is_finite() && timeout > 0.0) {
                return Err(Fail::Usage(format!("timeout must be a positive number of seconds, got {timeout}")));
            }
            let graphs = decode_stream(Format::Graph6, &read_input(&input)?)?;
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1);
            let rows = compute_all(&graphs, &ids, Duration::from_secs_f64(timeout), jobs);
            let mut out = stdout();
            for (i, row) in rows.iter().enumerate() {
                let (g, inv) = (i / ids.len(), ids[i % ids.len()]);
                writeln!(out, "{g}\t{}\t{}", inv.slug(), row.as_deref().unwrap_or("TIMEOUT"))?;
            }
            Ok(out.flush()?)
        }
        Command::Canon { unique, from, input } => {
            let mut seen = HashSet::new();
            let mut out = stdout();
            for g in decode_stream(from, &read_input(&input)?)? {
                let key = canonical_form(&g).graph6;
                if !unique || seen.insert(key.clone()) {
                    writeln!(out, "{key}")?;
                }
            }
            Ok(out.flush()?)
        }
        Command::Convert { from, to, input } => {
            let mut buf = Vec::new();
            for g in decode_stream(from, &read_input(&input)?)? {
                write_record(to, &g, &mut buf)?;
            }
            let mut out = stdout();
            out.write_all(&buf)?;
            Ok(out.flush()?)
        }
        Command::Layout { seed, format, iterations, labels, from, out_dir, input } => {
            let graphs = decode_stream(from, &read_input(&input)?)?;
            let mut params = LayoutParams::with_seed(seed);
            if let Some(it) = iterations {
                params.iterations = it;
            }
            let opts = ExportOptions { labels, graph_id: None, seed: Some(seed) };
            let mut out = stdout();
            for (i, g) in graphs.iter().enumerate() {
                let pos = spring_embed(g, &params).map_err(|e| Fail::Usage(format!("graph {i}: {e}")))?;
                let text = if format == "svg" { export_svg(g, &pos, &opts) } else { export_tikz(g, &pos, &opts) }
                    .map_err(|e| Fail::Usage(format!("graph {i}: {e}")))?;
                match &out_dir {
                    Some(dir) => std::fs::write(dir.join(format!("{i}.{format}")), text)?,
                    None => out.write_all(text.as_bytes())?,
                }
            }
            Ok(out.flush()?)
        }
        Command::Search { store, query, export } => {
            let store = open_existing(&store)?;
            let text = read_input(&query)?;
            let wire: WireQuery =
                serde_json::from_slice(&text).map_err(|e| Fail::Usage(format!("query: {e}")))?;
            let q = wire.to_query().map_err(|e| Fail::Usage(format!("query: {e}")))?;
            let mut out = stdout();
            match export {
                Some(f) => {
                    let mut buf = Vec::new();
                    store
                        .read(|s| export_results(s, &q, f, &mut buf))
                        .map_err(|e| Fail::Usage(format!("query: {e}")))?;
                    out.write_all(&buf)?;
                }
                None => {
                    let page = store.read(|s| evaluate(s, &q)).map_err(|e| Fail::Usage(format!("query: {e}")))?;
                    serde_json::to_writer_pretty(&mut out, &page).map_err(io::Error::from)?;
                    writeln!(out)?;
                }
            }
            Ok(out.flush()?)
        }
        Command::Import { store, from, author, compute, levels, jobs, input } => {
            let graphs = decode_stream(from, &read_input(&input)?)?;
            let queue = QueueConfig::from_secs(&levels).map_err(|e| Fail::Usage(format!("levels: {e}")))?;
            let store = Arc::new(Store::open(&store, StoreOptions { queue, durable: false })?);
            let mut out = stdout();
            for (i, g) in graphs.iter().enumerate() {
                let outcome = store.upload(&EncodedGraph::encode(Format::Graph6, g)?, UploadMeta::default(), Some(&author))?;
                let tag = if matches!(outcome, UploadOutcome::Created(_)) { "new" } else { "duplicate" };
                writeln!(out, "{i}\t{}\t{tag}", outcome.id())?;
            }
            out.flush()?;
            if compute {
                store.recover();
                let workers = jobs.unwrap_or_else(WorkerPool::default_workers);
                let pool = WorkerPool::start(workers, store.clone(), Arc::new(StoreComputer::new(store.clone())));
                while !store.is_idle() {
                    std::thread::sleep(Duration::from_millis(50));
                }
                pool.shutdown();
            }
            Ok(store.checkpoint()?)
        }
        Command::ImportClass { store, slug, description, input } => {
            let text = String::from_utf8(read_input(&input)?).map_err(|_| Fail::Usage("input is not UTF-8".into()))?;
            let store = open(&store)?;
            let n = store.import_class(&slug, description.as_deref(), &text)?;
            eprintln!("imported {n} graphs into {slug}");
            Ok(())
        }
        Command::Dump { store, out } => {
            let store = open_existing(&store)?;
            match out {
                Some(path) => store.dump(path)?,
                None => {
                    let mut o = stdout();
                    o.write_all(store.dump_string().as_bytes())?;
                    o.flush()?;
                }
            }
            Ok(())
        }
        Command::Restore { store, input } => {
            let text = String::from_utf8(read_input(&input)?).map_err(|_| Fail::Usage("input is not UTF-8".into()))?;
            let store = open(&store)?;
            store.replace_with_dump(&text)?;
            eprintln!("restored {} graphs", store.len());
            Ok(())
        }
        Command::Invariant(args) => single_invariant(&args),
    }
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

fn read_input(path: &str) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    if path == "-" {
        io::stdin().lock().read_to_end(&mut buf)?;
    } else {
        buf = std::fs::read(path).map_err(|e| Fail::Usage(format!("{path}: {e}")))?;
    }
    Ok(buf)
}

fn open(dir: &Path) -> Result<Store> {
    Ok(Store::open(dir, StoreOptions::default())?)
}

fn open_existing(dir: &Path) -> Result<Store> {
    if !dir.is_dir() {
        return Err(Fail::Store(format!("{}: no such store directory", dir.display())));
    }
    open(dir)
}

fn invariant_list(names: &[String]) -> Result<Vec<InvariantId>> {
    if names.is_empty() {
        return Ok(InvariantId::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| InvariantId::lookup(n).ok_or_else(|| Fail::Usage(format!("unknown invariant {n:?}"))))
        .collect()
}

/// Values in graph-major order; `None` marks a timeout.
fn compute_all(graphs: &[Graph], ids: &[InvariantId], limit: Duration, jobs: usize) -> Vec<Option<String>> {
    let total = graphs.len() * ids.len();
    let next = AtomicUsize::new(0);
    let results = Mutex::new(vec![None; total]);
    std::thread::scope(|s| {
        for _ in 0..jobs.min(total.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= total {
                    break;
                }
                let value = compute(ids[i % ids.len()], &graphs[i / ids.len()], &Budget::with_timeout(limit));
                results.lock().unwrap()[i] = value.ok().map(|v| v.to_string());
            });
        }
    });
    results.into_inner().unwrap()
}

fn single_invariant(args: &[String]) -> Result<()> {
    let id = InvariantId::lookup(&args[0]).ok_or_else(|| Fail::Usage(format!("unknown command {:?}", args[0])))?;
    if args.len() > 1 {
        return Err(Fail::Usage(format!("{} takes no arguments; it reads one graph6 line", id.slug())));
    }
    let mut line = String::new();
    io::stdin().read_line(&mut line)?;
    let graphs = decode_stream(Format::Graph6, line.as_bytes())?;
    let [g] = graphs.as_slice() else {
        return Err(Fail::Usage("expected exactly one graph6 line on standard input".into()));
    };
    let value = compute(id, g, &Budget::unlimited()).expect("unlimited budget");
    let mut out = stdout();
    writeln!(out, "{}\t{value}", id.slug())?;
    Ok(out.flush()?)
}

fn serve(config: Option<&Path>, listen: Option<String>) -> Result<()> {
    let mut cfg = match config {
        Some(p) => Config::load(p).map_err(|e| Fail::Usage(e.to_string()))?,
        None => Config::default(),
    };
    if let Some(l) = listen {
        cfg.listen = l;
    }
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(graphdb_service::serve(cfg)).map_err(|e| match e {
        graphdb_service::ServeError::Store(s) => Fail::from(s),
        graphdb_service::ServeError::Config(c) => Fail::Usage(c.to_string()),
        graphdb_service::ServeError::Io(e) => Fail::Io(e),
    })
}
