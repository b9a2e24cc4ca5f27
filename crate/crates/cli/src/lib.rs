//! `dsd` command-line front end: runs one algorithm, the brute-force oracle,
//! a generator, or an algorithm × ε grid, and reports CSV or JSON rows.

use std::ffi::OsString;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use dsd_core::generate::{gen_digraph, gen_gnp, gen_power_law, gen_two_clique};
use dsd_core::{
    brute_force_dds, brute_force_uds, load_edge_list, run_dds, run_uds, AnyGraph, DdsAlgo, DdsConfig, DsResult,
    DsdError, Loaded, Reduction, Strategy, UdsAlgo, UdsConfig,
};

pub const CSV_HEADER: &str = "dataset,algo,eps,reduction,strategy,gamma,density,s_size,t_size,iterations,\
ratios_probed,reductions,elapsed_ms,verified";

/// Environment variable overriding the CP safety iteration cap.
pub const ITER_CAP_ENV: &str = "DSD_ITER_CAP";

#[derive(Debug, Parser)]
#[command(name = "dsd", version, about = "Densest subgraph discovery on edge-list graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Undirected densest subgraph.
    Uds(UdsArgs),
    /// Directed densest subgraph.
    Dds(DdsArgs),
    /// Exhaustive search on a small graph.
    Oracle(OracleArgs),
    /// Write a synthetic edge list.
    Gen(GenArgs),
    /// Run every algorithm × eps cell on one graph and append the rows.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Leave `elapsed_ms` empty so repeated runs produce identical output.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct UdsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// flow_exact, core_exact, fw_exact, mwu_exact, fista_exact, greedy,
    /// greedy_pp, greedy_m, core_app, fw_app, mwu_app, fista_app, flow_app
    #[arg(long)]
    pub algo: UdsAlgo,
    #[arg(long)]
    pub eps: Option<f64>,
    /// none, single or multi
    #[arg(long, default_value = "multi")]
    pub reduction: Reduction,
    /// sequential or simultaneous
    #[arg(long, default_value = "sequential")]
    pub strategy: Strategy,
    /// Fixed iteration count (CP methods), rounds (Greedy++) or phases (FlowApp).
    #[arg(long)]
    pub iters: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DdsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// dflow_exact, dc_exact, dfw_exact, dgreedy, xycore_app, wcore_app, dfw_app
    #[arg(long)]
    pub algo: DdsAlgo,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub adjust_intervals: bool,
    #[arg(long, default_value = "sequential")]
    pub strategy: Strategy,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub directed: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Two k-cliques joined by one edge, with part of the second removed.
    TwoClique {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        remove: f64,
    },
    /// Erdős–Rényi G(n, p).
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Random digraph with arc probability p.
    Digraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Chung-Lu graph with a power-law expected degree sequence.
    PowerLaw {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8.0)]
        avg_degree: f64,
        #[arg(long, default_value_t = 2.5)]
        exponent: f64,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub directed: bool,
    /// Comma-separated algorithm names (all algorithms of the mode by default).
    #[arg(long, value_delimiter = ',')]
    pub algo: Vec<String>,
    /// Comma-separated eps values for the approximation algorithms.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.1, 0.01])]
    pub eps: Vec<f64>,
    #[arg(long, default_value = "multi")]
    pub reduction: Reduction,
    #[arg(long, default_value = "sequential")]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub adjust_intervals: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// One CSV row; field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub dataset: String,
    pub algo: String,
    pub eps: Option<f64>,
    pub reduction: Option<String>,
    pub strategy: Option<String>,
    pub gamma: Option<f64>,
    pub density: f64,
    pub s_size: usize,
    pub t_size: Option<usize>,
    pub iterations: u64,
    pub ratios_probed: usize,
    pub reductions: usize,
    pub elapsed_ms: Option<f64>,
    pub verified: bool,
}

/// JSON record: the row plus the vertex sets (input labels) and work trace.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    #[serde(flatten)]
    pub row: Row,
    pub s: Vec<u64>,
    pub t: Option<Vec<u64>>,
    pub edge_trace: Vec<usize>,
    pub peak_rss_kb: Option<u64>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters; exit code 2.
    Usage(String),
    /// Input, output or solver failure; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<DsdError> for CliError {
    fn from(e: DsdError) -> Self {
        match e {
            DsdError::InvalidParameter(_) | DsdError::UnknownAlgorithm(_) | DsdError::Incompatible(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

/// Parses `argv` and runs it, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let iter_cap = std::env::var(ITER_CAP_ENV).ok();
    match run(cli, iter_cap.as_deref(), out) {
        Ok(()) => 0,
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) => format!("error: {m}\n\nFor more information, try '--help'."),
                CliError::Failure(m) => format!("error: {m}"),
            };
            let _ = writeln!(err, "{msg}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command. `iter_cap` is the raw value of `DSD_ITER_CAP`.
pub fn run(cli: Cli, iter_cap: Option<&str>, out: &mut dyn Write) -> Result<(), CliError> {
    let iter_cap = match iter_cap {
        None => None,
        Some(raw) => Some(
            raw.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("{ITER_CAP_ENV} must be a positive integer, got `{raw}`")))?,
        ),
    };
    match cli.command {
        Command::Uds(a) => {
            let loaded = load(&a.input, false)?;
            let cfg = UdsConfig {
                algo: a.algo,
                eps: a.eps,
                reduction: a.reduction,
                strategy: a.strategy,
                iters: a.iters,
                iter_cap,
            };
            let rec = uds_record(&dataset_name(&a.input), &loaded, &cfg)?;
            emit(&[rec], &a.output, false, out)
        }
        Command::Dds(a) => {
            let loaded = load(&a.input, true)?;
            let cfg = DdsConfig {
                algo: a.algo,
                eps: a.eps,
                gamma: a.gamma,
                adjust_intervals: a.adjust_intervals,
                strategy: a.strategy,
                iter_cap,
            };
            let rec = dds_record(&dataset_name(&a.input), &loaded, &cfg)?;
            emit(&[rec], &a.output, false, out)
        }
        Command::Oracle(a) => {
            let loaded = load(&a.input, a.directed)?;
            let res = match &loaded.graph {
                AnyGraph::Undirected(g) => brute_force_uds(g)?,
                AnyGraph::Directed(d) => brute_force_dds(d)?,
            };
            let row = base_row(&dataset_name(&a.input), "brute_force", &res);
            emit(&[record(row, &res, &loaded.labels)], &a.output, false, out)
        }
        Command::Gen(a) => {
            let text = match a.kind {
                GenKind::TwoClique { k, remove } => gen_two_clique(k, remove, a.seed)?.to_edge_list(),
                GenKind::Gnp { n, p } => gen_gnp(n, p, a.seed)?.to_edge_list(),
                GenKind::Digraph { n, p } => gen_digraph(n, p, a.seed)?.to_edge_list(),
                GenKind::PowerLaw {
                    n,
                    avg_degree,
                    exponent,
                } => gen_power_law(n, avg_degree, exponent, a.seed)?.to_edge_list(),
            };
            match a.out {
                Some(path) => fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Bench(a) => bench(a, iter_cap, out),
    }
}

fn bench(a: BenchArgs, iter_cap: Option<u64>, out: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(&a.input, a.directed)?;
    let dataset = dataset_name(&a.input);
    if a.eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(CliError::Usage("eps values must be positive".into()));
    }
    let records: Vec<Result<Record, CliError>> = if a.directed {
        let algos: Vec<DdsAlgo> = if a.algo.is_empty() {
            DdsAlgo::ALL.to_vec()
        } else {
            a.algo.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
        };
        let mut cells = Vec::new();
        for algo in algos {
            let eps_values: Vec<Option<f64>> = if algo.takes_eps() {
                a.eps.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for eps in eps_values {
                cells.push(DdsConfig {
                    algo,
                    eps,
                    gamma: a.gamma,
                    adjust_intervals: a.adjust_intervals,
                    strategy: a.strategy,
                    iter_cap,
                });
            }
        }
        cells.par_iter().map(|cfg| dds_record(&dataset, &loaded, cfg)).collect()
    } else {
        let algos: Vec<UdsAlgo> = if a.algo.is_empty() {
            UdsAlgo::ALL.to_vec()
        } else {
            a.algo.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
        };
        let mut cells = Vec::new();
        for algo in algos {
            let eps_values: Vec<Option<f64>> = if algo.takes_eps() {
                a.eps.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for eps in eps_values {
                cells.push(UdsConfig {
                    algo,
                    eps,
                    reduction: a.reduction,
                    strategy: a.strategy,
                    iters: None,
                    iter_cap,
                });
            }
        }
        cells.par_iter().map(|cfg| uds_record(&dataset, &loaded, cfg)).collect()
    };
    let records = records.into_iter().collect::<Result<Vec<_>, _>>()?;
    emit(&records, &a.output, true, out)
}

fn uses_strategy(algo: UdsAlgo) -> bool {
    matches!(
        algo,
        UdsAlgo::FwExact | UdsAlgo::MwuExact | UdsAlgo::FwApp | UdsAlgo::MwuApp
    )
}

fn uds_record(dataset: &str, loaded: &Loaded<AnyGraph>, cfg: &UdsConfig) -> Result<Record, CliError> {
    let AnyGraph::Undirected(g) = &loaded.graph else {
        return Err(CliError::Usage("uds needs an undirected graph".into()));
    };
    let res = run_uds(g, cfg)?;
    let mut row = base_row(dataset, cfg.algo.as_str(), &res);
    row.eps = cfg.effective_eps();
    row.reduction = Some(cfg.reduction.as_str().to_string());
    row.strategy = uses_strategy(cfg.algo).then(|| cfg.strategy.as_str().to_string());
    Ok(record(row, &res, &loaded.labels))
}

fn dds_record(dataset: &str, loaded: &Loaded<AnyGraph>, cfg: &DdsConfig) -> Result<Record, CliError> {
    let AnyGraph::Directed(d) = &loaded.graph else {
        return Err(CliError::Usage("dds needs a directed graph".into()));
    };
    let res = run_dds(d, cfg)?;
    let mut row = base_row(dataset, cfg.algo.as_str(), &res);
    row.eps = cfg.effective_eps();
    row.gamma = Some(cfg.gamma);
    row.strategy = matches!(cfg.algo, DdsAlgo::DfwExact | DdsAlgo::DfwApp).then(|| cfg.strategy.as_str().to_string());
    Ok(record(row, &res, &loaded.labels))
}

fn base_row(dataset: &str, algo: &str, res: &DsResult) -> Row {
    Row {
        dataset: dataset.to_string(),
        algo: algo.to_string(),
        eps: None,
        reduction: None,
        strategy: None,
        gamma: None,
        density: res.density,
        s_size: res.s_size(),
        t_size: res.t.as_ref().map(Vec::len),
        iterations: res.stats.iterations,
        ratios_probed: res.stats.ratios_probed,
        reductions: res.stats.reductions,
        elapsed_ms: Some((res.stats.elapsed.as_secs_f64() * 1e6).round() / 1e3),
        verified: res.verified,
    }
}

fn record(row: Row, res: &DsResult, labels: &[u64]) -> Record {
    let relabel = |set: &[usize]| set.iter().map(|&v| labels[v]).collect::<Vec<_>>();
    Record {
        row,
        s: relabel(&res.s),
        t: res.t.as_deref().map(relabel),
        edge_trace: res.stats.edge_trace.clone(),
        peak_rss_kb: peak_rss_kb(),
    }
}

fn load(path: &Path, directed: bool) -> Result<Loaded<AnyGraph>, CliError> {
    let file = File::open(path).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
    load_edge_list(BufReader::new(file), directed).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Peak resident set size of this process in KiB (Linux only).
pub fn peak_rss_kb() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn emit(records: &[Record], opts: &OutputArgs, append: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let mut records = records.to_vec();
    if opts.no_timing {
        for r in &mut records {
            r.row.elapsed_ms = None;
        }
    }
    match &opts.out {
        Some(path) => {
            let fresh = !append || fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
            let file = if append {
                OpenOptions::new().create(true).append(true).open(path)?
            } else {
                File::create(path)?
            };
            write_records(&records, opts.format, fresh, io::BufWriter::new(file))
        }
        None => write_records(&records, opts.format, true, out),
    }
}

fn write_records<W: Write>(records: &[Record], format: Format, header: bool, mut w: W) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut csv = csv::WriterBuilder::new().has_headers(header).from_writer(w);
            for r in records {
                csv.serialize(&r.row)?;
            }
            csv.flush()?;
        }
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut w, r).map_err(|e| CliError::Failure(e.to_string()))?;
                writeln!(w)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
