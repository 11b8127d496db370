//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for input or validation errors, 2 when the
//! numerical machinery fails (eigensolver, degenerate ECM solutions).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ecm::EcmParams;
use crate::error::{Error, Result};
use crate::gml::parse_gml;
use crate::graph::{parse_edge_list, Graph};
use crate::pipeline::{detect, Baselines, CatalogPolicy, SweepConfig};
use crate::report::{curve_csv, export_dot, ReportDocument};
use crate::spectral::embed;

#[derive(Debug, Parser)]
#[command(name = "evcomm", version, about = "Overlapping community detection with evidential c-means")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the community count and report credal partitions.
    Detect(DetectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    EdgeList,
    Gml,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    Cm,
    Fcm,
}

/// Focal set cardinality cap: `full` or a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxCard {
    Full,
    Cap(usize),
}

fn parse_max_card(s: &str) -> std::result::Result<MaxCard, String> {
    if s.eq_ignore_ascii_case("full") {
        return Ok(MaxCard::Full);
    }
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(MaxCard::Cap(k)),
        _ => Err(format!("expected `full` or a positive integer, got {s:?}")),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DetectArgs {
    /// Graph file (edge list or GML).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: Format,
    #[arg(long, default_value_t = 2)]
    pub cmin: usize,
    /// Largest community count to try.
    #[arg(long)]
    pub cmax: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 10.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Largest focal set size other than Ω (`full` for the whole powerset).
    #[arg(long, default_value = "full", value_parser = parse_max_card)]
    pub max_card: MaxCard,
    /// Normalize plausibilities by 1 - m(∅) in the evidential modularity.
    #[arg(long)]
    pub pl_normalized: bool,
    /// Comparison clusterings to run on the same embedding.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub baselines: Vec<Baseline>,
    /// Membership threshold for fuzzy multi-community sets.
    #[arg(long, default_value_t = 0.25)]
    pub fcm_lambda: f64,
    /// Report path (standard output when absent).
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Write a Graphviz rendering of the selected community count.
    #[arg(long)]
    #[serde(skip)]
    pub dot: Option<PathBuf>,
    /// Write the embedding of the selected community count as CSV.
    #[arg(long)]
    #[serde(skip)]
    pub embedding_out: Option<PathBuf>,
    /// Write the `c,Q_e,Q_h,Q_fuzzy` table as CSV.
    #[arg(long)]
    #[serde(skip)]
    pub emit_curve: Option<PathBuf>,
    /// Repeat for more log output.
    #[arg(long, short = 'v', action = clap::ArgAction::Count)]
    #[serde(skip)]
    pub verbose: u8,
}

impl DetectArgs {
    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            c_min: self.cmin,
            c_max: self.cmax,
            ecm: EcmParams {
                alpha: self.alpha,
                beta: self.beta,
                delta: self.delta,
                max_iter: self.max_iter,
                tol: self.tol,
                restarts: self.restarts,
                seed: self.seed,
            },
            catalog: match self.max_card {
                MaxCard::Full => CatalogPolicy::Full,
                MaxCard::Cap(k) => CatalogPolicy::MaxCard(k),
            },
            baselines: Baselines {
                cm: self.baselines.contains(&Baseline::Cm),
                fcm: self.baselines.contains(&Baseline::Fcm),
            },
            fcm_threshold: self.fcm_lambda,
            pl_normalized: self.pl_normalized,
            ..SweepConfig::default()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads a graph, choosing the parser from `format` or the file extension.
pub fn load_graph(path: &Path, format: Format) -> Result<Graph> {
    let text = read(path)?;
    let gml = match format {
        Format::Gml => true,
        Format::EdgeList => false,
        Format::Auto => path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("gml")),
    };
    let parsed = if gml { parse_gml(&text) } else { parse_edge_list(&text) };
    parsed.map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct ReportConfig<'a> {
    cli: &'a DetectArgs,
    sweep: &'a SweepConfig,
}

fn run_detect(args: &DetectArgs) -> Result<()> {
    let g = load_graph(&args.input, args.format)?;
    log::info!(
        "loaded {} nodes, {} edges from {}",
        g.n(),
        g.edge_count(),
        args.input.display()
    );
    let cfg = args.sweep_config();
    let report = detect(&g, &cfg)?;
    let doc = ReportDocument::new(&g, &report, &ReportConfig { cli: args, sweep: &cfg })?;
    let json = doc.to_json()?;
    match &args.output {
        Some(p) => write(p, &json)?,
        None => print!("{json}"),
    }
    if let Some(p) = &args.emit_curve {
        write(p, &curve_csv(&report))?;
    }
    if let Some(p) = &args.dot {
        write(p, &export_dot(&g, &report, report.best_c)?)?;
    }
    if let Some(p) = &args.embedding_out {
        let emb = embed(&g, report.best_c)?;
        write(p, &emb.to_csv(g.labels()))?;
    }
    Ok(())
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .try_init();
}

/// Exit code for a failed run.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numeric() {
        2
    } else {
        1
    }
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match cli.command {
        Command::Detect(args) => {
            init_logging(args.verbose);
            match run_detect(&args) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code(&e)
                }
            }
        }
    }
}
