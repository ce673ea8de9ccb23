use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abcdo_cli::analyze::{self, AnalyzeOptions, PartitionSource};
use abcdo_cli::config::Settings;
use abcdo_cli::sweep::{self, SweepPlan};
use abcdo_cli::{io, CliError, Result};
use abcdo_core::clustering::EcgConfig;
use abcdo_core::kcore::k_core;
use abcdo_core::scores::{DegreeBins, ScoreKind};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "abcdo",
    version,
    about = "ABCD+o benchmark graphs and outlier scores"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph with communities and outliers.
    Generate(GenerateArgs),
    /// Score nodes of a graph and evaluate outlier detection.
    Analyze(AnalyzeArgs),
    /// Generate and score graphs over a grid of mixing parameters.
    Sweep(SweepArgs),
    /// Reduce a graph to its k-core.
    Kcore(KcoreArgs),
}

#[derive(Args)]
struct GenFlags {
    /// `key=value` file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Number of outliers.
    #[arg(long)]
    outliers: Option<usize>,
    /// Mixing parameter in [0, 1].
    #[arg(long)]
    xi: Option<f64>,
    /// Degree power-law exponent.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, conflicts_with = "avg_degree")]
    min_degree: Option<u32>,
    /// Target average degree; the minimum degree is solved from it.
    #[arg(long)]
    avg_degree: Option<f64>,
    #[arg(long)]
    max_degree: Option<u32>,
    /// Community-size power-law exponent.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    min_community: Option<u32>,
    #[arg(long)]
    max_community: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Explicit degrees, one per line.
    #[arg(long)]
    degree_file: Option<PathBuf>,
    /// Explicit community sizes, one per line.
    #[arg(long)]
    size_file: Option<PathBuf>,
}

impl GenFlags {
    fn settings(&self) -> Result<Settings> {
        let mut s = match &self.config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        macro_rules! put {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field {
                    flags.set(stringify!($field), v)?;
                })*
            };
        }
        put!(
            n,
            outliers,
            xi,
            gamma,
            min_degree,
            avg_degree,
            max_degree,
            beta,
            min_community,
            max_community,
            seed
        );
        if let Some(p) = &self.degree_file {
            flags.set("degree_file", p.display())?;
        }
        if let Some(p) = &self.size_file {
            flags.set("size_file", p.display())?;
        }
        s.overlay(&flags);
        Ok(s)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    gen: GenFlags,
    /// Output directory for edges.tsv, communities.tsv, outliers.txt and
    /// params.txt.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EcgFlags {
    /// Number of partitions in the ECG ensemble.
    #[arg(long, default_value_t = 16)]
    ensemble_size: usize,
    /// Floor on ECG edge scores.
    #[arg(long, default_value_t = 0.05)]
    min_weight: f64,
    /// Largest degree in the low bin.
    #[arg(long, default_value_t = 7)]
    low_max: usize,
    /// Largest degree in the medium bin.
    #[arg(long, default_value_t = 20)]
    medium_max: usize,
    /// Score against the input communities instead of the ECG partition.
    #[arg(long)]
    ground_truth: bool,
}

impl EcgFlags {
    fn options(&self, seed: u64) -> AnalyzeOptions {
        AnalyzeOptions {
            ecg: EcgConfig {
                ensemble_size: self.ensemble_size,
                min_weight: self.min_weight,
            },
            seed,
            partition: if self.ground_truth {
                PartitionSource::GroundTruth
            } else {
                PartitionSource::Detected
            },
            bins: DegreeBins {
                low_max: self.low_max,
                medium_max: self.medium_max,
            },
            centrality: false,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Edge list with 1-based node ids.
    #[arg(long)]
    edges: PathBuf,
    /// Community file `node<TAB>label`, outliers labeled 0.
    #[arg(long, conflicts_with = "outliers")]
    communities: Option<PathBuf>,
    /// Outlier ids, one per line, when no community file is available.
    #[arg(long)]
    outliers: Option<PathBuf>,
    #[command(flatten)]
    ecg: EcgFlags,
    /// Add closeness, eigencentrality, PageRank and betweenness columns.
    #[arg(long)]
    centrality: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write a ranked list of likely outliers.
    #[arg(long)]
    detect: bool,
    /// Score used for --detect.
    #[arg(long, default_value = "participation", value_parser = parse_score)]
    rank_by: ScoreKind,
    /// Output directory for scores.csv, auc.csv and ranked.tsv.
    #[arg(long)]
    out: PathBuf,
}

fn parse_score(s: &str) -> std::result::Result<ScoreKind, String> {
    ScoreKind::from_name(s).ok_or_else(|| {
        let names: Vec<_> = ScoreKind::ALL.iter().map(|k| k.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    gen: GenFlags,
    #[command(flatten)]
    ecg: EcgFlags,
    /// Comma-separated mixing parameters; defaults to 0.1,0.2,...,1.0.
    #[arg(long, value_delimiter = ',')]
    xis: Option<Vec<f64>>,
    /// Independent graphs per mixing parameter.
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Long-format CSV output.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct KcoreArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(short, long)]
    k: usize,
    /// Reduced edge list, renumbered 1..=m.
    #[arg(long)]
    out: PathBuf,
    /// Write `new<TAB>original` id pairs.
    #[arg(long)]
    map: Option<PathBuf>,
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let config = args.gen.settings()?.resolve()?;
    if config.xi == 0.0 && config.outliers > 0 {
        eprintln!("warning: with xi = 0 the background graph carries only outlier edges, so outlier degrees are capped by the outlier count");
    }
    let params = config.params()?;
    let graph = abcdo_core::generate(&params)?;
    create_dir(&args.out)?;
    let labels = graph.assignment.labels();
    let outliers = (0..labels.len())
        .filter(|&v| graph.assignment.is_outlier(v))
        .map(|v| v as u64 + 1);
    io::write_atomic(
        &args.out.join("edges.tsv"),
        io::format_edge_list(&graph.edges).as_bytes(),
    )?;
    io::write_atomic(
        &args.out.join("communities.tsv"),
        io::format_labels(labels).as_bytes(),
    )?;
    io::write_atomic(
        &args.out.join("outliers.txt"),
        io::format_integers(outliers).as_bytes(),
    )?;
    io::write_atomic(&args.out.join("params.txt"), config.echo().as_bytes())?;
    eprintln!(
        "{} nodes, {} edges, {} communities, {} outliers, internal edge fraction {:.4}",
        graph.node_count(),
        graph.edges.len(),
        graph.assignment.num_communities(),
        graph.assignment.outlier_count(),
        graph.internal_fraction()
    );
    Ok(())
}

fn analyze_cmd(args: &AnalyzeArgs) -> Result<()> {
    let truth = match (&args.communities, &args.outliers) {
        (Some(p), _) => Some(io::parse_labels(p, &io::read_text(p)?)?),
        (None, Some(p)) => {
            if args.ecg.ground_truth {
                return Err(CliError::invalid("--ground-truth needs --communities"));
            }
            let ids = io::parse_integers(p, &io::read_text(p)?)?;
            Some(outlier_labels(p, &ids)?)
        }
        (None, None) => None,
    };
    let min_nodes = truth.as_ref().map_or(0, Vec::len);
    let graph = io::load_graph(&args.edges, min_nodes)?;
    let truth = truth.map(|mut t| {
        t.resize(graph.node_count(), 1);
        t
    });
    let options = AnalyzeOptions {
        centrality: args.centrality,
        ..args.ecg.options(args.seed)
    };
    let (analysis, summary) = analyze::analyze(&graph, truth.as_deref(), &options)?;
    create_dir(&args.out)?;
    io::write_atomic(
        &args.out.join("scores.csv"),
        &analyze::scores_csv(&analysis),
    )?;
    let table = analysis.report.auc_table();
    io::write_atomic(&args.out.join("auc.csv"), &analyze::auc_csv(&table))?;
    if args.detect {
        let rows = analyze::ranked(&analysis.report, args.rank_by);
        let text = analyze::format_ranked(&rows, args.rank_by);
        io::write_atomic(&args.out.join("ranked.tsv"), text.as_bytes())?;
    }
    println!(
        "{} nodes, {} edges, {} parts, modularity {}, edge contribution {}",
        graph.node_count(),
        graph.edge_count(),
        summary.parts,
        summary
            .modularity
            .map_or("n/a".into(), |q| format!("{q:.4}")),
        summary
            .edge_contribution
            .map_or("n/a".into(), |q| format!("{q:.4}")),
    );
    for cell in table.iter().filter(|c| c.bin.is_none()) {
        match cell.auc {
            Some(a) => println!("AUC {:<15} {a:.4}", cell.score.name()),
            None => println!(
                "AUC {:<15} undefined (degenerate classes)",
                cell.score.name()
            ),
        }
    }
    for note in analyze::degenerate_notes(&table) {
        eprintln!("{note}");
    }
    Ok(())
}

/// Labels with 0 for listed outliers and 1 elsewhere.
fn outlier_labels(path: &Path, ids: &[u32]) -> Result<Vec<u32>> {
    let mut labels = Vec::new();
    for &id in ids {
        if id == 0 {
            return Err(CliError::invalid(format!(
                "{}: node ids start at 1",
                path.display()
            )));
        }
        let v = id as usize - 1;
        if v >= labels.len() {
            labels.resize(v + 1, 1);
        }
        labels[v] = 0;
    }
    Ok(labels)
}

fn sweep_cmd(args: &SweepArgs) -> Result<()> {
    let config = args.gen.settings()?.resolve()?;
    let params = config.params()?;
    let xis = args.xis.clone().unwrap_or_else(sweep::default_xis);
    if xis.iter().any(|x| !(0.0..=1.0).contains(x)) || args.replicates == 0 {
        return Err(CliError::invalid(
            "xis must lie in [0, 1] and replicates must be positive",
        ));
    }
    let plan = SweepPlan {
        params,
        xis,
        replicates: args.replicates,
        analysis: args.ecg.options(config.seed),
    };
    let rows = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::invalid(e.to_string()))?
            .install(|| sweep::run_sweep(&plan))?,
        None => sweep::run_sweep(&plan)?,
    };
    io::write_atomic(&args.out, &analyze::sweep_csv(&rows))
}

fn kcore_cmd(args: &KcoreArgs) -> Result<()> {
    if args.k == 0 {
        return Err(CliError::invalid("k must be at least 1"));
    }
    let graph = io::load_graph(&args.edges, 0)?;
    let (core, ids) = k_core(&graph, args.k);
    io::write_atomic(&args.out, io::format_edge_list(core.edges()).as_bytes())?;
    if let Some(map) = &args.map {
        let text: String = ids
            .iter()
            .enumerate()
            .map(|(new, old)| format!("{}\t{}\n", new + 1, old + 1))
            .collect();
        io::write_atomic(map, text.as_bytes())?;
    }
    eprintln!(
        "{}-core: {} nodes, {} edges",
        args.k,
        core.node_count(),
        core.edge_count()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Analyze(a) => analyze_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Kcore(a) => kcore_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
