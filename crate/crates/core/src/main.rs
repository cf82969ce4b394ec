use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use nexcover::baselines::CostProfile;
use nexcover::bench::{
    format_summary, parse_methods, run_dynamic_bench, run_showcase, run_static_bench_with, summarize, summarize_dynamic,
    write_dynamic_csv, write_summary_csv, ExperimentConfig, Mode, StaticCsvWriter,
};
use nexcover::centrality::CostParams;
use nexcover::generators::{generate, Family, GeneratorSpec};
use nexcover::graph::Graph;
use nexcover::lp::SolverConfig;
use nexcover::select::{select_with_cost, SelectionParams};
use nexcover::Error;

#[derive(Parser)]
#[command(name = "nexcover", version, about = "Covering node selection by centrality-weighted LP relaxation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random graph as an edge list.
    Generate {
        #[arg(long, default_value = "erdos-renyi")]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge probability for Erdős–Rényi (default 2 ln(n)/n).
        #[arg(long)]
        p: Option<f64>,
        /// Edges per new node for Barabási–Albert.
        #[arg(long)]
        m: Option<usize>,
        /// Output file (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Select a covering set for an edge-list graph and print it as CSV.
    Solve {
        /// Edge-list file (stdin if absent).
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CostArg::Centrality)]
        cost: CostArg,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Static benchmark over sizes and trials.
    BenchStatic(BenchArgs),
    /// Incremental growth benchmark with warm and cold L1 runs.
    BenchDynamic(BenchArgs),
    /// One small graph per family with SVG plots.
    Showcase(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CostArg {
    Centrality,
    Degree,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated method names.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    /// Size list, e.g. `10,100..1000:100`.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
}

impl BenchArgs {
    fn config(&self, mode: Mode) -> nexcover::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        cfg.mode = mode;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(m) = &self.methods {
            cfg.methods = parse_methods(m)?;
        }
        if let Some(d) = self.delta {
            cfg.delta = d;
        }
        if let Some(s) = &self.sizes {
            cfg.set("sizes", s)?;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_) | Error::InvalidParameter(_) | Error::InvalidSpec(_) | Error::Parse { .. }) => 2,
        Some(Error::IterationLimit { .. }) => 3,
        _ => 1,
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn create(dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    Ok(BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate { family, n, seed, p, m, out } => {
            let family: Family = family.parse()?;
            let mut spec = GeneratorSpec::new(family, n, seed);
            if let Some(p) = p {
                spec.p = p;
            }
            if let Some(m) = m {
                spec.m = m;
            }
            let g = generate(&spec)?;
            let mut w = output(out.as_deref())?;
            g.write_edge_list(&mut w)?;
            w.flush()?;
        }
        Command::Solve { graph, cost, delta, out } => {
            let g = match &graph {
                Some(p) => Graph::read_edge_list(BufReader::new(File::open(p).with_context(|| format!("opening {}", p.display()))?))?,
                None => Graph::read_edge_list(io::stdin().lock())?,
            };
            let profile = match cost {
                CostArg::Centrality => CostProfile::Centrality,
                CostArg::Degree => CostProfile::Degree,
            };
            let params = SelectionParams { delta, ..SelectionParams::default() };
            params.validate()?;
            let costs = profile.costs(&g, &CostParams::default())?;
            let (set, sol) = select_with_cost(&g, &costs, &params, &SolverConfig::default())?;
            let mut w = csv::Writer::from_writer(output(out.as_deref())?);
            w.write_record(["node", "cost", "x", "selected"])?;
            for v in 0..g.node_count() {
                w.write_record([v.to_string(), costs.values[v].to_string(), sol.x[v].to_string(), set.contains(v).to_string()])?;
            }
            w.flush()?;
            eprintln!("selected {} of {} nodes, cost {:.6e}, lp objective {:.6e}", set.len(), g.node_count(), set.total_cost, sol.objective);
        }
        Command::BenchStatic(args) => {
            let cfg = args.config(Mode::Static)?;
            let mut csv = StaticCsvWriter::new(create(&cfg.out_dir, "static.csv")?)?;
            let mut records = Vec::new();
            let result = run_static_bench_with(&cfg, |r| {
                records.push(r.clone());
                csv.write(r)
            });
            let cells = summarize(&records);
            write_summary_csv(create(&cfg.out_dir, "static_summary.csv")?, &cells)?;
            print!("{}", format_summary(&cells));
            result?;
        }
        Command::BenchDynamic(args) => {
            let cfg = args.config(Mode::Dynamic)?;
            let records = run_dynamic_bench(&cfg)?;
            write_dynamic_csv(create(&cfg.out_dir, "dynamic.csv")?, &records)?;
            let cells = summarize_dynamic(&records);
            write_summary_csv(create(&cfg.out_dir, "dynamic_summary.csv")?, &cells)?;
            print!("{}", format_summary(&cells));
        }
        Command::Showcase(args) => {
            let cfg = args.config(Mode::Showcase)?;
            let (entries, paths) = run_showcase(&cfg)?;
            for e in &entries {
                println!("{:<16} seed {:>20}  selected {:?}", e.family.to_string(), e.seed, e.set.selected);
            }
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
