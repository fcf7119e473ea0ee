//! `graphwave`: generate graphs, measure geometry, run criteria, simulate and
//! sweep.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{GraphSpec, MetricSpec};

#[derive(Debug, Parser)]
#[command(name = "graphwave", version, about = "Semilinear wave systems on weighted graphs")]
struct Cli {
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized initial data.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GraphArgs {
    /// Graph file (`v <id> <mu>` / `e <id1> <id2> <omega>`).
    #[arg(long, conflicts_with_all = ["lattice", "tree", "path"])]
    graph: Option<PathBuf>,
    /// Lattice dimension N.
    #[arg(long, requires = "half_width", conflicts_with_all = ["tree", "path"])]
    lattice: Option<usize>,
    #[arg(long)]
    half_width: Option<usize>,
    /// Tree branching factor.
    #[arg(long, requires = "depth", conflicts_with = "path")]
    tree: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    /// Path with this many vertices.
    #[arg(long)]
    path: Option<usize>,
}

impl GraphArgs {
    pub fn spec(&self) -> Option<GraphSpec> {
        if let Some(path) = &self.graph {
            Some(GraphSpec::File { path: path.clone() })
        } else if let (Some(dim), Some(half_width)) = (self.lattice, self.half_width) {
            Some(GraphSpec::Lattice { dim, half_width })
        } else if let (Some(branching), Some(depth)) = (self.tree, self.depth) {
            Some(GraphSpec::Tree { branching, depth })
        } else {
            self.path.map(|n| GraphSpec::Path { n })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    GraphDistance,
    LatticeL1,
    LatticeL2,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum C2Kind {
    Empirical,
    InnerShell,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Theorem1,
    Theorem2,
    TheoremA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Radial,
    Separable,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated graph.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Check the weighted-graph axioms of a graph file.
    Validate { file: PathBuf },
    /// Measure the structural constants of a metric.
    Assumptions {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        metric: MetricKind,
        /// Table metric file (`d <id1> <id2> <value>`).
        #[arg(long, required_if_eq("metric", "table"))]
        table: Option<PathBuf>,
        /// Base vertex id.
        #[arg(long)]
        x0: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long = "r0", default_value_t = 2.0)]
        r0: f64,
        /// How the decay constant is chosen.
        #[arg(long, value_enum, default_value = "inner-shell")]
        c2: C2Kind,
        /// Constant for `--c2 fixed`.
        #[arg(long, required_if_eq("c2", "fixed"))]
        c2_value: Option<f64>,
        /// Multiplier for `--c2 inner-shell`.
        #[arg(long, default_value_t = 2.0)]
        slack: f64,
        /// Scan vertices next to the truncation boundary too.
        #[arg(long)]
        include_boundary: bool,
    },
    /// Volume-growth verdict; exit 1 when not satisfied.
    Criterion {
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
    },
    /// Run the simulation block and export the trajectory as CSV.
    Simulate {
        /// Only `t,sup_u,sup_v` per step.
        #[arg(long)]
        summary: bool,
        /// Keep every n-th step.
        #[arg(long, default_value_t = 1)]
        every: usize,
        /// Blow-up event JSON.
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Weak-form residual along a simulated trajectory.
    Weakcheck,
    /// Empirical cut-off constants.
    Lemma {
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Radii, comma separated.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
    },
    /// Phase table over a (p, q) grid as CSV.
    Sweep {
        #[arg(long, value_delimiter = ',')]
        p_values: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        q_values: Option<Vec<f64>>,
        /// Also simulate every cell.
        #[arg(long)]
        simulate: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io { path: PathBuf, err: std::io::Error },
    Core(graphwave::Error),
}

impl CliError {
    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), err }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Io { .. } | CliError::Core(_) => 1,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "usage".into(),
            CliError::Config(_) => "config".into(),
            CliError::Io { .. } => "io".into(),
            CliError::Core(e) => {
                let debug = format!("{e:?}");
                debug.split(['(', ' ', '{']).next().unwrap_or("Error").to_string()
            }
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Config(m) => f.write_str(m),
            CliError::Io { path, err } => write!(f, "{}: {err}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<graphwave::Error> for CliError {
    fn from(e: graphwave::Error) -> Self {
        CliError::Core(e)
    }
}

/// Flags shared by every command.
pub struct Globals {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl Globals {
    pub fn load_config(&self) -> Result<config::ExperimentConfig, CliError> {
        let path = self
            .config
            .as_deref()
            .ok_or_else(|| CliError::Usage("this command needs --config <path>".into()))?;
        let mut cfg = config::ExperimentConfig::load(path)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let globals = Globals {
        config: cli.config,
        out: cli.out,
        seed: cli.seed,
    };
    match cli.command {
        Command::Gen { graph } => commands::gen(&globals, &graph),
        Command::Validate { file } => commands::validate(&globals, &file),
        Command::Assumptions {
            graph,
            metric,
            table,
            x0,
            alpha,
            r0,
            c2,
            c2_value,
            slack,
            include_boundary,
        } => {
            let metric = match metric {
                MetricKind::GraphDistance => MetricSpec::GraphDistance,
                MetricKind::LatticeL1 => MetricSpec::LatticeL1,
                MetricKind::LatticeL2 => MetricSpec::LatticeL2,
                MetricKind::Table => MetricSpec::Table {
                    path: table.expect("required by clap"),
                },
            };
            let policy = match c2 {
                C2Kind::Empirical => graphwave::geometry::C2Policy::Empirical,
                C2Kind::InnerShell => graphwave::geometry::C2Policy::InnerShell { slack },
                C2Kind::Fixed => graphwave::geometry::C2Policy::Fixed {
                    value: c2_value.expect("required by clap"),
                },
            };
            let opts = graphwave::geometry::AssumptionOptions {
                include_boundary,
                c2: policy,
            };
            commands::assumptions(&globals, &graph, &metric, x0, alpha, r0, opts)
        }
        Command::Criterion { mode, p, q } => commands::criterion(&globals, mode, p, q),
        Command::Simulate {
            summary,
            every,
            events,
        } => commands::simulate(&globals, summary, every, events),
        Command::Weakcheck => commands::weakcheck(&globals),
        Command::Lemma { family, radii } => commands::lemma(&globals, family, radii),
        Command::Sweep {
            p_values,
            q_values,
            simulate,
        } => commands::sweep(&globals, p_values, q_values, simulate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let obj = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{obj}");
            ExitCode::from(e.exit_code())
        }
    }
}
