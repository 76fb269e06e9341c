use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use semistrong_core::exact::{exact_index, Budget, ExactError, Mode};
use semistrong_core::families::{self, FamilyParams};
use semistrong_core::io::{encode_edge_list, encode_graph6, parse_colors, parse_edge_list, parse_graph6, ColoringDocument};
use semistrong_core::solver::{solve_with, RepairConfig, RepairError, SolveMode};
use semistrong_core::verifier::{verify_relaxed, verify_semistrong, verify_strong};
use semistrong_core::Graph;

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "semistrong", version, about = "Semistrong and (0,1)-relaxed strong edge colorings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Graph6,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorMode {
    Semistrong,
    Relaxed01,
}

impl From<ColorMode> for SolveMode {
    fn from(m: ColorMode) -> Self {
        match m {
            ColorMode::Semistrong => SolveMode::Semistrong,
            ColorMode::Relaxed01 => SolveMode::Relaxed01,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMode {
    Semistrong,
    Strong,
    Relaxed,
    Relaxed01,
}

impl CheckMode {
    fn resolve(self, s: Option<usize>, t: Option<usize>) -> Mode {
        match self {
            CheckMode::Semistrong => Mode::Semistrong,
            CheckMode::Strong => Mode::Strong,
            CheckMode::Relaxed01 => Mode::Relaxed { s: 0, t: 1 },
            CheckMode::Relaxed => Mode::Relaxed { s: s.unwrap_or(0), t: t.unwrap_or(1) },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Color a graph with at most Δ²−1 colors (with the documented exceptions).
    Color {
        #[arg(long, value_enum, default_value = "semistrong")]
        mode: ColorMode,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: Format,
        /// Input file; stdin when omitted or "-".
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Treat a violated bad-edge invariant as an internal error.
        #[arg(long)]
        strict: bool,
    },
    /// Check a coloring against a graph.
    Verify {
        #[arg(long, value_enum)]
        mode: CheckMode,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: Format,
        /// JSON document or whitespace-separated colors in edge order.
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Exact index by exhaustive search.
    Exact {
        #[arg(long, value_enum)]
        mode: CheckMode,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        max_colors: usize,
        #[arg(long, conflicts_with = "budget_nodes")]
        budget_secs: Option<u64>,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: Format,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a named graph.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Color every graph in a directory and write a CSV report.
    Batch {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_enum, default_value = "semistrong")]
        mode: ColorMode,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }

    fn internal(message: impl ToString) -> Self {
        Failure { code: EXIT_INTERNAL, message: message.to_string() }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).map_err(Failure::usage)?;
            Ok(text)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        _ => io::stdout().write_all(text.as_bytes()).map_err(Failure::usage),
    }
}

fn parse_graph(text: &str, format: Format) -> Result<Graph, Failure> {
    match format {
        Format::Edgelist => parse_edge_list(text).map_err(Failure::usage),
        Format::Graph6 => {
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
            parse_graph6(line.trim()).map_err(Failure::usage)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn repair_failure(e: RepairError) -> Failure {
    Failure::internal(e)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Color { mode, format, input, output, strict } => {
            let g = parse_graph(&read_input(input.as_deref())?, format)?;
            let config = RepairConfig { strict, ..RepairConfig::default() };
            let result = solve_with(&g, mode.into(), &config).map_err(repair_failure)?;
            if !result.valid() {
                return Err(Failure::internal("solver produced a coloring that fails its verifier"));
            }
            write_output(output.as_deref(), &to_json(&ColoringDocument::from_solve(&g, &result)))?;
            Ok(0)
        }
        Command::Verify { mode, s, t, graph, format, coloring } => {
            let g = parse_graph(&read_input(Some(&graph))?, format)?;
            let c = parse_colors(&read_input(Some(&coloring))?).map_err(Failure::usage)?;
            c.check_against(&g).map_err(Failure::usage)?;
            let mode = mode.resolve(s, t);
            let verdict = match mode {
                Mode::Semistrong => verify_semistrong(&g, &c),
                Mode::Strong => verify_strong(&g, &c),
                Mode::Relaxed { s, t } => verify_relaxed(&g, &c, s, t),
            };
            let doc = ColoringDocument::from_verdict(&g, &c, &mode.name(), verdict.valid, verdict.witness);
            write_output(None, &to_json(&doc))?;
            Ok(if verdict.valid { 0 } else { EXIT_INVALID })
        }
        Command::Exact { mode, s, t, max_colors, budget_secs, budget_nodes, format, input, output } => {
            let g = parse_graph(&read_input(input.as_deref())?, format)?;
            let mode = mode.resolve(s, t);
            let budget = Budget { wall: budget_secs.map(Duration::from_secs), nodes: budget_nodes };
            let text = match exact_index(&g, mode, max_colors, budget) {
                Ok(r) => to_json(&ColoringDocument::from_exact(&g, &mode.name(), &r)),
                Err(ExactError::EmptyBudget) => return Err(Failure::usage("budget must be positive")),
                Err(ExactError::BadCertificate) => return Err(Failure::internal("certificate failed verification")),
                Err(ExactError::InfeasibleAtMax { max_colors }) => to_json(&serde_json::json!({
                    "status": "infeasible_at_max",
                    "mode": mode.name(),
                    "max_colors": max_colors,
                    "n": g.vertex_count(),
                    "edges": g.edges(),
                })),
                Err(ExactError::Timeout { max_colors }) => to_json(&serde_json::json!({
                    "status": "timeout",
                    "mode": mode.name(),
                    "max_colors": max_colors,
                    "n": g.vertex_count(),
                    "edges": g.edges(),
                })),
            };
            write_output(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Gen { family, n, m, d, seed, format, output } => {
            let g = families::make(&family, FamilyParams { n, m, d, seed }).map_err(Failure::usage)?;
            let text = match format {
                Format::Edgelist => encode_edge_list(&g),
                Format::Graph6 => encode_graph6(&g).map_err(Failure::usage)? + "\n",
            };
            write_output(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Batch { dir, mode, report, jobs } => batch(&dir, mode.into(), &report, jobs),
    }
}

#[derive(Serialize)]
struct Row {
    graph_id: String,
    n: Option<usize>,
    m: Option<usize>,
    max_degree: Option<usize>,
    strategy: String,
    colors_used: Option<usize>,
    valid: bool,
    kappa1_trajectory_len: usize,
    fallbacks: usize,
    wall_ms: f64,
    error: String,
}

enum Item {
    Parsed(Graph),
    Broken(String),
}

fn collect_items(dir: &Path) -> Result<Vec<(String, Item)>, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let mut items = Vec::new();
    for path in paths {
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                items.push((name, Item::Broken(e.to_string())));
                continue;
            }
        };
        let is_g6 = matches!(path.extension().and_then(|e| e.to_str()), Some("g6" | "graph6"));
        if is_g6 {
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let item = match parse_graph6(line.trim()) {
                    Ok(g) => Item::Parsed(g),
                    Err(e) => Item::Broken(e.to_string()),
                };
                items.push((format!("{name}:{}", i + 1), item));
            }
        } else {
            let item = match parse_edge_list(&text) {
                Ok(g) => Item::Parsed(g),
                Err(e) => Item::Broken(e.to_string()),
            };
            items.push((name, item));
        }
    }
    Ok(items)
}

fn process(id: &str, item: &Item, mode: SolveMode) -> Row {
    let mut row = Row {
        graph_id: id.to_string(),
        n: None,
        m: None,
        max_degree: None,
        strategy: String::new(),
        colors_used: None,
        valid: false,
        kappa1_trajectory_len: 0,
        fallbacks: 0,
        wall_ms: 0.0,
        error: String::new(),
    };
    let g = match item {
        Item::Parsed(g) => g,
        Item::Broken(e) => {
            row.error = e.clone();
            return row;
        }
    };
    row.n = Some(g.vertex_count());
    row.m = Some(g.edge_count());
    row.max_degree = Some(g.max_degree());
    let start = Instant::now();
    let outcome = solve_with(g, mode, &RepairConfig::default());
    row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(r) => {
            let mut names: Vec<&str> = Vec::new();
            for t in &r.trace {
                if !names.contains(&t.strategy.name()) {
                    names.push(t.strategy.name());
                }
            }
            row.strategy = names.join("+");
            row.colors_used = Some(r.colors_used);
            row.valid = r.valid();
            row.kappa1_trajectory_len = r.trace.iter().filter_map(|t| t.repair.as_ref()).map(|s| s.trajectory.len()).sum();
            row.fallbacks = r.total_fallbacks();
        }
        Err(e) => row.error = e.to_string(),
    }
    row
}

fn batch(dir: &Path, mode: SolveMode, report: &Path, jobs: usize) -> Result<u8, Failure> {
    let items = collect_items(dir)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(Failure::internal)?;
    let mut writer = csv::Writer::from_path(report).map_err(|e| Failure::usage(format!("{}: {e}", report.display())))?;
    let chunk = 4 * jobs.max(1);
    let mut invalid = false;
    for group in items.chunks(chunk) {
        let rows: Vec<Row> = pool.install(|| group.par_iter().map(|(id, item)| process(id, item, mode)).collect());
        for row in rows {
            invalid |= !row.valid;
            writer.serialize(&row).map_err(Failure::internal)?;
        }
        writer.flush().map_err(Failure::internal)?;
    }
    Ok(if invalid { EXIT_INVALID } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
