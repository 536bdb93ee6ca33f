//! Command-line driver.
//!
//! Exit codes: 0 success, 1 unreadable input or bad arguments, 2 network
//! validation failure, 3 solver did not converge, 4 path extraction stalled.

use clap::{Args, Parser, Subcommand};
use hjnet_core::study::fmt_float;
use hjnet_core::{
    error::{PathError, SolveError, StudyError},
    extract_path, oracle, run_study, solve, validate_network, Grid, IterationVariable, Network,
    NetworkPoint, Reference, SolveResult, SolverConfig,
};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hjnet",
    about = "Eikonal Hamilton-Jacobi solver on embedded metric networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Dirichlet problem on a network file and write the node
    /// values as CSV (arc_id, t, x1..xN, u).
    Solve(SolveArgs),
    /// Run a refinement study (dx = h halving schedule) against an exact or
    /// fine-grid reference and write the error table.
    Study(StudyArgs),
    /// Solve with recorded controls and export one shortest-path CSV per
    /// requested start point.
    Paths(PathsArgs),
}

#[derive(Args)]
struct SolveCommon {
    /// Network description file (JSON).
    network: PathBuf,
    /// Semi-Lagrangian step h.
    #[arg(long)]
    h: f64,
    /// Grid step; defaults to h.
    #[arg(long)]
    dx: Option<f64>,
    /// Sup-norm stopping tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_sweeps: usize,
    /// Iterate in the transformed variable w = 1 - exp(-u).
    #[arg(long)]
    kruzkov: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: SolveCommon,
    /// Record the argmin control of every node.
    #[arg(long)]
    record_controls: bool,
    /// Output CSV path.
    #[arg(long, default_value = "solution.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct StudyArgs {
    /// Network description file (JSON).
    network: PathBuf,
    /// Reference solution: `exact:test1`, `exact:distance`, or `fine:<dx>`.
    #[arg(long)]
    reference: String,
    /// Comma-separated halving schedule of dx = h values.
    #[arg(long, value_delimiter = ',')]
    steps: Vec<f64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_sweeps: usize,
    #[arg(long, default_value = "study.csv")]
    out_csv: PathBuf,
    #[arg(long, default_value = "study.txt")]
    out_table: PathBuf,
}

#[derive(Args)]
struct PathsArgs {
    #[command(flatten)]
    common: SolveCommon,
    /// Start points file: one `arc_id,t` or `vertex:<id>` per line.
    #[arg(long)]
    starts: PathBuf,
    /// Directory for the per-start CSV files.
    #[arg(long, default_value = "paths")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Study(args) => cmd_study(args),
        Command::Paths(args) => cmd_paths(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_network(path: &Path) -> Result<Network, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))?;
    let net = Network::from_json(&text).map_err(|e| Failure::new(1, e.to_string()))?;
    let report = validate_network(&net);
    if !report.all_passed() {
        let mut msg = String::from("network validation failed:");
        for c in report.failures() {
            let _ = write!(msg, "\n  {}: {}", c.name, c.details);
        }
        return Err(Failure::new(2, msg));
    }
    Ok(net)
}

fn run_solve(net: &Network, common: &SolveCommon, record: bool) -> Result<(Grid, SolveResult), Failure> {
    let dx = common.dx.unwrap_or(common.h);
    let grid = Grid::build(net, dx).map_err(|e| Failure::new(1, e.to_string()))?;
    let mut cfg = SolverConfig::new(common.h);
    cfg.tolerance = common.tol;
    cfg.max_sweeps = common.max_sweeps;
    cfg.record_controls = record;
    if common.kruzkov {
        cfg.iteration_variable = IterationVariable::Kruzkov;
    }
    for w in cfg.warnings(&grid) {
        eprintln!("warning: {w}");
    }
    let res = solve(net, &grid, &cfg).map_err(|e| match e {
        SolveError::NotConverged { .. } => Failure::new(3, e.to_string()),
        other => Failure::new(1, other.to_string()),
    })?;
    Ok((grid, res))
}

fn solution_csv(net: &Network, grid: &Grid, res: &SolveResult) -> String {
    let mut out = String::from("arc_id,t");
    for d in 1..=net.dim {
        let _ = write!(out, ",x{d}");
    }
    out.push_str(",u\n");
    for gid in 0..grid.node_count() {
        let (arc, m) = grid.node_arc[gid];
        let _ = write!(out, "{arc},{}", fmt_float(grid.arcs[arc].ts[m]));
        for c in &grid.node_positions[gid] {
            let _ = write!(out, ",{}", fmt_float(*c));
        }
        let _ = writeln!(out, ",{}", fmt_float(res.values[gid]));
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::new(1, format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display())))
}

fn cmd_solve(args: SolveArgs) -> Result<(), Failure> {
    let net = load_network(&args.common.network)?;
    let (grid, res) = run_solve(&net, &args.common, args.record_controls)?;
    write_file(&args.out, &solution_csv(&net, &grid, &res))?;
    eprintln!(
        "converged in {} sweeps, residual {:.3e}",
        res.sweeps_used, res.final_residual
    );
    Ok(())
}

fn cmd_study(args: StudyArgs) -> Result<(), Failure> {
    let net = load_network(&args.network)?;
    let reference = parse_reference(&args.reference, &net)?;
    let report = run_study(&net, reference, &args.steps, args.tol, args.max_sweeps).map_err(
        |e| match e {
            StudyError::Solve(SolveError::NotConverged { .. }) => Failure::new(3, e.to_string()),
            other => Failure::new(1, other.to_string()),
        },
    )?;
    write_file(&args.out_csv, &report.to_csv())?;
    write_file(&args.out_table, &report.to_table())?;
    print!("{}", report.to_table());
    Ok(())
}

fn parse_reference<'a>(spec: &str, net: &'a Network) -> Result<Reference<'a>, Failure> {
    match spec.split_once(':') {
        Some(("exact", "test1")) => {
            let net = net.clone();
            Ok(Reference::Exact {
                name: "test1".into(),
                eval: Box::new(move |arc, t| {
                    oracle::test1_exact(&net, NetworkPoint::OnArc { arc, t })
                        .expect("point on network")
                }),
            })
        }
        Some(("exact", "distance")) => {
            let exact = oracle::exact_distance_reference(net).ok_or_else(|| {
                Failure::new(1, "exact:distance requires a constant cost".to_string())
            })?;
            Ok(Reference::Exact {
                name: "distance".into(),
                eval: Box::new(move |arc, t| exact.eval(arc, t)),
            })
        }
        Some(("fine", dx)) => {
            let dx: f64 = dx
                .parse()
                .map_err(|_| Failure::new(1, format!("bad fine-grid step `{dx}`")))?;
            Ok(Reference::FineGrid { dx })
        }
        _ => Err(Failure::new(
            1,
            format!("unknown reference `{spec}` (use exact:test1, exact:distance, fine:<dx>)"),
        )),
    }
}

fn parse_starts(text: &str) -> Result<Vec<NetworkPoint>, Failure> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Failure::new(1, format!("bad start point on line {}", lineno + 1));
        if let Some(v) = line.strip_prefix("vertex:") {
            points.push(NetworkPoint::Vertex(v.trim().parse().map_err(|_| bad())?));
        } else {
            let (arc, t) = line.split_once(',').ok_or_else(bad)?;
            points.push(NetworkPoint::OnArc {
                arc: arc.trim().parse().map_err(|_| bad())?,
                t: t.trim().parse().map_err(|_| bad())?,
            });
        }
    }
    Ok(points)
}

fn cmd_paths(args: PathsArgs) -> Result<(), Failure> {
    let net = load_network(&args.common.network)?;
    let starts_text = std::fs::read_to_string(&args.starts)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", args.starts.display())))?;
    let starts = parse_starts(&starts_text)?;
    let (grid, res) = run_solve(&net, &args.common, true)?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::new(1, format!("cannot create {}: {e}", args.out_dir.display())))?;
    for (k, &start) in starts.iter().enumerate() {
        let path = extract_path(&net, &grid, &res, start, args.max_steps).map_err(|e| match e {
            PathError::PathStalled { .. } => Failure::new(4, e.to_string()),
            other => Failure::new(1, other.to_string()),
        })?;
        let mut out = String::from("step,arc_id,t");
        for d in 1..=net.dim {
            let _ = write!(out, ",x{d}");
        }
        out.push_str(",cumulative_cost\n");
        for (step, p) in path.points.iter().enumerate() {
            let pos = net.arcs[p.arc].param.eval(p.arc, p.t).expect("path point on arc");
            let _ = write!(out, "{step},{},{}", p.arc, fmt_float(p.t));
            for c in &pos {
                let _ = write!(out, ",{}", fmt_float(*c));
            }
            let _ = writeln!(out, ",{}", fmt_float(p.cumulative_cost));
        }
        write_file(&args.out_dir.join(format!("path_{k:03}.csv")), &out)?;
    }
    eprintln!("wrote {} path file(s)", starts.len());
    Ok(())
}
