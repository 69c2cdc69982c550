//! `swapcover` command-line front end.
//!
//! Exit codes: 0 success, 1 any other error, 2 solver iteration cap exceeded,
//! 3 infeasible instance or failed verification.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use swapcover::baselines::{exact_solution, greedy_solution, BaselineError, OracleBudget};
use swapcover::bench::{run_bench, BenchSpec};
use swapcover::decomposition::{disjoint_union_decomposition, verify_decomposition, DecompositionResult};
use swapcover::feasibility::{cover_free_subfamily, feasibility_report, Solution, SolutionFile};
use swapcover::gauge::{delta, dist_to_convex_with_witness, Gauge};
use swapcover::geometry::{ConvexPolygon, Point, Scalar};
use swapcover::instances::{
    gen_cover, gen_domination, instance_hash, load, to_json, BaseShape, CoverParams, DominationParams, Instance,
    ObjectKind, ShapeKind,
};
use swapcover::render::{render, Overlay};
use swapcover::solver::{audit_b_local_optimality, local_search, Init, SolverConfig, SolverError};

#[derive(Parser, Debug)]
#[command(
    name = "swapcover",
    version,
    about = "Local search for geometric dominating set and set cover"
)]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Input file (instance, or bench spec for `bench`).
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "warn")]
    log_level: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Solve an instance.
    Solve(SolveArgs),
    /// Check a solution or a decomposition.
    Verify(VerifyArgs),
    /// Run a benchmark spec and print the table.
    Bench(BenchArgs),
    /// Evaluate a convex distance function.
    Gauge(GaugeArgs),
    /// Draw an instance as SVG.
    Render(RenderArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ProblemKind {
    Domination,
    Cover,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    problem: ProblemKind,
    /// Number of objects.
    #[arg(long)]
    n: usize,
    /// Number of points (cover only).
    #[arg(long, default_value_t = 0)]
    points: usize,
    /// square, regular:K, rectangles (cover only) or a base shape JSON file.
    #[arg(long, default_value = "square")]
    shape: String,
    #[arg(long)]
    extent: Option<Scalar>,
    #[arg(long)]
    scale_min: Option<Scalar>,
    #[arg(long)]
    scale_max: Option<Scalar>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Algo {
    LocalSearch,
    Exact,
    Greedy,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "local-search")]
    algo: Algo,
    #[arg(long, conflicts_with = "epsilon")]
    b: Option<usize>,
    /// Derive b as ceil(alpha / epsilon^2), capped at 4.
    #[arg(long)]
    epsilon: Option<Scalar>,
    #[arg(long, default_value = "1")]
    alpha: Scalar,
    #[arg(long, default_value = "greedy")]
    init: Init,
    /// Cap on swaps per first-loop run (default n).
    #[arg(long)]
    max_swaps: Option<usize>,
    /// Cap on replacements per second-loop run (default 4 n^2).
    #[arg(long)]
    max_replacements: Option<usize>,
    /// Write the swap trace JSON here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Record wall time in the solution file.
    #[arg(long)]
    time: bool,
    /// Object cap for the exact oracle.
    #[arg(long, default_value_t = OracleBudget::default().max_n)]
    oracle_max_n: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Solution file to check against the instance.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Also run the independent b-local-optimality audit.
    #[arg(long)]
    audit: Option<usize>,
    /// Decompose the cover-free part of the solution (or all objects) and check it.
    #[arg(long)]
    decomposition: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Print the aligned text table instead of JSON.
    #[arg(long)]
    text: bool,
}

#[derive(Args, Debug)]
struct GaugeArgs {
    /// square, triangle, hexagon, pentagon, regular:K or a base shape JSON file.
    #[arg(long, default_value = "square")]
    shape: String,
    /// Two points `x,y`; prints the scale factor from the first to the second.
    #[arg(long, num_args = 2, value_names = ["P1", "P2"], allow_hyphen_values = true)]
    delta: Option<Vec<Point>>,
    /// A point and a polygon JSON file (list of vertices).
    #[arg(long, num_args = 2, value_names = ["P", "POLYGON"], allow_hyphen_values = true)]
    dist: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Shade cover-free regions of the selection.
    #[arg(long)]
    cover_free: bool,
    /// Overlay the disjoint-union decomposition and its chords.
    #[arg(long)]
    decomposition: bool,
}

/// A failed check; maps to exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Infeasible(String);

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<Instance> {
    let p = path
        .as_ref()
        .ok_or_else(|| anyhow!("--in <instance.json> is required"))?;
    load(p).with_context(|| format!("loading {}", p.display()))
}

fn load_solution(path: &Path, instance: &Instance) -> Result<Solution> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SolutionFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if file.instance_hash != instance_hash(instance) {
        bail!("solution {} was computed for a different instance", path.display());
    }
    if let Some(&bad) = file.indices.iter().find(|&&i| i >= instance.len()) {
        bail!("solution index {bad} out of range");
    }
    Ok(file.solution())
}

fn shape_kind(spec: &str) -> Result<ShapeKind> {
    if spec == "square" {
        return Ok(ShapeKind::Square);
    }
    if let Some(k) = spec.strip_prefix("regular:") {
        return Ok(ShapeKind::Regular {
            k: k.parse().context("regular:K needs an integer")?,
        });
    }
    let text = fs::read_to_string(spec).with_context(|| format!("unknown shape {spec:?}"))?;
    let base: BaseShape = serde_json::from_str(&text).with_context(|| format!("parsing {spec}"))?;
    Ok(ShapeKind::Custom { base })
}

fn cmd_gen(cli: &Cli, a: &GenArgs) -> Result<()> {
    let instance = match a.problem {
        ProblemKind::Domination => {
            let mut p = DominationParams::new(a.n, shape_kind(&a.shape)?);
            if let Some(e) = &a.extent {
                p = p.with_extent(e.clone());
            }
            let lo = a.scale_min.clone().unwrap_or(p.scale_min.clone());
            let hi = a.scale_max.clone().unwrap_or(p.scale_max.clone());
            Instance::Domination(gen_domination(&p.with_scales(lo, hi), cli.seed)?)
        }
        ProblemKind::Cover => {
            let kind = match a.shape.as_str() {
                "rectangles" | "rect" => ObjectKind::Rectangles,
                s => ObjectKind::Homothets { shape: shape_kind(s)? },
            };
            let mut p = CoverParams::new(a.n, a.points, kind);
            if let Some(e) = &a.extent {
                p = p.with_extent(e.clone());
            }
            let lo = a.scale_min.clone().unwrap_or(p.scale_min.clone());
            let hi = a.scale_max.clone().unwrap_or(p.scale_max.clone());
            Instance::Cover(gen_cover(&p.with_scales(lo, hi), cli.seed)?)
        }
    };
    emit(&cli.out, &to_json(&instance))
}

fn cmd_solve(cli: &Cli, a: &SolveArgs) -> Result<()> {
    let instance = read_input(&cli.input)?;
    let started = Instant::now();
    let mut sol = match a.algo {
        Algo::Greedy => greedy_solution(&instance),
        Algo::Exact => {
            let budget = OracleBudget {
                max_n: a.oracle_max_n,
                ..OracleBudget::default()
            };
            match exact_solution(&instance, &budget) {
                Ok(s) => s,
                Err(BaselineError::Infeasible) => return Err(Infeasible("instance is infeasible".into()).into()),
                Err(e) => return Err(e.into()),
            }
        }
        Algo::LocalSearch => {
            let b = match (&a.epsilon, a.b) {
                (Some(eps), _) => SolverConfig::b_from_epsilon(eps, &a.alpha)?,
                (None, Some(b)) => b,
                (None, None) => SolverConfig::default().b,
            };
            let cfg = SolverConfig {
                init: a.init,
                max_first_loop_iters: a.max_swaps,
                max_second_loop_iters: a.max_replacements,
                ..SolverConfig::with_b(b)
            };
            let (sol, trace) = local_search(&instance, &cfg)?;
            if let Some(path) = &a.trace {
                fs::write(path, trace.to_json()).with_context(|| format!("writing {}", path.display()))?;
            }
            sol
        }
    };
    if a.algo != Algo::LocalSearch && a.trace.is_some() {
        log::warn!("--trace only applies to local search");
    }
    if !feasibility_report(&instance, &sol.indices).feasible {
        return Err(Infeasible("instance is infeasible".into()).into());
    }
    if a.time {
        sol.meta.wall_time_ms = Some(started.elapsed().as_millis() as u64);
    }
    log::info!("{} objects selected out of {}", sol.len(), instance.len());
    emit(&cli.out, &SolutionFile::new(&instance, &sol).to_json())
}

/// Decomposes the cover-free part of `selection` (all objects if `None`).
fn decompose(instance: &Instance, selection: Option<&[usize]>) -> Result<(Vec<usize>, DecompositionResult)> {
    let polys = instance.polygons();
    let pool: Vec<usize> = selection
        .map(<[usize]>::to_vec)
        .unwrap_or_else(|| (0..polys.len()).collect());
    let sub: Vec<ConvexPolygon> = pool.iter().map(|&i| polys[i].clone()).collect();
    let keep: Vec<usize> = cover_free_subfamily(&sub).into_iter().map(|k| pool[k]).collect();
    let family: Vec<ConvexPolygon> = keep.iter().map(|&i| polys[i].clone()).collect();
    let result = disjoint_union_decomposition(&family)?;
    Ok((keep, result))
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<()> {
    let instance = read_input(&cli.input)?;
    let solution = a.solution.as_deref().map(|p| load_solution(p, &instance)).transpose()?;
    let mut out = serde_json::Map::new();
    let mut ok = true;
    if let Some(sol) = &solution {
        let rep = feasibility_report(&instance, &sol.indices);
        ok &= rep.feasible;
        out.insert("feasibility".into(), serde_json::to_value(&rep)?);
        if let Some(b) = a.audit {
            let audit = audit_b_local_optimality(&instance, &sol.indices, b);
            ok &= audit;
            out.insert("audit".into(), serde_json::json!({ "b": b, "locally_optimal": audit }));
        }
    } else if a.audit.is_some() {
        bail!("--audit needs --solution");
    }
    if a.decomposition {
        let polys = instance.polygons();
        let (keep, result) = decompose(&instance, solution.as_ref().map(|s| s.indices.as_slice()))?;
        let family: Vec<ConvexPolygon> = keep.iter().map(|&i| polys[i].clone()).collect();
        let rep = verify_decomposition(&family, &result);
        ok &= rep.passed();
        out.insert(
            "decomposition".into(),
            serde_json::json!({ "objects": keep, "passed": rep.passed(), "report": rep }),
        );
    }
    if out.is_empty() {
        bail!("nothing to verify: pass --solution and/or --decomposition");
    }
    out.insert("ok".into(), ok.into());
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    emit(&cli.out, &text)?;
    if !ok {
        return Err(Infeasible("verification failed".into()).into());
    }
    Ok(())
}

fn cmd_bench(cli: &Cli, a: &BenchArgs) -> Result<()> {
    let p = cli
        .input
        .as_ref()
        .ok_or_else(|| anyhow!("--in <spec.json> is required"))?;
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    let spec: BenchSpec = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
    let table = run_bench(&spec)?;
    if let Some(path) = &spec.output {
        fs::write(path, table.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    emit(&cli.out, &if a.text { table.to_text() } else { table.to_json() })
}

fn cmd_gauge(cli: &Cli, a: &GaugeArgs) -> Result<()> {
    let g = match Gauge::preset(&a.shape) {
        Some(g) => g,
        None => {
            let text = fs::read_to_string(&a.shape).with_context(|| format!("unknown shape {:?}", a.shape))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", a.shape))?
        }
    };
    let value = match (&a.delta, &a.dist) {
        (Some(pts), None) => serde_json::json!({ "delta": delta(&g, &pts[0], &pts[1]) }),
        (None, Some(args)) => {
            let p: Point = args[0].parse().map_err(|e| anyhow!("bad point: {e}"))?;
            let text = fs::read_to_string(&args[1]).with_context(|| format!("reading {}", args[1]))?;
            let verts: Vec<Point> = serde_json::from_str(&text).with_context(|| format!("parsing {}", args[1]))?;
            let poly = ConvexPolygon::new(verts)?;
            let (d, w) = dist_to_convex_with_witness(&g, &p, &poly);
            serde_json::json!({ "dist": d, "witness": w })
        }
        _ => bail!("pass exactly one of --delta or --dist"),
    };
    emit(&cli.out, &format!("{}\n", serde_json::to_string_pretty(&value)?))
}

fn cmd_render(cli: &Cli, a: &RenderArgs) -> Result<()> {
    let instance = read_input(&cli.input)?;
    let solution = a.solution.as_deref().map(|p| load_solution(p, &instance)).transpose()?;
    let selection = solution.as_ref().map(|s| s.indices.as_slice());
    let dec = if a.decomposition {
        let (keep, mut result) = decompose(&instance, selection)?;
        // Piece and chord indices refer to the decomposed subfamily; map
        // neighbours back to instance indices.
        for rec in &mut result.phase_log {
            for c in &mut rec.chords {
                c.neighbor = keep[c.neighbor];
            }
        }
        Some(result)
    } else {
        None
    };
    let overlay = Overlay {
        selection,
        cover_free: a.cover_free,
        decomposition: dec.as_ref(),
        separators: &[],
    };
    emit(&cli.out, &render(&instance, &overlay))
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a),
        Command::Solve(a) => cmd_solve(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Bench(a) => cmd_bench(cli, a),
        Command::Gauge(a) => cmd_gauge(cli, a),
        Command::Render(a) => cmd_render(cli, a),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Infeasible>().is_some() {
        return 3;
    }
    match err.downcast_ref::<SolverError>() {
        Some(SolverError::IterationCapExceeded { .. }) => 2,
        Some(SolverError::InfeasibleInstance) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new().parse_filters(&cli.log_level).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
