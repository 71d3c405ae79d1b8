//! Batch experiment runner for `cofix-core`.
//!
//! Every run writes its results as files under `--out`: JSON reports (each
//! carrying the λ-feasibility verdict for the run's λ) and CSV traces with
//! floats in 17 significant digits. Identical arguments give byte-identical
//! output.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use cofix_core::combinatorics::coloring::{trivialize_coloring, ColoringError, GridColoring};
use cofix_core::combinatorics::graph::{cover_two_sets, ColoredCompleteGraph, GraphError};
use cofix_core::combinatorics::kway::{detect_quarter_plane, verify_kway, WindowSet};
use cofix_core::combinatorics::search::{ck_search, CkSearchOptions, SearchError};
use cofix_core::config::{load_family_config, ConfigError, LoadedFamily};
use cofix_core::diagrams::configs::{check_tps, scan_forbidden_configs, scan_si_and_forbidden_t, TpsInput};
use cofix_core::diagrams::{catalog, compute_diagram, DiagramError};
use cofix_core::grid::{check_fni, estimate_mu, mu_infinity_table, window_scan, write_rho_csv, GridIndex, OrbitGrid};
use cofix_core::ledger::{build_ledger, check_lambda, parse_rational, rational_from_f64, LedgerError};
use cofix_core::metric::{MetricError, Tolerances};
use cofix_core::solver::{common_fixed_point, gbct_orbit_solve, OrbitOptions, SolveError, SolveOptions};
use cofix_core::walks::{greedy_walk, multi_target_walk, WalkError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid --{name}: {reason}")]
    InvalidArg { name: &'static str, reason: String },
}

impl CliError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(ConfigError::Axioms { .. }) => "axiom-violation",
            CliError::Config(_) => "config",
            CliError::Metric(_) => "metric",
            CliError::Solve(SolveError::NonConvergence { .. }) => "non-convergence",
            CliError::Solve(SolveError::NotCommuting { .. }) => "not-commuting",
            CliError::Solve(SolveError::PremiseFailure { .. }) => "premise-failure",
            CliError::Solve(_) => "solve",
            CliError::Walk(_) => "walk",
            CliError::Graph(_) => "graph",
            CliError::Coloring(_) => "coloring",
            CliError::Search(_) => "search",
            CliError::Ledger(_) => "lambda",
            CliError::Diagram(_) => "diagram",
            CliError::Io { .. } => "io",
            CliError::InvalidArg { .. } => "invalid-argument",
        }
    }

    /// Structured payload for the error report.
    pub fn details(&self) -> Value {
        match self {
            CliError::Config(ConfigError::Axioms { report, .. }) => {
                let failures: Vec<&_> = report.pairs.iter().filter(|p| !p.witness.satisfied || !p.metric_violations.is_empty()).take(10).collect();
                json!({ "witnesses": failures })
            }
            CliError::Solve(SolveError::NonConvergence {
                iterations,
                best,
                best_residual,
            }) => json!({ "iterations": iterations, "best": best, "best_residual": best_residual }),
            CliError::Solve(SolveError::NotCommuting { iteration, i, j, residual, point }) => {
                json!({ "iteration": iteration, "operators": [i + 1, j + 1], "residual": residual, "point": point })
            }
            CliError::Solve(SolveError::PremiseFailure { iteration, point, witness }) => {
                json!({ "iteration": iteration, "point": point, "witness": witness })
            }
            _ => Value::Null,
        }
    }

    pub fn report(&self) -> Value {
        json!({ "error": self.kind(), "message": self.to_string(), "details": self.details() })
    }
}

/// One experiment: global parameters plus a subcommand.
#[derive(Debug, Clone, Parser)]
#[command(name = "cofix", version, about = "Experiments on common fixed points of commuting contractive families")]
pub struct ExperimentSpec {
    /// Bundled family id or path to a family JSON file.
    #[arg(long, global = true, default_value = "half3")]
    pub config: String,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Convergence tolerance for solvers.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// λ override, read exactly (`1e-23`, `3/4`, `0.5`).
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    /// Window side W for grid scans over [0, W]^n.
    #[arg(long, global = true, default_value_t = 6)]
    pub window: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Common fixed point of the family.
    Solve(SolveArgs),
    /// Greedy contraction walk on the orbit grid.
    Walk(WalkArgs),
    /// Furthest-neighbor inequality over the window.
    FniScan,
    /// Window minimum of ρ and the diagonal table.
    MuEstimate(MuArgs),
    /// k-way check of a generated window set.
    Kway(KwayArgs),
    /// Two-set cover of a 3-colored complete graph.
    Cover(CoverArgs),
    /// Trivialize a generated grid coloring.
    Trivialize(TrivializeArgs),
    /// Contraction diagram of a grid point.
    Diagram(DiagramArgs),
    /// Two-point step check.
    TpsCheck(TpsArgs),
    /// Forbidden-configuration scan.
    ConfigScan(ConfigScanArgs),
    /// Constants ledger and λ verdict.
    Constants,
    /// Search for the cover constant C_k.
    CkSearch(CkArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Starting point, comma separated; defaults to the family's base point.
    #[arg(long, value_parser = parse_point)]
    pub start: Option<Vec<f64>>,
    #[arg(long, default_value_t = 100_000)]
    pub max_iters: usize,
    /// Iterate operator 1 alone, using its powers up to n as the family.
    #[arg(long)]
    pub orbit: bool,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    /// Target index for a single walk.
    #[arg(long, value_parser = parse_index)]
    pub target: Option<GridIndex>,
    #[arg(long, value_parser = parse_index)]
    pub start: Option<GridIndex>,
    /// Visit these targets in order from the origin (repeatable).
    #[arg(long = "targets", value_parser = parse_index)]
    pub targets: Vec<GridIndex>,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub slack: f64,
    #[arg(long, default_value_t = 10_000)]
    pub phase_budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MuArgs {
    /// Diagonal anchors k for boxes at (k, ..., k).
    #[arg(long, value_delimiter = ',', default_values_t = [0u32, 1, 2, 4, 8])]
    pub anchors: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SetShape {
    Cone,
    Plane,
    Column,
}

#[derive(Debug, Clone, Args)]
pub struct KwayArgs {
    #[arg(long, value_enum, default_value = "cone")]
    pub shape: SetShape,
    /// Corner of the set.
    #[arg(long, value_parser = parse_index)]
    pub corner: Option<GridIndex>,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CoverArgs {
    /// Edge-list file (`u v c` lines); a random coloring is drawn otherwise.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub vertices: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ColoringKind {
    Constant1,
    Constant2,
    /// Color 1 with random colors on the face z1 = β1.
    Face1,
    /// Color 2 with random colors on the face z2 = β2.
    Face2,
    /// 1 where z1 >= z2, else 2.
    Diagonal,
    /// Constant 3.
    Constant3,
}

#[derive(Debug, Clone, Args)]
pub struct TrivializeArgs {
    #[arg(long, value_enum, default_value = "constant1")]
    pub coloring: ColoringKind,
    #[arg(long, value_parser = parse_index)]
    pub beta: Option<GridIndex>,
    #[arg(long, default_value_t = 25)]
    pub side: u32,
}

#[derive(Debug, Clone, Args)]
pub struct DiagramArgs {
    #[arg(long, value_parser = parse_index)]
    pub center: Option<GridIndex>,
    /// Also write the admissible catalog.
    #[arg(long)]
    pub catalog: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TpsArgs {
    #[arg(long, value_parser = parse_index)]
    pub x0: GridIndex,
    #[arg(long, value_parser = parse_index)]
    pub x1: GridIndex,
    #[arg(long, value_parser = parse_index)]
    pub x2: GridIndex,
    #[arg(long, value_parser = parse_index)]
    pub x3: GridIndex,
    #[arg(long, value_parser = parse_index)]
    pub x: GridIndex,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// μ proxy; defaults to the window estimate.
    #[arg(long)]
    pub mu_hat: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ConfigScanArgs {
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long)]
    pub mu_hat: Option<f64>,
    /// Also enumerate S_i(K, x0) and search for a forbidden target.
    #[arg(long, value_parser = parse_index)]
    pub x0: Option<GridIndex>,
}

#[derive(Debug, Clone, Args)]
pub struct CkArgs {
    #[arg(long, default_value_t = 2)]
    pub k: u8,
    #[arg(long, default_value_t = 7)]
    pub max_n: usize,
    #[arg(long, default_value_t = 2)]
    pub min_n: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
}

fn parse_index(s: &str) -> Result<GridIndex, String> {
    s.split(',')
        .map(|c| c.trim().parse::<u32>().map_err(|e| format!("`{c}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(GridIndex::new)
}

fn parse_point(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("`{c}`: {e}")))
        .collect()
}

/// Resolved run context shared by subcommands.
struct Context<'a> {
    spec: &'a ExperimentSpec,
    loaded: LoadedFamily,
    lambda_exact: BigRational,
    lambda: f64,
}

impl Context<'_> {
    fn grid(&self) -> Result<OrbitGrid, CliError> {
        let family = self.loaded.family.with_lambda(self.lambda)?;
        let family = match self.spec.tol {
            Some(t) => family.with_tolerances(Tolerances {
                contract: t,
                ..*self.loaded.family.tolerances()
            }),
            None => family,
        };
        Ok(OrbitGrid::new(family, self.loaded.base.clone())?)
    }

    fn write_json(&self, name: &str, mut body: Value, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
        let verdict = check_lambda(&build_ledger(), &self.lambda_exact)?;
        if let Value::Object(map) = &mut body {
            map.insert("family".into(), json!(self.loaded.source));
            map.insert("lambda_feasibility".into(), serde_json::to_value(verdict).expect("serializable"));
        }
        let text = serde_json::to_string_pretty(&body).expect("serializable") + "\n";
        write_file(&self.spec.out.join(name), text.as_bytes(), written)
    }

    fn write_bytes(&self, name: &str, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<(), CliError> {
        write_file(&self.spec.out.join(name), bytes, written)
    }
}

fn write_file(path: &Path, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    written.push(path.to_path_buf());
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory");
    buf
}

/// Runs one experiment and returns the files it wrote.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(&spec.out).map_err(|e| CliError::Io {
        path: spec.out.clone(),
        source: e,
    })?;
    let loaded = load_family_config(&spec.config, spec.seed)?;
    let (lambda_exact, lambda) = match &spec.lambda {
        Some(text) => {
            let exact = parse_rational(text)?;
            let approx = exact.to_f64().unwrap_or(f64::NAN);
            (exact, approx)
        }
        None => {
            let l = loaded.family.lambda();
            (rational_from_f64(l).expect("family λ is finite"), l)
        }
    };
    if let Some(t) = spec.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::InvalidArg {
                name: "tol",
                reason: format!("must be positive and finite, got {t}"),
            });
        }
    }
    let ctx = Context {
        spec,
        loaded,
        lambda_exact,
        lambda,
    };
    let mut written = Vec::new();
    let w = &mut written;
    match &spec.command {
        Command::Solve(args) => solve(&ctx, args, w)?,
        Command::Walk(args) => walk(&ctx, args, w)?,
        Command::FniScan => {
            let grid = ctx.grid()?;
            let report = check_fni(&grid, spec.window, lambda);
            let rows = window_scan(&grid, spec.window);
            ctx.write_bytes("window_rho.csv", &csv_bytes(|b| write_rho_csv(&rows, grid.n(), b)), w)?;
            ctx.write_json("fni.json", json!({ "passed": report.passed(), "report": to_value(&report) }), w)?;
        }
        Command::MuEstimate(args) => {
            let grid = ctx.grid()?;
            let est = estimate_mu(&grid, spec.window);
            let table = mu_infinity_table(&grid, &args.anchors, spec.window);
            let rows = window_scan(&grid, spec.window);
            ctx.write_bytes("window_rho.csv", &csv_bytes(|b| write_rho_csv(&rows, grid.n(), b)), w)?;
            ctx.write_json("mu.json", json!({ "estimate": to_value(&est), "diagonal": to_value(&table) }), w)?;
        }
        Command::Kway(args) => {
            let n = ctx.loaded.family.len();
            let corner = args.corner.clone().unwrap_or_else(|| GridIndex::zeros(n));
            if corner.dim() != n {
                return Err(CliError::InvalidArg {
                    name: "corner",
                    reason: format!("expected {n} coordinates"),
                });
            }
            let set = match args.shape {
                SetShape::Cone => WindowSet::translate_cone(&corner, spec.window),
                SetShape::Plane => WindowSet::from_predicate(GridIndex::zeros(n), spec.window, |x| {
                    corner.dominated_by(x) && (2..n).all(|i| x.get(i) == corner.get(i))
                }),
                SetShape::Column => WindowSet::from_predicate(GridIndex::zeros(n), spec.window, |x| {
                    corner.dominated_by(x) && (1..n).all(|i| x.get(i) == corner.get(i))
                }),
            };
            let report = verify_kway(&set, args.k);
            let plane = detect_quarter_plane(&set).map(|q| json!({ "i1": q.i1 + 1, "i2": q.i2 + 1, "corner": q.corner }));
            ctx.write_json(
                "kway.json",
                json!({ "members": set.len(), "holds": report.holds(), "report": to_value(&report), "quarter_plane": plane }),
                w,
            )?;
        }
        Command::Cover(args) => {
            let graph = match &args.graph {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
                        path: path.clone(),
                        source: e,
                    })?;
                    ColoredCompleteGraph::from_edge_list(&text, 3)?
                }
                None => ColoredCompleteGraph::random(args.vertices, 3, &mut ChaCha8Rng::seed_from_u64(spec.seed))?,
            };
            let cover = cover_two_sets(&graph)?;
            ctx.write_bytes("graph.txt", graph.to_edge_list().as_bytes(), w)?;
            ctx.write_json("cover.json", json!({ "vertices": graph.n_vertices(), "cover": to_value(&cover) }), w)?;
        }
        Command::Trivialize(args) => {
            let beta = args.beta.clone().unwrap_or_else(|| GridIndex::zeros(3));
            let coloring = build_coloring(args.coloring, beta, args.side, spec.seed)?;
            let outcome = trivialize_coloring(&coloring)?;
            ctx.write_json("trivialize.json", json!({ "outcome": to_value(&outcome) }), w)?;
        }
        Command::Diagram(args) => {
            let grid = ctx.grid()?;
            let center = args.center.clone().unwrap_or_else(|| GridIndex::zeros(grid.n()));
            let d = compute_diagram(&grid, &center)?;
            ctx.write_json("diagram.json", d.to_json(), w)?;
            if args.catalog {
                let rows: Vec<Value> = catalog()
                    .iter()
                    .map(|e| {
                        json!({ "id": e.id, "code": e.canonical_code.to_string(),
                                "orthogonal_matches": e.orthogonal_matches, "pairing_rule": e.pairing_rule })
                    })
                    .collect();
                ctx.write_json("catalog.json", json!({ "admissible": rows }), w)?;
            }
        }
        Command::TpsCheck(args) => {
            let grid = ctx.grid()?;
            let mu_hat = args.mu_hat.unwrap_or_else(|| estimate_mu(&grid, spec.window).mu_hat);
            let input = TpsInput {
                x0: args.x0.clone(),
                xs: [args.x1.clone(), args.x2.clone(), args.x3.clone()],
                x: args.x.clone(),
                k: args.k,
                lambda,
                mu_hat,
            };
            for p in [&input.x0, &input.x, &input.xs[0], &input.xs[1], &input.xs[2]] {
                if p.dim() != grid.n() || grid.n() != 3 {
                    return Err(CliError::InvalidArg {
                        name: "x",
                        reason: "the two-point check needs three operators and 3-coordinate indices".into(),
                    });
                }
            }
            let report = check_tps(&grid, &input);
            ctx.write_json("tps.json", json!({ "mu_hat": mu_hat, "report": to_value(&report) }), w)?;
        }
        Command::ConfigScan(args) => {
            let grid = ctx.grid()?;
            let mu_hat = args.mu_hat.unwrap_or_else(|| estimate_mu(&grid, spec.window).mu_hat);
            let report = scan_forbidden_configs(&grid, args.k, lambda, mu_hat, spec.window);
            let si = args
                .x0
                .as_ref()
                .map(|x0| to_value(&scan_si_and_forbidden_t(&grid, x0, args.k, lambda, mu_hat, spec.window)));
            ctx.write_json("config_scan.json", json!({ "mu_hat": mu_hat, "report": to_value(&report), "si_scan": si }), w)?;
        }
        Command::Constants => {
            let ledger = build_ledger();
            ctx.write_json("constants.json", json!({ "ledger": to_value(&ledger), "binding": ledger.binding().label }), w)?;
        }
        Command::CkSearch(args) => {
            let opts = CkSearchOptions {
                k: args.k,
                min_n: args.min_n,
                max_n: args.max_n,
                samples: args.samples,
                seed: spec.seed,
                ..CkSearchOptions::new(args.k, args.max_n)
            };
            let report = ck_search(&opts)?;
            ctx.write_json("ck_search.json", to_value(&report), w)?;
        }
    }
    Ok(written)
}

fn solve(ctx: &Context, args: &SolveArgs, w: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let family = ctx.loaded.family.with_lambda(ctx.lambda)?;
    let start = args.start.clone().unwrap_or_else(|| ctx.loaded.base.clone());
    let tol = ctx.spec.tol.unwrap_or(SolveOptions::default().tol);
    if args.orbit {
        let opts = OrbitOptions {
            max_power: family.len(),
            lambda: ctx.lambda,
            tol,
            max_iters: args.max_iters,
        };
        let sol = gbct_orbit_solve(family.space(), &family.ops()[0], &start, opts)?;
        let powers: Vec<usize> = sol.powers.iter().copied().collect();
        return ctx.write_json(
            "solve.json",
            json!({ "mode": "orbit", "point": sol.point, "residual": sol.residual,
                    "iterations": sol.iterations, "powers": powers }),
            w,
        );
    }
    let opts = SolveOptions {
        tol,
        max_iters: args.max_iters,
        ..SolveOptions::default()
    };
    let sol = common_fixed_point(&family, &start, opts)?;
    ctx.write_bytes("solve_trace.csv", &csv_bytes(|b| sol.write_trace_csv(b)), w)?;
    let stages: Vec<Value> = sol
        .stages
        .iter()
        .map(|s| {
            json!({ "active": s.active.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "first_step": s.first_step, "last_step": s.last_step,
                    "retired": s.retired.map(|i| i + 1) })
        })
        .collect();
    ctx.write_json(
        "solve.json",
        json!({ "mode": "family", "point": sol.point, "index": sol.index, "residuals": sol.residuals,
                "iterations": sol.iterations, "restarts": sol.restarts, "stages": stages }),
        w,
    )
}

fn walk(ctx: &Context, args: &WalkArgs, w: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let grid = ctx.grid()?;
    let n = grid.n();
    let directions = |d: &[usize]| d.iter().map(|i| i + 1).collect::<Vec<_>>();
    if !args.targets.is_empty() {
        let m = multi_target_walk(&grid, &args.targets, args.slack, args.phase_budget)?;
        ctx.write_bytes("walk.csv", &csv_bytes(|b| m.walk.write_csv(b)), w)?;
        return ctx.write_json(
            "walk.json",
            json!({ "mode": "multi-target", "targets": args.targets, "phase_ends": m.walk.phase_ends,
                    "threshold_met_at_entry": m.threshold_met_at_entry,
                    "directions": directions(&m.walk.directions), "bound_holds": m.walk.bound_holds() }),
            w,
        );
    }
    let target = args.target.clone().ok_or(CliError::InvalidArg {
        name: "target",
        reason: "give --target or at least one --targets".into(),
    })?;
    let start = args.start.clone().unwrap_or_else(|| GridIndex::zeros(n));
    let walk = greedy_walk(&grid, &target, &start, args.steps, args.epsilon)?;
    ctx.write_bytes("walk.csv", &csv_bytes(|b| walk.write_csv(b)), w)?;
    ctx.write_json(
        "walk.json",
        json!({ "mode": "single", "target": target, "start": start, "steps": walk.len(),
                "directions": directions(&walk.directions), "end": walk.last(),
                "bound_holds": walk.bound_holds(), "first_violation": walk.first_violation() }),
        w,
    )
}

fn build_coloring(kind: ColoringKind, beta: GridIndex, side: u32, seed: u64) -> Result<GridColoring, ColoringError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = beta.clone();
    match kind {
        ColoringKind::Constant1 => GridColoring::constant(beta, side, 1),
        ColoringKind::Constant2 => GridColoring::constant(beta, side, 2),
        ColoringKind::Constant3 => GridColoring::constant(beta, side, 3),
        ColoringKind::Face1 => GridColoring::from_fn(beta, side, |z| if z.get(0) == b.get(0) { rng.gen_range(1..=3) } else { 1 }),
        ColoringKind::Face2 => GridColoring::from_fn(beta, side, |z| if z.get(1) == b.get(1) { rng.gen_range(1..=3) } else { 2 }),
        ColoringKind::Diagonal => GridColoring::from_fn(beta, side, |z| if z.get(0) >= z.get(1) { 1 } else { 2 }),
    }
}
