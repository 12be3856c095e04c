//! The `mxplan` command line.
//!
//! Exit status is 0 on success, 2 when planning or validation fails
//! (cutoff, deadend, invalid plan) and 1 on usage or I/O errors.

mod plot;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::benchgen::{self, evaluate, BaselinePlanner, Family, GenSpec, MxPlanner, Planner};
use crate::engine::{emit_plan, parse_plan, validate, Verdict};
use crate::grounder::{ground, GroundedModel};
use crate::heuristic::RelaxedGraph;
use crate::pddlx::{self, DomainDef, ProblemDef};
use crate::corpus;
use crate::planner::{solve_baseline, solve_observed, IterationRecord, Observer, PlannerConfig, PlannerResult};

pub use plot::{render_svg, trajectory};

/// Environment variable read when no seed is given on the command line or in a config file.
pub const SEED_VAR: &str = "MXPLAN_SEED";

#[derive(Parser, Debug)]
#[command(name = "mxplan", version, about = "Mixed logical/numeric planner")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a domain and optionally a problem, and summarise them.
    Parse {
        domain: PathBuf,
        problem: Option<PathBuf>,
        /// Print the normalised source instead of a summary.
        #[arg(long)]
        emit: bool,
    },
    /// Ground a problem and print its dimensions.
    Ground {
        domain: PathBuf,
        problem: PathBuf,
        /// Dump the whole grounded model as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the gradient planner.
    Plan {
        domain: PathBuf,
        problem: PathBuf,
        /// Plan file to write; stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Per-iteration loss trace.
        #[arg(long)]
        loss_csv: Option<PathBuf>,
        /// Relaxed planning graph of the first selection, as text.
        #[arg(long)]
        dump_graph: Option<PathBuf>,
        #[command(flatten)]
        tune: Tuning,
    },
    /// Run the fixed-step best-first baseline.
    Baseline {
        domain: PathBuf,
        problem: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        delta: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tune: Tuning,
    },
    /// Replay a plan file and report the first violation.
    Validate { domain: PathBuf, problem: PathBuf, plan: PathBuf },
    /// Generate benchmark instances under `<out>/<family>/<seed>/`.
    Gen {
        #[arg(long, value_enum, default_value_t = FamilyArg::Auv)]
        family: FamilyArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of consecutive seeds.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value = "bench")]
        out: PathBuf,
        #[arg(long, default_value_t = 150)]
        map_side: u32,
        #[arg(long, default_value_t = 3)]
        objectives: usize,
        #[arg(long, default_value_t = 1)]
        obstacles: usize,
        /// Redraw obstacles from this seed, keeping the objectives.
        #[arg(long)]
        obstacle_seed: Option<u64>,
        /// Skip the solvability screen.
        #[arg(long)]
        no_screen: bool,
    },
    /// Compare the planner with baselines on a generated benchmark directory.
    Compare {
        bench: PathBuf,
        /// Baseline step lengths.
        #[arg(long, value_delimiter = ',', default_value = "10")]
        delta: Vec<f64>,
        /// CSV table to write; the aligned table always goes to stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tune: Tuning,
    },
    /// Render a plan's trajectory as SVG.
    Plot {
        plan: PathBuf,
        problem: PathBuf,
        /// Domain file; defaults to domain.pddlx next to the problem, then the bundled domain of that name.
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(short, long, default_value = "plan.svg")]
        output: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FamilyArg {
    Auv,
    Taxi,
    Rover,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Auv => Family::Auv,
            FamilyArg::Taxi => Family::Taxi,
            FamilyArg::Rover => Family::Rover,
        }
    }
}

/// Hyperparameter overrides; precedence is flag, then config file, then built-in default.
#[derive(Args, Debug, Default)]
struct Tuning {
    /// TOML file with any PlannerConfig fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Maximum plan length N.
    #[arg(long = "steps", short = 'N')]
    steps: Option<usize>,
    /// Learning rate.
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    w1: Option<f64>,
    #[arg(long)]
    w2: Option<f64>,
    #[arg(long)]
    w3: Option<f64>,
    /// Detour offset.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
}

struct Failure {
    code: i32,
    msg: String,
}

type CmdResult = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

fn env_seed() -> Result<Option<u64>, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| usage(format!("{SEED_VAR}={v} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

impl Tuning {
    fn config(&self) -> Result<PlannerConfig, Failure> {
        let mut file_seed = false;
        let mut cfg = match &self.config {
            Some(path) => {
                let text = read(path)?;
                let table: toml::Table = text.parse().map_err(|e| usage(format!("{}: {e}", path.display())))?;
                file_seed = table.contains_key("seed");
                PlannerConfig::from_toml(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
            }
            None => PlannerConfig::default(),
        };
        match (self.seed, file_seed) {
            (Some(s), _) => cfg.seed = s,
            (None, false) => cfg.seed = env_seed()?.unwrap_or(cfg.seed),
            (None, true) => {}
        }
        set(&mut cfg.steps, self.steps);
        set(&mut cfg.omega, self.omega);
        set(&mut cfg.w1, self.w1);
        set(&mut cfg.w2, self.w2);
        set(&mut cfg.w3, self.w3);
        set(&mut cfg.eps, self.eps);
        set(&mut cfg.cutoff_secs, self.cutoff);
        set(&mut cfg.max_iterations, self.max_iterations);
        cfg.check().map_err(|e| usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_domain(path: &Path) -> Result<DomainDef, Failure> {
    pddlx::parse_domain(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path, dom: &DomainDef) -> Result<ProblemDef, Failure> {
    pddlx::parse_problem(&read(path)?, dom).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_model(domain: &Path, problem: &Path) -> Result<GroundedModel, Failure> {
    let d = load_domain(domain)?;
    let p = load_problem(problem, &d)?;
    ground(&d, &p).map_err(|e| usage(format!("{}: {e}", problem.display())))
}

/// Domain for `problem`: a sibling domain.pddlx, else the bundled domain it names.
fn find_domain(problem: &Path) -> Result<DomainDef, Failure> {
    if let Some(sib) = problem.parent().map(|d| d.join("domain.pddlx")).filter(|p| p.is_file()) {
        return load_domain(&sib);
    }
    let text = read(problem)?;
    let name = text
        .split("(:domain")
        .nth(1)
        .and_then(|rest| rest.split(|c: char| c == ')' || c.is_whitespace()).find(|s| !s.is_empty()))
        .ok_or_else(|| usage(format!("{}: no (:domain ...) and no --domain given", problem.display())))?;
    corpus::ALL
        .iter()
        .map(|e| e.domain_def())
        .find(|d| d.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| usage(format!("domain {name} is not bundled; pass --domain")))
}

fn status_code(r: &PlannerResult) -> i32 {
    if r.status.is_solved() {
        0
    } else {
        2
    }
}

fn report(r: &PlannerResult, model: &GroundedModel, output: Option<&Path>) -> CmdResult {
    let text = emit_plan(model, &r.plan);
    match output {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    eprintln!("status {:?} iterations {} steps {} cost {:.6}", r.status, r.iterations, r.plan.mu(), r.cost);
    Ok(status_code(r))
}

struct Recorder<'m> {
    model: &'m GroundedModel,
    csv: Option<String>,
    want_graph: bool,
    graph: Option<String>,
}

impl Observer for Recorder<'_> {
    fn on_graph(&mut self, g: &RelaxedGraph) {
        if self.want_graph && self.graph.is_none() {
            self.graph = Some(g.dump(self.model));
        }
    }

    fn on_iteration(&mut self, rec: &IterationRecord<'_>) {
        if let Some(csv) = self.csv.as_mut() {
            let l = rec.loss;
            let _ = writeln!(csv, "{},{},{},{},{},{}", rec.iter, l.sum_lb(), l.sum_lo(), rec.cost, l.total, rec.stop);
        }
    }
}

fn cmd_parse(domain: &Path, problem: Option<&Path>, emit: bool) -> CmdResult {
    let d = load_domain(domain)?;
    if emit {
        print!("{}", pddlx::print_domain(&d));
    } else {
        println!(
            "domain {}: {} types, {} predicates, {} functions, {} actions, {} events",
            d.name,
            d.types.len(),
            d.predicates.len(),
            d.functions.len(),
            d.actions.len(),
            d.events.len()
        );
    }
    if let Some(p) = problem {
        let p = load_problem(p, &d)?;
        if emit {
            print!("{}", pddlx::print_problem(&p));
        } else {
            println!(
                "problem {}: {} objects, {} initial facts, {} initial values, {} goal conditions, {} regions",
                p.name,
                p.objects.len(),
                p.init_props.len(),
                p.init_fluents.len(),
                p.goal.len(),
                p.regions.len()
            );
        }
    }
    Ok(0)
}

fn cmd_ground(domain: &Path, problem: &Path, json: bool) -> CmdResult {
    let m = load_model(domain, problem)?;
    if json {
        let text = serde_json::to_string_pretty(&m).map_err(|e| usage(e.to_string()))?;
        println!("{text}");
    } else {
        println!(
            "{} propositions, {} fluents, {} parameter slots, {} actions, {} events, {} regions",
            m.m(),
            m.k(),
            m.t(),
            m.x(),
            m.events.len(),
            m.regions.len()
        );
        for (i, a) in m.actions.iter().enumerate() {
            println!("{i} {}", a.label());
        }
    }
    Ok(0)
}

fn cmd_validate(domain: &Path, problem: &Path, plan: &Path) -> CmdResult {
    let m = load_model(domain, problem)?;
    let p = parse_plan(&m, &read(plan)?).map_err(|e| usage(format!("{}: {e}", plan.display())))?;
    match validate(&m, &p) {
        Verdict::Valid { mu, total_cost } => {
            println!("valid steps={mu} total_cost={total_cost:.9}");
            Ok(0)
        }
        Verdict::Invalid { step, violation } => {
            println!("invalid step={step} {violation:?}");
            Ok(2)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: Family,
    seed: Option<u64>,
    count: u64,
    out: &Path,
    map_side: u32,
    objectives: usize,
    obstacles: usize,
    obstacle_seed: Option<u64>,
    no_screen: bool,
) -> CmdResult {
    let first = match seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(0),
    };
    for seed in first..first + count {
        let mut spec = GenSpec::new(family, seed);
        spec.map_side = map_side;
        spec.objectives = objectives;
        spec.obstacles = obstacles;
        spec.obstacle_seed = obstacle_seed;
        if no_screen {
            spec.screen_retries = 0;
        }
        let g = benchgen::generate(&spec).map_err(|e| Failure { code: 2, msg: format!("seed {seed}: {e}") })?;
        let dir = g.write_to(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
        println!("{}", dir.display());
    }
    Ok(0)
}

/// Instances under `<root>/<family>/<seed>/`, named `family/seed`, in name order.
fn load_bench(root: &Path) -> Result<Vec<(String, GroundedModel)>, Failure> {
    let list = |p: &Path| -> Result<Vec<PathBuf>, Failure> {
        let mut v: Vec<PathBuf> = std::fs::read_dir(p)
            .map_err(|e| usage(format!("{}: {e}", p.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir())
            .collect();
        v.sort();
        Ok(v)
    };
    let mut out = Vec::new();
    for fam in list(root)? {
        let mut seeds = list(&fam)?;
        // numeric seed order when the names are numbers
        seeds.sort_by_key(|p| p.file_name().and_then(|n| n.to_str()).and_then(|n| n.parse::<u64>().ok()));
        for dir in seeds {
            let (d, p) = (dir.join("domain.pddlx"), dir.join("problem.pddlx"));
            if !(d.is_file() && p.is_file()) {
                continue;
            }
            let name = format!(
                "{}/{}",
                fam.file_name().unwrap_or_default().to_string_lossy(),
                dir.file_name().unwrap_or_default().to_string_lossy()
            );
            out.push((name, load_model(&d, &p)?));
        }
    }
    Ok(out)
}

fn cmd_compare(bench: &Path, deltas: &[f64], output: Option<&Path>, cfg: PlannerConfig) -> CmdResult {
    let instances = load_bench(bench)?;
    if deltas.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(usage("--delta values must be positive"));
    }
    let mx = MxPlanner { cfg: cfg.clone() };
    let baselines: Vec<BaselinePlanner> = deltas.iter().map(|&delta| BaselinePlanner { delta, cfg: cfg.clone() }).collect();
    let mut planners: Vec<&dyn Planner> = vec![&mx];
    planners.extend(baselines.iter().map(|b| b as &dyn Planner));
    let table = evaluate(&instances, &planners);
    print!("{}", table.to_text());
    if let Some(p) = output {
        write(p, &table.to_csv())?;
    }
    Ok(0)
}

fn cmd_plot(plan: &Path, problem: &Path, domain: Option<&Path>, output: &Path) -> CmdResult {
    let d = match domain {
        Some(p) => load_domain(p)?,
        None => find_domain(problem)?,
    };
    let p = load_problem(problem, &d)?;
    let m = ground(&d, &p).map_err(|e| usage(format!("{}: {e}", problem.display())))?;
    let pl = parse_plan(&m, &read(plan)?).map_err(|e| usage(format!("{}: {e}", plan.display())))?;
    write(output, &render_svg(&m, &pl))?;
    Ok(0)
}

fn dispatch(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Parse { domain, problem, emit } => cmd_parse(&domain, problem.as_deref(), emit),
        Cmd::Ground { domain, problem, json } => cmd_ground(&domain, &problem, json),
        Cmd::Plan { domain, problem, output, loss_csv, dump_graph, tune } => {
            let cfg = tune.config()?;
            let m = load_model(&domain, &problem)?;
            let mut rec = Recorder {
                model: &m,
                csv: loss_csv.as_ref().map(|_| "iter,Lb,Lo,cost,Lall,Lstop\n".to_string()),
                want_graph: dump_graph.is_some(),
                graph: None,
            };
            let r = solve_observed(&m, &cfg, &mut rec);
            if let (Some(p), Some(csv)) = (&loss_csv, &rec.csv) {
                write(p, csv)?;
            }
            if let Some(p) = &dump_graph {
                write(p, rec.graph.as_deref().unwrap_or(""))?;
            }
            report(&r, &m, output.as_deref())
        }
        Cmd::Baseline { domain, problem, delta, output, tune } => {
            if !(delta > 0.0 && delta.is_finite()) {
                return Err(usage("--delta must be positive"));
            }
            let cfg = tune.config()?;
            let m = load_model(&domain, &problem)?;
            report(&solve_baseline(&m, delta, &cfg), &m, output.as_deref())
        }
        Cmd::Validate { domain, problem, plan } => cmd_validate(&domain, &problem, &plan),
        Cmd::Gen { family, seed, count, out, map_side, objectives, obstacles, obstacle_seed, no_screen } => {
            cmd_gen(family.into(), seed, count, &out, map_side, objectives, obstacles, obstacle_seed, no_screen)
        }
        Cmd::Compare { bench, delta, output, tune } => cmd_compare(&bench, &delta, output.as_deref(), tune.config()?),
        Cmd::Plot { plan, problem, domain, output } => cmd_plot(&plan, &problem, domain.as_deref(), &output),
    }
}

/// Runs one invocation and returns the process exit status.
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
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("mxplan: {}", f.msg);
            f.code
        }
    }
}
