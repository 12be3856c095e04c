//! Random benchmark instances and a harness that compares planners on them.
//!
//! Regions are axis-aligned with integer corners, placed by rejection sampling.
//! Objective regions and obstacles come from two independent random streams, so
//! the obstacles of an instance can be redrawn while its objectives stay put.
//! A layout is kept only if the baseline at step 5 can visit every objective
//! region within the screening budget.

mod harness;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{self, Entry};
use crate::grounder::ground;
use crate::planner::{solve_baseline_observed, BaselineConfig};
use crate::pddlx::{parse_problem, ProblemDef};

pub use harness::{evaluate, BaselinePlanner, Comparison, MxPlanner, Planner, Row};

/// Attempts per region before placement gives up.
pub const PLACEMENT_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Auv,
    Taxi,
    Rover,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Auv, Family::Taxi, Family::Rover];

    pub fn name(self) -> &'static str {
        match self {
            Family::Auv => "auv",
            Family::Taxi => "taxi",
            Family::Rover => "rover",
        }
    }

    pub fn entry(self) -> Entry {
        match self {
            Family::Auv => corpus::AUV,
            Family::Taxi => corpus::TAXI,
            Family::Rover => corpus::ROVER,
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub seed: u64,
    pub map_side: u32,
    pub objectives: usize,
    /// Inclusive side range of the square objective regions.
    pub objective_side: (u32, u32),
    pub obstacles: usize,
    /// Inclusive side range of each obstacle edge.
    pub obstacle_side: (u32, u32),
    pub start: (f64, f64),
    /// Limit on each velocity component.
    pub speed: f64,
    pub max_duration: f64,
    /// Seed of the obstacle stream; defaults to one derived from `seed`.
    pub obstacle_seed: Option<u64>,
    /// Redraws of the obstacles allowed by screening; 0 disables screening.
    pub screen_retries: usize,
    pub screen_secs: f64,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GenSpec {
            family,
            seed,
            map_side: 150,
            objectives: 3,
            objective_side: (5, 20),
            obstacles: 1,
            obstacle_side: (5, 25),
            start: (1.0, 1.0),
            speed: 10.0,
            max_duration: 1.0,
            obstacle_seed: None,
            screen_retries: 50,
            screen_secs: 10.0,
        }
    }

    pub fn check(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::InvalidSpec(m.to_string()));
        if !(1..=5).contains(&self.objectives) {
            return bad("objective count must be 1 to 5");
        }
        if self.family != Family::Auv && self.objectives < 2 {
            return bad("taxi and rover instances need at least two regions");
        }
        for (lo, hi) in [self.objective_side, self.obstacle_side] {
            if lo == 0 || lo > hi || hi >= self.map_side {
                return bad("side ranges must be nonempty, positive and fit the map");
            }
        }
        if !(self.speed > 0.0 && self.max_duration > 0.0) {
            return bad("speed and duration limits must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("could not place region {placed} after {attempts} attempts")]
    PlacementFailure { placed: usize, attempts: usize },
    #[error("no layout passed screening after {retries} redraws")]
    ScreeningFailure { retries: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rect {
    pub x1: i64,
    pub y1: i64,
    pub x2: i64,
    pub y2: i64,
}

impl Rect {
    /// Closed boxes, so touching counts as overlapping.
    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x1 <= o.x2 && o.x1 <= self.x2 && self.y1 <= o.y2 && o.y1 <= self.y2
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.x1 as f64 <= x && x <= self.x2 as f64 && self.y1 as f64 <= y && y <= self.y2 as f64
    }
}

/// A generated instance: the family's bundled domain and a problem for it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub spec: GenSpec,
    pub objectives: Vec<Rect>,
    pub obstacles: Vec<Rect>,
    pub problem_text: String,
    pub problem: ProblemDef,
}

impl Generated {
    pub fn domain_text(&self) -> &'static str {
        self.spec.family.entry().domain
    }

    /// Writes `<root>/<family>/<seed>/{domain,problem}.pddlx` and returns the directory.
    pub fn write_to(&self, root: &Path) -> std::io::Result<PathBuf> {
        let dir = root.join(self.spec.family.name()).join(self.spec.seed.to_string());
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join("domain.pddlx"), self.domain_text())?;
        std::fs::write(dir.join("problem.pddlx"), &self.problem_text)?;
        Ok(dir)
    }
}

fn place(
    rng: &mut ChaCha8Rng,
    side: u32,
    (lo, hi): (u32, u32),
    square: bool,
    taken: &[Rect],
    start: (f64, f64),
    index: usize,
) -> Result<Rect, GenError> {
    for _ in 0..PLACEMENT_ATTEMPTS {
        let w = rng.gen_range(lo..=hi) as i64;
        let h = if square { w } else { rng.gen_range(lo..=hi) as i64 };
        let x1 = rng.gen_range(0..=side as i64 - w);
        let y1 = rng.gen_range(0..=side as i64 - h);
        let r = Rect { x1, y1, x2: x1 + w, y2: y1 + h };
        if taken.iter().all(|t| !t.overlaps(&r)) && !r.contains(start.0, start.1) {
            return Ok(r);
        }
    }
    Err(GenError::PlacementFailure { placed: index, attempts: PLACEMENT_ATTEMPTS })
}

fn objective_names(spec: &GenSpec) -> Vec<String> {
    let prefix = if spec.family == Family::Rover { "waypoint" } else { "R" };
    (0..spec.objectives).map(|i| format!("{prefix}{i}")).collect()
}

/// Problem text for a fixed layout; family-specific choices use `rng`.
fn problem_text(spec: &GenSpec, objectives: &[Rect], obstacles: &[Rect], rng: &mut ChaCha8Rng) -> String {
    let fam = spec.family;
    let names = objective_names(spec);
    let obst: Vec<String> = (0..obstacles.len()).map(|i| format!("O{i}")).collect();
    // only the AUV collision event ranges over obstacles as objects
    let region_list = names.iter().chain(&obst).cloned().collect::<Vec<_>>().join(" ");
    let agent = match fam {
        Family::Auv => "v0",
        Family::Taxi => "t0",
        Family::Rover => "rover0",
    };
    let mut objects = String::new();
    let mut init = Vec::new();
    let mut goal = Vec::new();
    match fam {
        Family::Auv => {
            let _ = write!(objects, "v0 - vehicle {region_list} - region");
            goal.extend(names.iter().map(|r| format!("(sampled {r})")));
        }
        Family::Taxi => {
            let people = rng.gen_range(1..=3);
            let ps: Vec<String> = (1..=people).map(|i| format!("p{i}")).collect();
            let _ = write!(objects, "t0 - taxi {} - person {} - region", ps.join(" "), names.join(" "));
            for p in &ps {
                let pair: Vec<&String> = names.choose_multiple(rng, 2).collect();
                init.push(format!("(at {p} {})", pair[0]));
                goal.push(format!("(at {p} {})", pair[1]));
            }
        }
        Family::Rover => {
            let _ = write!(
                objects,
                "rover0 - rover rover0store - store {} - waypoint camera0 - camera high_res - mode general - lander objective1 - objective",
                names.join(" ")
            );
            let mut pick = || names.choose(rng).expect("at least one waypoint").clone();
            let (lander, soil, rock, view) = (pick(), pick(), pick(), pick());
            init.extend([
                format!("(at_lander general {lander})"),
                "(channel_free general)".into(),
                "(available rover0)".into(),
                "(store_of rover0store rover0)".into(),
                "(empty rover0store)".into(),
                "(equipped_for_soil_analysis rover0)".into(),
                "(equipped_for_rock_analysis rover0)".into(),
                "(equipped_for_imaging rover0)".into(),
                "(on_board camera0 rover0)".into(),
                "(supports camera0 high_res)".into(),
                "(calibration_target camera0 objective1)".into(),
                format!("(visible_from objective1 {view})"),
                format!("(at_soil_sample {soil})"),
                format!("(at_rock_sample {rock})"),
            ]);
            goal.extend([
                format!("(communicated_soil_data {soil})"),
                format!("(communicated_rock_data {rock})"),
                "(communicated_image_data objective1 high_res)".to_string(),
            ]);
        }
    }
    init.push(format!("(= (location-x {agent}) {})", spec.start.0));
    init.push(format!("(= (location-y {agent}) {})", spec.start.1));

    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {}-{})", fam.name(), spec.seed);
    let _ = writeln!(out, "  (:domain {})", fam.name());
    let _ = writeln!(out, "  (:objects {objects})");
    let _ = writeln!(out, "  (:init");
    for i in &init {
        let _ = writeln!(out, "    {i}");
    }
    let _ = writeln!(out, "  )");
    let _ = writeln!(out, "  (:goal (and {}))", goal.join(" "));
    let _ = writeln!(out, "  (:regions");
    for (n, r) in names.iter().zip(objectives).chain(obst.iter().zip(obstacles)) {
        let _ = writeln!(out, "    (rect {n} {} {} {} {})", r.x1, r.y1, r.x2, r.y2);
    }
    for n in &names {
        let _ = writeln!(out, "    (objective {n})");
    }
    for n in &obst {
        let _ = writeln!(out, "    (obstacle {n})");
    }
    let _ = writeln!(out, "  )");
    let _ = writeln!(out, "  (:parameters-bounds");
    let _ = writeln!(out, "    (<= {} ?vel_x {})", -spec.speed, spec.speed);
    let _ = writeln!(out, "    (<= {} ?vel_y {})", -spec.speed, spec.speed);
    let _ = writeln!(out, "    (<= 0 ?duration {})))", spec.max_duration);
    out
}

/// Whether the baseline at step 5 visits every region of the layout in time.
fn screen(spec: &GenSpec, objectives: &[Rect], obstacles: &[Rect]) -> bool {
    let probe = GenSpec { family: Family::Auv, ..spec.clone() };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let text = problem_text(&probe, objectives, obstacles, &mut rng);
    let dom = corpus::AUV.domain_def();
    let Ok(p) = parse_problem(&text, &dom) else { return false };
    let Ok(m) = ground(&dom, &p) else { return false };
    let bc = BaselineConfig { delta: 5.0, cutoff_secs: spec.screen_secs, node_cap: 200_000 };
    solve_baseline_observed(&m, &bc, &mut ()).status.is_solved()
}

pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    spec.check()?;
    let mut layout = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut obstacle_rng = match spec.obstacle_seed {
        Some(s) => ChaCha8Rng::seed_from_u64(s),
        None => {
            let mut r = ChaCha8Rng::seed_from_u64(spec.seed);
            r.set_stream(1);
            r
        }
    };
    let mut objectives = Vec::new();
    for i in 0..spec.objectives {
        let r = place(&mut layout, spec.map_side, spec.objective_side, true, &objectives, spec.start, i)?;
        objectives.push(r);
    }

    let mut obstacles = Vec::new();
    let mut tries = 0;
    loop {
        obstacles.clear();
        let mut taken = objectives.clone();
        for i in 0..spec.obstacles {
            let r = place(&mut obstacle_rng, spec.map_side, spec.obstacle_side, false, &taken, spec.start, objectives.len() + i)?;
            taken.push(r);
            obstacles.push(r);
        }
        if spec.screen_retries == 0 || screen(spec, &objectives, &obstacles) {
            break;
        }
        tries += 1;
        if tries >= spec.screen_retries {
            return Err(GenError::ScreeningFailure { retries: tries });
        }
    }

    let text = problem_text(spec, &objectives, &obstacles, &mut layout);
    let dom = spec.family.entry().domain_def();
    let problem = parse_problem(&text, &dom).expect("generated problem parses");
    Ok(Generated { spec: spec.clone(), objectives, obstacles, problem_text: text, problem })
}
