//! Tabulates gradient planner against fixed-step baselines on a few generated instances.
//!
//! cargo run --release --example baseline_vs_mx -- [count]

use mxplan::benchgen::{evaluate, generate, BaselinePlanner, Family, GenSpec, MxPlanner, Planner};
use mxplan::grounder::ground;
use mxplan::planner::PlannerConfig;

fn main() {
    let count: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let dom = Family::Auv.entry().domain_def();
    let instances: Vec<_> = (0..count)
        .map(|seed| {
            let spec = GenSpec {
                map_side: 50,
                objectives: 1,
                objective_side: (5, 10),
                obstacles: 1 + (seed % 2) as usize,
                obstacle_side: (5, 15),
                ..GenSpec::new(Family::Auv, seed)
            };
            let g = generate(&spec).unwrap();
            (format!("auv-{seed}"), ground(&dom, &g.problem).unwrap())
        })
        .collect();
    let cfg = PlannerConfig { cutoff_secs: 60.0, ..Default::default() };
    let mx = MxPlanner { cfg: cfg.clone() };
    let b5 = BaselinePlanner { delta: 5.0, cfg: cfg.clone() };
    let b10 = BaselinePlanner { delta: 10.0, cfg };
    let planners: [&dyn Planner; 3] = [&mx, &b5, &b10];
    print!("{}", evaluate(&instances, &planners).to_text());
}
