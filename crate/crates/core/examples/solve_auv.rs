//! Solves a generated AUV instance with the gradient planner and prints the plan file.
//!
//! cargo run --example solve_auv -- [seed]

use mxplan::benchgen::{generate, Family, GenSpec};
use mxplan::engine::{emit_plan, validate};
use mxplan::grounder::ground;
use mxplan::planner::{solve, PlannerConfig};

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let spec = GenSpec { map_side: 50, objectives: 1, objective_side: (5, 10), obstacles: 2, obstacle_side: (5, 15), ..GenSpec::new(Family::Auv, seed) };
    let g = generate(&spec).unwrap();
    print!("{}", g.problem_text);
    let m = ground(&Family::Auv.entry().domain_def(), &g.problem).unwrap();
    let r = solve(&m, &PlannerConfig { seed, cutoff_secs: 120.0, ..Default::default() });
    println!("{:?} after {} iterations, {} steps, cost {:.3}", r.status, r.iterations, r.plan.mu(), r.cost);
    if r.status.is_solved() {
        print!("{}", emit_plan(&m, &r.plan));
        println!("{:?}", validate(&m, &r.plan));
    }
}
