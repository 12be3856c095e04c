//! Plans around an obstacle and writes the trajectory as SVG.
//!
//! cargo run --example plot_plan -- [out.svg]

use mxplan::cli::render_svg;
use mxplan::corpus;
use mxplan::grounder::ground;
use mxplan::pddlx::parse_problem;
use mxplan::planner::{solve, PlannerConfig};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "plan.svg".into());
    let dom = corpus::AUV.domain_def();
    let p = parse_problem(
        "(define (problem p) (:domain auv) (:objects v0 - vehicle A O - region)
           (:init (= (location-x v0) 1) (= (location-y v0) 1)) (:goal (and (sampled A)))
           (:regions (rect A 30 30 37 37) (rect O 14 2 22 14) (objective A) (obstacle O))
           (:parameters-bounds (<= -10 ?vel_x 10) (<= -10 ?vel_y 10) (<= 0 ?duration 1)))",
        &dom,
    )
    .unwrap();
    let m = ground(&dom, &p).unwrap();
    let r = solve(&m, &PlannerConfig { cutoff_secs: 120.0, ..Default::default() });
    println!("{:?}, {} steps, cost {:.3}", r.status, r.plan.mu(), r.cost);
    std::fs::write(&out, render_svg(&m, &r.plan)).unwrap();
    println!("wrote {out}");
}
