//! Executes one parameterised action and an obstacle collision.
//!
//! cargo run --example transition

use mxplan::corpus;
use mxplan::engine::{step, State};
use mxplan::grounder::ground;
use mxplan::pddlx::parse_problem;

fn main() {
    let (d, p) = corpus::OCEAN.parse().unwrap();
    let m = ground(&d, &p).unwrap();
    let a = m.action_by_label("ROV-Navigate ship ROV").unwrap();
    let mut theta = vec![0.0; m.t()];
    for (slot, v) in [("vx", 2.0), ("vy", -2.0), ("d", 1.0)] {
        theta[m.slot(slot).unwrap()] = v;
    }
    let s = State::initial(&m);
    let next = step(&m, &s, a, &theta).unwrap();
    for (k, f) in m.fluents.iter().enumerate() {
        println!("({} {}): {} -> {}", f.name, f.args.join(" "), s.values[k], next.values[k]);
    }

    // entering an obstacle fires the collision event
    let dom = corpus::AUV.domain_def();
    let prob = parse_problem(
        "(define (problem p) (:domain auv) (:objects v0 - vehicle A O - region)
           (:init (= (location-x v0) 1) (= (location-y v0) 1)) (:goal (and (sampled A)))
           (:regions (rect A 30 30 40 40) (rect O 4 4 8 8) (objective A) (obstacle O)))",
        &dom,
    )
    .unwrap();
    let m = ground(&dom, &prob).unwrap();
    let glide = m.action_by_label("glide v0").unwrap();
    let next = step(&m, &State::initial(&m), glide, &[5.0, 5.0, 1.0]).unwrap();
    let collided = m.prop_named("collided", &["v0"]).unwrap();
    println!("glide to {:?}: collided = {}", next.values, next.holds(collided));
}
