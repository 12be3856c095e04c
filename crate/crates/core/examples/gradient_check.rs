//! Compares reverse-mode gradients of the rollout loss with central differences.
//!
//! cargo run --example gradient_check -- [seed]

use mxplan::autodiff::{backward, frozen_loss, rollout_record, Hyper, ParamGrid};
use mxplan::benchgen::{generate, Family, GenSpec};
use mxplan::grounder::ground;
use mxplan::planner::init_params;

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let spec = GenSpec { map_side: 50, objectives: 1, objective_side: (5, 10), obstacles: 1, screen_retries: 0, ..GenSpec::new(Family::Auv, seed) };
    let g = generate(&spec).unwrap();
    let m = ground(&Family::Auv.entry().domain_def(), &g.problem).unwrap();
    let hyper = Hyper::default();
    let theta: ParamGrid = init_params(&m, 30, 1.0, seed);
    let r = rollout_record(&m, &theta, &hyper, &mut |_| {});
    let grad = backward(&r).unwrap();
    println!("outcome {:?}, loss {:.6} over {} steps", r.outcome, r.loss.total, r.trace.len());

    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for i in 0..theta.data.len() {
        if grad.data[i].abs() <= 1e-8 {
            continue;
        }
        let (mut up, mut down) = (theta.clone(), theta.clone());
        up.data[i] += h;
        down.data[i] -= h;
        let fd = (frozen_loss(&m, &r, &up, &hyper) - frozen_loss(&m, &r, &down, &hyper)) / (2.0 * h);
        let rel = (grad.data[i] - fd).abs() / grad.data[i].abs().max(fd.abs());
        worst = worst.max(rel);
        if i < 6 {
            println!("step {} {}: reverse {:+.6} central {:+.6}", i / m.t(), m.slots[i % m.t()], grad.data[i], fd);
        }
    }
    println!("max relative error {worst:.2e}");
}
