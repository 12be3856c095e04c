//! Builds the interval relaxed planning graph for the toy problem and prints it.
//!
//! cargo run --example heuristic_toy

use mxplan::corpus;
use mxplan::engine::State;
use mxplan::grounder::ground;
use mxplan::heuristic::{build_and_extend, param_box, select_action, RelaxedState};

fn main() {
    let (d, p) = corpus::TOY.parse().unwrap();
    let m = ground(&d, &p).unwrap();
    let s = State::initial(&m);
    let params = param_box(&m.lower, &m.upper);
    let g = build_and_extend(&m, &RelaxedState::from_state(&s), &params).expect("goal reachable");
    println!("h = {} after {} repair rounds", g.h(), g.repair_iterations);
    print!("{}", g.dump(&m));

    for theta in [[0.0], [1.0]] {
        let sel = select_action(&m, &s, &theta, &params, &mut |_| {}).unwrap();
        println!("theta {theta:?}: choose {} (h = {})", m.actions[sel.action].label(), sel.h);
    }
}
