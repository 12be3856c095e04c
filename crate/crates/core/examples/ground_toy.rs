//! Grounds the two-region toy problem and shows the one-hot action encoding.
//!
//! cargo run --example ground_toy

use mxplan::corpus;
use mxplan::grounder::{ground, GroundedModel};

fn main() {
    let (d, p) = corpus::TOY.parse().unwrap();
    let m = ground(&d, &p).unwrap();
    println!("{} propositions, {} fluents, {} slots {:?}", m.m(), m.k(), m.t(), m.slots);
    for (i, a) in m.actions.iter().enumerate() {
        println!("{i}: {:<16} one-hot {:?}", a.label(), m.one_hot(i));
    }

    // the propositional effect of a step is the one-hot row times the effect matrix
    let e = m.effect_matrix();
    for label in ["navigate", "pick-up p1 A"] {
        let i = m.action_by_label(label).unwrap();
        let row = GroundedModel::select_row(&m.one_hot(i), &e);
        let named: Vec<String> = row
            .iter()
            .zip(&m.propositions)
            .filter(|(v, _)| **v != 0)
            .map(|(v, p)| format!("{}({} {})", if *v > 0 { "+" } else { "-" }, p.predicate, p.args.join(" ")))
            .collect();
        println!("{label}: {}", named.join(" "));
    }
}
