//! Parses every bundled domain and problem, prints a summary and re-emits the AUV domain.
//!
//! cargo run --example parse_and_print

use mxplan::{corpus, pddlx};

fn main() {
    for e in corpus::ALL {
        let (d, p) = e.parse().expect("bundled files parse");
        println!(
            "{:<6} {} types, {} predicates, {} actions, {} events | {} objects, {} regions",
            e.name,
            d.types.len(),
            d.predicates.len(),
            d.actions.len(),
            d.events.len(),
            p.objects.len(),
            p.regions.len()
        );
    }
    let d = corpus::AUV.domain_def();
    let text = pddlx::print_domain(&d);
    println!("\n{text}");
    // printing is a fixed point
    assert_eq!(pddlx::parse_domain(&text).unwrap(), d);
}
