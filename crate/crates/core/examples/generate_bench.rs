//! Writes a small benchmark tree for each family and redraws the obstacles of one layout.
//!
//! cargo run --example generate_bench -- [out-dir]

use std::path::PathBuf;

use mxplan::benchgen::{generate, Family, GenSpec};

fn main() {
    let out: PathBuf = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("mxplan-bench"), PathBuf::from);
    for family in Family::ALL {
        for seed in 0..3 {
            let spec = GenSpec { obstacles: 2, ..GenSpec::new(family, seed) };
            let g = generate(&spec).unwrap();
            let dir = g.write_to(&out).unwrap();
            println!("{} objectives {:?} obstacles {:?}", dir.display(), g.objectives, g.obstacles);
        }
    }
    // same objectives, fresh obstacles
    let spec = GenSpec { obstacles: 2, ..GenSpec::new(Family::Auv, 0) };
    for obstacle_seed in [100, 101] {
        let g = generate(&GenSpec { obstacle_seed: Some(obstacle_seed), ..spec.clone() }).unwrap();
        println!("redraw {obstacle_seed}: objectives {:?} obstacles {:?}", g.objectives, g.obstacles);
    }
}
