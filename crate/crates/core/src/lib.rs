//! Planning with logical actions and real-valued action parameters.
//!
//! A problem mixes propositional state with numeric fluents, and actions may take
//! real arguments (velocities, durations) chosen by the planner. [`planner::solve`]
//! picks actions greedily with a relaxed planning graph heuristic while gradient
//! descent tunes the real parameters of every step against a loss made of bound
//! violations, obstacle penetration and path length.
//!
//! Typical flow:
//!
//! ```
//! use mxplan::{corpus, grounder, pddlx, planner};
//!
//! let dom = corpus::AUV.domain_def();
//! let prob = pddlx::parse_problem(
//!     "(define (problem p) (:domain auv)
//!        (:objects v0 - vehicle A - region)
//!        (:init (= (location-x v0) 1) (= (location-y v0) 1))
//!        (:goal (and (sampled A)))
//!        (:regions (rect A 20 20 30 30) (objective A))
//!        (:parameters-bounds (<= -10 ?vel_x 10) (<= -10 ?vel_y 10) (<= 0 ?duration 1)))",
//!     &dom,
//! )
//! .unwrap();
//! let model = grounder::ground(&dom, &prob).unwrap();
//! let res = planner::solve(&model, &planner::PlannerConfig::default());
//! assert!(res.status.is_solved());
//! ```

pub mod autodiff;
pub mod benchgen;
pub mod cli;
pub mod corpus;
pub mod engine;
pub mod geometry;
pub mod grounder;
pub mod heuristic;
pub mod pddlx;
pub mod planner;
