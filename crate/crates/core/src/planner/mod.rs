//! The gradient planner and a discretised best-first baseline.
//!
//! [`solve`] keeps one parameter row per step. Every iteration rolls the plan out
//! under the current parameters, stops if the rounded candidate validates without
//! touching an obstacle, and otherwise takes a clamped gradient step on the
//! accumulated loss. [`solve_baseline`] fixes every movement to a step of length
//! `delta` in one of eight directions and searches greedily with the same
//! heuristic.

mod baseline;
mod config;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::autodiff::{backward, rollout_record, stop_loss, update_params, LossBreakdown, Outcome, ParamGrid};
use crate::engine::Plan;
use crate::grounder::GroundedModel;
use crate::heuristic::RelaxedGraph;

pub use baseline::{movement_theta, solve_baseline, solve_baseline_observed, BaselineConfig};
pub use config::{ConfigError, PlannerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Solved,
    Cutoff,
    Deadend,
}

impl Status {
    pub fn is_solved(self) -> bool {
        self == Status::Solved
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlannerResult {
    pub status: Status,
    /// The solution when solved, otherwise the last candidate. Parameters are rounded.
    pub plan: Plan,
    pub iterations: usize,
    pub loss: LossBreakdown,
    /// Cost of `plan`.
    pub cost: f64,
}

/// What one iteration saw, handed to [`Observer::on_iteration`].
#[derive(Debug)]
pub struct IterationRecord<'a> {
    pub iter: usize,
    pub loss: &'a LossBreakdown,
    pub outcome: Outcome,
    pub cost: f64,
    pub stop: f64,
    /// Parameters after this iteration's update.
    pub theta: &'a ParamGrid,
}

pub trait Observer {
    fn on_graph(&mut self, _g: &RelaxedGraph) {}
    fn on_iteration(&mut self, _rec: &IterationRecord<'_>) {}
}

impl Observer for () {}

/// Uniform start in the bounds, clipped to `[-scale, scale]` where possible.
pub fn init_params(model: &GroundedModel, n: usize, scale: f64, seed: u64) -> ParamGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = model.t();
    let mut grid = ParamGrid::zeros(n, t);
    for i in 0..n {
        for j in 0..t {
            let (lo, hi) = (model.lower[j], model.upper[j]);
            let (mut a, mut b) = (lo.max(-scale), hi.min(scale));
            if a > b {
                // the box misses [-scale, scale]; start near the closer finite end
                (a, b) = if lo > scale { (lo, hi.min(lo + 2.0 * scale)) } else { (lo.max(hi - 2.0 * scale), hi) };
            }
            grid.row_mut(i)[j] = if a < b { rng.gen_range(a..=b) } else { a };
        }
    }
    grid
}

pub fn solve(model: &GroundedModel, cfg: &PlannerConfig) -> PlannerResult {
    solve_observed(model, cfg, &mut ())
}

pub fn solve_observed(model: &GroundedModel, cfg: &PlannerConfig, obs: &mut dyn Observer) -> PlannerResult {
    let start = Instant::now();
    let hyper = cfg.hyper();
    let mut theta = init_params(model, cfg.steps, cfg.init_scale, cfg.seed);
    let mut best = f64::INFINITY;
    let mut prev_actions: Vec<usize> = Vec::new();
    let mut stall = 0;
    let mut iter = 0;
    loop {
        let r = rollout_record(model, &theta, &hyper, &mut |g| obs.on_graph(g));
        let plan = r.plan.quantized(model);
        let cost = plan.cost(model);
        let stop = stop_loss(model, &r);
        let finish = |status| PlannerResult { status, plan: plan.clone(), iterations: iter + 1, loss: r.loss.clone(), cost };
        if stop == 0.0 {
            obs.on_iteration(&IterationRecord { iter, loss: &r.loss, outcome: r.outcome, cost, stop, theta: &theta });
            return finish(Status::Solved);
        }
        let first_dead = iter == 0 && r.outcome == Outcome::Deadend { step: 0 };
        let grad = backward(&r);
        if let Ok(g) = &grad {
            update_params(&mut theta, g, cfg.omega, model);
        }
        obs.on_iteration(&IterationRecord { iter, loss: &r.loss, outcome: r.outcome, cost, stop, theta: &theta });
        if first_dead || grad.is_err() {
            return finish(Status::Deadend);
        }
        // progress is measured against the best loss under the current action sequence
        let actions: Vec<usize> = r.plan.steps.iter().map(|st| st.action).collect();
        let improved = r.loss.total < best - 1e-6 * best.abs().max(1.0);
        if r.outcome != Outcome::Exhausted || actions != prev_actions || improved {
            stall = 0;
            best = r.loss.total;
        } else {
            stall += 1;
            if stall >= cfg.stall_limit {
                return finish(Status::Deadend);
            }
        }
        prev_actions = actions;
        if iter + 1 >= cfg.max_iterations || start.elapsed().as_secs_f64() > cfg.cutoff_secs {
            return finish(Status::Cutoff);
        }
        iter += 1;
    }
}
