//! Recorded rollouts and reverse-mode gradients of the accumulated loss.
//!
//! A rollout selects an action per step with the heuristic, applies it with
//! exact semantics and records the numeric effects on a [`Tape`]. Each step
//! contributes `w1 * Lb + w2 * Lo + w3 * psi`: the bound loss pulls the next
//! values into the interval the heuristic asked for, the obstacle loss pulls a
//! position that crossed an obstacle toward a detour point beside it, and `psi`
//! is the step's displacement. Discrete choices, bound vectors and detour points
//! are constants of the pass, so gradients flow only through numeric effects.

mod rollout;
mod tape;

use serde::Serialize;

use crate::engine::validate;
use crate::grounder::GroundedModel;

pub use rollout::{frozen_loss, rollout_record, ObstacleTarget, Outcome, Rollout, StepTrace};
pub use tape::{GradientFault, Node, Op, Tape, Var};

/// Added under the square root of the step cost so it is smooth at zero motion.
pub const PSI_SMOOTHING: f64 = 1e-12;

/// Per-step parameters, `n` rows of `t` slots, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamGrid {
    pub n: usize,
    pub t: usize,
    pub data: Vec<f64>,
}

impl ParamGrid {
    pub fn zeros(n: usize, t: usize) -> Self {
        ParamGrid { n, t, data: vec![0.0; n * t] }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.t..(i + 1) * self.t]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.t..(i + 1) * self.t]
    }

    /// True if every entry lies within the slot bounds of `model`.
    pub fn within_bounds(&self, model: &GroundedModel) -> bool {
        self.data
            .iter()
            .enumerate()
            .all(|(i, &v)| model.lower[i % self.t] <= v && v <= model.upper[i % self.t])
    }
}

/// Loss weights and the detour offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyper {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub eps: f64,
}

impl Default for Hyper {
    fn default() -> Self {
        Hyper { w1: 1.0, w2: 1.0, w3: 100.0, eps: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossBreakdown {
    pub lb: Vec<f64>,
    pub lo: Vec<f64>,
    pub psi: Vec<f64>,
    /// Weighted per-step totals.
    pub step: Vec<f64>,
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    /// Weighted bound loss of the last state held for the steps a truncated
    /// rollout did not reach; zero otherwise.
    pub tail: f64,
    pub total: f64,
}

impl LossBreakdown {
    pub fn new(h: &Hyper) -> Self {
        LossBreakdown {
            lb: Vec::new(),
            lo: Vec::new(),
            psi: Vec::new(),
            step: Vec::new(),
            w1: h.w1,
            w2: h.w2,
            w3: h.w3,
            tail: 0.0,
            total: 0.0,
        }
    }

    fn push(&mut self, lb: f64, lo: f64, psi: f64, li: f64) {
        self.lb.push(lb);
        self.lo.push(lo);
        self.psi.push(psi);
        self.step.push(li);
    }

    pub fn sum_lb(&self) -> f64 {
        self.lb.iter().sum()
    }

    pub fn sum_lo(&self) -> f64 {
        self.lo.iter().sum()
    }

    pub fn sum_psi(&self) -> f64 {
        self.psi.iter().sum()
    }
}

/// Gradient of the accumulated loss with respect to every grid entry.
pub fn backward(r: &Rollout) -> Result<ParamGrid, GradientFault> {
    let data = r.tape.gradient(r.root, r.n * r.t)?;
    Ok(ParamGrid { n: r.n, t: r.t, data })
}

/// Gradient step followed by clamping into the slot bounds.
pub fn update_params(theta: &mut ParamGrid, grad: &ParamGrid, omega: f64, model: &GroundedModel) {
    for (i, (v, g)) in theta.data.iter_mut().zip(&grad.data).enumerate() {
        let j = i % theta.t;
        *v = (*v - omega * g).min(model.upper[j]).max(model.lower[j]);
    }
}

/// Zero when the rounded plan validates and no step crossed an obstacle.
pub fn stop_loss(model: &GroundedModel, r: &Rollout) -> f64 {
    if !r.reached_goal() || r.loss.sum_lo() > 0.0 {
        return f64::INFINITY;
    }
    if validate(model, &r.plan.quantized(model)).is_valid() {
        0.0
    } else {
        f64::INFINITY
    }
}
