use serde::Serialize;

use super::tape::{Tape, Var};
use super::{Hyper, LossBreakdown, ParamGrid, PSI_SMOOTHING};
use crate::engine::{numeric_deltas, step, Plan, PlanStep, State};
use crate::geometry::{detour_target, inside_fallback_target, Point};
use crate::grounder::{GExpr, GroundedModel};
use crate::heuristic::{param_box, select_action, RelaxedGraph};

/// Why the rollout stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    /// The end action was selected after the recorded steps.
    GoalReached,
    /// All N steps were used without reaching the goal.
    Exhausted,
    /// No applicable action had a finite heuristic at this step.
    Deadend { step: usize },
    /// The selected action produced a non-finite value at this step.
    Fault { step: usize },
}

/// Frozen obstacle term: the step's position pair is pulled toward `target`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstacleTarget {
    pub pair: (usize, usize),
    pub region: usize,
    pub target: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepTrace {
    pub action: usize,
    pub h: usize,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub targets: Vec<ObstacleTarget>,
    /// Fluent values after the step.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Rollout {
    /// Steps before the end action, with unrounded parameters.
    pub plan: Plan,
    pub outcome: Outcome,
    pub tape: Tape,
    pub root: Var,
    pub loss: LossBreakdown,
    pub trace: Vec<StepTrace>,
    /// Grid shape the rollout was recorded against.
    pub n: usize,
    pub t: usize,
}

impl Rollout {
    pub fn reached_goal(&self) -> bool {
        self.outcome == Outcome::GoalReached
    }
}

fn record_expr(tape: &mut Tape, e: &GExpr, vars: &[Var], inputs: &[Option<Var>]) -> Var {
    match e {
        GExpr::Const(c) => tape.constant(*c),
        GExpr::Fluent(k) => vars[*k],
        GExpr::Param(j) => inputs[*j].expect("parameter slot recorded for the action"),
        GExpr::Add(a, b) => {
            let (a, b) = (record_expr(tape, a, vars, inputs), record_expr(tape, b, vars, inputs));
            tape.add(a, b)
        }
        GExpr::Sub(a, b) => {
            let (a, b) = (record_expr(tape, a, vars, inputs), record_expr(tape, b, vars, inputs));
            tape.sub(a, b)
        }
        GExpr::Mul(a, b) => {
            let (a, b) = (record_expr(tape, a, vars, inputs), record_expr(tape, b, vars, inputs));
            tape.mul(a, b)
        }
        GExpr::Div(a, b) => {
            let (a, b) = (record_expr(tape, a, vars, inputs), record_expr(tape, b, vars, inputs));
            tape.div(a, b)
        }
        GExpr::Neg(a) => {
            let a = record_expr(tape, a, vars, inputs);
            tape.neg(a)
        }
        GExpr::Pow(a, n) => {
            let a = record_expr(tape, a, vars, inputs);
            tape.powi(a, *n)
        }
        GExpr::Sqrt(a) => {
            let a = record_expr(tape, a, vars, inputs);
            tape.sqrt(a)
        }
    }
}

/// Obstacle targets for a move from `s` to `next` by action `a`.
fn obstacle_targets(model: &GroundedModel, a: usize, s: &State, next: &State, eps: f64) -> Vec<ObstacleTarget> {
    let act = &model.actions[a];
    let mut out = Vec::new();
    for &pair in &model.position_pairs {
        if !(act.affects(pair.0) || act.affects(pair.1)) {
            continue;
        }
        let (p, q) = (s.position(pair), next.position(pair));
        for (region, r) in model.obstacles() {
            if !r.segment_intersects(p, q) {
                continue;
            }
            let target = if r.contains(p) {
                inside_fallback_target(r, q, eps)
            } else {
                detour_target(r, p, q, eps).unwrap_or_else(|_| inside_fallback_target(r, q, eps))
            };
            out.push(ObstacleTarget { pair, region, target });
        }
    }
    out
}

/// Runs one forward pass under `theta`, recording the loss on a tape.
pub fn rollout_record(
    model: &GroundedModel,
    theta: &ParamGrid,
    hyper: &Hyper,
    on_graph: &mut dyn FnMut(&RelaxedGraph),
) -> Rollout {
    let (n, t) = (theta.n, theta.t);
    let params = param_box(&model.lower, &model.upper);
    let mut tape = Tape::new();
    let mut s = State::initial(model);
    let mut vars: Vec<Var> = s.values.iter().map(|&v| tape.constant(v)).collect();
    let mut plan = Plan::default();
    let mut trace = Vec::new();
    let mut loss = LossBreakdown::new(hyper);
    let mut step_roots = Vec::new();
    let mut outcome = Outcome::Exhausted;
    let mut last_lb_var = None;

    for i in 0..n {
        let row = theta.row(i);
        let sel = match select_action(model, &s, row, &params, on_graph) {
            Ok(sel) => sel,
            Err(_) => {
                outcome = Outcome::Deadend { step: i };
                break;
            }
        };
        if sel.action == model.end_index() {
            outcome = Outcome::GoalReached;
            break;
        }
        let a = sel.action;
        let Ok(next) = step(model, &s, a, row) else {
            outcome = Outcome::Fault { step: i };
            break;
        };
        let act = &model.actions[a];

        let mut inputs = vec![None; t];
        for &j in &act.slots {
            inputs[j] = Some(tape.input(i * t + j, row[j]));
        }
        let mut new_vars = vars.clone();
        let mut deltas: Vec<(usize, Var)> = Vec::new();
        for e in &act.numeric {
            let d = record_expr(&mut tape, &e.expr, &vars, &inputs);
            let (nv, signed) = if e.kappa > 0 {
                (tape.add(vars[e.fluent], d), d)
            } else {
                (tape.sub(vars[e.fluent], d), tape.neg(d))
            };
            new_vars[e.fluent] = nv;
            deltas.push((e.fluent, signed));
        }
        debug_assert!(new_vars.iter().zip(&next.values).all(|(&v, &x)| tape.value(v) == x));

        let mut over = Vec::new();
        let mut under = Vec::new();
        for k in 0..model.k() {
            if sel.upper[k].is_finite() {
                let u = tape.constant(sel.upper[k]);
                let d = tape.sub(new_vars[k], u);
                over.push(tape.relu(d));
            }
            if sel.lower[k].is_finite() {
                let l = tape.constant(sel.lower[k]);
                let d = tape.sub(l, new_vars[k]);
                under.push(tape.relu(d));
            }
        }
        let n_over = tape.norm2(&over);
        let n_under = tape.norm2(&under);
        let lb = tape.add(n_over, n_under);
        last_lb_var = Some(lb);

        let targets = obstacle_targets(model, a, &s, &next, hyper.eps);
        let mut lo_terms = Vec::new();
        for ot in &targets {
            let tx = tape.constant(ot.target.x);
            let ty = tape.constant(ot.target.y);
            let dx = tape.sub(new_vars[ot.pair.0], tx);
            let dy = tape.sub(new_vars[ot.pair.1], ty);
            lo_terms.push(tape.norm2(&[dx, dy]));
        }
        let lo = tape.sum(&lo_terms);

        let mut psi_terms = Vec::new();
        for &(x, y) in &model.position_pairs {
            if !(act.affects(x) || act.affects(y)) {
                continue;
            }
            let pick = |k: usize, tape: &mut Tape| {
                deltas.iter().find(|(f, _)| *f == k).map_or_else(|| tape.constant(0.0), |(_, d)| *d)
            };
            let dx = pick(x, &mut tape);
            let dy = pick(y, &mut tape);
            psi_terms.push(tape.smooth_norm(&[dx, dy], PSI_SMOOTHING));
        }
        let psi = tape.sum(&psi_terms);

        let wb = tape.scale(hyper.w1, lb);
        let wo = tape.scale(hyper.w2, lo);
        let wp = tape.scale(hyper.w3, psi);
        let l1 = tape.add(wb, wo);
        let li = tape.add(l1, wp);
        step_roots.push(li);
        loss.push(tape.value(lb), tape.value(lo), tape.value(psi), tape.value(li));

        trace.push(StepTrace {
            action: a,
            h: sel.h,
            upper: sel.upper,
            lower: sel.lower,
            targets,
            values: next.values.clone(),
        });
        plan.steps.push(PlanStep { action: a, theta: row.to_vec() });
        s = next;
        vars = new_vars;
    }

    // a truncated rollout waits where it stopped for the remaining steps, so
    // dying early is not cheaper than standing still
    let mut last_lb = None;
    if let (Outcome::Deadend { step } | Outcome::Fault { step }, Some(lb)) = (outcome, last_lb_var) {
        let tail = tape.scale(hyper.w1 * (n - step) as f64, lb);
        loss.tail = tape.value(tail);
        last_lb = Some(tail);
    }
    step_roots.extend(last_lb);
    let root = tape.sum(&step_roots);
    loss.total = tape.value(root);
    Rollout { plan, outcome, tape, root, loss, trace, n, t }
}

/// Loss of the rollout's frozen structure at `theta`, in plain arithmetic.
///
/// Actions, bound vectors and obstacle targets are taken from the recorded
/// trace; only the numeric effects are recomputed.
pub fn frozen_loss(model: &GroundedModel, r: &Rollout, theta: &ParamGrid, hyper: &Hyper) -> f64 {
    let mut values = model.init.values.clone();
    let mut total = 0.0;
    let mut last_lb = 0.0;
    for (i, st) in r.trace.iter().enumerate() {
        let act = &model.actions[st.action];
        let deltas = numeric_deltas(act, &values, theta.row(i));
        let mut next = values.clone();
        for &(k, d) in &deltas {
            next[k] = values[k] + d;
        }
        let mut over = 0.0;
        let mut under = 0.0;
        for k in 0..model.k() {
            if st.upper[k].is_finite() {
                over += (next[k] - st.upper[k]).max(0.0).powi(2);
            }
            if st.lower[k].is_finite() {
                under += (st.lower[k] - next[k]).max(0.0).powi(2);
            }
        }
        let lb = over.sqrt() + under.sqrt();
        let lo: f64 = st
            .targets
            .iter()
            .map(|ot| Point::new(next[ot.pair.0], next[ot.pair.1]).dist(ot.target))
            .sum();
        let d = |k: usize| deltas.iter().find(|(f, _)| *f == k).map_or(0.0, |(_, v)| *v);
        let psi: f64 = model
            .position_pairs
            .iter()
            .filter(|(x, y)| act.affects(*x) || act.affects(*y))
            .map(|&(x, y)| (d(x) * d(x) + d(y) * d(y) + PSI_SMOOTHING).sqrt())
            .sum();
        total += hyper.w1 * lb + hyper.w2 * lo + hyper.w3 * psi;
        last_lb = lb;
        values = next;
    }
    if let Outcome::Deadend { step } | Outcome::Fault { step } = r.outcome {
        if !r.trace.is_empty() {
            total += hyper.w1 * (r.n - step) as f64 * last_lb;
        }
    }
    total
}
