//! Exact state semantics: applicability, transitions, events and validation.
//!
//! A transition applies the selected action's propositional row as
//! `P' = e + (1 - e*e) * P` over polarities in {-1, 1}, then the numeric update
//! `V' = V + kappa * delta` with `delta` evaluated at the step's parameters, then
//! fires events to a fixed point. Each event fires at most once per transition,
//! so the fixed point is reached after at most one pass per event.

mod plan_file;
mod validate;

use serde::Serialize;

use crate::geometry::Point;
use crate::grounder::{GroundAction, GroundCondition, GroundedModel};

pub use plan_file::{emit_plan, parse_plan, PlanFileError};
pub use validate::{validate, Verdict, Violation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct State {
    pub props: Vec<i8>,
    pub values: Vec<f64>,
}

impl State {
    pub fn initial(model: &GroundedModel) -> Self {
        State { props: model.init.props.clone(), values: model.init.values.clone() }
    }

    pub fn holds(&self, p: usize) -> bool {
        self.props[p] == 1
    }

    pub fn position(&self, pair: (usize, usize)) -> Point {
        Point::new(self.values[pair.0], self.values[pair.1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanStep {
    pub action: usize,
    /// Full slot vector; entries outside the action's slots are ignored.
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
}

impl Plan {
    /// Index of the terminating end action.
    pub fn mu(&self) -> usize {
        self.steps.len()
    }

    /// Rounds every used parameter to nine decimals, the plan file precision.
    pub fn quantized(&self, model: &GroundedModel) -> Plan {
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let mut theta = vec![0.0; model.t()];
                for &j in &model.actions[s.action].slots {
                    theta[j] = quantize(s.theta[j]);
                }
                PlanStep { action: s.action, theta }
            })
            .collect();
        Plan { steps }
    }

    pub fn concat(&self, other: &Plan) -> Plan {
        Plan { steps: self.steps.iter().chain(&other.steps).cloned().collect() }
    }

    /// Replays the plan and sums step costs. Faulting steps leave the state as is.
    pub fn cost(&self, model: &GroundedModel) -> f64 {
        step_costs(model, &State::initial(model), self).iter().sum()
    }
}

pub fn quantize(v: f64) -> f64 {
    format!("{v:.9}").parse().unwrap_or(v)
}

/// Cost of each step when replayed from `start`.
pub fn step_costs(model: &GroundedModel, start: &State, plan: &Plan) -> Vec<f64> {
    let mut s = start.clone();
    let mut out = Vec::with_capacity(plan.steps.len());
    for st in &plan.steps {
        out.push(action_cost(model, st.action, &st.theta, &s));
        if let Ok(n) = step(model, &s, st.action, &st.theta) {
            s = n;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("numeric fault: action {action} produced a non-finite value for fluent {fluent}")]
pub struct NumericFault {
    pub action: usize,
    pub fluent: usize,
}

pub fn condition_holds(model: &GroundedModel, c: &GroundCondition, s: &State, theta: &[f64]) -> bool {
    c.pos.iter().all(|&p| s.props[p] == 1)
        && c.neg.iter().all(|&p| s.props[p] == -1)
        && c.numeric.iter().all(|t| t.holds(t.expr.eval(&s.values, theta)))
        && c.regions
            .iter()
            .all(|r| model.regions[r.region].contains(Point::new(s.values[r.x], s.values[r.y])))
}

pub fn applicable(model: &GroundedModel, s: &State, a: usize, theta: &[f64]) -> bool {
    if a == model.end_index() {
        return goal_satisfied(model, s);
    }
    condition_holds(model, &model.actions[a].pre, s, theta)
}

pub fn goal_satisfied(model: &GroundedModel, s: &State) -> bool {
    condition_holds(model, &model.goal, s, &[])
}

/// Signed numeric changes `kappa * delta` of one action, per affected fluent.
pub fn numeric_deltas(a: &GroundAction, values: &[f64], theta: &[f64]) -> Vec<(usize, f64)> {
    a.numeric.iter().map(|e| (e.fluent, f64::from(e.kappa) * e.expr.eval(values, theta))).collect()
}

/// Applies the action's effects without firing events.
pub fn apply_effects(model: &GroundedModel, s: &State, a: usize, theta: &[f64]) -> Result<State, NumericFault> {
    let act = &model.actions[a];
    let mut props = s.props.clone();
    let rows = model.compile_effect_rows(act);
    for (p, &e) in props.iter_mut().zip(&rows.e) {
        *p = e + (1 - e * e) * *p;
    }
    let mut values = s.values.clone();
    for e in &act.numeric {
        let d = e.expr.eval(&s.values, theta);
        let v = if e.kappa > 0 { s.values[e.fluent] + d } else { s.values[e.fluent] - d };
        if !v.is_finite() {
            return Err(NumericFault { action: a, fluent: e.fluent });
        }
        values[e.fluent] = v;
    }
    Ok(State { props, values })
}

/// Fires events to a fixed point; returns how many fired.
pub fn fire_events(model: &GroundedModel, s: &mut State) -> usize {
    let mut fired = vec![false; model.events.len()];
    let mut count = 0;
    loop {
        let mut changed = false;
        for (i, ev) in model.events.iter().enumerate() {
            if fired[i] || !condition_holds(model, &ev.pre, s, &[]) {
                continue;
            }
            fired[i] = true;
            count += 1;
            changed = true;
            for &d in &ev.del {
                s.props[d] = -1;
            }
            for &p in &ev.add {
                s.props[p] = 1;
            }
        }
        if !changed {
            return count;
        }
    }
}

/// Full transition: effects then events. The end action leaves the state unchanged.
pub fn step(model: &GroundedModel, s: &State, a: usize, theta: &[f64]) -> Result<State, NumericFault> {
    if a == model.end_index() {
        return Ok(s.clone());
    }
    let mut n = apply_effects(model, s, a, theta)?;
    fire_events(model, &mut n);
    Ok(n)
}

/// Euclidean displacement summed over the position pairs the action moves.
pub fn action_cost(model: &GroundedModel, a: usize, theta: &[f64], s: &State) -> f64 {
    if a == model.end_index() {
        return 0.0;
    }
    let act = &model.actions[a];
    let deltas = numeric_deltas(act, &s.values, theta);
    let d = |k: usize| deltas.iter().find(|(f, _)| *f == k).map_or(0.0, |(_, v)| *v);
    model
        .position_pairs
        .iter()
        .filter(|(x, y)| act.affects(*x) || act.affects(*y))
        .map(|&(x, y)| d(x).hypot(d(y)))
        .sum()
}
