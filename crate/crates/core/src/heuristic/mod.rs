//! Relaxed planning graph heuristic with interval relaxation of numeric fluents.
//!
//! For a candidate action the graph is built from its relaxed successor: deletes
//! are dropped and the numeric update is applied at the step's parameters. Layers
//! are found propositionally, useless actions are pruned, and then numeric and
//! region preconditions are repaired by adding copies of actions that move the
//! fluents involved, with real parameters ranging over their bounds. The number of
//! entries in the final graph is the heuristic value.
//!
//! The graph also yields target bounds for the next state: for each fluent, the
//! nearest level that constrains it supplies an interval, choosing among several
//! by the distance between the fluent's current value and the interval midpoint.

mod graph;
mod interval;

use serde::Serialize;

use crate::engine::{applicable, goal_satisfied, NumericFault, State};
use crate::geometry::Point;
use crate::grounder::{GExpr, GroundCondition, GroundedModel};

pub use graph::{build_and_extend, relaxed_holds, GraphEntry, RelaxedGraph, Unreachable};
pub use interval::{eval_interval, param_box, Interval, PARAM_CLIP};

/// Delete-free state: set propositions and point values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelaxedState {
    pub props: Vec<bool>,
    pub values: Vec<f64>,
}

impl RelaxedState {
    pub fn from_state(s: &State) -> Self {
        RelaxedState { props: s.props.iter().map(|&p| p == 1).collect(), values: s.values.clone() }
    }
}

/// Adds the action's positive effects and applies its numeric update.
pub fn relaxed_successor(
    model: &GroundedModel,
    s: &State,
    a: usize,
    theta: &[f64],
) -> Result<RelaxedState, NumericFault> {
    let mut r = RelaxedState::from_state(s);
    let act = &model.actions[a];
    for &p in &act.add {
        r.props[p] = true;
    }
    for e in &act.numeric {
        let d = e.expr.eval(&s.values, theta);
        let v = if e.kappa > 0 { s.values[e.fluent] + d } else { s.values[e.fluent] - d };
        if !v.is_finite() {
            return Err(NumericFault { action: a, fluent: e.fluent });
        }
        r.values[e.fluent] = v;
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    /// Ground action index, or `model.end_index()` for the end action.
    pub action: usize,
    pub h: usize,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no applicable action has a finite heuristic value")]
pub struct Deadend;

/// A logical action whose effects already hold changes nothing.
fn is_noop(model: &GroundedModel, s: &State, a: usize) -> bool {
    let act = &model.actions[a];
    act.is_logical() && act.add.iter().all(|&p| s.props[p] == 1) && act.del.iter().all(|&p| s.props[p] == -1)
}

/// Picks the applicable action with the least heuristic value at `theta`.
///
/// Logical actions that would change nothing are skipped. Ties go to logical
/// actions, then to the lower index. `on_graph` sees every graph that was built.
pub fn select_action(
    model: &GroundedModel,
    s: &State,
    theta: &[f64],
    params: &[Interval],
    on_graph: &mut dyn FnMut(&RelaxedGraph),
) -> Result<Selection, Deadend> {
    let k = model.k();
    if goal_satisfied(model, s) {
        return Ok(Selection {
            action: model.end_index(),
            h: 0,
            upper: vec![f64::INFINITY; k],
            lower: vec![f64::NEG_INFINITY; k],
        });
    }
    let mut best: Option<((usize, bool, usize), RelaxedGraph)> = None;
    for a in 0..model.x() {
        if !applicable(model, s, a, theta) || is_noop(model, s, a) {
            continue;
        }
        let Ok(sp) = relaxed_successor(model, s, a, theta) else {
            continue;
        };
        let Ok(g) = build_and_extend(model, &sp, params) else {
            continue;
        };
        on_graph(&g);
        let key = (g.h(), !model.actions[a].is_logical(), a);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            best = Some((key, g));
        }
    }
    let ((h, _, action), g) = best.ok_or(Deadend)?;
    let (lower, upper) = bound_vectors(model, &g, &s.values);
    Ok(Selection { action, h, upper, lower })
}

/// Intervals that a condition imposes directly on fluent `k`, each with its
/// distance from the current values. A region test is scored by the planar
/// distance from the position to the centre of the region's box, so both
/// coordinates follow the same region.
fn constraints_on(model: &GroundedModel, c: &GroundCondition, k: usize, values: &[f64], out: &mut Vec<(Interval, f64)>) {
    for t in &c.numeric {
        if t.expr == GExpr::Fluent(k) {
            let iv = Interval { lo: t.lower, hi: t.upper };
            out.push((iv, (values[k] - iv.midpoint()).abs()));
        }
    }
    for r in &c.regions {
        if r.x != k && r.y != k {
            continue;
        }
        let (lo, hi) = model.regions[r.region].bbox();
        let centre = Point::new((lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0);
        let d = Point::new(values[r.x], values[r.y]).dist(centre);
        if r.x == k {
            out.push((Interval { lo: lo.x, hi: hi.x }, d));
        }
        if r.y == k {
            out.push((Interval { lo: lo.y, hi: hi.y }, d));
        }
    }
}

/// (lower, upper) target vectors read off `g` for current values `values`.
pub fn bound_vectors(model: &GroundedModel, g: &RelaxedGraph, values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let k_all = model.k();
    let mut lower = vec![f64::NEG_INFINITY; k_all];
    let mut upper = vec![f64::INFINITY; k_all];
    for k in 0..k_all {
        for n in 0..=g.levels() {
            let mut cands = Vec::new();
            if n < g.levels() {
                for e in &g.layers[n] {
                    constraints_on(model, &model.actions[e.action].pre, k, values, &mut cands);
                }
            } else {
                constraints_on(model, &model.goal, k, values, &mut cands);
            }
            let key = |d: f64| if d.is_nan() { f64::INFINITY } else { d };
            let Some(&(pick, _)) = cands.iter().reduce(|a, b| if key(b.1) < key(a.1) { b } else { a }) else {
                continue;
            };
            lower[k] = pick.lo;
            upper[k] = pick.hi;
            break;
        }
    }
    (lower, upper)
}

/// Position of a fluent pair in a relaxed state.
pub fn relaxed_position(r: &RelaxedState, pair: (usize, usize)) -> Point {
    Point::new(r.values[pair.0], r.values[pair.1])
}
