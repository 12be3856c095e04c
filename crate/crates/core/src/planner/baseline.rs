use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::time::Instant;

use super::{Observer, PlannerConfig, PlannerResult, Status};
use crate::autodiff::{Hyper, LossBreakdown};
use crate::engine::{applicable, goal_satisfied, numeric_deltas, step, validate, Plan, PlanStep, State};
use crate::geometry::Point;
use crate::grounder::{GExpr, GroundedModel};
use crate::heuristic::{build_and_extend, param_box, Interval, RelaxedState};

/// Unit directions of the eight fixed movements, counter-clockwise from east.
const DIRECTIONS: [(f64, f64); 8] =
    [(1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (-1.0, 1.0), (-1.0, 0.0), (-1.0, -1.0), (0.0, -1.0), (1.0, -1.0)];

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    /// Step length along each axis.
    pub delta: f64,
    pub cutoff_secs: f64,
    /// Maximum number of expanded nodes.
    pub node_cap: usize,
}

impl BaselineConfig {
    pub fn new(delta: f64, cfg: &PlannerConfig) -> Self {
        BaselineConfig { delta, cutoff_secs: cfg.cutoff_secs, node_cap: 200_000 }
    }
}

fn clamp_slot(model: &GroundedModel, j: usize, v: f64) -> f64 {
    v.max(model.lower[j]).min(model.upper[j])
}

/// Sets unfixed slots of `e` so that it evaluates to `target`. Only sums of
/// nothing, bare slots and products with an already known factor are solved.
fn assign(e: &GExpr, target: f64, theta: &mut [f64], fixed: &mut [bool]) -> bool {
    let known = |e: &GExpr, fixed: &[bool]| e.fluents().is_empty() && e.params().iter().all(|&j| fixed[j]);
    match e {
        GExpr::Param(j) if !fixed[*j] => {
            theta[*j] = target;
            fixed[*j] = true;
            true
        }
        GExpr::Mul(a, b) => {
            let (k, rest) = if known(a, fixed) {
                (a.eval(&[], theta), b)
            } else if known(b, fixed) {
                (b.eval(&[], theta), a)
            } else {
                return false;
            };
            k != 0.0 && assign(rest, target / k, theta, fixed)
        }
        GExpr::Neg(a) => assign(a, -target, theta, fixed),
        _ => known(e, fixed),
    }
}

/// Parameters that make action `a` displace position pair `pair` by exactly
/// `(dx, dy)`, or `None` if its effects are not of a recognised form or the
/// bounds do not allow it.
pub fn movement_theta(model: &GroundedModel, a: usize, pair: (usize, usize), dx: f64, dy: f64) -> Option<Vec<f64>> {
    let act = &model.actions[a];
    let ex = act.numeric.iter().find(|e| e.fluent == pair.0)?;
    let ey = act.numeric.iter().find(|e| e.fluent == pair.1)?;
    if !ex.expr.fluents().is_empty() || !ey.expr.fluents().is_empty() {
        return None;
    }
    let shared: Vec<usize> = ex.expr.params().intersection(&ey.expr.params()).copied().collect();
    let t = model.t();
    // candidate values for the shared factor, typically a duration
    let mut cands = vec![1.0];
    for &j in &shared {
        for v in [model.upper[j], model.lower[j]] {
            if v.is_finite() && v != 0.0 {
                cands.push(v);
            }
        }
    }
    for &c in &cands {
        let mut theta: Vec<f64> = (0..t).map(|j| clamp_slot(model, j, 0.0)).collect();
        let mut fixed = vec![false; t];
        for &j in &shared {
            theta[j] = clamp_slot(model, j, c);
            fixed[j] = true;
        }
        let tx = dx * f64::from(ex.kappa);
        let ty = dy * f64::from(ey.kappa);
        if !(assign(&ex.expr, tx, &mut theta, &mut fixed) && assign(&ey.expr, ty, &mut theta, &mut fixed)) {
            continue;
        }
        if act.slots.iter().any(|&j| !(model.lower[j] <= theta[j] && theta[j] <= model.upper[j])) {
            continue;
        }
        let deltas = numeric_deltas(act, &model.init.values, &theta);
        let get = |k: usize| deltas.iter().find(|(f, _)| *f == k).map_or(0.0, |(_, v)| *v);
        let tol = 1e-9 * dx.abs().max(dy.abs()).max(1.0);
        if (get(pair.0) - dx).abs() <= tol && (get(pair.1) - dy).abs() <= tol {
            return Some(theta);
        }
    }
    None
}

struct Move {
    action: usize,
    theta: Vec<f64>,
    /// Position pair moved, if any.
    pair: Option<(usize, usize)>,
}

fn moves(model: &GroundedModel, delta: f64) -> Vec<Move> {
    let mut out = Vec::new();
    for (a, act) in model.actions.iter().enumerate() {
        if act.is_logical() {
            let theta = (0..model.t()).map(|j| clamp_slot(model, j, 0.0)).collect();
            out.push(Move { action: a, theta, pair: None });
            continue;
        }
        let pairs: Vec<_> =
            model.position_pairs.iter().copied().filter(|p| act.affects(p.0) && act.affects(p.1)).collect();
        let [pair] = pairs[..] else { continue };
        for (ux, uy) in DIRECTIONS {
            if let Some(theta) = movement_theta(model, a, pair, ux * delta, uy * delta) {
                out.push(Move { action: a, theta, pair: Some(pair) });
            }
        }
    }
    out
}

/// Parameter box spanned by the discrete moves; slots they never set keep their bounds.
fn discrete_box(model: &GroundedModel, moves: &[Move]) -> Vec<Interval> {
    let mut out: Vec<Option<Interval>> = vec![None; model.t()];
    for m in moves.iter().filter(|m| m.pair.is_some()) {
        for &j in &model.actions[m.action].slots {
            let p = Interval::point(m.theta[j]);
            out[j] = Some(out[j].map_or(p, |i| i.hull(p)));
        }
    }
    let full = param_box(&model.lower, &model.upper);
    out.into_iter().zip(full).map(|(o, f)| o.unwrap_or(f)).collect()
}

/// Bounding box of all regions and start positions, widened by `margin`.
fn workspace(model: &GroundedModel, margin: f64) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |p: Point| {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    };
    for r in &model.regions {
        let (a, b) = r.bbox();
        grow(a);
        grow(b);
    }
    let s = State::initial(model);
    for &p in &model.position_pairs {
        grow(s.position(p));
    }
    (Point::new(lo.x - margin, lo.y - margin), Point::new(hi.x + margin, hi.y + margin))
}

#[derive(PartialEq)]
struct Entry {
    h: usize,
    g: f64,
    order: usize,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // reversed so the max-heap pops the least (h, g, order)
    fn cmp(&self, o: &Self) -> Ordering {
        o.h.cmp(&self.h).then(o.g.total_cmp(&self.g)).then(o.order.cmp(&self.order))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

struct Node {
    state: State,
    parent: Option<(usize, usize)>,
    g: f64,
}

fn key(s: &State) -> (Vec<i8>, Vec<i64>) {
    (s.props.clone(), s.values.iter().map(|v| (v * 1e6).round() as i64).collect())
}

pub fn solve_baseline(model: &GroundedModel, delta: f64, cfg: &PlannerConfig) -> PlannerResult {
    solve_baseline_observed(model, &BaselineConfig::new(delta, cfg), &mut ())
}

/// Greedy best-first search over fixed-length moves and logical actions.
pub fn solve_baseline_observed(model: &GroundedModel, bc: &BaselineConfig, obs: &mut dyn Observer) -> PlannerResult {
    let start = Instant::now();
    let moves = moves(model, bc.delta);
    let params = discrete_box(model, &moves);
    let (wlo, whi) = workspace(model, 2.0 * bc.delta);
    let empty = LossBreakdown::new(&Hyper::default());
    let fail = |status, iterations| PlannerResult {
        status,
        plan: Plan::default(),
        iterations,
        loss: empty.clone(),
        cost: f64::INFINITY,
    };

    let heuristic = |s: &State, obs: &mut dyn Observer| {
        build_and_extend(model, &RelaxedState::from_state(s), &params).ok().map(|g| {
            obs.on_graph(&g);
            g.h()
        })
    };
    let s0 = State::initial(model);
    let Some(h0) = heuristic(&s0, obs) else {
        return fail(Status::Deadend, 0);
    };
    let mut nodes = vec![Node { state: s0.clone(), parent: None, g: 0.0 }];
    let mut seen = HashSet::new();
    seen.insert(key(&s0));
    let mut open = BinaryHeap::new();
    open.push(Entry { h: h0, g: 0.0, order: 0, node: 0 });
    let mut expanded = 0;

    while let Some(Entry { node, .. }) = open.pop() {
        if goal_satisfied(model, &nodes[node].state) {
            let mut steps = Vec::new();
            let mut cur = node;
            while let Some((p, m)) = nodes[cur].parent {
                steps.push(PlanStep { action: moves[m].action, theta: moves[m].theta.clone() });
                cur = p;
            }
            steps.reverse();
            let plan = Plan { steps }.quantized(model);
            if !validate(model, &plan).is_valid() {
                return fail(Status::Deadend, expanded);
            }
            let cost = plan.cost(model);
            return PlannerResult { status: Status::Solved, plan, iterations: expanded, loss: empty, cost };
        }
        expanded += 1;
        if expanded > bc.node_cap || start.elapsed().as_secs_f64() > bc.cutoff_secs {
            return fail(Status::Cutoff, expanded);
        }
        let s = nodes[node].state.clone();
        for (mi, m) in moves.iter().enumerate() {
            if !applicable(model, &s, m.action, &m.theta) {
                continue;
            }
            let Ok(next) = step(model, &s, m.action, &m.theta) else { continue };
            if let Some(pair) = m.pair {
                let (p, q) = (s.position(pair), next.position(pair));
                if q.x < wlo.x || q.y < wlo.y || q.x > whi.x || q.y > whi.y {
                    continue;
                }
                if model.obstacles().any(|(_, r)| r.segment_intersects(p, q)) {
                    continue;
                }
            }
            if !seen.insert(key(&next)) {
                continue;
            }
            let Some(h) = heuristic(&next, obs) else { continue };
            let g = nodes[node].g + crate::engine::action_cost(model, m.action, &m.theta, &s);
            let order = nodes.len();
            nodes.push(Node { state: next, parent: Some((node, mi)), g });
            open.push(Entry { h, g, order, node: order });
        }
    }
    fail(Status::Deadend, expanded)
}
