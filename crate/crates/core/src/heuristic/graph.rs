//! Relaxed planning graph with interval-valued numeric layers.

use std::fmt::Write;

use serde::Serialize;

use super::interval::{eval_interval, Interval};
use super::RelaxedState;
use crate::geometry::Point;
use crate::grounder::{GroundCondition, GroundedModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphEntry {
    pub action: usize,
    /// Added by the numeric repair loop rather than by layering.
    pub repair: bool,
}

/// Levels `0..=L` of propositions and intervals, with action layers `0..L` between them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelaxedGraph {
    pub props: Vec<Vec<bool>>,
    pub layers: Vec<Vec<GraphEntry>>,
    pub intervals: Vec<Vec<Interval>>,
    pub repair_iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("goal unreachable in the relaxation")]
pub struct Unreachable;

impl RelaxedGraph {
    /// Heuristic value: action entries counted with multiplicity.
    pub fn h(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn levels(&self) -> usize {
        self.layers.len()
    }

    /// Whether every interval is contained in its successor level's interval.
    pub fn intervals_monotone(&self) -> bool {
        self.intervals
            .windows(2)
            .all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| a.is_subset_of(*b)))
    }

    pub fn props_monotone(&self) -> bool {
        self.props.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| !*a || *b))
    }

    /// Leveled text listing.
    pub fn dump(&self, model: &GroundedModel) -> String {
        let mut s = String::new();
        for n in 0..=self.levels() {
            let props: Vec<String> = self.props[n]
                .iter()
                .enumerate()
                .filter(|(_, on)| **on)
                .map(|(p, _)| {
                    let a = &model.propositions[p];
                    format!("({}{})", a.predicate, a.args.iter().map(|x| format!(" {x}")).collect::<String>())
                })
                .collect();
            let _ = writeln!(s, "P{n}: {}", props.join(" "));
            let iv: Vec<String> = self.intervals[n]
                .iter()
                .enumerate()
                .map(|(k, i)| format!("{}{:?}=[{}, {}]", model.fluents[k].name, model.fluents[k].args, i.lo, i.hi))
                .collect();
            let _ = writeln!(s, "I{n}: {}", iv.join(" "));
            if n < self.levels() {
                let acts: Vec<String> = self.layers[n]
                    .iter()
                    .map(|e| format!("{}{}", model.actions[e.action].label(), if e.repair { "*" } else { "" }))
                    .collect();
                let _ = writeln!(s, "A{n}: {}", acts.join(", "));
            }
        }
        let _ = writeln!(s, "h = {}", self.h());
        s
    }

    fn recompute_props(&mut self, model: &GroundedModel) {
        for n in 0..self.layers.len() {
            let mut next = self.props[n].clone();
            for e in &self.layers[n] {
                for &p in &model.actions[e.action].add {
                    next[p] = true;
                }
            }
            self.props[n + 1] = next;
        }
    }

    fn recompute_intervals(&mut self, model: &GroundedModel, params: &[Interval]) {
        for n in 0..self.layers.len() {
            let mut cur = self.intervals[n].clone();
            for e in &self.layers[n] {
                for eff in &model.actions[e.action].numeric {
                    let d = eval_interval(&eff.expr, &cur, params);
                    let moved = if eff.kappa > 0 { cur[eff.fluent].add(d) } else { cur[eff.fluent].sub(d) };
                    cur[eff.fluent] = cur[eff.fluent].hull(moved);
                }
            }
            self.intervals[n + 1] = cur;
        }
    }

    /// Removes actions with no useful positive effect, to a fixed point.
    /// Repair entries are kept when `keep_repairs` is set.
    fn prune(&mut self, model: &GroundedModel, keep_repairs: bool) {
        let m = model.m();
        loop {
            self.recompute_props(model);
            let mut needed = vec![false; m];
            for &g in &model.goal.pos {
                needed[g] = true;
            }
            let mut removed = false;
            for lvl in (0..self.layers.len()).rev() {
                let before = self.layers[lvl].len();
                let p = &self.props[lvl];
                self.layers[lvl].retain(|e| {
                    (keep_repairs && e.repair)
                        || model.actions[e.action].add.iter().any(|&q| !p[q] && needed[q])
                });
                removed |= self.layers[lvl].len() != before;
                for e in &self.layers[lvl] {
                    for &q in &model.actions[e.action].pre.pos {
                        needed[q] = true;
                    }
                }
            }
            if !removed {
                break;
            }
        }
        // drop emptied layers
        let mut n = 0;
        while n < self.layers.len() {
            if self.layers[n].is_empty() {
                self.layers.remove(n);
                self.props.remove(n + 1);
                self.intervals.remove(n + 1);
            } else {
                n += 1;
            }
        }
        self.recompute_props(model);
    }

    /// First numeric or region test failing under the level intervals, as
    /// (level, fluents the test reads). Level `L` holds the goal.
    fn first_failure(&self, model: &GroundedModel, params: &[Interval]) -> Option<(usize, Vec<usize>)> {
        for n in 0..=self.layers.len() {
            let conds: Vec<&GroundCondition> = if n < self.layers.len() {
                self.layers[n].iter().map(|e| &model.actions[e.action].pre).collect()
            } else {
                vec![&model.goal]
            };
            for c in conds {
                if let Some(vars) = failing_test(model, c, &self.intervals[n], params) {
                    return Some((n, vars));
                }
            }
        }
        None
    }
}

fn failing_test(model: &GroundedModel, c: &GroundCondition, iv: &[Interval], params: &[Interval]) -> Option<Vec<usize>> {
    for t in &c.numeric {
        if !eval_interval(&t.expr, iv, params).meets(t.lower, t.upper, t.closed) {
            return Some(t.expr.fluents().into_iter().collect());
        }
    }
    for r in &c.regions {
        let (ix, iy) = (iv[r.x], iv[r.y]);
        if !model.regions[r.region].intersects_box(Point::new(ix.lo, iy.lo), Point::new(ix.hi, iy.hi)) {
            return Some(vec![r.x, r.y]);
        }
    }
    None
}

/// Relaxed-condition test used outside graph construction.
pub fn relaxed_holds(model: &GroundedModel, c: &GroundCondition, iv: &[Interval], params: &[Interval]) -> bool {
    failing_test(model, c, iv, params).is_none()
}

pub fn build_and_extend(
    model: &GroundedModel,
    s_plus: &RelaxedState,
    params: &[Interval],
) -> Result<RelaxedGraph, Unreachable> {
    let x = model.x();
    let p0 = s_plus.props.clone();
    let i0: Vec<Interval> = s_plus.values.iter().map(|&v| Interval::point(v)).collect();
    let mut g = RelaxedGraph { props: vec![p0], layers: Vec::new(), intervals: vec![i0.clone()], repair_iterations: 0 };

    // propositional layering, numeric parts ignored
    let mut used = vec![false; x];
    loop {
        let cur = g.props.last().expect("level 0 exists");
        if model.goal.pos.iter().all(|&p| cur[p]) {
            break;
        }
        let layer: Vec<usize> = (0..x)
            .filter(|&a| !used[a] && model.actions[a].pre.pos.iter().all(|&p| cur[p]))
            .collect();
        let mut next = cur.clone();
        for &a in &layer {
            used[a] = true;
            for &p in &model.actions[a].add {
                next[p] = true;
            }
        }
        if next == *cur {
            return Err(Unreachable);
        }
        g.layers.push(layer.into_iter().map(|action| GraphEntry { action, repair: false }).collect());
        g.props.push(next);
        g.intervals.push(i0.clone());
    }

    g.prune(model, false);
    g.recompute_intervals(model, params);

    let cap = (10 * model.m() * model.k()).max(1);
    while let Some((mut n, vars)) = g.first_failure(model, params) {
        if g.repair_iterations >= cap {
            return Err(Unreachable);
        }
        g.repair_iterations += 1;
        let before: Vec<Interval> = vars.iter().map(|&k| g.intervals[n][k]).collect();
        if n == 0 {
            let p0 = g.props[0].clone();
            let i0 = g.intervals[0].clone();
            g.layers.insert(0, Vec::new());
            g.props.insert(0, p0);
            g.intervals.insert(0, i0);
            n = 1;
        }
        let t = n - 1;
        let cands: Vec<usize> = (0..x)
            .filter(|&a| {
                let act = &model.actions[a];
                act.pre.pos.iter().all(|&p| g.props[t][p]) && vars.iter().any(|&k| act.affects(k))
            })
            .collect();
        if cands.is_empty() {
            return Err(Unreachable);
        }
        g.layers[t].extend(cands.into_iter().map(|action| GraphEntry { action, repair: true }));
        g.recompute_props(model);
        g.recompute_intervals(model, params);
        let widened = vars.iter().zip(&before).any(|(&k, b)| {
            let now = g.intervals[n][k];
            now.lo < b.lo || now.hi > b.hi
        });
        if !widened {
            return Err(Unreachable);
        }
    }

    g.prune(model, true);
    g.recompute_intervals(model, params);
    debug_assert!(g.intervals_monotone());
    Ok(g)
}
