use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{validate, Verdict};
use crate::grounder::GroundedModel;
use crate::planner::{solve, solve_baseline, PlannerConfig, PlannerResult};

/// Anything that can be scored by [`evaluate`].
pub trait Planner: Sync {
    fn name(&self) -> String;
    fn solve(&self, model: &GroundedModel) -> PlannerResult;
}

pub struct MxPlanner {
    pub cfg: PlannerConfig,
}

impl Planner for MxPlanner {
    fn name(&self) -> String {
        "mx".into()
    }

    fn solve(&self, model: &GroundedModel) -> PlannerResult {
        solve(model, &self.cfg)
    }
}

pub struct BaselinePlanner {
    pub delta: f64,
    pub cfg: PlannerConfig,
}

impl Planner for BaselinePlanner {
    fn name(&self) -> String {
        format!("baseline-{}", self.delta)
    }

    fn solve(&self, model: &GroundedModel) -> PlannerResult {
        solve_baseline(model, self.delta, &self.cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub instance: String,
    /// Validated cost per planner; `None` is a failure.
    pub costs: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub planners: Vec<String>,
    pub rows: Vec<Row>,
    pub solved: Vec<usize>,
    /// Names of the instances every planner solved.
    pub common: Vec<String>,
    /// Mean cost over `common`, `None` when it is empty.
    pub averages: Vec<Option<f64>>,
}

impl Comparison {
    pub fn to_csv(&self) -> String {
        let mut out = format!("instance,{}\n", self.planners.join(","));
        for r in &self.rows {
            let cells: Vec<String> = r.costs.iter().map(|c| c.map_or(String::new(), |v| format!("{v:.4}"))).collect();
            let _ = writeln!(out, "{},{}", r.instance, cells.join(","));
        }
        let solved: Vec<String> = self.solved.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "solved,{}", solved.join(","));
        let avg: Vec<String> = self.averages.iter().map(|a| a.map_or(String::new(), |v| format!("{v:.4}"))).collect();
        let _ = writeln!(out, "average,{}", avg.join(","));
        out
    }

    pub fn to_text(&self) -> String {
        let cell = |c: Option<f64>| c.map_or("\\".to_string(), |v| format!("{v:.2}"));
        let mut table: Vec<Vec<String>> = vec![std::iter::once("instance".to_string()).chain(self.planners.clone()).collect()];
        for r in &self.rows {
            table.push(std::iter::once(r.instance.clone()).chain(r.costs.iter().map(|&c| cell(c))).collect());
        }
        table.push(std::iter::once("solved".to_string()).chain(self.solved.iter().map(usize::to_string)).collect());
        table.push(std::iter::once("average".to_string()).chain(self.averages.iter().map(|&a| cell(a))).collect());
        let widths: Vec<usize> =
            (0..table[0].len()).map(|j| table.iter().map(|row| row[j].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in &table {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(j, c)| if j == 0 { format!("{c:<w$}", w = widths[j]) } else { format!("{c:>w$}", w = widths[j]) })
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }
}

fn score(model: &GroundedModel, r: &PlannerResult) -> Option<f64> {
    if !r.status.is_solved() {
        return None;
    }
    match validate(model, &r.plan) {
        Verdict::Valid { total_cost, .. } => Some(total_cost),
        Verdict::Invalid { .. } => None,
    }
}

/// Runs every planner on every named instance in parallel and tabulates the
/// validated costs.
pub fn evaluate(instances: &[(String, GroundedModel)], planners: &[&dyn Planner]) -> Comparison {
    let rows: Vec<Row> = instances
        .par_iter()
        .map(|(name, m)| Row { instance: name.clone(), costs: planners.par_iter().map(|p| score(m, &p.solve(m))).collect() })
        .collect();
    let k = planners.len();
    let solved = (0..k).map(|j| rows.iter().filter(|r| r.costs[j].is_some()).count()).collect();
    let common_rows: Vec<&Row> = rows.iter().filter(|r| r.costs.iter().all(Option::is_some)).collect();
    let averages = (0..k)
        .map(|j| {
            if common_rows.is_empty() {
                None
            } else {
                Some(common_rows.iter().filter_map(|r| r.costs[j]).sum::<f64>() / common_rows.len() as f64)
            }
        })
        .collect();
    Comparison {
        planners: planners.iter().map(|p| p.name()).collect(),
        common: common_rows.iter().map(|r| r.instance.clone()).collect(),
        rows,
        solved,
        averages,
    }
}
