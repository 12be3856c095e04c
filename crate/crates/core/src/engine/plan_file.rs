//! Text plan format, one step per line:
//!
//! ```text
//! 0 glide v0 | vel_x=3.000000000 vel_y=4.000000000 duration=1.000000000 | cost=5.000000000
//! 1 take-sample v0 R1 |  | cost=0.000000000
//! end total_cost=5.000000000
//! ```

use std::fmt::Write;

use super::{step_costs, Plan, PlanStep, State};
use crate::grounder::GroundedModel;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("plan line {line}: {msg}")]
pub struct PlanFileError {
    pub line: usize,
    pub msg: String,
}

pub fn emit_plan(model: &GroundedModel, plan: &Plan) -> String {
    let costs = step_costs(model, &State::initial(model), plan);
    let mut out = String::new();
    for (i, (st, c)) in plan.steps.iter().zip(&costs).enumerate() {
        let act = &model.actions[st.action];
        let slots: Vec<String> =
            act.slots.iter().map(|&j| format!("{}={:.9}", model.slots[j], st.theta[j])).collect();
        let _ = writeln!(out, "{i} {} | {} | cost={c:.9}", act.label(), slots.join(" "));
    }
    let _ = writeln!(out, "end total_cost={:.9}", costs.iter().sum::<f64>());
    out
}

pub fn parse_plan(model: &GroundedModel, text: &str) -> Result<Plan, PlanFileError> {
    let mut steps = Vec::new();
    let mut ended = false;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |msg: String| PlanFileError { line, msg };
        let body = raw.split(';').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if ended {
            return Err(err("text after end line".into()));
        }
        if let Some(rest) = body.strip_prefix("end") {
            let rest = rest.trim();
            if !rest.is_empty() && !rest.starts_with("total_cost=") {
                return Err(err(format!("malformed end line {body:?}")));
            }
            ended = true;
            continue;
        }
        let parts: Vec<&str> = body.split('|').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(err("expected `i action objs | slot=value ... | cost=c`".into()));
        }
        let mut head = parts[0].split_whitespace();
        let idx: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err("missing step index".into()))?;
        if idx != steps.len() {
            return Err(err(format!("step index {idx}, expected {}", steps.len())));
        }
        let label = head.collect::<Vec<_>>().join(" ");
        let action = model
            .action_by_label(&label)
            .ok_or_else(|| err(format!("unknown action {label:?}")))?;
        let mut theta = vec![0.0; model.t()];
        let act = &model.actions[action];
        let mut seen = Vec::new();
        for kv in parts[1].split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| err(format!("expected slot=value, found {kv:?}")))?;
            let j = model
                .slot(k)
                .filter(|j| act.slots.contains(j))
                .ok_or_else(|| err(format!("action {label} has no parameter {k}")))?;
            let v: f64 = v.parse().map_err(|_| err(format!("bad number {v:?}")))?;
            if !v.is_finite() {
                return Err(err(format!("non-finite value for {k}")));
            }
            theta[j] = v;
            seen.push(j);
        }
        if let Some(&j) = act.slots.iter().find(|j| !seen.contains(j)) {
            return Err(err(format!("missing value for {}", model.slots[j])));
        }
        if !parts[2].starts_with("cost=") {
            return Err(err("expected cost=".into()));
        }
        steps.push(PlanStep { action, theta });
    }
    if !ended {
        return Err(PlanFileError { line: text.lines().count() + 1, msg: "missing end line".into() });
    }
    Ok(Plan { steps })
}
