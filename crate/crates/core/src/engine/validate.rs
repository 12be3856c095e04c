use serde::Serialize;

use super::{action_cost, applicable, goal_satisfied, step, Plan, State};
use crate::grounder::GroundedModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    ParamOutOfBounds { slot: String, value: f64 },
    NotApplicable,
    ObstacleCrossed { region: String },
    NumericFault,
    GoalNotReached,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Verdict {
    Valid { mu: usize, total_cost: f64 },
    /// `step` is the 0-based index of the failing step; `mu` for goal failures.
    Invalid { step: usize, violation: Violation },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }
}

/// Replays `plan` from the initial state with exact semantics.
pub fn validate(model: &GroundedModel, plan: &Plan) -> Verdict {
    let mut s = State::initial(model);
    let mut total = 0.0;
    for (i, st) in plan.steps.iter().enumerate() {
        let bad = |violation| Verdict::Invalid { step: i, violation };
        if st.action >= model.x() {
            return bad(Violation::NotApplicable);
        }
        let act = &model.actions[st.action];
        for &j in &act.slots {
            let v = st.theta[j];
            if !(model.lower[j] <= v && v <= model.upper[j]) {
                return bad(Violation::ParamOutOfBounds { slot: model.slots[j].clone(), value: v });
            }
        }
        if !applicable(model, &s, st.action, &st.theta) {
            return bad(Violation::NotApplicable);
        }
        let next = match step(model, &s, st.action, &st.theta) {
            Ok(n) => n,
            Err(_) => return bad(Violation::NumericFault),
        };
        for &pair in &model.position_pairs {
            if !(act.affects(pair.0) || act.affects(pair.1)) {
                continue;
            }
            let (p, q) = (s.position(pair), next.position(pair));
            if let Some((_, r)) = model.obstacles().find(|(_, r)| r.segment_intersects(p, q)) {
                return bad(Violation::ObstacleCrossed { region: r.name.clone() });
            }
        }
        total += action_cost(model, st.action, &st.theta, &s);
        s = next;
    }
    if !goal_satisfied(model, &s) {
        return Verdict::Invalid { step: plan.mu(), violation: Violation::GoalNotReached };
    }
    Verdict::Valid { mu: plan.mu(), total_cost: total }
}
