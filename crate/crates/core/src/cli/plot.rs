//! SVG trajectory plots.

use std::fmt::Write;

use crate::engine::{step, Plan, State};
use crate::geometry::Point;
use crate::grounder::GroundedModel;

/// Positions of the first position pair: the start, then one per plan step.
/// Replay stops early at a numeric fault.
pub fn trajectory(model: &GroundedModel, plan: &Plan) -> Vec<Point> {
    let Some(&pair) = model.position_pairs.first() else { return Vec::new() };
    let mut s = State::initial(model);
    let mut out = vec![s.position(pair)];
    for st in &plan.steps {
        match step(model, &s, st.action, &st.theta) {
            Ok(n) => s = n,
            Err(_) => break,
        }
        out.push(s.position(pair));
    }
    out
}

/// Regions (objectives shaded, obstacles filled), the path as one polyline,
/// the start as a square and the stop of each movement as a red dot.
pub fn render_svg(model: &GroundedModel, plan: &Plan) -> String {
    let path = trajectory(model, plan);
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let pts = model.regions.iter().flat_map(|r| r.vertices.iter().copied()).chain(path.iter().copied());
    for p in pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if !lo.x.is_finite() {
        (lo, hi) = (Point::new(0.0, 0.0), Point::new(1.0, 1.0));
    }
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1.0);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let r = 0.006 * w.max(h);
    // flip y so the plot reads like a map
    let xy = |p: Point| format!("{:.3},{:.3}", p.x, lo.y + hi.y - p.y);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}" width="600" height="{:.0}">"#,
        lo.x - pad,
        lo.y - pad,
        w,
        h,
        600.0 * h / w
    );
    let _ = writeln!(out, r#"<rect x="{:.3}" y="{:.3}" width="{w:.3}" height="{h:.3}" fill="white"/>"#, lo.x - pad, lo.y - pad);
    for reg in &model.regions {
        let ring: Vec<String> = reg.vertices.iter().map(|&p| xy(p)).collect();
        let style = if reg.is_obstacle {
            r##"class="obstacle" fill="#444""##
        } else if reg.is_objective {
            r##"class="objective" fill="#6a6" fill-opacity="0.35" stroke="#363""##
        } else {
            r##"class="region" fill="none" stroke="#999""##
        };
        let _ = writeln!(out, r#"<polygon {style} stroke-width="{:.3}" points="{}"><title>{}</title></polygon>"#, r / 3.0, ring.join(" "), reg.name);
    }
    if !path.is_empty() {
        let line: Vec<String> = path.iter().map(|&p| xy(p)).collect();
        let _ = writeln!(
            out,
            r##"<polyline class="path" fill="none" stroke="#237" stroke-width="{:.3}" points="{}"/>"##,
            r / 2.0,
            line.join(" ")
        );
        let s = path[0];
        let _ = writeln!(
            out,
            r##"<rect class="start" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#237"/>"##,
            s.x - 1.5 * r,
            lo.y + hi.y - s.y - 1.5 * r,
            3.0 * r,
            3.0 * r
        );
        for (st, p) in plan.steps.iter().zip(&path[1..]) {
            if model.actions.get(st.action).is_some_and(|a| !a.is_logical()) {
                let _ = writeln!(
                    out,
                    r#"<circle class="stop" cx="{:.3}" cy="{:.3}" r="{r:.3}" fill="red"/>"#,
                    p.x,
                    lo.y + hi.y - p.y
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
