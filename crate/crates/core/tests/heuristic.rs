use std::time::Instant;

use mxplan::corpus;
use mxplan::engine::State;
use mxplan::grounder::{ground, GroundedModel};
use mxplan::heuristic::*;
use mxplan::pddlx::{parse_domain, parse_problem};

fn toy() -> GroundedModel {
    let (d, p) = corpus::TOY.parse().unwrap();
    ground(&d, &p).unwrap()
}

#[test]
fn toy_h_is_three() {
    let t = Instant::now();
    let m = toy();
    let s = State::initial(&m);
    let params = param_box(&m.lower, &m.upper);
    let g = build_and_extend(&m, &RelaxedState::from_state(&s), &params).unwrap();
    assert_eq!(g.h(), 3);
    let nav = m.action_by_label("navigate").unwrap();
    let mv = m.action_by_label("move p1 A B").unwrap();
    let mut acts: Vec<usize> = g.layers.iter().flatten().map(|e| e.action).collect();
    acts.sort();
    assert_eq!(acts, vec![nav, nav, mv]);
    assert!(g.intervals_monotone() && g.props_monotone());
    assert!(t.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn toy_selection() {
    let m = toy();
    let s = State::initial(&m);
    let params = param_box(&m.lower, &m.upper);
    let mut count = 0;
    let sel = select_action(&m, &s, &vec![0.0; m.t()], &params, &mut |_| count += 1).unwrap();
    assert_eq!(sel.h, 3);
    assert_eq!(m.actions[sel.action].schema, "pick-up");
    assert_eq!(count, 2);
    // a positive step lowers the estimate for navigate
    let sel = select_action(&m, &s, &[1.0], &params, &mut |_| {}).unwrap();
    assert_eq!(m.actions[sel.action].schema, "navigate");
    assert_eq!(sel.h, 2);
    let x = m.fluent_named("x", &[]).unwrap();
    assert_eq!((sel.lower[x], sel.upper[x]), (1.5, 2.0));
}

#[test]
fn relaxed_successor_of_navigate() {
    let m = toy();
    let s = State::initial(&m);
    let r = relaxed_successor(&m, &s, m.action_by_label("navigate").unwrap(), &[1.0]).unwrap();
    assert_eq!(r.values, vec![1.0]);
    let r = relaxed_successor(&m, &s, m.action_by_label("pick-up p1 A").unwrap(), &[0.0]).unwrap();
    let holding = m.prop_named("holding", &["p1"]).unwrap();
    let at_a = m.prop_named("at", &["p1", "A"]).unwrap();
    assert!(r.props[holding] && r.props[at_a]);
}

#[test]
fn goal_satisfied_gives_end() {
    let m = toy();
    let mut s = State::initial(&m);
    s.props[m.prop_named("at", &["p1", "B"]).unwrap()] = 1;
    let g = build_and_extend(&m, &RelaxedState::from_state(&s), &param_box(&m.lower, &m.upper)).unwrap();
    assert_eq!(g.h(), 0);
    let sel = select_action(&m, &s, &[0.0], &param_box(&m.lower, &m.upper), &mut |_| {}).unwrap();
    assert_eq!(sel.action, m.end_index());
    assert!(sel.upper.iter().all(|u| u.is_infinite()) && sel.lower.iter().all(|l| l.is_infinite()));
}

#[test]
fn unreachable_goal() {
    let src = "(define (domain d) (:predicates (p) (q)) (:action a :effect (p)))";
    let d = parse_domain(src).unwrap();
    let p = parse_problem("(define (problem x) (:domain d) (:init) (:goal (and (q))))", &d).unwrap();
    let m = ground(&d, &p).unwrap();
    let s = State::initial(&m);
    assert_eq!(build_and_extend(&m, &RelaxedState::from_state(&s), &[]), Err(Unreachable));
    assert_eq!(select_action(&m, &s, &[], &[], &mut |_| {}), Err(Deadend));
}

#[test]
fn numeric_goal_wrong_direction_is_unreachable() {
    let src = "(define (domain d) (:functions (v)) (:action up :parameters (?k - real) :effect (increase (v) ?k)))";
    let d = parse_domain(src).unwrap();
    let p = parse_problem(
        "(define (problem x) (:domain d) (:init (= (v) 0)) (:goal (and (<= (v) -5))) (:parameters-bounds (<= 0 ?k 1)))",
        &d,
    )
    .unwrap();
    let m = ground(&d, &p).unwrap();
    let s = State::initial(&m);
    assert!(build_and_extend(&m, &RelaxedState::from_state(&s), &param_box(&m.lower, &m.upper)).is_err());
}

#[test]
fn bounds_pick_nearest_midpoint() {
    let src = "(define (domain d) (:predicates (g1) (g2)) (:functions (v))
        (:action up :parameters (?k - real) :effect (increase (v) ?k))
        (:action a1 :precondition (<= 2 (v) 4) :effect (g1))
        (:action a2 :precondition (<= 10 (v) 12) :effect (g2)))";
    let d = parse_domain(src).unwrap();
    let p = parse_problem(
        "(define (problem x) (:domain d) (:init (= (v) 0)) (:goal (and (g1) (g2))) (:parameters-bounds (<= -1 ?k 1)))",
        &d,
    )
    .unwrap();
    let m = ground(&d, &p).unwrap();
    let s = State::initial(&m);
    let params = param_box(&m.lower, &m.upper);
    let g = build_and_extend(&m, &RelaxedState::from_state(&s), &params).unwrap();
    let (lo, hi) = bound_vectors(&m, &g, &s.values);
    assert_eq!((lo[0], hi[0]), (2.0, 4.0));
    // 2 + 10 copies of `up` to reach 10 from 0 with unit steps
    assert_eq!(g.h(), 12);
    assert!(g.intervals_monotone());
}

#[test]
fn auv_graph_region_repair() {
    let (d, p) = corpus::AUV.parse().unwrap();
    let m = ground(&d, &p).unwrap();
    let s = State::initial(&m);
    let params = param_box(&m.lower, &m.upper);
    let g = build_and_extend(&m, &RelaxedState::from_state(&s), &params).unwrap();
    // five samples plus glides to reach R5 at (80, 70) from (1, 1) with reach 10 per copy: 1 + 8 * 10 >= 80
    assert_eq!(g.h(), 5 + 8);
    let text = g.dump(&m);
    assert!(text.contains("glide v0*"));
}
