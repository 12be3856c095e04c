use mxplan::autodiff::{backward, frozen_loss, rollout_record, stop_loss, update_params, Hyper, Outcome, ParamGrid};
use mxplan::benchgen::{generate, Family, GenSpec};
use mxplan::corpus;
use mxplan::grounder::{ground, GroundedModel};
use mxplan::pddlx::{parse_domain, parse_problem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn auv(start: (f64, f64), regions: &str, objects: &str, goal: &str) -> GroundedModel {
    let dom = corpus::AUV.domain_def();
    let src = format!(
        "(define (problem t) (:domain auv) (:objects v0 - vehicle {objects} - region)
           (:init (= (location-x v0) {}) (= (location-y v0) {}))
           (:goal (and {goal})) (:regions {regions})
           (:parameters-bounds (<= -10 ?vel_x 10) (<= -10 ?vel_y 10) (<= 0 ?duration 1)))",
        start.0, start.1
    );
    ground(&dom, &parse_problem(&src, &dom).unwrap()).unwrap()
}

fn grid(rows: &[[f64; 3]]) -> ParamGrid {
    ParamGrid { n: rows.len(), t: 3, data: rows.iter().flatten().copied().collect() }
}

fn no_obs() -> impl FnMut(&mxplan::heuristic::RelaxedGraph) {
    |_| {}
}

#[test]
fn bound_loss_of_single_overshoot() {
    let dom = parse_domain(
        "(define (domain line) (:requirements :numeric-fluents :real-parameters)
           (:functions (x))
           (:action push :parameters (?d - real) :effect (and (increase (x) ?d))))",
    )
    .unwrap();
    // start below the goal interval
    let prob = parse_problem(
        "(define (problem p) (:domain line) (:init (= (x) -1)) (:goal (and (<= 0 (x) 4)))
           (:parameters-bounds (<= -10 ?d 10)))",
        &dom,
    )
    .unwrap();
    let m = ground(&dom, &prob).unwrap();
    assert_eq!(m.t(), 1);
    let theta = ParamGrid { n: 1, t: 1, data: vec![6.0] };
    let r = rollout_record(&m, &theta, &Hyper::default(), &mut no_obs());
    assert_eq!(r.trace[0].values, vec![5.0]);
    assert_eq!((r.trace[0].lower[0], r.trace[0].upper[0]), (0.0, 4.0));
    // ||relu(5 - 4)|| + ||relu(0 - 5)||
    assert_eq!(r.loss.lb[0], 1.0);
    assert_eq!(r.loss.psi[0], 0.0);
    assert_eq!(r.outcome, Outcome::Exhausted);
    assert_eq!(r.loss.total, 1.0);
}

#[test]
fn inside_bounds_costs_only_path_length() {
    let m = auv((2.0, 1.0), "(rect A 5 5 9 9) (objective A)", "A", "(sampled A)");
    let theta = grid(&[[3.0, 4.0, 1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
    let r = rollout_record(&m, &theta, &Hyper::default(), &mut no_obs());
    assert!(r.reached_goal());
    assert_eq!(r.loss.sum_lb(), 0.0);
    assert_eq!(r.loss.sum_lo(), 0.0);
    // the glide, then take-sample which has no displacement
    assert!((r.loss.total - 100.0 * 5.0).abs() < 1e-6);
}

#[test]
fn psi_gradient_matches_symbolic() {
    let m = auv((1.0, 1.0), "(rect A 4 5 5 6) (objective A)", "A", "(sampled A)");
    let hyper = Hyper { w1: 0.0, w2: 0.0, w3: 1.0, eps: 0.5 };
    let r = rollout_record(&m, &grid(&[[3.0, 4.0, 1.0]]), &hyper, &mut no_obs());
    let g = backward(&r).unwrap();
    // d/dvx sqrt((vx d)^2 + (vy d)^2) = vx d^2 / psi, d/dd = (vx^2 + vy^2) d / psi
    assert!((g.data[0] - 3.0 / 5.0).abs() < 1e-9);
    assert!((g.data[1] - 4.0 / 5.0).abs() < 1e-9);
    assert!((g.data[2] - 5.0).abs() < 1e-9);
}

#[test]
fn logical_step_leaves_slots_at_zero_gradient() {
    let m = auv((5.0, 5.0), "(rect A 4 4 6 6) (objective A)", "A", "(sampled A)");
    let r = rollout_record(&m, &grid(&[[2.0, 2.0, 0.5], [1.0, 1.0, 1.0]]), &Hyper::default(), &mut no_obs());
    assert!(r.reached_goal());
    assert_eq!(r.plan.steps.len(), 1);
    assert!(m.actions[r.plan.steps[0].action].is_logical());
    assert_eq!(backward(&r).unwrap().data, vec![0.0; 6]);
}

#[test]
fn crossing_obstacle_loss() {
    let m = auv((0.0, 0.0), "(rect A 20 20 30 30) (rect O 4 4 6 6) (objective A) (obstacle O)", "A O", "(sampled A)");
    let r = rollout_record(&m, &grid(&[[10.0, 10.0, 1.0]]), &Hyper::default(), &mut no_obs());
    assert_eq!(r.trace[0].values, vec![10.0, 10.0]);
    assert_eq!(r.trace[0].targets.len(), 1);
    // the cone from the origin touches (6,4) and (4,6), equally far from (10,10);
    // either target sits eps off its ray on the outer side
    let (v, len) = ((6.0_f64, 4.0_f64), 52.0_f64.sqrt());
    let y = (v.0 + 0.5 * v.1 / len, v.1 - 0.5 * v.0 / len);
    let want = ((10.0 - y.0).powi(2) + (10.0 - y.1).powi(2)).sqrt();
    assert!((r.loss.lo[0] - want).abs() < 1e-9, "{} vs {want}", r.loss.lo[0]);
}

#[test]
fn update_step_and_clamp() {
    let m = auv((1.0, 1.0), "(rect A 5 5 9 9) (objective A)", "A", "(sampled A)");
    let mut theta = grid(&[[0.5, 5.0, 0.5]]);
    let g = grid(&[[100.0, -20000.0, 0.0]]);
    update_params(&mut theta, &g, 0.001, &m);
    assert!((theta.data[0] - 0.4).abs() < 1e-12);
    assert_eq!(theta.data[1], 10.0);
    assert_eq!(theta.data[2], 0.5);
}

#[test]
fn stop_loss_cases() {
    let hyper = Hyper::default();
    let m = auv((2.0, 1.0), "(rect A 5 5 9 9) (objective A)", "A", "(sampled A)");
    let good = grid(&[[3.0, 4.0, 1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
    assert_eq!(stop_loss(&m, &rollout_record(&m, &good, &hyper, &mut no_obs())), 0.0);
    let short = grid(&[[1.0, 1.0, 1.0]]);
    let r = rollout_record(&m, &short, &hyper, &mut no_obs());
    assert_eq!(r.outcome, Outcome::Exhausted);
    assert_eq!(stop_loss(&m, &r), f64::INFINITY);

    // the diagonal to A touches the obstacle's corner at (5,5)
    let m = auv((1.0, 1.0), "(rect A 10 10 12 12) (rect O 5 0 7 5) (objective A) (obstacle O)", "A O", "(sampled A)");
    let r = rollout_record(&m, &grid(&[[10.0, 10.0, 1.0], [0.0; 3], [0.0; 3]]), &hyper, &mut no_obs());
    assert!(r.reached_goal());
    assert!(r.loss.sum_lo() > 0.0);
    assert_eq!(stop_loss(&m, &r), f64::INFINITY);
}

#[test]
fn deadend_rollout_pads_with_last_bound_loss() {
    // the vehicle stops inside the obstacle, collides and can no longer glide
    let m = auv((1.0, 1.0), "(rect A 30 30 40 40) (rect O 4 4 8 8) (objective A) (obstacle O)", "A O", "(sampled A)");
    let theta = grid(&[[5.0, 5.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]]);
    let r = rollout_record(&m, &theta, &Hyper::default(), &mut no_obs());
    assert_eq!(r.outcome, Outcome::Deadend { step: 1 });
    assert!((r.loss.tail - 3.0 * r.loss.lb[0]).abs() < 1e-9);
    let steps: f64 = r.loss.step.iter().sum();
    assert!((r.loss.total - steps - r.loss.tail).abs() < 1e-9);
}

fn random_instance(rng: &mut ChaCha8Rng, seed: u64) -> GroundedModel {
    let mut spec = GenSpec::new(Family::Auv, seed);
    spec.map_side = 50;
    spec.objectives = rng.gen_range(1..=2);
    spec.objective_side = (5, 10);
    spec.obstacles = rng.gen_range(0..=2);
    spec.obstacle_side = (5, 15);
    spec.screen_retries = 0;
    let g = generate(&spec).unwrap();
    ground(&corpus::AUV.domain_def(), &g.problem).unwrap()
}

#[test]
fn reverse_mode_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for case in 0..200 {
        let m = random_instance(&mut rng, case);
        let n = rng.gen_range(1..=20);
        let mut theta = ParamGrid::zeros(n, m.t());
        for v in theta.data.iter_mut().enumerate() {
            let j = v.0 % m.t();
            *v.1 = rng.gen_range(m.lower[j]..=m.upper[j]);
        }
        let hyper = Hyper { w1: rng.gen_range(0.1..2.0), w2: rng.gen_range(0.1..2.0), w3: rng.gen_range(0.1..2.0), eps: 0.5 };
        let r = rollout_record(&m, &theta, &hyper, &mut no_obs());
        let g = backward(&r).unwrap();
        assert!((frozen_loss(&m, &r, &theta, &hyper) - r.loss.total).abs() <= 1e-9 * r.loss.total.max(1.0));
        for i in 0..theta.data.len() {
            if g.data[i].abs() <= 1e-8 {
                continue;
            }
            let mut up = theta.clone();
            up.data[i] += h;
            let mut down = theta.clone();
            down.data[i] -= h;
            let fd = (frozen_loss(&m, &r, &up, &hyper) - frozen_loss(&m, &r, &down, &hyper)) / (2.0 * h);
            let rel = (g.data[i] - fd).abs() / g.data[i].abs().max(fd.abs());
            worst = worst.max(rel);
            checked += 1;
            assert!(rel <= 1e-4, "case {case} coord {i}: reverse {} vs fd {fd}", g.data[i]);
        }
    }
    assert!(checked > 1000, "only {checked} coordinates checked");
    eprintln!("max relative error {worst:.2e} over {checked} coordinates");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clamp_is_idempotent(vals in prop::collection::vec(-50.0..50.0_f64, 6)) {
        let m = auv((1.0, 1.0), "(rect A 5 5 9 9) (objective A)", "A", "(sampled A)");
        let mut once = ParamGrid { n: 2, t: 3, data: vals };
        let zero = ParamGrid::zeros(2, 3);
        update_params(&mut once, &zero, 0.001, &m);
        prop_assert!(once.within_bounds(&m));
        let mut twice = once.clone();
        update_params(&mut twice, &zero, 0.001, &m);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn loss_terms_are_non_negative(seed in 0u64..1000, n in 1usize..15) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_instance(&mut rng, seed);
        let mut theta = ParamGrid::zeros(n, m.t());
        for (i, v) in theta.data.iter_mut().enumerate() {
            let j = i % m.t();
            *v = rng.gen_range(m.lower[j]..=m.upper[j]);
        }
        let hyper = Hyper::default();
        let r = rollout_record(&m, &theta, &hyper, &mut |_| {});
        for i in 0..r.loss.step.len() {
            prop_assert!(r.loss.lb[i] >= 0.0 && r.loss.lo[i] >= 0.0 && r.loss.psi[i] >= 0.0);
            let li = hyper.w1 * r.loss.lb[i] + hyper.w2 * r.loss.lo[i] + hyper.w3 * r.loss.psi[i];
            prop_assert!((r.loss.step[i] - li).abs() <= 1e-9 * li.max(1.0));
            // zero bound loss exactly when the next values sit inside the bounds
            let st = &r.trace[i];
            let inside = st.values.iter().enumerate().all(|(k, &v)| st.lower[k] <= v && v <= st.upper[k]);
            prop_assert_eq!(r.loss.lb[i] == 0.0, inside);
        }
    }
}
