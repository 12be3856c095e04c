//! Acceptance checks. Prints one PASS or FAIL line per criterion and exits
//! non-zero if any fails. Set `ACCEPTANCE_ONLY=4,8` to run a subset.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use mxplan::autodiff::{backward, frozen_loss, rollout_record, Hyper, ParamGrid};
use mxplan::benchgen::{generate, Family, GenSpec};
use mxplan::corpus;
use mxplan::engine::{step, validate, State, Verdict};
use mxplan::geometry::Point;
use mxplan::grounder::{ground, GroundedModel};
use mxplan::heuristic::{build_and_extend, param_box, RelaxedGraph, RelaxedState};
use mxplan::pddlx::{parse_domain, parse_problem, print_domain, print_problem};
use mxplan::planner::{solve, solve_baseline, solve_observed, IterationRecord, Observer, PlannerConfig, PlannerResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check { pass, detail: detail.into() }
}

fn model(e: corpus::Entry) -> GroundedModel {
    let (d, p) = e.parse().unwrap();
    ground(&d, &p).unwrap()
}

fn auv_instance(seed: u64, objectives: usize, obstacles: usize) -> GroundedModel {
    let spec = GenSpec {
        map_side: 50,
        objectives,
        objective_side: (5, 10),
        obstacles,
        obstacle_side: (5, 15),
        ..GenSpec::new(Family::Auv, seed)
    };
    let g = generate(&spec).unwrap();
    ground(&Family::Auv.entry().domain_def(), &g.problem).unwrap()
}

fn c1_toy_heuristic() -> Check {
    let t = Instant::now();
    let m = model(corpus::TOY);
    let s = State::initial(&m);
    let g = build_and_extend(&m, &RelaxedState::from_state(&s), &param_box(&m.lower, &m.upper)).unwrap();
    let secs = t.elapsed().as_secs_f64();
    check(g.h() == 3 && secs < 1.0, format!("h = {} (want 3) in {secs:.3}s", g.h()))
}

fn c2_transition() -> Check {
    let t = Instant::now();
    let m = model(corpus::OCEAN);
    let a = m.action_by_label("ROV-Navigate ship ROV").unwrap();
    let mut theta = vec![0.0; m.t()];
    for (k, v) in [("vx", 2.0), ("vy", -2.0), ("d", 1.0)] {
        theta[m.slot(k).unwrap()] = v;
    }
    let s = State::initial(&m);
    let x = m.fluent_named("location-x", &["ROV"]).unwrap();
    let next = step(&m, &s, a, &theta).unwrap();
    let secs = t.elapsed().as_secs_f64();
    check(
        s.values[x] == 0.0 && next.values[x] == 2.0 && secs < 1.0,
        format!("location-x {} -> {} (want 0 -> 2) in {secs:.3}s", s.values[x], next.values[x]),
    )
}

fn c3_one_hot() -> Check {
    let m = model(corpus::TOY);
    let pick = m.action_by_label("pick-up p1 A").unwrap();
    let nav = m.action_by_label("navigate").unwrap();
    let (a, b) = (m.one_hot(pick), m.one_hot(nav));
    check(
        m.x() == 5 && a == [0, 0, 0, 0, 1] && b == [1, 0, 0, 0, 0],
        format!("X = {}, pick-up p1 A = {a:?}, navigate = {b:?}", m.x()),
    )
}

#[derive(Default)]
struct SuiteWatch<'m> {
    model: Option<&'m GroundedModel>,
    graphs: usize,
    narrowing: usize,
    iterations: usize,
    out_of_bounds: usize,
}

impl Observer for SuiteWatch<'_> {
    fn on_graph(&mut self, g: &RelaxedGraph) {
        self.graphs += 1;
        if !g.intervals_monotone() {
            self.narrowing += 1;
        }
    }

    fn on_iteration(&mut self, rec: &IterationRecord<'_>) {
        self.iterations += 1;
        if !rec.theta.within_bounds(self.model.unwrap()) {
            self.out_of_bounds += 1;
        }
    }
}

/// Collision check by dense sampling, independent of the validator.
fn sampled_collisions(m: &GroundedModel, r: &PlannerResult) -> usize {
    let mut s = State::initial(m);
    let mut hits = 0;
    for st in &r.plan.steps {
        let next = step(m, &s, st.action, &st.theta).unwrap();
        for &pair in &m.position_pairs {
            let (p, q) = (s.position(pair), next.position(pair));
            let inside = (0..=2000).any(|k| {
                let t = k as f64 / 2000.0;
                let pt = Point::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y));
                m.obstacles().any(|(_, o)| o.contains(pt))
            });
            hits += usize::from(inside);
        }
        s = next;
    }
    hits
}

struct Suite {
    /// Solved counts at N = 30 and at the default N.
    solved: usize,
    solved_default: usize,
    invalid: usize,
    collisions: usize,
    graphs: usize,
    narrowing: usize,
    iterations: usize,
    out_of_bounds: usize,
    secs: f64,
}

/// 50 fuzzed instances, shared by criteria 4, 6 and 7. Each runs at N = 30 with
/// a 120 s cutoff and again at the default N, since at N = 30 the path-length
/// weight holds every step still and nothing gets solved.
fn soundness_suite() -> Suite {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Suite {
        solved: 0,
        solved_default: 0,
        invalid: 0,
        collisions: 0,
        graphs: 0,
        narrowing: 0,
        iterations: 0,
        out_of_bounds: 0,
        secs: 0.0,
    };
    for i in 0..50 {
        let m = auv_instance(1000 + i, rng.gen_range(1..=2), rng.gen_range(0..=2));
        // the extra pass is only there to produce solved plans, so it gets a shorter cutoff
        for (steps, cutoff_secs) in [(30, 120.0), (PlannerConfig::default().steps, 20.0)] {
            let cfg = PlannerConfig { steps, cutoff_secs, seed: i, ..Default::default() };
            let mut w = SuiteWatch { model: Some(&m), ..Default::default() };
            let r = solve_observed(&m, &cfg, &mut w);
            out.graphs += w.graphs;
            out.narrowing += w.narrowing;
            out.iterations += w.iterations;
            out.out_of_bounds += w.out_of_bounds;
            if r.status.is_solved() {
                if steps == 30 {
                    out.solved += 1;
                } else {
                    out.solved_default += 1;
                }
                out.invalid += usize::from(!validate(&m, &r.plan).is_valid());
                out.collisions += sampled_collisions(&m, &r);
            }
        }
    }
    out.secs = t.elapsed().as_secs_f64();
    out
}

fn c4_soundness(s: &Suite) -> Check {
    check(
        s.invalid == 0 && s.collisions == 0,
        format!(
            "solved {}/50 at N=30 and {}/50 at N={}, {} invalid, {} sampled obstacle hits, {:.0}s",
            s.solved,
            s.solved_default,
            PlannerConfig::default().steps,
            s.invalid,
            s.collisions,
            s.secs
        ),
    )
}

fn c5_gradients() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-5;
    let (mut worst, mut coords): (f64, usize) = (0.0, 0);
    for case in 0..200 {
        let spec = GenSpec {
            map_side: 50,
            objectives: rng.gen_range(1..=2),
            objective_side: (5, 10),
            obstacles: rng.gen_range(0..=2),
            obstacle_side: (5, 15),
            screen_retries: 0,
            ..GenSpec::new(Family::Auv, 500 + case)
        };
        let m = ground(&Family::Auv.entry().domain_def(), &generate(&spec).unwrap().problem).unwrap();
        let n = rng.gen_range(1..=30);
        let mut theta = ParamGrid::zeros(n, m.t());
        for (i, v) in theta.data.iter_mut().enumerate() {
            let j = i % m.t();
            *v = rng.gen_range(m.lower[j]..=m.upper[j]);
        }
        let hyper = Hyper { w1: 1.0, w2: 1.0, w3: rng.gen_range(0.5..100.0), eps: 0.5 };
        let r = rollout_record(&m, &theta, &hyper, &mut |_| {});
        let Ok(g) = backward(&r) else { return check(false, format!("case {case}: gradient fault")) };
        for i in 0..theta.data.len() {
            if g.data[i].abs() <= 1e-8 {
                continue;
            }
            let (mut up, mut down) = (theta.clone(), theta.clone());
            up.data[i] += h;
            down.data[i] -= h;
            let fd = (frozen_loss(&m, &r, &up, &hyper) - frozen_loss(&m, &r, &down, &hyper)) / (2.0 * h);
            worst = worst.max((g.data[i] - fd).abs() / g.data[i].abs().max(fd.abs()));
            coords += 1;
        }
    }
    check(worst <= 1e-4 && coords > 0, format!("max relative error {worst:.2e} over {coords} coordinates (limit 1e-4)"))
}

fn c6_monotone(s: &Suite) -> Check {
    check(s.narrowing == 0 && s.graphs > 0, format!("{} narrowing graphs of {}", s.narrowing, s.graphs))
}

fn c7_clamp(s: &Suite) -> Check {
    check(s.out_of_bounds == 0 && s.iterations > 0, format!("{} out-of-bounds of {} iterations", s.out_of_bounds, s.iterations))
}

fn cost(r: &PlannerResult, m: &GroundedModel) -> Option<f64> {
    match (r.status.is_solved(), validate(m, &r.plan)) {
        (true, Verdict::Valid { total_cost, .. }) => Some(total_cost),
        _ => None,
    }
}

fn c8_cost_direction() -> Check {
    let t = Instant::now();
    let (mut wins, mut common, mut mx_sum, mut base_sum) = (0, 0, 0.0, 0.0);
    let mut cells = Vec::new();
    for seed in 0..10 {
        let m = auv_instance(seed, 1, 1 + (seed % 2) as usize);
        let cfg = PlannerConfig { cutoff_secs: 150.0, seed, ..Default::default() };
        let mx = cost(&solve(&m, &cfg), &m);
        let base = cost(&solve_baseline(&m, 10.0, &cfg), &m);
        // an unsolved baseline counts as infinite cost
        if let Some(c) = mx {
            if base.map_or(true, |b| c <= b) {
                wins += 1;
            }
        }
        if let (Some(a), Some(b)) = (mx, base) {
            common += 1;
            mx_sum += a;
            base_sum += b;
        }
        let f = |c: Option<f64>| c.map_or("-".to_string(), |v| format!("{v:.1}"));
        cells.push(format!("{}/{}", f(mx), f(base)));
    }
    let secs = t.elapsed().as_secs_f64();
    let (am, ab) = (mx_sum / common as f64, base_sum / common as f64);
    check(
        wins >= 8 && common > 0 && ab > am && secs <= 1800.0,
        format!(
            "mx <= baseline on {wins}/10 (need 8), averages over {common} common mx {am:.2} baseline {ab:.2}, {secs:.0}s [{}]",
            cells.join(" ")
        ),
    )
}

fn c9_overshoot() -> Check {
    let dom = corpus::AUV.domain_def();
    // lattice x, y from 1: step 20 gives 21 and 41, both outside [23, 29]; step 5 gives 26
    let p = parse_problem(
        "(define (problem p) (:domain auv) (:objects v0 - vehicle A - region)
           (:init (= (location-x v0) 1) (= (location-y v0) 1)) (:goal (and (sampled A)))
           (:regions (rect A 23 23 29 29) (objective A))
           (:parameters-bounds (<= -20 ?vel_x 20) (<= -20 ?vel_y 20) (<= 0 ?duration 1)))",
        &dom,
    )
    .unwrap();
    let m = ground(&dom, &p).unwrap();
    let cfg = PlannerConfig { cutoff_secs: 30.0, ..Default::default() };
    let coarse = cost(&solve_baseline(&m, 20.0, &cfg), &m);
    let fine = cost(&solve_baseline(&m, 5.0, &cfg), &m);
    let pass = match (fine, coarse) {
        (Some(f), Some(c)) => c > f,
        (Some(_), None) => true,
        _ => false,
    };
    check(pass, format!("delta 5 cost {fine:?}, delta 20 cost {coarse:?}"))
}

fn c10_w3_trend() -> Check {
    let (mut hi_sum, mut lo_sum, mut both) = (0.0, 0.0, 0);
    let mut cells = Vec::new();
    for seed in 0..5 {
        let m = auv_instance(seed, 1, 1 + (seed % 2) as usize);
        let run = |w3| cost(&solve(&m, &PlannerConfig { w3, cutoff_secs: 60.0, seed, ..Default::default() }), &m);
        let (hi, lo) = (run(100.0), run(0.01));
        if let (Some(a), Some(b)) = (hi, lo) {
            both += 1;
            hi_sum += a;
            lo_sum += b;
        }
        cells.push(format!("{hi:.1?}/{lo:.1?}"));
    }
    let (a, b) = (hi_sum / both as f64, lo_sum / both as f64);
    check(both > 0 && a <= b, format!("average over {both} solved by both: w3=100 {a:.2}, w3=0.01 {b:.2} [{}]", cells.join(" ")))
}

fn c11_corpus() -> Check {
    let mut notes = Vec::new();
    let mut pass = true;
    for (e, want) in [(corpus::AUV, (2, 2, 2)), (corpus::TAXI, (3, 2, 3)), (corpus::ROVER, (7, 22, 9))] {
        let d = parse_domain(e.domain).unwrap();
        let p = parse_problem(e.problem, &d).unwrap();
        let trip = parse_domain(&print_domain(&d)).as_ref() == Ok(&d)
            && parse_problem(&print_problem(&p), &d).as_ref() == Ok(&p);
        let grounds = ground(&d, &p).is_ok();
        let got = (d.types.len(), d.predicates.len(), d.actions.len());
        pass &= trip && grounds && got == want;
        notes.push(format!("{} {}/{}/{} round-trip {trip} ground {grounds}", e.name, got.0, got.1, got.2));
    }
    check(pass, notes.join(", "))
}

fn run(n: usize, name: &str, f: impl FnOnce() -> Check) -> bool {
    let t = Instant::now();
    let c = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        check(false, format!("panicked: {}", msg.unwrap_or_default()))
    });
    println!(
        "criterion {n:>2} {name}: {} ({}; {:.1}s)",
        if c.pass { "PASS" } else { "FAIL" },
        c.detail,
        t.elapsed().as_secs_f64()
    );
    c.pass
}

fn main() {
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let want = |n: usize| only.as_ref().map_or(true, |o| o.contains(&n));
    let mut ok = true;
    if want(1) {
        ok &= run(1, "toy heuristic h = 3", c1_toy_heuristic);
    }
    if want(2) {
        ok &= run(2, "ROV-Navigate transition", c2_transition);
    }
    if want(3) {
        ok &= run(3, "one-hot encoding", c3_one_hot);
    }
    if want(4) || want(6) || want(7) {
        let suite = catch_unwind(soundness_suite);
        match suite {
            Ok(s) => {
                if want(4) {
                    ok &= run(4, "soundness suite", || c4_soundness(&s));
                }
                if want(6) {
                    ok &= run(6, "interval monotonicity", || c6_monotone(&s));
                }
                if want(7) {
                    ok &= run(7, "clamp invariant", || c7_clamp(&s));
                }
            }
            Err(_) => {
                for (n, name) in [(4, "soundness suite"), (6, "interval monotonicity"), (7, "clamp invariant")] {
                    if want(n) {
                        ok &= run(n, name, || check(false, "soundness suite panicked"));
                    }
                }
            }
        }
    }
    if want(5) {
        ok &= run(5, "gradient suite", c5_gradients);
    }
    if want(8) {
        ok &= run(8, "cost direction vs baseline", c8_cost_direction);
    }
    if want(9) {
        ok &= run(9, "baseline overshoot", c9_overshoot);
    }
    if want(10) {
        ok &= run(10, "w3 cost trend", c10_w3_trend);
    }
    if want(11) {
        ok &= run(11, "parser corpus", c11_corpus);
    }
    println!("acceptance: {}", if ok { "all criteria passed" } else { "FAILED" });
    if !ok {
        std::process::exit(1);
    }
}
