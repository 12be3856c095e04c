use mxplan::geometry::{detour_target, tangent_cone, tangent_vertices, Point, Region};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Separating-axis test of a segment against an axis-aligned box.
fn sat_hits(lo: Point, hi: Point, p: Point, q: Point) -> bool {
    if p.x.max(q.x) < lo.x || p.x.min(q.x) > hi.x || p.y.max(q.y) < lo.y || p.y.min(q.y) > hi.y {
        return false;
    }
    // the segment's normal axis: all four corners strictly on one side separate
    let n = Point::new(q.y - p.y, p.x - q.x);
    let side: Vec<f64> =
        [lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)].iter().map(|c| n.dot(c.sub(p))).collect();
    !(side.iter().all(|&s| s > 0.0) || side.iter().all(|&s| s < 0.0))
}

/// Length of the part of segment pq inside the box, by parametric clipping.
fn clipped_chord(lo: Point, hi: Point, p: Point, q: Point) -> f64 {
    let d = q.sub(p);
    let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
    for (dp, a, b) in [(d.x, p.x - lo.x, hi.x - p.x), (d.y, p.y - lo.y, hi.y - p.y)] {
        if dp == 0.0 {
            if a < 0.0 || b < 0.0 {
                return 0.0;
            }
            continue;
        }
        let (ta, tb) = (-a / dp, b / dp);
        t0 = t0.max(ta.min(tb));
        t1 = t1.min(ta.max(tb));
    }
    (t1 - t0).max(0.0) * d.norm()
}

fn rand_rect(rng: &mut ChaCha8Rng) -> (Region, Point, Point) {
    let x = rng.gen_range(0.0..40.0);
    let y = rng.gen_range(0.0..40.0);
    let (w, h) = (rng.gen_range(1.0..15.0), rng.gen_range(1.0..15.0));
    (Region::rect("r", x, y, x + w, y + h).unwrap(), Point::new(x, y), Point::new(x + w, y + h))
}

fn rand_point(rng: &mut ChaCha8Rng) -> Point {
    Point::new(rng.gen_range(-10.0..60.0), rng.gen_range(-10.0..60.0))
}

#[test]
fn crossing_example_agrees_with_separating_axis() {
    let r = Region::rect("O1", 40.0, 30.0, 50.0, 40.0).unwrap();
    let (p, q) = (Point::new(30.0, 35.0), Point::new(60.0, 35.0));
    assert!(sat_hits(Point::new(40.0, 30.0), Point::new(50.0, 40.0), p, q));
    assert!(r.segment_intersects(p, q));
}

#[test]
fn segment_test_matches_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cases = 0;
    while cases < 1000 {
        let (r, lo, hi) = rand_rect(&mut rng);
        let (p, q) = (rand_point(&mut rng), rand_point(&mut rng));
        let sampled = (0..=10_000).any(|k| r.contains(p.add(q.sub(p).scale(k as f64 / 10_000.0))));
        let chord = clipped_chord(lo, hi, p, q);
        // skip segments that only graze the box or cut a corner finer than the samples
        let spacing = p.dist(q) / 10_000.0;
        if !sampled && chord > 0.0 && chord <= 2.0 * spacing + 1e-9 {
            continue;
        }
        let grazing = (0..=10_000).any(|k| {
            let s = p.add(q.sub(p).scale(k as f64 / 10_000.0));
            let dx = (s.x - lo.x).abs().min((s.x - hi.x).abs());
            let dy = (s.y - lo.y).abs().min((s.y - hi.y).abs());
            r.contains(s) && dx.min(dy) < 1e-9
        });
        if grazing && chord <= 1e-9 {
            continue;
        }
        assert_eq!(r.segment_intersects(p, q), sampled, "{p:?} {q:?} vs {r:?}");
        assert_eq!(sat_hits(lo, hi, p, q), sampled);
        cases += 1;
    }
}

#[test]
fn tangent_vertices_are_angular_extremes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let (r, _, _) = rand_rect(&mut rng);
        let apex = rand_point(&mut rng);
        if r.contains(apex) {
            continue;
        }
        let [a, b] = tangent_vertices(&r, apex).unwrap();
        // every vertex lies between the two rays
        for &v in &r.vertices {
            assert!(a.sub(apex).cross(v.sub(apex)) >= -1e-9);
            assert!(v.sub(apex).cross(b.sub(apex)) >= -1e-9);
        }
    }
}

#[test]
fn pentagon_picks_the_vertex_nearer_the_next_position() {
    // A..E counter-clockwise; from below-left the cone touches A and D
    let (a, b, c, d, e) = ((6.0, 2.0), (9.0, 4.0), (8.0, 8.0), (4.0, 9.0), (3.0, 5.0));
    let r = Region::polygon("P", &[a, b, c, d, e]).unwrap();
    let apex = Point::new(0.0, 0.0);
    let cone = tangent_cone(&r, apex).unwrap();
    let (pa, pd) = (Point::new(a.0, a.1), Point::new(d.0, d.1));
    assert_eq!((cone.right, cone.left), (pa, pd));
    let next = Point::new(5.0, 13.0);
    assert!(next.dist(pd) < next.dist(pa));
    let y = detour_target(&r, apex, next, 0.5).unwrap();
    assert!((y.dist(pd) - 0.5).abs() < 1e-12);
    assert!(!cone.contains(y));
    assert!(!r.contains(y));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn detour_target_is_eps_off_and_outside(
        x in 0.0..40.0_f64, y in 0.0..40.0_f64, w in 1.0..15.0_f64, h in 1.0..15.0_f64,
        px in -10.0..60.0_f64, py in -10.0..60.0_f64, qx in -10.0..60.0_f64, qy in -10.0..60.0_f64,
        eps in 0.01..2.0_f64,
    ) {
        let r = Region::rect("r", x, y, x + w, y + h).unwrap();
        let p = Point::new(px, py);
        prop_assume!(!r.contains(p));
        let q = Point::new(qx, qy);
        let cone = tangent_cone(&r, p).unwrap();
        let t = detour_target(&r, p, q, eps).unwrap();
        let base = if q.dist(cone.right) <= q.dist(cone.left) { cone.right } else { cone.left };
        let nearest = [cone.right, cone.left].into_iter().filter(|v| (t.dist(*v) - eps).abs() < 1e-9).count();
        prop_assert!(nearest >= 1);
        prop_assert!((t.dist(base) - eps).abs() < 1e-9 || (q.dist(cone.right) - q.dist(cone.left)).abs() < 1e-9);
        prop_assert!(!cone.contains(t));
        prop_assert!(!r.contains(t));
    }
}
