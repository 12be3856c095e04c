//! Planar geometry over closed convex polygons.
//!
//! Regions are closed sets, so touching a boundary counts as being inside and a
//! segment that grazes an edge intersects. The obstacle detour construction works
//! from the viewing cone of a region: seen from an apex outside the region, the
//! two tangent vertices bound the smallest wedge holding the whole polygon.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        self.sub(o).norm()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("polygon needs at least three vertices")]
    TooFewVertices,
    #[error("polygon has zero area")]
    Degenerate,
    #[error("polygon is not convex")]
    NotConvex,
    #[error("apex lies inside the region")]
    ApexInsideRegion,
}

/// Closed convex polygon, vertices in counter-clockwise order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub name: String,
    pub vertices: Vec<Point>,
    pub is_obstacle: bool,
    pub is_objective: bool,
}

impl Region {
    /// Axis-aligned rectangle; corners may be given in any order.
    pub fn rect(name: &str, x1: f64, y1: f64, x2: f64, y2: f64) -> Result<Self, GeometryError> {
        let (lx, hx) = (x1.min(x2), x1.max(x2));
        let (ly, hy) = (y1.min(y2), y1.max(y2));
        if !(lx < hx && ly < hy) {
            return Err(GeometryError::Degenerate);
        }
        Ok(Region {
            name: name.to_string(),
            vertices: vec![Point::new(lx, ly), Point::new(hx, ly), Point::new(hx, hy), Point::new(lx, hy)],
            is_obstacle: false,
            is_objective: false,
        })
    }

    /// Convex polygon from a vertex list in either orientation.
    pub fn polygon(name: &str, pts: &[(f64, f64)]) -> Result<Self, GeometryError> {
        if pts.len() < 3 {
            return Err(GeometryError::TooFewVertices);
        }
        let mut v: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let area2: f64 = (0..v.len()).map(|i| v[i].cross(v[(i + 1) % v.len()])).sum();
        if area2.abs() <= 1e-12 {
            return Err(GeometryError::Degenerate);
        }
        if area2 < 0.0 {
            v.reverse();
        }
        let n = v.len();
        for i in 0..n {
            let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
            if b.sub(a).cross(c.sub(b)) < 0.0 {
                return Err(GeometryError::NotConvex);
            }
        }
        // a star polygon winds more than once; total turning must be one turn
        let mut turn = 0.0;
        for i in 0..n {
            let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
            let (d1, d2) = (b.sub(a), c.sub(b));
            turn += d1.cross(d2).atan2(d1.dot(d2));
        }
        if (turn - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeometryError::NotConvex);
        }
        Ok(Region { name: name.to_string(), vertices: v, is_obstacle: false, is_objective: false })
    }

    fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn contains(&self, p: Point) -> bool {
        self.edges().all(|(a, b)| b.sub(a).cross(p.sub(a)) >= 0.0)
    }

    /// Strict interior test, used where boundary contact must not count.
    pub fn contains_strictly(&self, p: Point) -> bool {
        self.edges().all(|(a, b)| b.sub(a).cross(p.sub(a)) > 0.0)
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        let s = self.vertices.iter().fold(Point::new(0.0, 0.0), |acc, v| acc.add(*v));
        s.scale(1.0 / n)
    }

    /// (min corner, max corner) of the bounding box.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    pub fn area(&self) -> f64 {
        self.edges().map(|(a, b)| a.cross(b)).sum::<f64>() / 2.0
    }

    /// Closed-segment intersection by Cyrus-Beck clipping.
    pub fn segment_intersects(&self, p: Point, q: Point) -> bool {
        let d = q.sub(p);
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for (a, b) in self.edges() {
            let e = b.sub(a);
            // outward normal of a CCW edge
            let n = Point::new(e.y, -e.x);
            let num = n.dot(p.sub(a));
            let den = n.dot(d);
            if den == 0.0 {
                if num > 0.0 {
                    return false;
                }
            } else {
                let t = -num / den;
                if den > 0.0 {
                    t1 = t1.min(t);
                } else {
                    t0 = t0.max(t);
                }
                if t0 > t1 {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the closed box `[lo.x, hi.x] x [lo.y, hi.y]` meets the region.
    /// Box extents may be infinite.
    pub fn intersects_box(&self, lo: Point, hi: Point) -> bool {
        let (rlo, rhi) = self.bbox();
        if hi.x < rlo.x || lo.x > rhi.x || hi.y < rlo.y || lo.y > rhi.y {
            return false;
        }
        for (a, b) in self.edges() {
            let e = b.sub(a);
            let n = Point::new(e.y, -e.x);
            // smallest projection of the box onto the outward normal
            let sx = if n.x > 0.0 { n.x * lo.x } else if n.x < 0.0 { n.x * hi.x } else { 0.0 };
            let sy = if n.y > 0.0 { n.y * lo.y } else if n.y < 0.0 { n.y * hi.y } else { 0.0 };
            if sx + sy > n.dot(a) {
                return false;
            }
        }
        true
    }
}

pub fn contains(r: &Region, p: Point) -> bool {
    r.contains(p)
}

pub fn segment_intersects(r: &Region, p: Point, q: Point) -> bool {
    r.segment_intersects(p, q)
}

/// Wedge with apex `apex` bounded by rays through `right` then `left`
/// (counter-clockwise order).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cone {
    pub apex: Point,
    pub right: Point,
    pub left: Point,
}

impl Cone {
    /// Closed wedge membership.
    pub fn contains(&self, p: Point) -> bool {
        let (r, l, d) = (self.right.sub(self.apex), self.left.sub(self.apex), p.sub(self.apex));
        r.cross(d) >= 0.0 && d.cross(l) >= 0.0
    }
}

/// Viewing cone of `r` from `apex`.
pub fn tangent_cone(r: &Region, apex: Point) -> Result<Cone, GeometryError> {
    if r.contains(apex) {
        return Err(GeometryError::ApexInsideRegion);
    }
    let c = r.centroid().sub(apex);
    // signed angle of each vertex relative to the centroid direction
    let angle = |v: Point| {
        let d = v.sub(apex);
        c.cross(d).atan2(c.dot(d))
    };
    let mut right = r.vertices[0];
    let mut left = r.vertices[0];
    let (mut amin, mut amax) = (angle(right), angle(left));
    for &v in &r.vertices[1..] {
        let a = angle(v);
        let far = |cur: Point| v.dist(apex) > cur.dist(apex);
        if a < amin || (a == amin && far(right)) {
            amin = a;
            right = v;
        }
        if a > amax || (a == amax && far(left)) {
            amax = a;
            left = v;
        }
    }
    Ok(Cone { apex, right, left })
}

/// The two tangent vertices of `r` seen from `apex`.
pub fn tangent_vertices(r: &Region, apex: Point) -> Result<[Point; 2], GeometryError> {
    let c = tangent_cone(r, apex)?;
    Ok([c.right, c.left])
}

fn polar_angle(d: Point) -> f64 {
    let a = d.y.atan2(d.x);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Detour point for a step from `p_i` toward `p_next` past region `r`.
///
/// Picks the tangent vertex nearer `p_next` (ties go to the smaller polar angle
/// about `p_i`) and steps `eps` outward from it, perpendicular to the cone ray.
pub fn detour_target(r: &Region, p_i: Point, p_next: Point, eps: f64) -> Result<Point, GeometryError> {
    let cone = tangent_cone(r, p_i)?;
    let (dr, dl) = (p_next.dist(cone.right), p_next.dist(cone.left));
    let pick_right = if (dr - dl).abs() <= 1e-12 {
        polar_angle(cone.right.sub(p_i)) <= polar_angle(cone.left.sub(p_i))
    } else {
        dr < dl
    };
    let (y, d) = if pick_right {
        (cone.right, cone.right.sub(p_i))
    } else {
        (cone.left, cone.left.sub(p_i))
    };
    let len = d.norm();
    // the interior lies counter-clockwise of the right ray and clockwise of the left
    let n = if pick_right { Point::new(d.y, -d.x) } else { Point::new(-d.y, d.x) };
    Ok(y.add(n.scale(eps / len)))
}

/// Target used when the apex is already inside `r`: the vertex nearest
/// `p_next`, pushed `eps` away from the centroid.
pub fn inside_fallback_target(r: &Region, p_next: Point, eps: f64) -> Point {
    let mut best = r.vertices[0];
    for &v in &r.vertices[1..] {
        if v.dist(p_next) < best.dist(p_next) {
            best = v;
        }
    }
    let away = best.sub(r.centroid());
    best.add(away.scale(eps / away.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o1() -> Region {
        Region::rect("O1", 40.0, 30.0, 50.0, 40.0).unwrap()
    }

    #[test]
    fn closed_containment() {
        assert!(o1().contains(Point::new(45.0, 35.0)));
        assert!(o1().contains(Point::new(40.0, 30.0)));
        assert!(!o1().contains(Point::new(0.0, 0.0)));
        assert!(!o1().contains_strictly(Point::new(40.0, 35.0)));
    }

    #[test]
    fn segments() {
        let r = o1();
        assert!(r.segment_intersects(Point::new(30.0, 35.0), Point::new(60.0, 35.0)));
        assert!(r.segment_intersects(Point::new(45.0, 35.0), Point::new(45.0, 35.0)));
        assert!(!r.segment_intersects(Point::new(0.0, 0.0), Point::new(1.0, 1.0)));
        // grazing the top edge counts
        assert!(r.segment_intersects(Point::new(30.0, 40.0), Point::new(60.0, 40.0)));
        assert!(!r.segment_intersects(Point::new(30.0, 40.5), Point::new(60.0, 40.5)));
    }

    #[test]
    fn rect_tangents() {
        let r = Region::rect("R", 4.0, 4.0, 6.0, 6.0).unwrap();
        let [a, b] = tangent_vertices(&r, Point::new(0.0, 0.0)).unwrap();
        assert_eq!(a, Point::new(6.0, 4.0));
        assert_eq!(b, Point::new(4.0, 6.0));
        let t = detour_target(&r, Point::new(0.0, 0.0), Point::new(10.0, 0.0), 0.5).unwrap();
        assert!((t.dist(Point::new(6.0, 4.0)) - 0.5).abs() < 1e-12);
        assert!(t.y < 4.0);
    }

    #[test]
    fn equidistant_tie_takes_smaller_angle() {
        let r = Region::rect("R", 4.0, 4.0, 6.0, 6.0).unwrap();
        let t = detour_target(&r, Point::new(0.0, 0.0), Point::new(10.0, 10.0), 0.5).unwrap();
        assert!((t.dist(Point::new(6.0, 4.0)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn apex_inside() {
        assert_eq!(
            detour_target(&o1(), Point::new(45.0, 35.0), Point::new(0.0, 0.0), 0.5),
            Err(GeometryError::ApexInsideRegion)
        );
    }

    #[test]
    fn collinear_extreme_picks_farther_vertex() {
        // from (0,0), (2,1) and (4,2) lie on the same extreme ray
        let r = Region::polygon("T", &[(2.0, 1.0), (4.0, 2.0), (3.0, 4.0)]).unwrap();
        let c = tangent_cone(&r, Point::new(0.0, 0.0)).unwrap();
        assert_eq!(c.right, Point::new(4.0, 2.0));
    }

    #[test]
    fn polygon_validation() {
        assert_eq!(Region::polygon("a", &[(0.0, 0.0), (1.0, 1.0)]), Err(GeometryError::TooFewVertices));
        assert_eq!(Region::polygon("a", &[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]), Err(GeometryError::Degenerate));
        assert_eq!(
            Region::polygon("a", &[(0.0, 0.0), (4.0, 0.0), (1.0, 1.0), (0.0, 4.0)]),
            Err(GeometryError::NotConvex)
        );
        let cw = Region::polygon("a", &[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]).unwrap();
        assert!(cw.area() > 0.0);
    }

    #[test]
    fn box_test() {
        let tri = Region::polygon("t", &[(0.0, 0.0), (10.0, 0.0), (0.0, 10.0)]).unwrap();
        assert!(!tri.intersects_box(Point::new(6.0, 6.0), Point::new(8.0, 8.0)));
        assert!(tri.intersects_box(Point::new(4.0, 4.0), Point::new(8.0, 8.0)));
        assert!(tri.intersects_box(Point::new(f64::NEG_INFINITY, 1.0), Point::new(f64::INFINITY, 1.0)));
    }
}
