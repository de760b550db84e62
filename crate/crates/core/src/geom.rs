//! Plane primitives shared by every other module.
//!
//! Everything here is a pure function of its inputs. Lines are kept in
//! normalized implicit form `Ax + By + C = 0` with `A² + B² = 1`, so signed
//! evaluation is a signed Euclidean distance and vertical lines need no
//! special casing.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate segment: both endpoints are {0:?}")]
    DegenerateSegment(Point),
    #[error("zero-length direction vector")]
    ZeroVector,
    #[error("reference point lies on the line; side is ambiguous")]
    AmbiguousSide,
    #[error("offset {eps} is not smaller than circle radius {radius}")]
    OffsetTooLarge { eps: f64, radius: f64 },
    #[error("circle center is {distance} away from the edge line")]
    CenterOffLine { distance: f64 },
    #[error("no advancing circle satisfies the growth constraint")]
    NoGrowthRoot,
    #[error("non-positive length {0}")]
    NonPositive(f64),
}

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn dist2(self, o: Point) -> f64 {
        (self - o).norm2()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Result<Point, GeomError> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(GeomError::ZeroVector);
        }
        Ok(Point::new(self.x / n, self.y / n))
    }

    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Lexicographic total order (x, then y).
    pub fn lex_cmp(&self, o: &Point) -> std::cmp::Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Closed segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment(a));
        }
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn dir(&self) -> Point {
        (self.b - self.a) * (1.0 / self.length())
    }

    pub fn at(&self, t: f64) -> Point {
        self.a + (self.b - self.a) * t
    }

    /// Parameter in [0, 1] of the point of the segment nearest to `p`.
    pub fn closest_param(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        ((p - self.a).dot(d) / d.norm2()).clamp(0.0, 1.0)
    }
}

pub fn dist_point_segment(p: Point, s: &Segment) -> f64 {
    p.dist(s.at(s.closest_param(p)))
}

/// Orientation of `c` relative to the directed line `a -> b`: positive for a
/// left turn.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// True when the closed segments share at least one point.
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    let d1 = orient(t.a, t.b, s.a);
    let d2 = orient(t.a, t.b, s.b);
    let d3 = orient(s.a, s.b, t.a);
    let d4 = orient(s.a, s.b, t.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Point, seg: &Segment, o: f64| {
        o == 0.0
            && p.x >= seg.a.x.min(seg.b.x)
            && p.x <= seg.a.x.max(seg.b.x)
            && p.y >= seg.a.y.min(seg.b.y)
            && p.y <= seg.a.y.max(seg.b.y)
    };
    on(s.a, t, d1) || on(s.b, t, d2) || on(t.a, s, d3) || on(t.b, s, d4)
}

/// Euclidean distance between two closed segments.
pub fn dist_segment_segment(s: &Segment, t: &Segment) -> f64 {
    if segments_intersect(s, t) {
        return 0.0;
    }
    dist_point_segment(s.a, t)
        .min(dist_point_segment(s.b, t))
        .min(dist_point_segment(t.a, s))
        .min(dist_point_segment(t.b, s))
}

/// Normalized implicit line `a·x + b·y + c = 0`.
///
/// Invariant: `a² + b² = 1` and either `a > 0`, or `a = 0` and `b > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineEq {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LineEq {
    /// Signed distance of `p` to the line.
    pub fn eval(&self, p: Point) -> f64 {
        self.a * p.x + self.b * p.y + self.c
    }

    pub fn normal(&self) -> Point {
        Point::new(self.a, self.b)
    }

    /// Orthogonal projection of `p` onto the line.
    pub fn project(&self, p: Point) -> Point {
        p - self.normal() * self.eval(p)
    }

    fn canonical(a: f64, b: f64, c: f64) -> LineEq {
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            LineEq {
                a: -a,
                b: -b,
                c: -c,
            }
        } else {
            LineEq { a, b, c }
        }
    }
}

pub fn line_through(a: Point, b: Point) -> Result<LineEq, GeomError> {
    let n = (b - a)
        .perp()
        .normalized()
        .map_err(|_| GeomError::DegenerateSegment(a))?;
    // Evaluating the offset at the midpoint keeps both residuals symmetric.
    let m = a.midpoint(b);
    Ok(LineEq::canonical(n.x, n.y, -(n.x * m.x + n.y * m.y)))
}

/// Line parallel to `l` at distance `d`, on the side of `toward`.
pub fn offset_line(l: &LineEq, d: f64, toward: Point) -> Result<LineEq, GeomError> {
    if !(d > 0.0) {
        return Err(GeomError::NonPositive(d));
    }
    let s = l.eval(toward);
    if s == 0.0 {
        return Err(GeomError::AmbiguousSide);
    }
    Ok(LineEq {
        a: l.a,
        b: l.b,
        c: l.c - s.signum() * d,
    })
}

/// Unsigned angle between two direction vectors, in `[0, π]`.
pub fn angle_between(d1: Point, d2: Point) -> Result<f64, GeomError> {
    if d1.norm2() == 0.0 || d2.norm2() == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    Ok(d1.cross(d2).abs().atan2(d1.dot(d2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(GeomError::NonPositive(radius));
        }
        Ok(Circle { center, radius })
    }
}

/// Intersection of the closed disk with the segment, as the clipped
/// sub-segment `(entry, exit)` ordered from `s.a` to `s.b`. A tangent contact
/// yields a single repeated point.
pub fn circle_segment_chord(c: &Circle, s: &Segment) -> Option<(Point, Point)> {
    let d = s.b - s.a;
    let f = s.a - c.center;
    let qa = d.norm2();
    let qb = 2.0 * f.dot(d);
    let qc = f.norm2() - c.radius * c.radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
    let t1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
    if t0 > t1 {
        return None;
    }
    Some((s.at(t0), s.at(t1)))
}

/// A mirrored pair of points at perpendicular distance `eps` from a line,
/// together with its foot on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirroredPair {
    pub foot: Point,
    /// On the positive side of the line.
    pub p: Point,
    /// On the negative side of the line.
    pub q: Point,
}

/// Places a mirrored pair on the boundary of `c` at distance `eps` from
/// `edge_line`. The circle must be centered on the line; `toward` selects
/// which of the two feet `center ± √(r²−eps²)·dir` is used.
pub fn sentinel_positions(
    c: &Circle,
    edge_line: &LineEq,
    toward: Point,
    eps: f64,
) -> Result<MirroredPair, GeomError> {
    if !(eps > 0.0) {
        return Err(GeomError::NonPositive(eps));
    }
    if eps >= c.radius {
        return Err(GeomError::OffsetTooLarge {
            eps,
            radius: c.radius,
        });
    }
    let off = edge_line.eval(c.center);
    if off.abs() > 1e-9 * c.radius.max(1.0) {
        return Err(GeomError::CenterOffLine {
            distance: off.abs(),
        });
    }
    let n = edge_line.normal();
    let mut dir = n.perp();
    if (toward - c.center).dot(dir) < 0.0 {
        dir = -dir;
    }
    let h = ((c.radius - eps) * (c.radius + eps)).sqrt();
    let foot = c.center + dir * h;
    Ok(MirroredPair {
        foot,
        p: foot + n * eps,
        q: foot - n * eps,
    })
}

/// Grows a circle centered on the edge line through `anchor` until its
/// radius equals its distance to `obstacle`.
///
/// The center is parametrized as `edge_point + t·edge_dir` and the returned
/// circle is the first root advancing past the anchor's foot with the center
/// on the anchor's side of the obstacle.
pub fn grow_circle_on_edge(
    edge_line: &LineEq,
    edge_point: Point,
    edge_dir: Point,
    anchor: Point,
    obstacle: &LineEq,
) -> Result<Circle, GeomError> {
    let off = edge_line.eval(edge_point);
    if off.abs() > 1e-9 * edge_point.norm().max(1.0) {
        return Err(GeomError::CenterOffLine {
            distance: off.abs(),
        });
    }
    let d = edge_dir;
    let u = edge_point - anchor;
    let du = d.dot(u);
    let s0 = obstacle.eval(edge_point);
    let sd = obstacle.normal().dot(d);
    let side = obstacle.eval(anchor).signum();
    if side == 0.0 {
        return Err(GeomError::AmbiguousSide);
    }
    // |u + t d|² = (s0 + t sd)²
    let qa = 1.0 - sd * sd;
    let qb = 2.0 * (du - s0 * sd);
    let qc = u.norm2() - s0 * s0;
    let t_foot = -du;
    let roots = solve_quadratic(qa, qb, qc);
    let mut best: Option<f64> = None;
    for t in roots {
        let signed = s0 + t * sd;
        if t > t_foot && signed * side > 0.0 && best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    }
    let t = best.ok_or(GeomError::NoGrowthRoot)?;
    let center = edge_point + d * t;
    Circle::new(center, center.dist(anchor))
}

/// Real roots of `a t² + b t + c = 0`, degrading to the linear case.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    // Cancellation-free form.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    let (r1, r2) = (q / a, c / q);
    if r1 <= r2 {
        vec![r1, r2]
    } else {
        vec![r2, r1]
    }
}

/// True iff `|p − center| < radius − tol`.
pub fn strictly_inside(p: Point, c: &Circle, tol: f64) -> bool {
    p.dist(c.center) < c.radius - tol
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Self {
        Rect { min, max }
    }

    pub fn bounding<'a>(pts: impl IntoIterator<Item = &'a Point>) -> Option<Rect> {
        let mut it = pts.into_iter();
        let first = *it.next()?;
        Some(it.fold(Rect::new(first, first), |r, p| Rect {
            min: Point::new(r.min.x.min(p.x), r.min.y.min(p.y)),
            max: Point::new(r.max.x.max(p.x), r.max.y.max(p.y)),
        }))
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn inflate(&self, d: f64) -> Rect {
        Rect::new(self.min - Point::new(d, d), self.max + Point::new(d, d))
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn seg(a: (f64, f64), b: (f64, f64)) -> Segment {
        Segment::new(p(a.0, a.1), p(b.0, b.1)).unwrap()
    }

    #[test]
    fn point_segment_distance() {
        assert_eq!(
            dist_point_segment(p(0.0, 0.0), &seg((1.0, 0.0), (1.0, 1.0))),
            1.0
        );
        assert_eq!(
            dist_point_segment(p(2.0, 0.0), &seg((0.0, 0.0), (1.0, 0.0))),
            1.0
        );
        assert_eq!(
            dist_point_segment(p(0.5, 0.0), &seg((0.0, 0.0), (1.0, 0.0))),
            0.0
        );
    }

    #[test]
    fn lines_through_points() {
        assert_eq!(
            line_through(p(0.0, 0.0), p(1.0, 0.0)).unwrap(),
            LineEq {
                a: 0.0,
                b: 1.0,
                c: 0.0
            }
        );
        assert_eq!(
            line_through(p(0.0, 0.0), p(0.0, 2.0)).unwrap(),
            LineEq {
                a: 1.0,
                b: 0.0,
                c: 0.0
            }
        );
        let l = line_through(p(0.0, 0.0), p(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(l.a, SQRT_2 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.b, -SQRT_2 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.c, 0.0, epsilon = 1e-15);
        assert!(line_through(p(1.0, 1.0), p(1.0, 1.0)).is_err());
    }

    #[test]
    fn offsets() {
        let x_axis = LineEq {
            a: 0.0,
            b: 1.0,
            c: 0.0,
        };
        assert_eq!(
            offset_line(&x_axis, 1.0, p(5.0, 3.0)).unwrap(),
            LineEq {
                a: 0.0,
                b: 1.0,
                c: -1.0
            }
        );
        let y_axis = LineEq {
            a: 1.0,
            b: 0.0,
            c: 0.0,
        };
        assert_eq!(
            offset_line(&y_axis, 2.0, p(-3.0, 0.0)).unwrap(),
            LineEq {
                a: 1.0,
                b: 0.0,
                c: 2.0
            }
        );
        let y1 = LineEq {
            a: 0.0,
            b: 1.0,
            c: -1.0,
        };
        assert_eq!(offset_line(&y1, 1.0, p(0.0, 0.0)).unwrap(), x_axis);
        assert_eq!(
            offset_line(&x_axis, 1.0, p(4.0, 0.0)),
            Err(GeomError::AmbiguousSide)
        );
    }

    #[test]
    fn angles() {
        assert_abs_diff_eq!(angle_between(p(1.0, 0.0), p(0.0, 1.0)).unwrap(), FRAC_PI_2);
        assert_abs_diff_eq!(angle_between(p(1.0, 0.0), p(-1.0, 0.0)).unwrap(), PI);
        assert_abs_diff_eq!(
            angle_between(p(1.0, 0.0), p(1.0, 1.0)).unwrap(),
            FRAC_PI_4,
            epsilon = 1e-15
        );
        assert_eq!(
            angle_between(p(0.0, 0.0), p(1.0, 0.0)),
            Err(GeomError::ZeroVector)
        );
    }

    #[test]
    fn chords() {
        let s = seg((0.0, 0.0), (10.0, 0.0));
        let c = Circle::new(p(5.0, 0.0), 2.0).unwrap();
        assert_eq!(
            circle_segment_chord(&c, &s),
            Some((p(3.0, 0.0), p(7.0, 0.0)))
        );
        let c = Circle::new(p(0.0, 3.0), 1.0).unwrap();
        assert_eq!(circle_segment_chord(&c, &s), None);
        let c = Circle::new(p(0.0, 0.0), 2.0).unwrap();
        assert_eq!(
            circle_segment_chord(&c, &s),
            Some((p(0.0, 0.0), p(2.0, 0.0)))
        );
    }

    #[test]
    fn sentinels() {
        let x_axis = LineEq {
            a: 0.0,
            b: 1.0,
            c: 0.0,
        };
        let s3 = 3f64.sqrt();
        let c = Circle::new(p(0.0, 0.0), 2.0).unwrap();
        let pair = sentinel_positions(&c, &x_axis, p(10.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(pair.p.x, s3, epsilon = 1e-15);
        assert_eq!(pair.p.y, 1.0);
        assert_abs_diff_eq!(pair.q.x, s3, epsilon = 1e-15);
        assert_eq!(pair.q.y, -1.0);
        assert_abs_diff_eq!(pair.p.dist(c.center), 2.0, epsilon = 1e-15);

        let c = Circle::new(p(0.0, 0.0), 1.0).unwrap();
        assert!(matches!(
            sentinel_positions(&c, &x_axis, p(1.0, 0.0), 1.0),
            Err(GeomError::OffsetTooLarge { .. })
        ));

        let c = Circle::new(p(5.0, 0.0), 2.0).unwrap();
        let pair = sentinel_positions(&c, &x_axis, p(-10.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(pair.p.x, 5.0 - s3, epsilon = 1e-15);
        assert_eq!((pair.p.y, pair.q.y), (1.0, -1.0));
    }

    #[test]
    fn growth_examples() {
        let x_axis = LineEq {
            a: 0.0,
            b: 1.0,
            c: 0.0,
        };
        let o = p(0.0, 0.0);
        let dx = p(1.0, 0.0);
        // Obstacle x = 9.
        let obstacle = LineEq {
            a: 1.0,
            b: 0.0,
            c: -9.0,
        };
        let c = grow_circle_on_edge(&x_axis, o, dx, p(3.0, 1.0), &obstacle).unwrap();
        assert_abs_diff_eq!(c.center.x, 71.0 / 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.center.y, 0.0);
        assert_abs_diff_eq!(c.radius, 37.0 / 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(obstacle.eval(c.center).abs(), c.radius, epsilon = 1e-12);

        let obstacle = LineEq {
            a: 0.0,
            b: 1.0,
            c: -3.0,
        };
        let c = grow_circle_on_edge(&x_axis, o, dx, p(0.0, 1.0), &obstacle).unwrap();
        assert_abs_diff_eq!(c.center.x, 2.0 * SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(c.radius, 3.0, epsilon = 1e-12);

        let obstacle = LineEq {
            a: 0.0,
            b: 1.0,
            c: -0.5,
        };
        assert_eq!(
            grow_circle_on_edge(&x_axis, o, dx, p(0.0, 1.0), &obstacle),
            Err(GeomError::NoGrowthRoot)
        );
    }

    #[test]
    fn inside_is_strict() {
        let c = Circle::new(p(0.0, 0.0), 1.0).unwrap();
        assert!(strictly_inside(p(0.0, 0.0), &c, 1e-9));
        assert!(!strictly_inside(p(1.0, 0.0), &c, 1e-9));
        assert!(!strictly_inside(p(2.0, 0.0), &c, 1e-9));
    }

    #[test]
    fn quadratic_roots() {
        assert_eq!(solve_quadratic(1.0, -3.0, 2.0), vec![1.0, 2.0]);
        assert_eq!(solve_quadratic(0.0, 2.0, -4.0), vec![2.0]);
        assert!(solve_quadratic(1.0, 0.0, 1.0).is_empty());
    }
}
