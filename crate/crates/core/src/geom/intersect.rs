use super::{CircularArc, Curve, DirectedSegment, Point};

/// A common point of two curves with its parameter on each.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hit {
    pub ta: f64,
    pub tb: f64,
    pub point: Point,
}

/// All common points of `a` and `b` under the distance tolerance `tol`.
/// Near-tangent contacts collapse into a single point, overlapping pieces are
/// reported through their extreme points, and endpoints lying on the other
/// curve are always reported.
pub fn intersect(a: &Curve, b: &Curve, tol: f64) -> Vec<Hit> {
    let mut hits = Vec::new();
    for (p, t) in [(a.start(), 0.0), (a.end(), 1.0)] {
        let (d, tb) = b.distance_to(p);
        if d <= tol {
            hits.push(Hit { ta: t, tb, point: p });
        }
    }
    for (p, t) in [(b.start(), 0.0), (b.end(), 1.0)] {
        let (d, ta) = a.distance_to(p);
        if d <= tol {
            hits.push(Hit { ta, tb: t, point: p });
        }
    }
    let raw = match (a, b) {
        (Curve::Segment(s), Curve::Segment(r)) => seg_seg(s, r, tol),
        (Curve::Segment(s), Curve::Arc(c)) => seg_arc(s, c, tol),
        (Curve::Arc(c), Curve::Segment(s)) => seg_arc(s, c, tol)
            .into_iter()
            .map(|h| Hit { ta: h.tb, tb: h.ta, point: h.point })
            .collect(),
        (Curve::Arc(c), Curve::Arc(d)) => arc_arc(c, d, tol),
    };
    for h in raw {
        if !hits.iter().any(|k| k.point.dist(h.point) <= tol) {
            hits.push(h);
        }
    }
    let mut out: Vec<Hit> = Vec::with_capacity(hits.len());
    for h in hits {
        if !out.iter().any(|k| k.point.dist(h.point) <= tol) {
            out.push(h);
        }
    }
    out
}

fn seg_seg(s: &DirectedSegment, r: &DirectedSegment, tol: f64) -> Vec<Hit> {
    let d1 = s.to - s.from;
    let d2 = r.to - r.from;
    let (l1, l2) = (d1.norm(), d2.norm());
    if l1 == 0.0 || l2 == 0.0 {
        return Vec::new();
    }
    let den = d1.cross(d2);
    if den.abs() <= 1e-14 * l1 * l2 {
        // Parallel: overlaps are covered by the endpoint checks.
        return Vec::new();
    }
    let w = r.from - s.from;
    let t = w.cross(d2) / den;
    let u = w.cross(d1) / den;
    let (e1, e2) = (tol / l1, tol / l2);
    if t < -e1 || t > 1.0 + e1 || u < -e2 || u > 1.0 + e2 {
        return Vec::new();
    }
    let t = t.clamp(0.0, 1.0);
    let u = u.clamp(0.0, 1.0);
    vec![Hit { ta: t, tb: u, point: s.from + d1 * t }]
}

fn seg_arc(s: &DirectedSegment, c: &CircularArc, tol: f64) -> Vec<Hit> {
    let d = s.to - s.from;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return Vec::new();
    }
    let l = l2.sqrt();
    let t0 = (c.center - s.from).dot(d) / l2;
    let foot = s.from + d * t0;
    let h = foot.dist(c.center);
    let r = c.radius;
    if h > r + tol {
        return Vec::new();
    }
    let ts: Vec<f64> = if h >= r {
        vec![t0]
    } else {
        let half = ((r - h) * (r + h)).sqrt();
        if half <= 0.5 * tol {
            vec![t0]
        } else {
            let w = half / l;
            vec![t0 - w, t0 + w]
        }
    };
    let slack = tol / r;
    let e = tol / l;
    let mut out = Vec::new();
    for t in ts {
        if t < -e || t > 1.0 + e {
            continue;
        }
        let t = t.clamp(0.0, 1.0);
        let p = s.from + d * t;
        if let Some(tb) = c.param_of_angle((p - c.center).angle(), slack) {
            out.push(Hit { ta: t, tb, point: p });
        }
    }
    out
}

fn arc_arc(a: &CircularArc, b: &CircularArc, tol: f64) -> Vec<Hit> {
    let v = b.center - a.center;
    let d = v.norm();
    let (r1, r2) = (a.radius, b.radius);
    if d <= tol {
        // Concentric: coincident circles only meet through endpoint overlaps.
        return Vec::new();
    }
    if d > r1 + r2 + tol || d < (r1 - r2).abs() - tol {
        return Vec::new();
    }
    let dir = v / d;
    // Half-distance between the two crossing points, in factored form to
    // avoid cancellation for nearly tangent circles.
    let y2 = (r1 + r2 - d) * (d - r1 + r2) * (d + r1 - r2) * (d + r1 + r2) / (4.0 * d * d);
    let x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let pts: Vec<Point> = if y2 <= 0.25 * tol * tol {
        let x = if d >= r1 + r2 { r1 } else if d <= (r1 - r2).abs() { if r1 >= r2 { r1 } else { -r1 } } else { x };
        vec![a.center + dir * x]
    } else {
        let y = y2.sqrt();
        let base = a.center + dir * x;
        vec![base + dir.perp() * y, base - dir.perp() * y]
    };
    let mut out = Vec::new();
    for p in pts {
        let ta = a.param_of_angle((p - a.center).angle(), tol / r1);
        let tb = b.param_of_angle((p - b.center).angle(), tol / r2);
        if let (Some(ta), Some(tb)) = (ta, tb) {
            out.push(Hit { ta, tb, point: p });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Orientation;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Curve {
        Curve::segment(Point::new(ax, ay), Point::new(bx, by))
    }

    #[test]
    fn crossing_segments() {
        let h = intersect(&seg(0.0, 0.0, 2.0, 2.0), &seg(0.0, 2.0, 2.0, 0.0), 1e-9);
        assert_eq!(h.len(), 1);
        assert!(h[0].point.dist(Point::new(1.0, 1.0)) < 1e-15);
        assert!((h[0].ta - 0.5).abs() < 1e-15);
    }

    #[test]
    fn collinear_overlap_reports_inner_endpoints() {
        let h = intersect(&seg(0.0, 0.0, 3.0, 0.0), &seg(1.0, 0.0, 5.0, 0.0), 1e-9);
        let mut xs: Vec<f64> = h.iter().map(|k| k.point.x).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![1.0, 3.0]);
    }

    #[test]
    fn tangent_line_touches_once() {
        let arc = CircularArc::between(Point::new(0.0, 1.0), 1.0, Point::new(-1.0, 1.0), Point::new(1.0, 1.0), Orientation::Counterclockwise);
        let h = intersect(&seg(-3.0, 0.0, 3.0, 0.0), &Curve::Arc(arc), 1e-9);
        assert_eq!(h.len(), 1);
        assert!(h[0].point.dist(Point::new(0.0, 0.0)) < 1e-12);
        assert!((h[0].tb - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_circles_cross_twice() {
        let a = CircularArc::between(Point::new(0.0, 0.0), 1.0, Point::new(0.0, -1.0), Point::new(0.0, 1.0), Orientation::Counterclockwise);
        let b = CircularArc::between(Point::new(1.0, 0.0), 1.0, Point::new(1.0, 1.0), Point::new(1.0, -1.0), Orientation::Counterclockwise);
        let h = intersect(&Curve::Arc(a), &Curve::Arc(b), 1e-9);
        assert_eq!(h.len(), 2);
        for k in h {
            assert!((k.point.x - 0.5).abs() < 1e-12);
            assert!((k.point.y.abs() - 0.75f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn arc_misses_outside_span() {
        let a = CircularArc::between(Point::new(0.0, 0.0), 1.0, Point::new(1.0, 0.0), Point::new(0.0, 1.0), Orientation::Counterclockwise);
        assert!(intersect(&Curve::Arc(a), &seg(-2.0, -0.5, 2.0, -0.5), 1e-9).is_empty());
    }
}
