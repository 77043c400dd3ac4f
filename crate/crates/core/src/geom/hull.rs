use super::{orient, Point};

/// Convex hull in counterclockwise order without collinear points.
/// `tol` is a distance below which a point counts as on a hull edge.
pub fn convex_hull(points: &[Point], tol: f64) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.dist(*b) <= tol);
    if pts.len() < 3 {
        return pts;
    }
    let keep = |h: &[Point], p: Point| {
        let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
        let len = a.dist(p).max(f64::MIN_POSITIVE);
        orient(a, b, p) / len > tol
    };
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && !keep(&lower, p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !keep(&upper, p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The boundary chain of conv({u, v} ∪ points) running counterclockwise from
/// `u` to `v`; for points right of u→v this is the part of the hull facing
/// them. Returns `None` when u or v is not a hull vertex.
pub fn hull_chain(u: Point, v: Point, points: &[Point], tol: f64) -> Option<Vec<Point>> {
    let mut all = vec![u, v];
    all.extend_from_slice(points);
    let hull = convex_hull(&all, tol);
    let find = |q: Point| hull.iter().position(|h| h.dist(q) <= tol);
    let (iu, iv) = (find(u)?, find(v)?);
    let n = hull.len();
    let mut chain = vec![u];
    let mut k = (iu + 1) % n;
    while k != iv {
        chain.push(hull[k]);
        k = (k + 1) % n;
    }
    chain.push(v);
    Some(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_drops_interior_and_collinear() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
            Point::new(1.0, 1.0),
        ];
        let h = convex_hull(&pts, 1e-12);
        assert_eq!(h, vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(2.0, 2.0), Point::new(0.0, 2.0)]);
    }

    #[test]
    fn chain_wraps_points_right_of_chord() {
        let u = Point::new(0.0, 0.0);
        let v = Point::new(4.0, 0.0);
        let pts = [Point::new(1.0, -1.0), Point::new(2.0, -0.2), Point::new(3.0, -1.0)];
        let c = hull_chain(u, v, &pts, 1e-12).unwrap();
        assert_eq!(c, vec![u, Point::new(1.0, -1.0), Point::new(3.0, -1.0), v]);
        assert_eq!(hull_chain(u, v, &[], 1e-12).unwrap(), vec![u, v]);
    }
}
