//! The finite candidate set of free boundary pieces: radius-α arcs between
//! vertices and/or tangent points on edges, kept only when they do not
//! properly intersect the input.

use crate::geom::{
    intersect, normalize_angle, BBox, CircularArc, Containment, Curve, Orientation, Point,
    PolygonSet,
};
use std::f64::consts::PI;

/// Relative margin applied to the strict chord and angle bounds.
pub const STRICT_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AnchorKind {
    /// Global vertex index.
    Vertex(usize),
    /// Global edge index and the parameter of the tangent point on it.
    EdgeInterior { edge: usize, t: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnchorPoint {
    pub location: Point,
    pub kind: AnchorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    VertexVertex,
    VertexEdge,
    EdgeEdge,
    Visibility,
}

/// One member of the candidate set. `curve` is a radius-α arc, or a straight
/// segment in the α = ∞ limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidateArc {
    pub curve: Curve,
    pub a: AnchorPoint,
    pub b: AnchorPoint,
    pub generator: Generator,
}

impl CandidateArc {
    pub fn arc(&self) -> Option<&CircularArc> {
        match &self.curve {
            Curve::Arc(a) => Some(a),
            Curve::Segment(_) => None,
        }
    }
}

fn chord_ok(d: f64, alpha: f64) -> bool {
    d < 2.0 * alpha * (1.0 - STRICT_MARGIN)
}

/// Both minor radius-α arcs through u and v, one bulging to each side.
pub fn vertex_vertex_arcs(u: Point, v: Point, alpha: f64, tol: f64) -> Vec<CircularArc> {
    let d = u.dist(v);
    if d <= tol || !chord_ok(d, alpha) {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(2);
    for (p, q) in [(u, v), (v, u)] {
        if let Ok(a) = CircularArc::from_chord(p, q, alpha, tol) {
            out.push(a);
        }
    }
    out
}

/// Minor arc on the circle about `center` from `p` to `q`.
fn minor_arc(center: Point, radius: f64, p: Point, q: Point) -> CircularArc {
    let ccw = CircularArc::between(center, radius, p, q, Orientation::Counterclockwise);
    if ccw.sweep <= PI {
        ccw
    } else {
        CircularArc::between(center, radius, p, q, Orientation::Clockwise)
    }
}

fn arc_ok(arc: &CircularArc, alpha: f64) -> bool {
    arc.sweep < PI * (1.0 - STRICT_MARGIN) && chord_ok(arc.chord_length(), alpha) && arc.sweep > 0.0
}

/// Radius-α arcs from vertex `u` that end tangentially at an interior point
/// of edge `e`; centers lie on the lines parallel to `e` at distance α.
pub fn vertex_edge_tangent_arc(b: &PolygonSet, u: usize, e: usize, alpha: f64) -> Vec<CandidateArc> {
    let tol = b.tol();
    if u == e || u == b.edge_end(e) || !alpha.is_finite() || alpha <= 0.0 {
        return Vec::new();
    }
    let up = b.vertex(u);
    let (ea, eb) = b.edge(e);
    let len = ea.dist(eb);
    let d = (eb - ea) / len;
    let n = d.perp();
    let hu = (up - ea).dot(n);
    let mut out = Vec::new();
    for side in [1.0, -1.0] {
        let delta = side * alpha - hu;
        if delta.abs() > alpha {
            continue;
        }
        let w = (alpha * alpha - delta * delta).max(0.0).sqrt();
        let signs: &[f64] = if w <= tol { &[0.0] } else { &[1.0, -1.0] };
        for &s in signs {
            let c = up + n * delta + d * (s * w);
            let foot = c - n * (side * alpha);
            let t = (foot - ea).dot(d) / len;
            let margin = tol / len;
            if t <= margin || t >= 1.0 - margin {
                continue;
            }
            if ((c - ea).dot(n).abs() - alpha).abs() >= 1e-9 * alpha.max(1.0) * 10.0 {
                continue;
            }
            if up.dist(foot) <= tol {
                continue;
            }
            let arc = minor_arc(c, alpha, up, foot);
            if !arc_ok(&arc, alpha) {
                continue;
            }
            out.push(CandidateArc {
                curve: Curve::Arc(arc),
                a: AnchorPoint { location: up, kind: AnchorKind::Vertex(u) },
                b: AnchorPoint { location: foot, kind: AnchorKind::EdgeInterior { edge: e, t } },
                generator: Generator::VertexEdge,
            });
        }
    }
    out
}

/// Radius-α arcs tangent to interior points of both edges; centers are the
/// intersections of the offset lines, one per side combination.
pub fn edge_edge_bitangent_arc(b: &PolygonSet, e1: usize, e2: usize, alpha: f64) -> Vec<CandidateArc> {
    let tol = b.tol();
    if e1 == e2 || !alpha.is_finite() || alpha <= 0.0 {
        return Vec::new();
    }
    let (a1, b1) = b.edge(e1);
    let (a2, b2) = b.edge(e2);
    let (l1, l2) = (a1.dist(b1), a2.dist(b2));
    let d1 = (b1 - a1) / l1;
    let d2 = (b2 - a2) / l2;
    let (n1, n2) = (d1.perp(), d2.perp());
    let det = n1.cross(n2);
    if det.abs() <= 1e-12 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            let r1 = s1 * alpha + n1.dot(a1);
            let r2 = s2 * alpha + n2.dot(a2);
            let c = Point::new((r1 * n2.y - n1.y * r2) / det, (n1.x * r2 - r1 * n2.x) / det);
            let f1 = c - n1 * (s1 * alpha);
            let f2 = c - n2 * (s2 * alpha);
            let t1 = (f1 - a1).dot(d1) / l1;
            let t2 = (f2 - a2).dot(d2) / l2;
            if t1 <= tol / l1 || t1 >= 1.0 - tol / l1 || t2 <= tol / l2 || t2 >= 1.0 - tol / l2 {
                continue;
            }
            if f1.dist(f2) <= tol {
                continue;
            }
            let arc = minor_arc(c, alpha, f1, f2);
            if !arc_ok(&arc, alpha) {
                continue;
            }
            out.push(CandidateArc {
                curve: Curve::Arc(arc),
                a: AnchorPoint { location: f1, kind: AnchorKind::EdgeInterior { edge: e1, t: t1 } },
                b: AnchorPoint { location: f2, kind: AnchorKind::EdgeInterior { edge: e2, t: t2 } },
                generator: Generator::EdgeEdge,
            });
        }
    }
    out
}

/// Whether `curve` stays outside every polygon interior; touching the
/// boundary is allowed.
pub fn is_admissible(b: &PolygonSet, curve: &Curve) -> bool {
    let tol = b.tol();
    let bb = curve.bbox().expanded(tol);
    let mut ts = vec![0.0, 1.0];
    for (_, p, q) in b.edges() {
        if !bb.overlaps(&BBox::of_points([p, q]).expanded(tol)) {
            continue;
        }
        ts.extend(intersect(curve, &Curve::segment(p, q), tol).into_iter().map(|h| h.ta));
    }
    ts.sort_by(f64::total_cmp);
    ts.windows(2).filter(|w| w[1] - w[0] > 1e-12).all(|w| {
        let m = curve.point_at(0.5 * (w[0] + w[1]));
        b.polygons().iter().all(|poly| poly.contains(m, tol) != Containment::Inside)
    })
}

/// Whether a straight vertex-to-vertex segment avoids all polygon
/// interiors; touching the boundary is allowed.
pub fn segment_avoids_interiors(b: &PolygonSet, p: Point, q: Point) -> bool {
    let tol = b.tol();
    let seg = Curve::segment(p, q);
    let bb = seg.bbox().expanded(tol);
    let mut ts = vec![0.0, 1.0];
    for (_, a, c) in b.edges() {
        if !bb.overlaps(&BBox::of_points([a, c]).expanded(tol)) {
            continue;
        }
        for h in intersect(&seg, &Curve::segment(a, c), tol) {
            ts.push(h.ta);
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.windows(2).filter(|w| w[1] - w[0] > 1e-12).all(|w| {
        let m = p.lerp(q, 0.5 * (w[0] + w[1]));
        b.polygons().iter().all(|poly| poly.contains(m, tol) != Containment::Inside)
    })
}

/// The candidate set for `alpha` (0 gives the empty set, ∞ the visibility
/// segments between vertices), deduplicated and in canonical order.
pub fn generate_candidates(b: &PolygonSet, alpha: f64) -> Vec<CandidateArc> {
    if alpha <= 0.0 || b.is_empty() {
        return Vec::new();
    }
    let tol = b.tol();
    let nv = b.vertex_count();
    let verts = b.vertices();
    let mut raw: Vec<CandidateArc> = Vec::new();
    if alpha.is_infinite() {
        for i in 0..nv {
            for j in (i + 1)..nv {
                if b.edge_end(i) == j || b.edge_end(j) == i || verts[i].dist(verts[j]) <= tol {
                    continue;
                }
                if segment_avoids_interiors(b, verts[i], verts[j]) {
                    raw.push(CandidateArc {
                        curve: Curve::segment(verts[i], verts[j]),
                        a: AnchorPoint { location: verts[i], kind: AnchorKind::Vertex(i) },
                        b: AnchorPoint { location: verts[j], kind: AnchorKind::Vertex(j) },
                        generator: Generator::Visibility,
                    });
                }
            }
        }
        return raw;
    }
    for i in 0..nv {
        for j in (i + 1)..nv {
            for arc in vertex_vertex_arcs(verts[i], verts[j], alpha, tol) {
                let (ka, kb) = if arc.start().dist(verts[i]) <= arc.start().dist(verts[j]) { (i, j) } else { (j, i) };
                raw.push(CandidateArc {
                    curve: Curve::Arc(arc),
                    a: AnchorPoint { location: verts[ka], kind: AnchorKind::Vertex(ka) },
                    b: AnchorPoint { location: verts[kb], kind: AnchorKind::Vertex(kb) },
                    generator: Generator::VertexVertex,
                });
            }
        }
    }
    let edges: Vec<(Point, Point)> = (0..nv).map(|e| b.edge(e)).collect();
    for u in 0..nv {
        for (e, &(p, q)) in edges.iter().enumerate() {
            if crate::geom::point_segment_distance(verts[u], p, q).0 >= 2.0 * alpha {
                continue;
            }
            raw.extend(vertex_edge_tangent_arc(b, u, e, alpha));
        }
    }
    for e1 in 0..nv {
        for e2 in (e1 + 1)..nv {
            let (p, q) = edges[e1];
            let (r, s) = edges[e2];
            if BBox::of_points([p, q]).expanded(2.0 * alpha).overlaps(&BBox::of_points([r, s])) {
                raw.extend(edge_edge_bitangent_arc(b, e1, e2, alpha));
            }
        }
    }
    let mut kept: Vec<CandidateArc> = raw.into_iter().map(canonical).filter(|c| is_admissible(b, &c.curve)).collect();
    kept.sort_by(|x, y| {
        x.generator
            .cmp(&y.generator)
            .then(anchor_key(&x.a).total_cmp(&anchor_key(&y.a)))
            .then(anchor_key(&x.b).total_cmp(&anchor_key(&y.b)))
            .then(center(x).x.total_cmp(&center(y).x))
            .then(center(x).y.total_cmp(&center(y).y))
    });
    let mut out: Vec<CandidateArc> = Vec::with_capacity(kept.len());
    for c in kept {
        let dup = out.iter().rev().take(8).any(|o| same_curve(o, &c, tol));
        if !dup {
            out.push(c);
        }
    }
    out
}

/// Counterclockwise representative with anchors swapped accordingly.
fn canonical(c: CandidateArc) -> CandidateArc {
    match c.curve {
        Curve::Arc(a) if a.orientation == Orientation::Clockwise => CandidateArc {
            curve: Curve::Arc(a.reversed()),
            a: c.b,
            b: c.a,
            generator: c.generator,
        },
        _ => c,
    }
}

fn anchor_key(a: &AnchorPoint) -> f64 {
    match a.kind {
        AnchorKind::Vertex(v) => v as f64,
        AnchorKind::EdgeInterior { edge, t } => edge as f64 + t,
    }
}

fn center(c: &CandidateArc) -> Point {
    match &c.curve {
        Curve::Arc(a) => a.center,
        Curve::Segment(s) => s.from,
    }
}

fn same_curve(x: &CandidateArc, y: &CandidateArc, tol: f64) -> bool {
    x.curve.start().dist(y.curve.start()) <= tol
        && x.curve.end().dist(y.curve.end()) <= tol
        && x.curve.midpoint().dist(y.curve.midpoint()) <= tol
}

/// Angle of `p` as seen from the arc center, in [0, 2π).
pub fn anchor_angle(arc: &CircularArc, p: Point) -> f64 {
    normalize_angle((p - arc.center).angle())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Polygon;

    fn sq(x: f64, y: f64, s: f64) -> Polygon {
        Polygon::from_coords(&[(x, y), (x + s, y), (x + s, y + s), (x, y + s)]).unwrap()
    }

    #[test]
    fn vertex_pairs() {
        let o = Point::new(0.0, 0.0);
        assert!(vertex_vertex_arcs(o, Point::new(3.0, 0.0), 1.0, 1e-12).is_empty());
        assert!(vertex_vertex_arcs(o, o, 1.0, 1e-12).is_empty());
        let arcs = vertex_vertex_arcs(o, Point::new(1.0, 0.0), 1.0, 1e-12);
        assert_eq!(arcs.len(), 2);
        for a in &arcs {
            assert!((a.theta() - PI / 3.0).abs() < 1e-14);
        }
        assert!(arcs[0].point_at(0.5).y * arcs[1].point_at(0.5).y < 0.0);
    }

    #[test]
    fn bitangent_in_right_angle() {
        // Two long perpendicular edges of an L-shaped region: the x-axis edge
        // runs left-to-right under free space, the y-axis edge bottom-to-top.
        let l = Polygon::from_coords(&[(-10.0, -10.0), (10.0, -10.0), (10.0, 0.0), (0.0, 0.0), (0.0, 10.0), (-10.0, 10.0)]).unwrap();
        let b = PolygonSet::new(vec![l]).unwrap();
        let mut found = Vec::new();
        for e1 in 0..6 {
            for e2 in (e1 + 1)..6 {
                found.extend(edge_edge_bitangent_arc(&b, e1, e2, 1.0));
            }
        }
        let fillet: Vec<_> = found.iter().filter(|c| is_admissible(&b, &c.curve)).collect();
        assert_eq!(fillet.len(), 1);
        let arc = fillet[0].arc().unwrap();
        assert!(arc.center.dist(Point::new(1.0, 1.0)) < 1e-12);
        assert!((arc.theta() - PI / 2.0).abs() < 1e-12);
        assert!((arc.chord_length() - 2f64.sqrt()).abs() < 1e-12);
        let ends = [fillet[0].a.location, fillet[0].b.location];
        assert!(ends.iter().any(|p| p.dist(Point::new(1.0, 0.0)) < 1e-12));
        assert!(ends.iter().any(|p| p.dist(Point::new(0.0, 1.0)) < 1e-12));
    }

    #[test]
    fn parallel_edges_have_no_bitangent() {
        let b = PolygonSet::new(vec![sq(0.0, 0.0, 1.0), sq(0.0, 3.0, 1.0)]).unwrap();
        // Top edge of the lower square and bottom edge of the upper one are
        // parallel at distance 2 = 2α.
        assert!(edge_edge_bitangent_arc(&b, 2, 4, 1.0).is_empty());
        assert!(edge_edge_bitangent_arc(&b, 2, 4, 0.7).is_empty());
    }

    #[test]
    fn vertex_edge_tangent_construction() {
        // u sits one unit above a long edge of a wide slab.
        let slab = Polygon::from_coords(&[(-5.0, -1.0), (5.0, -1.0), (5.0, 0.0), (-5.0, 0.0)]).unwrap();
        let dot = Polygon::from_coords(&[(0.0, 1.0), (0.2, 1.3), (-0.2, 1.3)]).unwrap();
        let b = PolygonSet::new(vec![slab, dot]).unwrap();
        let u = 4;
        assert_eq!(b.vertex(u), Point::new(0.0, 1.0));
        let arcs = vertex_edge_tangent_arc(&b, u, 2, 1.0);
        // Centers (±1, 1) on the outer offset line; tangent points (±1, 0).
        let mut feet: Vec<f64> = arcs.iter().map(|c| c.b.location.x).collect();
        feet.sort_by(f64::total_cmp);
        assert_eq!(feet.len(), 2);
        assert!((feet[0] + 1.0).abs() < 1e-12 && (feet[1] - 1.0).abs() < 1e-12);
        for c in &arcs {
            let arc = c.arc().unwrap();
            assert!((arc.center.y - 1.0).abs() < 1e-12);
            assert!((arc.theta() - PI / 2.0).abs() < 1e-12);
        }
        assert!(vertex_edge_tangent_arc(&b, 0, 0, 1.0).is_empty());
    }

    #[test]
    fn zero_and_far_apart() {
        let b = PolygonSet::new(vec![sq(0.0, 0.0, 1.0), sq(6.0, 0.0, 1.0)]).unwrap();
        assert!(generate_candidates(&b, 0.0).is_empty());
        let c = generate_candidates(&b, 1.0);
        for k in &c {
            let pa = b.polygon_containing(k.a.location, -1.0);
            let xa = k.a.location.x;
            let xb = k.b.location.x;
            assert!((xa < 3.0) == (xb < 3.0), "{pa:?} connects the two squares");
        }
    }

    #[test]
    fn infinite_alpha_gives_segments() {
        let b = PolygonSet::new(vec![sq(0.0, 0.0, 1.0), sq(2.0, 0.0, 1.0)]).unwrap();
        let c = generate_candidates(&b, f64::INFINITY);
        assert!(c.iter().all(|k| !k.curve.is_arc()));
        // Across the gap: 4 facing-corner pairs are visible, plus the two
        // long top and bottom segments touching the near corners.
        assert!(c.len() >= 4);
    }
}
