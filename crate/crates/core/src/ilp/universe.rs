use super::IlpError;
use crate::geom::{orient, point_segment_distance, Containment, Point, PolygonSet};
use std::collections::HashMap;

pub const DEFAULT_VERTEX_CAP: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeClass {
    /// Neither a polygon edge nor on the hull.
    Free,
    /// On the hull but not a polygon edge.
    Hull,
    /// Polygon edge in the interior of the hull.
    Polygon,
    /// Polygon edge on the hull; constant in every solution.
    HullPolygon,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniverseEdge {
    pub from: usize,
    pub to: usize,
    pub class: EdgeClass,
    pub length: f64,
    /// Triangles whose third vertex lies left of `from → to`.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniverseTriangle {
    /// Counterclockwise.
    pub vertices: [usize; 3],
    pub edges: [usize; 3],
    pub area: f64,
}

/// Every straight edge and empty triangle on the input vertices that can
/// appear in a triangulation of conv(B) \ B.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeUniverse {
    pub points: Vec<Point>,
    pub edges: Vec<UniverseEdge>,
    pub triangles: Vec<UniverseTriangle>,
    pub polygon_area: f64,
    /// Polygon edges shared by two polygons; they bound no free area.
    pub shared_edges: usize,
}

impl EdgeUniverse {
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.iter().position(|e| (e.from, e.to) == (a, b) || (e.from, e.to) == (b, a))
    }

    pub fn count(&self, class: EdgeClass) -> usize {
        self.edges.iter().filter(|e| e.class == class).count()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        self.triangles[t].vertices.map(|v| self.points[v])
    }
}

/// Distinct input vertices, in input order.
fn distinct_vertices(b: &PolygonSet, snap: f64) -> (Vec<Point>, Vec<usize>) {
    let mut points: Vec<Point> = Vec::new();
    let mut id = Vec::with_capacity(b.vertex_count());
    for p in b.vertices() {
        match points.iter().position(|q| q.dist(p) <= snap) {
            Some(i) => id.push(i),
            None => {
                id.push(points.len());
                points.push(p);
            }
        }
    }
    (points, id)
}

fn properly_cross(a: Point, b: Point, c: Point, d: Point, tol: f64) -> bool {
    let (la, lc) = (a.dist(b).max(f64::MIN_POSITIVE), c.dist(d).max(f64::MIN_POSITIVE));
    let o1 = orient(a, b, c) / la;
    let o2 = orient(a, b, d) / la;
    let o3 = orient(c, d, a) / lc;
    let o4 = orient(c, d, b) / lc;
    ((o1 > tol && o2 < -tol) || (o1 < -tol && o2 > tol)) && ((o3 > tol && o4 < -tol) || (o3 < -tol && o4 > tol))
}

pub fn enumerate_universe(b: &PolygonSet) -> Result<EdgeUniverse, IlpError> {
    enumerate_universe_capped(b, DEFAULT_VERTEX_CAP)
}

pub fn enumerate_universe_capped(b: &PolygonSet, cap: usize) -> Result<EdgeUniverse, IlpError> {
    let tol = b.tol();
    let snap = 8.0 * tol;
    let (points, id) = distinct_vertices(b, snap);
    let n = points.len();
    if n > cap {
        return Err(IlpError::TooLarge(format!("{n} vertices exceed the cap of {cap}")));
    }

    // Polygon edges keyed by unordered endpoint ids, with the number of
    // polygons using them.
    let mut polygon_edges: HashMap<(usize, usize), usize> = HashMap::new();
    let mut segments: Vec<(Point, Point)> = Vec::new();
    for g in 0..b.vertex_count() {
        let (i, j) = (id[g], id[b.edge_end(g)]);
        *polygon_edges.entry((i.min(j), i.max(j))).or_default() += 1;
        segments.push(b.edge(g));
    }
    let shared_edges = polygon_edges.values().filter(|&&c| c > 1).count();

    let on_hull = |i: usize, j: usize| {
        let (p, q) = (points[i], points[j]);
        let l = p.dist(q);
        let (mut pos, mut neg) = (false, false);
        for &r in &points {
            let o = orient(p, q, r) / l;
            pos |= o > snap;
            neg |= o < -snap;
        }
        !(pos && neg)
    };
    let outside_polygons = |p: Point| b.polygons().iter().all(|poly| poly.contains(p, tol) == Containment::Outside);

    let mut edges: Vec<UniverseEdge> = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (p, q) = (points[i], points[j]);
            let class = match polygon_edges.get(&(i, j)) {
                Some(&c) if c > 1 => continue,
                Some(_) if on_hull(i, j) => EdgeClass::HullPolygon,
                Some(_) => EdgeClass::Polygon,
                None => {
                    let blocked = (0..n).any(|k| k != i && k != j && point_segment_distance(points[k], p, q).0 <= snap);
                    if blocked
                        || segments.iter().any(|&(c, d)| properly_cross(p, q, c, d, snap))
                        || !outside_polygons(p.lerp(q, 0.5))
                    {
                        continue;
                    }
                    if on_hull(i, j) {
                        EdgeClass::Hull
                    } else {
                        EdgeClass::Free
                    }
                }
            };
            index.insert((i, j), edges.len());
            edges.push(UniverseEdge { from: i, to: j, class, length: p.dist(q), left: Vec::new(), right: Vec::new() });
        }
    }

    let mut triangles: Vec<UniverseTriangle> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let Some(&eij) = index.get(&(i, j)) else { continue };
            for k in (j + 1)..n {
                let (Some(&eik), Some(&ejk)) = (index.get(&(i, k)), index.get(&(j, k))) else { continue };
                let [a, bb, c] = [points[i], points[j], points[k]];
                let o = orient(a, bb, c);
                let longest = a.dist(bb).max(a.dist(c)).max(bb.dist(c));
                if o.abs() <= snap * longest {
                    continue;
                }
                let vertices = if o > 0.0 { [i, j, k] } else { [i, k, j] };
                let [p0, p1, p2] = vertices.map(|v| points[v]);
                let strictly_inside = |r: Point| {
                    [(p0, p1), (p1, p2), (p2, p0)].iter().all(|&(s, t)| orient(s, t, r) / s.dist(t) > snap)
                };
                if (0..n).any(|m| m != i && m != j && m != k && strictly_inside(points[m])) {
                    continue;
                }
                if !outside_polygons((a + bb + c) / 3.0) {
                    continue;
                }
                let edge_of = |u: usize, v: usize| index[&(u.min(v), u.max(v))];
                let tid = triangles.len();
                triangles.push(UniverseTriangle {
                    vertices,
                    edges: [edge_of(vertices[0], vertices[1]), edge_of(vertices[1], vertices[2]), edge_of(vertices[2], vertices[0])],
                    area: 0.5 * o.abs(),
                });
                for (e, third) in [(eij, k), (eik, j), (ejk, i)] {
                    let ed = &mut edges[e];
                    if orient(points[ed.from], points[ed.to], points[third]) > 0.0 {
                        ed.left.push(tid);
                    } else {
                        ed.right.push(tid);
                    }
                }
            }
        }
    }
    for e in &mut edges {
        if e.left.is_empty() && !e.right.is_empty() {
            std::mem::swap(&mut e.from, &mut e.to);
            std::mem::swap(&mut e.left, &mut e.right);
        }
    }
    Ok(EdgeUniverse { points, edges, triangles, polygon_area: b.area(), shared_edges })
}
