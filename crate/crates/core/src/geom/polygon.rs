use super::{
    convex_hull, intersect, orient, point_segment_distance, BBox, Curve, GeomError, Point, EPS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexRef {
    pub polygon: usize,
    pub index: usize,
}

/// Edge `index` of `polygon` runs from vertex `index` to vertex `index + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub polygon: usize,
    pub index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Simple polygon with a counterclockwise vertex ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Normalizes the ring (drops repeated and collinear vertices, enforces
    /// counterclockwise order) and rejects self-intersections.
    pub fn new(points: Vec<Point>) -> Result<Self, GeomError> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite { index: 0 });
        }
        let tol = EPS * BBox::of_points(points.iter().copied()).diagonal().max(f64::MIN_POSITIVE);
        let mut ring = points;
        if ring.len() > 1 && ring[0].dist(ring[ring.len() - 1]) <= tol {
            ring.pop();
        }
        let ring = strip_redundant(ring, tol);
        if ring.len() < 3 {
            return Err(GeomError::DegeneratePolygon { index: 0 });
        }
        let mut poly = Polygon { vertices: ring };
        if poly.signed_area() < 0.0 {
            poly.vertices.reverse();
        }
        if poly.signed_area() <= tol * tol {
            return Err(GeomError::DegeneratePolygon { index: 0 });
        }
        if !poly.is_simple(tol) {
            return Err(GeomError::SelfIntersectingInput { index: 0 });
        }
        Ok(poly)
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self, GeomError> {
        Polygon::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertices[i], self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    pub fn signed_area(&self) -> f64 {
        self.edges().map(|(a, b)| 0.5 * a.cross(b)).sum()
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn bbox(&self) -> BBox {
        BBox::of_points(self.vertices.iter().copied())
    }

    pub fn contains(&self, p: Point, tol: f64) -> Containment {
        let mut inside = false;
        for (a, b) in self.edges() {
            if point_segment_distance(p, a, b).0 <= tol {
                return Containment::Boundary;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        if inside {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    fn is_simple(&self, tol: f64) -> bool {
        let n = self.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            let ei = Curve::segment(a, b);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (c, d) = self.edge(j);
                let hits = intersect(&ei, &Curve::segment(c, d), tol);
                if adjacent {
                    // Only the shared vertex may be common.
                    let shared = if j == i + 1 { b } else { a };
                    if hits.iter().any(|h| h.point.dist(shared) > tol) {
                        return false;
                    }
                } else if !hits.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn scaled(&self, c: f64) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|&p| p * c).collect() }
    }
}

fn strip_redundant(mut ring: Vec<Point>, tol: f64) -> Vec<Point> {
    loop {
        let n = ring.len();
        if n < 3 {
            return ring;
        }
        let mut removed = false;
        for i in 0..n {
            let a = ring[(i + n - 1) % n];
            let b = ring[i];
            let c = ring[(i + 1) % n];
            let dup = a.dist(b) <= tol;
            let flat = point_segment_distance(b, a, c).0 <= tol
                || (a.dist(c) <= tol)
                || (orient(a, b, c).abs() <= tol * a.dist(c) && (b - a).dot(c - b) <= 0.0);
            if dup || flat {
                ring.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return ring;
        }
    }
}

/// Interior-disjoint polygons; polygon edges are split wherever a vertex of
/// another polygon lies on them, so shared boundaries align vertex-for-vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonSet {
    polygons: Vec<Polygon>,
    offsets: Vec<usize>,
    diameter: f64,
    eps: f64,
}

impl PolygonSet {
    pub fn new(polygons: Vec<Polygon>) -> Result<Self, GeomError> {
        PolygonSet::with_epsilon(polygons, EPS)
    }

    /// Like `new`, with distance tolerance `eps` times the instance diameter.
    pub fn with_epsilon(polygons: Vec<Polygon>, eps: f64) -> Result<Self, GeomError> {
        let diameter = polygons
            .iter()
            .map(Polygon::bbox)
            .fold(BBox::empty(), |a, b| a.union(&b))
            .diagonal();
        let tol = eps * diameter.max(f64::MIN_POSITIVE);
        check_disjoint(&polygons, tol)?;
        let polygons = split_t_junctions(polygons, tol);
        let mut offsets = Vec::with_capacity(polygons.len() + 1);
        let mut acc = 0;
        for p in &polygons {
            offsets.push(acc);
            acc += p.len();
        }
        offsets.push(acc);
        Ok(PolygonSet { polygons, offsets, diameter: if acc == 0 { 0.0 } else { diameter }, eps })
    }

    /// Builds the set from raw rings, normalizing each one.
    pub fn from_rings(rings: Vec<Vec<Point>>) -> Result<Self, GeomError> {
        let mut polys = Vec::with_capacity(rings.len());
        for (i, r) in rings.into_iter().enumerate() {
            polys.push(Polygon::new(r).map_err(|e| reindex(e, i))?);
        }
        PolygonSet::new(polys)
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn len(&self) -> usize {
        self.polygons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Global index of a vertex; edges share the numbering of their start.
    pub fn global_index(&self, v: VertexRef) -> usize {
        self.offsets[v.polygon] + v.index
    }

    pub fn vertex_ref(&self, g: usize) -> VertexRef {
        let p = self.offsets.partition_point(|&o| o <= g) - 1;
        VertexRef { polygon: p, index: g - self.offsets[p] }
    }

    pub fn vertex(&self, g: usize) -> Point {
        let r = self.vertex_ref(g);
        self.polygons[r.polygon].vertices[r.index]
    }

    pub fn vertices(&self) -> Vec<Point> {
        self.polygons.iter().flat_map(|p| p.vertices.iter().copied()).collect()
    }

    /// Global vertex index of the end of edge `g`.
    pub fn edge_end(&self, g: usize) -> usize {
        let r = self.vertex_ref(g);
        self.offsets[r.polygon] + (r.index + 1) % self.polygons[r.polygon].len()
    }

    pub fn edge(&self, g: usize) -> (Point, Point) {
        let r = self.vertex_ref(g);
        self.polygons[r.polygon].edge(r.index)
    }

    pub fn edges(&self) -> Vec<(EdgeRef, Point, Point)> {
        let mut out = Vec::with_capacity(self.vertex_count());
        for (pi, p) in self.polygons.iter().enumerate() {
            for i in 0..p.len() {
                let (a, b) = p.edge(i);
                out.push((EdgeRef { polygon: pi, index: i }, a, b));
            }
        }
        out
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Relative tolerance the set was built with.
    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    /// Absolute distance tolerance for this instance.
    pub fn tol(&self) -> f64 {
        self.eps * self.diameter.max(1e-300)
    }

    pub fn area(&self) -> f64 {
        self.polygons.iter().map(Polygon::area).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.polygons.iter().map(Polygon::perimeter).sum()
    }

    pub fn bbox(&self) -> BBox {
        self.polygons.iter().map(Polygon::bbox).fold(BBox::empty(), |a, b| a.union(&b))
    }

    /// Convex hull of all vertices, counterclockwise.
    pub fn hull(&self) -> Vec<Point> {
        convex_hull(&self.vertices(), self.tol())
    }

    pub fn hull_area(&self) -> f64 {
        let h = self.hull();
        (0..h.len()).map(|i| 0.5 * h[i].cross(h[(i + 1) % h.len()])).sum()
    }

    /// Index of the polygon containing `p` in its interior (beyond `tol`).
    pub fn polygon_containing(&self, p: Point, tol: f64) -> Option<usize> {
        self.polygons.iter().position(|poly| {
            poly.bbox().expanded(tol).contains(p) && poly.contains(p, tol) == Containment::Inside
        })
    }

    /// Whether `p` lies on some polygon boundary within `tol`.
    pub fn on_boundary(&self, p: Point, tol: f64) -> bool {
        self.edges().iter().any(|&(_, a, b)| point_segment_distance(p, a, b).0 <= tol)
    }

    pub fn scaled(&self, c: f64) -> PolygonSet {
        PolygonSet {
            polygons: self.polygons.iter().map(|p| p.scaled(c)).collect(),
            offsets: self.offsets.clone(),
            diameter: self.diameter * c,
            eps: self.eps,
        }
    }

    /// The sub-instance formed by the given polygons, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<PolygonSet, GeomError> {
        PolygonSet::with_epsilon(indices.iter().map(|&i| self.polygons[i].clone()).collect(), self.eps)
    }
}

fn reindex(e: GeomError, i: usize) -> GeomError {
    match e {
        GeomError::SelfIntersectingInput { .. } => GeomError::SelfIntersectingInput { index: i },
        GeomError::DegeneratePolygon { .. } => GeomError::DegeneratePolygon { index: i },
        GeomError::NonFinite { .. } => GeomError::NonFinite { index: i },
        other => other,
    }
}

fn check_disjoint(polys: &[Polygon], tol: f64) -> Result<(), GeomError> {
    let boxes: Vec<BBox> = polys.iter().map(|p| p.bbox().expanded(tol)).collect();
    let probe = 1e3 * tol;
    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            if !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            let (a, b) = (&polys[i], &polys[j]);
            for (p, q) in a.edges() {
                let ea = Curve::segment(p, q);
                for (r, s) in b.edges() {
                    for h in intersect(&ea, &Curve::segment(r, s), tol) {
                        let interior_a = h.point.dist(p) > tol && h.point.dist(q) > tol;
                        let interior_b = h.point.dist(r) > tol && h.point.dist(s) > tol;
                        let parallel = (q - p).cross(s - r).abs() <= 1e-12 * p.dist(q) * r.dist(s);
                        if interior_a && interior_b && !parallel {
                            return Err(GeomError::OverlappingInputs(i, j));
                        }
                    }
                }
            }
            for (x, y) in [(a, b), (b, a)] {
                for &v in x.vertices() {
                    if y.contains(v, tol) == Containment::Inside {
                        return Err(GeomError::OverlappingInputs(i, j));
                    }
                }
                for (p, q) in x.edges() {
                    let m = p.lerp(q, 0.5) + (q - p).unit().perp() * probe;
                    if y.contains(m, tol) == Containment::Inside {
                        return Err(GeomError::OverlappingInputs(i, j));
                    }
                }
            }
        }
    }
    Ok(())
}

fn split_t_junctions(polys: Vec<Polygon>, tol: f64) -> Vec<Polygon> {
    let boxes: Vec<BBox> = polys.iter().map(|p| p.bbox().expanded(tol)).collect();
    let mut out = Vec::with_capacity(polys.len());
    for (i, poly) in polys.iter().enumerate() {
        let mut ring = Vec::with_capacity(poly.len());
        for (a, b) in poly.edges() {
            ring.push(a);
            let mut extra: Vec<(f64, Point)> = Vec::new();
            for (j, other) in polys.iter().enumerate() {
                if j == i || !boxes[i].overlaps(&boxes[j]) {
                    continue;
                }
                for &v in other.vertices() {
                    let (d, t) = point_segment_distance(v, a, b);
                    if d <= tol && v.dist(a) > tol && v.dist(b) > tol {
                        extra.push((t, v));
                    }
                }
            }
            extra.sort_by(|x, y| x.0.total_cmp(&y.0));
            extra.dedup_by(|x, y| x.1.dist(y.1) <= tol);
            ring.extend(extra.into_iter().map(|(_, v)| v));
        }
        out.push(Polygon { vertices: ring });
    }
    out
}
