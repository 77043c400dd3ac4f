use crate::geom::{chain_area, orient, point_segment_distance, BBox, Curve, Point, PolygonSet};
use crate::mincut::{merge_curves, BoundaryPiece, PieceKind, Region, Solution};
use crate::geom::ObjectiveBreakdown;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Loc {
    Vertex(usize),
    Edge(usize),
    Off,
}

impl Loc {
    pub fn is_vertex(self) -> bool {
        matches!(self, Loc::Vertex(_))
    }
}

/// Snapping queries against the input boundary.
pub(crate) struct Boundary {
    pub verts: Vec<Point>,
    pub edges: Vec<(Point, Point)>,
    pub snap: f64,
}

impl Boundary {
    pub fn new(b: &PolygonSet) -> Self {
        Boundary {
            verts: b.vertices(),
            edges: (0..b.vertex_count()).map(|g| b.edge(g)).collect(),
            snap: 64.0 * b.tol(),
        }
    }

    pub fn locate(&self, p: Point) -> Loc {
        let best = self
            .verts
            .iter()
            .enumerate()
            .map(|(i, v)| (v.dist(p), i))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((d, i)) = best {
            if d <= self.snap {
                return Loc::Vertex(i);
            }
        }
        match self.edges.iter().position(|&(a, b)| point_segment_distance(p, a, b).0 <= self.snap) {
            Some(e) => Loc::Edge(e),
            None => Loc::Off,
        }
    }

    pub fn snapped(&self, p: Point) -> Point {
        match self.locate(p) {
            Loc::Vertex(i) => self.verts[i],
            _ => p,
        }
    }

    /// The polygon edge containing the whole segment ab, if any.
    pub fn segment_edge(&self, a: Point, b: Point) -> Option<usize> {
        if a.dist(b) <= self.snap {
            return None;
        }
        self.edges.iter().position(|&(p, q)| {
            point_segment_distance(a, p, q).0 <= self.snap && point_segment_distance(b, p, q).0 <= self.snap
        })
    }

    /// Input vertices in the relative interior of ab, ordered from a to b.
    pub fn vertices_on_segment(&self, a: Point, b: Point) -> Vec<Point> {
        let bb = BBox::of_points([a, b]).expanded(self.snap);
        let mut hits: Vec<(f64, Point)> = self
            .verts
            .iter()
            .filter(|v| bb.contains(**v) && v.dist(a) > self.snap && v.dist(b) > self.snap)
            .filter_map(|&v| {
                let (d, t) = point_segment_distance(v, a, b);
                (d <= self.snap).then_some((t, v))
            })
            .collect();
        hits.sort_by(|x, y| x.0.total_cmp(&y.0));
        hits.dedup_by(|x, y| x.1.dist(y.1) <= self.snap);
        hits.into_iter().map(|h| h.1).collect()
    }

    /// Input vertices on or inside the closed polyline `ring`, on the strict
    /// `side` of the chord from `ring[0]` to its last point.
    pub fn vertices_in(&self, ring: &[Point], side: f64) -> Vec<Point> {
        let (a, z) = (ring[0], ring[ring.len() - 1]);
        let len = a.dist(z);
        let bb = BBox::of_points(ring.iter().copied()).expanded(self.snap);
        self.verts
            .iter()
            .copied()
            .filter(|&p| bb.contains(p) && p.dist(a) > self.snap && p.dist(z) > self.snap)
            .filter(|&p| side * orient(a, z, p) / len > self.snap)
            .filter(|&p| on_polyline(ring, p, self.snap) || inside_polyline(ring, p))
            .collect()
    }
}

pub(crate) fn polyline_length(pts: &[Point]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

pub(crate) fn ring_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    let o = ring[0];
    (0..n).map(|k| (ring[k] - o).cross(ring[(k + 1) % n] - o)).sum::<f64>() / 2.0
}

pub(crate) fn ring_length(ring: &[Point]) -> f64 {
    let n = ring.len();
    (0..n).map(|k| ring[k].dist(ring[(k + 1) % n])).sum()
}

fn on_polyline(ring: &[Point], p: Point, tol: f64) -> bool {
    let n = ring.len();
    (0..n).any(|k| point_segment_distance(p, ring[k], ring[(k + 1) % n]).0 <= tol)
}

/// Even-odd membership in the closed polyline.
fn inside_polyline(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    for k in 0..n {
        let (a, b) = (ring[k], ring[(k + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if x > p.x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Signed change of enclosed area when the path `old` is replaced by `new`
/// (same endpoints) in a counterclockwise-oriented boundary.
pub(crate) fn replaced_area(old: &[Curve], new: &[Curve]) -> f64 {
    let mut lp: Vec<Curve> = new.to_vec();
    lp.extend(old.iter().rev().map(Curve::reversed));
    chain_area(&lp)
}

pub(crate) fn segments(pts: &[Point]) -> Vec<Curve> {
    pts.windows(2).map(|w| Curve::segment(w[0], w[1])).collect()
}

/// Boundary rings of one region as closed polylines, region on the left.
#[derive(Clone, Debug)]
pub(crate) struct RegionRings {
    pub rings: Vec<Vec<Point>>,
    pub polygons: Vec<usize>,
}

/// Polylines of a solution whose boundaries consist of segments only;
/// `Err` carries the start of the first curved piece.
pub(crate) fn rings_of(s: &Solution) -> Result<Vec<RegionRings>, Point> {
    let mut out = Vec::with_capacity(s.regions.len());
    for r in &s.regions {
        let mut rings = Vec::with_capacity(r.cycles.len());
        for cyc in &r.cycles {
            let mut ring = Vec::new();
            for piece in cyc {
                for c in &piece.curves {
                    if c.is_arc() {
                        return Err(piece.start);
                    }
                    ring.push(c.start());
                }
            }
            rings.push(ring);
        }
        out.push(RegionRings { rings, polygons: r.polygons.clone() });
    }
    Ok(out)
}

/// Snaps points to input vertices, drops repeated points and zero-width
/// spikes, and splits free segments at input vertices they pass through.
pub(crate) fn clean_ring(bd: &Boundary, ring: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = ring.iter().map(|&p| bd.snapped(p)).collect();
    loop {
        let before = pts.len();
        pts.dedup_by(|a, b| a.dist(*b) <= bd.snap);
        while pts.len() > 1 && pts[0].dist(pts[pts.len() - 1]) <= bd.snap {
            pts.pop();
        }
        let n = pts.len();
        if n < 3 {
            return Vec::new();
        }
        let fold = (0..n).find(|&i| {
            let (a, p, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            let len = a.dist(p).max(p.dist(c));
            orient(a, p, c).abs() / len <= bd.snap && (p - a).dot(c - p) < 0.0
        });
        if let Some(i) = fold {
            pts.remove(i);
        }
        if pts.len() == before {
            break;
        }
    }
    let n = pts.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = (pts[k], pts[(k + 1) % n]);
        out.push(a);
        if bd.segment_edge(a, b).is_none() {
            out.extend(bd.vertices_on_segment(a, b));
        }
    }
    out
}

/// Splits a ring into maximal free and constrained pieces, with point
/// pieces between free pieces meeting on the input boundary.
fn ring_pieces(bd: &Boundary, ring: &[Point]) -> Vec<BoundaryPiece> {
    let n = ring.len();
    let kind: Vec<PieceKind> = (0..n)
        .map(|k| match bd.segment_edge(ring[k], ring[(k + 1) % n]) {
            Some(_) => PieceKind::Constrained,
            None => PieceKind::Free,
        })
        .collect();
    let on: Vec<bool> = ring.iter().map(|&p| bd.locate(p) != Loc::Off).collect();
    let starts = |k: usize| {
        let p = (k + n - 1) % n;
        kind[p] != kind[k] || (kind[k] == PieceKind::Free && on[k])
    };
    let seg = |k: usize| Curve::segment(ring[k], ring[(k + 1) % n]);
    let Some(first) = (0..n).find(|&k| starts(k)) else {
        let curves = merge_curves((0..n).map(seg).collect());
        return vec![BoundaryPiece { kind: kind[0], curves, start: ring[0], end: ring[0] }];
    };
    let mut pieces: Vec<BoundaryPiece> = Vec::new();
    let mut k = 0;
    while k < n {
        let i = (first + k) % n;
        let mut j = k + 1;
        while j < n && !starts((first + j) % n) {
            j += 1;
        }
        let curves = merge_curves((k..j).map(|m| seg((first + m) % n)).collect());
        let (start, end) = (ring[i], ring[(first + j) % n]);
        if kind[i] == PieceKind::Free && pieces.last().is_some_and(|p| p.kind == PieceKind::Free) {
            pieces.push(BoundaryPiece { kind: PieceKind::Constrained, curves: Vec::new(), start, end: start });
        }
        pieces.push(BoundaryPiece { kind: kind[i], curves, start, end });
        k = j;
    }
    if pieces.len() > 1 && pieces[0].kind == PieceKind::Free && pieces[pieces.len() - 1].kind == PieceKind::Free {
        let p = pieces[0].start;
        pieces.push(BoundaryPiece { kind: PieceKind::Constrained, curves: Vec::new(), start: p, end: p });
    }
    pieces
}

pub(crate) fn to_solution(bd: &Boundary, regions: &[RegionRings], alpha: f64) -> Solution {
    let (mut area, mut perimeter) = (0.0, 0.0);
    let mut out = Vec::with_capacity(regions.len());
    for r in regions {
        let mut rings: Vec<Vec<Point>> = r.rings.iter().map(|g| clean_ring(bd, g)).filter(|g| !g.is_empty()).collect();
        rings.sort_by(|a, b| ring_area(b).total_cmp(&ring_area(a)));
        let ra: f64 = rings.iter().map(|g| ring_area(g)).sum();
        let rp: f64 = rings.iter().map(|g| ring_length(g)).sum();
        area += ra;
        perimeter += rp;
        out.push(Region {
            cycles: rings.iter().map(|g| ring_pieces(bd, g)).collect(),
            area: ra,
            perimeter: rp,
            polygons: r.polygons.clone(),
        });
    }
    Solution {
        selected_faces: Vec::new(),
        regions: out,
        objective: ObjectiveBreakdown::new(area, perimeter, alpha),
        cut_value: None,
        constant_offset: None,
    }
}

/// First pair of ring segments that cross properly, reported by a point
/// near the crossing.
pub(crate) fn proper_crossing(regions: &[RegionRings], snap: f64) -> Option<Point> {
    let mut segs: Vec<(Point, Point)> = Vec::new();
    for r in regions {
        for g in &r.rings {
            let n = g.len();
            segs.extend((0..n).map(|k| (g[k], g[(k + 1) % n])));
        }
    }
    let boxes: Vec<BBox> = segs.iter().map(|&(a, b)| BBox::of_points([a, b])).collect();
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&i, &j| boxes[i].min.x.total_cmp(&boxes[j].min.x));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        active.retain(|&j| boxes[j].max.x >= boxes[i].min.x);
        for &j in &active {
            if boxes[i].overlaps(&boxes[j]) && segments_cross(segs[i], segs[j], snap) {
                return Some(segs[i].0.lerp(segs[i].1, 0.5));
            }
        }
        active.push(i);
    }
    None
}

fn segments_cross((a, b): (Point, Point), (c, d): (Point, Point), snap: f64) -> bool {
    let (l1, l2) = (a.dist(b), c.dist(d));
    if l1 <= snap || l2 <= snap {
        return false;
    }
    let (o1, o2) = (orient(a, b, c) / l1, orient(a, b, d) / l1);
    let (o3, o4) = (orient(c, d, a) / l2, orient(c, d, b) / l2);
    let strict = |x: f64, y: f64| (x > snap && y < -snap) || (x < -snap && y > snap);
    strict(o1, o2) && strict(o3, o4)
}
