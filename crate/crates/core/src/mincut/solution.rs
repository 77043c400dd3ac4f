use crate::arrangement::{FaceRole, Subdivision};
use crate::geom::{Curve, ObjectiveBreakdown, Point, PolygonSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    Free,
    Constrained,
}

/// A maximal run of boundary curves of one kind. Constrained pieces may be
/// single points, in which case `curves` is empty.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPiece {
    pub kind: PieceKind,
    pub curves: Vec<Curve>,
    pub start: Point,
    pub end: Point,
}

impl BoundaryPiece {
    pub fn length(&self) -> f64 {
        self.curves.iter().map(Curve::length).sum()
    }

    pub fn is_point(&self) -> bool {
        self.curves.is_empty()
    }
}

/// A connected solution region. `cycles[0]` is the counterclockwise outer
/// boundary, further cycles are clockwise holes; the region lies left of
/// every cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub cycles: Vec<Vec<BoundaryPiece>>,
    pub area: f64,
    pub perimeter: f64,
    pub polygons: Vec<usize>,
}

impl Region {
    pub fn cycle_curves(&self, k: usize) -> Vec<Curve> {
        self.cycles[k].iter().flat_map(|p| p.curves.iter().copied()).collect()
    }

    pub fn all_curves(&self) -> Vec<Vec<Curve>> {
        (0..self.cycles.len()).map(|k| self.cycle_curves(k)).collect()
    }

    pub fn pieces(&self) -> impl Iterator<Item = &BoundaryPiece> {
        self.cycles.iter().flatten()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Selected faces of the subdivision the solution was extracted from,
    /// polygon cells included.
    pub selected_faces: Vec<usize>,
    pub regions: Vec<Region>,
    pub objective: ObjectiveBreakdown,
    pub cut_value: Option<f64>,
    pub constant_offset: Option<f64>,
}

impl Solution {
    pub fn free_pieces(&self) -> impl Iterator<Item = &BoundaryPiece> {
        self.regions.iter().flat_map(|r| r.pieces()).filter(|p| p.kind == PieceKind::Free)
    }

    /// Boundary cycles of every region as curve chains.
    pub fn boundary_chains(&self) -> Vec<Vec<Curve>> {
        self.regions.iter().flat_map(|r| r.all_curves()).collect()
    }

    pub fn arc_count(&self) -> usize {
        self.free_pieces().flat_map(|p| p.curves.iter()).filter(|c| c.is_arc()).count()
    }

    /// Winding-number membership test against all region boundaries.
    pub fn contains(&self, p: Point) -> bool {
        self.boundary_chains().iter().map(|c| crate::geom::chain_winding(c, p)).sum::<i32>() != 0
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Regions, boundary pieces and objective of the face selection `inside`
/// (indexed by face; polygon faces must be inside, outer faces outside).
pub fn trace_solution(b: &PolygonSet, d: &Subdivision, inside: &[bool], alpha: f64) -> Solution {
    let nf = d.faces.len();
    let nh = d.half_edge_count();
    let boundary = |h: usize| inside[d.face_of(h)] && !inside[d.face_of(h ^ 1)];
    let mut parent: Vec<usize> = (0..nf).collect();
    for e in &d.edges {
        if inside[e.face_left] && inside[e.face_right] {
            let (x, y) = (find(&mut parent, e.face_left), find(&mut parent, e.face_right));
            if x != y {
                parent[x] = y;
            }
        }
    }
    let mut region_of_root: Vec<usize> = vec![usize::MAX; nf];
    let mut regions: Vec<Region> = Vec::new();
    for f in 0..nf {
        if !inside[f] {
            continue;
        }
        let r = find(&mut parent, f);
        if region_of_root[r] == usize::MAX {
            region_of_root[r] = regions.len();
            regions.push(Region { cycles: Vec::new(), area: 0.0, perimeter: 0.0, polygons: Vec::new() });
        }
        let reg = &mut regions[region_of_root[r]];
        reg.area += d.faces[f].area;
        if d.faces[f].role == FaceRole::Polygon {
            if let Some(p) = d.faces[f].polygon {
                if !reg.polygons.contains(&p) {
                    reg.polygons.push(p);
                }
            }
        }
    }
    let mut seen = vec![false; nh];
    let mut raw_cycles: Vec<(usize, Vec<usize>)> = Vec::new();
    for h0 in 0..nh {
        if seen[h0] || !boundary(h0) {
            continue;
        }
        let mut cyc = Vec::new();
        let mut h = h0;
        loop {
            seen[h] = true;
            cyc.push(h);
            let mut e = d.next(h);
            while !boundary(e) {
                e = d.next(e ^ 1);
            }
            h = e;
            if h == h0 || seen[h] {
                break;
            }
        }
        let reg = region_of_root[find(&mut parent, d.face_of(h0))];
        raw_cycles.push((reg, cyc));
    }
    let on_boundary_vertex = vertex_on_input(b, d, &raw_cycles);
    let mut perimeter = 0.0;
    for (reg, cyc) in raw_cycles {
        let pieces = split_pieces(d, &cyc, &on_boundary_vertex);
        let len: f64 = cyc.iter().map(|&h| d.edges[h / 2].length).sum();
        perimeter += len;
        let r = &mut regions[reg];
        r.perimeter += len;
        if cyc.iter().map(|&h| d.half_area(h)).sum::<f64>() > 0.0 {
            r.cycles.insert(0, pieces);
        } else {
            r.cycles.push(pieces);
        }
    }
    for r in &mut regions {
        r.polygons.sort_unstable();
    }
    regions.sort_by(|x, y| x.polygons.first().cmp(&y.polygons.first()));
    let area: f64 = (0..nf).filter(|&f| inside[f]).map(|f| d.faces[f].area).sum();
    Solution {
        selected_faces: (0..nf).filter(|&f| inside[f]).collect(),
        regions,
        objective: ObjectiveBreakdown::new(area, perimeter, alpha),
        cut_value: None,
        constant_offset: None,
    }
}

/// Whether each arrangement vertex lies on the input boundary; vertices off
/// the given cycles are only classified by incidence to polygon edges.
fn vertex_on_input(b: &PolygonSet, d: &Subdivision, cycles: &[(usize, Vec<usize>)]) -> Vec<bool> {
    let mut on = vec![false; d.vertices.len()];
    for e in &d.edges {
        if e.is_polygon() {
            on[e.from] = true;
            on[e.to] = true;
        }
    }
    for &h in cycles.iter().flat_map(|(_, c)| c.iter()) {
        let v = d.origin(h);
        if !on[v] {
            on[v] = b.on_boundary(d.vertices[v], 8.0 * d.tol);
        }
    }
    on
}

fn split_pieces(d: &Subdivision, cyc: &[usize], on_input: &[bool]) -> Vec<BoundaryPiece> {
    let kind = |h: usize| if d.edges[h / 2].is_polygon() { PieceKind::Constrained } else { PieceKind::Free };
    let n = cyc.len();
    // A piece starts at h when its kind differs from the previous half-edge,
    // or when two free half-edges meet at a point of the input boundary.
    let starts_piece = |k: usize| {
        let (p, h) = (cyc[(k + n - 1) % n], cyc[k]);
        kind(p) != kind(h) || (kind(h) == PieceKind::Free && on_input[d.origin(h)])
    };
    let Some(first) = (0..n).find(|&k| starts_piece(k)) else {
        let curves = merge_curves(cyc.iter().map(|&h| d.curve(h)).collect());
        let p = d.vertices[d.origin(cyc[0])];
        return vec![BoundaryPiece { kind: kind(cyc[0]), curves, start: p, end: p }];
    };
    let mut pieces: Vec<BoundaryPiece> = Vec::new();
    let mut k = 0;
    while k < n {
        let i = (first + k) % n;
        let h = cyc[i];
        let mut run = vec![d.curve(h)];
        let mut j = k + 1;
        while j < n && !starts_piece((first + j) % n) {
            run.push(d.curve(cyc[(first + j) % n]));
            j += 1;
        }
        let start = d.vertices[d.origin(h)];
        let end = d.vertices[d.target(cyc[(first + j - 1) % n])];
        if kind(h) == PieceKind::Free {
            if let Some(prev) = pieces.last() {
                if prev.kind == PieceKind::Free {
                    pieces.push(BoundaryPiece { kind: PieceKind::Constrained, curves: Vec::new(), start, end: start });
                }
            }
        }
        pieces.push(BoundaryPiece { kind: kind(h), curves: merge_curves(run), start, end });
        k = j;
    }
    if pieces.len() > 1 && pieces[0].kind == PieceKind::Free && pieces[pieces.len() - 1].kind == PieceKind::Free {
        let p = pieces[0].start;
        pieces.push(BoundaryPiece { kind: PieceKind::Constrained, curves: Vec::new(), start: p, end: p });
    }
    pieces
}

/// Joins consecutive collinear segments and co-circular arcs.
pub(crate) fn merge_curves(curves: Vec<Curve>) -> Vec<Curve> {
    let mut out: Vec<Curve> = Vec::with_capacity(curves.len());
    for c in curves {
        if let Some(last) = out.last_mut() {
            if let Some(m) = join(last, &c) {
                *last = m;
                continue;
            }
        }
        out.push(c);
    }
    out
}

fn join(a: &Curve, b: &Curve) -> Option<Curve> {
    match (a, b) {
        (Curve::Segment(s), Curve::Segment(t)) => {
            let (d1, d2) = (s.to - s.from, t.to - t.from);
            let ok = d1.cross(d2).abs() <= 1e-12 * d1.norm() * d2.norm() && d1.dot(d2) > 0.0;
            ok.then(|| Curve::segment(s.from, t.to))
        }
        (Curve::Arc(x), Curve::Arc(y)) => {
            let same = x.orientation == y.orientation
                && x.center.dist(y.center) <= 1e-9 * x.radius
                && (x.radius - y.radius).abs() <= 1e-9 * x.radius
                && x.sweep + y.sweep < std::f64::consts::TAU;
            same.then(|| {
                let mut m = *x;
                m.sweep = x.sweep + y.sweep;
                Curve::Arc(m)
            })
        }
        _ => None,
    }
}
