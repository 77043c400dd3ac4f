//! Planar subdivisions of conv(B) \ B induced by polygon edges, hull edges and
//! extra curves (candidate arcs, triangulation edges, overlay boundaries).

mod builder;
mod triangulate;

pub use builder::{build, build_arrangement, InputCurve};
pub use triangulate::{free_triangles, triangulate};

use crate::geom::{chain_winding, Curve, Point};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArrangementError {
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("constraint edge {0} crosses another constraint")]
    ConstraintIntersection(usize),
    #[error("face {0} has an open boundary")]
    OpenBoundary(usize),
}

/// Where a piece of the arrangement came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Global edge index into the polygon set.
    PolygonEdge { poly: usize, edge: usize },
    Hull,
    Candidate(usize),
    Extra(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceRef {
    pub origin: Origin,
    /// Whether the source curve runs in the same direction as the sub-edge.
    pub same_direction: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceRole {
    Free,
    Polygon,
    Outer,
}

#[derive(Clone, Debug)]
pub struct SubEdge {
    /// Geometry from `vertices[from]` to `vertices[to]`.
    pub curve: Curve,
    pub from: usize,
    pub to: usize,
    pub sources: Vec<SourceRef>,
    /// XOR of the toggle bits of all sources.
    pub toggles: u8,
    pub face_left: usize,
    pub face_right: usize,
    pub length: f64,
}

impl SubEdge {
    pub fn is_polygon(&self) -> bool {
        self.sources.iter().any(|s| matches!(s.origin, Origin::PolygonEdge { .. }))
    }

    pub fn is_hull(&self) -> bool {
        self.sources.iter().any(|s| s.origin == Origin::Hull)
    }

    /// Candidate id if this piece lies on a candidate arc.
    pub fn candidate(&self) -> Option<usize> {
        self.sources.iter().find_map(|s| match s.origin {
            Origin::Candidate(i) => Some(i),
            _ => None,
        })
    }

    /// Source polygon edge, with the direction relative to this sub-edge.
    pub fn polygon_source(&self) -> Option<(usize, usize, bool)> {
        self.sources.iter().find_map(|s| match s.origin {
            Origin::PolygonEdge { poly, edge } => Some((poly, edge, s.same_direction)),
            _ => None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Face {
    /// One half-edge per boundary cycle. For bounded faces the first cycle
    /// is the outer one.
    pub cycles: Vec<usize>,
    pub area: f64,
    pub role: FaceRole,
    pub bounded: bool,
    pub polygon: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceMeasures {
    pub area: f64,
    pub perimeter: f64,
}

/// Half-edge representation: sub-edge `e` owns half-edges `2e` (along its
/// curve) and `2e + 1` (against it); every face lies left of its half-edges.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub vertices: Vec<Point>,
    pub edges: Vec<SubEdge>,
    pub faces: Vec<Face>,
    pub outer_face: usize,
    pub polygon_faces: Vec<usize>,
    pub components: usize,
    pub tol: f64,
    /// Reference point for shoelace sums.
    anchor: Point,
    next: Vec<usize>,
    half_face: Vec<usize>,
}

impl Subdivision {
    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn twin(h: usize) -> usize {
        h ^ 1
    }

    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }

    pub fn face_of(&self, h: usize) -> usize {
        self.half_face[h]
    }

    pub fn edge_of(h: usize) -> usize {
        h / 2
    }

    pub fn origin(&self, h: usize) -> usize {
        let e = &self.edges[h / 2];
        if h % 2 == 0 {
            e.from
        } else {
            e.to
        }
    }

    pub fn target(&self, h: usize) -> usize {
        self.origin(h ^ 1)
    }

    pub fn curve(&self, h: usize) -> Curve {
        let c = self.edges[h / 2].curve;
        if h % 2 == 0 {
            c
        } else {
            c.reversed()
        }
    }

    /// Whether the polygon edge under half-edge `h` runs along `h`, i.e. the
    /// polygon interior is on the left of `h`.
    pub fn is_polygon_forward(&self, h: usize) -> bool {
        match self.edges[h / 2].polygon_source() {
            Some((_, _, same)) => same == (h % 2 == 0),
            None => false,
        }
    }

    /// Shoelace term of half-edge `h` taken between its vertices, plus the
    /// signed circular segment for arcs.
    pub fn half_area(&self, h: usize) -> f64 {
        half_area_term(&self.vertices[self.origin(h)], &self.vertices[self.target(h)], &self.curve(h), self.anchor)
    }

    pub fn cycle_area(&self, start: usize) -> f64 {
        self.cycle(start).into_iter().map(|h| self.half_area(h)).sum()
    }

    pub fn cycle(&self, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut h = self.next[start];
        while h != start {
            out.push(h);
            h = self.next[h];
        }
        out
    }

    pub fn cycle_curves(&self, start: usize) -> Vec<Curve> {
        self.cycle(start).into_iter().map(|h| self.curve(h)).collect()
    }

    pub fn role(&self, f: usize) -> FaceRole {
        self.faces[f].role
    }

    pub fn free_faces(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.faces[f].role == FaceRole::Free).collect()
    }

    pub fn face_half_edges(&self, f: usize) -> Vec<usize> {
        self.faces[f].cycles.iter().flat_map(|&h| self.cycle(h)).collect()
    }

    /// Area from the boundary cycles (shoelace plus circular-segment terms)
    /// and total boundary length.
    pub fn face_measures(&self, f: usize) -> Result<FaceMeasures, ArrangementError> {
        let face = self.faces.get(f).ok_or(ArrangementError::OpenBoundary(f))?;
        let mut area = 0.0;
        let mut perimeter = 0.0;
        for &c in &face.cycles {
            let hs = self.cycle(c);
            for w in 0..hs.len() {
                if self.target(hs[w]) != self.origin(hs[(w + 1) % hs.len()]) {
                    return Err(ArrangementError::OpenBoundary(f));
                }
            }
            area += hs.iter().map(|&h| self.half_area(h)).sum::<f64>();
            perimeter += hs.iter().map(|&h| self.edges[h / 2].length).sum::<f64>();
        }
        Ok(FaceMeasures { area: if face.bounded { area } else { 0.0 }, perimeter })
    }

    /// Whether `p` lies inside bounded face `f` (on its outer cycle's
    /// interior and outside its holes).
    pub fn face_contains(&self, f: usize, p: Point) -> bool {
        let face = &self.faces[f];
        if !face.bounded {
            return false;
        }
        let mut w = 0;
        for &c in &face.cycles {
            w += chain_winding(&self.cycle_curves(c), p);
        }
        w != 0
    }

    pub fn free_area(&self) -> f64 {
        self.faces.iter().filter(|f| f.role == FaceRole::Free).map(|f| f.area).sum()
    }

    pub fn euler_holds(&self) -> bool {
        let v = self.vertices.len() as i64;
        let e = self.edges.len() as i64;
        let f = self.faces.len() as i64;
        v - e + f == 1 + self.components as i64
    }

    pub fn arc_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.curve.is_arc()).count()
    }

    /// Sort key of an outgoing half-edge around its origin: the direction of
    /// the chord from the origin to where the curve leaves the disk of
    /// radius `rho` about it.
    pub(crate) fn angular_key(curve: &Curve, rho: f64) -> f64 {
        let t = curve.tangent_at(0.0).angle();
        let turn = match curve {
            Curve::Segment(_) => 0.0,
            Curve::Arc(a) => a.orientation.sign() * (rho / (2.0 * a.radius)).min(1.0).asin(),
        };
        (t + turn).rem_euclid(TAU)
    }
}

pub(crate) fn half_area_term(a: &Point, b: &Point, curve: &Curve, anchor: Point) -> f64 {
    let base = 0.5 * (*a - anchor).cross(*b - anchor);
    match curve {
        Curve::Segment(_) => base,
        Curve::Arc(arc) => base + arc.orientation.sign() * arc.segment_area(),
    }
}
