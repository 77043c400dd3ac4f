//! Validation of solutions against their input, independent of how they were
//! produced.

use crate::geom::{chain_area, chain_winding, BBox, Curve, Point, Polygon, PolygonSet};
use crate::mincut::{PieceKind, Solution};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeasibilityError {
    #[error("cycle {cycle} of region {region} is not closed")]
    OpenCycle { region: usize, cycle: usize },
    #[error("region {region} is not on the left of its boundary")]
    Orientation { region: usize },
    #[error("region {0} has non-positive area")]
    EmptyRegion(usize),
    #[error("boundary curves cross near ({x}, {y})")]
    BoundaryCrossing { x: f64, y: f64 },
    #[error("polygon {polygon} crosses a region boundary")]
    PolygonCrossing { polygon: usize },
    #[error("polygon {polygon} is covered by {count} regions")]
    Coverage { polygon: usize, count: usize },
    #[error("polygon {polygon} is not listed by the region covering it")]
    Membership { polygon: usize },
    #[error("regions {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("free piece from ({x}, {y}) violates: {reason}")]
    Structure { x: f64, y: f64, reason: String },
}

/// Structural requirements on free pieces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreePieceRule {
    pub segments: bool,
    pub max_length: Option<f64>,
    /// Number of endpoints that must be input vertices (0, 1 or 2).
    pub vertex_ends: usize,
}

impl FreePieceRule {
    pub const ANY: FreePieceRule = FreePieceRule { segments: false, max_length: None, vertex_ends: 0 };

    pub fn short_segments(alpha: f64) -> Self {
        FreePieceRule { segments: true, max_length: Some(2.0 * alpha), vertex_ends: 0 }
    }

    pub fn one_vertex_end() -> Self {
        FreePieceRule { segments: true, max_length: None, vertex_ends: 1 }
    }

    pub fn vertex_to_vertex() -> Self {
        FreePieceRule { segments: true, max_length: None, vertex_ends: 2 }
    }
}

fn snap(b: &PolygonSet) -> f64 {
    64.0 * b.tol()
}

/// A point strictly inside `poly`: the centroid of an ear.
fn interior_point(poly: &Polygon, tol: f64) -> Point {
    let v = poly.vertices();
    let n = v.len();
    for i in 0..n {
        let (a, p, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
        let q = Point::new((a.x + p.x + c.x) / 3.0, (a.y + p.y + c.y) / 3.0);
        if poly.contains(q, tol) == crate::geom::Containment::Inside {
            return q;
        }
    }
    v[0]
}

/// Signed distance of `p` from the supporting line or circle of `c`.
fn side(c: &Curve, p: Point) -> f64 {
    match c {
        Curve::Segment(s) => (s.to - s.from).unit().cross(p - s.from),
        Curve::Arc(a) => a.orientation.sign() * (a.radius - a.center.dist(p)),
    }
}

/// Whether `a` passes from one side of `b` to the other at an interior
/// common point.
fn crosses(a: &Curve, b: &Curve, snap: f64) -> Option<Point> {
    for h in crate::geom::intersect(a, b, snap) {
        let near_end = [a.start(), a.end(), b.start(), b.end()].iter().any(|e| e.dist(h.point) <= 4.0 * snap);
        if near_end {
            continue;
        }
        let step = (100.0 * snap / a.length()).min(0.25);
        let (t0, t1) = (h.ta - step, h.ta + step);
        if t0 <= 0.0 || t1 >= 1.0 {
            continue;
        }
        let (s0, s1) = (side(b, a.point_at(t0)), side(b, a.point_at(t1)));
        if s0 * s1 < 0.0 && s0.abs().min(s1.abs()) > 0.1 * snap {
            return Some(h.point);
        }
    }
    None
}

fn crossing_pairs(curves: &[(usize, Curve)], snap: f64) -> Option<(usize, usize, Point)> {
    let boxes: Vec<BBox> = curves.iter().map(|(_, c)| c.bbox().expanded(snap)).collect();
    let mut order: Vec<usize> = (0..curves.len()).collect();
    order.sort_by(|&i, &j| boxes[i].min.x.total_cmp(&boxes[j].min.x));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        active.retain(|&j| boxes[j].max.x >= boxes[i].min.x);
        for &j in &active {
            if !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            if let Some(p) = crosses(&curves[i].1, &curves[j].1, snap) {
                return Some((curves[i].0, curves[j].0, p));
            }
        }
        active.push(i);
    }
    None
}

/// Checks that regions are closed, positively oriented, pairwise disjoint,
/// free of crossings with each other and with polygon boundaries, and that
/// every polygon lies in exactly one region.
pub fn check_solution(b: &PolygonSet, s: &Solution) -> Result<(), FeasibilityError> {
    let snap = snap(b);
    let chains: Vec<Vec<Vec<Curve>>> = s.regions.iter().map(|r| r.all_curves()).collect();
    for (ri, cycles) in chains.iter().enumerate() {
        let mut area = 0.0;
        for (ci, cyc) in cycles.iter().enumerate() {
            let n = cyc.len();
            if n == 0 || (0..n).any(|k| cyc[k].end().dist(cyc[(k + 1) % n].start()) > snap) {
                return Err(FeasibilityError::OpenCycle { region: ri, cycle: ci });
            }
            area += chain_area(cyc);
        }
        if area <= 0.0 {
            return Err(FeasibilityError::EmptyRegion(ri));
        }
    }
    let winding = |ri: usize, p: Point| chains[ri].iter().map(|c| chain_winding(c, p)).sum::<i32>();

    let mut tagged: Vec<(usize, Curve)> = Vec::new();
    for (ri, cycles) in chains.iter().enumerate() {
        for c in cycles.iter().flatten() {
            tagged.push((ri, *c));
        }
    }
    if let Some((_, _, p)) = crossing_pairs(&tagged, snap) {
        return Err(FeasibilityError::BoundaryCrossing { x: p.x, y: p.y });
    }
    let region_tag = usize::MAX / 2;
    let mut with_polys: Vec<(usize, Curve)> = tagged.iter().map(|&(r, c)| (region_tag + r, c)).collect();
    for (pi, poly) in b.polygons().iter().enumerate() {
        for (p, q) in poly.edges() {
            with_polys.push((pi, Curve::segment(p, q)));
        }
    }
    // Polygon edges never cross each other, so any reported pair involves a
    // region boundary.
    if let Some((x, y, _)) = crossing_pairs(&with_polys, snap) {
        let polygon = if x < region_tag { x } else { y };
        return Err(FeasibilityError::PolygonCrossing { polygon });
    }

    for (pi, poly) in b.polygons().iter().enumerate() {
        let q = interior_point(poly, snap);
        let covering: Vec<usize> = (0..chains.len()).filter(|&r| winding(r, q) != 0).collect();
        if covering.len() != 1 {
            return Err(FeasibilityError::Coverage { polygon: pi, count: covering.len() });
        }
        if !s.regions[covering[0]].polygons.contains(&pi) {
            return Err(FeasibilityError::Membership { polygon: pi });
        }
    }

    let reach = 1e-6 * b.diameter();
    for (ri, cycles) in chains.iter().enumerate() {
        for c in cycles.iter().flatten() {
            let d = reach.min(0.1 * c.length());
            let p = c.midpoint() + c.tangent_at(0.5).unit().perp() * d;
            if winding(ri, p) == 0 {
                return Err(FeasibilityError::Orientation { region: ri });
            }
            if let Some(other) = (0..chains.len()).find(|&o| o != ri && winding(o, p) != 0) {
                return Err(FeasibilityError::Overlap(ri.min(other), ri.max(other)));
            }
        }
    }
    Ok(())
}

/// Checks the structural rule on every free piece of `s`.
pub fn check_free_pieces(b: &PolygonSet, s: &Solution, rule: FreePieceRule) -> Result<(), FeasibilityError> {
    let snap = snap(b);
    let verts = b.vertices();
    let is_vertex = |p: Point| verts.iter().any(|v| v.dist(p) <= snap);
    for piece in s.free_pieces() {
        let fail = |reason: String| FeasibilityError::Structure { x: piece.start.x, y: piece.start.y, reason };
        if rule.segments && (piece.curves.len() != 1 || piece.curves[0].is_arc()) {
            return Err(fail("not a single segment".into()));
        }
        if let Some(max) = rule.max_length {
            if piece.length() >= max * (1.0 + 1e-9) {
                return Err(fail(format!("length {} is not below {max}", piece.length())));
            }
        }
        let ends = is_vertex(piece.start) as usize + is_vertex(piece.end) as usize;
        if ends < rule.vertex_ends {
            return Err(fail(format!("{ends} endpoints are input vertices")));
        }
    }
    for r in &s.regions {
        for cyc in &r.cycles {
            if cyc.iter().all(|p| p.kind == PieceKind::Constrained) && cyc.iter().all(|p| p.is_point()) {
                return Err(FeasibilityError::Structure { x: f64::NAN, y: f64::NAN, reason: "empty cycle".into() });
            }
        }
    }
    Ok(())
}
