//! Straight-line and vertex-restricted solutions derived from an optimal
//! unrestricted one, in three phases with per-piece and global bounds.

mod rings;

use crate::geom::{hull_chain, orient, Curve, Point, PolygonSet};
use crate::mincut::{solve_unrestricted, BoundaryPiece, PieceKind, Solution, SolveError};
use rings::{
    clean_ring, polyline_length, proper_crossing, replaced_area, rings_of, segments, to_solution, Boundary, Loc,
    RegionRings,
};
use thiserror::Error;

/// Relative slack below which bound excesses are floating-point noise.
pub const WARN_SLACK: f64 = 1e-7;
/// Relative slack beyond which a bound excess is an error.
pub const HARD_SLACK: f64 = 1e-4;

/// Per-piece ratio Δ/(α·L) allowed when an arc is replaced by its chord.
pub const CHORD_FACTOR: f64 = 0.145;
/// Per-piece ratio Δ/(α·L) allowed for a hull chain replacement.
pub const CHAIN_FACTOR: f64 = 0.5;

pub const LINE_FACTOR: f64 = 1.5;
pub const VERTEX_FACTOR: f64 = 13.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("approximation needs a finite alpha, got {0}")]
    InvalidAlpha(f64),
    #[error("free piece starting at ({x}, {y}) is curved")]
    NotStraight { x: f64, y: f64 },
    #[error("phase {phase} input violates its precondition near ({x}, {y})")]
    Precondition { phase: u8, x: f64, y: f64 },
    #[error("replacement creates a crossing near ({x}, {y})")]
    InfeasibleIntermediate { x: f64, y: f64 },
    #[error("shifting the segment from ({x}, {y}) meets no input vertex")]
    NoStopEvent { x: f64, y: f64 },
    #[error("phase {phase}: change {delta} exceeds its bound {bound}")]
    BoundViolated { phase: u8, delta: f64, bound: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PieceDelta {
    pub delta: f64,
    pub bound: f64,
}

impl PieceDelta {
    /// Excess of `delta` over `bound` relative to the larger magnitude.
    pub fn relative_excess(&self) -> f64 {
        let scale = self.bound.abs().max(self.delta.abs()).max(f64::MIN_POSITIVE);
        (self.delta - self.bound) / scale
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseReport {
    pub phase: u8,
    pub replaced_pieces: usize,
    /// Sum of the per-piece objective changes.
    pub delta_objective: f64,
    pub bound_factor: f64,
    pub objective_before: f64,
    pub objective_after: f64,
    pub pieces: Vec<PieceDelta>,
    /// Bound excesses above `WARN_SLACK` but within `HARD_SLACK`.
    pub warnings: usize,
}

impl PhaseReport {
    fn new(phase: u8, bound_factor: f64, before: f64) -> Self {
        PhaseReport {
            phase,
            replaced_pieces: 0,
            delta_objective: 0.0,
            bound_factor,
            objective_before: before,
            objective_after: before,
            pieces: Vec::new(),
            warnings: 0,
        }
    }

    fn check(&mut self, delta: f64, bound: f64) -> Result<(), ApproxError> {
        let excess = PieceDelta { delta, bound }.relative_excess();
        if excess > HARD_SLACK {
            return Err(ApproxError::BoundViolated { phase: self.phase, delta, bound });
        }
        if excess > WARN_SLACK {
            self.warnings += 1;
        }
        Ok(())
    }

    fn record(&mut self, delta: f64, bound: f64) -> Result<(), ApproxError> {
        self.replaced_pieces += 1;
        self.delta_objective += delta;
        self.pieces.push(PieceDelta { delta, bound });
        self.check(delta, bound)
    }

    pub fn global_bound(&self) -> PieceDelta {
        PieceDelta { delta: self.objective_after, bound: self.bound_factor * self.objective_before }
    }
}

fn finite_alpha(s: &Solution) -> Result<f64, ApproxError> {
    let a = s.objective.alpha;
    if a.is_finite() && a >= 0.0 {
        Ok(a)
    } else {
        Err(ApproxError::InvalidAlpha(a))
    }
}

fn finish(
    bd: &Boundary,
    regions: &[RegionRings],
    alpha: f64,
    mut report: PhaseReport,
) -> Result<(Solution, PhaseReport), ApproxError> {
    let s = to_solution(bd, regions, alpha);
    let cleaned: Vec<RegionRings> = s
        .regions
        .iter()
        .map(|r| RegionRings {
            rings: r.cycles.iter().map(|c| c.iter().flat_map(|p| p.curves.iter().map(Curve::start)).collect()).collect(),
            polygons: r.polygons.clone(),
        })
        .collect();
    if let Some(p) = proper_crossing(&cleaned, bd.snap) {
        return Err(ApproxError::InfeasibleIntermediate { x: p.x, y: p.y });
    }
    report.objective_after = s.objective.value;
    let g = report.global_bound();
    report.check(g.delta, g.bound)?;
    Ok((s, report))
}

/// Hull chain from `a` to `z` around `pts`, which lie on the `side` of the
/// chord a→z; just the chord when there are none.
fn hull_over(bd: &Boundary, a: Point, z: Point, side: f64, pts: &[Point]) -> Vec<Point> {
    if pts.is_empty() {
        return vec![a, z];
    }
    let chain = if side > 0.0 {
        hull_chain(z, a, pts, bd.snap).map(|mut c| {
            c.reverse();
            c
        })
    } else {
        hull_chain(a, z, pts, bd.snap)
    };
    chain.unwrap_or_else(|| vec![a, z])
}

/// Hull chain replacing the polyline `path` over the input vertices it
/// encloses with its chord.
fn hull_replacement(bd: &Boundary, path: &[Point]) -> Vec<Point> {
    let (a, z) = (path[0], path[path.len() - 1]);
    let far = path
        .iter()
        .map(|&p| orient(a, z, p))
        .max_by(|x, y| x.abs().total_cmp(&y.abs()))
        .unwrap_or(0.0);
    if a.dist(z) <= bd.snap || far == 0.0 {
        return vec![a, z];
    }
    let side = far.signum();
    hull_over(bd, a, z, side, &bd.vertices_in(path, side))
}

/// Replacement chain of a free piece: exact lens membership for a single
/// arc, a fine outline otherwise.
fn straighten(bd: &Boundary, piece: &BoundaryPiece) -> Vec<Point> {
    let (a, z) = (piece.start, piece.end);
    let arc = match piece.curves.as_slice() {
        [Curve::Arc(arc)] => arc,
        _ => {
            let mut outline = vec![a];
            for c in &piece.curves {
                outline.extend(c.discretize(bd.snap.max(1e-6 * c.length())).into_iter().skip(1));
            }
            return hull_replacement(bd, &outline);
        }
    };
    let side = orient(a, z, arc.point_at(0.5)).signum();
    let len = a.dist(z);
    let pts: Vec<Point> = bd
        .verts
        .iter()
        .copied()
        .filter(|&p| p.dist(a) > bd.snap && p.dist(z) > bd.snap)
        .filter(|&p| side * orient(a, z, p) / len > bd.snap && p.dist(arc.center) <= arc.radius + bd.snap)
        .collect();
    hull_over(bd, a, z, side, &pts)
}

/// Phase 1: every free arc becomes its chord, or the hull chain around the
/// input vertices between arc and chord.
pub fn phase1_straighten(s0: &Solution, b: &PolygonSet) -> Result<(Solution, PhaseReport), ApproxError> {
    let alpha = finite_alpha(s0)?;
    let bd = Boundary::new(b);
    let mut report = PhaseReport::new(1, LINE_FACTOR, s0.objective.value);
    let mut regions = Vec::with_capacity(s0.regions.len());
    for r in &s0.regions {
        let mut rings = Vec::with_capacity(r.cycles.len());
        for cyc in &r.cycles {
            let mut ring = Vec::new();
            for piece in cyc {
                if piece.is_point() {
                    continue;
                }
                if piece.kind == PieceKind::Constrained || piece.curves.iter().all(|c| !c.is_arc()) {
                    ring.extend(piece.curves.iter().map(Curve::start));
                    continue;
                }
                let chain = straighten(&bd, piece);
                let new = segments(&chain);
                let len = piece.length();
                let delta = alpha * (polyline_length(&chain) - len) + replaced_area(&piece.curves, &new);
                let factor = if chain.len() == 2 { CHORD_FACTOR } else { CHAIN_FACTOR };
                report.record(delta, factor * alpha * len)?;
                ring.extend_from_slice(&chain[..chain.len() - 1]);
            }
            rings.push(ring);
        }
        regions.push(RegionRings { rings, polygons: r.polygons.clone() });
    }
    finish(&bd, &regions, alpha, report)
}

fn straight_rings(s: &Solution) -> Result<Vec<RegionRings>, ApproxError> {
    rings_of(s).map_err(|p| ApproxError::NotStraight { x: p.x, y: p.y })
}

/// Direction of edge `e` pointing to the positive side of `n`.
fn edge_direction(bd: &Boundary, e: usize, n: Point) -> Point {
    let (a, b) = bd.edges[e];
    let t = (b - a).unit();
    if t.dot(n) < 0.0 {
        t * -1.0
    } else {
        t
    }
}

/// Slides the free segment uv (endpoints interior to edges `eu`, `ev`)
/// to its left, keeping its ends on the two edge lines, until the first
/// input vertex is met. Returns the new path u, u', …, v', v.
fn shift_segment(bd: &Boundary, u: Point, v: Point, eu: usize, ev: usize) -> Result<Vec<Point>, ApproxError> {
    let none = ApproxError::NoStopEvent { x: u.x, y: u.y };
    let n = (v - u).perp().unit();
    let (du, dv) = (edge_direction(bd, eu, n), edge_direction(bd, ev, n));
    let (cu, cv) = (du.dot(n), dv.dot(n));
    if cu <= 1e-12 || cv <= 1e-12 {
        return Err(none);
    }
    let mut h_stop = f64::INFINITY;
    for (e, base) in [(eu, u), (ev, v)] {
        let (a, b) = bd.edges[e];
        for w in [a, b] {
            let h = n.dot(w - base);
            if h > bd.snap {
                h_stop = h_stop.min(h);
            }
        }
    }
    let side_u = du.cross(v - u).signum();
    let side_v = dv.cross(u - v).signum();
    for &y in &bd.verts {
        let h = n.dot(y - u);
        if h <= bd.snap || h >= h_stop {
            continue;
        }
        if side_u * du.cross(y - u) >= -bd.snap && side_v * dv.cross(y - v) >= -bd.snap {
            h_stop = h;
        }
    }
    if !h_stop.is_finite() {
        return Err(none);
    }
    let den = du.cross(dv);
    if den.abs() > 1e-12 {
        let s = (v - u).cross(dv) / den;
        let h_apex = n.dot(du * s);
        if h_apex > 0.0 && h_stop > h_apex + bd.snap {
            return Err(none);
        }
    }
    let u2 = bd.snapped(u + du * (h_stop / cu));
    let v2 = bd.snapped(v + dv * (h_stop / cv));
    let mut path = vec![u, u2];
    path.extend(bd.vertices_on_segment(u2, v2));
    path.push(v2);
    path.push(v);
    path.dedup_by(|a, b| a.dist(*b) <= bd.snap);
    Ok(path)
}

/// Phase 2: free segments joining two edge interiors are pushed into the
/// region until they touch an input vertex.
pub fn phase2_shift(s1: &Solution, b: &PolygonSet) -> Result<(Solution, PhaseReport), ApproxError> {
    let alpha = finite_alpha(s1)?;
    let bd = Boundary::new(b);
    let mut report = PhaseReport::new(2, 3.0, s1.objective.value);
    let mut regions = straight_rings(s1)?;
    for ri in 0..regions.len() {
        for ci in 0..regions[ri].rings.len() {
            let mut k = 0;
            while k < regions[ri].rings[ci].len() {
                let ring = &regions[ri].rings[ci];
                let n = ring.len();
                let (u, v) = (ring[k], ring[(k + 1) % n]);
                let violating = match (bd.locate(u), bd.locate(v)) {
                    (Loc::Edge(eu), Loc::Edge(ev)) if bd.segment_edge(u, v).is_none() => Some((eu, ev)),
                    _ => None,
                };
                let Some((eu, ev)) = violating else {
                    k += 1;
                    continue;
                };
                let path = shift_segment(&bd, u, v, eu, ev)?;
                let len = u.dist(v);
                let area = replaced_area(&[Curve::segment(u, v)], &segments(&path));
                let delta = alpha * (polyline_length(&path) - len) + area;
                report.record(delta, 2.0 * (alpha * len + area.abs()))?;
                let inner = &path[1..path.len() - 1];
                let added = inner.len();
                regions[ri].rings[ci].splice(k + 1..k + 1, inner.iter().copied());
                if let Some(p) = proper_crossing(&regions, bd.snap) {
                    return Err(ApproxError::InfeasibleIntermediate { x: p.x, y: p.y });
                }
                k += added + 1;
            }
        }
    }
    finish(&bd, &regions, alpha, report)
}

/// Replacements of one ring: index ranges on the ring and their chains.
fn fill_ring(
    bd: &Boundary,
    ring: &[Point],
    alpha: f64,
    report: &mut PhaseReport,
) -> Result<Vec<Point>, ApproxError> {
    let n = ring.len();
    let locs: Vec<Loc> = ring.iter().map(|&p| bd.locate(p)).collect();
    let edge: Vec<Option<usize>> = (0..n).map(|k| bd.segment_edge(ring[k], ring[(k + 1) % n])).collect();
    let through = |k: usize| {
        let p = (k + n - 1) % n;
        edge[k].is_some() && edge[p] == edge[k]
    };
    let Some(start) = (0..n).find(|&k| locs[k].is_vertex() && !through(k)) else {
        return Ok(ring.to_vec());
    };
    let rot = |i: usize| (start + i) % n;
    let pt = |i: usize| ring[rot(i)];
    let free = |i: usize| edge[rot(i)].is_none();

    // Maximal single-edge constrained runs, as point index ranges [s, t].
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        if let Some(e) = edge[rot(i)] {
            let mut j = i + 1;
            while j < n && edge[rot(j)] == Some(e) {
                j += 1;
            }
            runs.push((i, j));
            i = j;
        } else {
            if i > 0 && matches!(locs[rot(i)], Loc::Edge(_)) && free(i - 1) {
                runs.push((i, i));
            }
            i += 1;
        }
    }
    let mut reps: Vec<(usize, usize, Vec<Point>)> = Vec::new();
    for (s, t) in runs {
        let (vs, vt) = (locs[rot(s)].is_vertex(), locs[rot(t)].is_vertex());
        if vs && vt {
            continue;
        }
        let bad = |i: usize| ApproxError::Precondition { phase: 3, x: pt(i).x, y: pt(i).y };
        let u1 = if vs { s } else { s - 1 };
        let v2 = if vt { t } else { t + 1 };
        if !vs && !free(u1) || !vt && !free(t) {
            return Err(bad(s));
        }
        if !locs[rot(u1)].is_vertex() {
            return Err(bad(u1));
        }
        if !locs[rot(v2)].is_vertex() {
            return Err(bad(v2));
        }
        let path: Vec<Point> = (u1..=v2).map(pt).collect();
        if path[0].dist(path[path.len() - 1]) <= bd.snap {
            return Err(ApproxError::InfeasibleIntermediate { x: path[0].x, y: path[0].y });
        }
        let chain = hull_replacement(bd, &path);
        let len = polyline_length(&path);
        let delta = alpha * (polyline_length(&chain) - len) + replaced_area(&segments(&path), &segments(&chain));
        report.record(delta, 2.0 * alpha * len)?;
        reps.push((u1, v2, chain));
    }
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    let mut next = reps.iter().peekable();
    while i < n {
        match next.peek() {
            Some((u1, v2, chain)) if *u1 == i => {
                out.extend_from_slice(&chain[..chain.len() - 1]);
                i = *v2;
                next.next();
            }
            _ => {
                out.push(pt(i));
                i += 1;
            }
        }
    }
    Ok(out)
}

/// Phase 3: every constrained piece flanked by a free segment ending in an
/// edge interior is bridged, together with its flanking segments, by a hull
/// chain between input vertices.
pub fn phase3_fill(s2: &Solution, b: &PolygonSet) -> Result<(Solution, PhaseReport), ApproxError> {
    let alpha = finite_alpha(s2)?;
    let bd = Boundary::new(b);
    let mut report = PhaseReport::new(3, 3.0, s2.objective.value);
    let mut regions = straight_rings(s2)?;
    for r in &mut regions {
        for ring in &mut r.rings {
            let cleaned = clean_ring(&bd, ring);
            *ring = fill_ring(&bd, &cleaned, alpha, &mut report)?;
        }
    }
    finish(&bd, &regions, alpha, report)
}

/// An approximate solution with the optimum it was derived from.
#[derive(Clone, Debug)]
pub struct ApproxRun {
    pub optimum: Solution,
    pub solution: Solution,
    pub reports: Vec<PhaseReport>,
}

fn check_total(run: &ApproxRun, factor: f64) -> Result<(), ApproxError> {
    let (delta, bound) = (run.solution.objective.value, factor * run.optimum.objective.value);
    if (PieceDelta { delta, bound }).relative_excess() > WARN_SLACK {
        return Err(ApproxError::BoundViolated { phase: run.reports.len() as u8, delta, bound });
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<(), ApproxError> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(ApproxError::InvalidAlpha(alpha))
    }
}

/// Phase 1 applied to a given optimum.
pub fn approx_line_from(b: &PolygonSet, optimum: Solution) -> Result<ApproxRun, ApproxError> {
    check_alpha(optimum.objective.alpha)?;
    let (s1, r1) = phase1_straighten(&optimum, b)?;
    let run = ApproxRun { optimum, solution: s1, reports: vec![r1] };
    check_total(&run, LINE_FACTOR)?;
    Ok(run)
}

/// Phases 1 to 3 applied to a given optimum.
pub fn approx_vertex_from(b: &PolygonSet, optimum: Solution) -> Result<ApproxRun, ApproxError> {
    check_alpha(optimum.objective.alpha)?;
    let (s1, r1) = phase1_straighten(&optimum, b)?;
    let (s2, r2) = phase2_shift(&s1, b)?;
    let (s3, r3) = phase3_fill(&s2, b)?;
    let run = ApproxRun { optimum, solution: s3, reports: vec![r1, r2, r3] };
    check_total(&run, VERTEX_FACTOR)?;
    Ok(run)
}

pub fn approx_line_detailed(b: &PolygonSet, alpha: f64) -> Result<ApproxRun, ApproxError> {
    check_alpha(alpha)?;
    approx_line_from(b, solve_unrestricted(b, alpha)?)
}

pub fn approx_vertex_detailed(b: &PolygonSet, alpha: f64) -> Result<ApproxRun, ApproxError> {
    check_alpha(alpha)?;
    approx_vertex_from(b, solve_unrestricted(b, alpha)?)
}

/// Straight-line solution within factor 1.5 of the optimum.
pub fn approx_line(b: &PolygonSet, alpha: f64) -> Result<Solution, ApproxError> {
    approx_line_detailed(b, alpha).map(|r| r.solution)
}

/// Vertex-restricted solution within factor 13.5 of the optimum.
pub fn approx_vertex(b: &PolygonSet, alpha: f64) -> Result<Solution, ApproxError> {
    approx_vertex_detailed(b, alpha).map(|r| r.solution)
}

#[cfg(test)]
mod tests;
