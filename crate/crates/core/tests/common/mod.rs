#![allow(dead_code)]

use polyagg::geom::{Point, Polygon, PolygonSet};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rect(x: f64, y: f64, w: f64, h: f64) -> Polygon {
    Polygon::from_coords(&[(x, y), (x + w, y), (x + w, y + h), (x, y + h)]).unwrap()
}

pub fn two_squares(gap: f64) -> PolygonSet {
    PolygonSet::new(vec![rect(0.0, 0.0, 1.0, 1.0), rect(1.0 + gap, 0.0, 1.0, 1.0)]).unwrap()
}

/// Rectangle or L-shape of size w×h with lower-left corner at the origin,
/// rotated by `angle` around its center and moved to `center`.
fn footprint(rng: &mut ChaCha8Rng, w: f64, h: f64, center: Point, angle: f64) -> Polygon {
    let pts: Vec<(f64, f64)> = if rng.random_bool(0.5) {
        vec![(0.0, 0.0), (w, 0.0), (w, h), (0.0, h)]
    } else {
        let cw = w * rng.random_range(0.3..0.7);
        let ch = h * rng.random_range(0.3..0.7);
        let mut l = vec![(0.0, 0.0), (w, 0.0), (w, h - ch), (w - cw, h - ch), (w - cw, h), (0.0, h)];
        let turns = rng.random_range(0..4);
        for _ in 0..turns {
            l = l.into_iter().map(|(x, y)| (w - y * w / h, x * h / w)).collect();
        }
        l
    };
    let (c, s) = (angle.cos(), angle.sin());
    let coords: Vec<(f64, f64)> = pts
        .into_iter()
        .map(|(x, y)| {
            let (dx, dy) = (x - w / 2.0, y - h / 2.0);
            (center.x + c * dx - s * dy, center.y + s * dx + c * dy)
        })
        .collect();
    Polygon::from_coords(&coords).unwrap()
}

/// `n` rectangles and L-shapes, one per cell of a square grid with the given
/// pitch; sizes are fractions of the pitch, optionally rotated.
pub fn buildings(rng: &mut ChaCha8Rng, n: usize, pitch: f64, rotate: bool) -> PolygonSet {
    let side = (n as f64).sqrt().ceil() as usize;
    let mut polys = Vec::with_capacity(n);
    for k in 0..n {
        let (i, j) = ((k % side) as f64, (k / side) as f64);
        let w = pitch * rng.random_range(0.3..0.6);
        let h = pitch * rng.random_range(0.3..0.6);
        let angle = if rotate { rng.random_range(0.0..std::f64::consts::FRAC_PI_2) } else { 0.0 };
        let slack = (pitch - w.hypot(h)) / 2.0 * 0.9;
        let center = Point::new(
            (i + 0.5) * pitch + rng.random_range(-slack..slack),
            (j + 0.5) * pitch + rng.random_range(-slack..slack),
        );
        polys.push(footprint(rng, w, h, center, angle));
    }
    PolygonSet::new(polys).unwrap()
}

/// Small axis-parallel instance of `n` rectangles and L-shapes.
pub fn small_instance(rng: &mut ChaCha8Rng, n: usize) -> PolygonSet {
    buildings(rng, n, 2.0, false)
}

/// Rectangles and L-shapes tiling a small unit grid except for a few empty
/// cells. Neighbouring pieces share edges, so the free space is just the
/// empty cells inside the hull.
pub fn mosaic(rng: &mut ChaCha8Rng, pieces: usize) -> Option<PolygonSet> {
    let (w, h) = (rng.random_range(3..6usize), rng.random_range(2..5usize));
    let mut owner: Vec<Option<usize>> = (0..w * h).map(Some).collect();
    for _ in 0..rng.random_range(1..4usize) {
        let c = rng.random_range(0..w * h);
        owner[c] = None;
    }
    let cells_of = |owner: &[Option<usize>], id: usize| -> Vec<(usize, usize)> {
        (0..w * h).filter(|&c| owner[c] == Some(id)).map(|c| (c % w, c / w)).collect()
    };
    let mut ids: Vec<usize> = (0..w * h).filter(|&c| owner[c].is_some()).collect();
    let mut stalls = 0;
    while ids.len() > pieces && stalls < 200 {
        let a = ids[rng.random_range(0..ids.len())];
        let b = ids[rng.random_range(0..ids.len())];
        let mut merged: Vec<Option<usize>> = owner.clone();
        for o in merged.iter_mut() {
            if *o == Some(b) {
                *o = Some(a);
            }
        }
        if a != b && shape(&cells_of(&merged, a)).is_some() {
            owner = merged;
            ids.retain(|&i| i != b);
            stalls = 0;
        } else {
            stalls += 1;
        }
    }
    if ids.len() != pieces {
        return None;
    }
    let polys: Vec<Polygon> = ids.iter().map(|&id| shape(&cells_of(&owner, id)).unwrap()).collect();
    PolygonSet::new(polys).ok()
}

/// Outline of a set of unit cells forming a rectangle or an L-shape.
fn shape(cells: &[(usize, usize)]) -> Option<Polygon> {
    let x0 = cells.iter().map(|c| c.0).min()?;
    let y0 = cells.iter().map(|c| c.1).min()?;
    let x1 = cells.iter().map(|c| c.0).max()? + 1;
    let y1 = cells.iter().map(|c| c.1).max()? + 1;
    let inside = |x: usize, y: usize| cells.contains(&(x, y));
    let f = |v: usize| v as f64;
    if cells.len() == (x1 - x0) * (y1 - y0) {
        return Polygon::from_coords(&[(f(x0), f(y0)), (f(x1), f(y0)), (f(x1), f(y1)), (f(x0), f(y1))]).ok();
    }
    // Missing cells must form a rectangle at exactly one corner of the bbox.
    let missing: Vec<(usize, usize)> =
        (y0..y1).flat_map(|y| (x0..x1).map(move |x| (x, y))).filter(|&(x, y)| !inside(x, y)).collect();
    let mx0 = missing.iter().map(|c| c.0).min()?;
    let my0 = missing.iter().map(|c| c.1).min()?;
    let mx1 = missing.iter().map(|c| c.0).max()? + 1;
    let my1 = missing.iter().map(|c| c.1).max()? + 1;
    if missing.len() != (mx1 - mx0) * (my1 - my0) {
        return None;
    }
    let left = mx0 == x0 && mx1 < x1;
    let right = mx1 == x1 && mx0 > x0;
    let bottom = my0 == y0 && my1 < y1;
    let top = my1 == y1 && my0 > y0;
    let (x0, y0, x1, y1, mx0, my0, mx1, my1) = (f(x0), f(y0), f(x1), f(y1), f(mx0), f(my0), f(mx1), f(my1));
    let pts = match (left, right, bottom, top) {
        (true, false, true, false) => vec![(mx1, y0), (x1, y0), (x1, y1), (x0, y1), (x0, my1), (mx1, my1)],
        (false, true, true, false) => vec![(x0, y0), (mx0, y0), (mx0, my1), (x1, my1), (x1, y1), (x0, y1)],
        (false, true, false, true) => vec![(x0, y0), (x1, y0), (x1, my0), (mx0, my0), (mx0, y1), (x0, y1)],
        (true, false, false, true) => vec![(x0, y0), (x1, y0), (x1, y1), (mx1, y1), (mx1, my0), (x0, my0)],
        _ => return None,
    };
    Polygon::from_coords(&pts).ok()
}

fn seg_dist(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let t = if ab.norm2() > 0.0 { ((p - a).dot(ab) / ab.norm2()).clamp(0.0, 1.0) } else { 0.0 };
    p.dist(a + ab * t)
}

/// Distance from `p` to the nearest polygon edge.
pub fn boundary_distance(b: &PolygonSet, p: Point) -> f64 {
    b.polygons()
        .iter()
        .flat_map(|poly| {
            let v = poly.vertices();
            (0..v.len()).map(move |i| seg_dist(p, v[i], v[(i + 1) % v.len()]))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Even-odd ray casting, independent of the library's containment test.
pub fn inside_ring(ring: &[Point], p: Point) -> bool {
    let mut inside = false;
    for i in 0..ring.len() {
        let (a, c) = (ring[i], ring[(i + 1) % ring.len()]);
        if (a.y > p.y) != (c.y > p.y) && p.x < a.x + (p.y - a.y) / (c.y - a.y) * (c.x - a.x) {
            inside = !inside;
        }
    }
    inside
}

pub fn strictly_inside_some_polygon(b: &PolygonSet, p: Point, margin: f64) -> bool {
    b.polygons().iter().any(|poly| inside_ring(poly.vertices(), p)) && boundary_distance(b, p) > margin
}

/// Checks a candidate arc against the structural properties of optimal free
/// pieces: radius α, central angle below π, chord below 2α, endpoints on
/// the input boundary, tangency at edge-interior endpoints and no interior
/// point strictly inside a polygon.
pub fn validate_candidate(b: &PolygonSet, c: &polyagg::candidates::CandidateArc, alpha: f64) -> Result<(), String> {
    use polyagg::candidates::AnchorKind;
    use polyagg::geom::Curve;
    let tol = b.tol();
    let Curve::Arc(arc) = c.curve else { return Err("not an arc".into()) };
    if (arc.radius - alpha).abs() > 1e-12 * alpha.max(1.0) {
        return Err(format!("radius {} differs from alpha {alpha}", arc.radius));
    }
    if !(arc.sweep < std::f64::consts::PI) {
        return Err(format!("central angle {} not below pi", arc.sweep));
    }
    let (s, e) = (arc.start(), arc.end());
    if !(s.dist(e) < 2.0 * alpha) {
        return Err(format!("chord {} not below {}", s.dist(e), 2.0 * alpha));
    }
    for (p, anchor) in [(s, c.a), (e, c.b)] {
        if boundary_distance(b, p) > 8.0 * tol {
            return Err(format!("endpoint ({}, {}) off the boundary", p.x, p.y));
        }
        if anchor.location.dist(p) > 8.0 * tol {
            return Err("anchor does not match arc endpoint".into());
        }
        if let AnchorKind::EdgeInterior { edge, .. } = anchor.kind {
            let (u, v) = b.edge(edge);
            let radial = (p - arc.center).unit();
            let along = (v - u).unit();
            if radial.dot(along).abs() > 1e-6 {
                return Err(format!("arc not tangent to edge {edge}"));
            }
        }
    }
    for k in 1..64 {
        let q = arc.point_at(k as f64 / 64.0);
        if strictly_inside_some_polygon(b, q, 8.0 * tol) {
            return Err(format!("arc passes through a polygon at ({}, {})", q.x, q.y));
        }
    }
    Ok(())
}

/// A point strictly inside bounded face `f`, found by stepping off the
/// midpoint of one of its boundary half-edges.
pub fn face_interior_point(d: &polyagg::arrangement::Subdivision, f: usize) -> Option<Point> {
    for h in d.face_half_edges(f) {
        let c = d.curve(h);
        let m = c.point_at(0.5);
        let left = c.tangent_at(0.5).unit().perp();
        let mut step = 1e-3 * c.length();
        for _ in 0..12 {
            let p = m + left * step;
            if d.face_contains(f, p) {
                return Some(p);
            }
            step *= 0.1;
        }
    }
    None
}

/// Area of `s` not covered by `t`, from the overlay of both boundaries.
pub fn uncovered_area(b: &PolygonSet, s: &polyagg::mincut::Solution, t: &polyagg::mincut::Solution) -> f64 {
    use polyagg::arrangement::{build, InputCurve, Origin};
    let mut extra = Vec::new();
    for (k, sol) in [s, t].into_iter().enumerate() {
        for piece in sol.free_pieces() {
            for c in &piece.curves {
                extra.push(InputCurve { curve: *c, origin: Origin::Extra(k), toggles: 0 });
            }
        }
    }
    let d = build(b, extra).expect("overlay");
    let mut area = 0.0;
    for f in 0..d.faces.len() {
        if !d.faces[f].bounded || d.faces[f].area <= 0.0 {
            continue;
        }
        let p = face_interior_point(&d, f).expect("face without interior point");
        if s.contains(p) && !t.contains(p) {
            area += d.faces[f].area;
        }
    }
    area
}
