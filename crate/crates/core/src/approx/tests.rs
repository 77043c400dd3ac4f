use super::rings::{to_solution, Boundary, RegionRings};
use super::*;
use crate::feasibility::{check_free_pieces, check_solution, FreePieceRule};
use crate::geom::{CircularArc, ObjectiveBreakdown, Polygon};
use crate::mincut::Region;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn rect(x: f64, y: f64, w: f64, h: f64) -> Polygon {
    Polygon::from_coords(&[(x, y), (x + w, y), (x + w, y + h), (x, y + h)]).unwrap()
}

fn constrained(pts: &[Point]) -> BoundaryPiece {
    BoundaryPiece {
        kind: PieceKind::Constrained,
        curves: segments(pts),
        start: pts[0],
        end: pts[pts.len() - 1],
    }
}

fn ring_solution(b: &PolygonSet, regions: Vec<(Vec<Point>, Vec<usize>)>, alpha: f64) -> Solution {
    let rr: Vec<RegionRings> = regions.into_iter().map(|(g, polygons)| RegionRings { rings: vec![g], polygons }).collect();
    to_solution(&Boundary::new(b), &rr, alpha)
}

/// U-shaped polygon whose notch of width √2 is closed by a quarter arc of
/// radius 1 dipping into it.
fn notch(extra: Option<Polygon>) -> (PolygonSet, Solution) {
    let s = SQRT_2;
    let u_shape = Polygon::from_coords(&[
        (0.0, 0.0),
        (3.0 * s, 0.0),
        (3.0 * s, 2.0 * s),
        (2.0 * s, 2.0 * s),
        (2.0 * s, s),
        (s, s),
        (s, 2.0 * s),
        (0.0, 2.0 * s),
    ])
    .unwrap();
    let mut polys = vec![u_shape.clone()];
    polys.extend(extra.clone());
    let b = PolygonSet::new(polys).unwrap();
    let (u, v) = (p(2.0 * s, 2.0 * s), p(s, 2.0 * s));
    let arc = CircularArc::from_chord(v, u, 1.0, 1e-12).unwrap().reversed();
    assert!(arc.point_at(0.5).y < 2.0 * s);
    let outer = constrained(&[v, p(0.0, 2.0 * s), p(0.0, 0.0), p(3.0 * s, 0.0), p(3.0 * s, 2.0 * s), u]);
    let free = BoundaryPiece { kind: PieceKind::Free, curves: vec![Curve::Arc(arc)], start: u, end: v };
    let cap = arc.segment_area();
    let area = u_shape.area() + s * s - cap;
    let perimeter = outer.length() + free.length();
    let mut regions = vec![Region { cycles: vec![vec![outer, free]], area, perimeter, polygons: vec![0] }];
    let (mut total_a, mut total_p) = (area, perimeter);
    if let Some(t) = extra {
        let pts: Vec<Point> = t.vertices().to_vec();
        let mut ring = pts.clone();
        ring.push(pts[0]);
        regions.push(Region { cycles: vec![vec![constrained(&ring)]], area: t.area(), perimeter: t.perimeter(), polygons: vec![1] });
        total_a += t.area();
        total_p += t.perimeter();
    }
    let sol = Solution {
        selected_faces: Vec::new(),
        regions,
        objective: ObjectiveBreakdown::new(total_a, total_p, 1.0),
        cut_value: None,
        constant_offset: None,
    };
    (b, sol)
}

#[test]
fn quarter_arc_becomes_chord() {
    let (b, s0) = notch(None);
    check_solution(&b, &s0).unwrap();
    let (s1, r) = phase1_straighten(&s0, &b).unwrap();
    assert_eq!(r.replaced_pieces, 1);
    let want = (PI / 4.0 - 0.5) - (FRAC_PI_2 - SQRT_2);
    assert!((r.pieces[0].delta - want).abs() < 1e-12, "{}", r.pieces[0].delta);
    assert!((want - 0.128_815).abs() < 1e-6);
    assert!((r.pieces[0].bound - 0.145 * FRAC_PI_2).abs() < 1e-12);
    assert!((s1.objective.value - s0.objective.value - want).abs() < 1e-9);
    assert!((r.objective_after - r.objective_before - r.delta_objective).abs() < 1e-9);
    check_solution(&b, &s1).unwrap();
    check_free_pieces(&b, &s1, FreePieceRule::short_segments(1.0)).unwrap();
    assert_eq!(s1.free_pieces().count(), 1);
}

#[test]
fn arc_around_vertex_becomes_chain() {
    let s = SQRT_2;
    let x = 1.5 * s;
    let tri = Polygon::from_coords(&[(x - 0.05, 2.0 * s - 0.2), (x + 0.05, 2.0 * s - 0.2), (x, 2.0 * s - 0.1)]).unwrap();
    let (b, s0) = notch(Some(tri));
    check_solution(&b, &s0).unwrap();
    let (s1, r) = phase1_straighten(&s0, &b).unwrap();
    assert_eq!(r.replaced_pieces, 1);
    let d = r.pieces[0];
    assert!(d.delta <= d.bound && (d.bound - 0.5 * FRAC_PI_2).abs() < 1e-12);
    // The chain hugs the lower corners of the triangle; its middle segment
    // runs along the triangle's base and is constrained.
    let free: Vec<&BoundaryPiece> = s1.free_pieces().collect();
    assert_eq!(free.len(), 2);
    assert!(free.iter().any(|f| f.end.dist(p(x + 0.05, 2.0 * s - 0.2)) < 1e-12));
    assert!(free.iter().any(|f| f.start.dist(p(x - 0.05, 2.0 * s - 0.2)) < 1e-12));
    // Direct measure: only region 0 changes, by Δ.
    let old = s0.regions[0].area + s0.regions[0].perimeter;
    let new = s1.regions[0].area + s1.regions[0].perimeter;
    assert!((new - old - d.delta).abs() < 1e-9);
    check_solution(&b, &s1).unwrap();
    check_free_pieces(&b, &s1, FreePieceRule::short_segments(1.0)).unwrap();
}

/// Two triangles whose facing edges open a right-angled wedge, joined by a
/// horizontal free segment across the wedge.
fn wedge(third: Option<Polygon>) -> (PolygonSet, Solution) {
    let a = Polygon::from_coords(&[(-0.5, 0.5), (-3.0, 3.0), (-3.0, 0.5)]).unwrap();
    let bb = Polygon::from_coords(&[(1.0, 1.0), (3.0, 1.0), (3.0, 3.0)]).unwrap();
    let mut polys = vec![a, bb];
    polys.extend(third);
    let n = polys.len();
    let b = PolygonSet::new(polys).unwrap();
    let ring = vec![p(2.0, 2.0), p(-2.0, 2.0), p(-3.0, 3.0), p(-3.0, 0.5), p(-0.5, 0.5), p(1.0, 1.0), p(3.0, 1.0), p(3.0, 3.0)];
    let s = ring_solution(&b, vec![(ring, (0..n).collect())], 3.0);
    (b, s)
}

#[test]
fn wedge_shift_stops_at_nearer_endpoint() {
    let (b, s1) = wedge(None);
    check_solution(&b, &s1).unwrap();
    let (s2, r) = phase2_shift(&s1, &b).unwrap();
    assert_eq!(r.replaced_pieces, 1);
    let alpha = 3.0;
    let want = alpha * (2.0 * SQRT_2 + 2.0 - 4.0) - 3.0;
    assert!((r.pieces[0].delta - want).abs() < 1e-12);
    assert!((r.pieces[0].bound - 2.0 * (alpha * 4.0 + 3.0)).abs() < 1e-12);
    assert!((r.objective_after - r.objective_before - r.delta_objective).abs() < 1e-9);
    let shifted: Vec<&BoundaryPiece> = s2.free_pieces().filter(|f| (f.start.y - 1.0).abs() < 1e-12 && (f.end.y - 1.0).abs() < 1e-12).collect();
    assert_eq!(shifted.len(), 1);
    assert!((shifted[0].length() - 2.0).abs() < 1e-12);
    check_solution(&b, &s2).unwrap();
    check_free_pieces(&b, &s2, FreePieceRule::one_vertex_end()).unwrap();

    // The leftover piece from (1, 1) to the interior of the left edge is
    // bridged straight to that edge's far end.
    let (s3, r3) = phase3_fill(&s2, &b).unwrap();
    assert_eq!(r3.replaced_pieces, 1);
    let path_len = 2.0 + 2.0 * SQRT_2;
    let chord = p(1.0, 1.0).dist(p(-3.0, 3.0));
    let want3 = 2.0 + alpha * (chord - path_len);
    assert!((r3.pieces[0].delta - want3).abs() < 1e-12, "{} {}", r3.pieces[0].delta, want3);
    assert!((r3.pieces[0].bound - 2.0 * alpha * path_len).abs() < 1e-12);
    check_solution(&b, &s3).unwrap();
    check_free_pieces(&b, &s3, FreePieceRule::vertex_to_vertex()).unwrap();
}

fn shoelace(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n).map(|k| pts[k].cross(pts[(k + 1) % n])).sum::<f64>() / 2.0
}

#[test]
fn fill_bends_around_enclosed_vertex() {
    let d = Polygon::from_coords(&[(-2.0, 2.2), (-1.7, 2.9), (-2.3, 2.9)]).unwrap();
    let (b, s1) = wedge(None);
    let b = PolygonSet::new(vec![b.polygons()[0].clone(), b.polygons()[1].clone(), d.clone()]).unwrap();
    let mut s1 = s1;
    let extra = ring_solution(&b, vec![(d.vertices().to_vec(), vec![2])], 3.0);
    s1.regions.extend(extra.regions);
    s1.objective = ObjectiveBreakdown::new(s1.objective.area + d.area(), s1.objective.perimeter + d.perimeter(), 3.0);
    check_solution(&b, &s1).unwrap();
    let (s2, _) = phase2_shift(&s1, &b).unwrap();
    let (s3, r3) = phase3_fill(&s2, &b).unwrap();
    assert_eq!(r3.replaced_pieces, 1);
    let (u1, y, v2) = (p(1.0, 1.0), p(-2.0, 2.2), p(-3.0, 3.0));
    let gained = shoelace(&[u1, p(-1.0, 1.0), v2, y]).abs();
    let path_len = 2.0 + 2.0 * SQRT_2;
    let want = gained + 3.0 * (u1.dist(y) + y.dist(v2) - path_len);
    assert!((r3.pieces[0].delta - want).abs() < 1e-12);
    assert!(r3.pieces[0].delta <= r3.pieces[0].bound);
    let bent = s3.free_pieces().filter(|f| f.start.dist(y) < 1e-12 || f.end.dist(y) < 1e-12).count();
    assert_eq!(bent, 2);
    check_solution(&b, &s3).unwrap();
    check_free_pieces(&b, &s3, FreePieceRule::vertex_to_vertex()).unwrap();
}

#[test]
fn third_polygon_splits_shifted_segment() {
    let c = Polygon::from_coords(&[(-0.2, 1.0), (0.2, 1.0), (0.0, 1.5)]).unwrap();
    let (b, s1) = wedge(Some(c));
    check_solution(&b, &s1).unwrap();
    let (s2, r) = phase2_shift(&s1, &b).unwrap();
    assert_eq!(r.replaced_pieces, 1);
    let at_apex: Vec<&BoundaryPiece> = s2.free_pieces().filter(|f| (f.start.y - 1.5).abs() < 1e-12 && (f.end.y - 1.5).abs() < 1e-12).collect();
    assert_eq!(at_apex.len(), 2);
    assert!(at_apex.iter().all(|f| f.start.dist(p(0.0, 1.5)) < 1e-12 || f.end.dist(p(0.0, 1.5)) < 1e-12));
    check_solution(&b, &s2).unwrap();
    check_free_pieces(&b, &s2, FreePieceRule::one_vertex_end()).unwrap();
}

#[test]
fn single_convex_polygon_is_its_own_approximation() {
    let b = PolygonSet::new(vec![Polygon::from_coords(&[(0.0, 0.0), (2.0, 0.0), (2.5, 1.0), (1.0, 1.8), (-0.3, 1.0)]).unwrap()]).unwrap();
    for alpha in [0.0, 0.5, 2.0, 50.0] {
        let opt = solve_unrestricted(&b, alpha).unwrap();
        let l = approx_line(&b, alpha).unwrap();
        let v = approx_vertex(&b, alpha).unwrap();
        for s in [&l, &v] {
            assert!((s.objective.value - opt.objective.value).abs() < 1e-9 * opt.objective.value.max(1.0));
            check_solution(&b, s).unwrap();
        }
    }
}

#[test]
fn no_free_pieces_is_identity() {
    let b = PolygonSet::new(vec![rect(0.0, 0.0, 1.0, 1.0), rect(5.0, 0.0, 1.0, 1.0)]).unwrap();
    let s0 = solve_unrestricted(&b, 0.3).unwrap();
    let (s1, r1) = phase1_straighten(&s0, &b).unwrap();
    let (s2, r2) = phase2_shift(&s1, &b).unwrap();
    let (s3, r3) = phase3_fill(&s2, &b).unwrap();
    for r in [&r1, &r2, &r3] {
        assert_eq!(r.replaced_pieces, 0);
        assert_eq!(r.delta_objective, 0.0);
    }
    assert!((s3.objective.value - s0.objective.value).abs() < 1e-12);
}

#[test]
fn two_close_squares_ratios() {
    let b = PolygonSet::new(vec![rect(0.0, 0.0, 1.0, 1.0), rect(1.4, 0.0, 1.0, 1.0)]).unwrap();
    let l = approx_line_detailed(&b, 1.0).unwrap();
    let v = approx_vertex_detailed(&b, 1.0).unwrap();
    let opt = l.optimum.objective.value;
    assert!(l.solution.objective.value / opt <= 1.05);
    assert!(v.solution.objective.value / opt <= 1.05);
    assert!(l.solution.objective.value >= opt - 1e-9);
    check_solution(&b, &v.solution).unwrap();
    check_free_pieces(&b, &v.solution, FreePieceRule::vertex_to_vertex()).unwrap();
}

#[test]
fn infinite_alpha_is_rejected() {
    let b = PolygonSet::new(vec![rect(0.0, 0.0, 1.0, 1.0)]).unwrap();
    assert!(matches!(approx_line(&b, f64::INFINITY), Err(ApproxError::InvalidAlpha(_))));
    assert!(matches!(approx_vertex(&b, -1.0), Err(ApproxError::InvalidAlpha(_))));
}

#[test]
fn curved_input_rejected_by_later_phases() {
    let (b, s0) = notch(None);
    assert!(matches!(phase2_shift(&s0, &b), Err(ApproxError::NotStraight { .. })));
}

#[test]
fn random_rectangles_respect_all_bounds() {
    use rand::{RngExt, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..6 {
        let mut polys = Vec::new();
        for i in 0..10 {
            let (gx, gy) = ((i % 4) as f64 * 2.2, (i / 4) as f64 * 2.2);
            let x = gx + rng.random_range(0.0..0.6);
            let y = gy + rng.random_range(0.0..0.6);
            polys.push(rect(x, y, rng.random_range(0.6..1.5), rng.random_range(0.6..1.5)));
        }
        let b = PolygonSet::new(polys).unwrap();
        for alpha in [1.0, 5.0, 20.0] {
            let v = approx_vertex_detailed(&b, alpha).unwrap();
            let opt = v.optimum.objective.value;
            let line = v.reports[0].objective_after;
            assert!(opt <= line * (1.0 + 1e-9) && line <= 1.5 * opt * (1.0 + 1e-9));
            assert!(v.solution.objective.value <= 13.5 * opt);
            for r in &v.reports {
                assert!(r.pieces.iter().all(|d| d.relative_excess() <= WARN_SLACK), "phase {}", r.phase);
                assert!(r.global_bound().relative_excess() <= WARN_SLACK);
                let gap = (r.objective_after - r.objective_before - r.delta_objective).abs();
                assert!(gap <= 1e-9 * r.objective_after, "phase {} gap {gap}", r.phase);
            }
            check_solution(&b, &v.solution).unwrap();
            check_free_pieces(&b, &v.solution, FreePieceRule::vertex_to_vertex()).unwrap();
        }
    }
}
