use super::{build, ArrangementError, InputCurve, Origin, Subdivision};
use crate::geom::{Containment, Curve, Point, PolygonSet};
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

/// Constrained Delaunay triangles of V(B) with E(B) as constraints, keeping
/// those outside every polygon.
pub fn free_triangles(b: &PolygonSet) -> Result<Vec<[Point; 3]>, ArrangementError> {
    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
    let mut handles = Vec::with_capacity(b.vertex_count());
    for p in b.vertices() {
        let h = cdt
            .insert(Point2::new(p.x, p.y))
            .map_err(|e| ArrangementError::NumericalDegeneracy(format!("triangulation insert failed: {e:?}")))?;
        handles.push(h);
    }
    for g in 0..b.vertex_count() {
        let (a, z) = (handles[g], handles[b.edge_end(g)]);
        if a == z {
            continue;
        }
        if !cdt.can_add_constraint(a, z) {
            return Err(ArrangementError::ConstraintIntersection(g));
        }
        cdt.add_constraint(a, z);
    }
    let tol = b.tol();
    let mut out = Vec::new();
    for f in cdt.inner_faces() {
        let vs = f.vertices().map(|v| {
            let p = v.position();
            Point::new(p.x, p.y)
        });
        let c = (vs[0] + vs[1] + vs[2]) / 3.0;
        if b.polygons().iter().any(|poly| poly.contains(c, tol) == Containment::Inside) {
            continue;
        }
        out.push(vs);
    }
    Ok(out)
}

/// The constrained triangulation restricted to conv(B) \ B, in the same
/// representation as the candidate arrangement.
pub fn triangulate(b: &PolygonSet) -> Result<Subdivision, ArrangementError> {
    let tris = free_triangles(b)?;
    let mut extra = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for t in &tris {
        for k in 0..3 {
            let (p, q) = (t[k], t[(k + 1) % 3]);
            let key = if (p.x, p.y) < (q.x, q.y) { (p.x.to_bits(), p.y.to_bits(), q.x.to_bits(), q.y.to_bits()) } else { (q.x.to_bits(), q.y.to_bits(), p.x.to_bits(), p.y.to_bits()) };
            if seen.insert(key) {
                let id = extra.len();
                extra.push(InputCurve { curve: Curve::segment(p, q), origin: Origin::Extra(id), toggles: 0 });
            }
        }
    }
    build(b, extra)
}
