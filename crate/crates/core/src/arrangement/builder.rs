use super::{half_area_term, ArrangementError, Face, FaceRole, Origin, SourceRef, SubEdge, Subdivision};
use crate::candidates::CandidateArc;
use crate::geom::{chain_winding, intersect, BBox, CircularArc, Curve, Point, PolygonSet};
use std::collections::{HashMap, HashSet, VecDeque};
use std::f64::consts::TAU;

/// Snap radius in multiples of the instance tolerance.
const SNAP: f64 = 8.0;

#[derive(Clone, Copy, Debug)]
pub struct InputCurve {
    pub curve: Curve,
    pub origin: Origin,
    pub toggles: u8,
}

/// The subdivision induced by the candidate arcs, the polygon edges and
/// the hull. Arcs leaving conv(B) are dropped.
pub fn build_arrangement(b: &PolygonSet, curves: &[CandidateArc], _alpha: f64) -> Result<Subdivision, ArrangementError> {
    let hull = b.hull();
    let tol = b.tol();
    let extra: Vec<InputCurve> = curves
        .iter()
        .enumerate()
        .filter(|(_, c)| inside_hull(&c.curve, &hull, tol))
        .map(|(i, c)| InputCurve { curve: c.curve, origin: Origin::Candidate(i), toggles: 0 })
        .collect();
    build(b, extra)
}

fn inside_hull(curve: &Curve, hull: &[Point], tol: f64) -> bool {
    if hull.len() < 3 {
        return false;
    }
    let mut ts = vec![0.0, 1.0];
    for i in 0..hull.len() {
        let e = Curve::segment(hull[i], hull[(i + 1) % hull.len()]);
        ts.extend(intersect(curve, &e, tol).into_iter().map(|h| h.ta));
    }
    ts.sort_by(f64::total_cmp);
    ts.windows(2).filter(|w| w[1] - w[0] > 1e-12).all(|w| {
        let p = curve.point_at(0.5 * (w[0] + w[1]));
        (0..hull.len()).all(|i| crate::geom::orient(hull[i], hull[(i + 1) % hull.len()], p) / hull[i].dist(hull[(i + 1) % hull.len()]) >= -tol)
    })
}

struct Grid {
    cell: f64,
    radius: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Point>,
}

impl Grid {
    fn key(&self, p: Point) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    fn insert(&mut self, p: Point) -> usize {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.map.get(&(kx + dx, ky + dy)) {
                    for &i in ids {
                        if self.points[i].dist(p) <= self.radius {
                            return i;
                        }
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.map.entry((kx, ky)).or_default().push(id);
        id
    }
}

/// Sub-curve of `parent` between two snapped points that lie near it, with
/// parameters `t0 < t1`. Arcs keep their radius and are recentred to pass
/// exactly through both points.
fn piece(parent: &Curve, t0: f64, t1: f64, p: Point, q: Point) -> Option<Curve> {
    match parent {
        Curve::Segment(_) => Some(Curve::segment(p, q)),
        Curve::Arc(a) => {
            let s = a.orientation.sign();
            let expected = (t1 - t0) * a.sweep;
            let mid = p.lerp(q, 0.5);
            let chord = q - p;
            let len = chord.norm();
            if len == 0.0 {
                return None;
            }
            let perp = chord.perp() * (1.0 / len);
            let h = (a.radius * a.radius - 0.25 * len * len).max(0.0).sqrt();
            let side = if (a.center - mid).dot(perp) >= 0.0 { 1.0 } else { -1.0 };
            let center = mid + perp * (side * h);
            let a0 = (p - center).angle();
            let a1 = (q - center).angle();
            let mut d = (s * (a1 - a0)).rem_euclid(TAU);
            for cand in [d - TAU, d + TAU] {
                if (cand - expected).abs() < (d - expected).abs() {
                    d = cand;
                }
            }
            if d <= 0.0 || d >= TAU - 1e-12 {
                return None;
            }
            Some(Curve::Arc(CircularArc {
                center,
                radius: a.radius,
                start_angle: crate::geom::normalize_angle(a0),
                sweep: d,
                orientation: a.orientation,
            }))
        }
    }
}

struct Raw {
    curve: Curve,
    from: usize,
    to: usize,
    sources: Vec<SourceRef>,
    toggles: u8,
}

/// Builds the subdivision of the plane induced by the polygon edges of `b`,
/// its hull edges and `extra`, and classifies faces.
pub fn build(b: &PolygonSet, extra: Vec<InputCurve>) -> Result<Subdivision, ArrangementError> {
    let tol = b.tol();
    let mut inputs: Vec<InputCurve> = Vec::new();
    for (er, p, q) in b.edges() {
        let g = b.global_index(crate::geom::VertexRef { polygon: er.polygon, index: er.index });
        inputs.push(InputCurve { curve: Curve::segment(p, q), origin: Origin::PolygonEdge { poly: er.polygon, edge: g }, toggles: 0 });
    }
    let hull = b.hull();
    if hull.len() >= 3 {
        for i in 0..hull.len() {
            inputs.push(InputCurve { curve: Curve::segment(hull[i], hull[(i + 1) % hull.len()]), origin: Origin::Hull, toggles: 0 });
        }
    }
    inputs.extend(extra.into_iter().filter(|c| c.curve.start().dist(c.curve.end()) > tol || c.curve.is_arc()));
    assemble(inputs, tol, b)
}

fn assemble(inputs: Vec<InputCurve>, tol: f64, b: &PolygonSet) -> Result<Subdivision, ArrangementError> {
    let snap = SNAP * tol;
    let mut grid = Grid { cell: snap.max(f64::MIN_POSITIVE), radius: snap, map: HashMap::new(), points: Vec::new() };
    let n = inputs.len();
    let mut stops: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    for (i, c) in inputs.iter().enumerate() {
        let a = grid.insert(c.curve.start());
        let z = grid.insert(c.curve.end());
        stops[i].push((0.0, a));
        stops[i].push((1.0, z));
    }
    let boxes: Vec<BBox> = inputs.iter().map(|c| c.curve.bbox().expanded(snap)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| boxes[i].min.x.total_cmp(&boxes[j].min.x).then(i.cmp(&j)));
    let mut active: Vec<usize> = Vec::new();
    let mut hits: Vec<(usize, usize, f64, f64, Point)> = Vec::new();
    for &i in &order {
        let bi = boxes[i];
        active.retain(|&j| boxes[j].max.x >= bi.min.x);
        for &j in &active {
            if !bi.overlaps(&boxes[j]) {
                continue;
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            for h in intersect(&inputs[lo].curve, &inputs[hi].curve, snap) {
                hits.push((lo, hi, h.ta, h.tb, h.point));
            }
        }
        active.push(i);
    }
    hits.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.total_cmp(&y.2)));
    for (i, j, ta, tb, p) in hits {
        let v = grid.insert(p);
        stops[i].push((ta, v));
        stops[j].push((tb, v));
    }
    let points = grid.points;
    add_nearby_stops(&inputs, &points, &mut stops, snap);

    let mut raw: Vec<Raw> = Vec::new();
    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, c) in inputs.iter().enumerate() {
        let st = &mut stops[i];
        st.sort_by(|x, y| x.0.total_cmp(&y.0));
        st.dedup_by(|x, y| x.1 == y.1);
        for w in st.windows(2) {
            let ((t0, a), (t1, z)) = (w[0], w[1]);
            if a == z {
                continue;
            }
            let Some(curve) = piece(&c.curve, t0, t1, points[a], points[z]) else { continue };
            if curve.length() <= tol {
                continue;
            }
            let key = (a.min(z), a.max(z));
            let mid = curve.midpoint();
            let bucket = by_pair.entry(key).or_default();
            if let Some(&k) = bucket.iter().find(|&&k| raw[k].curve.midpoint().dist(mid) <= snap) {
                let same = raw[k].from == a;
                raw[k].sources.push(SourceRef { origin: c.origin, same_direction: same });
                raw[k].toggles ^= c.toggles;
            } else {
                bucket.push(raw.len());
                raw.push(Raw { curve, from: a, to: z, sources: vec![SourceRef { origin: c.origin, same_direction: true }], toggles: c.toggles });
            }
        }
    }

    prune_dangling(&mut raw, points.len());
    finish(points, raw, tol, b)
}

/// Routes every curve through each vertex lying within `snap` of it, so that
/// nearly coincident curves share their vertices.
fn add_nearby_stops(inputs: &[InputCurve], points: &[Point], stops: &mut [Vec<(f64, usize)>], snap: f64) {
    if points.is_empty() {
        return;
    }
    let bb = points.iter().fold(BBox::empty(), |mut bb, p| {
        bb.add(*p);
        bb
    });
    let cell = (bb.diagonal() / (points.len() as f64).sqrt()).max(4.0 * snap);
    let key = |p: Point| (((p.x - bb.min.x) / cell).floor() as i64, ((p.y - bb.min.y) / cell).floor() as i64);
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (v, p) in points.iter().enumerate() {
        cells.entry(key(*p)).or_default().push(v);
    }
    for (i, c) in inputs.iter().enumerate() {
        let have: HashSet<usize> = stops[i].iter().map(|s| s.1).collect();
        let k = (c.curve.length() / (0.5 * cell)).ceil().max(1.0) as usize;
        let mut visited: HashSet<(i64, i64)> = HashSet::new();
        for s in 0..=k {
            let (cx, cy) = key(c.curve.point_at(s as f64 / k as f64));
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if !visited.insert((cx + dx, cy + dy)) {
                        continue;
                    }
                    let Some(ids) = cells.get(&(cx + dx, cy + dy)) else { continue };
                    for &v in ids {
                        if have.contains(&v) {
                            continue;
                        }
                        let (d, t) = c.curve.distance_to(points[v]);
                        if d <= snap && t > 0.0 && t < 1.0 {
                            stops[i].push((t, v));
                        }
                    }
                }
            }
        }
    }
}

fn prune_dangling(raw: &mut Vec<Raw>, nv: usize) {
    let is_poly = |r: &Raw| r.sources.iter().any(|s| matches!(s.origin, Origin::PolygonEdge { .. }));
    let mut alive = vec![true; raw.len()];
    let mut deg = vec![0usize; nv];
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (k, r) in raw.iter().enumerate() {
        deg[r.from] += 1;
        deg[r.to] += 1;
        inc[r.from].push(k);
        inc[r.to].push(k);
    }
    let mut queue: VecDeque<usize> = (0..nv).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = queue.pop_front() {
        if deg[v] != 1 {
            continue;
        }
        let Some(&k) = inc[v].iter().find(|&&k| alive[k]) else { continue };
        if is_poly(&raw[k]) {
            continue;
        }
        alive[k] = false;
        for w in [raw[k].from, raw[k].to] {
            deg[w] -= 1;
            if deg[w] == 1 {
                queue.push_back(w);
            }
        }
    }
    let mut k = 0;
    raw.retain(|_| {
        let keep = alive[k];
        k += 1;
        keep
    });
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn finish(points: Vec<Point>, raw: Vec<Raw>, tol: f64, b: &PolygonSet) -> Result<Subdivision, ArrangementError> {
    // Compact vertices.
    let mut remap = vec![usize::MAX; points.len()];
    let mut vertices = Vec::new();
    for r in &raw {
        for v in [r.from, r.to] {
            if remap[v] == usize::MAX {
                remap[v] = vertices.len();
                vertices.push(points[v]);
            }
        }
    }
    let mut edges: Vec<SubEdge> = raw
        .into_iter()
        .map(|r| SubEdge {
            length: r.curve.length(),
            curve: r.curve,
            from: remap[r.from],
            to: remap[r.to],
            sources: r.sources,
            toggles: r.toggles,
            face_left: usize::MAX,
            face_right: usize::MAX,
        })
        .collect();
    let nv = vertices.len();
    let nh = 2 * edges.len();
    let anchor = vertices.iter().fold(BBox::empty(), |mut bb, p| {
        bb.add(*p);
        bb
    });
    let anchor = if nv > 0 { anchor.min } else { Point::default() };
    let origin = |h: usize, edges: &[SubEdge]| if h % 2 == 0 { edges[h / 2].from } else { edges[h / 2].to };
    let curve_of = |h: usize, edges: &[SubEdge]| if h % 2 == 0 { edges[h / 2].curve } else { edges[h / 2].curve.reversed() };

    // Outgoing half-edges in counterclockwise order.
    let mut rho = vec![f64::INFINITY; nv];
    for e in &edges {
        rho[e.from] = rho[e.from].min(0.5 * e.length);
        rho[e.to] = rho[e.to].min(0.5 * e.length);
    }
    let mut out: Vec<Vec<(f64, usize)>> = vec![Vec::new(); nv];
    for h in 0..nh {
        let v = origin(h, &edges);
        out[v].push((Subdivision::angular_key(&curve_of(h, &edges), rho[v]), h));
    }
    let mut pos = vec![0usize; nh];
    for list in out.iter_mut() {
        list.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for (k, &(_, h)) in list.iter().enumerate() {
            pos[h] = k;
        }
    }
    let mut next = vec![0usize; nh];
    for h in 0..nh {
        let t = h ^ 1;
        let v = origin(t, &edges);
        let list = &out[v];
        let k = (pos[t] + list.len() - 1) % list.len();
        next[h] = list[k].1;
    }

    // Cycles.
    let mut cycle_of = vec![usize::MAX; nh];
    let mut cycles: Vec<(usize, f64)> = Vec::new();
    for h0 in 0..nh {
        if cycle_of[h0] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut area = 0.0;
        let mut h = h0;
        let mut guard = 0;
        loop {
            cycle_of[h] = id;
            area += half_area_term(&vertices[origin(h, &edges)], &vertices[origin(h ^ 1, &edges)], &curve_of(h, &edges), anchor);
            h = next[h];
            guard += 1;
            if h == h0 {
                break;
            }
            if guard > nh || cycle_of[h] != usize::MAX {
                return Err(ArrangementError::NumericalDegeneracy(format!("half-edge cycle through {h0} does not close")));
            }
        }
        cycles.push((h0, area));
    }

    // Components.
    let mut parent: Vec<usize> = (0..nv).collect();
    for e in &edges {
        let (a, z) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != z {
            parent[a] = z;
        }
    }
    let mut comp_id = HashMap::new();
    for v in 0..nv {
        let r = find(&mut parent, v);
        let next_id = comp_id.len();
        comp_id.entry(r).or_insert(next_id);
    }
    let components = comp_id.len();
    let mut exterior: Vec<Option<usize>> = vec![None; components];
    for (c, &(h, area)) in cycles.iter().enumerate() {
        let comp = comp_id[&find(&mut parent, origin(h, &edges))];
        match exterior[comp] {
            Some(k) if cycles[k].1 <= area => {}
            _ => exterior[comp] = Some(c),
        }
    }
    let is_exterior: Vec<bool> = {
        let mut v = vec![false; cycles.len()];
        for c in exterior.iter().flatten() {
            v[*c] = true;
        }
        v
    };

    // Faces: bounded ones first, then the unbounded face.
    let mut faces: Vec<Face> = Vec::new();
    let mut face_of_cycle = vec![usize::MAX; cycles.len()];
    for (c, &(h, area)) in cycles.iter().enumerate() {
        if is_exterior[c] {
            continue;
        }
        face_of_cycle[c] = faces.len();
        faces.push(Face { cycles: vec![h], area, role: FaceRole::Free, bounded: true, polygon: None });
    }
    let outer_face = faces.len();
    faces.push(Face { cycles: Vec::new(), area: 0.0, role: FaceRole::Outer, bounded: false, polygon: None });
    let curves_of_cycle = |h0: usize, edges: &[SubEdge]| {
        let mut v = vec![curve_of(h0, edges)];
        let mut h = next[h0];
        while h != h0 {
            v.push(curve_of(h, edges));
            h = next[h];
        }
        v
    };
    let bounded_boxes: Vec<(usize, BBox)> = (0..outer_face)
        .map(|f| {
            let cs = curves_of_cycle(faces[f].cycles[0], &edges);
            let mut bb = BBox::empty();
            for c in &cs {
                bb = bb.union(&c.bbox());
            }
            (f, bb)
        })
        .collect();
    for (c, &(h, _)) in cycles.iter().enumerate() {
        if !is_exterior[c] {
            continue;
        }
        let p = vertices[origin(h, &edges)];
        let my_comp = comp_id[&find(&mut parent, origin(h, &edges))];
        let mut best: Option<(usize, f64)> = None;
        for &(f, bb) in &bounded_boxes {
            if !bb.contains(p) {
                continue;
            }
            let fh = faces[f].cycles[0];
            if comp_id[&find(&mut parent, origin(fh, &edges))] == my_comp {
                continue;
            }
            if best.is_some_and(|(_, a)| a <= faces[f].area) {
                continue;
            }
            if chain_winding(&curves_of_cycle(fh, &edges), p) != 0 {
                best = Some((f, faces[f].area));
            }
        }
        let f = best.map_or(outer_face, |(f, _)| f);
        face_of_cycle[c] = f;
        faces[f].cycles.push(h);
    }
    let mut half_face = vec![0usize; nh];
    for h in 0..nh {
        half_face[h] = face_of_cycle[cycle_of[h]];
    }
    for f in 0..outer_face {
        let total: f64 = faces[f].cycles.iter().map(|&h| cycles[cycle_of[h]].1).sum();
        faces[f].area = total;
    }
    for (k, e) in edges.iter_mut().enumerate() {
        e.face_left = half_face[2 * k];
        e.face_right = half_face[2 * k + 1];
    }

    // Roles.
    let nf = faces.len();
    let mut face_halves: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for h in 0..nh {
        face_halves[half_face[h]].push(h);
    }
    let forward_poly = |h: usize, edges: &[SubEdge]| match edges[h / 2].polygon_source() {
        Some((p, _, same)) if same == (h % 2 == 0) => Some(p),
        _ => None,
    };
    let mut queue: VecDeque<usize> = VecDeque::new();
    for f in 0..outer_face {
        if let Some(p) = face_halves[f].iter().find_map(|&h| forward_poly(h, &edges)) {
            faces[f].role = FaceRole::Polygon;
            faces[f].polygon = Some(p);
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        for &h in &face_halves[f] {
            if edges[h / 2].is_polygon() {
                continue;
            }
            let g = half_face[h ^ 1];
            if g != outer_face && faces[g].role == FaceRole::Free {
                faces[g].role = FaceRole::Polygon;
                faces[g].polygon = faces[f].polygon;
                queue.push_back(g);
            }
        }
    }
    queue.push_back(outer_face);
    while let Some(f) = queue.pop_front() {
        for &h in &face_halves[f] {
            let e = &edges[h / 2];
            if e.is_polygon() || e.is_hull() {
                continue;
            }
            let g = half_face[h ^ 1];
            if faces[g].role == FaceRole::Free {
                faces[g].role = FaceRole::Outer;
                queue.push_back(g);
            }
        }
    }
    let polygon_faces: Vec<usize> = (0..nf).filter(|&f| faces[f].role == FaceRole::Polygon).collect();

    let sub = Subdivision { vertices, edges, faces, outer_face, polygon_faces, components, tol, anchor, next, half_face };
    validate(&sub, b)?;
    Ok(sub)
}

fn validate(sub: &Subdivision, b: &PolygonSet) -> Result<(), ArrangementError> {
    if sub.edges.is_empty() {
        return Ok(());
    }
    if !sub.euler_holds() {
        return Err(ArrangementError::NumericalDegeneracy(format!(
            "Euler check failed: V={} E={} F={} C={}",
            sub.vertices.len(),
            sub.edges.len(),
            sub.faces.len(),
            sub.components
        )));
    }
    for (f, face) in sub.faces.iter().enumerate() {
        if face.bounded && face.area <= 0.0 {
            return Err(ArrangementError::NumericalDegeneracy(format!("face {f} has non-positive area {}", face.area)));
        }
    }
    let hull_area = b.hull_area();
    if hull_area > 0.0 {
        let inside: f64 = sub.faces.iter().filter(|f| f.bounded && f.role != FaceRole::Outer).map(|f| f.area).sum();
        if (inside - hull_area).abs() > 1e-6 * hull_area {
            return Err(ArrangementError::NumericalDegeneracy(format!("faces cover area {inside}, hull area is {hull_area}")));
        }
    }
    Ok(())
}
