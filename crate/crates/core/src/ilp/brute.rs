use super::universe::{enumerate_universe, EdgeClass, EdgeUniverse};
use super::IlpError;
use crate::arrangement::{build, free_triangles, FaceRole, InputCurve, Origin};
use crate::geom::{orient, Curve, Point, PolygonSet};
use crate::mincut::{trace_solution, Solution};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

pub const MAX_POCKET_TRIANGLES: usize = 14;
pub const MAX_TRIANGULATIONS: usize = 2_000_000;

/// A connected component of conv(B) \ B.
#[derive(Clone, Debug, PartialEq)]
pub struct Pocket {
    /// Universe triangles inside the pocket.
    pub triangles: Vec<usize>,
    /// Polygon and hull edges bounding the pocket.
    pub boundary: Vec<usize>,
    /// Triangle count of every triangulation of the pocket.
    pub size: usize,
    pub area: f64,
}

fn in_triangle(t: &[Point; 3], p: Point, tol: f64) -> bool {
    (0..3).all(|k| orient(t[k], t[(k + 1) % 3], p) / t[k].dist(t[(k + 1) % 3]) >= -tol)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Groups universe triangles and boundary edges by pocket, using one
/// constrained triangulation to identify the pockets.
pub fn pockets(b: &PolygonSet, u: &EdgeUniverse) -> Result<Vec<Pocket>, IlpError> {
    let mut cdt = free_triangles(b)?;
    for t in &mut cdt {
        if orient(t[0], t[1], t[2]) < 0.0 {
            t.swap(1, 2);
        }
    }
    let key = |p: Point, q: Point| {
        let (a, c) = if (p.x, p.y) < (q.x, q.y) { (p, q) } else { (q, p) };
        (a.x.to_bits(), a.y.to_bits(), c.x.to_bits(), c.y.to_bits())
    };
    let snap = 8.0 * b.tol();
    let is_polygon_edge = |p: Point, q: Point| {
        b.edges().iter().any(|&(_, a, c)| (a.dist(p) <= snap && c.dist(q) <= snap) || (a.dist(q) <= snap && c.dist(p) <= snap))
    };
    let mut parent: Vec<usize> = (0..cdt.len()).collect();
    let mut by_edge: HashMap<_, usize> = HashMap::new();
    for (i, t) in cdt.iter().enumerate() {
        for k in 0..3 {
            let (p, q) = (t[k], t[(k + 1) % 3]);
            if let Some(&j) = by_edge.get(&key(p, q)) {
                if !is_polygon_edge(p, q) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            } else {
                by_edge.insert(key(p, q), i);
            }
        }
    }
    let mut slot: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out: Vec<Pocket> = Vec::new();
    let mut pocket_of_cdt = vec![0; cdt.len()];
    for i in 0..cdt.len() {
        let r = find(&mut parent, i);
        let next = slot.len();
        let s = *slot.entry(r).or_insert(next);
        if s == out.len() {
            out.push(Pocket { triangles: Vec::new(), boundary: Vec::new(), size: 0, area: 0.0 });
        }
        out[s].size += 1;
        out[s].area += 0.5 * orient(cdt[i][0], cdt[i][1], cdt[i][2]);
        pocket_of_cdt[i] = s;
    }
    let tol = b.tol();
    let locate = |p: Point| cdt.iter().position(|t| in_triangle(t, p, tol)).map(|i| pocket_of_cdt[i]);
    let mut pocket_of_triangle = vec![usize::MAX; u.triangles.len()];
    for t in 0..u.triangles.len() {
        let [p, q, r] = u.triangle_points(t);
        let s = locate((p + q + r) / 3.0).ok_or_else(|| IlpError::Internal(format!("triangle {t} lies in no pocket")))?;
        out[s].triangles.push(t);
        pocket_of_triangle[t] = s;
    }
    for (e, ed) in u.edges.iter().enumerate() {
        if matches!(ed.class, EdgeClass::Polygon | EdgeClass::Hull) {
            if let Some(&t) = ed.left.first() {
                out[pocket_of_triangle[t]].boundary.push(e);
            }
        }
    }
    Ok(out)
}

/// Whether two counterclockwise triangles share interior points.
fn overlap(a: &[Point; 3], b: &[Point; 3], tol: f64) -> bool {
    let separated = |s: &[Point; 3], o: &[Point; 3]| {
        (0..3).any(|k| {
            let (p, q) = (s[k], s[(k + 1) % 3]);
            let l = p.dist(q);
            o.iter().all(|&r| orient(p, q, r) / l <= tol)
        })
    };
    !separated(a, b) && !separated(b, a)
}

/// Best selection found in one pocket: pocket objective (area plus α times
/// variable perimeter), triangulation and active triangles.
#[derive(Clone, Debug, Default)]
struct PocketBest {
    value: f64,
    triangulation: Vec<usize>,
    active: Vec<usize>,
    triangulations: usize,
}

struct Search<'a> {
    u: &'a EdgeUniverse,
    alpha: f64,
    tol: f64,
    points: Vec<[Point; 3]>,
    chosen: Vec<usize>,
    /// Edges still missing a triangle, with the side it must lie on.
    open: BTreeMap<usize, bool>,
    best: Option<PocketBest>,
    count: usize,
}

impl Search<'_> {
    fn run(&mut self) -> Result<(), IlpError> {
        let Some((&e, &left)) = self.open.iter().next() else {
            self.count += 1;
            if self.count > MAX_TRIANGULATIONS {
                return Err(IlpError::TooLarge(format!("more than {MAX_TRIANGULATIONS} triangulations in one pocket")));
            }
            self.evaluate();
            return Ok(());
        };
        let ed = &self.u.edges[e];
        let candidates = if left { ed.left.clone() } else { ed.right.clone() };
        for t in candidates {
            if self.chosen.iter().any(|&c| overlap(&self.points[c], &self.points[t], self.tol)) {
                continue;
            }
            let saved = self.open.clone();
            self.chosen.push(t);
            for &f in &self.u.triangles[t].edges {
                let side = self.u.edges[f].left.contains(&t);
                match self.open.get(&f) {
                    Some(&need) if need == side => {
                        self.open.remove(&f);
                    }
                    _ => {
                        self.open.insert(f, !side);
                    }
                }
            }
            self.run()?;
            self.chosen.pop();
            self.open = saved;
        }
        Ok(())
    }

    /// Gray-code scan of all selections of the current triangulation.
    fn evaluate(&mut self) {
        let k = self.chosen.len();
        let slot: HashMap<usize, usize> = self.chosen.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        // Per triangle: (neighbour slot or fixed side membership, weighted length).
        let mut adj: Vec<Vec<(Option<usize>, bool, f64)>> = vec![Vec::new(); k];
        let mut value = 0.0;
        for (i, &t) in self.chosen.iter().enumerate() {
            for &f in &self.u.triangles[t].edges {
                let ed = &self.u.edges[f];
                let w = self.alpha * ed.length;
                match ed.class {
                    EdgeClass::Free => {
                        let other = ed.left.iter().chain(&ed.right).find(|&&o| o != t && slot.contains_key(&o));
                        if let Some(&o) = other {
                            adj[i].push((Some(slot[&o]), false, w));
                        }
                    }
                    EdgeClass::Polygon => {
                        adj[i].push((None, true, w));
                        value += w;
                    }
                    EdgeClass::Hull => adj[i].push((None, false, w)),
                    EdgeClass::HullPolygon => {}
                }
            }
        }
        let mut state = vec![false; k];
        let mut best = (value, 0u64);
        let mut mask = 0u64;
        for step in 1u64..(1u64 << k) {
            let i = step.trailing_zeros() as usize;
            let was = state[i];
            let area = self.u.triangles[self.chosen[i]].area;
            let mut delta = if was { -area } else { area };
            for &(nb, fixed, w) in &adj[i] {
                let other = nb.map_or(fixed, |j| state[j]);
                delta += if other == was { w } else { -w };
            }
            state[i] = !was;
            mask ^= 1 << i;
            value += delta;
            if value < best.0 - 1e-12 * value.abs().max(1.0) {
                best = (value, mask);
            }
        }
        let improves = self.best.as_ref().is_none_or(|b| best.0 < b.value - 1e-12 * b.value.abs().max(1.0));
        if improves {
            self.best = Some(PocketBest {
                value: best.0,
                triangulation: self.chosen.clone(),
                active: (0..k).filter(|&i| best.1 >> i & 1 == 1).map(|i| self.chosen[i]).collect(),
                triangulations: 0,
            });
        }
    }
}

fn solve_pocket(u: &EdgeUniverse, p: &Pocket, alpha: f64, tol: f64) -> Result<PocketBest, IlpError> {
    if p.size > MAX_POCKET_TRIANGLES {
        return Err(IlpError::TooLarge(format!("pocket needs {} triangles, limit {MAX_POCKET_TRIANGLES}", p.size)));
    }
    let mut s = Search {
        u,
        alpha,
        tol,
        points: (0..u.triangles.len()).map(|t| u.triangle_points(t)).collect(),
        chosen: Vec::new(),
        open: p.boundary.iter().map(|&e| (e, true)).collect(),
        best: None,
        count: 0,
    };
    s.run()?;
    let mut best = s.best.ok_or_else(|| IlpError::Internal("pocket admits no triangulation".into()))?;
    best.triangulations = s.count;
    Ok(best)
}

/// Exact vertex-restricted optimum of the triangle selection over all
/// triangulations, found pocket by pocket.
#[derive(Clone, Debug)]
pub struct VertexOptimum {
    pub solution: Solution,
    /// Universe triangles of the chosen triangulation.
    pub triangulation: Vec<usize>,
    pub active: Vec<usize>,
    pub objective: f64,
    pub triangulations: usize,
    pub universe: EdgeUniverse,
}

pub fn brute_force_vertex_detailed(b: &PolygonSet, alpha: f64) -> Result<VertexOptimum, IlpError> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(IlpError::InvalidAlpha(alpha));
    }
    let u = enumerate_universe(b)?;
    let ps = pockets(b, &u)?;
    let tol = b.tol();
    let best: Vec<PocketBest> = ps.par_iter().map(|p| solve_pocket(&u, p, alpha, tol)).collect::<Result<_, _>>()?;
    let fixed: f64 = u.edges.iter().filter(|e| e.class == EdgeClass::HullPolygon).map(|e| e.length).sum();
    let objective = u.polygon_area + alpha * fixed + best.iter().map(|p| p.value).sum::<f64>();
    let triangulation: Vec<usize> = best.iter().flat_map(|p| p.triangulation.iter().copied()).collect();
    let active: Vec<usize> = best.iter().flat_map(|p| p.active.iter().copied()).collect();
    let solution = realize(b, &u, &triangulation, &active, alpha)?;
    Ok(VertexOptimum { solution, triangulation, active, objective, triangulations: best.iter().map(|p| p.triangulations).product(), universe: u })
}

pub fn brute_force_vertex_optimal(b: &PolygonSet, alpha: f64) -> Result<Solution, IlpError> {
    brute_force_vertex_detailed(b, alpha).map(|r| r.solution)
}

/// Traces the regions formed by B and the `active` triangles of a
/// triangulation.
pub fn realize(b: &PolygonSet, u: &EdgeUniverse, triangulation: &[usize], active: &[usize], alpha: f64) -> Result<Solution, IlpError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut extra = Vec::new();
    for &t in triangulation {
        for &e in &u.triangles[t].edges {
            if seen.insert(e) {
                let ed = &u.edges[e];
                extra.push(InputCurve {
                    curve: Curve::segment(u.points[ed.from], u.points[ed.to]),
                    origin: Origin::Extra(e),
                    toggles: 0,
                });
            }
        }
    }
    let d = build(b, extra)?;
    let mut inside: Vec<bool> = d.faces.iter().map(|f| f.role == FaceRole::Polygon).collect();
    for &t in active {
        let [p, q, r] = u.triangle_points(t);
        let c = (p + q + r) / 3.0;
        let f = (0..d.faces.len())
            .find(|&f| d.role(f) == FaceRole::Free && d.face_contains(f, c))
            .ok_or_else(|| IlpError::Internal(format!("triangle {t} matches no cell")))?;
        inside[f] = true;
    }
    Ok(trace_solution(b, &d, &inside, alpha))
}
