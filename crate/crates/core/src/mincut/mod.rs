//! Min-cut formulation of the subdivision-restricted problem and the exact
//! unrestricted solver built on it.

mod flow;
mod solution;
mod solve;

pub use flow::{Dinic, PushRelabel};
pub use solution::{trace_solution, BoundaryPiece, PieceKind, Region, Solution};
pub(crate) use solution::merge_curves;
pub use solve::{
    brute_force_subdivision, selection_objective, solve_subdivision, solve_unrestricted, solve_unrestricted_detailed,
    SolveError, UnrestrictedRun, MAX_BRUTE_FORCE_CELLS,
};

use crate::arrangement::{FaceRole, Subdivision};

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

/// Dual graph of a subdivision: node 0 is the source (polygon cells), node 1
/// the sink (outer face), node `2 + i` is free face `free_faces[i]`.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub free_faces: Vec<usize>,
    pub arcs: Vec<(usize, usize, f64)>,
    pub constant_offset: f64,
    /// Weight of one unit of perimeter: α, or the lexicographic scale for
    /// α = ∞.
    pub perimeter_weight: f64,
}

impl FlowNetwork {
    pub fn node_count(&self) -> usize {
        self.free_faces.len() + 2
    }
}

/// Weight of perimeter relative to area; for α = ∞ a factor large enough
/// that any perimeter difference dominates every area difference.
pub fn perimeter_weight(d: &Subdivision, alpha: f64) -> f64 {
    if alpha.is_finite() {
        return alpha;
    }
    let total: f64 = d.faces.iter().filter(|f| f.bounded).map(|f| f.area).sum();
    let diameter = d.vertices.iter().fold(crate::geom::BBox::empty(), |mut b, p| {
        b.add(*p);
        b
    });
    let eps_lex = 1e-9 * diameter.diagonal().max(f64::MIN_POSITIVE);
    1.0 + total / eps_lex
}

pub fn build_dual_graph(d: &Subdivision, alpha: f64) -> FlowNetwork {
    let w = perimeter_weight(d, alpha);
    let free = d.free_faces();
    let mut node = vec![usize::MAX; d.faces.len()];
    for (i, &f) in free.iter().enumerate() {
        node[f] = 2 + i;
    }
    let k = free.len();
    let (mut src, mut snk) = (vec![0.0; k], vec![0.0; k]);
    let mut inner: Vec<(usize, usize, f64)> = Vec::new();
    let polygon_area: f64 = d.faces.iter().filter(|f| f.role == FaceRole::Polygon).map(|f| f.area).sum();
    let mut offset = polygon_area;
    for &f in &free {
        snk[node[f] - 2] += d.faces[f].area;
    }
    for e in &d.edges {
        let (l, r) = (e.face_left, e.face_right);
        if l == r {
            continue;
        }
        let c = w * e.length;
        match (d.role(l), d.role(r)) {
            (FaceRole::Free, FaceRole::Free) => inner.push((node[l].min(node[r]), node[l].max(node[r]), c)),
            (FaceRole::Free, FaceRole::Polygon) => src[node[l] - 2] += c,
            (FaceRole::Polygon, FaceRole::Free) => src[node[r] - 2] += c,
            (FaceRole::Free, FaceRole::Outer) => snk[node[l] - 2] += c,
            (FaceRole::Outer, FaceRole::Free) => snk[node[r] - 2] += c,
            (FaceRole::Polygon, FaceRole::Outer) | (FaceRole::Outer, FaceRole::Polygon) => offset += c,
            _ => {}
        }
    }
    inner.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let mut arcs: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * inner.len() + 2 * k);
    arcs.extend((0..k).filter(|&i| src[i] > 0.0).map(|i| (SOURCE, i + 2, src[i])));
    let mut i = 0;
    while i < inner.len() {
        let (u, v, mut c) = inner[i];
        i += 1;
        while i < inner.len() && (inner[i].0, inner[i].1) == (u, v) {
            c += inner[i].2;
            i += 1;
        }
        if c > 0.0 {
            // Opposite arcs stay adjacent so the flow solver can pair them.
            arcs.push((u, v, c));
            arcs.push((v, u, c));
        }
    }
    arcs.extend((0..k).filter(|&i| snk[i] > 0.0).map(|i| (i + 2, SINK, snk[i])));
    FlowNetwork {
        free_faces: free,
        arcs,
        constant_offset: offset,
        perimeter_weight: w,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinCut {
    /// Capacity of the extracted cut.
    pub value: f64,
    pub flow: f64,
    /// Node ids on the source side, source included.
    pub source_side: Vec<usize>,
}

pub fn min_cut(net: &FlowNetwork) -> MinCut {
    let n = net.node_count();
    let (flow, side) = PushRelabel::new(n, &net.arcs).min_cut(SOURCE, SINK);
    let value = net.arcs.iter().filter(|&&(u, v, _)| side[u] && !side[v]).map(|&(_, _, c)| c).sum();
    MinCut { value, flow, source_side: (0..n).filter(|&v| side[v]).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_network() {
        let net = FlowNetwork { free_faces: vec![], arcs: vec![], constant_offset: 0.0, perimeter_weight: 1.0 };
        let c = min_cut(&net);
        assert_eq!(c.value, 0.0);
        assert_eq!(c.source_side, vec![SOURCE]);
    }

    #[test]
    fn single_node() {
        let net = FlowNetwork { free_faces: vec![7], arcs: vec![(SOURCE, 2, 5.0), (2, SINK, 3.0)], constant_offset: 0.0, perimeter_weight: 1.0 };
        let c = min_cut(&net);
        assert_eq!(c.value, 3.0);
        assert_eq!(c.source_side, vec![SOURCE, 2]);
    }
}
