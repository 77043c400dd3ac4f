use super::solution::{trace_solution, Solution};
use super::{build_dual_graph, min_cut, perimeter_weight, SOURCE};
use crate::arrangement::{build_arrangement, ArrangementError, FaceRole, Subdivision};
use crate::candidates::generate_candidates;
use crate::geom::PolygonSet;
use thiserror::Error;

pub const MAX_BRUTE_FORCE_CELLS: usize = 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("{cells} free cells exceed the brute-force limit of {limit}")]
    TooManyCells { cells: usize, limit: usize },
    #[error("cut identity violated: cut {cut} + offset {offset} differs from objective {objective}")]
    CutMismatch { cut: f64, offset: f64, objective: f64 },
    #[error("alpha must be non-negative, got {0}")]
    NegativeAlpha(f64),
}

/// Weighted objective A + w·P of a face selection (`inside` indexed by
/// face), with w the perimeter weight used by the flow network.
pub fn selection_objective(d: &Subdivision, inside: &[bool], w: f64) -> f64 {
    let area: f64 = d.faces.iter().enumerate().filter(|(f, _)| inside[*f]).map(|(_, f)| f.area).sum();
    let perim: f64 = d.edges.iter().filter(|e| inside[e.face_left] != inside[e.face_right]).map(|e| e.length).sum();
    area + w * perim
}

fn base_selection(d: &Subdivision) -> Vec<bool> {
    d.faces.iter().map(|f| f.role == FaceRole::Polygon).collect()
}

/// Optimal selection of cells of `d` via the minimal minimum cut.
pub fn solve_subdivision(b: &PolygonSet, d: &Subdivision, alpha: f64) -> Result<Solution, SolveError> {
    if alpha < 0.0 || alpha.is_nan() {
        return Err(SolveError::NegativeAlpha(alpha));
    }
    let net = build_dual_graph(d, alpha);
    let cut = min_cut(&net);
    let mut inside = base_selection(d);
    for &v in &cut.source_side {
        if v != SOURCE {
            inside[net.free_faces[v - 2]] = true;
        }
    }
    let g = selection_objective(d, &inside, net.perimeter_weight);
    let total = cut.value + net.constant_offset;
    if (g - total).abs() > 1e-9 * g.abs().max(total.abs()).max(f64::MIN_POSITIVE) {
        return Err(SolveError::CutMismatch { cut: cut.value, offset: net.constant_offset, objective: g });
    }
    let mut s = trace_solution(b, d, &inside, alpha);
    s.cut_value = Some(cut.value);
    s.constant_offset = Some(net.constant_offset);
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct UnrestrictedRun {
    pub solution: Solution,
    pub subdivision: Subdivision,
    pub candidates: usize,
}

/// Exact solver: candidate arcs, their arrangement, then the min cut.
pub fn solve_unrestricted_detailed(b: &PolygonSet, alpha: f64) -> Result<UnrestrictedRun, SolveError> {
    if alpha < 0.0 || alpha.is_nan() {
        return Err(SolveError::NegativeAlpha(alpha));
    }
    let cands = generate_candidates(b, alpha);
    let d = build_arrangement(b, &cands, alpha)?;
    let solution = solve_subdivision(b, &d, alpha)?;
    Ok(UnrestrictedRun { solution, subdivision: d, candidates: cands.len() })
}

pub fn solve_unrestricted(b: &PolygonSet, alpha: f64) -> Result<Solution, SolveError> {
    solve_unrestricted_detailed(b, alpha).map(|r| r.solution)
}

/// Exhaustive minimum over all selections of free cells, enumerated in
/// Gray-code order with incremental objective updates.
pub fn brute_force_subdivision(b: &PolygonSet, d: &Subdivision, alpha: f64) -> Result<Solution, SolveError> {
    if alpha < 0.0 || alpha.is_nan() {
        return Err(SolveError::NegativeAlpha(alpha));
    }
    let free = d.free_faces();
    let k = free.len();
    if k > MAX_BRUTE_FORCE_CELLS {
        return Err(SolveError::TooManyCells { cells: k, limit: MAX_BRUTE_FORCE_CELLS });
    }
    let w = perimeter_weight(d, alpha);
    let mut slot = vec![usize::MAX; d.faces.len()];
    for (i, &f) in free.iter().enumerate() {
        slot[f] = i;
    }
    // Per free cell: neighbours as (slot or fixed membership, weighted length).
    enum Nb {
        Cell(usize),
        Fixed(bool),
    }
    let mut adj: Vec<Vec<(Nb, f64)>> = (0..k).map(|_| Vec::new()).collect();
    for e in &d.edges {
        let (l, r) = (e.face_left, e.face_right);
        if l == r {
            continue;
        }
        for (me, other) in [(l, r), (r, l)] {
            if slot[me] == usize::MAX {
                continue;
            }
            let nb = if slot[other] != usize::MAX { Nb::Cell(slot[other]) } else { Nb::Fixed(d.role(other) == FaceRole::Polygon) };
            adj[slot[me]].push((nb, w * e.length));
        }
    }
    let mut inside = base_selection(d);
    let mut value = selection_objective(d, &inside, w);
    let mut state = vec![false; k];
    let mut best = (value, 0u64);
    let mut mask: u64 = 0;
    for step in 1u64..(1u64 << k) {
        let i = step.trailing_zeros() as usize;
        let was = state[i];
        let mut delta = if was { -d.faces[free[i]].area } else { d.faces[free[i]].area };
        for (nb, len) in &adj[i] {
            let other = match nb {
                Nb::Cell(j) => state[*j],
                Nb::Fixed(m) => *m,
            };
            delta += if other == was { *len } else { -*len };
        }
        state[i] = !was;
        mask ^= 1 << i;
        value += delta;
        if value < best.0 - 1e-12 * value.abs().max(1.0) {
            best = (value, mask);
        }
    }
    for (i, &f) in free.iter().enumerate() {
        inside[f] = best.1 >> i & 1 == 1;
    }
    Ok(trace_solution(b, d, &inside, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::triangulate;
    use crate::geom::Polygon;

    fn rect(x: f64, y: f64, w: f64, h: f64) -> Polygon {
        Polygon::from_coords(&[(x, y), (x + w, y), (x + w, y + h), (x, y + h)]).unwrap()
    }

    fn two_squares(gap: f64) -> PolygonSet {
        PolygonSet::new(vec![rect(0.0, 0.0, 1.0, 1.0), rect(1.0 + gap, 0.0, 1.0, 1.0)]).unwrap()
    }

    #[test]
    fn zero_alpha_returns_input() {
        let b = two_squares(0.5);
        let s = solve_unrestricted(&b, 0.0).unwrap();
        assert_eq!(s.regions.len(), 2);
        assert!((s.objective.area - 2.0).abs() < 1e-12);
    }

    #[test]
    fn convex_polygon_stays_itself() {
        let b = PolygonSet::new(vec![rect(0.0, 0.0, 2.0, 1.0)]).unwrap();
        for alpha in [0.5, 3.0, f64::INFINITY] {
            let s = solve_unrestricted(&b, alpha).unwrap();
            assert_eq!(s.regions.len(), 1);
            assert!((s.objective.area - 2.0).abs() < 1e-12);
            assert!((s.objective.perimeter - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn triangulated_two_squares_threshold() {
        for alpha in [0.5, 1.0, 2.0] {
            let threshold: f64 = 2.0 * alpha / (1.0 + 2.0 * alpha);
            for (g, merged) in [(threshold - 1e-4, true), (threshold + 1e-4, false)] {
                let b = two_squares(g);
                let d = triangulate(&b).unwrap();
                let s = solve_subdivision(&b, &d, alpha).unwrap();
                assert_eq!(s.regions.len() == 1, merged, "alpha {alpha} gap {g}");
                let bf = brute_force_subdivision(&b, &d, alpha).unwrap();
                assert!((bf.objective.value - s.objective.value).abs() < 1e-9 * s.objective.value);
            }
        }
    }

    #[test]
    fn cut_plus_offset_is_objective() {
        let b = two_squares(0.3);
        let d = triangulate(&b).unwrap();
        let s = solve_subdivision(&b, &d, 1.0).unwrap();
        let total = s.cut_value.unwrap() + s.constant_offset.unwrap();
        assert!((total - s.objective.value).abs() < 1e-12);
    }

    #[test]
    fn arcs_merge_close_squares() {
        let b = two_squares(0.5);
        let r = solve_unrestricted_detailed(&b, 1.0).unwrap();
        let s = &r.solution;
        assert_eq!(s.regions.len(), 1);
        assert!(s.arc_count() >= 2);
        assert!(s.objective.value < 2.0 + 8.0 - 1e-9);
        let bf = brute_force_subdivision(&b, &r.subdivision, 1.0);
        if let Ok(bf) = bf {
            assert!((bf.objective.value - s.objective.value).abs() < 1e-9 * s.objective.value);
        }
    }

    #[test]
    fn infinite_alpha_takes_hull_when_shorter() {
        let b = two_squares(0.5);
        let s = solve_unrestricted(&b, f64::INFINITY).unwrap();
        assert_eq!(s.regions.len(), 1);
        assert!((s.objective.perimeter - 7.0).abs() < 1e-9);
        assert_eq!(s.objective.value, s.objective.perimeter);
    }
}
