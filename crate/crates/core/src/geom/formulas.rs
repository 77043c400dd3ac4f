use super::curve::{chain_area, chain_winding};
use super::{side_of, Curve, GeomError, Point, PolygonSet, Side};

/// Area between a chord and its circular arc with central angle `theta`.
pub fn circular_segment_area(radius: f64, theta: f64) -> f64 {
    (0.5 * radius * radius * (theta - theta.sin())).max(0.0)
}

/// Efficiency (with α = 1) of the radius-`r` minor arc over a chord of
/// length `d`.
pub fn arc_efficiency_by_radius(d: f64, r: f64) -> f64 {
    let half = d / 2.0;
    let theta = 2.0 * (half / r).min(1.0).asin();
    -theta * r + d + 0.5 * r * r * theta - half * (r * r - half * half).max(0.0).sqrt()
}

/// Objective improvement from replacing the chord uv by the curve chain
/// running from `u` to `v`: negative length change plus the signed area
/// between them (positive when the chain lies right of u→v).
pub fn efficiency(u: Point, v: Point, chain: &[Curve], tol: f64) -> Result<f64, GeomError> {
    if chain.is_empty() {
        return Ok(0.0);
    }
    let mut sides = Vec::new();
    for c in chain {
        for k in 1..4 {
            sides.push(side_of(u, v, c.point_at(k as f64 / 4.0), tol));
        }
        sides.push(side_of(u, v, c.end(), tol));
    }
    if sides.contains(&Side::Left) && sides.contains(&Side::Right) {
        return Err(GeomError::CurveCrossesChordLine);
    }
    let mut lp: Vec<Curve> = chain.to_vec();
    lp.push(Curve::segment(v, u));
    let len: f64 = chain.iter().map(Curve::length).sum();
    Ok(-len + u.dist(v) + chain_area(&lp))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectiveBreakdown {
    pub area: f64,
    pub perimeter: f64,
    pub alpha: f64,
    /// area + alpha·perimeter; the perimeter alone when alpha is infinite.
    pub value: f64,
}

impl ObjectiveBreakdown {
    pub fn new(area: f64, perimeter: f64, alpha: f64) -> Self {
        let value = if alpha.is_infinite() { perimeter } else { area + alpha * perimeter };
        ObjectiveBreakdown { area, perimeter, alpha, value }
    }
}

/// Objective of a set of regions, each given as closed boundary cycles
/// (outer counterclockwise, holes clockwise).
pub fn objective(regions: &[Vec<Vec<Curve>>], alpha: f64) -> Result<ObjectiveBreakdown, GeomError> {
    for i in 0..regions.len() {
        for j in 0..regions.len() {
            if i != j && region_pokes_into(&regions[j], &regions[i]) {
                return Err(GeomError::OverlappingRegions(i.min(j), i.max(j)));
            }
        }
    }
    let mut area = 0.0;
    let mut perimeter = 0.0;
    for r in regions {
        for cyc in r {
            area += chain_area(cyc);
            perimeter += cyc.iter().map(Curve::length).sum::<f64>();
        }
    }
    Ok(ObjectiveBreakdown::new(area, perimeter, alpha))
}

fn region_pokes_into(a: &[Vec<Curve>], b: &[Vec<Curve>]) -> bool {
    let scale = b
        .iter()
        .flatten()
        .map(|c| c.bbox().diagonal())
        .fold(0.0, f64::max)
        .max(1.0);
    let tol = 1e-9 * scale;
    for cyc in a {
        for c in cyc {
            for p in [c.start(), c.midpoint()] {
                let w: i32 = b.iter().map(|k| chain_winding(k, p)).sum();
                if w != 0 {
                    let near = b.iter().flatten().any(|k| k.distance_to(p).0 <= tol);
                    if !near {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Uniform scaling of every coordinate about the origin.
pub fn scale_instance(b: &PolygonSet, c: f64) -> Result<PolygonSet, GeomError> {
    if c <= 0.0 || !c.is_finite() {
        return Err(GeomError::NonPositiveFactor(c));
    }
    Ok(b.scaled(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{CircularArc, Orientation};
    use std::f64::consts::PI;

    #[test]
    fn segment_area_examples() {
        assert_eq!(circular_segment_area(1.0, 0.0), 0.0);
        assert!((circular_segment_area(1.0, PI) - PI / 2.0).abs() < 1e-15);
        assert!((circular_segment_area(2.0, PI / 2.0) - 2.0 * (PI / 2.0 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn sector_identity() {
        for k in 0..=20 {
            let th = PI * k as f64 / 20.0;
            let r = 1.7;
            let sector = r * r * th / 2.0;
            let tri = r * r / 2.0 * th.sin();
            assert!((sector - circular_segment_area(r, th) - tri).abs() < 1e-13);
        }
    }

    #[test]
    fn efficiency_of_chord_is_zero() {
        let u = Point::new(0.2, 0.1);
        let v = Point::new(3.0, -1.0);
        assert_eq!(efficiency(u, v, &[Curve::segment(u, v)], 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn efficiency_of_semicircle() {
        let u = Point::new(0.0, 0.0);
        let v = Point::new(2.0, 0.0);
        let arc = CircularArc::between(Point::new(1.0, 0.0), 1.0, u, v, Orientation::Counterclockwise);
        assert!(arc.point_at(0.5).y < 0.0);
        let e = efficiency(u, v, &[Curve::Arc(arc)], 1e-9).unwrap();
        assert!((e - (2.0 - PI / 2.0)).abs() < 1e-12);
        let left = efficiency(v, u, &[Curve::Arc(arc.reversed())], 1e-9).unwrap();
        assert!((left - (-PI + 2.0 - PI / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn efficiency_rejects_crossing_curve() {
        let u = Point::new(0.0, 0.0);
        let v = Point::new(4.0, 0.0);
        let w = Point::new(1.0, 1.0);
        let x = Point::new(3.0, -1.0);
        let chain = [Curve::segment(u, w), Curve::segment(w, x), Curve::segment(x, v)];
        assert_eq!(efficiency(u, v, &chain, 1e-9), Err(GeomError::CurveCrossesChordLine));
    }

    #[test]
    fn radius_one_beats_radius_two() {
        let one = arc_efficiency_by_radius(1.0, 1.0);
        let two = arc_efficiency_by_radius(1.0, 2.0);
        assert!(one > two);
        let arc = CircularArc::from_chord(Point::new(0.0, 0.0), Point::new(1.0, 0.0), 1.0, 1e-12).unwrap();
        let direct = efficiency(Point::new(0.0, 0.0), Point::new(1.0, 0.0), &[Curve::Arc(arc)], 1e-9).unwrap();
        assert!((direct - one).abs() < 1e-14);
    }

    fn square(x: f64, y: f64, s: f64) -> Vec<Curve> {
        let p = [Point::new(x, y), Point::new(x + s, y), Point::new(x + s, y + s), Point::new(x, y + s)];
        (0..4).map(|i| Curve::segment(p[i], p[(i + 1) % 4])).collect()
    }

    #[test]
    fn objective_examples() {
        let o = objective(&[vec![square(0.0, 0.0, 1.0)]], 1.0).unwrap();
        assert_eq!((o.area, o.perimeter, o.value), (1.0, 4.0, 5.0));
        let o = objective(&[vec![square(0.0, 0.0, 1.0)], vec![square(3.0, 0.0, 1.0)]], 2.0).unwrap();
        assert_eq!((o.area, o.perimeter, o.value), (2.0, 8.0, 18.0));
        let c = Point::new(0.0, 0.0);
        let disk = vec![
            Curve::Arc(CircularArc::between(c, 1.0, Point::new(1.0, 0.0), Point::new(-1.0, 0.0), Orientation::Counterclockwise)),
            Curve::Arc(CircularArc::between(c, 1.0, Point::new(-1.0, 0.0), Point::new(1.0, 0.0), Orientation::Counterclockwise)),
        ];
        assert!((objective(&[vec![disk]], 0.0).unwrap().value - PI).abs() < 1e-12);
        assert!(matches!(
            objective(&[vec![square(0.0, 0.0, 2.0)], vec![square(1.0, 1.0, 2.0)]], 1.0),
            Err(GeomError::OverlappingRegions(0, 1))
        ));
    }
}
