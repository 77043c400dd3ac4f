use super::{normalize_angle, orient, point_segment_distance, BBox, GeomError, Point};
use super::formulas::circular_segment_area;
use std::f64::consts::{PI, TAU};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectedSegment {
    pub from: Point,
    pub to: Point,
}

impl DirectedSegment {
    pub fn new(from: Point, to: Point, tol: f64) -> Result<Self, GeomError> {
        if from.dist(to) <= tol {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(DirectedSegment { from, to })
    }

    /// Builds a segment without the length check; used for curve fragments
    /// whose endpoints are already known to be distinct vertices.
    pub fn raw(from: Point, to: Point) -> Self {
        DirectedSegment { from, to }
    }

    pub fn length(&self) -> f64 {
        self.from.dist(self.to)
    }

    pub fn direction(&self) -> Point {
        (self.to - self.from).unit()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Counterclockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Counterclockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::Counterclockwise,
        }
    }
}

/// Arc of a circle, traversed from `start_angle` through `sweep` radians in
/// the direction given by `orientation`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircularArc {
    pub center: Point,
    pub radius: f64,
    /// In [0, 2π).
    pub start_angle: f64,
    /// Positive, measured along `orientation`.
    pub sweep: f64,
    pub orientation: Orientation,
}

impl CircularArc {
    /// The minor arc of the given radius from `u` to `v` that bulges to the
    /// right of u→v.
    pub fn from_chord(u: Point, v: Point, radius: f64, tol: f64) -> Result<Self, GeomError> {
        let d = u.dist(v);
        if d <= tol {
            return Err(GeomError::DegenerateChord);
        }
        if d >= 2.0 * radius {
            return Err(GeomError::ChordTooLong { chord: d, diameter: 2.0 * radius });
        }
        let mid = u.lerp(v, 0.5);
        let h = (radius * radius - d * d / 4.0).max(0.0).sqrt();
        let center = mid + (v - u).unit().perp() * h;
        let sweep = 2.0 * (d / (2.0 * radius)).min(1.0).asin();
        Ok(CircularArc {
            center,
            radius,
            start_angle: normalize_angle((u - center).angle()),
            sweep,
            orientation: Orientation::Counterclockwise,
        })
    }

    /// Arc on the circle (center, radius) from the direction of `from` to the
    /// direction of `to`, going along `orientation`.
    pub fn between(center: Point, radius: f64, from: Point, to: Point, orientation: Orientation) -> Self {
        let a0 = normalize_angle((from - center).angle());
        let a1 = normalize_angle((to - center).angle());
        let sweep = match orientation {
            Orientation::Counterclockwise => normalize_angle(a1 - a0),
            Orientation::Clockwise => normalize_angle(a0 - a1),
        };
        CircularArc { center, radius, start_angle: a0, sweep, orientation }
    }

    pub fn end_angle(&self) -> f64 {
        normalize_angle(self.start_angle + self.orientation.sign() * self.sweep)
    }

    pub fn angle_at(&self, t: f64) -> f64 {
        self.start_angle + self.orientation.sign() * self.sweep * t
    }

    pub fn point_at_angle(&self, a: f64) -> Point {
        self.center + Point::from_angle(a) * self.radius
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.point_at_angle(self.angle_at(t))
    }

    pub fn start(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point {
        self.point_at(1.0)
    }

    /// Central angle.
    pub fn theta(&self) -> f64 {
        self.sweep
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep
    }

    pub fn chord_length(&self) -> f64 {
        2.0 * self.radius * (self.sweep / 2.0).sin()
    }

    pub fn segment_area(&self) -> f64 {
        circular_segment_area(self.radius, self.sweep)
    }

    /// Signed curvature: positive when the arc turns left.
    pub fn curvature(&self) -> f64 {
        self.orientation.sign() / self.radius
    }

    pub fn tangent_at(&self, t: f64) -> Point {
        let a = self.angle_at(t);
        Point::new(-a.sin(), a.cos()) * self.orientation.sign()
    }

    pub fn reversed(&self) -> Self {
        CircularArc {
            center: self.center,
            radius: self.radius,
            start_angle: self.end_angle(),
            sweep: self.sweep,
            orientation: self.orientation.flip(),
        }
    }

    /// Parameter of angle `a` on this arc, if it lies within the angular span
    /// extended by `slack` radians on both ends.
    pub fn param_of_angle(&self, a: f64, slack: f64) -> Option<f64> {
        let off = match self.orientation {
            Orientation::Counterclockwise => normalize_angle(a - self.start_angle),
            Orientation::Clockwise => normalize_angle(self.start_angle - a),
        };
        if off <= self.sweep + slack {
            Some((off / self.sweep).min(1.0))
        } else if off >= TAU - slack {
            Some(0.0)
        } else {
            None
        }
    }

    pub fn distance_to(&self, p: Point) -> (f64, f64) {
        let v = p - self.center;
        if v.norm() > 0.0 {
            if let Some(t) = self.param_of_angle(v.angle(), 0.0) {
                return ((v.norm() - self.radius).abs(), t);
            }
        }
        let (a, b) = (self.start(), self.end());
        if p.dist(a) <= p.dist(b) {
            (p.dist(a), 0.0)
        } else {
            (p.dist(b), 1.0)
        }
    }

    pub fn sub_arc(&self, t0: f64, t1: f64) -> Self {
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let mut a = CircularArc {
            center: self.center,
            radius: self.radius,
            start_angle: normalize_angle(self.angle_at(lo)),
            sweep: self.sweep * (hi - lo),
            orientation: self.orientation,
        };
        if t0 > t1 {
            a = a.reversed();
        }
        a
    }

    pub fn bbox(&self) -> BBox {
        let mut b = BBox::of_points([self.start(), self.end()]);
        for k in 0..4 {
            let a = k as f64 * PI / 2.0;
            if self.param_of_angle(a, 0.0).is_some() {
                b.add(self.point_at_angle(a));
            }
        }
        b
    }

    /// Whether `p` lies strictly inside the region bounded by this arc and its
    /// chord.
    pub fn segment_region_contains(&self, p: Point) -> bool {
        if p.dist(self.center) >= self.radius {
            return false;
        }
        let (a, b) = (self.start(), self.end());
        let o = orient(a, b, p);
        match self.orientation {
            Orientation::Counterclockwise => o < 0.0,
            Orientation::Clockwise => o > 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Curve {
    Segment(DirectedSegment),
    Arc(CircularArc),
}

impl Curve {
    pub fn segment(from: Point, to: Point) -> Self {
        Curve::Segment(DirectedSegment::raw(from, to))
    }

    pub fn start(&self) -> Point {
        match self {
            Curve::Segment(s) => s.from,
            Curve::Arc(a) => a.start(),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Curve::Segment(s) => s.to,
            Curve::Arc(a) => a.end(),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Curve::Segment(s) => s.length(),
            Curve::Arc(a) => a.length(),
        }
    }

    pub fn is_arc(&self) -> bool {
        matches!(self, Curve::Arc(_))
    }

    pub fn reversed(&self) -> Self {
        match self {
            Curve::Segment(s) => Curve::segment(s.to, s.from),
            Curve::Arc(a) => Curve::Arc(a.reversed()),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        match self {
            Curve::Segment(s) => s.from.lerp(s.to, t),
            Curve::Arc(a) => a.point_at(t),
        }
    }

    pub fn midpoint(&self) -> Point {
        self.point_at(0.5)
    }

    pub fn tangent_at(&self, t: f64) -> Point {
        match self {
            Curve::Segment(s) => s.direction(),
            Curve::Arc(a) => a.tangent_at(t),
        }
    }

    pub fn curvature(&self) -> f64 {
        match self {
            Curve::Segment(_) => 0.0,
            Curve::Arc(a) => a.curvature(),
        }
    }

    pub fn bbox(&self) -> BBox {
        match self {
            Curve::Segment(s) => BBox::of_points([s.from, s.to]),
            Curve::Arc(a) => a.bbox(),
        }
    }

    /// Distance from `p` and the parameter of the nearest point.
    pub fn distance_to(&self, p: Point) -> (f64, f64) {
        match self {
            Curve::Segment(s) => point_segment_distance(p, s.from, s.to),
            Curve::Arc(a) => a.distance_to(p),
        }
    }

    pub fn sub_curve(&self, t0: f64, t1: f64) -> Self {
        match self {
            Curve::Segment(_) => Curve::segment(self.point_at(t0), self.point_at(t1)),
            Curve::Arc(a) => Curve::Arc(a.sub_arc(t0, t1)),
        }
    }

    /// This curve's term in the signed area of a closed boundary: the
    /// shoelace term of its chord plus the signed circular segment.
    pub fn area_term(&self) -> f64 {
        let (a, b) = (self.start(), self.end());
        let base = 0.5 * a.cross(b);
        match self {
            Curve::Segment(_) => base,
            Curve::Arc(arc) => base + arc.orientation.sign() * arc.segment_area(),
        }
    }

    /// Change of the angle of (curve − p) along the curve.
    pub fn winding_angle(&self, p: Point) -> f64 {
        let (a, b) = (self.start() - p, self.end() - p);
        let chord = a.cross(b).atan2(a.dot(b));
        match self {
            Curve::Segment(_) => chord,
            Curve::Arc(arc) => {
                if arc.segment_region_contains(p) {
                    chord + TAU * arc.orientation.sign()
                } else {
                    chord
                }
            }
        }
    }

    /// Points along the curve, first and last included; arcs are split so
    /// that no chord deviates from the arc by more than `sagitta`.
    pub fn discretize(&self, sagitta: f64) -> Vec<Point> {
        match self {
            Curve::Segment(s) => vec![s.from, s.to],
            Curve::Arc(a) => {
                let n = arc_pieces(a.radius, a.sweep, sagitta);
                (0..=n).map(|k| a.point_at(k as f64 / n as f64)).collect()
            }
        }
    }
}

/// Number of chords needed so that each chord's sagitta stays within `tol`.
pub(crate) fn arc_pieces(radius: f64, sweep: f64, tol: f64) -> usize {
    if tol >= radius {
        return ((sweep / PI).ceil() as usize).max(1);
    }
    let max_step = 2.0 * (1.0 - tol / radius).acos();
    if max_step <= 0.0 {
        return 1 << 16;
    }
    ((sweep / max_step).ceil() as usize).clamp(1, 1 << 16)
}

/// Signed area enclosed by a closed chain of curves.
pub fn chain_area(chain: &[Curve]) -> f64 {
    chain.iter().map(Curve::area_term).sum()
}

/// Winding number of a closed chain around `p`.
pub fn chain_winding(chain: &[Curve], p: Point) -> i32 {
    let total: f64 = chain.iter().map(|c| c.winding_angle(p)).sum();
    (total / TAU).round() as i32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chord_arc_center_and_angle() {
        let a = CircularArc::from_chord(Point::new(0.0, 0.0), Point::new(1.0, 0.0), 1.0, 1e-12).unwrap();
        assert!((a.center.x - 0.5).abs() < 1e-15);
        assert!((a.center.y - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((a.theta() - PI / 3.0).abs() < 1e-15);
        assert!(a.start().dist(Point::new(0.0, 0.0)) < 1e-15);
        assert!(a.end().dist(Point::new(1.0, 0.0)) < 1e-15);
        assert!(a.point_at(0.5).y < 0.0, "bulges right of u->v");
        assert!((a.chord_length() - 2.0 * (a.theta() / 2.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn chord_arc_errors() {
        let o = Point::new(0.0, 0.0);
        assert!(matches!(
            CircularArc::from_chord(o, Point::new(2.0, 0.0), 1.0, 1e-12),
            Err(GeomError::ChordTooLong { .. })
        ));
        assert_eq!(CircularArc::from_chord(o, o, 1.0, 1e-12), Err(GeomError::DegenerateChord));
    }

    #[test]
    fn reversed_arc_swaps_ends() {
        let a = CircularArc::from_chord(Point::new(0.0, 0.0), Point::new(1.0, 1.0), 2.0, 1e-12).unwrap();
        let r = a.reversed();
        assert!(r.start().dist(a.end()) < 1e-14);
        assert!(r.end().dist(a.start()) < 1e-14);
        assert!(r.point_at(0.5).dist(a.point_at(0.5)) < 1e-14);
    }

    #[test]
    fn closed_chain_measures() {
        let c = Point::new(1.0, 2.0);
        let left = Curve::Arc(CircularArc::between(c, 1.0, c + Point::new(0.0, -1.0), c + Point::new(0.0, 1.0), Orientation::Counterclockwise));
        let right = Curve::Arc(CircularArc::between(c, 1.0, c + Point::new(0.0, 1.0), c + Point::new(0.0, -1.0), Orientation::Counterclockwise));
        let chain = [left, right];
        assert!((chain_area(&chain) - PI).abs() < 1e-12);
        assert_eq!(chain_winding(&chain, c), 1);
        assert_eq!(chain_winding(&chain, c + Point::new(0.99, 0.0)), 1);
        assert_eq!(chain_winding(&chain, c + Point::new(1.01, 0.0)), 0);
    }

    #[test]
    fn discretization_respects_sagitta() {
        let a = CircularArc::from_chord(Point::new(0.0, 0.0), Point::new(1.0, 0.0), 0.6, 1e-12).unwrap();
        let pts = Curve::Arc(a).discretize(1e-3);
        for w in pts.windows(2) {
            let mid = w[0].lerp(w[1], 0.5);
            assert!(a.radius - mid.dist(a.center) <= 1e-3 + 1e-12);
        }
    }

    #[test]
    fn bbox_covers_extreme_points() {
        let a = CircularArc::between(Point::new(0.0, 0.0), 1.0, Point::new(1.0, -0.1), Point::new(1.0, 0.1), Orientation::Counterclockwise);
        assert!((a.bbox().max.x - 1.0).abs() < 1e-15);
    }
}
