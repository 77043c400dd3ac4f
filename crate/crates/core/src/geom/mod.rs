//! Geometric primitives, tolerance predicates and the closed-form measures
//! used throughout the solver.

mod curve;
mod formulas;
mod hull;
mod intersect;
mod polygon;

pub use curve::{chain_area, chain_winding, CircularArc, Curve, DirectedSegment, Orientation};
pub use formulas::{
    arc_efficiency_by_radius, circular_segment_area, efficiency, objective, scale_instance,
    ObjectiveBreakdown,
};
pub use hull::{convex_hull, hull_chain};
pub use intersect::{intersect, Hit};
pub use polygon::{Containment, EdgeRef, Polygon, PolygonSet, VertexRef};

use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

/// Relative tolerance; multiplied by the instance diameter to get lengths.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("chord length {chord} is not shorter than the diameter {diameter}")]
    ChordTooLong { chord: f64, diameter: f64 },
    #[error("chord endpoints coincide")]
    DegenerateChord,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("curve properly crosses the line through its endpoints")]
    CurveCrossesChordLine,
    #[error("regions {0} and {1} overlap")]
    OverlappingRegions(usize, usize),
    #[error("scale factor must be positive, got {0}")]
    NonPositiveFactor(f64),
    #[error("polygon {index} is self-intersecting")]
    SelfIntersectingInput { index: usize },
    #[error("polygon {index} has fewer than three distinct non-collinear vertices")]
    DegeneratePolygon { index: usize },
    #[error("polygons {0} and {1} overlap")]
    OverlappingInputs(usize, usize),
    #[error("non-finite coordinate in polygon {index}")]
    NonFinite { index: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn unit(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn from_angle(a: f64) -> Point {
        Point::new(a.cos(), a.sin())
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Twice the signed area of triangle abc; positive when c is left of a→b.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    On,
}

/// Side of `c` relative to the directed line a→b, with `tol` a distance.
pub fn side_of(a: Point, b: Point, c: Point, tol: f64) -> Side {
    let len = a.dist(b);
    if len == 0.0 {
        return Side::On;
    }
    let d = orient(a, b, c) / len;
    if d > tol {
        Side::Left
    } else if d < -tol {
        Side::Right
    } else {
        Side::On
    }
}

/// Distance from `p` to the closed segment ab, and the clamped parameter.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> (f64, f64) {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return (p.dist(a), 0.0);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    (p.dist(a + d * t), t)
}

/// Angle normalized to [0, 2π).
pub fn normalize_angle(a: f64) -> f64 {
    let t = a.rem_euclid(std::f64::consts::TAU);
    if t >= std::f64::consts::TAU {
        0.0
    } else {
        t
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn empty() -> Self {
        BBox {
            min: Point::new(f64::INFINITY, f64::INFINITY),
            max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn of_points<I: IntoIterator<Item = Point>>(pts: I) -> Self {
        let mut b = BBox::empty();
        for p in pts {
            b.add(p);
        }
        b
    }

    pub fn add(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&self, o: &BBox) -> BBox {
        BBox {
            min: Point::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: Point::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }

    pub fn expanded(&self, d: f64) -> BBox {
        BBox {
            min: Point::new(self.min.x - d, self.min.y - d),
            max: Point::new(self.max.x + d, self.max.y + d),
        }
    }

    pub fn overlaps(&self, o: &BBox) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }
}
