use super::universe::{EdgeClass, EdgeUniverse};
use std::fmt;

/// Model variable. Triangle variables are indexed by triangle, the others by
/// universe edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    TriangleActive(usize),
    TriangleInactive(usize),
    EdgeActive(usize),
    LeftActive(usize),
    RightActive(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::TriangleActive(i) => write!(f, "ta_{i}"),
            Var::TriangleInactive(i) => write!(f, "ti_{i}"),
            Var::EdgeActive(i) => write!(f, "e_{i}"),
            Var::LeftActive(i) => write!(f, "hl_{i}"),
            Var::RightActive(i) => write!(f, "hr_{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// Constraint families, in emission order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    /// Free edge: as much triangle weight on the left as on the right.
    Balance,
    /// Polygon or hull edge: exactly one triangle on its free side.
    Cover,
    LeftDef,
    RightDef,
    /// Polygon edges always have active area on their right.
    RightPolygon,
    /// Hull edges never have active area on their right.
    RightHull,
    Xor,
}

impl Family {
    fn tag(self) -> &'static str {
        match self {
            Family::Balance => "bal",
            Family::Cover => "cov",
            Family::LeftDef => "hl",
            Family::RightDef => "hr",
            Family::RightPolygon => "hrp",
            Family::RightHull => "hrh",
            Family::Xor => "xor",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub family: Family,
    pub terms: Vec<(Var, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn holds(&self, value: impl Fn(Var) -> f64, tol: f64) -> bool {
        let lhs: f64 = self.terms.iter().map(|&(v, c)| c * value(v)).sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs + tol,
            Sense::Ge => lhs >= self.rhs - tol,
            Sense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

/// Binary program choosing a triangulation of conv(B) \ B and the active
/// triangles in it. Minimizes area plus α times perimeter of the active part;
/// `constant_offset` adds the polygons and their hull edges.
#[derive(Clone, Debug, PartialEq)]
pub struct IlpModel {
    /// Sorted by kind, then index.
    pub variables: Vec<Var>,
    pub objective: Vec<(Var, f64)>,
    pub constraints: Vec<Constraint>,
    pub constant_offset: f64,
    pub alpha: f64,
}

impl IlpModel {
    pub fn var_index(&self, v: Var) -> Option<usize> {
        self.variables.binary_search(&v).ok()
    }

    /// Objective including the constant offset.
    pub fn objective_value(&self, value: impl Fn(Var) -> f64) -> f64 {
        self.constant_offset + self.objective.iter().map(|&(v, c)| c * value(v)).sum::<f64>()
    }

    pub fn is_feasible(&self, value: impl Fn(Var) -> f64) -> bool {
        self.constraints.iter().all(|c| c.holds(&value, 1e-9))
            && self.variables.iter().all(|&v| {
                let x = value(v);
                x == 0.0 || x == 1.0
            })
    }
}

pub fn build_ilp(u: &EdgeUniverse, alpha: f64) -> IlpModel {
    let mut variables = Vec::new();
    for t in 0..u.triangles.len() {
        variables.push(Var::TriangleActive(t));
        variables.push(Var::TriangleInactive(t));
    }
    let modeled: Vec<usize> = (0..u.edges.len()).filter(|&e| u.edges[e].class != EdgeClass::HullPolygon).collect();
    for &e in &modeled {
        variables.extend([Var::EdgeActive(e), Var::LeftActive(e), Var::RightActive(e)]);
    }
    variables.sort();

    let mut objective: Vec<(Var, f64)> = u.triangles.iter().enumerate().map(|(t, tri)| (Var::TriangleActive(t), tri.area)).collect();
    objective.extend(modeled.iter().map(|&e| (Var::EdgeActive(e), alpha * u.edges[e].length)));
    objective.sort_by(|a, b| a.0.cmp(&b.0));
    let fixed_perimeter: f64 = u.edges.iter().filter(|e| e.class == EdgeClass::HullPolygon).map(|e| e.length).sum();

    let both = |ts: &[usize], sign: f64| -> Vec<(Var, f64)> {
        ts.iter().flat_map(|&t| [(Var::TriangleActive(t), sign), (Var::TriangleInactive(t), sign)]).collect()
    };
    let active = |ts: &[usize]| -> Vec<(Var, f64)> { ts.iter().map(|&t| (Var::TriangleActive(t), -1.0)).collect() };

    let mut constraints = Vec::new();
    let mut push = |family: Family, e: usize, k: Option<usize>, terms: Vec<(Var, f64)>, sense: Sense, rhs: f64| {
        let name = match k {
            Some(k) => format!("{}{}_{}", family.tag(), k, e),
            None => format!("{}_{}", family.tag(), e),
        };
        constraints.push(Constraint { name, family, terms, sense, rhs });
    };
    for &e in &modeled {
        let ed = &u.edges[e];
        if ed.class == EdgeClass::Free {
            let mut terms = both(&ed.left, 1.0);
            terms.extend(both(&ed.right, -1.0));
            push(Family::Balance, e, None, terms, Sense::Eq, 0.0);
        }
    }
    for &e in &modeled {
        if u.edges[e].class != EdgeClass::Free {
            push(Family::Cover, e, None, both(&u.edges[e].left, 1.0), Sense::Eq, 1.0);
        }
    }
    for &e in &modeled {
        let mut terms = vec![(Var::LeftActive(e), 1.0)];
        terms.extend(active(&u.edges[e].left));
        push(Family::LeftDef, e, None, terms, Sense::Eq, 0.0);
    }
    for &e in &modeled {
        if u.edges[e].class == EdgeClass::Free {
            let mut terms = vec![(Var::RightActive(e), 1.0)];
            terms.extend(active(&u.edges[e].right));
            push(Family::RightDef, e, None, terms, Sense::Eq, 0.0);
        }
    }
    for &e in &modeled {
        if u.edges[e].class == EdgeClass::Polygon {
            push(Family::RightPolygon, e, None, vec![(Var::RightActive(e), 1.0)], Sense::Eq, 1.0);
        }
    }
    for &e in &modeled {
        if u.edges[e].class == EdgeClass::Hull {
            push(Family::RightHull, e, None, vec![(Var::RightActive(e), 1.0)], Sense::Eq, 0.0);
        }
    }
    for &e in &modeled {
        let (z, x, y) = (Var::EdgeActive(e), Var::LeftActive(e), Var::RightActive(e));
        push(Family::Xor, e, Some(1), vec![(z, 1.0), (x, -1.0), (y, -1.0)], Sense::Le, 0.0);
        push(Family::Xor, e, Some(2), vec![(z, 1.0), (x, -1.0), (y, 1.0)], Sense::Ge, 0.0);
        push(Family::Xor, e, Some(3), vec![(z, 1.0), (x, 1.0), (y, -1.0)], Sense::Ge, 0.0);
        push(Family::Xor, e, Some(4), vec![(z, 1.0), (x, 1.0), (y, 1.0)], Sense::Le, 2.0);
    }
    IlpModel { variables, objective, constraints, constant_offset: u.polygon_area + alpha * fixed_perimeter, alpha }
}
