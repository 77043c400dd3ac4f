//! Python bindings: polygon sets, the exact and approximate solvers, the
//! vertex-restricted solvers and LP export.

use polyagg::geom::{Point, Polygon, PolygonSet as CorePolygonSet};
use polyagg::io::{ingest_str, solution_to_geojson, solution_to_svg, InputFormat};
use polyagg::mincut::Solution as CoreSolution;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Map;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// Interior-disjoint simple polygons.
#[pyclass(name = "PolygonSet", frozen)]
pub struct PyPolygonSet {
    inner: CorePolygonSet,
}

#[pymethods]
impl PyPolygonSet {
    /// `polygons` is a list of rings, each a list of (x, y) pairs.
    #[new]
    #[pyo3(signature = (polygons, epsilon = polyagg::geom::EPS))]
    fn new(polygons: Vec<Vec<(f64, f64)>>, epsilon: f64) -> PyResult<Self> {
        let polys = polygons
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Polygon::new(r.iter().map(|&(x, y)| Point::new(x, y)).collect()).map_err(|e| value_err(format!("polygon {i}: {e}")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        CorePolygonSet::with_epsilon(polys, epsilon).map(|inner| PyPolygonSet { inner }).map_err(value_err)
    }

    #[staticmethod]
    fn from_geojson(text: &str) -> PyResult<Self> {
        ingest_str(text, InputFormat::GeoJson).map(|inner| PyPolygonSet { inner }).map_err(value_err)
    }

    #[staticmethod]
    fn from_wkt(text: &str) -> PyResult<Self> {
        ingest_str(text, InputFormat::Wkt).map(|inner| PyPolygonSet { inner }).map_err(value_err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn area(&self) -> f64 {
        self.inner.area()
    }

    #[getter]
    fn perimeter(&self) -> f64 {
        self.inner.perimeter()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    #[getter]
    fn hull_area(&self) -> f64 {
        self.inner.hull_area()
    }

    fn polygons(&self) -> Vec<Vec<(f64, f64)>> {
        self.inner.polygons().iter().map(|p| p.vertices().iter().map(|v| (v.x, v.y)).collect()).collect()
    }

    /// Copy scaled by `c` about the origin.
    fn scaled(&self, c: f64) -> Self {
        PyPolygonSet { inner: self.inner.scaled(c) }
    }

    fn __repr__(&self) -> String {
        format!("PolygonSet({} polygons, area={})", self.inner.len(), self.inner.area())
    }
}

/// Disjoint regions covering the input polygons.
#[pyclass(name = "Solution", frozen)]
pub struct PySolution {
    inner: CoreSolution,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn area(&self) -> f64 {
        self.inner.objective.area
    }

    #[getter]
    fn perimeter(&self) -> f64 {
        self.inner.objective.perimeter
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.objective.alpha
    }

    #[getter]
    fn objective(&self) -> f64 {
        self.inner.objective.value
    }

    #[getter]
    fn arc_count(&self) -> usize {
        self.inner.arc_count()
    }

    #[getter]
    fn region_count(&self) -> usize {
        self.inner.regions.len()
    }

    /// Input polygon indices of each region.
    fn region_polygons(&self) -> Vec<Vec<usize>> {
        self.inner.regions.iter().map(|r| r.polygons.clone()).collect()
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        self.inner.contains(Point::new(x, y))
    }

    /// FeatureCollection with arcs discretized to the given sagitta.
    fn to_geojson(&self, sagitta: f64) -> PyResult<String> {
        if !(sagitta > 0.0) {
            return Err(value_err("sagitta must be positive"));
        }
        Ok(solution_to_geojson(&self.inner, sagitta, &Map::new()))
    }

    fn to_svg(&self, polygons: &PyPolygonSet) -> String {
        solution_to_svg(&polygons.inner, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(alpha={}, regions={}, area={}, perimeter={}, objective={})",
            self.alpha(),
            self.region_count(),
            self.area(),
            self.perimeter(),
            self.objective()
        )
    }
}

fn wrap(s: CoreSolution) -> PySolution {
    PySolution { inner: s }
}

/// Exact optimum over all feasible regions.
#[pyfunction]
fn solve_unrestricted(py: Python<'_>, polygons: &PyPolygonSet, alpha: f64) -> PyResult<PySolution> {
    let b = &polygons.inner;
    py.detach(|| polyagg::mincut::solve_unrestricted(b, alpha)).map(wrap).map_err(value_err)
}

/// Optimum over unions of cells of the constrained triangulation.
#[pyfunction]
fn solve_triangulation(py: Python<'_>, polygons: &PyPolygonSet, alpha: f64) -> PyResult<PySolution> {
    let b = &polygons.inner;
    py.detach(|| {
        let d = polyagg::arrangement::triangulate(b).map_err(value_err)?;
        polyagg::mincut::solve_subdivision(b, &d, alpha).map_err(value_err)
    })
    .map(wrap)
}

/// Straight-line solution within factor 1.5 of the optimum.
#[pyfunction]
fn approx_line(py: Python<'_>, polygons: &PyPolygonSet, alpha: f64) -> PyResult<PySolution> {
    let b = &polygons.inner;
    py.detach(|| polyagg::approx::approx_line(b, alpha)).map(wrap).map_err(runtime_err)
}

/// Vertex-to-vertex solution within factor 13.5 of the optimum.
#[pyfunction]
fn approx_vertex(py: Python<'_>, polygons: &PyPolygonSet, alpha: f64) -> PyResult<PySolution> {
    let b = &polygons.inner;
    py.detach(|| polyagg::approx::approx_vertex(b, alpha)).map(wrap).map_err(runtime_err)
}

/// Exhaustive vertex-restricted optimum for small gaps between polygons.
#[pyfunction]
fn brute_force_vertex(py: Python<'_>, polygons: &PyPolygonSet, alpha: f64) -> PyResult<PySolution> {
    let b = &polygons.inner;
    py.detach(|| polyagg::ilp::brute_force_vertex_optimal(b, alpha)).map(wrap).map_err(value_err)
}

/// Vertex-restricted binary program in CPLEX LP format.
#[pyfunction]
fn export_lp(polygons: &PyPolygonSet, alpha: f64) -> PyResult<String> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(value_err(format!("alpha must be finite and non-negative, got {alpha}")));
    }
    let u = polyagg::ilp::enumerate_universe(&polygons.inner).map_err(value_err)?;
    Ok(polyagg::ilp::write_lp_file(&polyagg::ilp::build_ilp(&u, alpha)))
}

#[pymodule]
fn polyagg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolygonSet>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(solve_unrestricted, m)?)?;
    m.add_function(wrap_pyfunction!(solve_triangulation, m)?)?;
    m.add_function(wrap_pyfunction!(approx_line, m)?)?;
    m.add_function(wrap_pyfunction!(approx_vertex, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_vertex, m)?)?;
    m.add_function(wrap_pyfunction!(export_lp, m)?)?;
    Ok(())
}
