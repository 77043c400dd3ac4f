use super::IoError;
use crate::geom::{GeomError, Point, Polygon, PolygonSet, EPS};
use geojson::{GeoJson, Geometry, GeometryValue};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    GeoJson,
    Wkt,
}

impl FromStr for InputFormat {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, IoError> {
        match s.to_ascii_lowercase().as_str() {
            "geojson" | "json" => Ok(InputFormat::GeoJson),
            "wkt" => Ok(InputFormat::Wkt),
            other => Err(IoError::Parse(format!("unknown format {other}"))),
        }
    }
}

/// Rings of one polygon: the outer ring first, then holes. Rings are open
/// (no repeated closing point).
pub type Rings = Vec<Vec<Point>>;

fn ring(coords: &[Vec<f64>]) -> Result<Vec<Point>, IoError> {
    let mut pts: Vec<Point> = Vec::with_capacity(coords.len());
    for c in coords {
        if c.len() < 2 {
            return Err(IoError::Parse("coordinate with fewer than two values".into()));
        }
        pts.push(Point::new(c[0], c[1]));
    }
    if pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    Ok(pts)
}

fn geometry_rings(g: &Geometry, out: &mut Vec<Rings>) -> Result<(), IoError> {
    let conv = |poly: &Vec<Vec<geojson::Position>>| -> Result<Rings, IoError> {
        poly.iter().map(|r| ring(&r.iter().map(|p| p.as_slice().to_vec()).collect::<Vec<_>>())).collect()
    };
    match &g.value {
        GeometryValue::Polygon { coordinates } => out.push(conv(coordinates)?),
        GeometryValue::MultiPolygon { coordinates } => {
            for p in coordinates {
                out.push(conv(p)?);
            }
        }
        GeometryValue::GeometryCollection { geometries } => {
            for g in geometries {
                geometry_rings(g, out)?;
            }
        }
        other => return Err(IoError::Parse(format!("unsupported geometry type {}", other.type_name()))),
    }
    Ok(())
}

/// Polygons of a GeoJSON document, in document order.
pub fn parse_geojson(text: &str) -> Result<Vec<Rings>, IoError> {
    let gj: GeoJson = text.parse().map_err(|e: geojson::Error| IoError::Parse(e.to_string()))?;
    let mut out = Vec::new();
    match gj {
        GeoJson::Geometry(g) => geometry_rings(&g, &mut out)?,
        GeoJson::Feature(f) => {
            if let Some(g) = &f.geometry {
                geometry_rings(g, &mut out)?;
            }
        }
        GeoJson::FeatureCollection(fc) => {
            for f in &fc.features {
                if let Some(g) = &f.geometry {
                    geometry_rings(g, &mut out)?;
                }
            }
        }
    }
    Ok(out)
}

fn wkt_polygon(p: &wkt::types::Polygon<f64>) -> Result<Rings, IoError> {
    p.rings().iter().map(|r| ring(&r.coords().iter().map(|c| vec![c.x, c.y]).collect::<Vec<_>>())).collect()
}

fn wkt_rings(w: &wkt::Wkt<f64>, out: &mut Vec<Rings>) -> Result<(), IoError> {
    match w {
        wkt::Wkt::Polygon(p) => out.push(wkt_polygon(p)?),
        wkt::Wkt::MultiPolygon(mp) => {
            for p in mp.polygons() {
                out.push(wkt_polygon(p)?);
            }
        }
        wkt::Wkt::GeometryCollection(gc) => {
            for g in gc.geometries() {
                wkt_rings(g, out)?;
            }
        }
        _ => return Err(IoError::Parse("only POLYGON and MULTIPOLYGON are supported".into())),
    }
    Ok(())
}

/// Polygons of a WKT text: one geometry per non-empty line, or a single
/// geometry spanning several lines.
pub fn parse_wkt(text: &str) -> Result<Vec<Rings>, IoError> {
    let per_line: Result<Vec<wkt::Wkt<f64>>, _> =
        text.lines().map(str::trim).filter(|l| !l.is_empty()).map(wkt::Wkt::<f64>::from_str).collect();
    let geoms = match per_line {
        Ok(g) => g,
        Err(_) => vec![wkt::Wkt::<f64>::from_str(text.trim()).map_err(|e| IoError::Parse(e.to_string()))?],
    };
    let mut out = Vec::new();
    for w in &geoms {
        wkt_rings(w, &mut out)?;
    }
    Ok(out)
}

/// An instance of the problem together with the input polygons it came from.
#[derive(Clone, Debug)]
pub struct SubInstance {
    pub polygons: PolygonSet,
    /// Index of each polygon in the input document.
    pub source: Vec<usize>,
    /// For polygons inside a hole: the input polygon and hole index.
    pub hole: Option<(usize, usize)>,
}

fn ring_area(r: &[Point]) -> f64 {
    (0..r.len()).map(|i| 0.5 * r[i].cross(r[(i + 1) % r.len()])).sum()
}

fn ring_contains(r: &[Point], p: Point) -> bool {
    let mut inside = false;
    for i in 0..r.len() {
        let (a, b) = (r[i], r[(i + 1) % r.len()]);
        if (a.y > p.y) != (b.y > p.y) && a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x) > p.x {
            inside = !inside;
        }
    }
    inside
}

/// Normalizes parsed polygons into independent instances. Holes are filled
/// in the instance of their polygon; the polygons lying inside a hole form
/// a separate instance.
pub fn split_instances(polys: &[Rings], eps: f64) -> Result<Vec<SubInstance>, IoError> {
    let mut outers = Vec::with_capacity(polys.len());
    for (i, rings) in polys.iter().enumerate() {
        let outer = rings.first().ok_or(IoError::Geometry(GeomError::DegeneratePolygon { index: i }))?;
        if outer.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite { index: i }.into());
        }
        outers.push(Polygon::new(outer.clone()).map_err(|e| reindex(e, &[i]))?);
    }
    // Innermost hole containing each polygon.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; polys.len()];
    for (i, poly) in outers.iter().enumerate() {
        let probe = poly.vertices()[0];
        let mut best: Option<((usize, usize), f64)> = None;
        for (j, rings) in polys.iter().enumerate() {
            if j == i {
                continue;
            }
            for (h, hole) in rings.iter().enumerate().skip(1) {
                let a = ring_area(hole).abs();
                if ring_contains(hole, probe) && best.is_none_or(|(_, b)| a < b) {
                    best = Some(((j, h), a));
                }
            }
        }
        if let Some(((j, h), _)) = best {
            if poly.vertices().iter().any(|&v| !ring_contains(&polys[j][h], v) && !on_ring(&polys[j][h], v)) {
                return Err(GeomError::OverlappingInputs(j.min(i), j.max(i)).into());
            }
            parent[i] = Some((j, h));
        }
    }
    let mut keys: Vec<Option<(usize, usize)>> = parent.clone();
    keys.sort();
    keys.dedup();
    let mut out = Vec::new();
    for key in keys {
        let source: Vec<usize> = (0..polys.len()).filter(|&i| parent[i] == key).collect();
        let set = PolygonSet::with_epsilon(source.iter().map(|&i| outers[i].clone()).collect(), eps).map_err(|e| reindex(e, &source))?;
        out.push(SubInstance { polygons: set, source, hole: key });
    }
    Ok(out)
}

fn on_ring(r: &[Point], p: Point) -> bool {
    let scale = r.iter().fold(0.0f64, |m, q| m.max(q.x.abs()).max(q.y.abs())).max(1.0);
    (0..r.len()).any(|i| crate::geom::point_segment_distance(p, r[i], r[(i + 1) % r.len()]).0 <= 1e-9 * scale)
}

fn reindex(e: GeomError, source: &[usize]) -> IoError {
    let map = |i: usize| source.get(i).copied().unwrap_or(i);
    IoError::Geometry(match e {
        GeomError::SelfIntersectingInput { index } => GeomError::SelfIntersectingInput { index: map(index) },
        GeomError::DegeneratePolygon { index } => GeomError::DegeneratePolygon { index: map(index) },
        GeomError::NonFinite { index } => GeomError::NonFinite { index: map(index) },
        GeomError::OverlappingInputs(a, b) => GeomError::OverlappingInputs(map(a), map(b)),
        other => other,
    })
}

pub fn parse(text: &str, format: InputFormat) -> Result<Vec<Rings>, IoError> {
    match format {
        InputFormat::GeoJson => parse_geojson(text),
        InputFormat::Wkt => parse_wkt(text),
    }
}

/// Reads a file and returns its instances; the first one holds every
/// polygon that is not inside a hole.
pub fn ingest(path: &std::path::Path, format: InputFormat) -> Result<Vec<SubInstance>, IoError> {
    ingest_with_epsilon(path, format, EPS)
}

pub fn ingest_with_epsilon(path: &std::path::Path, format: InputFormat, eps: f64) -> Result<Vec<SubInstance>, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Io(format!("{}: {e}", path.display())))?;
    split_instances(&parse(&text, format)?, eps)
}

/// Single-instance convenience: fails if the input has polygons in holes.
pub fn ingest_str(text: &str, format: InputFormat) -> Result<PolygonSet, IoError> {
    let mut inst = split_instances(&parse(text, format)?, EPS)?;
    match inst.len() {
        0 => PolygonSet::new(Vec::new()).map_err(IoError::Geometry),
        1 => Ok(inst.remove(0).polygons),
        n => Err(IoError::Parse(format!("input splits into {n} instances"))),
    }
}
