use crate::geom::{Curve, Orientation, Point, PolygonSet};
use crate::mincut::{PieceKind, Solution};
use serde_json::{json, Map, Value};
use std::fmt::Write;

fn position(p: Point) -> Value {
    json!([p.x, p.y])
}

/// Closed ring of points approximating a cycle of curves.
fn discretize_cycle(curves: &[Curve], sagitta: f64) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::new();
    for c in curves {
        let d = c.discretize(sagitta);
        let skip = usize::from(!pts.is_empty());
        pts.extend(d.into_iter().skip(skip));
    }
    if let (Some(&first), Some(&last)) = (pts.first(), pts.last()) {
        if first != last {
            pts.push(first);
        }
    }
    pts
}

fn arc_record(c: &Curve, ring: usize) -> Option<Value> {
    let Curve::Arc(a) = c else { return None };
    Some(json!({
        "ring": ring,
        "center": position(a.center),
        "radius": a.radius,
        "start_angle": a.start_angle,
        "sweep": a.sweep,
        "orientation": if a.orientation == Orientation::Counterclockwise { "ccw" } else { "cw" },
        "start": position(a.start()),
        "end": position(a.end()),
    }))
}

/// One feature per region. Arcs are replaced by chords whose sagitta is at
/// most `sagitta`; their exact parameters are kept in the `arcs` property.
pub fn solution_to_geojson(s: &Solution, sagitta: f64, extra: &Map<String, Value>) -> String {
    let mut features = Vec::new();
    for (ri, r) in s.regions.iter().enumerate() {
        let rings: Vec<Value> = (0..r.cycles.len())
            .map(|k| Value::Array(discretize_cycle(&r.cycle_curves(k), sagitta).into_iter().map(position).collect()))
            .collect();
        let arcs: Vec<Value> = (0..r.cycles.len()).flat_map(|k| r.cycle_curves(k).into_iter().filter_map(move |c| arc_record(&c, k))).collect();
        let free: f64 = r.pieces().filter(|p| p.kind == PieceKind::Free).map(|p| p.length()).sum();
        let mut props = extra.clone();
        props.insert("region".into(), json!(ri));
        props.insert("area".into(), json!(r.area));
        props.insert("perimeter".into(), json!(r.perimeter));
        props.insert("free_length".into(), json!(free));
        props.insert("polygons".into(), json!(r.polygons));
        props.insert("arcs".into(), Value::Array(arcs));
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "Polygon", "coordinates": rings },
            "properties": Value::Object(props),
        }));
    }
    let mut top = Map::new();
    top.insert("type".into(), json!("FeatureCollection"));
    top.insert("features".into(), Value::Array(features));
    let mut text = serde_json::to_string_pretty(&Value::Object(top)).unwrap_or_default();
    text.push('\n');
    text
}

/// Input polygons as a FeatureCollection.
pub fn polygons_to_geojson(b: &PolygonSet) -> String {
    let features: Vec<Value> = b
        .polygons()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut ring: Vec<Value> = p.vertices().iter().map(|&v| position(v)).collect();
            ring.push(position(p.vertices()[0]));
            json!({
                "type": "Feature",
                "geometry": { "type": "Polygon", "coordinates": [ring] },
                "properties": { "polygon": i },
            })
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&json!({ "type": "FeatureCollection", "features": features })).unwrap_or_default();
    text.push('\n');
    text
}

fn path_of(cycles: &[Vec<Curve>]) -> String {
    let mut d = String::new();
    for cyc in cycles {
        let Some(first) = cyc.first() else { continue };
        let s = first.start();
        let _ = write!(d, "M{} {} ", s.x, s.y);
        for c in cyc {
            let e = c.end();
            match c {
                Curve::Segment(_) => {
                    let _ = write!(d, "L{} {} ", e.x, e.y);
                }
                Curve::Arc(a) => {
                    let large = u8::from(a.sweep > std::f64::consts::PI);
                    let sweep = u8::from(a.orientation == Orientation::Counterclockwise);
                    let _ = write!(d, "A{r} {r} 0 {large} {sweep} {} {} ", e.x, e.y, r = a.radius);
                }
            }
        }
        d.push_str("Z ");
    }
    d.trim_end().to_string()
}

/// SVG with the solution regions below the input polygons. Arcs use native
/// path arc commands; the y axis points up.
pub fn solution_to_svg(b: &PolygonSet, s: &Solution) -> String {
    let bb = b.bbox();
    let pad = 0.05 * bb.diagonal().max(1e-9);
    let (x0, y0) = (bb.min.x - pad, bb.min.y - pad);
    let (w, h) = (bb.max.x - bb.min.x + 2.0 * pad, bb.max.y - bb.min.y + 2.0 * pad);
    let stroke = 0.002 * w.max(h);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {} {w} {h}">"#, -(y0 + h));
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    let _ = writeln!(out, r##"<g id="solution" fill="#f6c28b" stroke="#b35900" stroke-width="{stroke}" fill-rule="evenodd">"##);
    for r in &s.regions {
        let _ = writeln!(out, r#"<path d="{}"/>"#, path_of(&r.all_curves()));
    }
    out.push_str("</g>\n");
    let _ = writeln!(out, r##"<g id="input" fill="#555555" stroke="none">"##);
    for p in b.polygons() {
        let v = p.vertices();
        let cyc: Vec<Curve> = (0..v.len()).map(|i| Curve::segment(v[i], v[(i + 1) % v.len()])).collect();
        let _ = writeln!(out, r#"<path d="{}"/>"#, path_of(&[cyc]));
    }
    out.push_str("</g>\n</g>\n</svg>\n");
    out
}
