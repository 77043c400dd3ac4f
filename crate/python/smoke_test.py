"""Smoke test for the polyagg Python bindings.

Build and install first:
    pip install --no-build-isolation -e crates/py
"""

import json
import math

import polyagg_py as pa


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    squares = pa.PolygonSet([[(0, 0), (1, 0), (1, 1), (0, 1)], [(1.5, 0), (2.5, 0), (2.5, 1), (1.5, 1)]])
    assert len(squares) == 2
    assert close(squares.area, 2.0)

    zero = pa.solve_unrestricted(squares, 0.0)
    assert close(zero.area, 2.0) and close(zero.perimeter, 8.0)
    assert zero.region_count == 2

    # Gap 0.5: the vertex-restricted merge happens at alpha = 0.5.
    below = pa.solve_triangulation(squares, 0.5 - 1e-3)
    above = pa.solve_triangulation(squares, 0.5 + 1e-3)
    assert below.region_count == 2 and above.region_count == 1
    assert above.region_polygons() == [[0, 1]]

    for alpha in (0.5, 1.0, 3.0):
        opt = pa.solve_unrestricted(squares, alpha)
        line = pa.approx_line(squares, alpha)
        vertex = pa.approx_vertex(squares, alpha)
        brute = pa.brute_force_vertex(squares, alpha)
        assert opt.objective <= line.objective + 1e-9 <= 1.5 * opt.objective + 2e-9
        assert opt.objective <= vertex.objective + 1e-9 <= 13.5 * opt.objective + 2e-9
        assert opt.objective <= brute.objective + 1e-9
        assert line.arc_count == 0
        print(f"alpha={alpha}: optimum {opt.objective:.6f}, line {line.objective:.6f}, "
              f"vertex {vertex.objective:.6f}, brute force {brute.objective:.6f}, arcs {opt.arc_count}")

    sol = pa.solve_unrestricted(squares, 1.0)
    assert sol.contains(1.25, 0.5) and not sol.contains(1.25, 5.0)
    doc = json.loads(sol.to_geojson(1e-4))
    assert doc["type"] == "FeatureCollection" and len(doc["features"]) == 1
    assert all(a["orientation"] in ("cw", "ccw") for a in doc["features"][0]["properties"]["arcs"])
    assert "<svg" in sol.to_svg(squares)

    lp = pa.export_lp(squares, 1.0)
    assert lp.splitlines()[-1] == "End" and "Binary" in lp

    wkt = pa.PolygonSet.from_wkt("MULTIPOLYGON (((0 0, 1 0, 1 1, 0 1, 0 0)), ((2 0, 3 0, 3 1, 2 1, 2 0)))")
    assert len(wkt) == 2
    scaled = wkt.scaled(3.0)
    assert close(pa.solve_unrestricted(scaled, 3.0).objective, 9.0 * pa.solve_unrestricted(wkt, 1.0).objective, 1e-6)

    for bad in (lambda: pa.PolygonSet([[(0, 0), (2, 0), (2, 2), (0, 2)], [(1, 1), (3, 1), (3, 3), (1, 3)]]),
                lambda: pa.solve_unrestricted(squares, -1.0),
                lambda: pa.PolygonSet.from_geojson("{")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    assert math.isfinite(sol.objective)
    print("python smoke test passed")


if __name__ == "__main__":
    main()
