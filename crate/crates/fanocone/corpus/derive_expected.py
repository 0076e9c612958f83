"""Regenerates the random rank-3 corpus entries and expected.json.

Volumes come from scipy's half-space intersection of the dual cone cut at
<m, xi> = 1 (volume times n!), minimizers from Nelder-Mead on the slice
A(xi) = n. Neither shares code with the Rust implementation.
"""

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.optimize import linprog, minimize
from scipy.spatial import ConvexHull, HalfspaceIntersection

HERE = Path(__file__).parent
FIXED = ["c2", "cn3", "c4", "conifold", "c2_boundary"]


def random_polygons(count, seed=20261016):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        k = int(rng.integers(4, 8))
        pts = {tuple(int(x) for x in rng.integers(-2, 3, size=2)) for _ in range(k)}
        pts = np.array(sorted(pts))
        if len(pts) < 3 or np.linalg.matrix_rank(pts - pts[0]) < 2:
            continue
        hull = ConvexHull(pts)
        verts = sorted(tuple(int(x) for x in pts[i]) for i in hull.vertices)
        if verts not in out:
            out.append(verts)
    return out


def load(name):
    d = json.loads((HERE / f"{name}.json").read_text())
    rays = np.array(d["rays"], dtype=float)
    c = [float(Fraction(x)) for x in d.get("boundary") or ["0"] * len(rays)]
    return d, rays, np.array(c)


def gorenstein(rays, c):
    g, *_ = np.linalg.lstsq(rays, 1.0 - c, rcond=None)
    assert np.allclose(rays @ g, 1.0 - c)
    return g


def vol(rays, xi):
    n = rays.shape[1]
    # Rows [A | b] encode A m + b <= 0.
    hs = np.vstack([np.hstack([-rays, np.zeros((len(rays), 1))]), np.append(xi, -1.0)])
    norm = np.linalg.norm(hs[:, :-1], axis=1)
    lp = linprog(
        np.append(np.zeros(n), -1.0),
        A_ub=np.hstack([hs[:, :-1], norm[:, None]]),
        b_ub=-hs[:, -1],
        bounds=[(None, None)] * n + [(0, None)],
    )
    inner = lp.x[:n]
    poly = HalfspaceIntersection(hs, inner)
    return math.factorial(n) * ConvexHull(poly.intersections).volume


def hvol(rays, g, xi):
    return float(g @ xi) ** len(xi) * vol(rays, xi)


def slice_min(rays, g):
    n = rays.shape[1]
    start = rays.sum(axis=0)
    start = start * n / (g @ start)
    basis = np.linalg.svd(g[None, :])[2][1:].T

    def f(y):
        x = start + basis @ y
        try:
            return hvol(rays, g, x)
        except Exception:
            return np.inf

    res = minimize(f, np.zeros(n - 1), method="Nelder-Mead",
                   options={"xatol": 1e-11, "fatol": 1e-13, "maxiter": 20000})
    return start + basis @ res.x, float(res.fun)


def main():
    for i, verts in enumerate(random_polygons(5), start=1):
        doc = {
            "rank": 3,
            "rays": sorted([p[0], p[1], 1] for p in verts),
            "boundary": ["0"] * len(verts),
            "label": f"random Gorenstein polygon {i}",
        }
        (HERE / f"random{i}.json").write_text(json.dumps(doc) + "\n")
    expected = {}
    for name in FIXED + [f"random{i}" for i in range(1, 6)]:
        _, rays, c = load(name)
        g = gorenstein(rays, c)
        xi = rays.sum(axis=0)
        xmin, hmin = slice_min(rays, g) if rays.shape[1] > 1 else (xi, hvol(rays, g, xi))
        expected[f"{name}.json"] = {
            "xi": [int(x) for x in xi],
            "vol": vol(rays, xi),
            "hvol": hvol(rays, g, xi),
            "min_hvol": hmin,
            "minimizer": [float(x) for x in xmin],
        }
    (HERE / "expected.json").write_text(json.dumps(expected, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
