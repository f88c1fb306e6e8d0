"""Independent reference computations used to cross-check the exact code.

Everything here is written against sympy or plain floats and shares no code
with the package beyond reading its public data.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import numpy as np
import sympy

SQRT3 = sympy.sqrt(3)
PHI = (1 + sympy.sqrt(5)) / 2


def to_sympy(x, root):
    """A package field element as a sympy expression in ``root``."""
    return sum(sympy.Rational(int(c.numerator), int(c.denominator)) * root ** k for k, c in enumerate(x.c))


def sympy_matrix(M, root):
    return sympy.Matrix([[to_sympy(x, root) for x in r] for r in M.rows])


def brute_integer_subperiods(rows, n, bound=3):
    """Prime integer triples (one coordinate left free) realised by vectors of span(rows).

    ``rows`` are sympy vectors.  A triple at positions ``keep`` is realised
    when some vector of the plane has those coordinates, found by solving
    the 3 x 2 linear system exactly.
    """
    out = {}
    U = sympy.Matrix(rows).T  # n x 2
    for i in range(n):
        keep = [j for j in range(n) if j != i]
        sub = U.extract(keep, [0, 1])
        found = []
        for trip in product(range(-bound, bound + 1), repeat=3):
            if not any(trip) or sympy.igcd(*trip) != 1:
                continue
            b = sympy.Matrix(trip)
            aug = sub.row_join(b)
            if sympy.simplify(aug.det()) == 0:
                found.append(trip)
        # keep one representative per sign class
        reps = set()
        for t in found:
            neg = tuple(-x for x in t)
            reps.add(max(t, neg))
        out[i] = sorted(reps)
    return out


def float_hull(points):
    from scipy.spatial import ConvexHull

    pts = np.array(points, dtype=float)
    h = ConvexHull(pts)
    return pts[h.vertices], float(h.volume)


def clip_float(subject, clipper):
    """Sutherland-Hodgman clipping of convex float polygons (ccw)."""
    out = list(subject)
    m = len(clipper)
    for k in range(m):
        a, b = clipper[k], clipper[(k + 1) % m]
        inp, out = out, []
        if not inp:
            break

        def inside(p):
            return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= -1e-12

        def cut(p, q):
            x1, y1, x2, y2 = a[0], a[1], b[0], b[1]
            x3, y3, x4, y4 = p[0], p[1], q[0], q[1]
            den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
            t = ((x1 - x3) * (y3 - y4) - (y1 - y3) * (x3 - x4)) / den
            return (x1 + t * (x2 - x1), y1 + t * (y2 - y1))

        s = inp[-1]
        for e in inp:
            if inside(e):
                if not inside(s):
                    out.append(cut(s, e))
                out.append(e)
            elif inside(s):
                out.append(cut(s, e))
            s = e
    return out


def float_area(poly):
    if len(poly) < 3:
        return 0.0
    return 0.5 * sum(p[0] * q[1] - q[0] * p[1] for p, q in zip(poly, poly[1:] + poly[:1]))


def float_dual_positions(G, shift, k):
    """Tile positions of the multigrid dual computed in floating point."""
    G = np.array(G, dtype=float)
    s = np.array(shift, dtype=float)
    n = G.shape[1]
    tiles = set()
    for i, j in combinations(range(n), 2):
        Mij = np.array([G[:, i], G[:, j]])
        for ki in range(-k, k + 1):
            for kj in range(-k, k + 1):
                x = np.linalg.solve(Mij, [ki - s[i], kj - s[j]])
                X = G.T @ x + s
                pos = [int(np.ceil(X[m])) for m in range(n)]
                pos[i], pos[j] = ki, kj
                tiles.add(((i, j), tuple(pos)))
    return tiles


def float_overlaps(polys, eps=1e-7):
    """Pairs of float convex polygons whose interiors overlap by positive area."""
    bad = []
    boxes = [(min(p[0] for p in P), max(p[0] for p in P), min(p[1] for p in P), max(p[1] for p in P)) for P in polys]
    order = sorted(range(len(polys)), key=lambda t: boxes[t][0])
    for ai, a in enumerate(order):
        for b in order[ai + 1:]:
            if boxes[b][0] > boxes[a][1] - eps:
                break
            if boxes[b][2] > boxes[a][3] - eps or boxes[a][2] > boxes[b][3] - eps:
                continue
            if float_area(clip_float(polys[a], polys[b])) > eps:
                bad.append((a, b))
    return bad


def fraction(x):
    return Fraction(int(x.numerator), int(x.denominator))
