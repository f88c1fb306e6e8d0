import math

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from ammannbars.ammann import (
    DecoratedTile,
    NoFineProjection,
    NotCharacterized,
    Tileset,
    decorate_patch,
    decorated_tile,
    decorated_tileset,
    decoration_radius,
    decorations_from_patch,
    interval_census,
    render_tileset,
)
from ammannbars.multigrid import generate_patch
from ammannbars.projection import orthogonal_projection
from ammannbars.slope import golden_octagonal

CENSUS = {(0, 1): 3, (0, 2): 15, (0, 3): 4, (1, 2): 3, (1, 3): 1, (2, 3): 10}


def cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def test_cyrenaic_tileset_has_36_tiles(cyr_tileset):
    assert len(cyr_tileset) == 36
    assert cyr_tileset.by_type() == CENSUS


def test_decoration_radius_value(cyr, cyr_fine):
    d = decoration_radius(cyr, cyr_fine)
    assert d == mpq(2117087, 1000000)


def test_decoration_radius_is_an_upper_bound(cyr, cyr_fine, cyr_family):
    d = decoration_radius(cyr, cyr_fine)
    n = cyr.n
    best = 0.0
    for i in range(n):
        d1 = max(math.sqrt(float(cyr_family.norm_sq(tuple(int(k == j) for k in range(n))))) for j in range(n) if j != i)
        d2 = max(math.sqrt(float(cyr_family.norm_sq(v))) for v in (cyr_family.floors[i], cyr_family.ceils[i]))
        best = max(best, math.sqrt(d1 ** 2 + d2 ** 2 / 4))
    assert best <= float(d) < best + 1e-5


def test_tileset_stabilizes(cyr, cyr_fine, cyr_tileset):
    bigger = decorated_tileset(cyr, cyr_fine, extra=1.0)
    assert bigger.keys() == cyr_tileset.keys()


@pytest.mark.parametrize("seed", [0, 1])
def test_patch_decorations_reproduce_tileset(cyr, cyr_fine, cyr_family, cyr_tileset, seed):
    P = generate_patch(cyr, cyr_fine, 8, seed=seed)
    found = decorations_from_patch(P, cyr_family, float(decoration_radius(cyr, cyr_fine)))
    assert set(found) == cyr_tileset.keys()


def test_segments_lie_on_boundary_and_follow_their_direction(cyr_tileset, cyr_family):
    A = cyr_family.A
    for t in cyr_tileset.tiles:
        i, j = t.type
        ai, aj = A.col(i), A.col(j)
        for s in t.segments:
            for lam, mu in (s.start, s.end):
                assert 0 <= lam <= 1 and 0 <= mu <= 1
                assert lam in (0, 1) or mu in (0, 1)
            dl = s.end[0] - s.start[0]
            dm = s.end[1] - s.start[1]
            v = (dl * ai[0] + dm * aj[0], dl * ai[1] + dm * aj[1])
            assert cross(v, cyr_family.directions[s.direction]) == 0
            assert s.start != s.end


def test_every_tile_has_a_line(cyr_tileset):
    assert all(t.segments for t in cyr_tileset.tiles)


def test_corner_lines_match_float_clipping(cyr, cyr_family):
    """Lines through a tile's own corners: crossing directions agree with a float test."""
    A = [[float(x) for x in r] for r in cyr_family.A.rows]
    dirs = [(float(p[0]), float(p[1])) for p in cyr_family.directions]
    for i in range(4):
        for j in range(i + 1, 4):
            corners = [(0, 0, 0, 0), tuple(int(k == i) for k in range(4)), tuple(int(k == j) for k in range(4)),
                       tuple(int(k in (i, j)) for k in range(4))]
            dt = decorated_tile(corners, (i, j), cyr_family)
            ei, ej = (A[0][i], A[1][i]), (A[0][j], A[1][j])
            det = cross(ei, ej)
            expect = {}
            for c in corners:
                cx, cy = c[i], c[j]
                for m, d in enumerate(dirs):
                    # local coordinates of the direction
                    dl = cross(d, ej) / det
                    dm = cross(ei, d) / det
                    for sgn in (1, -1):
                        lam, mu = cx + sgn * 1e-3 * dl, cy + sgn * 1e-3 * dm
                        if 1e-9 < lam < 1 - 1e-9 and 1e-9 < mu < 1 - 1e-9:
                            # identify the line by its offset, rounded
                            expect.setdefault(m, set()).add(round(cross((dl, dm), (cx, cy)), 9))
            got = {m: len(offs) for m, offs in dt.offsets}
            assert got == {m: len(v) for m, v in expect.items()}


@settings(max_examples=20)
@given(st.tuples(*[st.integers(-5, 5)] * 4))
def test_decoration_is_translation_invariant(cyr_family, cyr_patch8, shift):
    P = cyr_patch8
    t = P.tiles[len(P.tiles) // 2]
    near = [v for v in P.vertices() if max(abs(a - b) for a, b in zip(v, t.pos)) <= 2]
    moved = [tuple(a + b for a, b in zip(v, shift)) for v in near]
    base = tuple(a + b for a, b in zip(t.pos, shift))
    assert decorated_tile(near, t.type, cyr_family, t.pos).key() == decorated_tile(moved, t.type, cyr_family, base).key()


def test_decorated_keys_compare_by_value(cyr_tileset):
    t = cyr_tileset.tiles[0]
    clone = DecoratedTile(t.type, t.offsets)
    assert clone == t and clone.key() == t.key()


@pytest.mark.parametrize("m", range(4))
def test_interval_census(cyr, cyr_fine, cyr_family, m):
    P = generate_patch(cyr, cyr_fine, 6, seed=0)
    gaps = interval_census(P, cyr_family, m)
    assert len(gaps) in (2, 3)
    d1 = max(math.sqrt(float(cyr_family.norm_sq(tuple(int(k == j) for k in range(4))))) for j in range(4) if j != m)
    assert all(0 < w <= d1 + 1e-12 for _, w in gaps)


def test_interval_values_direction_zero(cyr, cyr_family, cyr_patch8):
    a = cyr.field.gen
    gaps = [g for g, _ in interval_census(cyr_patch8, cyr_family, 0)]
    assert set(gaps) == {4 - 2 * a, 2 * a - 2, cyr.field(2)}


def test_decorate_patch_keeps_interior_tiles(cyr_family, cyr_patch8):
    D = decorate_patch(cyr_patch8, cyr_family, 2.2)
    assert 0 < len(D) < len(cyr_patch8)


def test_render_tileset(cyr_tileset):
    empty = render_tileset(Tileset([]))
    assert empty.startswith("<svg") and "<polygon" not in empty
    full = render_tileset(cyr_tileset)
    assert full.count("<polygon") == 36


def test_preconditions():
    E = golden_octagonal()
    with pytest.raises((NotCharacterized, NoFineProjection)):
        decorated_tileset(E, orthogonal_projection(E))


def test_orthogonal_projection_is_not_fine(cyr):
    with pytest.raises(NoFineProjection):
        decorated_tileset(cyr, orthogonal_projection(cyr))
