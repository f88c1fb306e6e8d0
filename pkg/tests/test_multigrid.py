from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from ammannbars.algebra import FieldMatrix, QQ
from ammannbars.multigrid import (
    InconsistentLift,
    Multigrid,
    NonGenericShift,
    Patch,
    Tile,
    dual,
    generate_patch,
    generators_to_grid,
    lift,
    shadow_patch,
)
from ammannbars.projection import orthogonal_projection
from ammannbars.slope import ammann_beenker, axis_plane, penrose, rauzy

from oracles import float_dual_positions, float_overlaps


def float_grid(E):
    return [[float(x) for x in r] for r in E.generators.rows]


def test_k0_has_one_tile_per_pair(cyr, cyr_fine):
    P = generate_patch(cyr, cyr_fine, 0, seed=0)
    assert len(P) == 6
    assert sorted(t.type for t in P.tiles) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@pytest.mark.parametrize("k", [1, 2, 4])
def test_generic_tile_count(cyr, cyr_fine, k):
    assert len(generate_patch(cyr, cyr_fine, k, seed=3)) == comb(4, 2) * (2 * k + 1) ** 2


@pytest.mark.parametrize("make", [ammann_beenker, penrose, rauzy])
def test_positions_match_float_oracle(make):
    E = make()
    P = generate_patch(E, orthogonal_projection(E), 3, seed=1)
    shift = [float(s) for s in P.grid.shift]
    exact = {(t.type, t.pos) for t in P.tiles}
    assert exact == float_dual_positions(float_grid(E), shift, 3)


def central_tile(P):
    return next(t for t in P.tiles if t.type == (0, 1) and t.pos[:2] == (0, 0))


def test_lift_recovers_positions(cyr, cyr_fine):
    P = generate_patch(cyr, cyr_fine, 3, seed=0)
    anchor = central_tile(P).pos
    coords = lift(P, anchor)
    assert len(coords) > 150  # the central connected component
    index = {tuple(P.point(v)): v for v in P.vertices()}
    for pt, got in coords.items():
        assert got == tuple(x - y for x, y in zip(index[pt], anchor))


def test_lift_rejects_foreign_edge(cyr, cyr_fine):
    P = generate_patch(cyr, cyr_fine, 1, seed=0)
    bad = FieldMatrix([[1, 1, 0, 0], [0, 0, 1, 1]], cyr.field)
    with pytest.raises(InconsistentLift):
        lift(Patch(P.tiles, P.slope, bad, P.k, P.grid))


def test_shadow_of_single_tile_is_empty():
    P = Patch([Tile((0, 1), (0, 0, 0, 0))])
    S = shadow_patch(P, 0)
    assert S.tiles == [] and S.dropped == (0,)


def test_shadow_keeps_other_tiles_and_drops_coordinate():
    P = Patch([Tile((0, 1), (0, 0, 0, 0)), Tile((2, 3), (5, 1, 2, 3))])
    S = shadow_patch(P, 0)
    assert S.tiles == [Tile((1, 2), (1, 2, 3))]


def test_axis_plane_gives_square_grid():
    E = axis_plane()
    P = generate_patch(E, orthogonal_projection(E), 3, seed=0)
    polys = [P.tile_polygon(t) for t in P.tiles]
    squares = [p for t, p in zip(P.tiles, polys) if t.type == (0, 1)]
    assert len(squares) == 49
    for poly in squares:
        xs = sorted({p[0] for p in poly})
        ys = sorted({p[1] for p in poly})
        assert xs[1] - xs[0] == 1 and ys[1] - ys[0] == 1


def test_edge_to_edge_and_angle_closure(cyr, cyr_fine):
    """Interior vertices are surrounded by tile angles summing to a full turn."""
    import math

    P = generate_patch(cyr, cyr_fine, 4, seed=0)
    angles = {}
    for t in P.tiles:
        poly = [P.float_point(c) for c in t.corners()]
        for idx, c in enumerate(t.corners()):
            a, b = poly[idx - 1], poly[(idx + 1) % 4]
            p = poly[idx]
            u = (a[0] - p[0], a[1] - p[1])
            w = (b[0] - p[0], b[1] - p[1])
            ang = abs(math.atan2(u[0] * w[1] - u[1] * w[0], u[0] * w[0] + u[1] * w[1]))
            angles[c] = angles.get(c, 0.0) + ang
    assert all(s <= 2 * math.pi + 1e-9 for s in angles.values())
    centre = P.float_point(central_tile(P).pos)
    near = [c for c in angles if math.dist(P.float_point(c), centre) < 2.0]
    assert len(near) > 10
    assert all(abs(angles[c] - 2 * math.pi) < 1e-9 for c in near)
    count = {}
    for t in P.tiles:
        i, j = t.type
        b, bi, _, bj = t.corners()
        for e in ((b, i), (b, j), (bi, j), (bj, i)):
            count[e] = count.get(e, 0) + 1
    assert max(count.values()) == 2


def test_cyrenaic_shadow_along_direction_three_is_periodic(cyr, cyr_fine, cyr_patch8):
    S = shadow_patch(cyr_patch8, 3)
    tiles = set(S.tiles)
    q = (2, 1, -1)
    hits = sum(Tile(t.type, tuple(a + b for a, b in zip(t.pos, q))) in tiles for t in tiles)
    assert hits > len(tiles) // 2


def test_generation_is_deterministic(cyr, cyr_fine):
    a = generate_patch(cyr, cyr_fine, 3, seed=7)
    b = generate_patch(cyr, cyr_fine, 3, seed=7)
    c = generate_patch(cyr, cyr_fine, 3, seed=8)
    assert a.tiles == b.tiles and a.grid.shift == b.grid.shift
    assert c.grid.shift != a.grid.shift


def test_concurrent_lines_detected():
    G = Multigrid(FieldMatrix([[1, 0, 1], [0, 1, 1]], QQ), (0, 0, 0))
    with pytest.raises(NonGenericShift):
        dual(G, 1)


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_no_overlaps_for_random_shifts(seed):
    E = penrose()
    P = generate_patch(E, orthogonal_projection(E), 2, seed=seed)
    assert float_overlaps([[P.float_point(c) for c in t.corners()] for t in P.tiles]) == []
