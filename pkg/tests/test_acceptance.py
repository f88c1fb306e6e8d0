"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that the terminal summary prints (see
conftest.py).  Two checks are known to miss their targets; they are run
literally and marked as strict expected failures so
that the suite reports them without hiding them.
"""

import random
import time
from itertools import product

import pytest

from ammannbars.algebra import FieldMatrix, QQ
from ammannbars.ammann import (
    LineFamily,
    decorated_tileset,
    decoration_radius,
    decorations_from_patch,
    interval_census,
)
from ammannbars.atlas import atlas, region, window
from ammannbars.geometry import area, intersect, same_polygon
from ammannbars.multigrid import generate_patch
from ammannbars.projection import fine_candidates, fine_projection, orthogonal_projection
from ammannbars.slope import (
    ammann_beenker,
    cyrenaic,
    integer_subperiods,
    is_characterized_by_subperiods,
    lifted_subperiods,
    penrose,
    rauzy,
)
from ammannbars.survey import SurveyConfig, run_survey
from ammannbars.verify import (
    check_planarity,
    check_shadow_period,
    configuration_walk,
    flip_hexagon,
    penrose_identity_suite,
)

RESULTS = {}


def record(label, ok, detail=""):
    RESULTS[label] = (bool(ok), detail)
    assert ok, detail


def same_up_to_sign(u, v):
    return tuple(u) == tuple(v) or tuple(u) == tuple(-x for x in v)


@pytest.fixture(scope="module")
def survey():
    t = time.perf_counter()
    res = run_survey(SurveyConfig(k=3, samples=999, seed=1))
    return res, time.perf_counter() - t


def test_criterion_01_cyrenaic_subperiods():
    t = time.perf_counter()
    E = cyrenaic()
    a = E.field.gen
    subs = integer_subperiods(E)
    want_int = {(0,): (0, 1, 1), (1,): (1, -1, 1), (2,): (1, -1, 0), (3,): (2, 1, -1)}
    got_int = {sp.dropped: tuple(x for x in sp.integer_part() if x is not None) for sp in subs}
    ints_ok = set(got_int) == set(want_int) and all(same_up_to_sign(got_int[k], v) for k, v in want_int.items())
    lifts = {sp.dropped: sp.lifted for sp in lifted_subperiods(E, subs)}
    want_lift = {(0,): (a, 0, 1, 1), (1,): (1, a - 1, -1, 1), (2,): (1, -1, a + 1, 0), (3,): (2, 1, -1, a)}
    lifts_ok = all(same_up_to_sign(lifts[k], v) for k, v in want_lift.items())
    dt = time.perf_counter() - t
    record("1 Cyrenaic subperiods", ints_ok and lifts_ok and dt < 1, f"{dt:.2f}s")


def test_criterion_02_characterization():
    t = time.perf_counter()
    cyr = is_characterized_by_subperiods(cyrenaic())
    ab = is_characterized_by_subperiods(ammann_beenker())
    pen = is_characterized_by_subperiods(penrose())
    dt = time.perf_counter() - t
    ok = cyr.characterized and cyr.count == 2 and not ab.characterized and pen.characterized and dt < 10
    record("2 characterization", ok,
           f"Cyrenaic {cyr.count} solutions, AB {ab.verdict}, Penrose {pen.verdict}, {dt:.1f}s")


def displayed_matrix(E):
    a = E.field.gen
    return FieldMatrix([[2, 0, a + 1, a - 1], [0, 2, -a - 1, a + 1]], E.field).scale(E.field(1) / 2)


def test_criterion_03a_fine_projection_row_space():
    t = time.perf_counter()
    E = cyrenaic()
    F = fine_projection(E)
    ok = F is not None and F.matrix.stack(displayed_matrix(E)).rank() == 2
    dt = time.perf_counter() - t
    record("3a fine projection row space", ok and dt < 30, f"{dt:.1f}s")


@pytest.mark.xfail(strict=True, reason="the a = -sqrt3 candidate draws a valid tiling of its own slope; "
                                       "see the decisions ledger")
def test_criterion_03b_negative_branch_rejected():
    E = cyrenaic(-1)
    cands, status = fine_candidates(E, k=6)
    valid = [c for c in cands if c.valid]
    record("3b a=-sqrt3 branch rejected", cands and not valid,
           f"{len(cands)} candidate(s), {len(valid)} valid ({status})")


def test_criterion_04_left_kernel_example():
    M = FieldMatrix([[-1, 1], [1, 1], [-1, 3]], QQ)
    K = M.left_kernel()
    ok = K.nrows == 1 and K.stack(FieldMatrix([[2, 1, -1]], QQ)).rank() == 1
    record("4 left kernel example", ok, str(K))


def test_criterion_05_fp_tileset():
    t = time.perf_counter()
    E = cyrenaic()
    A = fine_projection(E).matrix
    T = decorated_tileset(E, A)
    bigger = decorated_tileset(E, A, extra=2.0)
    fam = LineFamily.build(E, A)
    R = float(decoration_radius(E, A))
    seeds_ok = True
    for seed in (0, 1, 2):
        P = generate_patch(E, A, 8, seed=seed)
        seeds_ok &= set(decorations_from_patch(P, fam, R)) == T.keys()
    P6 = generate_patch(E, A, 6, seed=0)
    census = [len(interval_census(P6, fam, m)) for m in range(4)]
    dt = time.perf_counter() - t
    ok = len(T) == 36 and bigger.keys() == T.keys() and seeds_ok and all(c in (2, 3) for c in census) and dt < 600
    record("5 FP tileset", ok, f"{len(T)} tiles, intervals {census}, {dt:.1f}s")


def test_criterion_06_configuration_walk_and_translates():
    E = cyrenaic()
    A = fine_projection(E).matrix
    T = decorated_tileset(E, A)
    fam = LineFamily.build(E, A)
    P = generate_patch(E, A, 6, seed=0)
    ok, parts = True, []
    for sp in lifted_subperiods(E):
        (i,) = sp.dropped
        walk = configuration_walk(T, fam, i)
        shadow = check_shadow_period(P, i, sp.shadow, 2)
        ok &= walk.ok and walk.vectors == {tuple(sp.shadow)} and shadow.ok and shadow.verified_translates >= 50
        parts.append(f"{i}:{walk.paths}p/{shadow.verified_translates}t")
    record("6 configuration walk", ok, " ".join(parts))


def test_criterion_07_planarity():
    cases = [("Cyrenaic", cyrenaic(), None), ("Ammann-Beenker", ammann_beenker(), None),
             ("Penrose", penrose(), None), ("Rauzy", rauzy(), None)]
    ok, parts = True, []
    for name, E, A in cases:
        A = fine_projection(E).matrix if name == "Cyrenaic" else orthogonal_projection(E).matrix
        P = generate_patch(E, A, 6, seed=0)
        flat = check_planarity(P, E)
        V, _, _ = flip_hexagon(P)
        bent = check_planarity(V, E)
        good = flat.strongly_planar is True and flat.thickness == 1.0 and bent.thickness > 1.0 \
            and bent.strongly_planar is not True
        ok &= good
        parts.append(f"{name} {flat.thickness:g}->{bent.thickness:.3f}")
    record("7 planarity", ok, ", ".join(parts))


def test_criterion_08_penrose_suite():
    t = time.perf_counter()
    rep = penrose_identity_suite()
    dt = time.perf_counter() - t
    names = {n for n, _, _ in rep["checks"]}
    ok = rep["passed"] and {"collinear", "orthogonal", "phi_ratio", "sum_identity", "spacing"} <= names and dt < 5
    record("8 Penrose identities", ok, f"{len(rep['checks'])} checks, S={rep['S']:.9f} L={rep['L']:.9f}, {dt:.2f}s")


def test_criterion_09_atlas_invariants():
    E = cyrenaic()
    W = window(E)
    entries = atlas(E, 1)
    partition = sum((e.region.area() for e in entries), E.field(0)) == W.area()
    disjoint = all(area(intersect(p, q)) == 0
                   for x in range(len(entries)) for y in range(x + 1, len(entries))
                   for p in entries[x].region.pieces for q in entries[y].region.pieces)
    rng = random.Random("acceptance:9")
    ball = list(product(range(-1, 2), repeat=4))
    pairs_ok = True
    for _ in range(100):
        P1 = rng.sample(ball, rng.randint(1, 3))
        P2 = rng.sample(ball, rng.randint(1, 3))
        both = region(W, None, P1 + P2).polygon
        pairs_ok &= same_polygon(both, intersect(region(W, None, P1).polygon, region(W, None, P2).polygon))
    A = fine_projection(E).matrix
    Pk = generate_patch(E, A, 8, seed=0)
    V = Pk.vertices()
    unit_ball = [u for u in ball if sum(x * x for x in u) <= 1]
    found = set()
    for v in V:
        if max(map(abs, v)) <= 6:
            found.add(frozenset(u for u in unit_ball if tuple(a + b for a, b in zip(v, u)) in V))
    maps = {e.map.cells for e in entries}
    occurrence = found == maps and all(area(e.region.polygon) > 0 for e in entries)
    record("9 atlas invariants", partition and disjoint and pairs_ok and occurrence,
           f"{len(entries)} maps, {len(found)} patterns in the k=8 patch")


def test_criterion_10a_survey_not_characterized(survey):
    res, dt = survey
    nc, _ = res.fractions()
    again = run_survey(SurveyConfig(k=3, samples=100, seed=1))
    deterministic = [r.row() | {"seconds": ""} for r in again.records] == \
        [r.row() | {"seconds": ""} for r in res.records[:100]]
    ok = abs(100 * nc - 22) <= 6 and deterministic and dt < 1800
    record("10a survey not-characterized fraction", ok,
           f"{res.not_characterized}/{res.total} = {100 * nc:.1f}% (target 22 +- 6), {dt:.0f}s")


@pytest.mark.xfail(strict=True, reason="far fewer random slopes admit a valid fine projection than "
                                       "the target rate; see the decisions ledger")
def test_criterion_10b_survey_fine_fraction(survey):
    res, _ = survey
    _, fine = res.fractions()
    record("10b survey fine-projection fraction", abs(100 * fine - 12) <= 6,
           f"{res.fine_found}/{res.total} = {100 * fine:.1f}% (target 12 +- 6)")
