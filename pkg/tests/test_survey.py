import random

import pytest
from hypothesis import given, settings, strategies as st

from ammannbars.survey import (
    SurveyConfig,
    run_survey,
    sample_quadratic_field,
    sample_slope,
    slope_from_draw,
    survey_one,
)


def test_cyrenaic_replay(cyr):
    K = cyr.field
    a = K.gen
    E = slope_from_draw(K, a, a - 1, [0, 0, 1, 1], [1, 0, -1, 1])
    assert E.generators == cyr.generators
    rec = survey_one(E)
    assert rec.verdict == "characterized" and rec.fine and rec.candidates == 1
    assert rec.subperiods >= 4


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_sampled_fields_are_real_quadratic(seed, k):
    K = sample_quadratic_field(k, random.Random(seed))
    c0, c1, c2 = (K.minpoly[t] for t in range(3))
    disc = c1 * c1 - 4 * c2 * c0
    assert K.degree == 2 and disc > 0
    root = float(K.gen)
    other = -float(c1) / float(c2) - root
    assert root > other
    assert abs(float(c2) * root ** 2 + float(c1) * root + float(c0)) < 1e-9 * (1 + abs(root)) ** 2


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6))
def test_sampled_slopes_have_rank_two(seed):
    E = sample_slope(3, random.Random(seed))
    assert E.generators.rank() == 2 and E.n == 4
    x, y = E.generators[0, 0], E.generators[1, 1]
    assert not x.is_rational() and not y.is_rational()
    assert all(E.generators[r, c].is_rational() for r in range(2) for c in range(4) if (r, c) not in ((0, 0), (1, 1)))


def test_survey_is_deterministic():
    cfg = SurveyConfig(k=3, samples=12, seed=5)
    a = run_survey(cfg).to_csv(timing=False)
    b = run_survey(cfg).to_csv(timing=False)
    assert a == b
    c = run_survey(SurveyConfig(k=3, samples=12, seed=6)).to_csv(timing=False)
    assert c != a


def test_survey_result_bookkeeping():
    seen = []
    res = run_survey(SurveyConfig(k=3, samples=20, seed=2), progress=seen.append)
    assert res.total == 20 == len(seen)
    nc, fine = res.fractions()
    assert nc == res.not_characterized / 20 and fine == res.fine_found / 20
    assert all(r.verdict in ("characterized", "not_characterized", "unknown") for r in res.records)
    assert all(not r.fine or r.verdict == "characterized" for r in res.records)
    header = res.to_csv().splitlines()[0].split(",")
    assert header[0] == "seed_index" and header[-1] == "seconds"
    assert "seconds" not in res.to_csv(timing=False).splitlines()[0]


def test_timeout_is_reported(cyr):
    rec = survey_one(cyr, timeout=1e-5)
    assert rec.status == "timeout"


def test_config_validation():
    with pytest.raises(ValueError):
        SurveyConfig(samples=0)
