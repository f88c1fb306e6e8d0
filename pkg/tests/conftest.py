import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def cyr():
    from ammannbars.slope import cyrenaic

    return cyrenaic()


@pytest.fixture(scope="session")
def cyr_fine(cyr):
    from ammannbars.projection import fine_projection

    return fine_projection(cyr).matrix


@pytest.fixture(scope="session")
def cyr_family(cyr, cyr_fine):
    from ammannbars.ammann import LineFamily
    from ammannbars.slope import lifted_subperiods

    return LineFamily.build(cyr, cyr_fine, lifted_subperiods(cyr))


@pytest.fixture(scope="session")
def cyr_tileset(cyr, cyr_fine):
    from ammannbars.ammann import decorated_tileset

    return decorated_tileset(cyr, cyr_fine)


@pytest.fixture(scope="session")
def cyr_patch8(cyr, cyr_fine):
    from ammannbars.multigrid import generate_patch

    return generate_patch(cyr, cyr_fine, 8, seed=0)


@pytest.fixture(scope="session")
def cyr_window(cyr):
    from ammannbars.atlas import window

    return window(cyr)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(RESULTS, key=lambda s: (int(s.split()[0].rstrip("ab")), s)):
        ok, detail = RESULTS[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {label}: {detail}")
