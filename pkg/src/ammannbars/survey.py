"""Random-slope survey: how often subperiods characterize a slope and admit a fine projection."""

from __future__ import annotations

import csv
import io
import math
import random
import signal
import time
from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from .algebra import NumberField
from .algebra.field import format_univariate
from .projection import fine_candidates
from .slope import Slope, integer_subperiods, is_characterized_by_subperiods

__all__ = [
    "SurveyConfig",
    "SurveyRecord",
    "SurveyResult",
    "SampleTimeout",
    "sample_quadratic_field",
    "sample_slope",
    "slope_from_draw",
    "survey_one",
    "run_survey",
]


class SampleTimeout(Exception):
    pass


@dataclass(frozen=True)
class SurveyConfig:
    k: int = 3
    samples: int = 999
    seed: int = 1
    validity_k: int = 4
    timeout: float = 60.0

    def __post_init__(self):
        if self.k < 1 or self.samples < 1:
            raise ValueError("k and samples must be positive")


@dataclass
class SurveyRecord:
    index: int
    minpoly: str
    generators: list
    subperiods: int
    verdict: str
    fine: bool
    candidates: int
    status: str
    seconds: float
    lambda_same_sign: bool = False  # diagnostic: some candidate has all lambda_i of one sign

    def row(self) -> dict:
        return {
            "seed_index": self.index,
            "minpoly": self.minpoly,
            "generators": " ; ".join(",".join(r) for r in self.generators),
            "subperiods": self.subperiods,
            "verdict": self.verdict,
            "fine": int(self.fine),
            "candidates": self.candidates,
            "status": self.status,
            "lambda_same_sign": int(self.lambda_same_sign),
            "seconds": f"{self.seconds:.3f}",
        }


@dataclass
class SurveyResult:
    config: SurveyConfig
    records: list = dc_field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def not_characterized(self) -> int:
        return sum(r.verdict == "not_characterized" for r in self.records)

    @property
    def fine_found(self) -> int:
        return sum(r.fine for r in self.records)

    @property
    def lambda_same_sign(self) -> int:
        return sum(r.lambda_same_sign for r in self.records)

    @property
    def timeouts(self) -> int:
        return sum(r.status == "timeout" for r in self.records)

    def fractions(self) -> tuple[float, float]:
        return self.not_characterized / self.total, self.fine_found / self.total

    def to_csv(self, *, timing: bool = True) -> str:
        buf = io.StringIO()
        names = ["seed_index", "minpoly", "generators", "subperiods", "verdict", "fine",
                 "candidates", "status", "lambda_same_sign"] + (["seconds"] if timing else [])
        w = csv.DictWriter(buf, fieldnames=names, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in self.records:
            w.writerow(r.row())
        return buf.getvalue()


def sample_quadratic_field(k: int, rng: random.Random) -> NumberField:
    """Uniform quadratic with coefficients in [-k, k] until irreducible with real roots.

    The larger root is used as the generator.
    """
    while True:
        c0, c1, c2 = (rng.randint(-k, k) for _ in range(3))
        if c2 == 0:
            continue
        disc = c1 * c1 - 4 * c2 * c0
        if disc <= 0 or math.isqrt(disc) ** 2 == disc:
            continue
        mid = mpq(-c1, 2 * c2)  # strictly between the two roots
        bound = 1 + max(abs(mpq(c0, c2)), abs(mpq(c1, c2)))
        return NumberField([c0, c1, c2], (mid, bound))


def _irrational(K: NumberField, k: int, rng: random.Random):
    r0 = rng.randint(-k, k)
    r1 = 0
    while r1 == 0:
        r1 = rng.randint(-k, k)
    return K(r0) + K(r1) * K.gen


def slope_from_draw(K: NumberField, x, y, u, v) -> Slope:
    """Slope spanned by ``u`` with first entry ``x`` and ``v`` with second entry ``y``."""
    u = [x] + list(u[1:])
    v = [v[0], y] + list(v[2:])
    return Slope.from_rows([u, v], K, "sample")


def sample_slope(k: int, rng: random.Random) -> Slope:
    """One slope drawn as in the survey procedure; rank-deficient draws are redrawn."""
    K = sample_quadratic_field(k, rng)
    while True:
        x = _irrational(K, k, rng)
        y = _irrational(K, k, rng)
        u = [rng.randint(-k, k) for _ in range(4)]
        v = [rng.randint(-k, k) for _ in range(4)]
        E = slope_from_draw(K, x, y, u, v)
        if E.generators.rank() == 2:
            return E


@contextmanager
def _time_limit(seconds: float):
    if not seconds or not hasattr(signal, "setitimer"):
        yield
        return

    def handler(signum, frame):
        raise SampleTimeout()

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def survey_one(E: Slope, index: int = 0, *, validity_k: int = 4, timeout: float = 0.0) -> SurveyRecord:
    """Subperiods, then characterization, then the fine-projection search and validity."""
    t0 = time.perf_counter()
    nsub, verdict, fine, ncand, status, same = 0, "unknown", False, 0, "ok", False
    try:
        with _time_limit(timeout):
            subs = integer_subperiods(E)
            nsub = len(subs)
            ch = is_characterized_by_subperiods(E, subs)
            verdict = ch.verdict
            if ch.characterized:
                cands, status = fine_candidates(E, k=validity_k)
                ncand = len(cands)
                fine = any(c.valid for c in cands)
                same = any(len({x.sign() for x in c.lambdas}) == 1 for c in cands)
            else:
                status = ch.reason or "not characterized"
    except SampleTimeout:
        status = "timeout"
    return SurveyRecord(index, _minpoly_str(E), E.generators.to_strings(), nsub, verdict, fine, ncand,
                        status, time.perf_counter() - t0, same)


def _minpoly_str(E: Slope) -> str:
    return format_univariate(E.field.minpoly, "x")


def run_survey(cfg: SurveyConfig, *, progress=None) -> SurveyResult:
    """Draw ``cfg.samples`` slopes from one seeded generator and survey each."""
    rng = random.Random(f"survey:{cfg.seed}:{cfg.k}")
    result = SurveyResult(cfg)
    for idx in range(cfg.samples):
        E = sample_slope(cfg.k, rng)
        rec = survey_one(E, idx, validity_k=cfg.validity_k, timeout=cfg.timeout)
        result.records.append(rec)
        if progress is not None:
            progress(rec)
    return result
