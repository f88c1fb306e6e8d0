"""A small random-slope survey (the full run uses 999 samples: python -m ammannbars survey)."""

import sys

from ammannbars.survey import SurveyConfig, run_survey

samples = int(sys.argv[1]) if len(sys.argv) > 1 else 100
res = run_survey(SurveyConfig(k=3, samples=samples, seed=1))
nc, fine = res.fractions()
print(f"{res.total} slopes: {100 * nc:.1f}% not characterized, {100 * fine:.1f}% with a valid fine projection")
for r in res.records[:10]:
    print(f"  #{r.index:3d} {r.minpoly:>14}  {r.verdict:17}  fine={r.fine}  ({r.status})")
