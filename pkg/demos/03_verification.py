"""Patch-scale checks: shadows, configuration walks, planarity and the Penrose identities."""

from ammannbars.ammann import LineFamily, decorate_patch, decorated_tileset, decoration_radius
from ammannbars.multigrid import generate_patch
from ammannbars.projection import fine_projection
from ammannbars.slope import cyrenaic, lifted_subperiods
from ammannbars.verify import (
    check_line_continuity,
    check_planarity,
    check_shadow_period,
    configuration_walk,
    flip_hexagon,
    penrose_identity_suite,
)

E = cyrenaic()
A = fine_projection(E).matrix
family = LineFamily.build(E, A)
T = decorated_tileset(E, A)
P = generate_patch(E, A, 6, seed=0)

print("shadow periods and walks:")
for sp in lifted_subperiods(E):
    (i,) = sp.dropped
    rep = check_shadow_period(P, i, sp.shadow)
    walk = configuration_walk(T, family, i)
    print(f"  direction {i}: period {sp.shadow} over {rep.verified_translates} translates ({rep.ok}); "
          f"walk found vectors {sorted(walk.vectors)} along {walk.paths} paths")

D = decorate_patch(generate_patch(E, A, 8, seed=0), family, float(decoration_radius(E, A)))
print("line continuity:", check_line_continuity(generate_patch(E, A, 8, seed=0), D))

flat = check_planarity(P, E)
V, old, new = flip_hexagon(P)
bent = check_planarity(V, E)
print(f"\nthickness {flat.thickness} (certified: {flat.strongly_planar})")
print(f"after flipping {old} -> {new}: thickness {bent.thickness:.4f} (certified: {bent.strongly_planar})")

rep = penrose_identity_suite()
print(f"\nPenrose identities: {sum(ok for *_, ok in rep['checks'])}/{len(rep['checks'])} hold; "
      f"S = {rep['S']:.9f}, L = {rep['L']:.9f}")
