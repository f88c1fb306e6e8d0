"""From a slope to its subperiods, the characterization verdict and a fine projection."""

from ammannbars.projection import fine_candidates, fine_projection, orthogonal_projection
from ammannbars.slope import (
    ammann_beenker,
    cyrenaic,
    integer_subperiods,
    is_characterized_by_subperiods,
    lifted_subperiods,
)

E = cyrenaic()
print("slope generators:", E.generators)
print("field:", E.field)

print("\nsubperiods (None marks the non-integer coordinate):")
for sp in integer_subperiods(E):
    print("  drop", sp.dropped, "->", sp.integer_part())
print("lifted into the slope:")
for sp in lifted_subperiods(E):
    print("  ", "(" + ", ".join(map(str, sp.lifted)) + ")")

ch = is_characterized_by_subperiods(E)
print("\nverdict:", ch.verdict, f"({ch.count} solutions of the minor system)")
print("Ammann-Beenker:", is_characterized_by_subperiods(ammann_beenker()).verdict)

print("\northogonal projection:", orthogonal_projection(E).matrix)
A = fine_projection(E)
print("fine projection:", A.matrix)

print("\nthe other real root of x^2 - 3 also yields a candidate:")
for c in fine_candidates(cyrenaic(-1))[0]:
    print("  ", c.matrix, "valid" if c.valid else "invalid")
