"""Decorated tiles of the Cyrenaic tiling and a patch drawn with its Ammann bars.

Writes SVG files into the directory given on the command line (default: demo_output).
"""

import sys
from pathlib import Path

from ammannbars.ammann import LineFamily, decorate_patch, decorated_tileset, decoration_radius, interval_census, render_tileset
from ammannbars.multigrid import generate_patch, shadow_patch
from ammannbars.projection import fine_projection
from ammannbars.render import render_patch
from ammannbars.slope import cyrenaic

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(parents=True, exist_ok=True)

E = cyrenaic()
A = fine_projection(E).matrix
family = LineFamily.build(E, A)
radius = decoration_radius(E, A)
print("decoration radius bound:", radius, f"~ {float(radius):.4f}")

T = decorated_tileset(E, A)
print(len(T), "decorated tiles; per tile type:", T.by_type())
(out / "tileset.svg").write_text(render_tileset(T))

P = generate_patch(E, A, 8, seed=0)
print("patch with", len(P), "tiles")
for m in range(E.n):
    gaps = interval_census(P, family, m)
    print(f"  direction {m}: gaps", ", ".join(f"{g} (width {w:.4f})" for g, w in gaps))

decorations = decorate_patch(P, family, float(radius))
(out / "patch_lines.svg").write_text(render_patch(P, decorations=decorations))
for m in range(E.n):
    (out / f"patch_direction_{m}.svg").write_text(render_patch(P, decorations=decorations, directions=[m]))
(out / "shadow_3.svg").write_text(render_patch(shadow_patch(P, 3)))
print("SVG files written to", out)
