"""SVG drawings of patches, with tiles filled by type and optional dashed lines."""

from __future__ import annotations

import math
from itertools import combinations

__all__ = ["LINE_COLORS", "TILE_FILLS", "render_patch"]

LINE_COLORS = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628"]
TILE_FILLS = ["#fbe3d6", "#dbe9f6", "#e2f3dc", "#efe0f2", "#fff0d9", "#f3e6dc",
              "#e8e8e8", "#fde9f2", "#e0f4f4", "#f4f4d8"]


def render_patch(P, *, decorations: dict | None = None, scale: float = 30.0,
                 margin: float = 10.0, dashed: bool = True, directions=None) -> str:
    """SVG document for a drawn patch.

    Tiles of the same type get the same fill, so colours follow the edge
    directions.  ``decorations`` maps tiles to decorated tiles whose
    segments are drawn on top (dashed by default), optionally only those
    of the given ``directions``.
    """
    F = P.float_projection() if P.projection is not None else None
    polys = []
    if F is not None:
        for t in P.tiles:
            polys.append((t, [P.float_point(c) for c in t.corners()]))
    if polys:
        xs = [x for _, ps in polys for x, _ in ps]
        ys = [y for _, ps in polys for _, y in ps]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0 = x1 = y0 = y1 = 0.0
    w = (x1 - x0) * scale + 2 * margin
    h = (y1 - y0) * scale + 2 * margin

    def at(p):
        return margin + (p[0] - x0) * scale, margin + (y1 - p[1]) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2f}" height="{h:.2f}" '
           f'viewBox="0 0 {w:.2f} {h:.2f}">']
    n = P.n
    type_index = {t: k for k, t in enumerate(combinations(range(max(n, 2)), 2))}
    for t, ps in polys:
        pts = " ".join("{:.4f},{:.4f}".format(*at(p)) for p in ps)
        fill = TILE_FILLS[type_index[t.type] % len(TILE_FILLS)]
        out.append(f'<polygon points="{pts}" fill="{fill}" stroke="#333" stroke-width="0.6"/>')
    if decorations and F is not None:
        dash = ' stroke-dasharray="4,3"' if dashed else ""
        for t, deco in sorted(decorations.items()):
            i, j = t.type
            base = P.float_point(t.pos)
            vi = (F[0][i], F[1][i])
            vj = (F[0][j], F[1][j])
            for seg in deco.segments:
                if directions is not None and seg.direction not in directions:
                    continue
                ends = []
                for lam, mu in (seg.start, seg.end):
                    lam, mu = float(lam), float(mu)
                    ends.append(at((base[0] + lam * vi[0] + mu * vj[0], base[1] + lam * vi[1] + mu * vj[1])))
                (ax, ay), (bx, by) = ends
                if math.isclose(ax, bx) and math.isclose(ay, by):
                    continue
                col = LINE_COLORS[seg.direction % len(LINE_COLORS)]
                out.append(f'<line x1="{ax:.4f}" y1="{ay:.4f}" x2="{bx:.4f}" y2="{by:.4f}" '
                           f'stroke="{col}" stroke-width="1.2"{dash}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
