"""Exact data files: slopes (TOML), matrices, patches, tilesets and atlases (JSON), manifests."""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

from gmpy2 import mpq

from .algebra import QQ, FieldMatrix, NumberField
from .algebra.field import parse_rational

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import slope as slope_mod
from .multigrid import Multigrid, Patch, Tile
from .slope import Slope

__all__ = [
    "CATALOG",
    "dump_slope",
    "parse_slope",
    "load_slope",
    "save_slope",
    "dump_matrix",
    "parse_matrix",
    "load_matrix",
    "patch_to_dict",
    "patch_from_dict",
    "tileset_to_dict",
    "atlas_to_dict",
    "write_json",
    "read_json",
    "sha256_file",
    "write_manifest",
]

CATALOG = {
    "cyrenaic": slope_mod.cyrenaic,
    "cyrenaic-": lambda: slope_mod.cyrenaic(-1),
    "ammann-beenker": slope_mod.ammann_beenker,
    "penrose": slope_mod.penrose,
    "rauzy": slope_mod.rauzy,
    "golden-octagonal": slope_mod.golden_octagonal,
    "axis": slope_mod.axis_plane,
}

FLOAT_DIGITS = 12


def _quote(s: str) -> str:
    return json.dumps(s)


def _field_from(doc: dict) -> NumberField:
    if "minpoly" not in doc or doc["minpoly"] in ("x", "x - 0"):
        return QQ
    lo, hi = doc["root_in"]
    return NumberField(doc["minpoly"], (parse_rational(str(lo)), parse_rational(str(hi))))


def _field_doc(K: NumberField) -> dict:
    if K.degree == 1:
        return {}
    return K.describe()


def dump_slope(E: Slope) -> str:
    """TOML text of a slope; field elements are polynomials in ``a``."""
    lines = []
    if E.name:
        lines.append(f"name = {_quote(E.name)}")
    lines.append(f"n = {E.n}")
    lines.append(f"d = {E.d}")
    fd = _field_doc(E.field)
    if fd:
        lines.append(f"minpoly = {_quote(fd['minpoly'])}")
        lines.append(f"root_in = [{_quote(fd['root_in'][0])}, {_quote(fd['root_in'][1])}]")
    lines.append(f"totally_irrational = {'true' if E.totally_irrational else 'false'}")
    lines.append("generators = [")
    for row in E.generators.to_strings():
        lines.append("  [" + ", ".join(_quote(x) for x in row) + "],")
    lines.append("]")
    return "\n".join(lines) + "\n"


def _slope_from_doc(doc: dict) -> Slope:
    K = _field_from(doc)
    rows = [[K.parse(str(x)) for x in r] for r in doc["generators"]]
    E = Slope.from_rows(rows, K, doc.get("name", ""),
                        totally_irrational=doc.get("totally_irrational", True))
    if "n" in doc and doc["n"] != E.n or "d" in doc and doc["d"] != E.d:
        raise ValueError("slope file: n or d disagrees with the generators")
    return E


def parse_slope(text: str) -> Slope:
    return _slope_from_doc(tomllib.loads(text))


def load_slope(ref: str) -> Slope:
    """A slope file path, or the name of a built-in slope."""
    if ref in CATALOG and not Path(ref).exists():
        return CATALOG[ref]()
    return parse_slope(Path(ref).read_text())


def save_slope(E: Slope, path) -> None:
    Path(path).write_text(dump_slope(E))


def dump_matrix(M: FieldMatrix) -> str:
    rows = ",\n".join("  [" + ", ".join(_quote(x) for x in r) + "]" for r in M.to_strings())
    return f"rows = [\n{rows},\n]\n"


def parse_matrix(text: str, field: NumberField) -> FieldMatrix:
    doc = tomllib.loads(text)
    return FieldMatrix([[field.parse(str(x)) for x in r] for r in doc["rows"]], field)


def load_matrix(path, field: NumberField) -> FieldMatrix:
    return parse_matrix(Path(path).read_text(), field)


def _slope_doc(E: Slope) -> dict:
    return tomllib.loads(dump_slope(E))


def patch_to_dict(P: Patch) -> dict:
    doc = {"k": P.k, "dropped": list(P.dropped)}
    if P.slope is not None:
        doc["slope"] = _slope_doc(P.slope)
    if P.projection is not None:
        doc["projection"] = P.projection.to_strings()
        doc["projection_float"] = [[round(float(x), FLOAT_DIGITS) for x in r] for r in P.projection.rows]
    if P.grid is not None:
        doc["seed"] = P.grid.seed
        doc["shift"] = [str(s) for s in P.grid.shift]
    doc["tiles"] = [{"type": list(t.type), "pos": list(t.pos)} for t in P.tiles]
    return doc


def patch_from_dict(doc: dict) -> Patch:
    E = _slope_from_doc(doc["slope"]) if "slope" in doc else None
    K = E.field if E is not None else QQ
    A = None
    if "projection" in doc:
        A = FieldMatrix([[K.parse(str(x)) for x in r] for r in doc["projection"]], K)
    grid = None
    if "shift" in doc and E is not None:
        grid = Multigrid(E.generators, tuple(mpq(s) for s in doc["shift"]), doc.get("seed"))
    tiles = [Tile(tuple(t["type"]), tuple(t["pos"])) for t in doc["tiles"]]
    return Patch(tiles, E, A, doc.get("k"), grid, tuple(doc.get("dropped", ())))


def tileset_to_dict(T) -> dict:
    tiles = []
    for d in T.tiles:
        tiles.append({
            "type": list(d.type),
            "offsets": {str(m): [str(x) for x in offs] for m, offs in d.offsets},
            "segments": [s.as_strings() for s in d.segments],
        })
    doc = {"count": len(T.tiles), "tiles": tiles}
    if T.slope is not None:
        doc["slope"] = _slope_doc(T.slope)
    if T.projection is not None:
        doc["projection"] = T.projection.to_strings()
    if T.radius is not None:
        doc["radius"] = str(T.radius)
    return doc


def atlas_to_dict(entries, W) -> dict:
    maps = []
    for e in entries:
        maps.append({
            "vertices": sorted(list(v) for v in e.map.cells),
            "absent": sorted(list(v) for v in e.map.absent),
            "region_area": str(e.region.area()),
            "region_area_float": round(float(e.region.area()), FLOAT_DIGITS),
            "pieces": [[[str(c) for c in p] for p in piece] for piece in e.region.pieces],
        })
    return {"window": [[str(c) for c in p] for p in W.polygon],
            "window_area": str(W.area()), "count": len(maps), "maps": maps}


def write_json(doc, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_path, argv, *, inputs=(), seeds=None, version="") -> Path:
    """Record how an output file was made, with input and output digests."""
    out_path = Path(out_path)
    doc = {
        "argv": list(argv),
        "seeds": seeds or {},
        "version": version,
        "inputs": {str(p): sha256_file(p) for p in inputs if Path(p).is_file()},
        "outputs": {str(out_path): sha256_file(out_path)},
    }
    man = out_path.with_name(out_path.name + ".manifest.json")
    write_json(doc, man)
    return man
