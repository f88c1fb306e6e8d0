"""Command-line entry point: ``python -m ammannbars <command> ...``.

Exit status: 0 success, 1 a verification failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .files import (
    atlas_to_dict,
    dump_matrix,
    dump_slope,
    load_matrix,
    load_slope,
    patch_from_dict,
    patch_to_dict,
    read_json,
    tileset_to_dict,
    write_manifest,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _out(args, text: str, *, inputs=(), seeds=None):
    """Write ``text`` to ``--out`` (with a manifest) or print it."""
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
        write_manifest(args.out, args.argv, inputs=inputs, seeds=seeds, version=__version__)
    else:
        sys.stdout.write(text)


def _projection_for(E, choice: str | None):
    from .projection import fine_projection, orthogonal_projection

    if choice in (None, "orthogonal"):
        return orthogonal_projection(E).matrix
    if choice == "fine":
        P = fine_projection(E)
        if P is None:
            raise UsageError("slope has no valid fine projection")
        return P.matrix
    return load_matrix(choice, E.field)


# -- slope --------------------------------------------------------------------------------

def cmd_slope(args) -> int:
    from .slope import grassmann, integer_subperiods, is_characterized_by_subperiods, lifted_subperiods

    E = load_slope(args.slope)
    if args.action == "show":
        sys.stdout.write(dump_slope(E))
    elif args.action == "subperiods":
        subs = integer_subperiods(E)
        if args.lift:
            subs = lifted_subperiods(E, subs)
        for sp in subs:
            print(sp)
    elif args.action == "characterize":
        ch = is_characterized_by_subperiods(E)
        print(ch.verdict)
        if ch.characterized:
            print(f"solutions: {ch.count} ({ch.outside} outside the field)")
        else:
            print(f"reason: {ch.reason}")
    elif args.action == "grassmann":
        for key, val in grassmann(E).items():
            print("G" + "".join(map(str, key)), "=", val)
    return EXIT_OK


# -- projection -----------------------------------------------------------------------------

def cmd_projection(args) -> int:
    from .projection import check_projection, fine_candidates, orthogonal_projection

    E = load_slope(args.slope)
    if args.action == "orthogonal":
        _out(args, dump_matrix(orthogonal_projection(E).matrix))
        return EXIT_OK
    if args.action == "fine":
        cands, status = fine_candidates(E, k=args.k, seed=args.seed)
        good = [c for c in cands if c.valid]
        if not good:
            print("none")
            print(f"# {status}" if not cands else "# every candidate is invalid", file=sys.stderr)
            return EXIT_FAIL
        _out(args, dump_matrix(good[0].matrix))
        return EXIT_OK
    A = load_matrix(args.matrix, E.field)
    rep = check_projection(A, E, args.k, seed=args.seed)
    if rep.valid:
        print(f"valid ({rep.tiles_checked} tiles)")
        return EXIT_OK
    print(f"invalid: {rep.reason} {rep.witness}")
    return EXIT_FAIL


# -- tiling -------------------------------------------------------------------------------

def cmd_tiling(args) -> int:
    from .multigrid import generate_patch, shadow_patch
    from .render import render_patch

    if args.action == "generate":
        E = load_slope(args.slope)
        A = _projection_for(E, args.projection)
        P = generate_patch(E, A, args.k, seed=args.seed)
        inputs = [args.slope]
    else:
        P = patch_from_dict(read_json(args.patch))
        P = shadow_patch(P, args.drop)
        inputs = [args.patch]
    if args.out and args.out.endswith(".svg"):
        _out(args, render_patch(P), inputs=inputs, seeds={"shift": getattr(args, "seed", None)})
    else:
        import json

        _out(args, json.dumps(patch_to_dict(P), indent=1, sort_keys=True) + "\n",
             inputs=inputs, seeds={"shift": getattr(args, "seed", None)})
    print(f"{len(P)} tiles", file=sys.stderr)
    return EXIT_OK


# -- atlas ----------------------------------------------------------------------------------

def cmd_atlas(args) -> int:
    import json

    from .atlas import atlas, window

    E = load_slope(args.slope)
    entries = atlas(E, args.r, metric=args.metric, seed=args.seed)
    doc = atlas_to_dict(entries, window(E))
    _out(args, json.dumps(doc, indent=1, sort_keys=True) + "\n", inputs=[args.slope],
         seeds={"sampling": args.seed})
    print(f"{len(entries)} maps", file=sys.stderr)
    return EXIT_OK


# -- ammann ---------------------------------------------------------------------------------

def cmd_ammann(args) -> int:
    import json

    from .ammann import LineFamily, decorated_tileset, interval_census, render_tileset
    from .multigrid import generate_patch
    from .slope import lifted_subperiods

    from .render import render_patch

    if args.action == "lines":
        P = patch_from_dict(read_json(args.patch))
        Path(args.svg).write_text(render_patch(P, decorations=_decorations(P), directions=args.direction))
        write_manifest(args.svg, args.argv, inputs=[args.patch], version=__version__)
        return EXIT_OK
    E = load_slope(args.slope)
    A = _projection_for(E, "fine")
    if args.action == "tileset":
        T = decorated_tileset(E, A, extra=args.extra)
        if args.svg:
            Path(args.svg).write_text(render_tileset(T))
            write_manifest(args.svg, args.argv, inputs=[args.slope], version=__version__)
        _out(args, json.dumps(tileset_to_dict(T), indent=1, sort_keys=True) + "\n", inputs=[args.slope])
        print(f"{len(T)} decorated tiles", file=sys.stderr)
        return EXIT_OK
    fam = LineFamily.build(E, A, lifted_subperiods(E))
    P = generate_patch(E, A, args.k, seed=args.seed)
    for m in range(E.n):
        gaps = interval_census(P, fam, m)
        print(f"direction {m}: {len(gaps)} intervals: " + ", ".join(f"{g} ({w:.6f})" for g, w in gaps))
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------------

def _decorations(P):
    from .ammann import LineFamily, decorate_patch, decoration_radius
    from .slope import lifted_subperiods

    subs = lifted_subperiods(P.slope)
    fam = LineFamily.build(P.slope, P.projection, subs)
    return decorate_patch(P, fam, float(decoration_radius(P.slope, P.projection, subs)))


def cmd_verify(args) -> int:
    from . import verify as V

    if args.action == "penrose":
        rep = V.penrose_identity_suite()
        for name, label, ok in rep["checks"]:
            print(f"{'PASS' if ok else 'FAIL'} {name} {label}")
        print(f"S = {rep['S']:.12f}  L = {rep['L']:.12f}")
        return EXIT_OK if rep["passed"] else EXIT_FAIL
    if args.action == "walk":
        from .ammann import LineFamily, decorated_tileset
        from .slope import lifted_subperiods

        E = load_slope(args.slope)
        A = _projection_for(E, "fine")
        fam = LineFamily.build(E, A, lifted_subperiods(E))
        T = decorated_tileset(E, A)
        ok = True
        for i in range(E.n):
            r = V.configuration_walk(T, fam, i)
            ok &= r.ok
            print(f"{'PASS' if r.ok else 'FAIL'} direction {i}: vectors {sorted(r.vectors)} "
                  f"expected {r.expected} paths {r.paths}")
        return EXIT_OK if ok else EXIT_FAIL
    P = patch_from_dict(read_json(args.patch))
    if P.slope is None:
        raise UsageError("patch file carries no slope")
    if args.action == "planarity":
        est = V.check_planarity(P, P.slope)
        print(f"thickness {est.thickness:.12g} (lp {est.lp_thickness:.12g}) strongly planar: {est.strongly_planar}")
        return EXIT_OK if est.strongly_planar else EXIT_FAIL
    if args.action == "shadows":
        from .slope import lifted_subperiods

        ok = True
        for sp in lifted_subperiods(P.slope):
            if len(sp.dropped) != 1:
                continue
            i = sp.dropped[0]
            r = V.check_shadow_period(P, i, sp.shadow, args.margin)
            ok &= r.ok
            print(f"{'PASS' if r.ok else 'FAIL'} shadow {i} period {r.candidate_period}: "
                  f"{r.verified_translates} translates, {len(r.failures)} failures")
        return EXIT_OK if ok else EXIT_FAIL
    # continuity
    decos = _decorations(P)
    rep = V.check_line_continuity(P, decos)
    ok = rep.ok
    print(f"{'PASS' if rep.ok else 'FAIL'} continuity over {rep.edges_checked} shared edges"
          + (f", witness {rep.witness}" if rep.witness else ""))
    if args.tiles:
        known = {json_key(d) for d in read_json(args.tiles)["tiles"]}
        seen = {json_key(tileset_entry(d)) for d in decos.values()}
        extra = seen - known
        ok &= not extra
        print(f"{'PASS' if not extra else 'FAIL'} {len(seen)} decorations seen, "
              f"{len(extra)} outside the tileset")
    return EXIT_OK if ok else EXIT_FAIL


def tileset_entry(d) -> dict:
    return {"type": list(d.type), "offsets": {str(m): [str(x) for x in offs] for m, offs in d.offsets}}


def json_key(entry: dict):
    return (tuple(entry["type"]), tuple(sorted((k, tuple(v)) for k, v in entry["offsets"].items())))


# -- survey / render ----------------------------------------------------------------------------

def cmd_survey(args) -> int:
    from .survey import SurveyConfig, run_survey

    cfg = SurveyConfig(k=args.k, samples=args.samples, seed=args.seed,
                       validity_k=args.validity_k, timeout=args.timeout)
    res = run_survey(cfg)
    _out(args, res.to_csv(timing=not args.no_timing), seeds={"survey": args.seed})
    nc, fine = res.fractions()
    print(f"{res.total} slopes: {res.not_characterized} not characterized ({100 * nc:.1f}%), "
          f"{res.fine_found} with a fine projection ({100 * fine:.1f}%), {res.timeouts} timeouts",
          file=sys.stderr)
    return EXIT_OK


def cmd_render(args) -> int:
    from .multigrid import shadow_patch
    from .render import render_patch

    P = patch_from_dict(read_json(args.patch))
    decos = _decorations(P) if args.lines else None
    if args.shadow is not None:
        P = shadow_patch(P, args.shadow)
        decos = None
    _out(args, render_patch(P, decorations=decos), inputs=[args.patch])
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ammannbars", description="Ammann bars of cut-and-project tilings via subperiods and fine projections.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("slope", help="inspect a slope")
    s.add_argument("action", choices=["show", "subperiods", "characterize", "grassmann"])
    s.add_argument("slope", help="slope file or built-in name")
    s.add_argument("--lift", action="store_true", help="print lifted subperiods")
    s.set_defaults(func=cmd_slope)

    s = sub.add_parser("projection", help="orthogonal / fine projections and validity")
    ps = s.add_subparsers(dest="action", required=True)
    for name in ("orthogonal", "fine"):
        q = ps.add_parser(name)
        q.add_argument("slope")
        q.add_argument("--k", type=int, default=6)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--out")
    q = ps.add_parser("check")
    q.add_argument("slope")
    q.add_argument("matrix")
    q.add_argument("--k", type=int, default=6)
    q.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_projection)

    s = sub.add_parser("tiling", help="multigrid patches and shadows")
    ts = s.add_subparsers(dest="action", required=True)
    q = ts.add_parser("generate")
    q.add_argument("slope")
    q.add_argument("--projection", default="orthogonal", help="fine, orthogonal or a matrix file")
    q.add_argument("--k", type=int, default=6)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out")
    q = ts.add_parser("shadow")
    q.add_argument("patch")
    q.add_argument("--drop", type=int, required=True)
    q.add_argument("--out")
    s.set_defaults(func=cmd_tiling)

    s = sub.add_parser("atlas", help="r-atlas of a slope")
    ats = s.add_subparsers(dest="action", required=True)
    q = ats.add_parser("compute")
    q.add_argument("slope")
    q.add_argument("--r", type=int, default=1)
    q.add_argument("--metric", choices=["euclid", "graph"], default="euclid")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out")
    s.set_defaults(func=cmd_atlas)

    s = sub.add_parser("ammann", help="decorated tilesets and line intervals")
    as_ = s.add_subparsers(dest="action", required=True)
    q = as_.add_parser("tileset")
    q.add_argument("slope")
    q.add_argument("--extra", type=float, default=0.0, help="enlarge the search radius")
    q.add_argument("--svg")
    q.add_argument("--out")
    q = as_.add_parser("lines", help="draw a patch with the lines of one or all directions")
    q.add_argument("patch")
    q.add_argument("--direction", type=int, action="append", help="repeatable; default all")
    q.add_argument("--svg", required=True)
    q = as_.add_parser("census")
    q.add_argument("slope")
    q.add_argument("--k", type=int, default=8)
    q.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_ammann)

    s = sub.add_parser("verify", help="patch-scale checks")
    vs = s.add_subparsers(dest="action", required=True)
    vs.add_parser("penrose")
    q = vs.add_parser("walk")
    q.add_argument("slope")
    q = vs.add_parser("shadows")
    q.add_argument("patch")
    q.add_argument("--margin", type=int, default=2)
    q = vs.add_parser("continuity")
    q.add_argument("patch")
    q.add_argument("tiles", nargs="?")
    q = vs.add_parser("planarity")
    q.add_argument("patch")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("survey", help="random-slope statistics")
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--samples", type=int, default=999)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--validity-k", type=int, default=4)
    s.add_argument("--timeout", type=float, default=60.0)
    s.add_argument("--no-timing", action="store_true", help="omit the timing column (byte-stable output)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_survey)

    s = sub.add_parser("render", help="draw a patch file as SVG")
    s.add_argument("patch")
    s.add_argument("--shadow", type=int)
    s.add_argument("--lines", action="store_true", help="overlay dashed Ammann lines")
    s.add_argument("--out")
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    args.argv = ["ammannbars"] + list(sys.argv[1:] if argv is None else argv)
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"ammannbars: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
