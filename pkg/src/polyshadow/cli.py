"""Command-line interface.

Subcommands: body, shadow, sphere, sweep, bisector, verify.  All reports
are deterministic JSON with exact rationals as "p/q" strings; floats only
appear in Hausdorff and mesh output.  Exit codes: 0 success, 1 invariant
violation, 2 bad input, 3 io error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import bisector as bisector_mod
from . import body as body_mod
from . import shadow as shadow_mod
from . import spheres as spheres_mod
from . import suite as suite_mod
from .body import rational_str
from .errors import GeometryError
from .topology import classify


class BadInput(Exception):
    pass


def _parse_lambda(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise BadInput(
            f"lambda must be an exact rational like 5/4, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise BadInput(f"cannot parse lambda {text!r}: {exc}") from exc


def _parse_direction(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise BadInput(f"direction needs three components, got {text!r}")
    coords = []
    for p in parts:
        try:
            coords.append(Fraction(p))  # exact, including decimal strings
        except (ValueError, ZeroDivisionError) as exc:
            raise BadInput(f"cannot parse coordinate {p!r}: {exc}") from exc
    if all(c == 0 for c in coords):
        raise BadInput("direction must be nonzero")
    return tuple(coords)


def _load_body(args) -> body_mod.SymmetricBody:
    if getattr(args, "builtin", None):
        return body_mod.builtin(args.builtin)
    if getattr(args, "input", None):
        return body_mod.load_body(args.input)
    raise BadInput("specify --builtin NAME or --input FILE")


def _write_json(path, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cmd_body(args) -> int:
    body = _load_body(args)
    payload = body_mod.body_to_dict(body)
    payload["facet_count"] = len(body.facets)
    payload["edge_count"] = len(body.lattice.edges)
    payload["vertex_count"] = len(body.vertices)
    _write_json(args.output, payload)
    return 0


def _cmd_shadow(args) -> int:
    body = _load_body(args)
    x = _parse_direction(args.direction)
    decomp = shadow_mod.decompose(body, x)
    payload = shadow_mod.report_dict(decomp)
    payload["classification"] = classify(decomp.shadow_complex).to_dict()
    _write_json(args.output, payload)
    if args.mesh:
        bisector_mod.export_mesh([decomp.shadow_complex],
                                 _mesh_format(args.mesh), args.mesh)
    return 0


def _cmd_sphere(args) -> int:
    body = _load_body(args)
    x = _parse_direction(args.direction)
    lam = _parse_lambda(getattr(args, "lambda"))
    sphere = spheres_mod.gamma_complex(body, x, lam)
    rep = classify(sphere.complex)
    payload = {
        "lambda": rational_str(sphere.lam),
        "direction": [rational_str(c) for c in x],
        "degenerate": sphere.degenerate,
        "vertex_count": len(sphere.complex.vertices),
        "edge_count": len(sphere.complex.edges),
        "cell_count": len(sphere.complex.cells2),
        "report": rep.to_dict(),
    }
    _write_json(args.output, payload)
    if args.mesh:
        bisector_mod.export_mesh([sphere.complex],
                                 _mesh_format(args.mesh), args.mesh)
    return 0


def _cmd_sweep(args) -> int:
    body = _load_body(args)
    x = _parse_direction(args.direction)
    lam_min = _parse_lambda(args.lambda_min)
    lam_max = _parse_lambda(args.lambda_max)
    if lam_max < lam_min:
        raise BadInput("lambda-max must be at least lambda-min")
    steps = args.steps
    crit = spheres_mod.critical_lambdas(body, x, lam_max)
    lam0 = spheres_mod.lambda_zero(body, x)
    grid = {lam_min, lam_max}
    for i in range(1, steps):
        grid.add(lam_min + (lam_max - lam_min) * Fraction(i, steps))
    grid |= {c for c in crit.values if lam_min <= c <= lam_max}
    grid = sorted(g for g in grid if g >= lam0)

    decomp = shadow_mod.decompose(body, x)
    rows = []
    for lam in grid:
        sphere = spheres_mod.gamma_complex(body, x, lam)
        rep = classify(sphere.complex)
        row = {
            "lambda": rational_str(lam),
            "classification": rep.classification,
            "euler": rep.euler,
            "components": rep.components,
            "boundary_circles": rep.boundary_circles,
            "degenerate": sphere.degenerate,
            "critical": lam in crit.values,
        }
        if not sphere.complex.is_empty and \
                not decomp.shadow_complex.is_empty:
            row["hausdorff_to_shadow"] = spheres_mod.hausdorff_distance(
                sphere.complex, decomp.shadow_complex,
                density=args.density)
        rows.append(row)
    payload = {
        "direction": [rational_str(c) for c in x],
        "lambda_zero": rational_str(lam0),
        "criticals": [rational_str(c) for c in crit.values],
        "sweep": rows,
        "shadow_classification": classify(decomp.shadow_complex).to_dict(),
    }
    _write_json(args.output, payload)
    return 0


def _cmd_bisector(args) -> int:
    body = _load_body(args)
    x = _parse_direction(args.direction)
    lam_max = _parse_lambda(args.lambda_max)
    verdict = bisector_mod.manifold_verdict(body, x, lam_max)
    _write_json(args.output, verdict.to_dict())
    if args.mesh:
        lam0 = spheres_mod.lambda_zero(body, x)
        values = sorted({lam0} | set(verdict.criticals)
                        | {l for l, _ in verdict.slice_reports})
        slc = bisector_mod.slices(body, x, values)
        bisector_mod.export_mesh(
            [s.scaled_complex for s in slc], _mesh_format(args.mesh),
            args.mesh)
    return 0


def _cmd_verify(args) -> int:
    if args.suite != "theorems":
        raise BadInput(f"unknown suite {args.suite!r}")
    result = suite_mod.run_suite(args.count, seed=args.seed)
    payload = {
        "bodies": result.bodies,
        "checks": result.checks,
        "failures": result.failures,
        "warnings": result.warnings,
        "ok": result.ok,
    }
    _write_json(args.output, payload)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for f in result.failures:
        print(f"FAILURE: {f}", file=sys.stderr)
    return 0 if result.ok else 1


def _mesh_format(path: str) -> str:
    ext = os.path.splitext(path)[1].lower()
    if ext == ".ply":
        return "PLY"
    return "OBJ"


def _add_body_source(p):
    p.add_argument("--builtin", help="builtin body name, e.g. octahedron")
    p.add_argument("--input", help="body JSON file")
    p.add_argument("--output", help="report JSON path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polyshadow",
        description="Exact shadow boundaries, parameter spheres, and "
                    "bisectors of centrally symmetric convex polytopes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("body", help="validate a body and report face counts")
    _add_body_source(p)
    p.set_defaults(func=_cmd_body)

    p = sub.add_parser("shadow", help="shadow boundary decomposition")
    _add_body_source(p)
    p.add_argument("--direction", required=True,
                   help="light direction, e.g. 1,-1,0")
    p.add_argument("--mesh", help="write the shadow complex as OBJ/PLY")
    p.set_defaults(func=_cmd_shadow)

    p = sub.add_parser("sphere", help="one parameter sphere")
    _add_body_source(p)
    p.add_argument("--direction", required=True)
    p.add_argument("--lambda", required=True,
                   help="exact rational value, e.g. 5/4")
    p.add_argument("--mesh", help="write the sphere as OBJ/PLY")
    p.set_defaults(func=_cmd_sphere)

    p = sub.add_parser("sweep", help="classification table over a lambda grid")
    _add_body_source(p)
    p.add_argument("--direction", required=True)
    p.add_argument("--lambda-min", dest="lambda_min", required=True)
    p.add_argument("--lambda-max", dest="lambda_max", required=True)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--density", type=float, default=64.0,
                   help="Hausdorff sampling density")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("bisector", help="slice meshes and manifold verdict")
    _add_body_source(p)
    p.add_argument("--direction", required=True)
    p.add_argument("--lambda-max", dest="lambda_max", default="64")
    p.add_argument("--mesh", help="write the slice stack as OBJ/PLY")
    p.set_defaults(func=_cmd_bisector)

    p = sub.add_parser("verify", help="run the randomized theorem suite")
    p.add_argument("--suite", default="theorems")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--output", help="report JSON path (default stdout)")
    p.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
