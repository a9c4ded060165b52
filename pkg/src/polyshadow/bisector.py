"""The equidistant set of 0 and x in the polytopal norm, studied slice-wise.

The bisector is never materialized as one infinite object: it is the stack
of scaled parameter spheres lam * gamma_lam together with the pointwise
membership predicate gauge(y) == gauge(y - x).
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from .body import SymmetricBody, rational_str
from .errors import EmptyComplex, ZeroDirection
from .kernel import gauge, is_zero_vec, to_vec, vsub
from .spheres import critical_lambdas, gamma_complex, lambda_zero
from .topology import CIRCLE, CellComplex, classify


@dataclass(frozen=True)
class BisectorSlice:
    lam: Fraction
    scaled_complex: CellComplex


@dataclass(frozen=True)
class BisectorVerdict:
    manifold: bool
    reason: str
    slice_reports: tuple   # ((lam, classification), ...)
    criticals: tuple

    def to_dict(self):
        return {
            "manifold": self.manifold,
            "reason": self.reason,
            "slices": [
                {"lambda": rational_str(l), "classification": c}
                for l, c in self.slice_reports
            ],
            "criticals": [rational_str(l) for l in self.criticals],
        }


def membership(body: SymmetricBody, x, y):
    """(flag, lam): flag is True iff y is equidistant from 0 and x, in
    which case lam is the common gauge distance."""
    x = to_vec(x)
    if is_zero_vec(x):
        raise ZeroDirection("direction must be nonzero")
    y = to_vec(y)
    g0 = gauge(body, y)
    g1 = gauge(body, vsub(y, x))
    if g0 == g1:
        return True, g0
    return False, None


def slices(body: SymmetricBody, x, lambdas):
    """Scaled seam complexes lam * gamma_lam for the given values."""
    out = []
    for lam in lambdas:
        lam = Fraction(lam)
        sphere = gamma_complex(body, x, lam)
        out.append(BisectorSlice(lam=lam,
                                 scaled_complex=sphere.complex.scale(lam)))
    return out


def _probe_values(criticals, lam0, lambda_max):
    """Midpoints of the critical intervals plus the critical values
    themselves (half-open convention: a class holding on (a, b] is probed
    at b and at (a+b)/2)."""
    pts = sorted(set(list(criticals) + [Fraction(lambda_max)]))
    probes = []
    for a, b in zip(pts, pts[1:]):
        probes.append((a + b) / 2)
        probes.append(b)
    return [p for p in probes if p > lam0]


def manifold_verdict(body: SymmetricBody, x, lambda_max) -> BisectorVerdict:
    """Slice-wise manifold test of the bisector.

    The bisector is a manifold exactly when every nondegenerate sphere is
    a circle; the degenerate first-contact slice is exempt.  The reason
    string cites the first critical interval containing a failing probe.
    """
    x = to_vec(x)
    lambda_max = Fraction(lambda_max)
    lam0 = lambda_zero(body, x)
    if lambda_max <= lam0:
        raise ValueError("lambda_max must exceed the first contact value")
    crit = critical_lambdas(body, x, lambda_max)
    probes = _probe_values(crit.values, lam0, lambda_max)

    reports = []
    first_bad = None
    for lam in probes:
        rep = classify(gamma_complex(body, x, lam).complex)
        reports.append((lam, rep.classification))
        if rep.classification != CIRCLE and first_bad is None:
            first_bad = (lam, rep.classification)

    if first_bad is None:
        return BisectorVerdict(
            manifold=True,
            reason=f"all nondegenerate slices up to {rational_str(lambda_max)} "
                   "are circles",
            slice_reports=tuple(reports),
            criticals=crit.values,
        )
    lam_bad, cls_bad = first_bad
    grid = sorted(set(list(crit.values) + [lambda_max]))
    lo = max((g for g in grid if g < lam_bad), default=lam0)
    hi = min((g for g in grid if g >= lam_bad), default=lambda_max)
    reason = (f"slice at lambda={rational_str(lam_bad)} classifies as "
              f"{cls_bad}, not a circle, on ({rational_str(lo)}, "
              f"{rational_str(hi)}]")
    return BisectorVerdict(
        manifold=False,
        reason=reason,
        slice_reports=tuple(reports),
        criticals=crit.values,
    )


# -- mesh export -----------------------------------------------------------


def _fmt(value) -> str:
    return f"{float(value):.12g}"


def _gather(complexes):
    vmap = {}
    verts = []

    def vid(p):
        if p not in vmap:
            vmap[p] = len(verts)
            verts.append(p)
        return vmap[p]

    lines, faces = [], []
    for c in complexes:
        covered = set()
        for cyc in c.cells2:
            m = len(cyc)
            for t in range(m):
                e = (min(cyc[t], cyc[(t + 1) % m]),
                     max(cyc[t], cyc[(t + 1) % m]))
                covered.add(e)
            ids = [vid(c.vertices[i]) for i in cyc]
            for t in range(1, m - 1):
                faces.append((ids[0], ids[t], ids[t + 1]))
        for i, j in c.edges:
            if (i, j) in covered:
                continue
            lines.append((vid(c.vertices[i]), vid(c.vertices[j])))
    return verts, lines, faces


def _atomic_write(path, text):
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


def export_mesh(complexes, fmt, path):
    """Write the complexes to one OBJ or PLY file.

    Exact vertices are rendered as decimals with 12 significant digits;
    1-cells become line elements and polygons are fan-triangulated.
    """
    complexes = list(complexes)
    if not complexes or all(c.is_empty for c in complexes):
        raise EmptyComplex("nothing to export")
    fmt = fmt.upper()
    verts, lines, faces = _gather(complexes)
    if fmt == "OBJ":
        out = []
        for p in verts:
            out.append(f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
        for i, j in lines:
            out.append(f"l {i + 1} {j + 1}")
        for i, j, k in faces:
            out.append(f"f {i + 1} {j + 1} {k + 1}")
        _atomic_write(path, "\n".join(out) + "\n")
    elif fmt == "PLY":
        out = [
            "ply",
            "format ascii 1.0",
            f"element vertex {len(verts)}",
            "property float x",
            "property float y",
            "property float z",
            f"element edge {len(lines)}",
            "property int vertex1",
            "property int vertex2",
            f"element face {len(faces)}",
            "property list uchar int vertex_indices",
            "end_header",
        ]
        for p in verts:
            out.append(f"{_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
        for i, j in lines:
            out.append(f"{i} {j}")
        for i, j, k in faces:
            out.append(f"3 {i} {j} {k}")
        _atomic_write(path, "\n".join(out) + "\n")
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
