"""Centrally symmetric convex polytopes: construction, builtins, sections.

Bodies are immutable: exact vertices, facet halfspaces, and the full face
lattice.  Builtins cover the worked examples used throughout the test
suite; irrational constructions are rationalized to within 2^-64 using
points that lie exactly on the relevant circle.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import (
    CollinearPoint,
    DegenerateInput,
    NotSymmetric,
    OriginNotInterior,
    UnknownBody,
    ZeroDirection,
)
from .kernel import (
    cross2,
    gauge,
    hull_and_lattice,
    is_zero_vec,
    to_vec,
    vadd,
    vcross,
    vdot,
    vneg,
    vsmul,
    vsub,
)


@dataclass(frozen=True)
class SymmetricBody:
    dim: int
    vertices: tuple
    facets: tuple
    lattice: object
    name: str = ""

    @property
    def facet_polygons(self):
        return self.lattice.facet_polygons

    def __repr__(self):
        return (f"SymmetricBody({self.name or 'unnamed'}: "
                f"{len(self.vertices)} vertices, {len(self.facets)} facets)")


@dataclass(frozen=True)
class PolePair:
    positive: tuple
    negative: tuple


def build_symmetric(points, symmetrize=False, name="") -> SymmetricBody:
    """Hull the points (optionally together with their negatives) and
    validate central symmetry and an interior origin."""
    pts = [to_vec(p) for p in points]
    if not pts:
        raise DegenerateInput("no points given")
    if symmetrize:
        pts = pts + [vneg(p) for p in pts]
    halfspaces, lattice = hull_and_lattice(pts)
    vset = set(lattice.vertices)
    for v in lattice.vertices:
        if vneg(v) not in vset:
            raise NotSymmetric(f"extreme point {v} lacks its negative")
    for hs in halfspaces:
        if hs.offset <= 0:
            raise OriginNotInterior("origin is not strictly interior")
    return SymmetricBody(
        dim=3,
        vertices=lattice.vertices,
        facets=tuple(halfspaces),
        lattice=lattice,
        name=name,
    )


# -- rational circle points ---------------------------------------------

_TWO64 = Fraction(1, 2**64)


def _rational_near(value_num: int, value_den: int) -> Fraction:
    return Fraction(value_num, value_den)


def _mp_ratio(mp_value, bits=80) -> Fraction:
    """Exact rational within 2^-bits of an mpmath value."""
    import mpmath

    scaled = mpmath.floor(mp_value * (1 << bits) + Fraction(1, 2))
    return Fraction(int(scaled), 1 << bits)


def rational_circle_point(angle) -> tuple:
    """Rational point exactly on the unit circle within 2^-64 of
    (cos(angle), sin(angle)), via the tangent half-angle parametrization."""
    import mpmath

    mpmath.mp.prec = 160
    a = mpmath.mpf(angle) if not isinstance(angle, str) else mpmath.mpf(angle)
    two_pi = 2 * mpmath.pi
    a = mpmath.fmod(a, two_pi)
    if a < 0:
        a += two_pi
    flip = False
    if mpmath.pi / 2 < a < 3 * mpmath.pi / 2:
        a = a - mpmath.pi
        flip = True
    t = _mp_ratio(mpmath.tan(a / 2)).limit_denominator(1 << 40)
    den = 1 + t * t
    c, s = (1 - t * t) / den, 2 * t / den
    if flip:
        c, s = -c, -s
    return (c, s)


def _circle_point_at_height(r: Fraction, positive_s=True) -> tuple:
    """Rational point exactly on the unit circle near (r, sqrt(1-r^2))."""
    import mpmath

    mpmath.mp.prec = 160
    rr = mpmath.mpf(r.numerator) / mpmath.mpf(r.denominator)
    rr = max(min(rr, mpmath.mpf(1)), mpmath.mpf(-1))
    ang = mpmath.acos(rr)
    c, s = rational_circle_point(ang)
    if not positive_s:
        s = -s
    return (c, s)


def _sqrt_ratio_rational(num: int, den: int) -> Fraction:
    """Rational approximation of sqrt(num/den) to within 2^-64."""
    shift = 140
    val = isqrt((num << (2 * shift)) // den)
    return Fraction(val, 1 << shift).limit_denominator(1 << 40)


# -- builtin bodies -------------------------------------------------------


def _octahedron():
    return [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def _cube():
    return [(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)]


def _example_sec3():
    """Polyhedron whose shadow band in direction (1,0,0)... see builtin().

    Vertices: the rectangle corners (+-4/3, +-1, +-1), the side points
    (+-2, 0, +-1), and the top/bottom segment endpoints (+-8/5, 0, +-2).
    The six facets parallel to the first axis (normals (0,+-1,0) and
    (0,+-1,+-1)) form a closed band of quadrangles; the lit and dark caps
    are each a slant rectangle plus four triangles.
    """
    a, l = Fraction(4, 3), Fraction(8, 5)
    pts = []
    for ss in (1, -1):
        for st in (1, -1):
            pts.append((a, Fraction(ss), Fraction(st)))
    for st in (1, -1):
        pts.append((Fraction(2), Fraction(0), Fraction(st)))
        pts.append((l, Fraction(0), Fraction(2 * st)))
    return pts


def _sine_cylinder(n: int):
    """Truncation of the cylinder body built from the segment family
    s_k = {(t, 1/k, sqrt(k^2-1)/k)} with connecting arcs, then symmetrized.

    Segments k = 1..n each contribute two endpoints at t = +-1; the arc
    from the +1 end of segment k to the -1 end of segment k+1 is sampled
    at n interior points, uniformly in the ground-line parameter, with
    each sample placed exactly on the unit circle of the (y, z)-plane.
    """
    pts = []
    circle = {}
    for k in range(1, n + 1):
        r = Fraction(1, k)
        if k == 1:
            c = (Fraction(1), Fraction(0))
        else:
            c = _circle_point_at_height(r)
        circle[k] = c
        for t in (1, -1):
            pts.append((Fraction(t), c[0], c[1]))
    for k in range(1, n):
        r0, r1 = circle[k][0], circle[k + 1][0]
        for m in range(1, n + 1):
            u = Fraction(m, n + 1)
            t = 1 - 2 * u
            r = r0 + u * (r1 - r0)
            c = _circle_point_at_height(r)
            pts.append((Fraction(t), c[0], c[1]))
    out = []
    for (t, r, s) in pts:
        for sr in (1, -1):
            for sz in (1, -1):
                out.append((t, sr * r, sz * s))
    return out


def _diadic(n: int):
    """Level-n truncation of the body built over the dyadic points of the
    circle: at level i the odd multiples j/2^i of the full turn carry a
    vertical segment of half-length 1 (i <= 1) or 2^(1-i) (i >= 2)."""
    import mpmath

    mpmath.mp.prec = 160
    pts = []
    for i in range(0, n + 1):
        half = Fraction(1) if i <= 1 else Fraction(1, 2 ** (i - 1))
        for j in range(1, 2**i + 1, 2):
            ang = 2 * mpmath.pi * j / (2**i)
            if i == 0:
                c = (Fraction(1), Fraction(0))
            elif i == 1:
                c = (Fraction(-1), Fraction(0))
            elif i == 2 and j == 1:
                c = (Fraction(0), Fraction(1))
            elif i == 2 and j == 3:
                c = (Fraction(0), Fraction(-1))
            else:
                c = rational_circle_point(ang)
            for sz in (1, -1):
                pts.append((c[0], c[1], sz * half))
    return pts


_BUILTIN_RE = re.compile(r"^([a-z0-9-]+?)(?:\((\d+)\))?$")


def builtin(name: str, n: int | None = None) -> SymmetricBody:
    """Construct a named builtin body.

    Known names: "octahedron", "cube", "example-sec3", "sine-cylinder(N)",
    "diadic(N)".  The parameter may be embedded in the name or passed
    separately.  All builtins are symmetrized exactly.
    """
    m = _BUILTIN_RE.match(name.strip())
    if not m:
        raise UnknownBody(f"cannot parse body name {name!r}")
    base, embedded = m.group(1), m.group(2)
    if embedded is not None:
        n = int(embedded)
    if base == "octahedron":
        return build_symmetric(_octahedron(), symmetrize=True, name="octahedron")
    if base == "cube":
        return build_symmetric(_cube(), symmetrize=True, name="cube")
    if base == "example-sec3":
        return build_symmetric(_example_sec3(), symmetrize=True,
                               name="example-sec3")
    if base == "sine-cylinder":
        if n is None or n < 1:
            raise UnknownBody("sine-cylinder requires a parameter N >= 1")
        return build_symmetric(_sine_cylinder(n), symmetrize=True,
                               name=f"sine-cylinder({n})")
    if base == "diadic":
        if n is None or n < 1:
            raise UnknownBody("diadic requires a parameter N >= 1")
        return build_symmetric(_diadic(n), symmetrize=True,
                               name=f"diadic({n})")
    raise UnknownBody(f"unknown body {name!r}")


def random_symmetric(seed: int, pairs: int) -> SymmetricBody:
    """Hull of `pairs` random rational points on a box, symmetrized.

    Deterministic for a fixed seed.  Resamples a bounded number of times
    when the sample is degenerate.
    """
    if pairs < 4:
        raise ValueError("need at least 4 point pairs")
    rng = random.Random(seed)
    for _ in range(32):
        pts = []
        for _ in range(pairs):
            pts.append(tuple(Fraction(rng.randint(-64, 64), 16)
                             for _ in range(3)))
        try:
            return build_symmetric(pts, symmetrize=True,
                                   name=f"random({seed},{pairs})")
        except DegenerateInput:
            continue
    raise DegenerateInput("could not sample a full-dimensional body")


def poles(body: SymmetricBody, x) -> PolePair:
    """Intersection of the axis span(x) with the boundary."""
    x = to_vec(x)
    if is_zero_vec(x):
        raise ZeroDirection("pole direction must be nonzero")
    g = gauge(body, x)
    pos = vsmul(1 / g, x)
    return PolePair(pos, vneg(pos))


def longitudinal_curve(body: SymmetricBody, x, p):
    """Boundary section by the 2-plane spanned by x and p.

    Returns the convex section polygon as a cyclic tuple of exact 3D
    points.  The polygon passes through both poles.  Raises CollinearPoint
    when p lies on span(x).
    """
    x = to_vec(x)
    p = to_vec(p)
    if is_zero_vec(x):
        raise ZeroDirection("direction must be nonzero")
    if is_zero_vec(vcross(x, p)):
        raise CollinearPoint("section point lies on the axis span(x)")

    # constraints in plane coordinates y = alpha*x + beta*p
    cons = []
    for hs in body.facets:
        cons.append((vdot(hs.normal, x), vdot(hs.normal, p), hs.offset))

    verts = set()
    m = len(cons)
    for i in range(m):
        a1, b1, c1 = cons[i]
        for j in range(i + 1, m):
            a2, b2, c2 = cons[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            alpha = (c1 * b2 - c2 * b1) / det
            beta = (a1 * c2 - a2 * c1) / det
            if all(a * alpha + b * beta <= c for a, b, c in cons):
                verts.add((alpha, beta))
    if len(verts) < 3:
        raise DegenerateInput("section is not two-dimensional")

    # order around the interior point (0, 0) without trigonometry
    def half_id(q):
        return 0 if (q[1] > 0 or (q[1] == 0 and q[0] > 0)) else 1

    import functools

    def cmp(q1, q2):
        h1, h2 = half_id(q1), half_id(q2)
        if h1 != h2:
            return -1 if h1 < h2 else 1
        cr = cross2(q1, q2)
        if cr > 0:
            return -1
        if cr < 0:
            return 1
        return 0

    ordered = sorted(verts, key=functools.cmp_to_key(cmp))
    # remove collinear middles in the cyclic ordering
    cleaned = []
    n = len(ordered)
    for t in range(n):
        prev_q = ordered[(t - 1) % n]
        q = ordered[t]
        next_q = ordered[(t + 1) % n]
        if cross2(vsub2(next_q, prev_q), vsub2(q, prev_q)) != 0:
            cleaned.append(q)
    return tuple(vadd(vsmul(alpha, x), vsmul(beta, p))
                 for alpha, beta in cleaned)


def vsub2(a, b):
    return (a[0] - b[0], a[1] - b[1])


# -- JSON body format -----------------------------------------------------

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def _parse_rational(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise ValueError(f"floats are not allowed in body files: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"cannot parse rational from {s!r}")
    s = s.strip().replace("−", "-")
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not an exact rational: {s!r}")
    return Fraction(s)


def rational_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def body_to_dict(body: SymmetricBody) -> dict:
    return {
        "dim": body.dim,
        "name": body.name,
        "vertices": [[rational_str(c) for c in v] for v in body.vertices],
    }


def body_from_dict(data: dict) -> SymmetricBody:
    if data.get("dim", 3) != 3:
        raise ValueError("only 3-dimensional bodies are supported")
    verts = [tuple(_parse_rational(c) for c in v) for v in data["vertices"]]
    return build_symmetric(verts, symmetrize=False, name=data.get("name", ""))


def save_body(body: SymmetricBody, path) -> None:
    with open(path, "w") as fh:
        json.dump(body_to_dict(body), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_body(path) -> SymmetricBody:
    with open(path) as fh:
        return body_from_dict(json.load(fh))
