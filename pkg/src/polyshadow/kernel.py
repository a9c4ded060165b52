"""Exact rational predicates: vectors, halfspaces, 3D hulls with face lattices.

Everything here works over ``fractions.Fraction``.  Floating point never
enters a predicate; the only consumers of floats live in the sampling and
export layers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DegenerateInput, ZeroDirection

Vec = tuple  # tuple of Fraction


def frac(value) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not allowed in exact coordinates")
    return Fraction(value)


def vec(*coords) -> Vec:
    return tuple(frac(c) for c in coords)


def to_vec(seq) -> Vec:
    return tuple(frac(c) for c in seq)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vsmul(c: Fraction, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def vdot(a: Vec, b: Vec) -> Fraction:
    return sum(x * y for x, y in zip(a, b))


def vcross(a: Vec, b: Vec) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def det3(a: Vec, b: Vec, c: Vec) -> Fraction:
    return vdot(a, vcross(b, c))


def orient(a: Vec, b: Vec, c: Vec, d: Vec) -> Fraction:
    """Signed volume of the tetrahedron (a,b,c,d); > 0 when d is on the
    outward side of the oriented triangle (a,b,c)."""
    return det3(vsub(b, a), vsub(c, a), vsub(d, a))


def collinear(a: Vec, b: Vec, c: Vec) -> bool:
    return is_zero_vec(vcross(vsub(b, a), vsub(c, a)))


@dataclass(frozen=True)
class HalfSpace:
    """Constraint normal . y <= offset with the normal pointing outward."""

    normal: Vec
    offset: Fraction

    def value(self, p: Vec) -> Fraction:
        return vdot(self.normal, p) - self.offset

    def contains(self, p: Vec) -> bool:
        return self.value(p) <= 0


def _integerize(normal: Vec, offset: Fraction):
    """Scale (normal, offset) by a positive rational so all entries become
    coprime integers.  Orientation is preserved."""
    den = 1
    for x in list(normal) + [offset]:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in normal] + [int(offset * den)]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints[:3]), Fraction(ints[3])


def canonical_halfspace(normal: Vec, offset: Fraction) -> HalfSpace:
    if is_zero_vec(normal):
        raise ValueError("halfspace normal must be nonzero")
    n, c = _integerize(to_vec(normal), frac(offset))
    return HalfSpace(n, c)


def plane_key(normal: Vec, offset: Fraction):
    """Orientation-free key identifying the plane normal . y = offset."""
    n, c = _integerize(normal, offset)
    for x in n:
        if x != 0:
            if x < 0:
                n, c = vneg(n), -c
            break
    return (n, c)


@dataclass(frozen=True)
class FaceLattice:
    """Faces of a 3-polytope: corner-indexed polygons, edges, active sets.

    ``facet_polygons[j]`` is the corner cycle of facet ``j`` oriented
    counterclockwise as seen from outside.  ``vertex_active[i]`` is the
    frozenset of facet indices whose polygon has vertex ``i`` as a corner;
    an edge's active set is the pair of facets sharing it.
    """

    vertices: tuple
    halfspaces: tuple
    facet_polygons: tuple
    edges: tuple
    vertex_active: tuple
    edge_active: tuple

    def faces(self):
        """Yield every face as (dim, index)."""
        for i in range(len(self.vertices)):
            yield (0, i)
        for i in range(len(self.edges)):
            yield (1, i)
        for i in range(len(self.facet_polygons)):
            yield (2, i)

    def face_vertex_indices(self, face):
        dim, i = face
        if dim == 0:
            return (i,)
        if dim == 1:
            return self.edges[i]
        return self.facet_polygons[i]

    def face_active(self, face):
        dim, i = face
        if dim == 0:
            return self.vertex_active[i]
        if dim == 1:
            return self.edge_active[i]
        return frozenset((i,))

    def face_points(self, face):
        return tuple(self.vertices[i] for i in self.face_vertex_indices(face))

    def face_barycenter(self, face) -> Vec:
        pts = self.face_points(face)
        n = Fraction(len(pts))
        acc = pts[0]
        for p in pts[1:]:
            acc = vadd(acc, p)
        return vsmul(1 / n, acc)


def _dedupe(points):
    seen = {}
    for p in points:
        seen.setdefault(p, None)
    return list(seen)


def _remove_collinear_middles(points):
    """Drop every point lying strictly inside a segment of two others.

    After this no three surviving points are collinear, which keeps the
    incremental hull free of zero-area cone triangles.
    """
    pts = list(points)
    changed = True
    while changed:
        changed = False
        drop = set()
        n = len(pts)
        for i in range(n):
            if i in drop:
                continue
            for j in range(i + 1, n):
                if j in drop:
                    continue
                d = vsub(pts[j], pts[i])
                for k in range(n):
                    if k == i or k == j or k in drop:
                        continue
                    w = vsub(pts[k], pts[i])
                    if not is_zero_vec(vcross(d, w)):
                        continue
                    # pts[k] on line (i,j): decide which of the three is inside
                    t_num = vdot(w, d)
                    t_den = vdot(d, d)
                    if 0 < t_num < t_den:
                        drop.add(k)
                    elif t_num <= 0:
                        drop.add(i)
                    else:
                        drop.add(j)
                    changed = True
        if drop:
            pts = [p for idx, p in enumerate(pts) if idx not in drop]
    return pts


class _TriangleHull:
    """Incremental exact hull kept as oriented triangles."""

    def __init__(self, p0, p1, p2, p3):
        self.faces = {}
        self.edge_map = {}
        self.next_id = 0
        if orient(p0, p1, p2, p3) > 0:
            p1, p2 = p2, p1
        self._add_face(p0, p1, p2)
        self._add_face(p0, p2, p3)
        self._add_face(p0, p3, p1)
        self._add_face(p1, p3, p2)

    def _add_face(self, a, b, c):
        fid = self.next_id
        self.next_id += 1
        self.faces[fid] = (a, b, c)
        for u, w in ((a, b), (b, c), (c, a)):
            self.edge_map[(u, w)] = fid
        return fid

    def _drop_face(self, fid):
        a, b, c = self.faces.pop(fid)
        for u, w in ((a, b), (b, c), (c, a)):
            if self.edge_map.get((u, w)) == fid:
                del self.edge_map[(u, w)]

    def insert(self, p):
        visible = [
            fid
            for fid, (a, b, c) in self.faces.items()
            if orient(a, b, c, p) > 0
        ]
        if not visible:
            return  # p inside or on the current hull
        vis = set(visible)
        horizon = []
        for fid in visible:
            a, b, c = self.faces[fid]
            for u, w in ((a, b), (b, c), (c, a)):
                nb = self.edge_map.get((w, u))
                if nb is None or nb not in vis:
                    horizon.append((u, w))
        succ = {}
        for u, w in horizon:
            if u in succ:
                raise DegenerateInput("hull horizon is not a simple cycle")
            succ[u] = w
        start = horizon[0][0]
        cycle = [start]
        cur = succ[start]
        while cur != start:
            cycle.append(cur)
            cur = succ[cur]
        if len(cycle) != len(horizon):
            raise DegenerateInput("hull horizon is not a single cycle")
        for fid in visible:
            self._drop_face(fid)
        for i, u in enumerate(cycle):
            w = cycle[(i + 1) % len(cycle)]
            self._add_face(u, w, p)


def hull_and_lattice(points):
    """Exact convex hull of full-dimensional rational points in R^3.

    Returns (halfspaces, FaceLattice).  Coplanar triangles are merged into
    true facet polygons; interior and non-extreme points are discarded.
    Raises DegenerateInput when the points span fewer than 3 dimensions.
    """
    raw = [to_vec(p) for p in points]
    if raw and any(len(p) != 3 for p in raw):
        raise DegenerateInput("hull construction requires 3D points")
    pts = sorted(_dedupe(raw))
    pts = _remove_collinear_middles(pts)
    if len(pts) < 4:
        raise DegenerateInput("need at least 4 points spanning R^3")

    p0 = pts[0]
    p1 = pts[1]
    p2 = next((p for p in pts[2:] if not collinear(p0, p1, p)), None)
    if p2 is None:
        raise DegenerateInput("points are collinear")
    p3 = next((p for p in pts if orient(p0, p1, p2, p) != 0), None)
    if p3 is None:
        raise DegenerateInput("points are coplanar")

    hull = _TriangleHull(p0, p1, p2, p3)
    base = {p0, p1, p2, p3}
    for p in pts:
        if p not in base:
            hull.insert(p)

    # merge triangles into facets by exact supporting plane
    groups = {}
    for a, b, c in hull.faces.values():
        n = vcross(vsub(b, a), vsub(c, a))
        hs = canonical_halfspace(n, vdot(n, a))
        groups.setdefault((hs.normal, hs.offset), []).append((a, b, c))

    facet_list = []
    for key in sorted(groups):
        tris = groups[key]
        directed = set()
        for a, b, c in tris:
            for u, w in ((a, b), (b, c), (c, a)):
                directed.add((u, w))
        succ = {}
        for u, w in directed:
            if (w, u) not in directed:
                if u in succ:
                    raise DegenerateInput("facet boundary is not a cycle")
                succ[u] = w
        start = min(succ)
        cycle = [start]
        cur = succ[start]
        while cur != start:
            cycle.append(cur)
            cur = succ[cur]
        if len(cycle) != len(succ) or len(cycle) < 3:
            raise DegenerateInput("facet boundary walk failed")
        facet_list.append((HalfSpace(*key), tuple(cycle)))

    corner_set = sorted({p for _, cyc in facet_list for p in cyc})
    index = {p: i for i, p in enumerate(corner_set)}

    halfspaces = []
    polygons = []
    for hs, cyc in facet_list:
        halfspaces.append(hs)
        idx_cycle = tuple(index[p] for p in cyc)
        k = idx_cycle.index(min(idx_cycle))
        polygons.append(idx_cycle[k:] + idx_cycle[:k])

    edge_count = {}
    edge_facets = {}
    for j, poly in enumerate(polygons):
        m = len(poly)
        for t in range(m):
            e = tuple(sorted((poly[t], poly[(t + 1) % m])))
            edge_count[e] = edge_count.get(e, 0) + 1
            edge_facets.setdefault(e, []).append(j)
    if any(cnt != 2 for cnt in edge_count.values()):
        raise DegenerateInput("hull surface is not edge-2-regular")
    edges = tuple(sorted(edge_count))
    edge_active = tuple(frozenset(edge_facets[e]) for e in edges)

    vertex_active = []
    for i, p in enumerate(corner_set):
        vertex_active.append(
            frozenset(j for j, poly in enumerate(polygons) if i in poly)
        )

    # certification: every input point is inside, every facet supported
    for p in raw:
        for hs in halfspaces:
            if hs.value(p) > 0:
                raise DegenerateInput("hull certification failed: point outside")
    v, e, f = len(corner_set), len(edges), len(polygons)
    if v - e + f != 2:
        raise DegenerateInput("hull certification failed: Euler count")

    lattice = FaceLattice(
        vertices=tuple(corner_set),
        halfspaces=tuple(halfspaces),
        facet_polygons=tuple(polygons),
        edges=edges,
        vertex_active=tuple(vertex_active),
        edge_active=edge_active,
    )
    return list(halfspaces), lattice


def _facets_of(body_or_facets):
    facets = getattr(body_or_facets, "facets", body_or_facets)
    return list(facets)


def gauge(body, p) -> Fraction:
    """Minkowski functional of p with respect to the body's unit ball."""
    p = to_vec(p)
    best = Fraction(0)
    for hs in _facets_of(body):
        val = vdot(hs.normal, p) / hs.offset
        if val > best:
            best = val
    return best


def line_body_intersection(body, p, direction):
    """Clip the line p + t*direction against the body.

    Returns None when the line misses the body, otherwise the exact
    parameter interval (t_min, t_max); equal endpoints mean a touching
    point.  Raises ZeroDirection for a zero direction vector.
    """
    p = to_vec(p)
    direction = to_vec(direction)
    if is_zero_vec(direction):
        raise ZeroDirection("line direction must be nonzero")
    lo, hi = None, None
    for hs in _facets_of(body):
        alpha = vdot(hs.normal, direction)
        beta = hs.offset - vdot(hs.normal, p)
        if alpha == 0:
            if beta < 0:
                return None
        elif alpha > 0:
            t = beta / alpha
            if hi is None or t < hi:
                hi = t
        else:
            t = beta / alpha
            if lo is None or t > lo:
                lo = t
    if lo is None or hi is None:
        raise ValueError("line clipping requires a bounded body")
    if lo > hi:
        return None
    return (lo, hi)


def project_along(x, p) -> Vec:
    """Project p along direction x onto the plane through 0 orthogonal to x."""
    x = to_vec(x)
    p = to_vec(p)
    if is_zero_vec(x):
        raise ZeroDirection("projection direction must be nonzero")
    t = vdot(p, x) / vdot(x, x)
    return vsub(p, vsmul(t, x))


def drop_axis_coords(x, p):
    """2D coordinates of the image of p under the linear projection with
    kernel span(x) that drops the coordinate where |x| is largest."""
    x = to_vec(x)
    p = to_vec(p)
    k = max(range(3), key=lambda i: abs(x[i]))
    if x[k] == 0:
        raise ZeroDirection("projection direction must be nonzero")
    i, j = [t for t in range(3) if t != k]
    s = p[k] / x[k]
    return (p[i] - x[i] * s, p[j] - x[j] * s)


def cross2(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def hull_2d(points):
    """Monotone-chain hull of exact 2D points; returns the CCW corner cycle
    with collinear boundary points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross2(
                (out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]),
                (p[0] - out[-2][0], p[1] - out[-2][1]),
            ) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(list(reversed(pts)))
    return lower[:-1] + upper[:-1]
