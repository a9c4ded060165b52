"""Parameter spheres of a symmetric body: exact seam complexes.

For a direction x and value lam >= lambda_0 the sphere is the seam
bd K intersected with bd(K + x/lam), computed exactly as the union of all
facet-pair intersections between the body and its translate.  Each pair
cell is a face of the lens K (x/lam translate), so collecting the cells and
closing under boundaries yields a genuine polyhedral complex with no
refinement step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .body import SymmetricBody, build_symmetric, longitudinal_curve
from .errors import (
    CurveDegenerate,
    EmptyComplex,
    LambdaTooSmall,
    PointNotOnSphere,
    ZeroDirection,
)
from .kernel import (
    gauge,
    is_zero_vec,
    plane_key,
    to_vec,
    vadd,
    vcross,
    vdot,
    vneg,
    vsmul,
    vsub,
)
from .topology import CellComplex


@dataclass(frozen=True)
class ParameterSphere:
    lam: Fraction
    x: tuple
    complex: CellComplex
    degenerate: bool


@dataclass(frozen=True)
class CriticalSet:
    values: tuple  # sorted Fractions, starting at lambda_0

    def __iter__(self):
        return iter(self.values)

    def __contains__(self, lam):
        return Fraction(lam) in self.values


def lambda_zero(body: SymmetricBody, x) -> Fraction:
    """First contact value: the scaled body and its translate meet exactly
    when the translation vector has gauge at most twice the scale."""
    x = to_vec(x)
    if is_zero_vec(x):
        raise ZeroDirection("direction must be nonzero")
    return gauge(body, x) / 2


# -- exact facet-pair intersection machinery -------------------------------


def _polygon_ccw(poly, normal):
    """Reorient a planar polygon counterclockwise w.r.t. the given normal."""
    area = (0, 0, 0)
    base = poly[0]
    acc = (Fraction(0), Fraction(0), Fraction(0))
    for t in range(1, len(poly) - 1):
        tri = vcross(vsub(poly[t], base), vsub(poly[t + 1], base))
        acc = vadd(acc, tri)
    return poly if vdot(acc, normal) > 0 else tuple(reversed(poly))


def _clip_polygon_by_halfplane(poly, a, b, normal):
    """Sutherland-Hodgman step: keep the part of poly on the left of the
    directed in-plane line a -> b (left w.r.t. the plane normal)."""
    d = vsub(b, a)
    out = []
    n = len(poly)
    for t in range(n):
        p, q = poly[t], poly[(t + 1) % n]
        sp = vdot(vcross(d, vsub(p, a)), normal)
        sq = vdot(vcross(d, vsub(q, a)), normal)
        if sp >= 0:
            out.append(p)
        if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
            u = sp / (sp - sq)
            out.append(vadd(p, vsmul(u, vsub(q, p))))
    cleaned = []
    for p in out:
        if not cleaned or cleaned[-1] != p:
            cleaned.append(p)
    if len(cleaned) >= 2 and cleaned[0] == cleaned[-1]:
        cleaned.pop()
    return cleaned


def _coplanar_intersection(poly_a, poly_b, normal):
    """Intersection of two convex coplanar polygons (both CCW w.r.t. the
    normal).

    Returns ("polygon", cycle), ("segment", (p, q)), ("point", p) or None.
    """
    subject = list(poly_a)
    clipper = poly_b
    m = len(clipper)
    for t in range(m):
        subject = _clip_polygon_by_halfplane(
            subject, clipper[t], clipper[(t + 1) % m], normal)
        if not subject:
            return None
    distinct = []
    for p in subject:
        if p not in distinct:
            distinct.append(p)
    if len(distinct) == 1:
        return ("point", distinct[0])
    if len(distinct) == 2:
        return ("segment", (distinct[0], distinct[1]))
    base = distinct[0]
    direction = None
    for p in distinct[1:]:
        d = vsub(p, base)
        if not is_zero_vec(d):
            direction = d
            break
    flat = all(is_zero_vec(vcross(vsub(p, base), direction))
               for p in distinct)
    if flat:
        params = [vdot(vsub(p, base), direction) for p in distinct]
        lo = distinct[params.index(min(params))]
        hi = distinct[params.index(max(params))]
        if lo == hi:
            return ("point", lo)
        return ("segment", (lo, hi))
    return ("polygon", tuple(distinct))


def _line_of_planes(n1, c1, n2, c2):
    """A base point and direction of the intersection line of two planes."""
    d = vcross(n1, n2)
    if is_zero_vec(d):
        return None
    # solve n1.y = c1, n2.y = c2, e_k.y = 0 with k chosen so the system
    # is invertible
    for k in range(3):
        ek = tuple(Fraction(1 if i == k else 0) for i in range(3))
        det = vdot(n1, vcross(n2, ek))
        if det == 0:
            continue
        # Cramer on rows (n1, n2, ek), rhs (c1, c2, 0)
        rows = (n1, n2, ek)
        rhs = (c1, c2, Fraction(0))
        cols = []
        for j in range(3):
            mat = []
            for r in range(3):
                row = list(rows[r])
                row[j] = rhs[r]
                mat.append(tuple(row))
            cols.append(vdot(mat[0], vcross(mat[1], mat[2])) / det)
        return tuple(cols), d
    return None


def _clip_line_to_polygon(base, direction, poly, normal):
    """Exact parameter interval of the line base + t*direction inside the
    convex polygon (CCW w.r.t. the normal, line in the polygon's plane)."""
    lo, hi = None, None
    m = len(poly)
    for t in range(m):
        a, b = poly[t], poly[(t + 1) % m]
        e = vsub(b, a)
        # inside: cross(e, p - a) . normal >= 0, linear in the parameter
        g0 = vdot(vcross(e, vsub(base, a)), normal)
        g1 = vdot(vcross(e, direction), normal)
        if g1 == 0:
            if g0 < 0:
                return None
        elif g1 > 0:
            t0 = -g0 / g1
            if lo is None or t0 > lo:
                lo = t0
        else:
            t0 = -g0 / g1
            if hi is None or t0 < hi:
                hi = t0
    if lo is None or hi is None:
        return None
    if lo > hi:
        return None
    return lo, hi


def _bbox(poly):
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    zs = [p[2] for p in poly]
    return (min(xs), max(xs), min(ys), max(ys), min(zs), max(zs))


def _bbox_disjoint(a, b) -> bool:
    return (a[1] < b[0] or b[1] < a[0]
            or a[3] < b[2] or b[3] < a[2]
            or a[5] < b[4] or b[5] < a[4])


def gamma_complex(body: SymmetricBody, x, lam) -> ParameterSphere:
    """Exact seam complex bd K meet bd(K + x/lam).

    Raises LambdaTooSmall below the first contact value; the sphere at the
    contact value itself is flagged degenerate.
    """
    x = to_vec(x)
    lam = Fraction(lam)
    lam0 = lambda_zero(body, x)
    if lam < lam0:
        raise LambdaTooSmall(f"lambda {lam} below first contact {lam0}")
    v = vsmul(1 / lam, x)

    lat = body.lattice
    halfspaces = lat.halfspaces
    polys = [
        _polygon_ccw(tuple(lat.vertices[i] for i in cyc), hs.normal)
        for cyc, hs in zip(lat.facet_polygons, halfspaces)
    ]
    boxes = [_bbox(p) for p in polys]
    shifted_boxes = [
        (b[0] + v[0], b[1] + v[0], b[2] + v[1], b[3] + v[1],
         b[4] + v[2], b[5] + v[2])
        for b in boxes
    ]

    points, segments, polygons = [], [], []
    for ia, hs_a in enumerate(halfspaces):
        pa = polys[ia]
        ka = plane_key(hs_a.normal, hs_a.offset)
        for ib, hs_b in enumerate(halfspaces):
            if _bbox_disjoint(boxes[ia], shifted_boxes[ib]):
                continue
            pb = tuple(vadd(p, v) for p in polys[ib])
            cb = hs_b.offset + vdot(hs_b.normal, v)
            kb = plane_key(hs_b.normal, cb)
            if ka == kb:
                # pb is CCW w.r.t. hs_b; flip when the orientations oppose
                clipper = pb if vdot(hs_a.normal, hs_b.normal) > 0 \
                    else tuple(reversed(pb))
                cell = _coplanar_intersection(pa, clipper, hs_a.normal)
                if cell is None:
                    continue
                kind, data = cell
                if kind == "point":
                    points.append(data)
                elif kind == "segment":
                    segments.append(data)
                else:
                    polygons.append(data)
            else:
                line = _line_of_planes(hs_a.normal, hs_a.offset,
                                       hs_b.normal, cb)
                if line is None:
                    continue
                base, direction = line
                span_a = _clip_line_to_polygon(base, direction, pa,
                                               hs_a.normal)
                if span_a is None:
                    continue
                span_b = _clip_line_to_polygon(base, direction, pb,
                                               hs_b.normal)
                if span_b is None:
                    continue
                lo = max(span_a[0], span_b[0])
                hi = min(span_a[1], span_b[1])
                if lo > hi:
                    continue
                p0 = vadd(base, vsmul(lo, direction))
                p1 = vadd(base, vsmul(hi, direction))
                if p0 == p1:
                    points.append(p0)
                else:
                    segments.append((p0, p1))

    cx = CellComplex.build(points=points, segments=segments,
                           polygons=polygons)
    return ParameterSphere(lam=lam, x=x, complex=cx, degenerate=lam == lam0)


def gamma_as_shadow_oracle(body: SymmetricBody, x, lam):
    """Independent route: build the lens K meet (K + x/lam) as a body
    recentred at its own center and decompose its shadow.

    Returns the ShadowDecomposition of the recentred lens; the seam equals
    the decomposition's shadow complex translated by x/(2 lam).
    """
    from .shadow import decompose

    x = to_vec(x)
    lam = Fraction(lam)
    lam0 = lambda_zero(body, x)
    if lam <= lam0:
        raise LambdaTooSmall(
            f"lens body needs lambda above first contact {lam0}")
    v = vsmul(1 / lam, x)
    center = vsmul(Fraction(1, 2), v)

    candidates = []
    for w in body.vertices:
        if gauge(body, vsub(w, v)) <= 1:
            candidates.append(w)
        wv = vadd(w, v)
        if gauge(body, wv) <= 1:
            candidates.append(wv)
    seam = gamma_complex(body, x, lam)
    candidates.extend(seam.complex.vertices)

    lens = build_symmetric([vsub(p, center) for p in candidates],
                           symmetrize=False,
                           name=f"lens({body.name},{lam})")
    return decompose(lens, x)


def oracle_shadow_matches(body: SymmetricBody, x, lam) -> bool:
    """Exact cell-set equality of the seam and the lens shadow complex."""
    x = to_vec(x)
    lam = Fraction(lam)
    seam = gamma_complex(body, x, lam)
    decomp = gamma_as_shadow_oracle(body, x, lam)
    center = vsmul(Fraction(1, 2 * lam), x)
    return decomp.shadow_complex.translate(center) == seam.complex


def critical_lambdas(body: SymmetricBody, x, lambda_max) -> CriticalSet:
    """Values in (lambda_0, lambda_max] where a vertex of either the body
    or its translate crosses the other boundary, solved per facet as a
    linear equation in 1/lambda and verified by an exact gauge evaluation.
    Always contains lambda_0."""
    x = to_vec(x)
    lambda_max = Fraction(lambda_max)
    lam0 = lambda_zero(body, x)
    found = {lam0}
    for w in body.vertices:
        for sgn in (1, -1):
            for hs in body.facets:
                ax = vdot(hs.normal, x)
                if ax == 0:
                    continue
                # normal.(w + sgn*x/lam) = offset
                inv = (hs.offset - vdot(hs.normal, w)) / (sgn * ax)
                if inv <= 0:
                    continue
                lam = 1 / inv
                if lam < lam0 or lam > lambda_max:
                    continue
                p = vadd(w, vsmul(Fraction(sgn) / lam, x))
                if gauge(body, p) == 1:
                    found.add(lam)
    return CriticalSet(tuple(sorted(found)))


# -- sampled Hausdorff distance -------------------------------------------


def _sample_complex(c: CellComplex, density: float):
    pts = [tuple(float(x) for x in p) for p in c.vertices]
    for a, b in c.edge_points():
        fa = np.array([float(x) for x in a])
        fb = np.array([float(x) for x in b])
        length = float(np.linalg.norm(fb - fa))
        k = max(1, int(np.ceil(length * density)))
        for t in range(1, k):
            pts.append(tuple(fa + (fb - fa) * (t / k)))
    for poly in c.polygon_points():
        qs = [np.array([float(x) for x in p]) for p in poly]
        base = qs[0]
        for t in range(1, len(qs) - 1):
            a, b = qs[t], qs[t + 1]
            side = max(np.linalg.norm(a - base), np.linalg.norm(b - base),
                       np.linalg.norm(b - a))
            k = max(1, int(np.ceil(side * density)))
            for i in range(k + 1):
                for j in range(k + 1 - i):
                    u, w = i / k, j / k
                    pts.append(tuple(base + u * (a - base) + w * (b - base)))
    return np.array(pts, dtype=float)


def _dist_points_to_segments(pts, segs):
    a = segs[:, 0, :][None, :, :]
    b = segs[:, 1, :][None, :, :]
    p = pts[:, None, :]
    ab = b - a
    denom = np.maximum((ab * ab).sum(-1), 1e-300)
    t = ((p - a) * ab).sum(-1) / denom
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[..., None] * ab
    d = np.linalg.norm(p - proj, axis=-1)
    return d.min(axis=1)


def _dist_points_to_triangles(pts, tris):
    a, b, c = tris[:, 0, :], tris[:, 1, :], tris[:, 2, :]
    n = np.cross(b - a, c - a)
    nn = np.maximum((n * n).sum(-1), 1e-300)
    p = pts[:, None, :]
    ap = p - a[None, :, :]
    dist_plane = (ap * n[None, :, :]).sum(-1) / np.sqrt(nn)[None, :]
    proj = p - dist_plane[..., None] * (n / np.sqrt(nn)[..., None])[None, :, :]

    def edge_ok(u, v):
        uv = v - u
        s = np.cross(uv[None, :, :], proj - u[None, :, :])
        return (s * n[None, :, :]).sum(-1) >= -1e-12

    inside = edge_ok(a, b) & edge_ok(b, c) & edge_ok(c, a)
    d_in = np.where(inside, np.abs(dist_plane), np.inf)
    segs = np.stack([np.stack([a, b], 1), np.stack([b, c], 1),
                     np.stack([c, a], 1)], 0)
    d_edges = np.min(
        np.stack([_seg_dist_block(pts, segs[k]) for k in range(3)], 0), 0)
    return np.minimum(d_in.min(axis=1), d_edges)


def _seg_dist_block(pts, seg_pair):
    a = seg_pair[:, 0, :][None, :, :]
    b = seg_pair[:, 1, :][None, :, :]
    p = pts[:, None, :]
    ab = b - a
    denom = np.maximum((ab * ab).sum(-1), 1e-300)
    t = np.clip(((p - a) * ab).sum(-1) / denom, 0.0, 1.0)
    proj = a + t[..., None] * ab
    return np.linalg.norm(p - proj, axis=-1).min(axis=1)


def _one_sided(samples, target: CellComplex):
    best = np.full(len(samples), np.inf)
    if target.vertices:
        tv = np.array([[float(x) for x in p] for p in target.vertices])
        d = np.linalg.norm(samples[:, None, :] - tv[None, :, :], axis=-1)
        best = np.minimum(best, d.min(axis=1))
    segs = [(a, b) for a, b in target.edge_points()]
    if segs:
        arr = np.array([[[float(x) for x in a], [float(x) for x in b]]
                        for a, b in segs])
        best = np.minimum(best, _dist_points_to_segments(samples, arr))
    tris = []
    for poly in target.polygon_points():
        qs = [[float(x) for x in p] for p in poly]
        for t in range(1, len(qs) - 1):
            tris.append([qs[0], qs[t], qs[t + 1]])
    if tris:
        best = np.minimum(
            best, _dist_points_to_triangles(samples, np.array(tris)))
    return float(best.max()) if len(best) else 0.0


def hausdorff_distance(a: CellComplex, b: CellComplex,
                       density: float = 64.0) -> float:
    """Sampled symmetric Hausdorff distance between two complexes.

    Samples are taken on the cells of each side at roughly `density`
    points per unit length (density^2 per unit area) and measured against
    the exact cells of the other side, so the result underestimates the
    true distance by at most about 1/(2*density).
    """
    if a.is_empty or b.is_empty:
        raise EmptyComplex("hausdorff distance requires nonempty complexes")
    if density <= 0:
        raise ValueError("density must be positive")
    sa = _sample_complex(a, density)
    sb = _sample_complex(b, density)
    return max(_one_sided(sa, b), _one_sided(sb, a))


# -- bounding maps ---------------------------------------------------------


def _axis_side_functional(x, p):
    """In-plane normal of the axis line span(x) within the section plane
    through x and p; positive on p's side."""
    x = to_vec(x)
    p = to_vec(p)
    t = vdot(p, x) / vdot(x, x)
    return vsub(p, vsmul(t, x))


def _seam_on_section(body, x, lam, section):
    """Component arcs of the seam on a longitudinal section polygon.

    Returns a list of components; each is a list of exact points forming
    a point (length 1) or a polyline (>= 2 points).
    """
    v = vsmul(Fraction(1) / Fraction(lam), to_vec(x))
    n = len(section)
    pieces = []  # (edge_index, t_lo, t_hi) with t in [0, 1]
    for t in range(n):
        a, b = section[t], section[(t + 1) % n]
        d = vsub(b, a)
        base = vsub(a, v)
        from .kernel import line_body_intersection
        span = line_body_intersection(body, base, d)
        if span is None:
            continue
        lo, hi = max(span[0], Fraction(0)), min(span[1], Fraction(1))
        if lo > hi:
            continue
        pa, pb = vadd(base, vsmul(lo, d)), vadd(base, vsmul(hi, d))
        on_boundary_whole = False
        if lo < hi:
            for hs in body.facets:
                if hs.value(pa) == 0 and hs.value(pb) == 0:
                    on_boundary_whole = True
                    break
        if on_boundary_whole:
            pieces.append((t, lo, hi))
        else:
            for tt in (lo, hi):
                if tt == span[0] or tt == span[1]:
                    pieces.append((t, tt, tt))

    # materialize and merge pieces sharing endpoints
    raw = []
    for t, lo, hi in pieces:
        a, b = section[t], section[(t + 1) % n]
        p0 = vadd(a, vsmul(lo, vsub(b, a)))
        p1 = vadd(a, vsmul(hi, vsub(b, a)))
        raw.append([p0] if p0 == p1 else [p0, p1])
    merged = True
    while merged:
        merged = False
        for i in range(len(raw)):
            for j in range(i + 1, len(raw)):
                c = _join_polylines(raw[i], raw[j])
                if c is not None:
                    raw[i] = c
                    raw.pop(j)
                    merged = True
                    break
            if merged:
                break
    return raw


def _join_polylines(u, w):
    su, eu = u[0], u[-1]
    sw, ew = w[0], w[-1]
    if len(u) == 1 and len(w) == 1:
        return u if su == sw else None
    if len(u) == 1:
        return w if su in (sw, ew) else None
    if len(w) == 1:
        return u if sw in (su, eu) else None
    if eu == sw:
        return u + w[1:]
    if eu == ew:
        return u + list(reversed(w[:-1]))
    if su == ew:
        return w + u[1:]
    if su == sw:
        return list(reversed(w))[:-1] + u
    return None


def bounding_map(body: SymmetricBody, x, lam, mu, p):
    """Retract a point of the mu-sphere onto the lam-sphere along its
    longitudinal curve (lambda_0 < lam < mu).

    The seam meets the section in one component on each side of the axis;
    the image is that component when it is a point, p itself when the
    component is a segment containing p, and otherwise the component's end
    of smaller parameter in the direction x.
    """
    x = to_vec(x)
    lam, mu = Fraction(lam), Fraction(mu)
    p = to_vec(p)
    lam0 = lambda_zero(body, x)
    if not (lam0 < lam < mu):
        raise LambdaTooSmall("need lambda_0 < lam < mu")
    if gauge(body, p) != 1 or gauge(body, vsub(p, vsmul(1 / mu, x))) != 1:
        raise PointNotOnSphere(f"{p} is not on the {mu}-sphere")
    if is_zero_vec(vcross(x, p)):
        raise CurveDegenerate("point lies on the axis span(x)")

    section = longitudinal_curve(body, x, p)
    comps = _seam_on_section(body, x, lam, section)
    side_vec = _axis_side_functional(x, p)
    mine = []
    for comp in comps:
        sides = [vdot(q, side_vec) for q in comp]
        if all(s > 0 for s in sides):
            mine.append(comp)
    if len(mine) != 1:
        raise PointNotOnSphere(
            f"expected one seam component on the point's side, got {len(mine)}")
    comp = mine[0]
    if len(comp) == 1:
        return comp[0]
    if _polyline_contains(comp, p):
        return p
    xx = vdot(x, x)
    taus = [(vdot(q, x) / xx, q) for q in (comp[0], comp[-1])]
    taus.sort(key=lambda tq: (tq[0], tq[1]))
    return taus[0][1]


def _polyline_contains(comp, p):
    for a, b in zip(comp, comp[1:]):
        d = vsub(b, a)
        w = vsub(p, a)
        if not is_zero_vec(vcross(d, w)):
            continue
        t_num, t_den = vdot(w, d), vdot(d, d)
        if 0 <= t_num <= t_den:
            return True
    return False


def sphere_sample_points(sphere: ParameterSphere, count: int):
    """Up to `count` exact points on the sphere, preferring vertices and
    then edge midpoints."""
    pts = list(sphere.complex.vertices)
    if len(pts) < count:
        for a, b in sphere.complex.edge_points():
            pts.append(vsmul(Fraction(1, 2), vadd(a, b)))
            if len(pts) >= count:
                break
    return pts[:count]
