"""Shadow boundary decomposition under parallel illumination.

Faces are labeled from the signs of active facet dot products with the
light direction: a face is lit (PLUS) when every supporting facet faces
the light strictly, dark (MINUS) in the mirrored case, and SHADOW
otherwise.  The pointwise supporting-line test is kept out of the
production path; it lives in the test suite as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .body import PolePair, SymmetricBody, poles
from .errors import ZeroDirection
from .kernel import (
    cross2,
    drop_axis_coords,
    hull_2d,
    is_zero_vec,
    line_body_intersection,
    to_vec,
    vadd,
    vdot,
    vsmul,
    vsub,
)
from .topology import CellComplex

PLUS = "plus"
MINUS = "minus"
SHADOW = "shadow"


@dataclass(frozen=True)
class ShadowDecomposition:
    body: SymmetricBody
    x: tuple
    labels: dict                      # (dim, index) -> label
    shadow_complex: CellComplex
    sharp: bool
    sharp_subcomplex: CellComplex
    nonsharp_witness: tuple | None    # ((dim, index), (point_a, point_b))
    plus_boundary: CellComplex
    minus_boundary: CellComplex
    poles: PolePair


def _label_from_dots(dots):
    if all(d > 0 for d in dots):
        return PLUS
    if all(d < 0 for d in dots):
        return MINUS
    return SHADOW


def _face_cell(lattice, face):
    dim, _ = face
    pts = lattice.face_points(face)
    if dim == 0:
        return ("point", pts[0])
    if dim == 1:
        return ("segment", pts)
    return ("polygon", pts)


def _complex_of(lattice, faces):
    points, segments, polygons = [], [], []
    for face in faces:
        kind, data = _face_cell(lattice, face)
        if kind == "point":
            points.append(data)
        elif kind == "segment":
            segments.append(data)
        else:
            polygons.append(data)
    return CellComplex.build(points=points, segments=segments,
                             polygons=polygons)


def decompose(body: SymmetricBody, x) -> ShadowDecomposition:
    """Label every face of the boundary and assemble the shadow complex,
    its sharp part, and the frontiers of the lit and dark caps."""
    x = to_vec(x)
    if is_zero_vec(x):
        raise ZeroDirection("light direction must be nonzero")
    lat = body.lattice
    facet_dot = [vdot(hs.normal, x) for hs in lat.halfspaces]

    labels = {}
    for face in lat.faces():
        dots = [facet_dot[j] for j in lat.face_active(face)]
        labels[face] = _label_from_dots(dots)

    shadow_faces = [f for f, lab in labels.items() if lab == SHADOW]
    shadow_complex = _complex_of(lat, shadow_faces)

    sharp, sharp_sub, witness = sharpness_from_labels(body, x, labels)
    plus_b = positive_closure_boundary_from_labels(body, x, positive=True)
    minus_b = positive_closure_boundary_from_labels(body, x, positive=False)

    return ShadowDecomposition(
        body=body,
        x=x,
        labels=labels,
        shadow_complex=shadow_complex,
        sharp=sharp,
        sharp_subcomplex=sharp_sub,
        nonsharp_witness=witness,
        plus_boundary=plus_b,
        minus_boundary=minus_b,
        poles=poles(body, x),
    )


def sharpness_from_labels(body: SymmetricBody, x, labels):
    """Sharp faces are shadow faces whose active dot set contains both a
    strictly positive and a strictly negative value: there the supporting
    line meets the body in a single point."""
    lat = body.lattice
    facet_dot = [vdot(hs.normal, x) for hs in lat.halfspaces]
    sharp_faces = []
    witness = None
    all_sharp = True
    for face, lab in sorted(labels.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
        if lab != SHADOW:
            continue
        dots = [facet_dot[j] for j in lat.face_active(face)]
        if any(d > 0 for d in dots) and any(d < 0 for d in dots):
            sharp_faces.append(face)
        else:
            all_sharp = False
            if witness is None:
                bary = lat.face_barycenter(face)
                seg = line_body_intersection(body, bary, x)
                lo, hi = seg
                pa = vadd(bary, vsmul(lo, x))
                pb = vadd(bary, vsmul(hi, x))
                witness = (face, (pa, pb))
    sharp_sub = _complex_of(lat, sharp_faces)
    return all_sharp, sharp_sub, witness


def sharpness(decomp: ShadowDecomposition):
    """(sharp flag, sharp subcomplex, witness) of a decomposition."""
    return decomp.sharp, decomp.sharp_subcomplex, decomp.nonsharp_witness


def positive_closure_boundary_from_labels(body, x, positive=True) -> CellComplex:
    """Frontier of the closure of the lit cap (dark cap when positive is
    False): faces whose active set meets both {dot > 0} and {dot <= 0}."""
    x = to_vec(x)
    lat = body.lattice
    facet_dot = [vdot(hs.normal, x) for hs in lat.halfspaces]
    if not positive:
        facet_dot = [-d for d in facet_dot]
    faces = []
    for face in lat.faces():
        dots = [facet_dot[j] for j in lat.face_active(face)]
        if any(d > 0 for d in dots) and any(d <= 0 for d in dots):
            faces.append(face)
    return _complex_of(lat, faces)


def positive_closure_boundary(decomp: ShadowDecomposition) -> CellComplex:
    return decomp.plus_boundary


def separation_components(body: SymmetricBody, sub: CellComplex) -> int:
    """Components of the boundary faces outside `sub`, adjacent through
    shared faces that are themselves outside `sub`."""
    lat = body.lattice
    sub_cells = _subcomplex_face_keys(sub)

    def in_sub(face):
        dim, _ = face
        pts = lat.face_points(face)
        if dim == 0:
            return ("point", pts[0]) in sub_cells
        if dim == 1:
            return ("segment", frozenset(pts)) in sub_cells
        return ("polygon", frozenset(pts)) in sub_cells

    outside = [f for f in lat.faces() if not in_sub(f)]
    index = {f: i for i, f in enumerate(outside)}
    parent = list(range(len(outside)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    # incidence pairs: facet > edge and edge > vertex
    for k, e in enumerate(lat.edges):
        eface = (1, k)
        if eface not in index:
            continue
        for j in lat.edge_active[k]:
            fface = (2, j)
            if fface in index:
                union(index[eface], index[fface])
        for vi in e:
            vface = (0, vi)
            if vface in index:
                union(index[eface], index[vface])
    # vertex on facet without going through an edge (safety: corner contact)
    for i in range(len(lat.vertices)):
        vface = (0, i)
        if vface not in index:
            continue
        for j in lat.vertex_active[i]:
            fface = (2, j)
            if fface in index:
                union(index[vface], index[fface])

    return len({find(i) for i in range(len(outside))})


def _subcomplex_face_keys(sub: CellComplex):
    keys = set()
    for p in sub.vertices:
        keys.add(("point", p))
    for a, b in sub.edge_points():
        keys.add(("segment", frozenset((a, b))))
    for poly in sub.polygon_points():
        keys.add(("polygon", frozenset(poly)))
    return keys


def projection_check(decomp: ShadowDecomposition, complex_=None) -> bool:
    """True iff the image of the complex under the projection along x
    covers exactly the boundary of the projected body.

    Defaults to the shadow complex, for which the covering holds; feeding
    the lit faces instead makes it fail.
    """
    body, x = decomp.body, decomp.x
    if complex_ is None:
        complex_ = decomp.shadow_complex

    proj_body = [drop_axis_coords(x, v) for v in body.vertices]
    hull = hull_2d(proj_body)
    m = len(hull)
    hull_edges = [(hull[t], hull[(t + 1) % m]) for t in range(m)]

    def on_boundary(q):
        return any(_on_edge(q, a, b) for a, b in hull_edges)

    # collect projected cells of the complex as points and segments
    proj_points = [drop_axis_coords(x, p) for p in complex_.vertices]
    proj_segments = []
    for a, b in complex_.edge_points():
        proj_segments.append((drop_axis_coords(x, a), drop_axis_coords(x, b)))
    for poly in complex_.polygon_points():
        qs = [drop_axis_coords(x, p) for p in poly]
        base, direction = qs[0], None
        for q in qs[1:]:
            d = vsub2(q, qs[0])
            if d != (0, 0):
                direction = d
                break
        if direction is None:
            continue
        # image must be a segment: all corners collinear
        for q in qs:
            if cross2(vsub2(q, base), direction) != 0:
                return False
        params = [_param_1d(base, direction, q) for q in qs]
        lo, hi = min(params), max(params)
        proj_segments.append((
            vadd2(base, smul2(lo, direction)),
            vadd2(base, smul2(hi, direction)),
        ))

    for q in proj_points:
        if not on_boundary(q):
            return False
    for a, b in proj_segments:
        if not any(_on_edge(a, u, w) and _on_edge(b, u, w)
                   for u, w in hull_edges):
            return False

    # coverage: each hull edge must be covered by projected segments
    for u, w in hull_edges:
        d = vsub2(w, u)
        intervals = []
        for a, b in proj_segments:
            if _on_line(a, u, w) and _on_line(b, u, w):
                ta, tb = _param_1d(u, d, a), _param_1d(u, d, b)
                lo, hi = min(ta, tb), max(ta, tb)
                hi = min(hi, Fraction(1))
                lo = max(lo, Fraction(0))
                if lo <= hi:
                    intervals.append((lo, hi))
        intervals.sort()
        reach = Fraction(0)
        for lo, hi in intervals:
            if lo > reach:
                return False
            reach = max(reach, hi)
        if reach < 1:
            return False
    return True


def vsub2(a, b):
    return (a[0] - b[0], a[1] - b[1])


def vadd2(a, b):
    return (a[0] + b[0], a[1] + b[1])


def smul2(c, a):
    return (c * a[0], c * a[1])


def _on_line(q, a, b):
    return cross2(vsub2(b, a), vsub2(q, a)) == 0


def _on_edge(q, a, b):
    if not _on_line(q, a, b):
        return False
    d = vsub2(b, a)
    t = _param_1d(a, d, q)
    return 0 <= t <= 1


def _param_1d(base, direction, q):
    num = vsub2(q, base)
    den = direction[0] * direction[0] + direction[1] * direction[1]
    return (num[0] * direction[0] + num[1] * direction[1]) / den


# -- independent pointwise oracle (used by the verification suite) --------


def face_label_oracle(body: SymmetricBody, x, face) -> str:
    """Label a face from the supporting-line definition at its barycenter.

    SHADOW when the line through the barycenter in direction x misses the
    interior; PLUS when stepping against the light by a small exact amount
    lands inside; MINUS in the mirrored case.
    """
    x = to_vec(x)
    lat = body.lattice
    bary = lat.face_barycenter(face)
    active = lat.face_active(face)
    slacks = [hs.offset - vdot(hs.normal, bary)
              for j, hs in enumerate(lat.halfspaces) if j not in active]
    rates = [abs(vdot(hs.normal, x)) for hs in lat.halfspaces]
    max_rate = max(rates)
    min_slack = min(slacks) if slacks else Fraction(1)
    tau = min_slack / (2 * max_rate) if max_rate > 0 else Fraction(1)

    def strictly_inside(p):
        return all(hs.value(p) < 0 for hs in body.facets)

    if strictly_inside(vsub(bary, vsmul(tau, x))):
        return PLUS
    if strictly_inside(vadd(bary, vsmul(tau, x))):
        return MINUS
    return SHADOW


def report_dict(decomp: ShadowDecomposition) -> dict:
    """JSON-ready report: per-face labels, sharpness, boundary cycles."""
    from .body import rational_str
    lat = decomp.body.lattice
    faces = []
    for face in lat.faces():
        dim, i = face
        faces.append({
            "face": f"{('v','e','f')[dim]}{i}",
            "dim": dim,
            "vertex_ids": list(lat.face_vertex_indices(face)),
            "label": decomp.labels[face],
        })
    return {
        "direction": [rational_str(c) for c in decomp.x],
        "faces": faces,
        "sharp": decomp.sharp,
        "sharp_points": [[rational_str(c) for c in p]
                         for p in decomp.sharp_subcomplex.vertices],
        "shadow_vertex_count": len(decomp.shadow_complex.vertices),
        "shadow_edge_count": len(decomp.shadow_complex.edges),
        "shadow_cell_count": len(decomp.shadow_complex.cells2),
        "plus_boundary_vertices": [[rational_str(c) for c in p]
                                   for p in decomp.plus_boundary.vertices],
        "minus_boundary_vertices": [[rational_str(c) for c in p]
                                    for p in decomp.minus_boundary.vertices],
    }
