"""Embedded polyhedral cell complexes and their combinatorial topology.

A CellComplex stores exact vertices, edges, and planar polygon cells.
Classification (circle, annulus, sphere, ...) is purely combinatorial:
connectivity, Euler characteristic, vertex links, and boundary structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyComplex
from .kernel import (
    is_zero_vec,
    to_vec,
    vadd,
    vcross,
    vdot,
    vsmul,
    vsub,
)

# classification constants
EMPTY = "empty"
POINT = "point"
SEGMENT = "segment"
DEGENERATE_CELL_2 = "degenerate-cell-2"
CIRCLE = "circle"
ANNULUS = "annulus"
DISK = "disk"
SPHERE_2 = "sphere"
NON_MANIFOLD = "non-manifold"
OTHER = "other"


def _canonical_cycle(cycle):
    """Lexicographically smallest rotation over both orientations."""
    best = None
    seqs = [tuple(cycle), tuple(reversed(cycle))]
    for seq in seqs:
        n = len(seq)
        for k in range(n):
            cand = seq[k:] + seq[:k]
            if best is None or cand < best:
                best = cand
    return best


@dataclass(frozen=True)
class CellComplex:
    """Finite polyhedral complex with exact rational geometry.

    vertices: sorted tuple of coordinate tuples
    edges:    sorted tuple of (i, j) index pairs, i < j
    cells2:   sorted tuple of canonical polygon corner cycles (index tuples)

    Every boundary edge of a polygon is present in ``edges`` and every edge
    endpoint in ``vertices`` (closure property, enforced by ``build``).
    """

    vertices: tuple
    edges: tuple
    cells2: tuple

    @staticmethod
    def empty() -> "CellComplex":
        return CellComplex((), (), ())

    @staticmethod
    def build(points=(), segments=(), polygons=()) -> "CellComplex":
        """Assemble a complex from exact geometric cells, deduplicating and
        taking the subcell closure."""
        vmap = {}

        def vid(p):
            p = to_vec(p)
            if p not in vmap:
                vmap[p] = len(vmap)
            return vmap[p]

        edge_set = set()
        poly_set = set()
        for p in points:
            vid(p)
        for a, b in segments:
            ia, ib = vid(a), vid(b)
            if ia == ib:
                continue
            edge_set.add((min(ia, ib), max(ia, ib)))
        for poly in polygons:
            ids = []
            for p in poly:
                i = vid(p)
                if not ids or ids[-1] != i:
                    ids.append(i)
            if len(ids) >= 2 and ids[0] == ids[-1]:
                ids.pop()
            if len(ids) < 3:
                # degenerate polygon collapses to its 1-skeleton
                if len(ids) == 2:
                    edge_set.add((min(ids), max(ids)))
                continue
            pts = [to_vec(p) for p in poly]
            _check_planar(pts)
            poly_set.add(_canonical_cycle(ids))
            m = len(ids)
            for t in range(m):
                a, b = ids[t], ids[(t + 1) % m]
                edge_set.add((min(a, b), max(a, b)))

        # renumber vertices in sorted coordinate order
        coords = sorted(vmap)
        renum = {vmap[p]: i for i, p in enumerate(coords)}
        edges = sorted((min(renum[a], renum[b]), max(renum[a], renum[b]))
                       for a, b in edge_set)
        cells2 = sorted(_canonical_cycle([renum[i] for i in cyc])
                        for cyc in poly_set)
        return CellComplex(tuple(coords), tuple(edges), tuple(cells2))

    # -- basic queries ----------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def max_dim(self) -> int:
        if self.cells2:
            return 2
        if self.edges:
            return 1
        if self.vertices:
            return 0
        return -1

    def vertex_points(self):
        return self.vertices

    def edge_points(self):
        return tuple(
            (self.vertices[i], self.vertices[j]) for i, j in self.edges
        )

    def polygon_points(self):
        return tuple(
            tuple(self.vertices[i] for i in cyc) for cyc in self.cells2
        )

    # -- geometric transforms ---------------------------------------------

    def translate(self, v) -> "CellComplex":
        v = to_vec(v)
        return CellComplex.build(
            points=[vadd(p, v) for p in self.vertices],
            segments=[(vadd(a, v), vadd(b, v)) for a, b in self.edge_points()],
            polygons=[tuple(vadd(p, v) for p in poly)
                      for poly in self.polygon_points()],
        )

    def scale(self, c) -> "CellComplex":
        c = Fraction(c)
        return CellComplex.build(
            points=[vsmul(c, p) for p in self.vertices],
            segments=[(vsmul(c, a), vsmul(c, b)) for a, b in self.edge_points()],
            polygons=[tuple(vsmul(c, p) for p in poly)
                      for poly in self.polygon_points()],
        )

    def point_reflect(self, center) -> "CellComplex":
        """Image under y -> 2*center - y."""
        c2 = vsmul(Fraction(2), to_vec(center))
        return CellComplex.build(
            points=[vsub(c2, p) for p in self.vertices],
            segments=[(vsub(c2, a), vsub(c2, b)) for a, b in self.edge_points()],
            polygons=[tuple(vsub(c2, p) for p in poly)
                      for poly in self.polygon_points()],
        )


def _check_planar(pts):
    normal = None
    for i in range(1, len(pts) - 1):
        n = vcross(vsub(pts[i], pts[0]), vsub(pts[i + 1], pts[0]))
        if not is_zero_vec(n):
            normal = n
            break
    if normal is None:
        raise ValueError("polygon is degenerate")
    c = vdot(normal, pts[0])
    for p in pts:
        if vdot(normal, p) != c:
            raise ValueError("polygon is not planar")


def connected_components(c: CellComplex):
    """Number of components under shared-vertex adjacency, plus the vertex
    partition as a list of component labels."""
    n = len(c.vertices)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i, j in c.edges:
        union(i, j)
    for cyc in c.cells2:
        for t in range(1, len(cyc)):
            union(cyc[0], cyc[t])
    labels = [find(i) for i in range(n)]
    roots = sorted(set(labels))
    remap = {r: k for k, r in enumerate(roots)}
    return len(roots), [remap[l] for l in labels]


def euler_characteristic(c: CellComplex) -> int:
    return len(c.vertices) - len(c.edges) + len(c.cells2)


@dataclass(frozen=True)
class ManifoldVerdict:
    kind: str            # "manifold" | "with-boundary" | "non-manifold"
    dim: int | None
    witness: tuple | None = None   # ("vertex", i) or ("edge", (i, j)) ...
    detail: str = ""

    @property
    def is_manifold(self) -> bool:
        return self.kind == "manifold"

    @property
    def has_boundary(self) -> bool:
        return self.kind == "with-boundary"


def _edge_polygon_incidence(c: CellComplex):
    inc = {e: [] for e in c.edges}
    for k, cyc in enumerate(c.cells2):
        m = len(cyc)
        for t in range(m):
            e = (min(cyc[t], cyc[(t + 1) % m]), max(cyc[t], cyc[(t + 1) % m]))
            inc[e].append(k)
    return inc


def vertex_link_components(c: CellComplex, v: int):
    """Link structure of vertex v in a 2-complex.

    Returns (n_components, closed) where the link graph has the incident
    edges as nodes and one arc per polygon corner at v; closed means every
    node has degree 2 (the link is a disjoint union of circles).
    """
    nodes = [e for e in c.edges if v in e]
    idx = {e: i for i, e in enumerate(nodes)}
    deg = [0] * len(nodes)
    parent = list(range(len(nodes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for cyc in c.cells2:
        if v not in cyc:
            continue
        m = len(cyc)
        t = cyc.index(v)
        prev_v, next_v = cyc[(t - 1) % m], cyc[(t + 1) % m]
        e1 = (min(v, prev_v), max(v, prev_v))
        e2 = (min(v, next_v), max(v, next_v))
        a, b = idx[e1], idx[e2]
        deg[a] += 1
        deg[b] += 1
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps = len({find(i) for i in range(len(nodes))})
    closed = all(d == 2 for d in deg)
    return comps, closed


def manifold_check(c: CellComplex) -> ManifoldVerdict:
    """Combinatorial manifold detection for complexes of dimension <= 2."""
    if c.is_empty:
        return ManifoldVerdict("manifold", None, detail="empty complex")

    if c.max_dim == 0:
        return ManifoldVerdict("manifold", 0)

    if c.max_dim == 1:
        deg = {i: 0 for i in range(len(c.vertices))}
        for i, j in c.edges:
            deg[i] += 1
            deg[j] += 1
        isolated = [i for i, d in deg.items() if d == 0]
        if isolated:
            return ManifoldVerdict(
                "non-manifold", None, ("vertex", isolated[0]),
                "isolated vertex in a 1-complex")
        branch = [i for i, d in deg.items() if d > 2]
        if branch:
            return ManifoldVerdict(
                "non-manifold", None, ("vertex", branch[0]),
                f"vertex of degree {deg[branch[0]]}")
        if any(d == 1 for d in deg.values()):
            return ManifoldVerdict("with-boundary", 1)
        return ManifoldVerdict("manifold", 1)

    # 2-complex
    inc = _edge_polygon_incidence(c)
    dangling = [e for e, ks in inc.items() if not ks]
    if dangling:
        return ManifoldVerdict(
            "non-manifold", None, ("edge", dangling[0]),
            "edge not on any 2-cell")
    over = [e for e, ks in inc.items() if len(ks) > 2]
    if over:
        return ManifoldVerdict(
            "non-manifold", None, ("edge", over[0]),
            f"edge in {len(inc[over[0]])} polygons")
    in_edge = set()
    for i, j in c.edges:
        in_edge.add(i)
        in_edge.add(j)
    lonely = [i for i in range(len(c.vertices)) if i not in in_edge]
    if lonely:
        return ManifoldVerdict(
            "non-manifold", None, ("vertex", lonely[0]),
            "isolated vertex in a 2-complex")
    boundary = False
    for v in range(len(c.vertices)):
        comps, closed = vertex_link_components(c, v)
        if comps > 1:
            return ManifoldVerdict(
                "non-manifold", 2, ("vertex", v),
                f"vertex link has {comps} components")
        if not closed:
            # link must be a single arc: every node degree <= 2 with two ends
            nodes = [e for e in c.edges if v in e]
            arcs = _link_is_arc(c, v, nodes)
            if not arcs:
                return ManifoldVerdict(
                    "non-manifold", 2, ("vertex", v),
                    "vertex link is not an arc or circle")
            boundary = True
    if boundary:
        return ManifoldVerdict("with-boundary", 2)
    return ManifoldVerdict("manifold", 2)


def _link_is_arc(c: CellComplex, v: int, nodes) -> bool:
    idx = {e: i for i, e in enumerate(nodes)}
    deg = [0] * len(nodes)
    for cyc in c.cells2:
        if v not in cyc:
            continue
        m = len(cyc)
        t = cyc.index(v)
        for u in (cyc[(t - 1) % m], cyc[(t + 1) % m]):
            e = (min(v, u), max(v, u))
            deg[idx[e]] += 1
    ends = sum(1 for d in deg if d == 1)
    return ends == 2 and all(d <= 2 for d in deg)


def boundary_cycles(c: CellComplex):
    """Boundary edges (in exactly one 2-cell) grouped into connected cycles;
    returns a list of vertex-index frozensets, one per boundary component."""
    inc = _edge_polygon_incidence(c)
    bedges = [e for e, ks in inc.items() if len(ks) == 1]
    adj = {}
    for i, j in bedges:
        adj.setdefault(i, set()).add(j)
        adj.setdefault(j, set()).add(i)
    seen = set()
    cycles = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack = [start]
        comp = set()
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(adj[u] - comp)
        seen |= comp
        cycles.append(frozenset(comp))
    return cycles


@dataclass(frozen=True)
class TopologyReport:
    components: int
    euler: int
    max_dim: int
    manifold: ManifoldVerdict
    boundary_circles: int
    classification: str

    def to_dict(self):
        w = self.manifold.witness
        return {
            "components": self.components,
            "euler": self.euler,
            "max_dim": self.max_dim,
            "manifold": self.manifold.kind,
            "manifold_dim": self.manifold.dim,
            "witness": None if w is None else [w[0], list(w[1]) if isinstance(w[1], tuple) else w[1]],
            "boundary_circles": self.boundary_circles,
            "classification": self.classification,
        }


def classify(c: CellComplex) -> TopologyReport:
    """Full combinatorial classification of a complex of dimension <= 2."""
    if c.is_empty:
        verdict = ManifoldVerdict("manifold", None, detail="empty complex")
        return TopologyReport(0, 0, -1, verdict, 0, EMPTY)

    ncomp, _ = connected_components(c)
    chi = euler_characteristic(c)
    verdict = manifold_check(c)
    bcycles = boundary_cycles(c) if c.cells2 else []
    nb = len(bcycles)

    label = OTHER
    if c.max_dim == 0:
        label = POINT if len(c.vertices) == 1 else OTHER
    elif c.max_dim == 1:
        if verdict.kind == "non-manifold":
            label = NON_MANIFOLD
        elif ncomp != 1:
            label = OTHER
        elif verdict.is_manifold and chi == 0:
            label = CIRCLE
        elif verdict.has_boundary and chi == 1:
            label = SEGMENT
    else:
        if verdict.kind == "non-manifold":
            label = NON_MANIFOLD
        elif len(c.cells2) == 1 and ncomp == 1:
            label = DEGENERATE_CELL_2
        elif ncomp != 1:
            label = OTHER
        elif verdict.is_manifold and chi == 2:
            label = SPHERE_2
        elif verdict.has_boundary and chi == 0 and nb == 2:
            label = ANNULUS
        elif verdict.has_boundary and chi == 1 and nb == 1:
            label = DISK
    return TopologyReport(ncomp, chi, c.max_dim, verdict, nb, label)


def boundary_complex(body) -> CellComplex:
    """The whole boundary surface of a body as a cell complex."""
    lat = body.lattice
    return CellComplex.build(
        polygons=[tuple(lat.vertices[i] for i in poly)
                  for poly in lat.facet_polygons],
    )


def require_nonempty(c: CellComplex, what="complex"):
    if c.is_empty:
        raise EmptyComplex(f"{what} is empty")
