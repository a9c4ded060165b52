"""Randomized verification suite for the structure theorems.

Runs the full battery of invariants on seeded random bodies: the
three-way boundary partition, shadow connectivity and dimension, cap
frontier properties, projection covering, the pointwise label oracle,
classification consistency, and the seam/lens cross-checks.  Violations
are collected as failures; research-grade observations (behaviour the
theory suggests but does not prove) are collected as warnings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .body import SymmetricBody, random_symmetric
from .kernel import gauge, vneg, vdot, vsmul, vsub, vadd
from .shadow import (
    MINUS,
    PLUS,
    SHADOW,
    decompose,
    face_label_oracle,
    projection_check,
    separation_components,
)
from .spheres import (
    critical_lambdas,
    gamma_complex,
    lambda_zero,
    oracle_shadow_matches,
)
from .topology import (
    ANNULUS,
    CIRCLE,
    boundary_complex,
    boundary_cycles,
    classify,
    connected_components,
    euler_characteristic,
)


@dataclass
class SuiteResult:
    bodies: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _random_direction(rng) -> tuple:
    while True:
        x = tuple(Fraction(rng.randint(-12, 12), rng.randint(1, 4))
                  for _ in range(3))
        if any(c != 0 for c in x):
            return x


def _face_negation_map(lattice):
    """face -> antipodal face, via negated vertex coordinate sets."""
    by_key = {}
    for face in lattice.faces():
        key = (face[0], frozenset(lattice.face_points(face)))
        by_key[key] = face
    out = {}
    for face in lattice.faces():
        neg_key = (face[0],
                   frozenset(vneg(p) for p in lattice.face_points(face)))
        out[face] = by_key.get(neg_key)
    return out


def check_body(body: SymmetricBody, x, result: SuiteResult,
               deep: bool = True):
    """Run every invariant on one (body, direction) pair."""
    name = f"{body.name}/x={tuple(str(c) for c in x)}"

    def fail(msg):
        result.failures.append(f"{name}: {msg}")

    def tick():
        result.checks += 1

    lat = body.lattice

    # lattice sanity: active sets are monotone, facets supported by corners
    tick()
    for k, e in enumerate(lat.edges):
        for vi in e:
            if not lat.edge_active[k] <= lat.vertex_active[vi]:
                fail("vertex active set does not contain edge active set")
    for j, poly in enumerate(lat.facet_polygons):
        hs = lat.halfspaces[j]
        tight = {i for i, p in enumerate(lat.vertices) if hs.value(p) == 0}
        if tight != set(poly):
            fail("facet equality set differs from its corner set")

    tick()
    for v in lat.vertices:
        if vneg(v) not in set(lat.vertices):
            fail("vertex set is not centrally symmetric")
        if gauge(body, v) != 1:
            fail("vertex not on the unit sphere of its own gauge")

    tick()
    if euler_characteristic(boundary_complex(body)) != 2:
        fail("boundary complex Euler characteristic is not 2")

    d = decompose(body, x)

    # partition and central symmetry of labels
    tick()
    if set(d.labels) != set(lat.faces()):
        fail("labels do not cover all faces")
    neg = _face_negation_map(lat)
    opposite = {PLUS: MINUS, MINUS: PLUS, SHADOW: SHADOW}
    for face, lab in d.labels.items():
        nf = neg[face]
        if nf is None or d.labels[nf] != opposite[lab]:
            fail("labels are not centrally symmetric")
            break
    d_neg = decompose(body, vneg(x))
    for face, lab in d.labels.items():
        if d_neg.labels[face] != opposite[lab]:
            fail("negating the direction does not swap the caps")
            break

    # shadow complex: closed by construction; connected; dimension >= 1
    tick()
    ncomp, _ = connected_components(d.shadow_complex)
    if ncomp != 1:
        fail(f"shadow complex has {ncomp} components")
    if d.shadow_complex.max_dim < 1:
        fail("shadow complex has dimension < 1")

    # cap frontier: inside the shadow, connected, pure dimension 1,
    # separates the boundary
    tick()
    shadow_keys = _cell_keys(d.shadow_complex)
    if not _cell_keys(d.plus_boundary) <= shadow_keys:
        fail("cap frontier is not inside the shadow complex")
    ncomp, _ = connected_components(d.plus_boundary)
    if ncomp != 1:
        fail("cap frontier is not connected")
    if d.plus_boundary.max_dim != 1 or d.plus_boundary.cells2:
        fail("cap frontier is not one-dimensional")
    deg = {}
    for i, j in d.plus_boundary.edges:
        deg[i] = deg.get(i, 0) + 1
        deg[j] = deg.get(j, 0) + 1
    if len(deg) != len(d.plus_boundary.vertices):
        fail("cap frontier has an isolated vertex")
    sep = separation_components(body, d.plus_boundary)
    if sep < 2:
        fail(f"cap frontier separation gives {sep} component(s)")

    tick()
    if not projection_check(d):
        fail("projection covering check failed")

    # pointwise oracle
    if deep:
        tick()
        for face, lab in d.labels.items():
            if face_label_oracle(body, x, face) != lab:
                fail(f"label oracle disagrees on face {face}")
                break

    # classification consistency
    tick()
    rep = classify(d.shadow_complex)
    if rep.manifold.is_manifold and rep.manifold.dim == 1:
        if rep.classification != CIRCLE:
            fail("1-manifold shadow did not classify as a circle")
    if rep.manifold.has_boundary and rep.manifold.dim == 2:
        if rep.classification != ANNULUS:
            fail("2-manifold-with-boundary shadow is not an annulus")
        else:
            cyc = boundary_cycles(d.shadow_complex)
            got = {frozenset(d.shadow_complex.vertices[i] for i in comp)
                   for comp in cyc}
            want = {frozenset(d.plus_boundary.vertices),
                    frozenset(d.minus_boundary.vertices)}
            if got != want:
                fail("annulus boundary circles differ from the cap frontiers")
            if frozenset(d.plus_boundary.vertices) & \
                    frozenset(d.minus_boundary.vertices):
                fail("cap frontiers are not disjoint")

    # first contact value: homogeneity
    tick()
    lam0 = lambda_zero(body, x)
    if lambda_zero(body, vsmul(Fraction(2), x)) != 2 * lam0:
        fail("first contact value is not homogeneous in the direction")

    if deep:
        # seam invariants at two values
        for mult in (Fraction(3, 2), Fraction(4)):
            tick()
            lam = lam0 * mult
            sphere = gamma_complex(body, x, lam)
            v = vsmul(1 / lam, x)
            for p in sphere.complex.vertices:
                if gauge(body, p) != 1 or gauge(body, vsub(p, v)) != 1:
                    fail(f"seam vertex off one of the boundaries at {lam}")
                    break
            center = vsmul(Fraction(1, 2), v)
            if sphere.complex.point_reflect(center) != sphere.complex:
                fail(f"seam not symmetric through the lens center at {lam}")
            ncomp, _ = connected_components(sphere.complex)
            if ncomp != 1:
                fail(f"seam disconnected at {lam}")
            if sphere.complex.max_dim < 1:
                fail(f"seam dimension < 1 at {lam}")

        tick()
        if not oracle_shadow_matches(body, x, lam0 * Fraction(5, 2)):
            fail("seam does not match the lens shadow complex")

        # membership coherence on a scaled slice
        tick()
        from .bisector import membership
        lamm = lam0 * Fraction(7, 4)
        sphere = gamma_complex(body, x, lamm)
        for p in sphere.complex.vertices[:8]:
            flag, got = membership(body, x, vsmul(lamm, p))
            if not flag or got != lamm:
                fail("scaled seam vertex fails bisector membership")
                break

        # probe stability between consecutive criticals
        tick()
        crit = critical_lambdas(body, x, lam0 * 4)
        grid = sorted(set(list(crit.values) + [lam0 * 4]))
        for a, b in zip(grid, grid[1:]):
            kinds = set()
            for q in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                lam = a + (b - a) * q
                kinds.add(classify(gamma_complex(body, x, lam).complex)
                          .classification)
            if len(kinds) != 1:
                result.warnings.append(
                    f"{name}: classification not constant on "
                    f"({a}, {b}): {sorted(kinds)}")

        # slice-circle vs shadow-circle observations (logged, not asserted)
        tick()
        probes = [lam0 * Fraction(3, 2), lam0 * 4, lam0 * 64]
        kinds = [classify(gamma_complex(body, x, lam).complex).classification
                 for lam in probes]
        shadow_kind = rep.classification
        if all(k == CIRCLE for k in kinds) and shadow_kind != CIRCLE:
            result.warnings.append(
                f"{name}: all probed slices are circles but the shadow "
                f"classifies as {shadow_kind}")
        if (shadow_kind == ANNULUS) != (ANNULUS in kinds):
            fail("annulus equivalence between shadow and slices failed")


def _cell_keys(c):
    keys = set()
    for p in c.vertices:
        keys.add(("p", p))
    for a, b in c.edge_points():
        keys.add(("s", frozenset((a, b))))
    for poly in c.polygon_points():
        keys.add(("g", frozenset(poly)))
    return keys


def run_suite(count: int, seed: int, pairs=(5, 9), deep=True) -> SuiteResult:
    """Run the invariant battery on `count` seeded random bodies."""
    result = SuiteResult()
    rng = random.Random(seed)
    for i in range(count):
        body = random_symmetric(seed + 1000 * i, rng.randint(*pairs))
        x = _random_direction(rng)
        check_body(body, x, result, deep=deep)
        result.bodies += 1
    return result
