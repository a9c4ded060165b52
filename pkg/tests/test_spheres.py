"""Parameter spheres: first contact, seam complexes, criticals, maps."""

from fractions import Fraction

import pytest

from polyshadow.body import random_symmetric
from polyshadow.errors import LambdaTooSmall, PointNotOnSphere
from polyshadow.kernel import gauge, vsmul, vsub
from polyshadow.shadow import decompose
from polyshadow.spheres import (
    bounding_map,
    critical_lambdas,
    gamma_as_shadow_oracle,
    gamma_complex,
    hausdorff_distance,
    lambda_zero,
    oracle_shadow_matches,
    sphere_sample_points,
)
from polyshadow.topology import (
    ANNULUS,
    CIRCLE,
    DEGENERATE_CELL_2,
    NON_MANIFOLD,
    POINT,
    SEGMENT,
    CellComplex,
    classify,
    connected_components,
)

F = Fraction


# -- lambda_zero -------------------------------------------------------------


def test_lambda_zero_band_body(sec3):
    assert lambda_zero(sec3, (4, 0, 0)) == 1


def test_lambda_zero_cube_lp_oracle(cube):
    """Dual route: bisection over exact joint-membership feasibility."""
    x = (2, 0, 0)
    closed = lambda_zero(cube, x)
    assert closed == 1

    def nonempty(t):
        # t*K and t*K + x intersect iff x/2 lies in t*K, checked exactly
        half = vsmul(F(1, 2), tuple(map(F, x)))
        return gauge(cube, half) <= t

    lo, hi = F(0), F(8)
    for _ in range(60):
        mid = (lo + hi) / 2
        if nonempty(mid):
            hi = mid
        else:
            lo = mid
    assert hi - lo < F(1, 2**40)
    assert lo <= closed <= hi


def test_lambda_zero_homogeneous(octahedron):
    x = (1, F(1, 3), F(1, 7))
    assert lambda_zero(octahedron, vsmul(F(2), tuple(map(F, x)))) == \
        2 * lambda_zero(octahedron, x)


# -- gamma_complex -------------------------------------------------------------


def test_gamma_degenerate_segment(sec3):
    sphere = gamma_complex(sec3, (4, 0, 0), 1)
    assert sphere.degenerate
    assert classify(sphere.complex).classification == SEGMENT
    assert set(sphere.complex.vertices) == {(2, 0, 1), (2, 0, -1)}


def test_gamma_classification_sweep(sec3):
    want = {
        F(9, 8): CIRCLE,
        F(11, 8): NON_MANIFOLD,
        F(2): ANNULUS,
    }
    for lam, kind in want.items():
        sphere = gamma_complex(sec3, (4, 0, 0), lam)
        assert classify(sphere.complex).classification == kind, lam


def test_gamma_cube_degenerate_square(cube):
    sphere = gamma_complex(cube, (2, 0, 0), 1)
    assert sphere.degenerate
    rep = classify(sphere.complex)
    assert rep.classification == DEGENERATE_CELL_2
    assert set(sphere.complex.vertices) == {
        (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)}


def test_gamma_too_small(sec3):
    with pytest.raises(LambdaTooSmall):
        gamma_complex(sec3, (4, 0, 0), F(7, 8))


def test_gamma_vertices_on_both_boundaries(sec3):
    lam = F(7, 4)
    sphere = gamma_complex(sec3, (4, 0, 0), lam)
    v = vsmul(1 / lam, (F(4), F(0), F(0)))
    for p in sphere.complex.vertices:
        assert gauge(sec3, p) == 1
        assert gauge(sec3, vsub(p, v)) == 1
    center = vsmul(F(1, 2), v)
    assert sphere.complex.point_reflect(center) == sphere.complex


# -- seam vs lens-shadow oracle -------------------------------------------------


def test_oracle_band_body(sec3):
    assert oracle_shadow_matches(sec3, (4, 0, 0), 2)


def test_oracle_cube_box(cube):
    x = (2, 0, 0)
    assert oracle_shadow_matches(cube, x, 2)
    decomp = gamma_as_shadow_oracle(cube, x, 2)
    # the lens is a box; its shadow band has 4 facets
    assert len(decomp.shadow_complex.cells2) == 4


def test_oracle_octahedron(octahedron):
    x = (1, -1, 0)
    lam = 10 * lambda_zero(octahedron, x)
    assert oracle_shadow_matches(octahedron, x, lam)


@pytest.mark.parametrize("seed", [2, 8])
def test_oracle_random(seed):
    import random
    rng = random.Random(seed)
    body = random_symmetric(seed + 700, 5)
    x = tuple(F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(3))
    if all(c == 0 for c in x):
        x = (1, 1, F(1, 2))
    lam0 = lambda_zero(body, x)
    for mult in (F(3, 2), F(4)):
        assert oracle_shadow_matches(body, x, lam0 * mult)


# -- critical values --------------------------------------------------------


def test_criticals_band_body(sec3):
    crit = critical_lambdas(sec3, (4, 0, 0), 4)
    assert {F(1), F(5, 4), F(3, 2)} <= set(crit.values)


def test_criticals_cube(cube):
    crit = critical_lambdas(cube, (2, 0, 0), 4)
    assert crit.values == (F(1),)
    # the band classification never changes past the degenerate value
    for lam in (F(3, 2), F(5, 2), F(4)):
        assert classify(gamma_complex(cube, (2, 0, 0), lam).complex) \
            .classification == ANNULUS


def test_criticals_scaling(sec3):
    x = (4, 0, 0)
    crit1 = critical_lambdas(sec3, x, 4)
    crit2 = critical_lambdas(sec3, vsmul(F(2), tuple(map(F, x))), 8)
    assert tuple(2 * v for v in crit1.values) == crit2.values


def test_quartile_stability_between_criticals(sec3):
    x = (4, 0, 0)
    crit = critical_lambdas(sec3, x, 4)
    grid = sorted(set(list(crit.values) + [F(4)]))
    for a, b in zip(grid, grid[1:]):
        kinds = {classify(gamma_complex(sec3, x, a + (b - a) * q).complex)
                 .classification
                 for q in (F(1, 4), F(1, 2), F(3, 4))}
        assert len(kinds) == 1, (a, b, kinds)


# -- Hausdorff distance -----------------------------------------------------


def test_hausdorff_identical_is_zero(sec3):
    band = decompose(sec3, (4, 0, 0)).shadow_complex
    assert hausdorff_distance(band, band, density=16) < 1e-9


def test_hausdorff_parallel_segments():
    a = CellComplex.build(segments=[((0, 0, 0), (1, 0, 0))])
    b = CellComplex.build(segments=[((0, 1, 0), (1, 1, 0))])
    d = hausdorff_distance(a, b, density=64)
    assert abs(d - 1.0) <= 1 / 64


def test_hausdorff_band_body_convergence(sec3):
    """The seam trails the shadow band by exactly |x|/lam here, so the
    distances over a doubling grid halve each step."""
    x = (4, 0, 0)
    S = decompose(sec3, x).shadow_complex
    values = []
    for lam in (2, 4, 8, 16):
        g = gamma_complex(sec3, x, lam)
        values.append(hausdorff_distance(g.complex, S, density=64))
    assert all(values[i + 1] <= values[i] + 1e-3 for i in range(3))
    for lam, got in zip((2, 4, 8, 16), values):
        assert abs(got - 4.0 / lam) < 0.02


def test_hausdorff_empty_error(sec3):
    from polyshadow.errors import EmptyComplex
    band = decompose(sec3, (4, 0, 0)).shadow_complex
    with pytest.raises(EmptyComplex):
        hausdorff_distance(CellComplex.empty(), band)


# -- bounding maps -----------------------------------------------------------


def test_bounding_map_image_on_target(sec3):
    x = tuple(map(F, (4, 0, 0)))
    mu, lam = F(2), F(9, 8)
    sphere = gamma_complex(sec3, x, mu)
    for p in sphere.complex.vertices:
        q = bounding_map(sec3, x, lam, mu, p)
        assert gauge(sec3, q) == 1
        assert gauge(sec3, vsub(q, vsmul(1 / lam, x))) == 1


def test_bounding_map_identity_on_overlap(cube):
    # a band point lying on both spheres maps to itself
    x = tuple(map(F, (2, 0, 0)))
    p = (F(1, 2), F(1), F(0))
    lam, mu = F(3), F(5)
    assert gauge(cube, vsub(p, vsmul(1 / mu, x))) == 1
    assert bounding_map(cube, x, lam, mu, p) == p


def test_bounding_map_rejects_off_sphere(sec3):
    x = tuple(map(F, (4, 0, 0)))
    with pytest.raises(PointNotOnSphere):
        bounding_map(sec3, x, F(9, 8), F(2), (0, 1, 0))


def test_bounding_map_composition_exact(sec3):
    x = tuple(map(F, (4, 0, 0)))
    lam, mu, nu = F(9, 8), F(7, 4), F(3)
    sphere = gamma_complex(sec3, x, nu)
    for p in sphere_sample_points(sphere, 8):
        direct = bounding_map(sec3, x, lam, nu, p)
        via = bounding_map(sec3, x, lam, mu,
                           bounding_map(sec3, x, mu, nu, p))
        assert direct == via


@pytest.mark.parametrize("seed", [5, 21])
def test_bounding_map_composition_random(seed):
    body = random_symmetric(seed + 600, 5)
    x = (1, F(1, 3), F(2, 7))
    lam0 = lambda_zero(body, x)
    lam, mu, nu = lam0 * F(5, 4), lam0 * F(2), lam0 * F(7, 2)
    sphere = gamma_complex(body, x, nu)
    for p in sphere_sample_points(sphere, 5):
        direct = bounding_map(body, x, lam, nu, p)
        via = bounding_map(body, x, lam, mu,
                           bounding_map(body, x, mu, nu, p))
        assert direct == via


def test_gamma_connected_and_onedimensional(sec3):
    for lam in (F(9, 8), F(11, 8), F(2)):
        sphere = gamma_complex(sec3, (4, 0, 0), lam)
        assert connected_components(sphere.complex)[0] == 1
        assert sphere.complex.max_dim >= 1


@pytest.mark.parametrize("seed", [31, 47, 58])
def test_hausdorff_doubling_grid_to_256(seed):
    """On the doubling grid the seam-to-shadow distance is nonincreasing
    and ends below one percent of the diameter by 2^8 * lambda_0."""
    import math
    body = random_symmetric(seed, 6)
    x = (1, F(1, 3), F(2, 7))
    lam0 = lambda_zero(body, x)
    shadow = decompose(body, x).shadow_complex
    dists = []
    for k in range(1, 9):
        sphere = gamma_complex(body, x, lam0 * 2**k)
        dists.append(hausdorff_distance(sphere.complex, shadow,
                                        density=256.0))
    assert all(b <= a + 2e-3 for a, b in zip(dists, dists[1:]))
    vs = [tuple(float(c) for c in v) for v in body.vertices]
    diam = max(math.dist(a, b) for a in vs for b in vs)
    assert dists[-1] < 0.01 * diam
