"""Exact shadow boundaries, parameter spheres, and bisectors of centrally
symmetric convex polytopes."""

from .body import (
    PolePair,
    SymmetricBody,
    build_symmetric,
    builtin,
    load_body,
    longitudinal_curve,
    poles,
    random_symmetric,
    save_body,
)
from .bisector import (
    BisectorSlice,
    BisectorVerdict,
    export_mesh,
    manifold_verdict,
    membership,
    slices,
)
from .errors import (
    CollinearPoint,
    CurveDegenerate,
    DegenerateInput,
    EmptyComplex,
    GeometryError,
    LambdaTooSmall,
    NotSymmetric,
    OriginNotInterior,
    PointNotOnSphere,
    UnknownBody,
    ZeroDirection,
)
from .kernel import (
    FaceLattice,
    HalfSpace,
    gauge,
    hull_and_lattice,
    line_body_intersection,
    project_along,
)
from .shadow import (
    ShadowDecomposition,
    decompose,
    positive_closure_boundary,
    projection_check,
    separation_components,
    sharpness,
)
from .spheres import (
    CriticalSet,
    ParameterSphere,
    bounding_map,
    critical_lambdas,
    gamma_as_shadow_oracle,
    gamma_complex,
    hausdorff_distance,
    lambda_zero,
)
from .topology import (
    CellComplex,
    TopologyReport,
    classify,
    connected_components,
    euler_characteristic,
    manifold_check,
)

__version__ = "0.1.0"

__all__ = [
    "BisectorSlice", "BisectorVerdict", "CellComplex", "CollinearPoint",
    "CriticalSet", "CurveDegenerate", "DegenerateInput", "EmptyComplex",
    "FaceLattice", "GeometryError", "HalfSpace", "LambdaTooSmall",
    "NotSymmetric", "OriginNotInterior", "ParameterSphere", "PointNotOnSphere",
    "PolePair", "ShadowDecomposition", "SymmetricBody", "TopologyReport",
    "UnknownBody", "ZeroDirection", "bounding_map", "build_symmetric",
    "builtin", "classify", "connected_components", "critical_lambdas",
    "decompose", "euler_characteristic", "export_mesh", "gamma_as_shadow_oracle",
    "gamma_complex", "gauge", "hausdorff_distance", "hull_and_lattice",
    "lambda_zero", "line_body_intersection", "load_body", "longitudinal_curve",
    "manifold_check", "manifold_verdict", "membership", "poles",
    "positive_closure_boundary", "project_along", "projection_check",
    "random_symmetric", "save_body", "separation_components", "sharpness",
    "slices",
]
