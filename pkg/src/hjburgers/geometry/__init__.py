"""Caustics, level surfaces, Maxwell-Klein sets, hot/cool decomposition,
swallowtail perestroikas, and complex double points."""

from .caustic import (
    CausticData,
    GeometryError,
    HotCoolLabel,
    SingularParameterError,
    caustic_deflation,
    compute_caustic,
    double_point_set_gcd,
    hot_cool,
    hot_cool_boundary,
    level_surface,
    level_surface_symbolic_c,
    pre_level_surface,
    preparam_matches_flow_image,
    solve_affine,
)
from .checks import CuspCheckReport, IntersectionCheck, cusp_and_normal_checks
from .maxwell import (
    BPointLabel,
    MaxwellError,
    MaxwellKleinData,
    classify_b_points,
    classify_point,
    maxwell_klein,
    pre_maxwell,
)
from .perestroika import (
    ComplexDoublePoint,
    PerestroikaEvent,
    caustic_condition_numerators,
    complex_double_points,
    complex_split,
    imaginary_conditions,
    perestroika_detect,
)

__all__ = [
    "CausticData",
    "GeometryError",
    "HotCoolLabel",
    "SingularParameterError",
    "caustic_deflation",
    "compute_caustic",
    "double_point_set_gcd",
    "hot_cool",
    "hot_cool_boundary",
    "level_surface",
    "level_surface_symbolic_c",
    "pre_level_surface",
    "preparam_matches_flow_image",
    "solve_affine",
    "CuspCheckReport",
    "IntersectionCheck",
    "cusp_and_normal_checks",
    "BPointLabel",
    "MaxwellError",
    "MaxwellKleinData",
    "classify_b_points",
    "classify_point",
    "maxwell_klein",
    "pre_maxwell",
    "ComplexDoublePoint",
    "PerestroikaEvent",
    "caustic_condition_numerators",
    "complex_double_points",
    "complex_split",
    "imaginary_conditions",
    "perestroika_detect",
]
