"""Curvature functionals of deformed geodesic spheres in space forms.

Numerical verification that the constants ``sqrt(n/(n-1))`` and
``sqrt(n(n-1)/(n-r)^2)`` in the integral mean-curvature inequalities cannot
be improved.
"""
from .geometry import (
    FunctionalReport,
    ShapeField,
    ZonalHypersurface,
    functional_report,
    inequality_margins,
    ricci_range,
    shape_field,
)
from .spaceform import GeodesicSphere, SpaceForm, sn_cn, sphere_invariants, xi
from .symfun import (
    NewtonStack,
    Spectrum,
    combinatorial_identities,
    newton_stack,
    reilly_check,
    sigma_all,
)
from .variation import (
    DeformationSpec,
    SharpnessResult,
    evolution_residuals,
    numeric_second_variation,
    optimal_constant,
    predicted_ratio_limits,
    predicted_second_variation,
    radial_surface,
    sharpness_extrapolate,
)
from .flow import FlowState, flow_vs_radial, integrate_normal_flow
from .zonal import (
    ZonalFunction,
    ZonalGrid,
    bochner_traceless_hessian,
    make_grid,
    sphere_laplacian,
    zonal_harmonic,
)

__all__ = [
    "DeformationSpec",
    "FlowState",
    "FunctionalReport",
    "GeodesicSphere",
    "NewtonStack",
    "ShapeField",
    "SharpnessResult",
    "SpaceForm",
    "Spectrum",
    "ZonalFunction",
    "ZonalGrid",
    "ZonalHypersurface",
    "bochner_traceless_hessian",
    "combinatorial_identities",
    "evolution_residuals",
    "flow_vs_radial",
    "functional_report",
    "inequality_margins",
    "integrate_normal_flow",
    "make_grid",
    "newton_stack",
    "numeric_second_variation",
    "optimal_constant",
    "predicted_ratio_limits",
    "predicted_second_variation",
    "radial_surface",
    "reilly_check",
    "ricci_range",
    "shape_field",
    "sharpness_extrapolate",
    "sigma_all",
    "sn_cn",
    "sphere_invariants",
    "sphere_laplacian",
    "xi",
    "zonal_harmonic",
]

__version__ = "0.1.0"
