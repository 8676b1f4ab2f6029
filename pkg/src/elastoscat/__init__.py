"""Desk-scale toolkit for time-harmonic elastic wave scattering.

Forward solvers for compactly supported sources and density-perturbed media,
exponential probe machinery for high-curvature boundary analysis, and
evaluators for the quantitative radiating / non-radiating criteria, with a
CLI that packages the standard experiments.
"""

__version__ = "0.1.0"

from . import errors
from .elastic import (
    FieldJet,
    GridSpec,
    LameMedium,
    SampledVectorField,
    field_norms,
    helmholtz_split,
    holder_seminorm,
    lame_operator_fd,
    make_medium,
    traction,
)
from .geometry import (
    boundary_measure,
    boundary_mesh,
    component_separation,
    diameter,
    disk,
    ellipse,
    gauss_mesh,
    inside,
    make_cap_domain,
    signed_distance,
    union,
    volume_mesh,
)
from .greens import (
    farfield_kernels,
    helmholtz_fundamental,
    kupradze_tensor,
    lower_incomplete_gamma,
    singular_cell_integral,
)
from .bumps import Bump, polynomial_bump
from .source import (
    FarFieldPattern,
    SourceProblem,
    directions_circle,
    farfield_norm,
    farfield_of_source,
    make_nonradiating,
    solve_source,
)
from .scattering import (
    ContractionReport,
    IncidentWave,
    MediumScatterer,
    MediumSolve,
    contraction_report,
    lattice_pde_residual,
    make_incident,
    pde_residual_check,
    solve_medium,
    upsilon,
)
from .cgo import (
    CgoProbe,
    IdentityBreakdown,
    boundary_term_bound,
    cgo_residual,
    integral_identity_check,
    make_cgo,
    paraboloid_integral_closed,
    paraboloid_integral_mc,
    probe_grid,
    select_tau,
    shell_integral,
    tail_and_holder_bounds,
    traction_point_solve,
    zeta_default,
)
from .bounds import (
    CalibrationResult,
    ClassCheckResult,
    CriterionReport,
    admissible_class_check,
    calibrate_constant,
    calibrate_contraction_scale,
    diameter_lower_bound,
    epsilon_min_solve,
    kdecay_rhs,
    kpoint_criterion,
    medium_kpoint_criterion,
    medium_small_criterion,
    small_support_criterion,
    small_support_rhs,
    transmission_bounds,
)

__all__ = [
    "__version__", "errors",
    # material and fields
    "LameMedium", "GridSpec", "SampledVectorField", "FieldJet", "make_medium",
    "traction", "helmholtz_split", "holder_seminorm", "field_norms",
    "lame_operator_fd",
    # geometry
    "disk", "ellipse", "union", "make_cap_domain", "inside", "diameter",
    "component_separation", "signed_distance", "volume_mesh", "gauss_mesh",
    "boundary_mesh", "boundary_measure",
    # kernels
    "helmholtz_fundamental", "kupradze_tensor", "singular_cell_integral",
    "farfield_kernels", "lower_incomplete_gamma",
    # sources
    "Bump", "polynomial_bump", "SourceProblem", "FarFieldPattern",
    "directions_circle", "solve_source", "farfield_of_source",
    "farfield_norm", "make_nonradiating",
    # media
    "MediumScatterer", "IncidentWave", "MediumSolve", "ContractionReport",
    "make_incident", "solve_medium", "contraction_report", "upsilon",
    "pde_residual_check", "lattice_pde_residual",
    # exponential probes
    "CgoProbe", "IdentityBreakdown", "make_cgo", "probe_grid", "cgo_residual",
    "paraboloid_integral_closed", "paraboloid_integral_mc", "shell_integral",
    "tail_and_holder_bounds", "select_tau", "zeta_default",
    "integral_identity_check", "boundary_term_bound", "traction_point_solve",
    # criteria
    "CriterionReport", "CalibrationResult", "ClassCheckResult",
    "small_support_rhs", "kdecay_rhs", "small_support_criterion",
    "diameter_lower_bound", "kpoint_criterion", "medium_small_criterion",
    "medium_kpoint_criterion", "transmission_bounds", "epsilon_min_solve",
    "admissible_class_check", "calibrate_constant",
    "calibrate_contraction_scale",
]
