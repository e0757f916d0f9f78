"""Mean-value identities for Helmholtz-type equations.

Bessel-quotient mean-value coefficients, numerical ball/sphere means, a
small-radius classifier for harmonic / metaharmonic / panharmonic behavior,
and a walk-on-spheres Monte Carlo solver whose survival weight is the exact
sphere coefficient.
"""

from .equations import BALL, HARMONIC, METAHARMONIC, PANHARMONIC, SPHERE, EquationKind
from .specialfn import (
    CoefficientRangeError,
    coefficient_defect_limit,
    coefficient_defect_ratio,
    mean_coefficient,
    normalized_bessel_i,
    normalized_bessel_j,
)
from .geometry import (
    Ball,
    Domain,
    MeanEstimate,
    QuadratureConfig,
    annulus_domain,
    ball_domain,
    ball_mean,
    ball_volume,
    box_domain,
    check_lipschitz,
    is_admissible,
    sphere_area,
    sphere_mean,
    uniform_ball_points,
    uniform_sphere_points,
    unit_ball_volume,
)
from .fields import (
    ScalarField,
    catalogue,
    field_by_label,
    finite_difference_laplacian,
    residual,
)
from .asymptotics import (
    Classification,
    DefectEstimate,
    InadmissibleRadiusError,
    STATUS_DEGENERATE,
    STATUS_INCONSISTENT,
    STATUS_OK,
    classify_point,
    defect_sequence,
    extrapolate_limit,
    laplacian_estimate,
    mixed_defect_limit,
    self_referential_check,
    shared_ratio_check,
)
from .wos import (
    AllWalksTruncated,
    StartOutsideDomain,
    WalkConfig,
    WalkResult,
    solve_dirichlet,
    solve_dirichlet_grid,
    survival_weight,
)

__version__ = "0.1.0"

__all__ = [
    "BALL", "SPHERE", "HARMONIC", "METAHARMONIC", "PANHARMONIC",
    "EquationKind",
    "CoefficientRangeError", "coefficient_defect_limit",
    "coefficient_defect_ratio", "mean_coefficient",
    "normalized_bessel_i", "normalized_bessel_j",
    "Ball", "Domain", "MeanEstimate", "QuadratureConfig",
    "annulus_domain", "ball_domain", "ball_mean", "ball_volume",
    "box_domain", "check_lipschitz", "is_admissible", "sphere_area",
    "sphere_mean", "uniform_ball_points", "uniform_sphere_points",
    "unit_ball_volume",
    "ScalarField", "catalogue", "field_by_label",
    "finite_difference_laplacian", "residual",
    "Classification", "DefectEstimate", "InadmissibleRadiusError",
    "STATUS_DEGENERATE", "STATUS_INCONSISTENT", "STATUS_OK",
    "classify_point", "defect_sequence", "extrapolate_limit",
    "laplacian_estimate", "mixed_defect_limit", "self_referential_check",
    "shared_ratio_check",
    "AllWalksTruncated", "StartOutsideDomain", "WalkConfig", "WalkResult",
    "solve_dirichlet", "solve_dirichlet_grid", "survival_weight",
]
