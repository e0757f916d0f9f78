"""Small-radius mean-value defects: estimation, extrapolation, classification.

The central object is the defect

    defect(r) = (M(u, r) - u(x)) / r^2

where M is the ball or sphere mean around x.  Its r -> 0 limit is
lap(u)/(2(m+2)) for balls and lap(u)/(2m) for spheres, and for a solution
of one of the three equation families the whole finite-radius profile is
pinned down by the Bessel coefficient of that family.  Limits are obtained
by Richardson extrapolation on a decreasing radius schedule, realized as
Neville polynomial extrapolation in the variable r^2 (exact whenever the
defect expands in even powers of r, which is all C^2 fields).

The classifier recovers kappa = lap(u)(x)/u(x) from the extrapolated
limits, cross-checks ball against sphere, and then validates the recovered
frequency against the per-radius defect profile.  The profile step is what
rejects fields that merely have a well-defined kappa at x without solving
any of the equations: the two limits alone cannot distinguish those, since
(m+2)*ball limit = m*sphere limit = lap(u)/2 holds for every C^2 field.
"""

import math
from dataclasses import dataclass

import numpy as np

from .equations import BALL, SPHERE, EquationKind, validate_geometry
from .geometry import Ball, QuadratureConfig, ball_mean, is_admissible, sphere_mean
from .specialfn import (
    CoefficientRangeError,
    coefficient_defect_ratio,
    mean_coefficient,
)

MIXED = "mixed"

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate-point"
STATUS_INCONSISTENT = "inconsistent-geometries"

_SATURATION = 1e-12


class InadmissibleRadiusError(ValueError):
    """A requested averaging ball sticks out of the domain."""


@dataclass(frozen=True)
class DefectEstimate:
    """Per-radius defects, optionally completed with the extrapolated limit."""

    geometry: str
    radii: tuple
    defects: tuple
    limit_value: float | None = None
    convergence_order: float | None = None

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        defects = tuple(float(d) for d in self.defects)
        if len(radii) != len(defects) or not radii:
            raise ValueError("radii and defects must be nonempty and match")
        if any(r <= 0 for r in radii) or any(
            radii[i] <= radii[i + 1] for i in range(len(radii) - 1)
        ):
            raise ValueError("radii must be positive and strictly decreasing")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "defects", defects)


@dataclass(frozen=True)
class Classification:
    """Outcome of the point classifier; kind is None when indeterminate."""

    kind: EquationKind | None
    recovered_parameter: float | None
    confidence: float
    point: np.ndarray
    ball_limit: float
    sphere_limit: float
    status: str = STATUS_OK


def _mean_for(geometry: str, u, ball: Ball, cfg) -> float:
    if geometry == BALL:
        return ball_mean(u, ball, cfg).value
    return sphere_mean(u, ball, cfg).value


def defect_sequence(u, x, geometry: str, radii, cfg: QuadratureConfig | None = None,
                    domain=None) -> DefectEstimate:
    """(M(u, r) - u(x))/r^2 for each radius, largest first."""
    geometry = validate_geometry(geometry)
    x = np.asarray(x, dtype=float)
    radii = [float(r) for r in radii]
    if domain is not None:
        for r in radii:
            if not is_admissible(Ball(x, r), domain):
                raise InadmissibleRadiusError(
                    f"ball of radius {r} at {x} is not admissible in the domain"
                )
    ux = float(u(x))
    defects = [
        (_mean_for(geometry, u, Ball(x, r), cfg) - ux) / (r * r) for r in radii
    ]
    return DefectEstimate(geometry, tuple(radii), tuple(defects))


def _neville_to_zero(xs, ys) -> float:
    xs = [float(x) for x in xs]
    vals = [float(y) for y in ys]
    n = len(vals)
    for j in range(1, n):
        for k in range(n - 1, j - 1, -1):
            vals[k] = (xs[k] * vals[k - 1] - vals[k] * xs[k - j]) / (xs[k] - xs[k - j])
    return vals[-1]


def extrapolate_limit(estimate: DefectEstimate) -> DefectEstimate:
    """Complete a defect sequence with its Richardson limit and empirical order.

    Assumes defect(r) = L + c1 r^2 + c2 r^4 + ...; needs at least 3 radii.
    The order is the log-log slope of |defect - L| against r, reported as
    inf ("saturated") when the residuals sit at the extrapolation noise floor.
    """
    if len(estimate.radii) < 3:
        raise ValueError("extrapolation needs at least 3 radii")
    r = np.asarray(estimate.radii)
    d = np.asarray(estimate.defects)
    limit = _neville_to_zero(r * r, d)
    residuals = np.abs(d - limit)
    scale = max(1.0, float(np.max(np.abs(d))), abs(limit))
    if np.all(residuals <= _SATURATION * scale):
        order = math.inf
    else:
        keep = residuals > 0
        if np.count_nonzero(keep) < 2:
            order = math.inf
        else:
            slope = np.polyfit(np.log(r[keep]), np.log(residuals[keep]), 1)[0]
            order = float(slope)
    return DefectEstimate(
        estimate.geometry, estimate.radii, estimate.defects, limit, order
    )


def laplacian_estimate(u, x, geometry: str, radii,
                       cfg: QuadratureConfig | None = None, domain=None) -> float:
    """Laplacian of u at x recovered from the defect limit of either geometry."""
    est = extrapolate_limit(defect_sequence(u, x, geometry, radii, cfg, domain))
    m = np.asarray(x).shape[-1]
    factor = 2.0 * (m + 2) if geometry == BALL else 2.0 * m
    return factor * est.limit_value


def mixed_defect_limit(u, x, radii, cfg: QuadratureConfig | None = None,
                       domain=None) -> float:
    """Extrapolated limit of (ball mean - sphere mean)/r^2.

    Vanishes exactly for harmonic u; equals -lap(u)/(m(m+2)) for general C^2 u.
    """
    ball_est = defect_sequence(u, x, BALL, radii, cfg, domain)
    sph_est = defect_sequence(u, x, SPHERE, radii, cfg, domain)
    mixed = DefectEstimate(
        MIXED,
        ball_est.radii,
        tuple(b - s for b, s in zip(ball_est.defects, sph_est.defects)),
    )
    return extrapolate_limit(mixed).limit_value


def shared_ratio_check(u, x, radii, cfg: QuadratureConfig | None = None,
                       domain=None) -> float:
    """|(m+2)*ball limit - m*sphere limit|.

    Zero for meta- and panharmonic fields, but also for every other C^2
    field (both sides equal lap(u)/2), so this alone certifies nothing.
    """
    m = np.asarray(x).shape[-1]
    lb = extrapolate_limit(defect_sequence(u, x, BALL, radii, cfg, domain)).limit_value
    ls = extrapolate_limit(defect_sequence(u, x, SPHERE, radii, cfg, domain)).limit_value
    return abs((m + 2) * lb - m * ls)


def _profile_mismatch(kind: EquationKind, geometry: str, m: int, ux: float,
                      param: float, estimate: DefectEstimate) -> float:
    """Largest gap between measured defects and the exact solution profile
    defect(r) = u(x) * p^2 * (coefficient(p r) - 1)/(p r)^2 for frequency p."""
    worst = 0.0
    for r, d in zip(estimate.radii, estimate.defects):
        ratio = coefficient_defect_ratio(kind, geometry, m, param * r)
        worst = max(worst, abs(d - ux * param * param * ratio))
    return worst


def classify_point(u, x, radii, tol: float = 1e-6,
                   cfg: QuadratureConfig | None = None, domain=None) -> Classification:
    """Classify u at x as harmonic / metaharmonic / panharmonic, or neither.

    Both geometry limits are extrapolated; kappa = 2(m+2) L_ball / u(x) is
    cross-checked against 2m L_sphere / u(x) and the recovered frequency is
    validated against the per-radius defect profiles.  Points with
    |u(x)| <= tol are degenerate: every equation family predicts the same
    zero limit there, so the data cannot identify the sign of kappa.
    """
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    ball_est = extrapolate_limit(defect_sequence(u, x, BALL, radii, cfg, domain))
    sph_est = extrapolate_limit(defect_sequence(u, x, SPHERE, radii, cfg, domain))
    lb, ls = ball_est.limit_value, sph_est.limit_value
    ux = float(u(x))
    confidence = abs(2 * (m + 2) * lb - 2 * m * ls) / max(abs(lb), abs(ls), tol)

    def result(kind, parameter, status):
        return Classification(kind, parameter, confidence, x, lb, ls, status)

    if abs(ux) <= tol:
        return result(None, None, STATUS_DEGENERATE)
    if max(abs(lb), abs(ls)) <= tol:
        return result(EquationKind.harmonic(), 0.0, STATUS_OK)

    kappa_ball = 2.0 * (m + 2) * lb / ux
    kappa_sphere = 2.0 * m * ls / ux
    if abs(kappa_ball - kappa_sphere) > 10.0 * tol:
        return result(None, None, STATUS_INCONSISTENT)

    param = math.sqrt(abs(kappa_ball))
    if kappa_ball > 0:
        kind = EquationKind.panharmonic(param)
    else:
        kind = EquationKind.metaharmonic(param)

    profile_tol = 10.0 * tol * max(1.0, abs(ux) * (1.0 + abs(kappa_ball)))
    try:
        mismatch = max(
            _profile_mismatch(kind, BALL, m, ux, param, ball_est),
            _profile_mismatch(kind, SPHERE, m, ux, param, sph_est),
        )
    except CoefficientRangeError:
        return result(None, None, STATUS_INCONSISTENT)
    if mismatch > profile_tol:
        return result(None, None, STATUS_INCONSISTENT)
    return result(kind, param, STATUS_OK)


def self_referential_check(u, kind: EquationKind, x, r: float, radii=None,
                           cfg: QuadratureConfig | None = None, domain=None):
    """Residuals of the fixed-radius self-referential identities.

    For a solution of the given kind, the extrapolated defect limit equals
    (+-p^2) * M(u, r) / (factor * coefficient(p r)) at EVERY admissible r,
    where factor is 2(m+2) for the ball and 2m for the sphere.  Returns the
    (ball, sphere) residual pair.
    """
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    r = float(r)
    if radii is None:
        radii = [r * 0.5**k for k in range(4)]
    if domain is not None and not is_admissible(Ball(x, r), domain):
        raise InadmissibleRadiusError(f"ball of radius {r} at {x} is not admissible")

    signed_sq = kind.defect_sign * kind.parameter**2
    residuals = []
    for geometry, factor in ((BALL, 2.0 * (m + 2)), (SPHERE, 2.0 * m)):
        est = extrapolate_limit(defect_sequence(u, x, geometry, radii, cfg, domain))
        mean = _mean_for(geometry, u, Ball(x, r), cfg)
        coeff = mean_coefficient(kind, geometry, m, abs(kind.parameter) * r)
        rhs = signed_sq * mean / (factor * coeff)
        residuals.append(abs(est.limit_value - rhs))
    return tuple(residuals)
