"""Balls, signed-distance domains, and numerical ball/sphere means.

Mean values are the raw material for everything downstream, so the
deterministic rules aim at ~1e-12 accuracy:

    m = 2 sphere: N-point trapezoid on the circle (spectral for smooth u)
    m = 3 sphere: Gauss-Legendre in cos(polar) x trapezoid in azimuth
    m = 2,3 ball: Gauss-Legendre in radius (weight s^{m-1}) over sphere shells
    m >= 4:       Monte Carlo (normalized Gaussians on the sphere,
                  radius ~ U^{1/m} inside the ball)

Deterministic rules double their resolution until two successive estimates
agree to cfg.target_tol (at most cfg.max_doublings times); the reported
error_bound is the last disagreement, or the sample standard error for the
Monte Carlo path.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

_ADMISSIBLE_TOL = 1e-12


@dataclass(frozen=True)
class Ball:
    """Open ball in R^m given by center and radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        if center.ndim != 1 or center.size < 2:
            raise ValueError("center must be a 1-d point with dimension >= 2")
        if not (self.radius > 0):
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dimension(self) -> int:
        return self.center.size


@dataclass(frozen=True)
class Domain:
    """Region of R^m described by a signed distance oracle (negative inside).

    ``signed_distance`` must accept points of shape (..., m) and return
    shape (...).  ``project`` maps points to (approximately) the nearest
    boundary point; when absent a finite-difference gradient step is used.
    """

    dimension: int
    signed_distance: Callable
    bounding_box: tuple
    project: Callable | None = None
    label: str = ""

    def distance_to_boundary(self, points):
        return -self.signed_distance(points)

    def diameter(self) -> float:
        lo, hi = self.bounding_box
        return float(np.linalg.norm(np.asarray(hi, float) - np.asarray(lo, float)))

    def project_to_boundary(self, points):
        if self.project is not None:
            return self.project(points)
        return _project_via_gradient(self, points)


def _project_via_gradient(domain: Domain, points):
    # one Newton step along the finite-difference gradient of the SDF;
    # adequate inside the epsilon shell where |sd| is already tiny
    pts = np.asarray(points, dtype=float)
    h = 1e-6
    sd = domain.signed_distance(pts)[..., None]
    grad = np.empty_like(pts)
    for i in range(domain.dimension):
        step = np.zeros(domain.dimension)
        step[i] = h
        grad[..., i] = (
            domain.signed_distance(pts + step) - domain.signed_distance(pts - step)
        ) / (2 * h)
    norm = np.linalg.norm(grad, axis=-1, keepdims=True)
    norm = np.where(norm == 0, 1.0, norm)
    return pts - sd * grad / norm


def ball_domain(center, radius: float, label: str = "ball") -> Domain:
    center = np.asarray(center, dtype=float)
    radius = float(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")

    def sd(p):
        return np.linalg.norm(np.asarray(p, float) - center, axis=-1) - radius

    def project(p):
        rel = np.asarray(p, float) - center
        norm = np.linalg.norm(rel, axis=-1, keepdims=True)
        norm = np.where(norm == 0, 1.0, norm)
        return center + rel * (radius / norm)

    box = (center - radius, center + radius)
    return Domain(center.size, sd, box, project, label)


def box_domain(lo, hi, label: str = "box") -> Domain:
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if lo.shape != hi.shape or np.any(lo >= hi):
        raise ValueError("box corners must satisfy lo < hi componentwise")

    def sd(p):
        p = np.asarray(p, float)
        q = np.maximum(lo - p, p - hi)
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
        inside = np.minimum(np.max(q, axis=-1), 0.0)
        return outside + inside

    def project(p):
        p = np.asarray(p, float)
        shape = p.shape
        flat = np.clip(p.reshape(-1, lo.size), lo, hi)
        inside = np.max(np.maximum(lo - flat, flat - hi), axis=-1) < 0
        if np.any(inside):
            # snap interior points to their nearest face
            q = flat[inside]
            d_lo, d_hi = q - lo, hi - q
            axis = np.argmin(np.minimum(d_lo, d_hi), axis=-1)
            rows = np.arange(q.shape[0])
            to_hi = d_hi[rows, axis] < d_lo[rows, axis]
            q[rows, axis] = np.where(to_hi, hi[axis], lo[axis])
            flat[inside] = q
        return flat.reshape(shape)

    return Domain(lo.size, sd, (lo, hi), project, label)


def annulus_domain(center, outer_radius: float, inner_radius: float,
                   label: str = "annulus") -> Domain:
    """Difference of a ball and a smaller concentric ball (exact SDF)."""
    center = np.asarray(center, dtype=float)
    if not (0 < inner_radius < outer_radius):
        raise ValueError("need 0 < inner_radius < outer_radius")

    def sd(p):
        r = np.linalg.norm(np.asarray(p, float) - center, axis=-1)
        return np.maximum(r - outer_radius, inner_radius - r)

    def project(p):
        rel = np.asarray(p, float) - center
        r = np.linalg.norm(rel, axis=-1, keepdims=True)
        r = np.where(r == 0, 1.0, r)
        target = np.where(r - outer_radius >= inner_radius - r,
                          outer_radius, inner_radius)
        return center + rel * (target / r)

    box = (center - outer_radius, center + outer_radius)
    return Domain(center.size, sd, box, project, label)


def check_lipschitz(domain: Domain, n_pairs: int = 200, seed: int = 0,
                    tol: float = 1e-9) -> bool:
    """Spot-check |sd(a)-sd(b)| <= |a-b| + tol on random pairs in the box."""
    rng = np.random.default_rng(seed)
    lo, hi = (np.asarray(v, float) for v in domain.bounding_box)
    span = hi - lo
    a = lo + span * rng.random((n_pairs, domain.dimension))
    b = lo + span * rng.random((n_pairs, domain.dimension))
    gap = np.abs(domain.signed_distance(a) - domain.signed_distance(b))
    return bool(np.all(gap <= np.linalg.norm(a - b, axis=-1) + tol))


def unit_ball_volume(m: int) -> float:
    """omega_m = 2 pi^{m/2} / (m Gamma(m/2))."""
    if m < 2 or m != int(m):
        raise ValueError("dimension must be an integer >= 2")
    m = int(m)
    return 2.0 * math.pi ** (m / 2.0) / (m * math.gamma(m / 2.0))


def ball_volume(m: int, r: float) -> float:
    return unit_ball_volume(m) * r**m


def sphere_area(m: int, r: float) -> float:
    return m * unit_ball_volume(m) * r ** (m - 1)


def is_admissible(b: Ball, d: Domain, tol: float = _ADMISSIBLE_TOL) -> bool:
    """True iff the closed ball lies inside the domain."""
    if b.dimension != d.dimension:
        raise ValueError(
            f"dimension mismatch: ball is {b.dimension}-d, domain is {d.dimension}-d"
        )
    return float(d.signed_distance(b.center)) <= -b.radius - tol


@dataclass(frozen=True)
class MeanEstimate:
    """Numerical mean with an error bound and the rule that produced it."""

    value: float
    error_bound: float
    method: str
    samples: int

    def __post_init__(self):
        if self.error_bound < 0 or self.samples < 1:
            raise ValueError("error_bound must be >= 0 and samples >= 1")


@dataclass(frozen=True)
class QuadratureConfig:
    circle_nodes: int = 64
    polar_nodes: int = 32
    azimuth_nodes: int = 64
    radial_nodes: int = 32
    mc_samples: int = 100_000
    seed: int = 0
    target_tol: float = 1e-12
    max_doublings: int = 4

    def __post_init__(self):
        for name in ("circle_nodes", "polar_nodes", "azimuth_nodes", "radial_nodes"):
            if getattr(self, name) < 4:
                raise ValueError(f"{name} must be >= 4")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")


_DEFAULT_CFG = QuadratureConfig()


def _unit_sphere_grid(m: int, cfg: QuadratureConfig, level: int):
    """Unit-sphere quadrature nodes (..., m) and weights summing to 1."""
    if m == 2:
        n = cfg.circle_nodes << level
        theta = 2.0 * np.pi * np.arange(n) / n
        pts = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return pts, np.full(n, 1.0 / n)
    z, w = np.polynomial.legendre.leggauss(cfg.polar_nodes << level)
    n_az = cfg.azimuth_nodes << level
    phi = 2.0 * np.pi * np.arange(n_az) / n_az
    s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    x = s[:, None] * np.cos(phi)[None, :]
    y = s[:, None] * np.sin(phi)[None, :]
    zz = np.broadcast_to(z[:, None], x.shape)
    pts = np.stack([x, y, zz], axis=-1).reshape(-1, 3)
    weights = np.repeat(w / (2.0 * n_az), n_az)
    return pts, weights


def _sphere_rule(u, ball: Ball, cfg: QuadratureConfig, level: int) -> float:
    pts, weights = _unit_sphere_grid(ball.dimension, cfg, level)
    vals = np.asarray(u(ball.center + ball.radius * pts), dtype=float)
    return float(vals @ weights)


def _ball_rule(u, ball: Ball, cfg: QuadratureConfig, level: int) -> float:
    # mean over ball = (m / r^m) * int_0^r shell_mean(s) s^{m-1} ds,
    # radial integral by Gauss-Legendre, shells by the sphere rule
    m = ball.dimension
    nodes, radial_w = np.polynomial.legendre.leggauss(cfg.radial_nodes << level)
    s = 0.5 * ball.radius * (nodes + 1.0)  # map [-1,1] -> [0,r]
    sphere_pts, sphere_w = _unit_sphere_grid(m, cfg, level)
    pts = ball.center + s[:, None, None] * sphere_pts[None, :, :]
    vals = np.asarray(u(pts), dtype=float)
    shell_means = vals @ sphere_w
    integral = 0.5 * ball.radius * np.sum(radial_w * shell_means * s ** (m - 1))
    return float(m * integral / ball.radius**m)


def _deterministic_mean(rule, u, ball, cfg, method, evals_per_level) -> MeanEstimate:
    prev = rule(u, ball, cfg, 0)
    if cfg.max_doublings < 1:
        return MeanEstimate(prev, np.inf, method, evals_per_level(0))
    level = 1
    current = rule(u, ball, cfg, level)
    while (
        abs(current - prev) > cfg.target_tol * max(1.0, abs(current))
        and level < cfg.max_doublings
    ):
        prev = current
        level += 1
        current = rule(u, ball, cfg, level)
    return MeanEstimate(current, abs(current - prev), method, evals_per_level(level))


def uniform_sphere_points(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """n points uniform on the unit sphere in R^m (normalized Gaussians)."""
    v = rng.standard_normal((n, m))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def uniform_ball_points(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """n points uniform in the unit ball (radius from the inverse CDF U^{1/m})."""
    d = uniform_sphere_points(rng, n, m)
    return d * rng.random((n, 1)) ** (1.0 / m)


def _mc_mean(u, ball: Ball, cfg: QuadratureConfig, on_sphere: bool) -> MeanEstimate:
    rng = np.random.default_rng(cfg.seed)
    m, n = ball.dimension, cfg.mc_samples
    unit = (
        uniform_sphere_points(rng, n, m) if on_sphere else uniform_ball_points(rng, n, m)
    )
    vals = np.asarray(u(ball.center + ball.radius * unit), dtype=float)
    se = float(np.std(vals, ddof=1) / math.sqrt(n)) if n > 1 else np.inf
    return MeanEstimate(float(np.mean(vals)), se, "MonteCarlo", n)


def sphere_mean(u, b: Ball, cfg: QuadratureConfig | None = None) -> MeanEstimate:
    """Average of u over the bounding sphere of b."""
    cfg = cfg or _DEFAULT_CFG
    if b.dimension == 2:
        return _deterministic_mean(
            _sphere_rule, u, b, cfg, "TrapezoidCircle",
            lambda lv: cfg.circle_nodes << lv,
        )
    if b.dimension == 3:
        return _deterministic_mean(
            _sphere_rule, u, b, cfg, "ProductSphere3D",
            lambda lv: (cfg.polar_nodes << lv) * (cfg.azimuth_nodes << lv),
        )
    return _mc_mean(u, b, cfg, on_sphere=True)


def ball_mean(u, b: Ball, cfg: QuadratureConfig | None = None) -> MeanEstimate:
    """Average of u over the solid ball b."""
    cfg = cfg or _DEFAULT_CFG
    if b.dimension in (2, 3):
        if b.dimension == 2:
            per_shell = lambda lv: cfg.circle_nodes << lv
        else:
            per_shell = lambda lv: (cfg.polar_nodes << lv) * (cfg.azimuth_nodes << lv)
        return _deterministic_mean(
            _ball_rule, u, b, cfg, "GaussRadial",
            lambda lv: (cfg.radial_nodes << lv) * per_shell(lv),
        )
    return _mc_mean(u, b, cfg, on_sphere=False)
