"""Walk-on-spheres solver for the modified Helmholtz Dirichlet problem.

For a panharmonic function (lap u = mu^2 u) the sphere mean value equality
inverts to

    u(p) = E[ u(Y) ] / a(mu * rho),    Y uniform on the sphere of radius rho,

where a is the I-type sphere coefficient, so a walk that jumps to a uniform
point of the largest inscribed sphere and multiplies its weight by
1/a(mu*rho) at every jump is an unbiased estimator of u once it reads the
boundary data inside the capture shell.  The weights lie in (0, 1] because
a >= 1, so the estimator stays bounded; the analogous J-type weights of the
oscillatory (Helmholtz) equation exceed 1 and blow up near Bessel zeros,
which is why this solver refuses mu-like parameters for that family.

Walk randomness is counter-based per (seed, walk, step): results are
bit-identical for a given (seed, walks) regardless of batch size or thread
partition.
"""

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Domain
from .specialfn import mean_coefficient, normalized_bessel_i
from .streams import uniform, uniform_open
from .equations import PANHARMONIC, SPHERE


class StartOutsideDomain(ValueError):
    """Evaluation point is not strictly inside the domain."""


class AllWalksTruncated(RuntimeError):
    """No walk reached the capture shell within max_steps."""


@dataclass(frozen=True)
class WalkConfig:
    mu: float = 0.0
    epsilon_shell: float | None = None  # None -> 1e-4 * domain diameter
    max_steps: int = 10_000
    walks: int = 10_000
    seed: int = 0
    radius_fraction: float = 1.0

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError("mu must be >= 0 (0 selects the harmonic case)")
        if self.epsilon_shell is not None and not self.epsilon_shell > 0:
            raise ValueError("epsilon_shell must be positive")
        if self.max_steps < 1 or self.walks < 1:
            raise ValueError("max_steps and walks must be >= 1")
        if not 0 < self.radius_fraction <= 1:
            raise ValueError("radius_fraction must be in (0, 1]")


@dataclass(frozen=True)
class WalkResult:
    estimate: float
    standard_error: float
    walks_completed: int
    truncated_walks: int
    mean_steps: float
    mean_weight: float


def survival_weight(m: int, mu: float, rho: float) -> float:
    """Per-jump weight 1/a(mu*rho) for a jump sphere of radius rho; in (0, 1]."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    if mu < 0:
        raise ValueError("mu must be >= 0")
    if mu == 0:
        return 1.0
    return 1.0 / mean_coefficient(PANHARMONIC, SPHERE, m, mu * rho)


def _directions(seed: int, walk_ids: np.ndarray, step: int, m: int) -> np.ndarray:
    """Uniform unit vectors, one per walk, deterministic in (seed, walk, step)."""
    if m == 2:
        theta = 2.0 * np.pi * uniform(seed, walk_ids, step, 0)
        return np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    if m == 3:
        z = 2.0 * uniform(seed, walk_ids, step, 0) - 1.0
        phi = 2.0 * np.pi * uniform(seed, walk_ids, step, 1)
        s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=-1)
    # Box-Muller gaussians, normalized
    out = np.empty((walk_ids.size, m))
    for pair in range((m + 1) // 2):
        u1 = uniform_open(seed, walk_ids, step, 2 * pair)
        u2 = uniform(seed, walk_ids, step, 2 * pair + 1)
        radius = np.sqrt(-2.0 * np.log(u1))
        out[:, 2 * pair] = radius * np.cos(2.0 * np.pi * u2)
        if 2 * pair + 1 < m:
            out[:, 2 * pair + 1] = radius * np.sin(2.0 * np.pi * u2)
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def _run_batch(domain, g, starts, walk_ids, mu, eps, max_steps, seed,
               radius_fraction, score, steps_out, weight_out, truncated_out):
    """March one batch of walks to the capture shell, writing per-walk results."""
    m = domain.dimension
    nu = (m - 2) / 2.0
    pos = np.array(starts, dtype=float)
    w = np.ones(len(pos))
    ids = np.asarray(walk_ids)
    local = np.arange(len(pos))

    def settle(sel_local, sel_pos, sel_w, n_steps, is_truncated):
        boundary = domain.project_to_boundary(sel_pos)
        score[sel_local] = sel_w * np.asarray(g(boundary), dtype=float)
        steps_out[sel_local] = n_steps
        weight_out[sel_local] = sel_w
        truncated_out[sel_local] = is_truncated

    dist = domain.distance_to_boundary(pos)
    for step in range(max_steps + 1):
        captured = dist <= eps
        if np.any(captured):
            settle(local[captured], pos[captured], w[captured], step, False)
            keep = ~captured
            pos, w, dist = pos[keep], w[keep], dist[keep]
            local, ids = local[keep], ids[keep]
        if local.size == 0:
            break
        if step == max_steps:
            settle(local, pos, w, max_steps, True)
            break
        rho = radius_fraction * dist
        pos = pos + rho[:, None] * _directions(seed, ids, step, m)
        if mu > 0:
            w = w / normalized_bessel_i(nu, mu * rho)
        dist = domain.distance_to_boundary(pos)


def _simulate(domain: Domain, g, starts: np.ndarray, cfg: WalkConfig,
              batch_size: int | None):
    n = len(starts)
    eps = cfg.epsilon_shell if cfg.epsilon_shell is not None else 1e-4 * domain.diameter()
    score = np.zeros(n)
    steps = np.zeros(n, dtype=np.int64)
    weight = np.ones(n)
    truncated = np.zeros(n, dtype=bool)
    size = n if batch_size is None else max(1, int(batch_size))
    for lo in range(0, n, size):
        hi = min(lo + size, n)
        _run_batch(
            domain, g, starts[lo:hi], np.arange(lo, hi), cfg.mu, eps,
            cfg.max_steps, cfg.seed, cfg.radius_fraction,
            score[lo:hi], steps[lo:hi], weight[lo:hi], truncated[lo:hi],
        )
    return score, steps, weight, truncated


def _result_from(score, steps, weight, truncated) -> WalkResult:
    n = len(score)
    n_trunc = int(np.count_nonzero(truncated))
    if n_trunc == n:
        raise AllWalksTruncated(
            "no walk reached the capture shell; increase max_steps or epsilon_shell"
        )
    se = float(np.std(score, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return WalkResult(
        estimate=float(np.mean(score)),
        standard_error=se,
        walks_completed=n - n_trunc,
        truncated_walks=n_trunc,
        mean_steps=float(np.mean(steps)),
        mean_weight=float(np.mean(weight)),
    )


def solve_dirichlet(d: Domain, g, x, cfg: WalkConfig,
                    batch_size: int | None = None) -> WalkResult:
    """Estimate the solution of lap u = mu^2 u, u = g on the boundary, at x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (d.dimension,):
        raise ValueError(f"point must have shape ({d.dimension},)")
    if float(d.signed_distance(x)) >= 0:
        raise StartOutsideDomain(f"point {x} is not strictly inside the domain")
    starts = np.broadcast_to(x, (cfg.walks, d.dimension))
    return _result_from(*_simulate(d, g, starts, cfg, batch_size))


def solve_dirichlet_grid(d: Domain, g, points, cfg: WalkConfig,
                         batch_size: int | None = 1_000_000):
    """Run cfg.walks independent walks from each of several points.

    Returns (estimates, standard_errors) arrays over the points; walk
    indices are global, so results match a point-by-point run with the
    same layout.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, d.dimension)
    if np.any(d.signed_distance(pts) >= 0):
        raise StartOutsideDomain("all grid points must be strictly inside the domain")
    starts = np.repeat(pts, cfg.walks, axis=0)
    score, _, _, truncated = _simulate(d, g, starts, cfg, batch_size)
    if np.all(truncated):
        raise AllWalksTruncated("no walk reached the capture shell")
    per_point = score.reshape(len(pts), cfg.walks)
    estimates = per_point.mean(axis=1)
    ses = per_point.std(axis=1, ddof=1) / math.sqrt(cfg.walks)
    return estimates, ses
