"""Catalogue of closed-form test fields with known equation labels.

Each field carries a vectorized evaluator (arrays of shape (..., m) in,
shape (...) out), the equation it solves (or None for the deliberate
non-solutions), and an exact Laplacian.  The radial families are evaluated
through the same normalized Bessel series as the coefficient code, which
keeps them finite and accurate through the removable singularity at the
origin.

Negative controls are fields whose Laplacian-to-value ratio is either
non-constant (sq_norm, exp_plus_linear) or locked to a different frequency
(exp_2mu_x1, which solves the modified Helmholtz equation with parameter
2*mu, not mu).
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .equations import EquationKind
from .specialfn import normalized_bessel_i, normalized_bessel_j


@dataclass(frozen=True)
class ScalarField:
    """Real function on R^m with analytic metadata."""

    label: str
    dimension: int
    evaluator: Callable
    kind: EquationKind | None = None
    laplacian: Callable | None = None

    def __call__(self, x):
        return self.evaluator(np.asarray(x, dtype=float))


def _radius(x):
    return np.linalg.norm(x, axis=-1)


def _plane_and_poly_fields(m: int, mu: float, lam: float) -> list:
    har = EquationKind.harmonic()
    pan = EquationKind.panharmonic(mu)
    met = EquationKind.metaharmonic(lam)
    fields = [
        ScalarField(
            "const_one", m,
            lambda x: np.ones(x.shape[:-1]),
            har, lambda x: np.zeros(x.shape[:-1]),
        ),
        ScalarField(
            "coord_x1", m,
            lambda x: x[..., 0],
            har, lambda x: np.zeros(x.shape[:-1]),
        ),
        ScalarField(
            "harmonic_xy", m,
            lambda x: x[..., 0] * x[..., 1],
            har, lambda x: np.zeros(x.shape[:-1]),
        ),
        ScalarField(
            "harmonic_saddle", m,
            lambda x: x[..., 0] ** 2 - x[..., 1] ** 2,
            har, lambda x: np.zeros(x.shape[:-1]),
        ),
        ScalarField(
            "exp_mu_x1", m,
            lambda x: np.exp(mu * x[..., 0]),
            pan, lambda x: mu * mu * np.exp(mu * x[..., 0]),
        ),
        ScalarField(
            "cos_lambda_x1", m,
            lambda x: np.cos(lam * x[..., 0]),
            met, lambda x: -lam * lam * np.cos(lam * x[..., 0]),
        ),
        ScalarField(
            "sin_lambda_x1", m,
            lambda x: np.sin(lam * x[..., 0]),
            met, lambda x: -lam * lam * np.sin(lam * x[..., 0]),
        ),
        # --- deliberate non-solutions ---
        ScalarField(
            "sq_norm", m,
            lambda x: np.sum(x * x, axis=-1),
            None, lambda x: np.full(x.shape[:-1], 2.0 * m),
        ),
        ScalarField(
            "exp_plus_linear", m,
            lambda x: np.exp(x[..., 0]) + x[..., 1],
            None, lambda x: np.exp(x[..., 0]),
        ),
        ScalarField(
            "exp_2mu_x1", m,
            lambda x: np.exp(2.0 * mu * x[..., 0]),
            None, lambda x: 4.0 * mu * mu * np.exp(2.0 * mu * x[..., 0]),
        ),
    ]
    return fields


def _radial_fields(m: int, mu: float, lam: float) -> list:
    pan = EquationKind.panharmonic(mu)
    met = EquationKind.metaharmonic(lam)
    if m == 2:
        return [
            ScalarField(
                "pan_radial_i0", 2,
                lambda x: normalized_bessel_i(0.0, mu * _radius(x)),
                pan,
                lambda x: mu * mu * normalized_bessel_i(0.0, mu * _radius(x)),
            ),
            ScalarField(
                "meta_radial_j0", 2,
                lambda x: normalized_bessel_j(0.0, lam * _radius(x)),
                met,
                lambda x: -lam * lam * normalized_bessel_j(0.0, lam * _radius(x)),
            ),
        ]
    if m == 3:
        pole = np.array([2.0, 0.0, 0.0])
        return [
            ScalarField(
                "pan_radial_sinh", 3,
                lambda x: normalized_bessel_i(0.5, mu * _radius(x)),
                pan,
                lambda x: mu * mu * normalized_bessel_i(0.5, mu * _radius(x)),
            ),
            ScalarField(
                "meta_radial_sinc", 3,
                lambda x: normalized_bessel_j(0.5, lam * _radius(x)),
                met,
                lambda x: -lam * lam * normalized_bessel_j(0.5, lam * _radius(x)),
            ),
            ScalarField(
                "harmonic_newtonian", 3,
                lambda x: 1.0 / _radius(x - pole),
                EquationKind.harmonic(),
                lambda x: np.zeros(x.shape[:-1]),
            ),
        ]
    raise ValueError(f"radial families are only catalogued for m in {{2, 3}}, got m={m}")


def catalogue(m: int, mu: float = 1.0, lam: float = 1.0) -> list:
    """All catalogued fields for dimension m (plane-wave families only for m > 3)."""
    if m < 2 or m != int(m):
        raise ValueError("dimension must be an integer >= 2")
    m = int(m)
    fields = _plane_and_poly_fields(m, mu, lam)
    if m in (2, 3):
        fields.extend(_radial_fields(m, mu, lam))
    return fields


def field_by_label(m: int, label: str, mu: float = 1.0, lam: float = 1.0) -> ScalarField:
    radial_labels = {
        "pan_radial_i0", "meta_radial_j0",
        "pan_radial_sinh", "meta_radial_sinc", "harmonic_newtonian",
    }
    for f in catalogue(m, mu, lam):
        if f.label == label:
            return f
    if label in radial_labels:
        raise ValueError(f"field {label!r} is not available in dimension {m}")
    known = sorted(f.label for f in catalogue(2, mu, lam) + catalogue(3, mu, lam))
    raise KeyError(f"unknown field label {label!r}; known: {sorted(set(known))}")


def finite_difference_laplacian(u, x, h: float = 1e-4):
    """Second-order central-difference Laplacian of any callable field."""
    x = np.asarray(x, dtype=float)
    if h <= 0:
        raise ValueError("step must be positive")
    m = x.shape[-1]
    offsets = np.concatenate([h * np.eye(m), -h * np.eye(m), np.zeros((1, m))])
    vals = np.asarray(u(x[..., None, :] + offsets), dtype=float)
    return (np.sum(vals[..., : 2 * m], axis=-1) - 2.0 * m * vals[..., 2 * m]) / (h * h)


def residual(u: ScalarField, kind: EquationKind, x, h: float = 1e-4):
    """Equation residual lap(u) + c*u at x: exact Laplacian when the field
    carries one, otherwise the O(h^2) central-difference stencil."""
    x = np.asarray(x, dtype=float)
    lap = u.laplacian(x) if u.laplacian is not None else finite_difference_laplacian(u, x, h)
    return lap + kind.zeroth_order_coefficient * u(x)
