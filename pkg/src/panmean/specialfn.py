"""Normalized Bessel series and the ball/sphere mean-value coefficients.

Everything here is built on the two entire functions

    itilde_nu(t) = Gamma(nu+1) I_nu(t) / (t/2)^nu
               = sum_{k>=0} (t^2/4)^k / (k! (nu+1)(nu+2)...(nu+k))
    jtilde_nu(t) = Gamma(nu+1) J_nu(t) / (t/2)^nu
               = sum_{k>=0} (-1)^k (t^2/4)^k / (k! (nu+1)...(nu+k))

with itilde_nu(0) = jtilde_nu(0) = 1.  The raw Gamma-times-Bessel quotients
are never formed: dividing near-zero by near-zero at small t is exactly the
trap the normalized series avoids, and the Gamma ratios collapse into the
running products above.

The mean-value coefficient of a solution family over a ball or sphere of
scaled radius t is then

    panharmonic:   itilde_{m/2}(t)  (ball),  itilde_{(m-2)/2}(t)  (sphere)
    metaharmonic:  jtilde_{m/2}(t)  (ball),  jtilde_{(m-2)/2}(t)  (sphere)
    harmonic:      1

and (coefficient(t) - 1)/t^2 -> +-1/(2(m+2)) resp. +-1/(2m) as t -> 0.
"""

from fractions import Fraction

import numpy as np

from .equations import (
    BALL,
    EquationKind,
    FAMILIES,
    HARMONIC,
    METAHARMONIC,
    PANHARMONIC,
    validate_geometry,
)

# Cancellation in the alternating series grows like its largest term
# (~1e11 at t=30), so double-precision summation is only trusted up to
# _J_EXACT_THRESHOLD; beyond that, terms are summed in exact rational
# arithmetic and rounded once.  Past 30 the argument is out of range: the
# classifier and the walk-on-spheres weights only ever need small t.
J_MAX_ARGUMENT = 30.0
_J_EXACT_THRESHOLD = 10.0

_MAX_TERMS = 200
_TERM_STOP = 1e-17


class CoefficientRangeError(ValueError):
    """Argument outside the supported range of the J-type series."""


def _validate_order(nu: float) -> float:
    nu = float(nu)
    two_nu = 2.0 * nu
    if nu < 0 or two_nu != round(two_nu):
        raise ValueError(f"order must be a nonnegative half-integer, got {nu}")
    return nu


def _validate_argument(t):
    arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise ValueError("argument must be nonnegative and not NaN")
    if np.any(np.isinf(arr)):
        raise ValueError("argument must be finite")
    return arr


def _series(nu: float, t: np.ndarray, sign: float) -> np.ndarray:
    """sum_k (sign)^k (t^2/4)^k / (k! (nu+1)...(nu+k)), compensated."""
    x = sign * (t * t) / 4.0
    total = np.ones_like(t)
    comp = np.zeros_like(t)  # Kahan carry; costs nothing for the positive case
    term = np.ones_like(t)
    for k in range(1, _MAX_TERMS + 1):
        term = term * (x / (k * (nu + k)))
        y = term - comp
        new = total + y
        comp = (new - total) - y
        total = new
        if not np.all(np.isfinite(total)):
            raise OverflowError("series overflow: argument too large")
        if np.all((np.abs(term) < _TERM_STOP * np.abs(total)) | (term == 0.0)):
            return total
    raise OverflowError(
        f"series did not converge within {_MAX_TERMS} terms; argument too large"
    )


def _defect_ratio_series(nu: float, t: np.ndarray, sign: float) -> np.ndarray:
    """(series(t) - 1)/t^2 without forming the cancellation-prone difference."""
    x = sign * (t * t) / 4.0
    term = np.full_like(t, sign / (4.0 * (nu + 1.0)))
    total = term.copy()
    for k in range(2, _MAX_TERMS + 1):
        term = term * (x / (k * (nu + k)))
        total = total + term
        if not np.all(np.isfinite(total)):
            raise OverflowError("series overflow: argument too large")
        if np.all(
            (np.abs(term) < _TERM_STOP * np.maximum(np.abs(total), 1e-300))
            | (term == 0.0)
        ):
            return total
    raise OverflowError(
        f"series did not converge within {_MAX_TERMS} terms; argument too large"
    )


def _series_tracked(nu: float, t: np.ndarray):
    """J-type series plus the running max |term|, which bounds cancellation."""
    x = -(t * t) / 4.0
    total = np.ones_like(t)
    comp = np.zeros_like(t)
    term = np.ones_like(t)
    largest = np.ones_like(t)
    for k in range(1, _MAX_TERMS + 1):
        term = term * (x / (k * (nu + k)))
        np.maximum(largest, np.abs(term), out=largest)
        y = term - comp
        new = total + y
        comp = (new - total) - y
        total = new
        if not np.all(np.isfinite(total)):
            raise OverflowError("series overflow: argument too large")
        if np.all((np.abs(term) < _TERM_STOP * np.abs(total)) | (term == 0.0)):
            return total, largest
    raise OverflowError(
        f"series did not converge within {_MAX_TERMS} terms; argument too large"
    )


def _jtilde_exact(nu: float, t: float) -> float:
    """Alternating series in exact rational arithmetic, rounded once."""
    two_nu = int(round(2 * nu))
    tsq = Fraction(t) ** 2
    total = term = Fraction(1)
    tail_floor = Fraction(1, 10**40)
    for k in range(1, 2 * _MAX_TERMS + 1):
        # (t^2/4) / (k (nu + k)) == t^2 / (2k (2 nu + 2k))
        term *= -tsq / ((2 * k) * (two_nu + 2 * k))
        total += term
        if abs(term) < tail_floor:
            return float(total)
    raise OverflowError("series did not converge; argument too large")


def _j_values(nu: float, arr: np.ndarray) -> np.ndarray:
    flat = arr.reshape(-1)
    vals, largest = _series_tracked(nu, flat)
    # refine elements where the cancellation bound (a few eps of the largest
    # term) threatens 1e-12 relative accuracy -- large t, or near a zero
    eps = np.finfo(float).eps
    need = 8.0 * eps * largest >= 1e-12 * np.abs(vals)
    for i in np.nonzero(need)[0]:
        vals[i] = _jtilde_exact(nu, float(flat[i]))
    return vals.reshape(arr.shape)


def _as_output(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


def normalized_bessel_i(nu: float, t):
    """itilde_nu(t) for scalar or array t >= 0; always >= 1.

    Relative error <= 1e-13 on t in [0, 30]; raises OverflowError once the
    positive-term series exceeds the double range.
    """
    nu = _validate_order(nu)
    arr = _validate_argument(t)
    return _as_output(_series(nu, arr, +1.0), np.isscalar(t))


def normalized_bessel_j(nu: float, t):
    """jtilde_nu(t) for scalar or array t in [0, 30]; always <= 1.

    Compensated double summation, with exact rational refinement of the
    elements where alternating-series cancellation (or proximity to a zero
    of J_nu) would break 1e-12 relative accuracy.
    """
    nu = _validate_order(nu)
    arr = _validate_argument(t)
    if np.any(arr > J_MAX_ARGUMENT):
        raise CoefficientRangeError(
            f"J-type series supported for t <= {J_MAX_ARGUMENT}"
        )
    return _as_output(_j_values(nu, arr), np.isscalar(t))


def _family_of(kind) -> str:
    if isinstance(kind, EquationKind):
        return kind.family
    if kind in FAMILIES:
        return kind
    raise ValueError(f"expected an EquationKind or one of {FAMILIES}, got {kind!r}")


def _order_for(geometry: str, m: int) -> float:
    if m < 2 or m != int(m):
        raise ValueError("dimension must be an integer >= 2")
    return m / 2.0 if geometry == BALL else (m - 2) / 2.0


def mean_coefficient(kind, geometry: str, m: int, t):
    """Exact factor relating the ball/sphere mean of a solution to its center value.

    t is the scaled radius (mu*r or lam*r); ignored for the harmonic family,
    whose coefficient is identically 1.
    """
    family = _family_of(kind)
    geometry = validate_geometry(geometry)
    if m < 2 or m != int(m):
        raise ValueError("dimension must be an integer >= 2")
    arr = _validate_argument(t)
    if family == HARMONIC:
        return _as_output(np.ones_like(arr), np.isscalar(t))
    nu = _order_for(geometry, int(m))
    if family == PANHARMONIC:
        return _as_output(_series(nu, arr, +1.0), np.isscalar(t))
    if np.any(arr > J_MAX_ARGUMENT):
        raise CoefficientRangeError(
            f"J-type series supported for t <= {J_MAX_ARGUMENT}"
        )
    return _as_output(_j_values(nu, arr), np.isscalar(t))


def coefficient_defect_limit(kind, geometry: str, m: int) -> float:
    """lim_{t->0} (coefficient(t) - 1)/t^2: +-1/(2(m+2)) ball, +-1/(2m) sphere."""
    family = _family_of(kind)
    geometry = validate_geometry(geometry)
    if m < 2 or m != int(m):
        raise ValueError("dimension must be an integer >= 2")
    if family == HARMONIC:
        return 0.0
    magnitude = 1.0 / (2.0 * (m + 2)) if geometry == BALL else 1.0 / (2.0 * m)
    return magnitude if family == PANHARMONIC else -magnitude


def coefficient_defect_ratio(kind, geometry: str, m: int, t):
    """(mean_coefficient(t) - 1)/t^2 evaluated cancellation-free.

    Continuous at t = 0 where it equals coefficient_defect_limit exactly.
    """
    family = _family_of(kind)
    geometry = validate_geometry(geometry)
    if m < 2 or m != int(m):
        raise ValueError("dimension must be an integer >= 2")
    arr = _validate_argument(t)
    if family == HARMONIC:
        return _as_output(np.zeros_like(arr), np.isscalar(t))
    nu = _order_for(geometry, int(m))
    if family == PANHARMONIC:
        return _as_output(_defect_ratio_series(nu, arr, +1.0), np.isscalar(t))
    if np.any(arr > J_MAX_ARGUMENT):
        raise CoefficientRangeError(
            f"J-type series supported for t <= {J_MAX_ARGUMENT}"
        )
    flat = arr.reshape(-1)
    small = flat <= _J_EXACT_THRESHOLD
    out = np.empty_like(flat)
    out[small] = _defect_ratio_series(nu, flat[small], -1.0)
    for i in np.nonzero(~small)[0]:
        # far from 0 the direct quotient no longer cancels
        ti = float(flat[i])
        out[i] = (_jtilde_exact(nu, ti) - 1.0) / (ti * ti)
    return _as_output(out.reshape(arr.shape), np.isscalar(t))
