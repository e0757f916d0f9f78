"""Independent extended-precision oracles used to freeze expected values.

These deliberately avoid the package's code paths: plain mpmath summation
at 40 digits, scipy.special for cross-checks.  Test expectations computed
here are frozen as literals in the test modules; these helpers remain for
grid-based property checks.
"""

from mpmath import mp, mpf

mp.dps = 40


def itilde(nu, t) -> float:
    """Gamma(nu+1) I_nu(t) / (t/2)^nu by direct high-precision summation."""
    t, nu = mpf(t), mpf(nu)
    total, term, x = mpf(1), mpf(1), t * t / 4
    for k in range(1, 400):
        term *= x / (k * (nu + k))
        total += term
        if abs(term) < mpf("1e-45") * abs(total):
            break
    return float(total)


def jtilde(nu, t) -> float:
    """Gamma(nu+1) J_nu(t) / (t/2)^nu by direct high-precision summation."""
    t, nu = mpf(t), mpf(nu)
    total, term, x = mpf(1), mpf(1), t * t / 4
    for k in range(1, 400):
        term *= -x / (k * (nu + k))
        total += term
        if abs(term) < mpf("1e-45"):
            break
    return float(total)
