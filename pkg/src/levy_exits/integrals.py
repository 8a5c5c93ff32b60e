"""Closed forms and quadrature for tempered power-law integrals."""

import math

from scipy import integrate, special

QUAD_EPSREL = 1e-10


def power_moment(c: float, p: float, theta: float, lo: float, hi: float) -> float:
    """Return c * integral over [lo, hi] of x**p * exp(-theta * x) dx.

    0 <= lo, hi may be +inf. Divergent integrals return +inf. Closed forms are
    used whenever they exist; the remaining case (theta > 0 and p <= -1,
    i.e. jump rates) goes through adaptive quadrature.
    """
    if c == 0.0 or hi <= lo:
        return 0.0
    s = p + 1.0

    if theta == 0.0:
        if s == 0.0:
            if lo == 0.0 or math.isinf(hi):
                return math.inf
            return c * math.log(hi / lo)
        if s < 0.0:
            if lo == 0.0:
                return math.inf
            upper = 0.0 if math.isinf(hi) else hi**s
            return c * (upper - lo**s) / s
        if math.isinf(hi):
            return math.inf
        return c * (hi**s - lo**s) / s

    if s > 0.0:
        scale = c * theta ** (-s) * special.gamma(s)
        # Pick the tail that keeps the difference well conditioned
        if theta * lo > s:
            return scale * (special.gammaincc(s, theta * lo) - special.gammaincc(s, theta * hi))
        return scale * (special.gammainc(s, theta * hi) - special.gammainc(s, theta * lo))

    if lo == 0.0:
        return math.inf
    return c * _tempered_quad(p, theta, lo, hi)


def _tempered_quad(p: float, theta: float, lo: float, hi: float) -> float:
    """Adaptive quadrature of x**p * exp(-theta x) on [lo, hi], theta > 0, lo > 0."""
    knee = max(lo, 1.0 / theta)
    total = 0.0

    if knee > lo:
        # Log substitution x = e^u keeps the body smooth over many decades
        upper = min(knee, hi)
        value, _ = integrate.quad(
            lambda u: math.exp((p + 1.0) * u - theta * math.exp(u)),
            math.log(lo),
            math.log(upper),
            epsabs=0.0,
            epsrel=QUAD_EPSREL,
            limit=200,
        )
        total += value

    if hi > knee:
        value, _ = integrate.quad(
            lambda x: x**p * math.exp(-theta * x),
            knee,
            hi,
            epsabs=0.0,
            epsrel=QUAD_EPSREL,
            limit=200,
        )
        total += value

    return total
