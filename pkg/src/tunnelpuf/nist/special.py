"""Complementary error function and regularized incomplete gamma functions.

``igamc`` picks the power series for ``x < a + 1`` and a modified-Lentz
continued fraction otherwise, so each branch works where it converges fast.
"""
import math

from ..errors import InvalidInputError

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000


def erfc(x):
    if math.isnan(x):
        raise InvalidInputError("erfc argument is NaN")
    return math.erfc(x)


def _check(a, x):
    if not (math.isfinite(a) and a > 0):
        raise InvalidInputError(f"igamc needs a > 0, got a={a}")
    if math.isnan(x) or x < 0:
        raise InvalidInputError(f"igamc needs x >= 0, got x={x}")


def _series(a, x):
    """Lower regularized P(a, x) by its power series."""
    term = total = 1.0 / a
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    else:
        raise ArithmeticError("igam series did not converge")
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _continued_fraction(a, x):
    """Upper regularized Q(a, x) by Lentz's method."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError("igamc continued fraction did not converge")
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def igam(a, x):
    """Lower regularized incomplete gamma P(a, x)."""
    _check(a, x)
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    return _series(a, x) if x < a + 1.0 else 1.0 - _continued_fraction(a, x)


def igamc(a, x):
    """Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x)."""
    _check(a, x)
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return 1.0 - _series(a, x) if x < a + 1.0 else _continued_fraction(a, x)
