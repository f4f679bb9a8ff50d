"""Airy and Bessel evaluation without external special-function dependencies.

Ai and Ai' are propagated along the ODE y'' = x y by local Taylor steps
between cached anchors: outward from the exactly known values at x = 0 on
[-6, 4.5], and downward from an asymptotic-series seed at x = 16 on
(4.5, 16] (downward integration is the stable direction for the recessive
solution).  J_nu uses the ascending series with iterated terms.  Zeros are
located by bracketing plus bisection.
"""

from __future__ import annotations

import math

from .errors import InvalidArgumentError, NumericalError

_STEP = 0.5
_LOW_LIMIT = -6.0
_SWITCH = 16.0
_TAYLOR_TERMS = 34

_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)

_anchors: dict[int, tuple[float, float]] = {}


def _taylor_step(x0: float, y: float, yp: float, t: float) -> tuple[float, float]:
    """Advance y'' = x y from x0 by t using the local Taylor recurrence."""
    c = [y, yp]
    for k in range(_TAYLOR_TERMS - 2):
        prev = c[k - 1] if k >= 1 else 0.0
        c.append((x0 * c[k] + prev) / ((k + 1) * (k + 2)))
    val = 0.0
    dval = 0.0
    for k in range(len(c) - 1, -1, -1):
        val = val * t + c[k]
    for k in range(len(c) - 1, 0, -1):
        dval = dval * t + k * c[k]
    return val, dval


def _asymptotic_ai(x: float, terms: int = 20) -> tuple[float, float]:
    """Large-x expansion of (Ai, Ai'); accurate to machine precision for x >= 16."""
    zeta = (2.0 / 3.0) * x ** 1.5
    u = 1.0
    s_ai = 1.0
    s_aip = 1.0
    sign = 1.0
    for k in range(1, terms):
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        v = (6 * k + 1) / (1.0 - 6 * k) * u
        sign = -sign
        s_ai += sign * u / zeta ** k
        s_aip += sign * v / zeta ** k
    pref = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    ai = pref * s_ai / x ** 0.25
    aip = -pref * s_aip * x ** 0.25
    return ai, aip


def _anchor(index: int) -> tuple[float, float]:
    """(Ai, Ai') at x = index * _STEP, cached, built by stable marching."""
    if index in _anchors:
        return _anchors[index]
    if index == 0:
        pair = (_AI0, _AIP0)
    elif index * _STEP > 4.5:
        hi = int(round(_SWITCH / _STEP))
        if index >= hi:
            pair = _asymptotic_ai(index * _STEP)
        else:
            y, yp = _anchor(index + 1)
            pair = _taylor_step((index + 1) * _STEP, y, yp, -_STEP)
    else:
        src = index - 1 if index > 0 else index + 1
        y, yp = _anchor(src)
        pair = _taylor_step(src * _STEP, y, yp, _STEP if index > 0 else -_STEP)
    _anchors[index] = pair
    return pair


def airy_ai_with_prime(x: float) -> tuple[float, float]:
    """(Ai(x), Ai'(x)) for x >= -6, absolute accuracy near machine precision."""
    if not math.isfinite(x):
        raise InvalidArgumentError("x must be finite")
    if x < _LOW_LIMIT:
        raise InvalidArgumentError(f"Ai evaluation supported for x >= {_LOW_LIMIT}")
    if x >= _SWITCH:
        return _asymptotic_ai(x)
    index = int(round(x / _STEP))
    x0 = index * _STEP
    y, yp = _anchor(index)
    if x == x0:
        return y, yp
    return _taylor_step(x0, y, yp, x - x0)


def airy_ai(x: float) -> float:
    return airy_ai_with_prime(x)[0]


def airy_ai_prime(x: float) -> float:
    return airy_ai_with_prime(x)[1]


def airy_ai_prime_first_zero() -> float:
    """First (largest) zero of Ai', near -1.019, by bracketing bisection."""
    lo, hi = -2.0, -0.5
    flo = airy_ai_prime(lo)
    fhi = airy_ai_prime(hi)
    if flo * fhi >= 0:
        raise NumericalError("failed to bracket the first zero of Ai'")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = airy_ai_prime(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
        if hi - lo < 1e-15:
            break
    return 0.5 * (lo + hi)


def bessel_j(nu: float, x: float, max_terms: int = 400) -> float:
    """J_nu(x) by the ascending series with a term-count guard (nu >= -1/2)."""
    if nu < -0.5:
        raise InvalidArgumentError("orders below -1/2 are not supported")
    if x < 0:
        raise InvalidArgumentError("x must be nonnegative")
    if x == 0.0:
        return 1.0 if nu == 0 else 0.0
    half = 0.5 * x
    term = half ** nu / math.gamma(nu + 1.0)
    total = term
    q = half * half
    for k in range(max_terms):
        term *= -q / ((k + 1.0) * (nu + k + 1.0))
        total += term
        if abs(term) <= 1e-17 * max(abs(total), 1e-300):
            return total
    raise NumericalError(f"Bessel series did not converge for nu={nu}, x={x}")


def bessel_j_first_zero(nu: float) -> float:
    """First positive zero of J_nu, from a bracketing grid plus bisection.

    The bracket end nu_eff + 3 + 2 nu_eff^(1/3) (nu_eff = max(nu, 0))
    contains the first zero for every supported order.
    """
    if nu < -0.5:
        raise InvalidArgumentError("orders below -1/2 are not supported")
    nu_eff = max(nu, 0.0)
    lo = max(nu, 1e-3)
    hi = nu_eff + 3.0 + 2.0 * nu_eff ** (1.0 / 3.0)
    npts = 400
    prev_x = lo
    prev_f = bessel_j(nu, lo)
    bracket = None
    for i in range(1, npts + 1):
        x = lo + (hi - lo) * i / npts
        f = bessel_j(nu, x)
        if prev_f == 0.0:
            return prev_x
        if prev_f * f < 0:
            bracket = (prev_x, prev_f, x)
            break
        prev_x, prev_f = x, f
    if bracket is None:
        raise NumericalError(f"no sign change of J_{nu} found in ({lo}, {hi})")
    a, fa, b = bracket
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = bessel_j(nu, mid)
        if fm == 0.0:
            return mid
        if fa * fm < 0:
            b = mid
        else:
            a, fa = mid, fm
        if b - a < 1e-14 * max(1.0, b):
            break
    return 0.5 * (a + b)
