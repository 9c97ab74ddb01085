"""Integer-order cylinder functions and bracketed root finding.

Thin, contract-checked layer over scipy.special: J_m, Y_m, I_m, K_m,
their derivatives, the positive zeros j_{m,k} of J_m, plus a
deterministic bracketed scalar root finder used by the spectrum solver.
Accuracy contracts (relative error <= 1e-10 on the stated domains) are
enforced by the test suite against an independent mpmath oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special as _sp

from .errors import BracketError, InvalidArgumentError

_J_X_MAX = 1.0e4
_JZERO_M_MAX = 20
_JZERO_K_MAX = 50


def _check_order(m: int) -> int:
    if int(m) != m or m < 0:
        raise InvalidArgumentError(f"order must be a nonnegative integer, got {m}")
    return int(m)


def bessel_j(m: int, x):
    """J_m(x) for integer m >= 0 and 0 <= x <= 1e4 (scalar or array)."""
    m = _check_order(m)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > _J_X_MAX):
        raise InvalidArgumentError(f"bessel_j argument outside [0, {_J_X_MAX}]")
    out = _sp.jv(m, xa)
    return float(out) if np.isscalar(x) else out


def bessel_j_deriv(m: int, x):
    """d/dx J_m(x)."""
    m = _check_order(m)
    out = _sp.jvp(m, np.asarray(x, dtype=float))
    return float(out) if np.isscalar(x) else out


def bessel_y(m: int, x):
    """Y_m(x) for integer m >= 0 and x > 0."""
    m = _check_order(m)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise InvalidArgumentError("bessel_y requires x > 0")
    out = _sp.yv(m, xa)
    return float(out) if np.isscalar(x) else out


def bessel_y_deriv(m: int, x):
    """d/dx Y_m(x) for x > 0."""
    m = _check_order(m)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise InvalidArgumentError("bessel_y_deriv requires x > 0")
    out = _sp.yvp(m, xa)
    return float(out) if np.isscalar(x) else out


def bessel_i(m: int, x):
    """I_m(x) for integer m >= 0 and x >= 0."""
    m = _check_order(m)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise InvalidArgumentError("bessel_i requires x >= 0")
    out = _sp.iv(m, xa)
    return float(out) if np.isscalar(x) else out


def bessel_k(m: int, x):
    """K_m(x) for integer m >= 0 and x > 0 (singular at the origin)."""
    m = _check_order(m)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise InvalidArgumentError("bessel_k requires x > 0")
    out = _sp.kv(m, xa)
    return float(out) if np.isscalar(x) else out


def bessel_k_deriv(m: int, x):
    """d/dx K_m(x) for x > 0."""
    m = _check_order(m)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise InvalidArgumentError("bessel_k_deriv requires x > 0")
    out = _sp.kvp(m, xa)
    return float(out) if np.isscalar(x) else out


def bessel_j_zero(m: int, k: int) -> float:
    """k-th positive zero j_{m,k} of J_m, for m <= 20 and 1 <= k <= 50."""
    m = _check_order(m)
    if m > _JZERO_M_MAX:
        raise InvalidArgumentError(f"zero order limited to m <= {_JZERO_M_MAX}, got {m}")
    if int(k) != k or k < 1 or k > _JZERO_K_MAX:
        raise InvalidArgumentError(f"zero index must be in [1, {_JZERO_K_MAX}], got {k}")
    return float(_sp.jn_zeros(m, int(k))[-1])


@dataclass(frozen=True)
class RootBracket:
    """A sign-changing interval [lo, hi] with the end values recorded."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidArgumentError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0:
            raise BracketError(
                f"no sign change on [{self.lo}, {self.hi}]: f={self.f_lo}, {self.f_hi}")


def bracket_root(f: Callable[[float], float], lo: float, hi: float) -> RootBracket:
    """Evaluate f at the endpoints and build a RootBracket (or raise BracketError)."""
    return RootBracket(lo=lo, hi=hi, f_lo=f(lo), f_hi=f(hi))


def find_root(f: Callable[[float], float], bracket: RootBracket, tol: float = 1e-12,
              max_iter: int = 200) -> float:
    """Deterministic bracketed root finding: secant step, bisection fallback.

    Returns x with |f(x)| <= tol or bracket width <= tol.  The bracket
    always shrinks, so convergence is guaranteed; identical inputs give
    identical iterates.
    """
    if tol <= 0:
        raise InvalidArgumentError("tolerance must be positive")
    lo, hi = bracket.lo, bracket.hi
    f_lo, f_hi = bracket.f_lo, bracket.f_hi
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        # secant proposal; fall back to the midpoint when it degenerates
        # or leaves the central 90% of the bracket
        denom = f_hi - f_lo
        if denom != 0.0:
            x = hi - f_hi * (hi - lo) / denom
        pad = 0.05 * (hi - lo)
        if denom == 0.0 or not (lo + pad < x < hi - pad):
            x = 0.5 * (lo + hi)
        f_x = f(x)
        if abs(f_x) <= tol:
            return x
        if f_lo * f_x < 0:
            hi, f_hi = x, f_x
        else:
            lo, f_lo = x, f_x
    return 0.5 * (lo + hi)
