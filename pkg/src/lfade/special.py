"""Real gamma function and Pochhammer symbols."""

from __future__ import annotations

import math

from .errors import NumericError


def gamma(x: float) -> float:
    """Real gamma function, including negative non-integer arguments.

    Raises :class:`NumericError` at the poles ``0, -1, -2, ...``.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise NumericError(f"gamma has a pole at {x}")
    return math.gamma(x)


def rgamma(x: float) -> float:
    """Reciprocal gamma ``1/Gamma(x)``, which is zero at the poles."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``(a)_n = Gamma(a + n) / Gamma(a)`` for integer ``n``.

    Positive ``n`` uses the finite product, so ``a`` may sit on a gamma pole
    (``(0)_0 = 1``, ``(0)_n = 0``).  Negative ``n`` follows the gamma ratio,
    e.g. ``(a)_{-1} = 1 / (a - 1)``.
    """
    if n != int(n):
        raise ValueError(f"integer index expected, got {n}")
    n = int(n)
    out = 1.0
    if n >= 0:
        for i in range(n):
            out *= a + i
        return out
    for i in range(1, -n + 1):
        d = a - i
        if d == 0:
            raise NumericError(f"({a})_{n} is infinite")
        out /= d
    return out
