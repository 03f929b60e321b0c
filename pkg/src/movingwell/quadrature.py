"""Adaptive Simpson quadrature used for phase integrals and tau maps.

Closed forms are always preferred where they exist; this routine is the
numeric fallback and the independent oracle the closed forms are tested
against.  Absolute tolerance defaults to 1e-12, which is meaningful in
natural units only -- SI-magnitude integrands must be rescaled first.
"""

from __future__ import annotations

from typing import Callable

import numpy as np


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-12, max_depth: int = 48) -> float:
    """Integrate f on [a, b] by recursive Simpson subdivision."""
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth)

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl = f(xl)
        fr = f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        return (recurse(x0, xm, f0, fl, f1, left, eps / 2.0, depth - 1)
                + recurse(xm, x2, f1, fr, f2, right, eps / 2.0, depth - 1))

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, max_depth)


def composite_simpson(y, h: float):
    """Composite Simpson on pre-sampled values with an odd point count."""
    y = np.asarray(y)
    n = len(y)
    if n < 3 or n % 2 == 0:
        raise ValueError("composite Simpson needs an odd number of samples")
    return h / 3.0 * (y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2], axis=0)
                      + 2.0 * np.sum(y[2:-2:2], axis=0))
