"""Quadrature rules shared by the evaluation and norm modules."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

TWO_PI = 2.0 * math.pi


def circle_nodes(count: int) -> np.ndarray:
    """Equispaced angles ``2*pi*k/count`` for the periodic trapezoid rule."""
    return TWO_PI * np.arange(count) / count


@lru_cache(maxsize=64)
def _radial_rule(count: int, alpha: float):
    x, w = roots_jacobi(count, alpha, 1.0)
    r = 0.5 * (1.0 + x)
    w = w * 2.0 ** (-alpha - 1.0)
    r.flags.writeable = False
    w.flags.writeable = False
    return r, w


def radial_rule(count: int, alpha: float = 0.0):
    """Gauss-Jacobi rule for ``int_0^1 f(r) 2r (1-r)^alpha dr``.

    Exact for polynomials in ``r`` of degree ``2*count - 1``.

    Parameters
    ----------
    count : int
        Number of radial nodes.
    alpha : float
        Exponent of the ``(1 - r)`` factor, ``alpha > -1``.

    Returns
    -------
    r, w : ndarray
        Nodes in ``(0, 1)`` and positive weights summing to ``2 B(2, alpha+1)``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if alpha <= -1.0:
        raise ValueError("alpha must exceed -1")
    return _radial_rule(int(count), float(alpha))


@lru_cache(maxsize=64)
def _graded_radial(alpha: float, degree: int, depth: int, order: int):
    rs, ws = [], []
    # s = 1 - r; Gauss-Jacobi carries s^alpha on the innermost panel [0, 2^-depth]
    eps = 2.0**-depth
    x, w = roots_jacobi(order, 0.0, alpha)
    s = 0.5 * eps * (x + 1.0)
    rs.append(1.0 - s)
    ws.append(2.0 * (1.0 - s) * w * (0.5 * eps) ** (alpha + 1.0))
    # geometric panels [2^-(k+1), 2^-k]; r^degree ~ exp(-degree s) sets the extra order
    for k in range(depth - 1, 0, -1):
        a, b = 2.0 ** -(k + 1), 2.0**-k
        q = order + int(math.ceil(degree * (b - a)))
        gx, gw = np.polynomial.legendre.leggauss(q)
        s = a + 0.5 * (b - a) * (gx + 1.0)
        rs.append(1.0 - s)
        ws.append(2.0 * (1.0 - s) * s**alpha * gw * 0.5 * (b - a))
    # r in [0, 1/2]: smooth, polynomial of degree about ``degree``
    gx, gw = np.polynomial.legendre.leggauss(degree // 2 + 16)
    r = 0.25 * (gx + 1.0)
    rs.append(r)
    ws.append(2.0 * r * (1.0 - r) ** alpha * gw * 0.25)
    r = np.concatenate(rs)
    w = np.concatenate(ws)
    idx = np.argsort(r, kind="stable")
    r, w = r[idx], w[idx]
    r.flags.writeable = False
    w.flags.writeable = False
    return r, w


def graded_radial_rule(alpha: float, degree: int, depth: int = 16, order: int = 8):
    """Composite rule for ``int_0^1 f(r) 2r (1-r)^alpha dr`` refined toward ``r = 1``.

    Panels shrink geometrically toward the circle so that functions with
    algebraic behaviour in ``1 - r`` (angular averages of ``|theta|^2``
    near singular support) converge quickly.  ``degree`` is the largest
    power of ``r`` that must be integrated accurately.
    """
    if alpha <= -1.0:
        raise ValueError("alpha must exceed -1")
    if depth < 1 or order < 1:
        raise ValueError("depth and order must be positive")
    return _graded_radial(float(alpha), int(degree), int(depth), int(order))


@lru_cache(maxsize=32)
def _tanh_sinh_unit(level: int):
    # nodes on [0, 1] given as offsets from both ends to keep precision
    h = 2.0 ** (-level)
    kmax = int(math.ceil(4.0 / h))
    t = h * np.arange(-kmax, kmax + 1)
    s = 0.5 * math.pi * np.sinh(t)
    # offset from 0 is (1 + tanh s)/2 = 1/(1 + exp(-2s)); from 1 is 1/(1 + exp(2s))
    left = 1.0 / (1.0 + np.exp(-2.0 * s))
    right = 1.0 / (1.0 + np.exp(2.0 * s))
    w = h * 0.25 * math.pi * np.cosh(t) / np.cosh(s) ** 2
    keep = (left > 0.0) & (right > 0.0) & (w > 1e-300)
    return left[keep], right[keep], w[keep]


def tanh_sinh(a: float, b: float, level: int):
    """Double-exponential rule on ``[a, b]``.

    Returns ``(x, da, db, w)`` where ``da = x - a`` and ``db = b - x`` are
    computed without cancellation, so integrands with endpoint
    singularities can use them directly.
    """
    left, right, w = _tanh_sinh_unit(int(level))
    length = b - a
    da = length * left
    db = length * right
    return a + da, da, db, length * w
