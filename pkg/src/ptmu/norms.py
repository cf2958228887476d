"""Norms and Gram systems in L^t(mu) for the disk-plus-boundary measure model."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .analytic import BoundedFunctionSpec, singular_fourier
from .errors import NodeCollision, NonPSD, Unsupported
from .measures import SpaceMeasure
from .quadrature import TWO_PI, circle_nodes, graded_radial_rule, radial_rule, tanh_sinh


def thread_count() -> int:
    """Worker threads for Gram assembly, from ``PTMU_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("PTMU_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class RadialMoments:
    """``m_k = scale * int |z|^k (1-|z|)^alpha dA`` for ``k = 0..count-1``.

    Closed form ``2 scale B(k+2, alpha+1)`` through log-Gamma.
    """

    alpha: float
    count: int
    scale: float = 1.0
    values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.alpha <= -1:
            raise ValueError("alpha must exceed -1")
        k = np.arange(self.count, dtype=float)
        v = self.scale * 2.0 * np.exp(gammaln(k + 2.0) + gammaln(self.alpha + 1.0) - gammaln(k + self.alpha + 3.0))
        object.__setattr__(self, "values", v)

    def __getitem__(self, k):
        return self.values[k]

    def even(self, n: int) -> np.ndarray:
        """``m_{2j}`` for ``j = 0..n-1``, extending the table if needed."""
        if 2 * (n - 1) < self.count:
            return self.values[: 2 * n : 2]
        return RadialMoments(self.alpha, 2 * n, self.scale).values[::2]


@dataclass
class GramSystem:
    G: np.ndarray
    b: np.ndarray
    one_norm_sq: float
    provenance: dict
    asymmetry: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": int(self.G.shape[0]),
            "G": [[float(x.real), float(x.imag)] for x in self.G.ravel()],
            "b": [[float(x.real), float(x.imag)] for x in self.b],
            "one_norm_sq": self.one_norm_sq,
            "asymmetry": self.asymmetry,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GramSystem":
        n = int(data["n"])
        G = np.array([complex(a, b) for a, b in data["G"]]).reshape(n, n)
        b = np.array([complex(x, y) for x, y in data["b"]])
        return cls(G, b, float(data["one_norm_sq"]), data.get("provenance", {}), float(data.get("asymmetry", 0.0)))


def _exponent(t: float) -> float:
    return min(1.0, 1.0 / t)


def _boundary_quadrature(mu: SpaceMeasure, level: int = 8):
    """Nodes (angles), weights (omega dm) over the carrier."""
    angs, wts = [], []
    for start, span, piece in mu.boundary.segments():
        x, da, db, w = tanh_sinh(0.0, 1.0, level)
        angs.append(start + span * x)
        wts.append(w * span / TWO_PI * piece.value(x, da, db))
    if not angs:
        return np.array([]), np.array([])
    return np.concatenate(angs), np.concatenate(wts)


def pt_norm(
    f,
    mu: SpaceMeasure,
    t: float | None = None,
    n_radial: int | None = None,
    angular_power: int = 11,
) -> float:
    """``(int |f|^t dmu)^{min(1, 1/t)}``.

    ``f`` is a :class:`BoundedFunctionSpec`, a Taylor coefficient vector
    or a vectorized callable of ``z``.  Coefficients with ``t = 2`` use exact moments and the
    Toeplitz matrix of ``omega``; everything else uses the graded radial
    rule (or Gauss-Jacobi with ``n_radial`` nodes) times the angular
    trapezoid on the disk and tanh-sinh on the carrier.
    """
    t = mu.t if t is None else float(t)
    if t <= 0:
        raise ValueError("t must be positive")
    coeff = not isinstance(f, BoundedFunctionSpec) and not callable(f)
    parts = []
    if coeff and t == 2.0:
        c = np.asarray(f, dtype=complex)
        n = c.size
        if mu.disk_mass_scale > 0:
            m = RadialMoments(mu.disk_alpha, 2 * n, mu.disk_mass_scale).even(n)
            parts.append(float(np.sum(np.abs(c) ** 2 * m)))
        if not mu.boundary.is_zero:
            w = mu.boundary.fourier_coefficients(n - 1)
            j = np.arange(n)
            T = w[(j[None, :] - j[:, None]) + n - 1]  # int omega zeta^{j-k} dm at [j, k]
            parts.append(float(np.real(np.conj(c) @ T.T @ c)))
        return math.fsum(parts) ** _exponent(t)
    M = 1 << angular_power
    zeta = np.exp(1j * circle_nodes(M))
    if callable(f) and not isinstance(f, BoundedFunctionSpec):
        evaluate = f
    elif coeff:
        c = np.asarray(f, dtype=complex)

        def evaluate(z):
            return np.polynomial.polynomial.polyval(z, c)

    else:

        def evaluate(z):
            return f.evaluate(z)[0]

    if mu.disk_mass_scale > 0:
        if n_radial is None:
            r, w = graded_radial_rule(mu.disk_alpha, 128)
        else:
            r, w = radial_rule(n_radial, mu.disk_alpha)
        acc = []
        for ri, wi in zip(r, w):
            acc.append(wi * float(np.mean(np.abs(evaluate(ri * zeta)) ** t)))
        parts.append(mu.disk_mass_scale * math.fsum(acc))
    if not mu.boundary.is_zero:
        ang, wts = _boundary_quadrature(mu)
        vals = evaluate(np.exp(1j * ang))
        parts.append(float(np.sum(wts * np.abs(vals) ** t)))
    return math.fsum(parts) ** _exponent(t)


@dataclass(frozen=True)
class DecayFit:
    beta: float
    residual: float
    degrees: tuple[int, ...]
    norms: tuple[float, ...]
    used_full_measure: bool


def monomial_norms(mu: SpaceMeasure, t: float, degrees) -> np.ndarray:
    """``||z^n||_{mu|D, t}`` in closed form (Beta integrals)."""
    n = np.asarray(degrees, dtype=float)
    a = mu.disk_alpha
    integral = mu.disk_mass_scale * 2.0 * np.exp(gammaln(n * t + 2.0) + gammaln(a + 1.0) - gammaln(n * t + a + 3.0))
    return integral ** _exponent(t)


def monomial_decay(mu: SpaceMeasure, t: float | None = None, n_max: int = 128) -> DecayFit:
    """Least-squares slope of ``log ||z^n||`` against ``log n`` on ``[n_max/2, n_max]``.

    Measures without a disk part fall back to the full measure, whose
    monomials have norm equal to the boundary mass (no decay).
    """
    t = mu.t if t is None else float(t)
    if n_max < 16:
        raise ValueError("n_max must be at least 16")
    deg = np.arange(n_max // 2, n_max + 1)
    full = mu.disk_mass_scale == 0
    if full:
        norms = np.full(deg.shape, mu.boundary.total_mass() ** _exponent(t))
    else:
        norms = monomial_norms(mu, t, deg)
    x = np.log(deg)
    y = np.log(norms)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return DecayFit(float(-coef[0]) + 0.0, resid, tuple(int(d) for d in deg), tuple(float(v) for v in norms), full)


# ---------------------------------------------------------------------------
# Gram systems


def boundary_toeplitz(mu: SpaceMeasure, n: int) -> np.ndarray:
    """``T[j, k] = int omega zeta^{j-k} dm`` for ``j, k < n``."""
    w = mu.boundary.fourier_coefficients(n - 1)
    j = np.arange(n)
    return w[(j[:, None] - j[None, :]) * -1 + n - 1]


def _bulge_path(start: float, span: float, nodes: int, bulge: float):
    u, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    rad = 1.0 + bulge * np.sin(math.pi * u)
    ang = start + span * u
    z = rad * np.exp(1j * ang)
    dz = (bulge * math.pi * np.cos(math.pi * u) + 1j * span * rad) * np.exp(1j * ang)
    # complex angle parameter t = -i log z continued along the path
    tpar = ang - 1j * np.log(rad)
    return z, dz, w, tpar


def boundary_b(theta: BoundedFunctionSpec, mu: SpaceMeasure, n: int, nodes: int = 512, bulge: float = 0.5):
    """``int conj(theta) zeta^{-j} omega dm`` for ``j < n`` and an error estimate.

    On the circle ``conj(theta) = 1/theta`` for inner ``theta``, and
    ``1/theta`` is analytic and bounded outside the closed disk.  Each
    carrier arc is therefore replaced by a path bulging outward between
    its endpoints, where the integrand is smooth even if ``theta`` has
    singular mass on the arc.  The weight profile is continued
    analytically in the complex angle.  A constant weight on the whole
    circle uses the mean value ``conj(theta(0))`` instead.
    """
    if not theta.is_inner:
        raise Unsupported("boundary pairing by contour needs an inner function")
    total = np.zeros(n, dtype=complex)
    errs = []
    j = np.arange(n)
    for start, span, piece in mu.boundary.segments():
        if span >= TWO_PI - 1e-15:
            if not piece.constant:
                raise Unsupported("full-circle carrier needs a constant weight")
            # mean value: int conj(theta) zeta^{-j} dm = conj(theta(0)) for j = 0, else 0
            lvl = piece.value(np.array([0.5]))[0]
            total[0] += lvl * np.conj(complex(np.atleast_1d(theta.evaluate(0.0)[0])[0]))
            errs.append(0.0)
            continue
        vals = []
        for m in (nodes, 2 * nodes):
            z, dz, wq, tpar = _bulge_path(start, span, m, min(bulge, 0.25 * span))
            inv = theta.reciprocal_outside(z)
            if piece.constant:
                om = np.full(z.shape, piece.value(np.array([0.5]))[0])
            else:
                x = (tpar - start) / span
                om = piece.value(x, x, 1.0 - x)
            base = inv * om * dz * wq / (TWO_PI * 1j)
            vals.append(np.exp(-np.outer(j + 1, np.log(z))) @ base)
        total += vals[1]
        errs.append(float(np.max(np.abs(vals[1] - vals[0]))))
    return total, (max(errs) if errs else 0.0)


def gram_system(
    theta: BoundedFunctionSpec,
    mu: SpaceMeasure,
    N: int,
    angular_power: int = 13,
    n_radial: int | None = None,
    contour_nodes: int = 512,
    margin: float = 1e-12,
    radial_depth: int = 16,
) -> GramSystem:
    """Normal-equation data for ``min_p ||theta p - 1||_{mu,2}`` over degree ``<= N``.

    The disk part is assembled from an explicit discrete measure (radial
    nodes times equispaced angles), so ``G`` and ``b`` are an exact Gram
    system of that measure and the augmented matrix is positive
    semidefinite.  By default the radial nodes come from
    :func:`graded_radial_rule`; an explicit ``n_radial`` selects a plain
    Gauss-Jacobi rule of that size instead.  The boundary part assumes
    ``|theta| = 1`` on the circle and uses the Toeplitz matrix of ``omega`` plus the contour
    pairing of :func:`boundary_b`.
    """
    if mu.t != 2.0:
        raise Unsupported("Gram systems are built for t = 2 only")
    n = N + 1
    M = 1 << angular_power
    if M < 8 * n:
        raise ValueError("angular grid must have at least 8(N+1) nodes")
    prov = {
        "N": N,
        "angular_nodes": M,
        "alpha": mu.disk_alpha,
        "contour_nodes": contour_nodes,
    }
    G = np.zeros((n, n), dtype=complex)
    b = np.zeros(n, dtype=complex)
    one = 0.0
    j = np.arange(n)
    if mu.disk_mass_scale > 0:
        if n_radial is None:
            r, w = graded_radial_rule(mu.disk_alpha, 2 * N + 2, radial_depth)
            prov["radial_rule"] = {"kind": "graded", "depth": radial_depth, "order": 8}
        else:
            r, w = radial_rule(n_radial, mu.disk_alpha)
            prov["radial_rule"] = {"kind": "gauss-jacobi"}
        nr = r.size
        prov["radial_nodes"] = nr
        w = w * mu.disk_mass_scale
        ang, _, _ = theta.singular_part.realized_arrays()
        if ang.size and np.max(r) > 1.0 - margin:
            raise NodeCollision("radial node too close to the circle")
        fourier = singular_fourier(theta.singular_part, M) if ang.size else None
        diff = (j[None, :] - j[:, None]) % M  # index of zeta^{j-k} coefficient at [j, k]

        def contribution(i):
            vals = theta.on_circle(float(r[i]), M, fourier)
            c = np.fft.fft(np.abs(vals) ** 2) / M
            cb = np.fft.fft(np.conj(vals)) / M
            pw = float(r[i]) ** j
            return w[i] * np.outer(pw, pw) * c[diff], w[i] * pw * cb[:n]

        workers = thread_count()
        if workers > 1:
            with ThreadPoolExecutor(workers) as ex:
                parts = list(ex.map(contribution, range(nr)))
        else:
            parts = [contribution(i) for i in range(nr)]
        for g, bb in parts:  # fixed-order reduction
            G += g
            b += bb
        one += float(np.sum(w))
    if not mu.boundary.is_zero:
        if not theta.is_inner:
            raise Unsupported("boundary Gram block assumes |theta| = 1 on the circle")
        G += boundary_toeplitz(mu, n)
        bb, berr = boundary_b(theta, mu, n, contour_nodes)
        b += bb
        one += mu.boundary.total_mass()
        prov["contour_error"] = berr
    asym = float(np.max(np.abs(G - G.conj().T))) if n else 0.0
    G = 0.5 * (G + G.conj().T)
    ev = np.linalg.eigvalsh(G)
    prov["min_eigenvalue"] = float(ev[0])
    if ev[0] < -1e-8:
        raise NonPSD(f"Gram matrix has eigenvalue {ev[0]:.3e}")
    return GramSystem(G, b, one, prov, asym)
