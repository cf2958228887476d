"""Distance curves, dual certificates and verdicts for cyclicity experiments.

The primal side solves the normal equations of ``min ||theta p - 1||``
over polynomials of growing degree.  The dual side builds bounded linear
functionals that vanish on ``theta * polynomials``; each one gives a
lower bound ``|Lambda(1)| / ||Lambda||`` for every ``d_N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import lapack, solve_triangular

from .analytic import (
    BoundedFunctionSpec,
    CutoffLog,
    Region,
    WeightLog,
    companion_function,
    herglotz,
    min_modulus,
    sobolev_norm,
    taylor_coefficients,
)
from .circle_sets import CircleSet, set_distance
from .errors import GridTooCoarse, InsufficientDecay, SolverError, Unsupported
from .measures import DistanceAbove, RobertsResult, SingularMeasure, SpaceMeasure, restrict
from .norms import GramSystem, RadialMoments, gram_system, pt_norm
from .quadrature import TWO_PI, circle_nodes, tanh_sinh

DEFAULT_DEGREES = (0, 1, 2, 4, 8, 16, 32, 64, 100)


# ---------------------------------------------------------------------------
# primal side


@dataclass
class DistanceCurve:
    degrees: list[int]
    values: list[float]
    coefficients: list[np.ndarray]
    provenance: dict = field(default_factory=dict)

    def value_at(self, N: int) -> float:
        return self.values[self.degrees.index(N)]

    def to_dict(self, with_coefficients: bool = True) -> dict:
        out = {"degrees": list(self.degrees), "values": list(self.values), "provenance": self.provenance}
        if with_coefficients:
            out["coefficients"] = [[[float(c.real), float(c.imag)] for c in v] for v in self.coefficients]
        return out


def _cholesky(G: np.ndarray, jitters=(0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10)):
    scale = float(np.max(np.real(np.diag(G)))) if G.size else 1.0
    n = G.shape[0]
    info = 0
    for jit in jitters:
        A = G + jit * scale * np.eye(n)
        L, info = lapack.zpotrf(A, lower=1, clean=1)
        if info == 0:
            return L, jit
    # info is the 1-based order of the first non-positive leading minor
    raise SolverError(f"Cholesky failed even with jitter {jitters[-1]:g}", degree=int(info) - 1)


def solve_distances(system: GramSystem, degrees: Sequence[int]) -> DistanceCurve:
    """``d_N^2 = ||1||^2 - b^* G_N^{-1} b`` for nested leading blocks of one factorization."""
    degrees = [int(d) for d in degrees]
    if sorted(degrees) != degrees:
        raise ValueError("degrees must be sorted ascending")
    n = system.G.shape[0]
    if degrees and degrees[-1] >= n:
        raise ValueError("degree exceeds the Gram system size")
    L, jitter = _cholesky(system.G)
    y = solve_triangular(L, system.b, lower=True)
    partial = system.one_norm_sq - np.cumsum(np.abs(y) ** 2)
    values, coeffs, raw = [], [], []
    for N in degrees:
        d2 = float(partial[N])
        raw.append(d2)
        values.append(math.sqrt(max(d2, 0.0)))
        c = solve_triangular(L[: N + 1, : N + 1].conj().T, y[: N + 1], lower=False)
        coeffs.append(c)
    prov = dict(system.provenance)
    prov.update({"jitter": jitter, "raw_d_squared": raw, "asymmetry": system.asymmetry})
    return DistanceCurve(degrees, values, coeffs, prov)


def distance_curve(
    theta: BoundedFunctionSpec,
    mu: SpaceMeasure,
    degrees: Sequence[int] = DEFAULT_DEGREES,
    angular_power: int = 13,
    n_radial: int | None = None,
    contour_nodes: int = 512,
    radial_depth: int = 16,
) -> DistanceCurve:
    """Primal distances ``d_N = min_{deg p <= N} ||theta p - 1||_{mu,2}``."""
    degrees = sorted(int(d) for d in degrees)
    system = gram_system(
        theta, mu, degrees[-1], angular_power, n_radial, contour_nodes, radial_depth=radial_depth
    )
    return solve_distances(system, degrees)


# ---------------------------------------------------------------------------
# radial Cauchy solve


@dataclass
class CauchySolution:
    coefficients: np.ndarray
    norm: float
    cut: int
    tail_ratio: float
    tau: float


def cauchy_solve_radial(
    g,
    moments: RadialMoments,
    tail_tol: float = 1e-10,
    noise_floor: float = 0.0,
) -> CauchySolution:
    """Solve ``g = C_{G mu}`` against a radial disk measure: ``G_n = g_n / m_{2n}``.

    The decay test uses the Sobolev weight ``tau = 4 + 2 alpha``:
    coefficients under ``noise_floor`` count as zero, the cut is the first
    index whose weighted tail is at most ``tail_tol`` times the head, and
    the last quarter of the input must already lie beyond the cut.  The
    returned norm keeps every coefficient, so it never understates.
    """
    g = np.asarray(g, dtype=complex)
    n = g.size
    m = moments.even(n)
    tau = 4.0 + 2.0 * moments.alpha
    clean = np.where(np.abs(g) > noise_floor, g, 0.0)
    w = (np.arange(n) + 1.0) ** tau * np.abs(clean) ** 2
    tail = np.cumsum(w[::-1])[::-1]  # tail[k] = sum_{j >= k}
    head = np.concatenate([[0.0], np.cumsum(w)[:-1]])
    ok = tail <= (tail_tol**2) * head
    ok = np.concatenate([ok, [True]])
    cut = int(np.argmax(ok))
    quarter = n - n // 4
    if n // 4 > 0 and cut > quarter:
        ratio = math.sqrt(tail[quarter] / head[quarter]) if head[quarter] > 0 else math.inf
        raise InsufficientDecay(
            f"Sobolev tail ratio {ratio:.3e} at index {quarter} exceeds {tail_tol:g}", cut=cut, ratio=ratio
        )
    G = g / m
    norm = math.sqrt(float(np.sum(np.abs(g) ** 2 / m)))
    ratio = 0.0 if cut >= n else math.sqrt(tail[cut] / head[cut]) if head[cut] > 0 else 0.0
    return CauchySolution(G[: max(cut, 1)], norm, cut, ratio, tau)


def cauchy_pairing(G, moments: RadialMoments) -> np.ndarray:
    """Taylor coefficients of ``C_{G mu}`` for radial ``mu`` (the defining identity)."""
    G = np.asarray(G, dtype=complex)
    return G * moments.even(G.size)


# ---------------------------------------------------------------------------
# model-space functionals


@dataclass(frozen=True)
class CertificateOptions:
    """Dual certificate recipe.

    ``E`` is ``"carrier"`` (the boundary carrier of the measure) or
    ``None``.  Basis polynomials are ``A(z) z^i`` for ``i <= basis_degree``
    where ``A`` vanishes to ``atom_order`` at each atom of ``theta`` and to
    ``end_order`` at each endpoint of a gap of ``E``.
    """

    E: str | None = "carrier"
    cutoff_N: int = 4
    basis_degree: int = 8
    atom_order: int = 3
    end_order: int = 2
    grid_power: int = 16
    test_order: int = 50
    residual_tol: float = 1e-5
    grid_tol: float = 1e-6
    max_retries: int = 2

    def to_dict(self) -> dict:
        return {
            "E": self.E,
            "cutoff_N": self.cutoff_N,
            "basis_degree": self.basis_degree,
            "atom_order": self.atom_order,
            "end_order": self.end_order,
            "grid_power": self.grid_power,
            "test_order": self.test_order,
            "residual_tol": self.residual_tol,
            "grid_tol": self.grid_tol,
            "max_retries": self.max_retries,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CertificateOptions":
        known = cls.__dataclass_fields__
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass
class KThetaFunctional:
    """``F_p = P_+(theta conj(h))`` with ``h = zeta p s H`` sampled on a uniform grid."""

    p: np.ndarray
    F: np.ndarray
    h_samples: np.ndarray
    h_coeffs: np.ndarray
    residuals: np.ndarray
    grid_shift: float
    grid: int
    workspace: "_Workspace | None" = field(default=None, repr=False)

    @property
    def value_at_zero(self) -> complex:
        return complex(self.F[0])

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0


def _correlate(theta_c: np.ndarray, h_c: np.ndarray, count: int) -> np.ndarray:
    # F_n = sum_k theta_{n+k} conj(h_k) for n < count
    L = 1 << int(math.ceil(math.log2(theta_c.size + h_c.size)))
    out = np.fft.ifft(np.fft.fft(theta_c, L) * np.conj(np.fft.fft(h_c, L)))
    return out[:count]


def membership_residuals(theta_c: np.ndarray, F: np.ndarray, order: int) -> np.ndarray:
    """``|<theta z^j, F>_{H^2}|`` for ``j = 0..order`` from Taylor coefficients."""
    n = F.size
    out = np.empty(order + 1)
    for j in range(order + 1):
        out[j] = abs(np.vdot(F[j:n], theta_c[: n - j]))
    return out


def _anchor_polynomial(theta: BoundedFunctionSpec, E: CircleSet | None, opts: CertificateOptions) -> np.ndarray:
    roots = []
    for atom in theta.singular_part.atoms:
        roots += [complex(np.exp(1j * atom.angle))] * opts.atom_order
    if E is not None:
        for arc in E.complementary_arcs:
            a, b = arc.endpoints()
            roots += [complex(a), complex(b)] * opts.end_order
    if not roots:
        return np.array([1.0 + 0j])
    return np.polynomial.polynomial.polyfromroots(roots).astype(complex)


def _boundary_factor(E: CircleSet | None, cutoff_N: int, mu: SpaceMeasure, angles: np.ndarray) -> np.ndarray:
    """Boundary values of ``s H``: ``|s| = phi^N`` and ``|H| = min(1, omega)`` on ``E``."""
    z = np.exp(1j * angles)
    out = np.ones(angles.shape, dtype=complex)
    if E is None:
        return out
    if E.complementary_arcs and cutoff_N > 0:
        h, _ = herglotz(CutoffLog(E, cutoff_N), z)
        out *= np.exp(h)
    if not mu.boundary.is_zero:
        prof = WeightLog(mu.boundary, clip_at_zero=True)
        if prof.segments():
            h, _ = herglotz(prof, z)
            out *= np.exp(h)
    return out


def _resolve_E(opts: CertificateOptions, mu: SpaceMeasure) -> CircleSet | None:
    if opts.E is None:
        return None
    if opts.E == "carrier":
        if mu.boundary.is_zero:
            raise Unsupported("certificate set E = carrier needs a boundary weight")
        return mu.boundary.carrier
    raise ValueError(f"unknown certificate set {opts.E!r}")


@dataclass
class _Workspace:
    theta: BoundedFunctionSpec
    mu: SpaceMeasure
    E: CircleSet | None
    opts: CertificateOptions
    grid: int
    angles: np.ndarray
    zeta: np.ndarray
    factor: np.ndarray
    theta_c: np.ndarray
    anchor: np.ndarray


def _workspace(theta: BoundedFunctionSpec, mu: SpaceMeasure, opts: CertificateOptions, theta_c=None) -> _Workspace:
    E = _resolve_E(opts, mu)
    Ng = 1 << opts.grid_power
    angles = circle_nodes(Ng)
    factor = _boundary_factor(E, opts.cutoff_N, mu, angles)
    need = Ng + Ng // 2
    if theta_c is None or theta_c.size < need:
        theta_c = taylor_coefficients(theta, need)
    return _Workspace(theta, mu, E, opts, Ng, angles, np.exp(1j * angles), factor, theta_c, _anchor_polynomial(theta, E, opts))


def _functional(ws: _Workspace, p: np.ndarray) -> KThetaFunctional:
    Ng = ws.grid
    h = ws.zeta * np.polynomial.polynomial.polyval(ws.zeta, p) * ws.factor
    results = []
    for step in (2, 1):
        samples = h[::step]
        n = samples.size
        hc = np.fft.fft(samples) / n
        hc[n // 2 :] = 0.0  # analytic projection of h itself
        hc = hc[: n // 2]
        results.append((hc, _correlate(ws.theta_c, hc, n // 2)))
    (hc_half, F_half), (hc, F) = results
    shift = float(np.max(np.abs(F[: F_half.size] - F_half)))
    if shift > ws.opts.grid_tol * max(1.0, float(np.max(np.abs(F)))):
        raise GridTooCoarse(f"F coefficients moved by {shift:.3e} when the grid doubled", grid=Ng)
    res = membership_residuals(ws.theta_c, F, ws.opts.test_order)
    return KThetaFunctional(np.asarray(p, dtype=complex), F, h, hc, res, shift, Ng, ws)


def ktheta_functional(
    theta: BoundedFunctionSpec,
    p,
    mu: SpaceMeasure,
    opts: CertificateOptions = CertificateOptions(),
) -> KThetaFunctional:
    """``F_p`` for one polynomial ``p`` together with its membership residuals."""
    ws = _workspace(theta, mu, opts)
    return _functional(ws, np.atleast_1d(np.asarray(p, dtype=complex)))


@dataclass
class DualCertificate:
    bound: float
    lambda_one: float
    norm: float
    norm_boundary: float
    norm_disk: float
    max_residual: float
    residuals: list[float]
    weights: list[complex]
    grid_shift: float
    disk_cut: int
    options: dict
    provenance: dict = field(default_factory=dict)

    def valid(self, residual_tol: float | None = None) -> bool:
        tol = self.options.get("residual_tol", 1e-5) if residual_tol is None else residual_tol
        return self.bound > 0.0 and self.max_residual <= tol

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "lambda_one": self.lambda_one,
            "norm": self.norm,
            "norm_boundary": self.norm_boundary,
            "norm_disk": self.norm_disk,
            "max_residual": self.max_residual,
            "residuals": list(self.residuals),
            "weights": [[float(w.real), float(w.imag)] for w in self.weights],
            "grid_shift": self.grid_shift,
            "disk_cut": self.disk_cut,
            "options": self.options,
            "provenance": self.provenance,
        }


def _psi(omega: np.ndarray) -> np.ndarray:
    # min(1, omega)^2 / omega without dividing by zero
    return np.where(omega <= 1.0, omega, 1.0 / np.where(omega > 1.0, omega, 1.0))


def _boundary_block(E: CircleSet, mu: SpaceMeasure, basis: list[np.ndarray], level: int = 9) -> np.ndarray:
    """``Q[i, k] = int_E p_i conj(p_k) min(1, omega)^2 / omega dm``."""
    k = len(basis)
    Q = np.zeros((k, k), dtype=complex)
    for start, span in E.components():
        if span <= 0.0:
            continue
        x, _, _, w = tanh_sinh(0.0, 1.0, level)
        ang = start + span * x
        z = np.exp(1j * ang)
        wt = w * span / TWO_PI * _psi(mu.boundary.value(ang))
        P = np.array([np.polynomial.polynomial.polyval(z, p) for p in basis])
        Q += (P * wt) @ P.conj().T
    return Q


def _offset_samples(ws: _Workspace) -> np.ndarray | None:
    """``theta`` on the grid with zeros on ``E``; ``None`` when ``E`` is absent."""
    if ws.E is None:
        return None
    off = ~ws.E.contains(ws.angles)
    vals = np.zeros(ws.grid, dtype=complex)
    if np.any(off):
        vals[off] = ws.theta.evaluate(ws.zeta[off])[0]
    return vals


def dual_lower_bound(functionals: Sequence[KThetaFunctional]) -> DualCertificate:
    """Best lower bound ``|Lambda(1)| / ||G||_{mu,2}`` over combinations of the given ``F_p``.

    On ``E`` the functional is represented by the density
    ``theta conj(h) / omega`` against ``omega dm``; the rest
    ``P_+(theta conj(h) 1_{T \\ E})`` goes to the disk through
    :func:`cauchy_solve_radial`.
    """
    ws = functionals[0].workspace
    mu = ws.mu
    basis = [f.p for f in functionals]
    k = len(basis)
    beta = np.array([f.value_at_zero for f in functionals])
    QE = _boundary_block(ws.E, mu, basis) if ws.E is not None else np.zeros((k, k), dtype=complex)
    off = _offset_samples(ws)
    rows = {1: [], 2: []}
    for f in functionals:
        for step in (1, 2):
            if off is None:
                g = f.F if step == 1 else f.F[: f.F.size // 2]
            else:
                samp = (off * np.conj(f.h_samples))[::step]
                n = samp.size
                g = (np.fft.fft(samp) / n)[: n // 2]
            rows[step].append(g)
    B1, B2 = np.array(rows[1]), np.array(rows[2])
    QD = {}
    cuts = []
    if not np.any(np.abs(B1) > 1e-14 * max(1.0, float(np.max(np.abs(B1))))):
        QD[1] = QD[2] = np.zeros((k, k), dtype=complex)
    else:
        if mu.disk_mass_scale <= 0.0:
            raise Unsupported("part of the functional lives off E but the measure has no disk part")
        mom = RadialMoments(mu.disk_alpha, 2 * B1.shape[1], mu.disk_mass_scale)
        eps = np.finfo(float).eps
        for f, g1, g2 in zip(functionals, B1, B2):
            # rounding noise: disagreement between the two grids, or the
            # correlation error eps * ||h||_1 (Taylor coefficients of theta are <= 1)
            floor = max(10.0 * float(np.max(np.abs(g1[: g2.size] - g2))), 4.0 * eps * float(np.sum(np.abs(f.h_coeffs))))
            cuts.append(cauchy_solve_radial(g1, mom, noise_floor=floor).cut)
        for step, B in ((1, B1), (2, B2)):
            inv_m = 1.0 / mom.even(B.shape[1])
            QD[step] = (B.conj() * inv_m) @ B.T
    Q = QE + QD[1]
    Q = 0.5 * (Q + Q.conj().T)
    ev, V = np.linalg.eigh(Q)
    keep = ev > 1e-13 * max(float(ev[-1]), 1e-300)
    rhs = np.conj(beta)
    a = V[:, keep] @ ((V[:, keep].conj().T @ rhs) / ev[keep])
    lam = abs(complex(beta @ a))
    nb = math.sqrt(max(float(np.real(a.conj() @ QE @ a)), 0.0))
    nd = math.sqrt(max(float(np.real(a.conj() @ QD[1] @ a)), 0.0))
    norm = math.hypot(nb, nd)
    bound = lam / norm if norm > 0 else 0.0
    nd_half = math.sqrt(max(float(np.real(a.conj() @ QD[2] @ a)), 0.0))
    norm_half = math.hypot(nb, nd_half)
    bound_half = lam / norm_half if norm_half > 0 else 0.0
    shift = abs(bound - bound_half)
    if shift > ws.opts.grid_tol * max(bound, 1e-300) and bound > 0:
        raise GridTooCoarse(f"dual bound moved by {shift:.3e} when the grid doubled", grid=ws.grid)
    F = sum(ai * f.F for ai, f in zip(a, functionals))
    res = membership_residuals(ws.theta_c, F, ws.opts.test_order)
    prov = {
        "grid": ws.grid,
        "basis_size": k,
        "anchor_degree": int(ws.anchor.size - 1),
        "basis_F_residual_max": max(f.max_residual for f in functionals),
        "bound_half_grid": bound_half,
        "kept_eigenvalues": int(np.count_nonzero(keep)),
    }
    return DualCertificate(
        bound,
        lam,
        norm,
        nb,
        nd,
        float(np.max(res)),
        [float(r) for r in res],
        [complex(x) for x in a],
        max(shift, max(f.grid_shift for f in functionals)),
        max(cuts) if cuts else 0,
        ws.opts.to_dict(),
        prov,
    )


def certify(
    theta: BoundedFunctionSpec,
    mu: SpaceMeasure,
    opts: CertificateOptions = CertificateOptions(),
) -> DualCertificate:
    """Build the basis functionals and the best certificate.

    ``InsufficientDecay`` doubles the cutoff exponent and retries, up to
    ``opts.max_retries`` times.
    """
    theta_c = None
    attempt = 0
    while True:
        ws = _workspace(theta, mu, opts, theta_c)
        theta_c = ws.theta_c
        basis = []
        for i in range(opts.basis_degree + 1):
            p = np.concatenate([np.zeros(i, dtype=complex), ws.anchor])
            basis.append(_functional(ws, p))
        try:
            cert = dual_lower_bound(basis)
        except InsufficientDecay:
            attempt += 1
            if attempt > opts.max_retries or ws.E is None:
                raise
            opts = CertificateOptions(**{**opts.to_dict(), "cutoff_N": 2 * max(1, opts.cutoff_N)})
            continue
        cert.provenance["retries"] = attempt
        return cert


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    verdict: str
    level: float | None = None
    threshold: float | None = None
    trend: float | None = None

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "level": self.level, "threshold": self.threshold, "trend": self.trend}


def classify(
    curve: DistanceCurve,
    certificates: Sequence[DualCertificate] = (),
    threshold: float = 1e-2,
    residual_tol: float = 1e-5,
) -> Verdict:
    """``certified-noncyclic`` / ``evidence-cyclic`` / ``inconclusive``.

    Finite computations never certify cyclicity: the evidence verdict
    needs the curve to end below ``threshold`` and to decrease strictly
    across the top half of the degrees.
    """
    if not curve.values:
        raise ValueError("empty curve")
    good = [c.bound for c in certificates if c.bound > 0.0 and c.max_residual <= residual_tol]
    if good:
        return Verdict("certified-noncyclic", level=max(good))
    deg = np.asarray(curve.degrees, dtype=float)
    val = np.asarray(curve.values, dtype=float)
    top = deg >= np.median(deg)
    tv = val[top]
    trend = None
    if np.count_nonzero(top) >= 2 and np.all(tv > 0) and np.all(deg[top] > 0):
        trend = float(np.polyfit(np.log(deg[top]), np.log(tv), 1)[0])
    monotone = np.count_nonzero(top) >= 2 and bool(np.all(np.diff(tv) <= 1e-12)) and tv[-1] < tv[0]
    if monotone and val[-1] < threshold:
        return Verdict("evidence-cyclic", threshold=threshold, trend=trend)
    return Verdict("inconclusive", threshold=threshold, trend=trend)


# ---------------------------------------------------------------------------
# section-five toolkit


def reduction_check(
    nu: SingularMeasure,
    mu: SpaceMeasure,
    n: int,
    degrees: Sequence[int],
    angular_power: int = 12,
) -> dict:
    """Compare ``d_N`` for ``S_nu`` and for ``S_{nu_n}``, ``nu_n`` = mass at distance ``> 1/n`` from the carrier.

    The triangle inequality gives ``d_N(nu) <= d_N(nu_n) + ||S_sigma - 1||``
    with ``sigma = nu - nu_n``.
    """
    if mu.boundary.is_zero:
        raise Unsupported("restriction needs a boundary carrier")
    kept, rest = restrict(nu, DistanceAbove(mu.boundary.carrier, 1.0 / n))
    full = distance_curve(BoundedFunctionSpec(singular_part=nu), mu, degrees, angular_power)
    red = distance_curve(BoundedFunctionSpec(singular_part=kept), mu, degrees, angular_power)
    sigma = BoundedFunctionSpec(singular_part=rest)
    gap = pt_norm(lambda z: sigma.evaluate(z)[0] - 1.0, mu, 2.0)
    slack = [a - b - gap for a, b in zip(full.values, red.values)]
    return {
        "n": n,
        "removed_mass": rest.total_mass,
        "gap_norm": gap,
        "d_full": full.values,
        "d_reduced": red.values,
        "max_violation": max(slack),
        "holds": max(slack) <= 1e-10,
    }


@dataclass
class Calibration:
    c1: float
    per_piece: list[float]
    min_moduli: list[float]
    slope: float | None


def calibrate_c1(result: RobertsResult, n_radial: int = 24, n_angular: int = 1024) -> Calibration:
    """``c1 = max_k -log(min_{D_{n_k}} |S_{nu_k}|) / (c log n_k)`` and the fitted slope across pieces."""
    per, mins, xs, ys = [], [], [], []
    for piece in result.pieces:
        if piece.mass <= 0.0:
            continue
        theta = BoundedFunctionSpec(singular_part=piece.measure)
        mm = min_modulus(theta, Region("disk", piece.n), n_radial, n_angular)
        mins.append(mm.value)
        neg = -math.log(mm.value)
        per.append(neg / (result.c * math.log(piece.n)))
        xs.append(math.log(piece.n))
        ys.append(neg)
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) >= 2 else None
    return Calibration(max(per) if per else 0.0, per, mins, slope)


def corona_hypothesis_check(S_piece: BoundedFunctionSpec, f_companion: BoundedFunctionSpec, grid) -> float:
    """``min over grid of |S(z)| + |f(z)|``."""
    z = np.asarray(grid, dtype=complex)
    return float(np.min(np.abs(S_piece.evaluate(z)[0]) + np.abs(f_companion.evaluate(z)[0])))


def _closed_disk_grid(count: int = 1000) -> np.ndarray:
    # 25 radii (the last on the circle) x 40 angles
    radii = np.linspace(0.0, 1.0, 25)
    ang = circle_nodes(40) + 0.5 * TWO_PI / 40
    return (radii[:, None] * np.exp(1j * ang)[None, :]).ravel()[:count]


def companion_checks(
    nu: SingularMeasure,
    mu: SpaceMeasure,
    c: float,
    c1: float,
    beta: float,
    ns: Sequence[int] = (16, 64, 256),
    sigma_fraction: float = 0.5,
    n_radial: int = 12,
    n_angular: int = 2048,
) -> dict:
    """Checks on ``f_n = z^n h_n`` with ``F`` the boundary carrier.

    ``sigma = sigma_fraction * c c1 rho^2 / 8``; the corona constant is
    taken as ``K = beta / (6 c c1)`` so that ``3 c c1 K = beta / 2``.
    """
    if mu.boundary.is_zero:
        raise Unsupported("companion functions need a boundary carrier")
    F = mu.boundary.carrier
    support = CircleSet.from_points(list(nu.realized_arrays()[0]))
    rho = set_distance(support, F)
    sigma = sigma_fraction * c * c1 * rho**2 / 8.0
    K = beta / (6.0 * c * c1) if c1 > 0 else math.inf
    disk_grid = _closed_disk_grid()
    rows = []
    for n in ns:
        f = companion_function(int(n), F, sigma)
        vmax = float(np.max(np.abs(f.evaluate(disk_grid)[0])))
        pts = Region("complement", int(n), nu, rho).grid(n_radial, n_angular, nu.realized_arrays()[0])
        lower = 0.25 * n ** (-8.0 * sigma / rho**2)
        vmin = float(np.min(np.abs(f.evaluate(pts)[0]))) if pts.size else math.inf
        rows.append(
            {
                "n": int(n),
                "max_modulus": vmax,
                "complement_nodes": int(pts.size),
                "complement_min": vmin,
                "lower_bound": lower,
                "lower_bound_holds": bool(vmin >= lower),
                "norm": pt_norm(f, mu, 2.0),
            }
        )
    logn = np.log([r["n"] for r in rows])
    slope = float(np.polyfit(logn, np.log([r["norm"] for r in rows]), 1)[0])
    return {
        "rho": rho,
        "sigma": sigma,
        "c": c,
        "c1": c1,
        "K": K,
        "slope_limit": -3.0 * c * c1 * K,
        "norm_slope": slope,
        "rows": rows,
    }


def support_gap(theta: BoundedFunctionSpec, mu: SpaceMeasure) -> float:
    """``rho``: distance between the realized singular support and the boundary carrier."""
    ang = theta.singular_part.realized_arrays()[0]
    if ang.size == 0 or mu.boundary.is_zero:
        return math.inf
    return set_distance(CircleSet.from_points(list(ang)), mu.boundary.carrier)


def hardy_distance(theta: BoundedFunctionSpec) -> float:
    """``sqrt(1 - |theta(0)|^2)`` for inner ``theta`` with circle-only Lebesgue measure."""
    v = abs(complex(np.atleast_1d(theta.evaluate(0.0)[0])[0]))
    return math.sqrt(max(0.0, 1.0 - v * v))


__all__ = [
    "DEFAULT_DEGREES",
    "DistanceCurve",
    "solve_distances",
    "distance_curve",
    "CauchySolution",
    "cauchy_solve_radial",
    "cauchy_pairing",
    "CertificateOptions",
    "KThetaFunctional",
    "membership_residuals",
    "ktheta_functional",
    "DualCertificate",
    "dual_lower_bound",
    "certify",
    "Verdict",
    "classify",
    "reduction_check",
    "Calibration",
    "calibrate_c1",
    "corona_hypothesis_check",
    "companion_checks",
    "support_gap",
    "hardy_distance",
]
