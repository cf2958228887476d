"""Bounded analytic functions on the disk: Blaschke, singular inner and outer factors.

Outer factors are described by their boundary log-modulus.  They are
evaluated as ``exp`` of the Herglotz integral of that real profile, so no
complex logarithm (and no branch cut) is ever taken.  Profiles with a
closed-form Herglotz transform use it; the rest go through a
double-exponential rule split at ``arg z``.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.signal import lfilter
from scipy.special import spence

from .circle_sets import CircleSet, angular_offset
from .errors import NonIntegrableLog, OnSingularSupport, QuadratureNotConverged, SupportCollision
from .measures import BoundaryWeight, CuspPiece, SingularMeasure
from .quadrature import TWO_PI, circle_nodes, tanh_sinh

_ATOM_TOL = 1e-14
_CHUNK = 1 << 21  # complex entries per evaluation block


# ---------------------------------------------------------------------------
# kernels and closed forms


def _delta_kernel(delta, r):
    """Herglotz kernel ``(e^{i d} + r)/(e^{i d} - r)`` written in the angle offset."""
    half = np.sin(0.5 * delta)
    em1 = -2.0 * half * half + 1j * np.sin(delta)  # e^{i d} - 1
    return (em1 + (1.0 + r)) / (em1 + (1.0 - r))


def arc_herglotz(start: float, span: float, z) -> np.ndarray:
    """``int_arc (zeta+z)/(zeta-z) dm(zeta)`` in closed form.

    Valid in the closed disk; on the circle the real part is the arc
    indicator and the point must not be an endpoint.
    """
    z = np.asarray(z, dtype=complex)
    if span >= TWO_PI - 1e-15:
        return np.ones(z.shape, dtype=complex)
    a = np.exp(1j * start)
    b = np.exp(1j * (start + span))
    r = np.abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (b - z) / (a - z)
        inc = np.mod(np.angle(ratio), TWO_PI)
        on = r >= 1.0 - 1e-15
        if np.any(on):
            inside = angular_offset(np.angle(z[on]), start) < span
            inc = inc.copy()
            inc[on] = math.pi * inside + 0.5 * span
        log_ratio = np.log(np.abs(ratio))
        # the conjugate part blows up at the endpoints; only the modulus is meaningful there
        log_ratio[on & ~np.isfinite(log_ratio)] = 0.0
        return inc / math.pi - span / TWO_PI - 1j / math.pi * log_ratio


def clausen2(theta) -> np.ndarray:
    """Clausen function ``Cl_2(theta) = Im Li_2(e^{i theta})``."""
    w = np.exp(1j * np.asarray(theta, dtype=float))
    return np.imag(spence(1.0 - w))


def cutoff_arc_log_integral(span: float) -> float:
    """``int_A log|(zeta-a)(zeta-b)| dm`` over an arc of angular ``span``."""
    return float(-clausen2(span) / math.pi)


# ---------------------------------------------------------------------------
# log-modulus profiles


@dataclass(frozen=True)
class Segment:
    """Profile restricted to one arc; ``func(x, dx_left, dx_right)`` with x in [0, 1]."""

    start: float
    span: float
    func: object
    constant: float | None = None

    def eval(self, x, da, db):
        if self.constant is not None:
            return np.full(np.shape(x), self.constant)
        return self.func(x, da, db)


class LogModulus:
    """Boundary log-modulus of an outer function (zero off its segments)."""

    def segments(self) -> list[Segment]:
        raise NotImplementedError

    def closed_form(self, z) -> np.ndarray | None:
        """Herglotz transform in closed form, or None."""
        return None

    def check_integrable(self) -> None:
        return None

    def value(self, angle) -> np.ndarray:
        angle = np.asarray(angle, dtype=float)
        out = np.zeros(angle.shape)
        for seg in self.segments():
            off = angular_offset(angle, seg.start)
            inside = off < seg.span if seg.span < TWO_PI - 1e-15 else np.ones(angle.shape, bool)
            if np.any(inside):
                x = off[inside] / seg.span
                out[inside] += seg.eval(x, x, 1.0 - x)
        return out

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ZeroLog(LogModulus):
    def segments(self):
        return []

    def closed_form(self, z):
        return np.zeros(np.shape(z), dtype=complex)

    def to_dict(self):
        return {"kind": "zero"}


@dataclass(frozen=True)
class ArcConstantLog(LogModulus):
    """``level`` on the closed set ``cset``, zero elsewhere."""

    cset: CircleSet
    level: float

    def segments(self):
        return [Segment(s, span, None, self.level) for s, span in self.cset.components() if span > 0.0]

    def closed_form(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for s, span in self.cset.components():
            if span > 0.0:
                out += arc_herglotz(s, span, z)
        return self.level * out

    def to_dict(self):
        return {"kind": "arc-constant", "set": self.cset.to_dict(), "level": self.level}


@dataclass(frozen=True)
class WeightLog(LogModulus):
    """``log omega`` on the carrier (``clip_at_zero`` gives ``log min(1, omega)``)."""

    weight: BoundaryWeight
    clip_at_zero: bool = False

    def segments(self):
        out = []
        for start, span, piece in self.weight.segments():
            if piece.constant:
                lv = float(piece.log_value(np.array([0.5]))[0])
                if self.clip_at_zero:
                    lv = min(lv, 0.0)
                if lv != 0.0:
                    out.append(Segment(start, span, None, lv))
                continue
            clip = self.clip_at_zero

            def f(x, da, db, piece=piece, clip=clip):
                v = piece.log_value(x, da, db)
                return np.minimum(v, 0.0) if clip else v

            out.append(Segment(start, span, f))
        return out

    def check_integrable(self):
        for _, _, piece in self.weight.segments():
            if isinstance(piece, CuspPiece) and piece.gamma >= 1.0:
                raise NonIntegrableLog("cusp exponent gamma >= 1")

    def closed_form(self, z):
        segs = self.segments()
        if all(s.constant is not None for s in segs):
            z = np.asarray(z, dtype=complex)
            out = np.zeros(z.shape, dtype=complex)
            for s in segs:
                out += s.constant * arc_herglotz(s.start, s.span, z)
            return out
        return None

    def to_dict(self):
        return {"kind": "weight", "weight": self.weight.to_dict(), "clip_at_zero": self.clip_at_zero}


@dataclass(frozen=True)
class CutoffLog(LogModulus):
    """``power * log|(zeta-a)(zeta-b)|`` on each complementary arc of ``E``, 0 on ``E``."""

    E: CircleSet
    power: int

    def segments(self):
        out = []
        if self.power == 0:
            return out
        n = float(self.power)
        for arc in self.E.complementary_arcs:
            span = arc.span

            def f(x, da, db, span=span):
                return n * (np.log(2.0 * np.sin(0.5 * span * da)) + np.log(2.0 * np.sin(0.5 * span * db)))

            out.append(Segment(arc.start, span, f))
        return out

    def to_dict(self):
        return {"kind": "cutoff", "E": self.E.to_dict(), "N": self.power}


@dataclass(frozen=True)
class SumLog(LogModulus):
    parts: tuple[LogModulus, ...]

    def segments(self):
        return [s for p in self.parts for s in p.segments()]

    def closed_form(self, z):
        vals = [p.closed_form(z) for p in self.parts]
        if any(v is None for v in vals):
            return None
        return sum(vals)

    def check_integrable(self):
        for p in self.parts:
            p.check_integrable()

    def to_dict(self):
        return {"kind": "sum", "parts": [p.to_dict() for p in self.parts]}


def log_modulus_from_dict(data: dict) -> LogModulus:
    kind = data.get("kind")
    if kind == "zero":
        return ZeroLog()
    if kind == "arc-constant":
        return ArcConstantLog(CircleSet.from_dict(data["set"]), float(data["level"]))
    if kind == "weight":
        return WeightLog(BoundaryWeight.from_dict(data["weight"]), bool(data.get("clip_at_zero", False)))
    if kind == "cutoff":
        return CutoffLog(CircleSet.from_dict(data["E"]), int(data["N"]))
    if kind == "sum":
        return SumLog(tuple(log_modulus_from_dict(p) for p in data["parts"]))
    raise ValueError(f"unknown log-modulus kind {kind!r}")


# ---------------------------------------------------------------------------
# numeric Herglotz transform


def _segment_nodes(seg: Segment, theta, level):
    """Nodes for one segment and a batch of target angles.

    Returns ``(vals, delta, w, pv_const)`` with arrays shaped ``(P, n)``:
    profile values, angle offsets ``t - theta`` and weights already
    scaled by ``span / 2pi``.  For targets inside the segment the range
    is split at the target so the kernel peak sits at a node cluster.
    """
    u, ul, ur, wu = tanh_sinh(0.0, 1.0, level)
    span = seg.span
    full = span >= TWO_PI - 1e-15
    x0 = angular_offset(theta, seg.start) / span  # (P,)
    inside = (x0 < 1.0) | full
    P = theta.shape[0]
    n = u.shape[0]
    scale = span / TWO_PI
    vals = np.empty((P, 2 * n))
    delta = np.empty((P, 2 * n))
    w = np.empty((P, 2 * n))
    # left piece [0, x0] and right piece [x0, 1] for inside targets
    xi = x0[:, None]
    xl = xi * u[None, :]
    dl_left = xi * ul[None, :]
    dl_right = (1.0 - xi) + xi * ur[None, :]
    xr = xi + (1.0 - xi) * u[None, :]
    dr_left = xi + (1.0 - xi) * ul[None, :]
    dr_right = (1.0 - xi) * ur[None, :]
    in_left = seg.eval(xl, dl_left, dl_right)
    in_right = seg.eval(xr, dr_left, dr_right)
    d_left = -span * xi * ur[None, :]
    d_right = span * (1.0 - xi) * ul[None, :]
    # outside targets: whole segment, offset measured the short way round
    d0 = angular_offset(seg.start, theta)[:, None]  # start - theta in [0, 2pi)
    gap_after = TWO_PI - d0 - span
    out_vals = seg.eval(np.broadcast_to(u, (P, n)), np.broadcast_to(ul, (P, n)), np.broadcast_to(ur, (P, n)))
    da = d0 + span * ul[None, :]
    db = -gap_after - span * ur[None, :]
    d_out = np.where(np.abs(da) <= np.abs(db), da, db)
    ins = inside[:, None]
    vals[:, :n] = np.where(ins, in_left, out_vals * 0.5)
    vals[:, n:] = np.where(ins, in_right, out_vals * 0.5)
    delta[:, :n] = np.where(ins, d_left, d_out)
    delta[:, n:] = np.where(ins, d_right, d_out)
    w[:, :n] = np.where(ins, scale * xi * wu[None, :], scale * wu[None, :])
    w[:, n:] = np.where(ins, scale * (1.0 - xi) * wu[None, :], scale * wu[None, :])
    # constant value at the target for principal-value subtraction
    if seg.constant is not None:
        f0 = np.where(inside, seg.constant, 0.0)
    else:
        xs = np.clip(x0, 0.0, 1.0)
        f0 = np.where(inside, seg.eval(xs, xs, 1.0 - xs), 0.0)
    if full:
        pv = np.zeros(P)
    else:
        d1 = -span * x0  # start - theta
        d2 = span * (1.0 - x0)  # end - theta
        with np.errstate(divide="ignore"):
            pv = 2.0 * np.log(np.abs(np.sin(0.5 * d2) / np.sin(0.5 * d1)))
    return vals, delta, w, inside, f0, pv


def _herglotz_level(profile: LogModulus, z: np.ndarray, level: int) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return _herglotz_level_raw(profile, z, level)


def _herglotz_level_raw(profile: LogModulus, z: np.ndarray, level: int) -> np.ndarray:
    r = np.abs(z)
    theta = np.angle(z)
    boundary = r >= 1.0
    out = np.zeros(z.shape, dtype=complex)
    for seg in profile.segments():
        vals, delta, w, inside, f0, pv = _segment_nodes(seg, theta, level)
        rr = r[:, None]
        interior = ~boundary
        if np.any(interior):
            k = _delta_kernel(delta[interior], rr[interior])
            out[interior] += np.sum(w[interior] * vals[interior] * k, axis=1)
        if np.any(boundary):
            b = boundary
            cot = 1.0 / np.tan(0.5 * delta[b])
            sub = np.where(inside[b][:, None], vals[b] - f0[b][:, None], vals[b])
            imag = -np.sum(w[b] * sub * cot, axis=1) - f0[b] * np.where(inside[b], pv[b], 0.0) / TWO_PI
            out[b] += f0[b] + 1j * imag
    return out


@lru_cache(maxsize=8)
def _graded_rule(order: int, depth: int = 20, middle: int = 8):
    """Gauss-Legendre panels on [0, 1] graded geometrically toward both ends.

    Returns ``(x, da, db, w)`` with end offsets computed without cancellation.
    """
    u, wu = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (u + 1.0)
    wu = 0.5 * wu
    edges = [2.0 ** (-k) for k in range(depth, 1, -1)]  # 2^-depth, ..., 1/4
    # innermost panel x = eps * s^8 absorbs algebraic and log endpoint singularities
    eps = edges[0]
    end_d = [eps * u**8]
    end_w = [eps * 8.0 * u**7 * wu]
    for lo, hi in zip(edges[:-1], edges[1:]):
        end_d.append(lo + (hi - lo) * u)
        end_w.append((hi - lo) * wu)
    da, db, ws = [], [], []
    for d, w in zip(end_d, end_w):
        da.append(d)
        db.append(1.0 - d)
        ws.append(w)
    mid = np.linspace(0.25, 0.75, middle + 1)
    for lo, hi in zip(mid[:-1], mid[1:]):
        d = lo + (hi - lo) * u
        da.append(d)
        db.append(1.0 - d)
        ws.append((hi - lo) * wu)
    for d, w in zip(end_d, end_w):
        db.append(d)
        da.append(1.0 - d)
        ws.append(w)
    da = np.concatenate(da)
    db = np.concatenate(db)
    return da.copy(), da, db, np.concatenate(ws)


def _conjugate_offsegment(start, span, func, theta, order):
    """``-(1/2pi) int_arc cot((t - theta)/2) f(t) dt`` for targets off the arc."""
    x, da, db, w = _graded_rule(order)
    f = func(x, da, db) * w * (span / TWO_PI)
    d0 = angular_offset(start, theta)[:, None]
    gap_after = TWO_PI - d0 - span
    out = np.empty(theta.shape)
    step = max(1, _CHUNK // x.size)
    for i in range(0, theta.size, step):
        sl = slice(i, i + step)
        dl = d0[sl] + span * da[None, :]
        dr = -gap_after[sl] - span * db[None, :]
        delta = np.where(np.abs(dl) <= np.abs(dr), dl, dr)
        out[sl] = -(1.0 / np.tan(0.5 * delta)) @ f
    return out


def _conjugate_onsegment(start, span, func, theta, order):
    """Principal-value version for targets inside the arc (value subtracted)."""
    x, da, db, w = _graded_rule(order)
    fq = func(x, da, db)
    x0 = angular_offset(theta, start) / span
    f0 = func(x0, x0, 1.0 - x0)
    out = np.empty(theta.shape)
    step = max(1, _CHUNK // x.size)
    ws = w * (span / TWO_PI)
    for i in range(0, theta.size, step):
        sl = slice(i, i + step)
        delta = span * (x[None, :] - x0[sl, None])
        with np.errstate(divide="ignore", invalid="ignore"):
            integrand = (fq[None, :] - f0[sl, None]) / np.tan(0.5 * delta)
        integrand[~np.isfinite(integrand)] = 0.0
        out[sl] = -integrand @ ws
    d1 = -span * x0
    d2 = span * (1.0 - x0)
    pv = 2.0 * np.log(np.abs(np.sin(0.5 * d2) / np.sin(0.5 * d1)))
    return f0 + 1j * (out - f0 * pv / TWO_PI), f0


def _boundary_herglotz(profile: LogModulus, theta: np.ndarray, order: int) -> np.ndarray:
    theta = np.mod(theta, TWO_PI)
    out = np.zeros(theta.shape, dtype=complex)
    if isinstance(profile, CutoffLog):
        if profile.power == 0:
            return out
        n = float(profile.power)
        zeta = np.exp(1j * theta)
        for arc in profile.E.complementary_arcs:
            a, b = arc.endpoints()
            inside = arc.contains(theta)
            endpoint = (np.abs(zeta - a) < 1e-13) | (np.abs(zeta - b) < 1e-13)
            inside &= ~endpoint
            off = ~inside & ~endpoint
            if np.any(off):
                out[off] += 1j * n * _conjugate_offsegment(arc.start, arc.span, _cutoff_func(arc.span), theta[off], order)
            if np.any(inside):
                cspan = TWO_PI - arc.span
                zi = zeta[inside]
                full = np.log1p(-zi / a) + np.log1p(-zi / b)
                rest = _conjugate_offsegment(arc.start + arc.span, cspan, _cutoff_func(cspan), theta[inside], order)
                out[inside] += n * (full - 1j * rest)
            out[endpoint] = -np.inf
        return out
    ends = np.zeros(theta.shape, bool)
    for seg in profile.segments():
        off = angular_offset(theta, seg.start)
        full = seg.span >= TWO_PI - 1e-15
        if not full:
            near = (np.minimum(off, TWO_PI - off) < 1e-13) | (np.abs(off - seg.span) < 1e-13)
            ends |= near
        inside = np.ones(theta.shape, bool) if full else (off > 0.0) & (off < seg.span) & ~near
        func = seg.eval
        if np.any(~inside):
            out[~inside] += 1j * _conjugate_offsegment(seg.start, seg.span, func, theta[~inside], order)
        if np.any(inside):
            if full:
                raise QuadratureNotConverged("full-circle profiles need a closed form")
            val, _ = _conjugate_onsegment(seg.start, seg.span, func, theta[inside], order)
            out[inside] += val
    # segment endpoints: the modulus degenerates there, report log 0
    out[ends] = -np.inf
    return out


def _cutoff_func(span):
    def f(x, da, db):
        return np.log(2.0 * np.sin(0.5 * span * da)) + np.log(2.0 * np.sin(0.5 * span * db))

    return f


def herglotz(profile: LogModulus, z, tol: float = 1e-12, max_level: int = 10, min_level: int = 4):
    """Herglotz transform ``int (zeta+z)/(zeta-z) L(zeta) dm`` and an error estimate.

    Points with ``|z| = 1`` get boundary values (real part ``L``, imaginary
    part the conjugate function); they must avoid segment endpoints.
    """
    profile.check_integrable()
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(z) > 1.0 + 1e-15):
        raise ValueError("points must lie in the closed disk")
    cf = profile.closed_form(z)
    if cf is not None:
        return cf, np.zeros(z.shape)
    if not profile.segments():
        return np.zeros(z.shape, dtype=complex), np.zeros(z.shape)
    flat = z.ravel()
    val = np.empty(flat.shape, dtype=complex)
    err = np.empty(flat.shape)
    on = np.abs(flat) >= 1.0
    if np.any(on):
        th = np.angle(flat[on])
        hi = _boundary_herglotz(profile, th, 20)
        lo = _boundary_herglotz(profile, th, 14)
        with np.errstate(invalid="ignore"):
            d = np.where(np.isfinite(hi), np.abs(hi - lo), 0.0)
        # principal-value targets lose a few digits to cancellation next to nodes
        if np.any(d > 1e-7 * np.maximum(1.0, np.abs(np.where(np.isfinite(hi), hi, 0.0)))):
            raise QuadratureNotConverged(f"boundary Herglotz rule did not converge ({d.max():.2e})")
        val[on] = hi
        err[on] = d
    if np.all(on):
        return val.reshape(z.shape), err.reshape(z.shape)
    idx = np.flatnonzero(~on)
    sub_val, sub_err = _herglotz_interior(profile, flat[idx], tol, max_level, min_level)
    val[idx] = sub_val
    err[idx] = sub_err
    return val.reshape(z.shape), err.reshape(z.shape)


def _herglotz_interior(profile, flat, tol, max_level, min_level):
    val = np.empty(flat.shape, dtype=complex)
    err = np.empty(flat.shape)
    nseg = max(1, len(profile.segments()))
    step = max(1, _CHUNK // (nseg * 2 * len(tanh_sinh(0.0, 1.0, max_level)[0])))
    for i in range(0, flat.size, step):
        zz = flat[i : i + step]
        prev = _herglotz_level(profile, zz, min_level)
        level = min_level
        while True:
            level += 1
            cur = _herglotz_level(profile, zz, level)
            diff = np.abs(cur - prev)
            if np.all(diff <= tol * np.maximum(1.0, np.abs(cur))) or level >= max_level:
                break
            prev = cur
        if not np.all(np.isfinite(cur)):
            raise QuadratureNotConverged("Herglotz quadrature produced non-finite values")
        if np.any(diff > 1e3 * tol * np.maximum(1.0, np.abs(cur))):
            raise QuadratureNotConverged(
                f"Herglotz quadrature did not converge (max change {diff.max():.2e} at level {level})"
            )
        val[i : i + step] = cur
        err[i : i + step] = diff
    return val, err


def eval_outer(profile: LogModulus, z, tol: float = 1e-12, max_level: int = 10):
    """Outer function ``exp(int K L dm)`` with error estimate from two rule levels."""
    hv, he = herglotz(profile, z, tol=tol, max_level=max_level)
    val = np.exp(hv)
    return val, np.abs(val) * np.expm1(he)


# ---------------------------------------------------------------------------
# inner factors


def _singular_herglotz(ang, mass, z):
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    out = np.zeros(flat.shape, dtype=complex)
    if ang.size == 0:
        return out.reshape(z.shape)
    zeta = np.exp(1j * ang)
    step = max(1, _CHUNK // max(1, ang.size))
    for i in range(0, flat.size, step):
        zz = flat[i : i + step]
        diff = zeta[None, :] - zz[:, None]
        out[i : i + step] = np.sum(mass[None, :] * (zeta[None, :] + zz[:, None]) / diff, axis=1)
    return out.reshape(z.shape)


def _singular_error(ang, mass, spread, z):
    z = np.asarray(z, dtype=complex)
    keep = spread > 0
    if not np.any(keep):
        return np.zeros(z.shape)
    zeta = np.exp(1j * ang[keep])
    flat = z.ravel()
    out = np.zeros(flat.shape)
    step = max(1, _CHUNK // max(1, int(keep.sum())))
    for i in range(0, flat.size, step):
        zz = flat[i : i + step]
        d = np.abs(zeta[None, :] - zz[:, None]) - spread[keep][None, :]
        with np.errstate(divide="ignore"):
            term = np.where(d > 0, 2.0 * mass[keep] * spread[keep] / np.maximum(d, 1e-300) ** 2, np.inf)
        out[i : i + step] = np.sum(term, axis=1)
    return out.reshape(z.shape)


def _check_support(ang, z):
    if ang.size == 0:
        return
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    on = np.abs(z) >= 1.0 - 1e-12
    if not np.any(on):
        return
    zeta = np.exp(1j * ang)
    d = np.min(np.abs(z[on][:, None] - zeta[None, :]), axis=1)
    if np.any(d <= _ATOM_TOL):
        raise OnSingularSupport("evaluation point lies on a realized atom")


def eval_singular_inner(nu: SingularMeasure, z):
    """``S_nu(z)`` over the realized atoms, with a transport error bound.

    Returns ``(value, error_bound)``.  The bound covers the gap between a
    Cantor component and its midpoint realization: mass times transport
    radius times the kernel Lipschitz constant ``2/dist^2``.
    """
    ang, mass, spread = nu.realized_arrays()
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(z) > 1.0 + 1e-15):
        raise ValueError("points must lie in the closed disk")
    _check_support(ang, z)
    val = np.exp(-_singular_herglotz(ang, mass, z))
    eb = _singular_error(ang, mass, spread, z)
    with np.errstate(over="ignore", invalid="ignore"):
        err = np.where(np.isfinite(eb), np.abs(val) * np.expm1(eb), np.inf)
    if scalar:
        return complex(val[0]), float(err[0])
    return val, err


def eval_blaschke(zeros: Sequence[complex], z):
    """Finite Blaschke product; a zero at the origin contributes ``z``."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.ones(z.shape, dtype=complex)
    for a in zeros:
        a = complex(a)
        if a == 0:
            out *= z
        else:
            out *= cmath.exp(-1j * cmath.phase(a)) * (a - z) / (1.0 - a.conjugate() * z)
    return complex(out[0]) if scalar else out


def singular_fourier(nu: SingularMeasure, count: int) -> np.ndarray:
    """``int conj(zeta)^k dnu`` for ``k = 0..count-1``."""
    ang, mass, _ = nu.realized_arrays()
    out = np.zeros(count, dtype=complex)
    if ang.size == 0:
        return out
    k = np.arange(count)
    step = max(1, _CHUNK // max(1, ang.size))
    for i in range(0, count, step):
        kk = k[i : i + step]
        out[i : i + step] = np.exp(-1j * np.outer(kk, ang)) @ mass
    return out


def singular_on_circle(nu: SingularMeasure, r: float, count: int, fourier: np.ndarray | None = None):
    """``S_nu(r zeta_m)`` on ``count`` equispaced angles.

    Radii well inside the disk use the Fourier series of the Herglotz
    transform (one inverse FFT); otherwise atoms are summed directly.
    """
    ang, mass, _ = nu.realized_arrays()
    if ang.size == 0:
        return np.ones(count, dtype=complex)
    if r < 1.0 - 40.0 / count and fourier is not None and fourier.size >= count:
        coef = 2.0 * fourier[:count] * r ** np.arange(count)
        coef[0] = fourier[0]
        h = np.fft.ifft(coef) * count
        return np.exp(-h)
    z = r * np.exp(1j * circle_nodes(count))
    return np.exp(-_singular_herglotz(ang, mass, z))


# ---------------------------------------------------------------------------
# composite specs


@dataclass(frozen=True)
class BoundedFunctionSpec:
    """``constant * z^power * B(z) * S_nu(z) * outer(z)``."""

    blaschke_zeros: tuple[complex, ...] = ()
    singular_part: SingularMeasure = field(default_factory=SingularMeasure.zero)
    outer_log_modulus: LogModulus | None = None
    monomial_power: int = 0
    constant: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "blaschke_zeros", tuple(complex(a) for a in self.blaschke_zeros))
        if any(abs(a) >= 1.0 for a in self.blaschke_zeros):
            raise ValueError("Blaschke zeros must lie in the open disk")
        if self.monomial_power < 0:
            raise ValueError("monomial power must be nonnegative")

    @property
    def is_inner(self) -> bool:
        return self.outer_log_modulus is None and abs(abs(self.constant) - 1.0) < 1e-15

    def evaluate(self, z, tol: float = 1e-12):
        """Values and error bounds at points of the closed disk."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        val, err = eval_singular_inner(self.singular_part, z)
        val = val * eval_blaschke(self.blaschke_zeros, z) * self.constant
        if self.monomial_power:
            val = val * z**self.monomial_power
        if self.outer_log_modulus is not None:
            ov, oe = eval_outer(self.outer_log_modulus, z, tol=tol)
            err = err * np.abs(ov) + np.abs(val) * oe
            val = val * ov
        return val, err

    def reciprocal_outside(self, z) -> np.ndarray:
        """``1/theta`` continued to ``|z| > 1``; equals ``conj(theta)`` on the circle."""
        if not self.is_inner:
            raise ValueError("reciprocal continuation needs an inner function")
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if np.any(np.abs(z) <= 1.0):
            raise ValueError("points must lie outside the closed disk")
        ang, mass, _ = self.singular_part.realized_arrays()
        val = np.exp(_singular_herglotz(ang, mass, z)) / self.constant
        if self.blaschke_zeros:
            val = val / eval_blaschke(self.blaschke_zeros, z)
        if self.monomial_power:
            val = val * z ** (-self.monomial_power)
        return val

    def on_circle(self, r: float, count: int, fourier: np.ndarray | None = None) -> np.ndarray:
        """Values at ``r * exp(2 pi i m / count)``."""
        zeta = np.exp(1j * circle_nodes(count))
        z = r * zeta
        val = singular_on_circle(self.singular_part, r, count, fourier) * self.constant
        if self.blaschke_zeros:
            val = val * eval_blaschke(self.blaschke_zeros, z)
        if self.monomial_power:
            val = val * z**self.monomial_power
        if self.outer_log_modulus is not None:
            val = val * eval_outer(self.outer_log_modulus, z)[0]
        return val

    def to_dict(self) -> dict:
        return {
            "blaschke_zeros": [[a.real, a.imag] for a in self.blaschke_zeros],
            "singular": self.singular_part.to_dict(),
            "outer": None if self.outer_log_modulus is None else self.outer_log_modulus.to_dict(),
            "monomial_power": self.monomial_power,
            "constant": [complex(self.constant).real, complex(self.constant).imag],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundedFunctionSpec":
        const = data.get("constant", [1.0, 0.0])
        outer = data.get("outer")
        return cls(
            tuple(complex(a[0], a[1]) for a in data.get("blaschke_zeros", [])),
            SingularMeasure.from_dict(data.get("singular", {})),
            None if outer is None else log_modulus_from_dict(outer),
            int(data.get("monomial_power", 0)),
            complex(const[0], const[1]),
        )


def cutoff_outer(E: CircleSet, N: int) -> BoundedFunctionSpec:
    """Outer function with ``|s| = phi^N``: ``phi = |(zeta-a)(zeta-b)|`` on each gap, 1 on ``E``."""
    if not E.complementary_arcs:
        raise ValueError("E must have a nonempty complement")
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N == 0:
        return BoundedFunctionSpec(outer_log_modulus=ZeroLog())
    return BoundedFunctionSpec(outer_log_modulus=CutoffLog(E, int(N)))


def cutoff_phi(E: CircleSet, angle) -> np.ndarray:
    """``phi`` itself at boundary angles."""
    angle = np.asarray(angle, dtype=float)
    out = np.ones(angle.shape)
    for arc in E.complementary_arcs:
        inside = arc.contains(angle)
        a, b = arc.endpoints()
        z = np.exp(1j * angle[inside])
        out[inside] = np.abs((z - a) * (z - b))
    return out


def companion_function(n: int, F: CircleSet, sigma: float) -> BoundedFunctionSpec:
    """``f_n = z^n h_n`` where ``|h_n| = n^{-sigma n}`` on ``F`` and 1 off ``F``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if not F.complementary_arcs or F.measure <= 0:
        raise ValueError("F must be nonempty with nonempty complement")
    return BoundedFunctionSpec(
        outer_log_modulus=ArcConstantLog(F, -sigma * n * math.log(n)), monomial_power=int(n)
    )


# ---------------------------------------------------------------------------
# regions and minimum modulus


@dataclass(frozen=True)
class Region:
    """``disk`` is ``D_n``; ``omega`` is ``D_n`` plus the points at distance
    ``>= rho/2`` from the support; ``complement`` is the rest of the disk."""

    kind: str
    n: int
    nu_support: SingularMeasure = field(default_factory=SingularMeasure.zero)
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in ("disk", "omega", "complement"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.n < 2 or self.rho < 0:
            raise ValueError("need n >= 2 and rho >= 0")

    @property
    def radius(self) -> float:
        return 1.0 - 1.0 / self.n

    def grid(self, n_radial: int, n_angular: int, extra_angles: Sequence[float] = ()) -> np.ndarray:
        ang = np.concatenate([circle_nodes(n_angular), np.asarray(extra_angles, dtype=float)])
        R = self.radius
        zeta = np.exp(1j * ang)
        if self.kind == "disk":
            radii = np.linspace(0.0, R, n_radial)
            return (radii[:, None] * zeta[None, :]).ravel()
        # collar nodes between R and 1; the circle itself only for "omega"
        if self.kind == "omega":
            radii = np.linspace(R, 1.0, n_radial)
        else:
            radii = np.linspace(R, 1.0, n_radial + 1)[1:-1]
        collar = (radii[:, None] * zeta[None, :]).ravel()
        d = support_distance(self.nu_support, collar)
        if self.kind == "omega":
            inner = (np.linspace(0.0, R, n_radial)[:, None] * zeta[None, :]).ravel()
            return np.concatenate([inner, collar[d >= 0.5 * self.rho]])
        return collar[d < 0.5 * self.rho]


def support_distance(nu: SingularMeasure, z) -> np.ndarray:
    ang, _, _ = nu.realized_arrays()
    z = np.asarray(z, dtype=complex)
    if ang.size == 0:
        return np.full(z.shape, np.inf)
    zeta = np.exp(1j * ang)
    out = np.empty(z.size)
    flat = z.ravel()
    step = max(1, _CHUNK // ang.size)
    for i in range(0, flat.size, step):
        out[i : i + step] = np.min(np.abs(flat[i : i + step, None] - zeta[None, :]), axis=1)
    return out.reshape(z.shape)


@dataclass
class MinModulus:
    value: float
    argmin: complex
    grid: dict


def min_modulus(
    theta: BoundedFunctionSpec,
    region: Region,
    n_radial: int = 32,
    n_angular: int = 1024,
    margin: float = 1e-12,
    include_atom_angles: bool = True,
) -> MinModulus:
    """Minimum of ``|theta|`` over a deterministic grid of ``region``."""
    extra = theta.singular_part.realized_arrays()[0] if include_atom_angles else np.array([])
    pts = region.grid(n_radial, n_angular, extra)
    d = support_distance(theta.singular_part, pts)
    if np.any(d <= margin):
        raise SupportCollision("grid node within margin of the singular support", margin=margin)
    vals, _ = theta.evaluate(pts)
    a = np.abs(vals)
    i = int(np.argmin(a))
    spec = {
        "kind": region.kind,
        "n": region.n,
        "rho": region.rho,
        "n_radial": n_radial,
        "n_angular": n_angular,
        "extra_angles": int(len(extra)),
        "nodes": int(pts.size),
    }
    return MinModulus(float(a[i]), complex(pts[i]), spec)


# ---------------------------------------------------------------------------
# coefficients


def sobolev_norm(coeffs, tau: float) -> float:
    """``(sum (n+1)^tau |f_n|^2)^(1/2)``."""
    c = np.asarray(coeffs)
    w = (np.arange(c.size) + 1.0) ** tau
    return float(np.sqrt(np.sum(w * np.abs(c) ** 2)))


def _exp_series(b: np.ndarray, a0: complex) -> np.ndarray:
    # a = exp(sum_{k>=1} b_k z^k) * a0 by a_n = (1/n) sum_k k b_k a_{n-k}
    n = b.size
    a = np.zeros(n, dtype=complex)
    a[0] = a0
    kb = np.arange(n) * b
    for m in range(1, n):
        a[m] = np.dot(kb[1 : m + 1], a[m - 1 :: -1][:m]) / m
    return a


def _next_pow2(x: int) -> int:
    return 1 << max(0, int(math.ceil(math.log2(max(1, x)))))


def singular_taylor(nu: SingularMeasure, count: int, method: str = "auto") -> np.ndarray:
    """Taylor coefficients of ``S_nu``.

    ``"series"`` composes the Herglotz series with ``exp`` by the
    power-series recurrence; ``"radius"`` takes an FFT on the circle of
    radius ``1 - 1/(2 count)`` and rescales.
    """
    if count < 1:
        raise ValueError("count must be positive")
    ang, mass, _ = nu.realized_arrays()
    if ang.size == 0:
        out = np.zeros(count, dtype=complex)
        out[0] = 1.0
        return out
    if method == "auto":
        method = "series" if count <= 2048 else "radius"
    if method == "series":
        nh = singular_fourier(nu, count)
        b = -2.0 * nh
        b[0] = 0.0
        return _exp_series(b, math.exp(-nu.total_mass))
    r = 1.0 - 1.0 / (2.0 * count)
    M = _next_pow2(80 * count)
    vals = singular_on_circle(nu, r, M)
    c = np.fft.fft(vals)[:count] / M
    return c * r ** (-np.arange(count, dtype=float))


def taylor_coefficients(spec: BoundedFunctionSpec, count: int, method: str = "auto") -> np.ndarray:
    """First ``count`` Taylor coefficients of a composite spec."""
    c = singular_taylor(spec.singular_part, count, method) * spec.constant
    for a in spec.blaschke_zeros:
        if a == 0:
            c = np.concatenate([[0.0], c[:-1]])
            continue
        u = cmath.exp(-1j * cmath.phase(a))
        # multiply by u (a - z), then divide by (1 - conj(a) z)
        num = u * (a * c - np.concatenate([[0.0], c[:-1]]))
        c = lfilter([1.0], [1.0, -a.conjugate()], num)
    if spec.outer_log_modulus is not None:
        r = 1.0 - 1.0 / (2.0 * count)
        M = _next_pow2(80 * count)
        z = r * np.exp(1j * circle_nodes(M))
        ov = eval_outer(spec.outer_log_modulus, z)[0]
        oc = np.fft.fft(ov)[:count] / M * r ** (-np.arange(count, dtype=float))
        L = _next_pow2(2 * count)
        c = np.fft.ifft(np.fft.fft(c, L) * np.fft.fft(oc, L))[:count]
    if spec.monomial_power:
        p = spec.monomial_power
        c = np.concatenate([np.zeros(min(p, count), dtype=complex), c[: max(0, count - p)]])
    return np.asarray(c, dtype=complex)


# ---------------------------------------------------------------------------
# traces


def trace_csv(z, values, err) -> str:
    """CSV with columns re, im, abs, err_bound (one row per point, LF endings)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "abs", "err_bound"])
    for v, e in zip(np.ravel(values), np.ravel(err)):
        w.writerow([format(v.real, ".17g"), format(v.imag, ".17g"), format(abs(v), ".17g"), format(float(e), ".17g")])
    return buf.getvalue()
