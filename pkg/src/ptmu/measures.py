"""Singular measures on the circle, boundary weights and measure surgery.

Every singular measure is realized as a finite list of atoms.  Cantor
components place equal mass at the midpoints of their deepest level
arcs and remember each atom's transport radius (half the arc width), so
evaluation code can bound the realization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import beta as beta_fn

from .circle_sets import (
    Arc,
    CantorGenerator,
    CircleSet,
    angular_offset,
    distance_to,
    is_beurling_carleson,
    make_cantor_set,
    set_distance,
    wrap_angle,
)
from .errors import InsufficientPieces, NonIntegrableLog
from .quadrature import TWO_PI, tanh_sinh


@dataclass(frozen=True)
class Atom:
    angle: float
    mass: float
    spread: float = 0.0  # transport radius in radians, 0 for true point masses

    def __post_init__(self):
        object.__setattr__(self, "angle", wrap_angle(self.angle))
        if self.mass < 0.0:
            raise ValueError("atom mass must be nonnegative")

    def to_dict(self) -> dict:
        d = {"angle": self.angle, "mass": self.mass}
        if self.spread:
            d["spread"] = self.spread
        return d


@dataclass(frozen=True)
class CantorComponent:
    """Mass spread over a generator's depth-``depth`` level arcs.

    ``weights`` (optional) gives relative masses per level arc; the
    default is equal mass on every arc.
    """

    generator: CantorGenerator
    mass: float
    depth: int
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.mass < 0:
            raise ValueError("component mass must be nonnegative")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")

    def circle_set(self) -> CircleSet:
        return make_cantor_set(self.generator.base, self.generator.rule, self.depth)

    def realize(self) -> list[Atom]:
        arcs = self.generator.levels(self.depth)[-1]
        if self.weights is None:
            w = np.full(len(arcs), 1.0 / len(arcs))
        else:
            if len(self.weights) != len(arcs):
                raise ValueError("weights do not match the number of level arcs")
            w = np.asarray(self.weights, dtype=float)
            w = w / math.fsum(w)
        return [
            Atom(start + 0.5 * TWO_PI * length, self.mass * wi, 0.5 * TWO_PI * length)
            for (start, length), wi in zip(arcs, w)
        ]

    def to_dict(self) -> dict:
        d = {**self.generator.to_dict(), "mass": self.mass, "depth": self.depth}
        if self.weights is not None:
            d["weights"] = list(self.weights)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "CantorComponent":
        w = data.get("weights")
        return cls(
            CantorGenerator.from_dict(data),
            float(data["mass"]),
            int(data["depth"]),
            tuple(float(x) for x in w) if w is not None else None,
        )


@dataclass(frozen=True)
class SingularMeasure:
    atoms: tuple[Atom, ...] = ()
    cantor: tuple[CantorComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "cantor", tuple(self.cantor))
        angles = [a.angle for a in self.atoms]
        if len(set(angles)) != len(angles):
            raise ValueError("atom positions must be pairwise distinct")

    @classmethod
    def zero(cls) -> "SingularMeasure":
        return cls()

    @classmethod
    def point_mass(cls, angle: float, mass: float = 1.0) -> "SingularMeasure":
        return cls((Atom(angle, mass),))

    @property
    def total_mass(self) -> float:
        return math.fsum([a.mass for a in self.atoms] + [c.mass for c in self.cantor])

    @property
    def is_zero(self) -> bool:
        return self.total_mass == 0.0

    def realized_atoms(self) -> list[Atom]:
        out = [a for a in self.atoms if a.mass > 0.0]
        for comp in self.cantor:
            out.extend(a for a in comp.realize() if a.mass > 0.0)
        return out

    def realized_arrays(self):
        """``(angles, masses, spreads)`` of the realization, in a fixed order."""
        atoms = self.realized_atoms()
        ang = np.array([a.angle for a in atoms], dtype=float)
        mass = np.array([a.mass for a in atoms], dtype=float)
        spread = np.array([a.spread for a in atoms], dtype=float)
        return ang, mass, spread

    def realized(self) -> "SingularMeasure":
        """Same measure as a pure atom list."""
        return SingularMeasure(tuple(_merge_atoms(self.realized_atoms())))

    def support_distance(self, cset: CircleSet) -> float:
        """Distance between the (truncated) support and a closed set."""
        best = math.inf
        for a in self.atoms:
            if a.mass > 0:
                best = min(best, distance_to(cset, complex(math.cos(a.angle), math.sin(a.angle))))
        for comp in self.cantor:
            if comp.mass > 0:
                best = min(best, set_distance(comp.circle_set(), cset))
        return best

    def to_dict(self) -> dict:
        return {"atoms": [a.to_dict() for a in self.atoms], "cantor": [c.to_dict() for c in self.cantor]}

    @classmethod
    def from_dict(cls, data: dict) -> "SingularMeasure":
        atoms = tuple(
            Atom(float(a["angle"]), float(a["mass"]), float(a.get("spread", 0.0))) for a in data.get("atoms", [])
        )
        cantor = tuple(CantorComponent.from_dict(c) for c in data.get("cantor", []))
        return cls(atoms, cantor)

    def __add__(self, other: "SingularMeasure") -> "SingularMeasure":
        return SingularMeasure(tuple(_merge_atoms(self.realized_atoms() + other.realized_atoms())))


def _merge_atoms(atoms: Sequence[Atom]) -> list[Atom]:
    merged: dict[float, list[Atom]] = {}
    for a in atoms:
        merged.setdefault(a.angle, []).append(a)
    out = []
    for ang in sorted(merged):
        group = merged[ang]
        out.append(Atom(ang, math.fsum(g.mass for g in group), max(g.spread for g in group)))
    return out


# ---------------------------------------------------------------------------
# boundary weights


class WeightPiece:
    """Weight profile on one carrier component, in the position ``x`` in [0, 1]."""

    def log_value(self, x, dx_left=None, dx_right=None):
        raise NotImplementedError

    def value(self, x, dx_left=None, dx_right=None):
        return np.exp(self.log_value(x, dx_left, dx_right))

    #: True when the log profile is constant (closed forms apply)
    constant = False
    #: True when log profile may be continued analytically in x
    analytic = True

    def log_integral_exact(self) -> float | None:
        """``int_0^1 log w(x) dx`` in closed form, when known."""
        return None

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantPiece(WeightPiece):
    level: float = 1.0

    def __post_init__(self):
        if not self.level > 0.0:
            raise ValueError("constant weight must be positive")

    constant = True

    def log_value(self, x, dx_left=None, dx_right=None):
        return np.full(np.shape(x), math.log(self.level), dtype=np.result_type(x, float))

    def log_integral_exact(self):
        return math.log(self.level)

    def to_dict(self):
        return {"kind": "constant", "level": self.level}


@dataclass(frozen=True)
class PolynomialPiece(WeightPiece):
    """``w(x) = sum_k coeffs[k] x**k``; must be positive on the open interval."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        xs = np.linspace(0.0, 1.0, 1025)[1:-1]
        if np.any(np.polynomial.polynomial.polyval(xs, self.coeffs) <= 0.0):
            raise ValueError("polynomial weight must be positive inside its component")

    def value(self, x, dx_left=None, dx_right=None):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def log_value(self, x, dx_left=None, dx_right=None):
        return np.log(self.value(x))

    def to_dict(self):
        return {"kind": "polynomial", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class CuspPiece(WeightPiece):
    """``w = level * exp(-kappa / (x (1-x))**gamma)``, vanishing at both ends.

    The log is integrable exactly when ``gamma < 1``.
    """

    kappa: float = 1.0
    gamma: float = 0.5
    level: float = 1.0

    def __post_init__(self):
        if self.kappa < 0 or self.level <= 0:
            raise ValueError("cusp parameters must be positive")

    def log_value(self, x, dx_left=None, dx_right=None):
        x = np.asarray(x)
        a = x if dx_left is None else dx_left
        b = 1.0 - x if dx_right is None else dx_right
        with np.errstate(divide="ignore"):
            return math.log(self.level) - self.kappa / (a * b) ** self.gamma

    def log_integral_exact(self):
        if self.gamma >= 1.0:
            return -math.inf
        return math.log(self.level) - self.kappa * float(beta_fn(1.0 - self.gamma, 1.0 - self.gamma))

    def to_dict(self):
        return {"kind": "cusp", "kappa": self.kappa, "gamma": self.gamma, "level": self.level}


def piece_from_dict(data: dict) -> WeightPiece:
    kind = data.get("kind", "constant")
    if kind == "constant":
        return ConstantPiece(float(data.get("level", 1.0)))
    if kind == "polynomial":
        return PolynomialPiece(tuple(data["coeffs"]))
    if kind == "cusp":
        return CuspPiece(float(data.get("kappa", 1.0)), float(data.get("gamma", 0.5)), float(data.get("level", 1.0)))
    raise ValueError(f"unknown weight piece {kind!r}")


@dataclass(frozen=True)
class BoundaryWeight:
    """Weight ``omega`` supported on ``carrier``; one piece per carrier component.

    A single piece is broadcast to all components.  ``carrier=None`` is
    the zero weight.
    """

    carrier: CircleSet | None = None
    pieces: tuple[WeightPiece, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if self.carrier is not None:
            comps = self.carrier.components()
            if len(self.pieces) == 1 and len(comps) > 1:
                object.__setattr__(self, "pieces", self.pieces * len(comps))
            elif len(self.pieces) != len(comps):
                raise ValueError("need one weight piece per carrier component")

    @classmethod
    def zero(cls) -> "BoundaryWeight":
        return cls(None, ())

    @classmethod
    def lebesgue(cls, carrier: CircleSet | None = None, level: float = 1.0) -> "BoundaryWeight":
        return cls(carrier if carrier is not None else CircleSet.full_circle(), (ConstantPiece(level),))

    @property
    def is_zero(self) -> bool:
        return self.carrier is None

    def segments(self):
        """``(start angle, span, piece)`` for each carrier component of positive length."""
        if self.carrier is None:
            return []
        return [(s, span, p) for (s, span), p in zip(self.carrier.components(), self.pieces) if span > 0.0]

    def value(self, angle) -> np.ndarray:
        angle = np.asarray(angle, dtype=float)
        out = np.zeros(angle.shape)
        for start, span, piece in self.segments():
            off = angular_offset(angle, start)
            inside = off <= span
            if span >= TWO_PI - 1e-15:
                inside = np.ones(angle.shape, dtype=bool)
            if np.any(inside):
                x = off[inside] / span
                out[inside] = piece.value(x, off[inside] / span, (span - off[inside]) / span)
        return out

    def total_mass(self) -> float:
        """``int omega dm`` by tanh-sinh quadrature (exact for constants)."""
        parts = []
        for start, span, piece in self.segments():
            if piece.constant:
                parts.append(span / TWO_PI * piece.value(np.array([0.5]))[0])
                continue
            x, da, db, w = tanh_sinh(0.0, 1.0, 7)
            parts.append(span / TWO_PI * float(np.sum(w * piece.value(x, da, db))))
        return math.fsum(parts)

    def fourier_coefficients(self, kmax: int) -> np.ndarray:
        """``omega_hat(k) = int omega zeta^{-k} dm`` for ``k = -kmax..kmax``."""
        k = np.arange(-kmax, kmax + 1)
        out = np.zeros(k.shape, dtype=complex)
        for start, span, piece in self.segments():
            if piece.constant:
                lvl = piece.value(np.array([0.5]))[0]
                if span >= TWO_PI - 1e-15:
                    out[k == 0] += lvl
                    continue
                nz = k != 0
                kk = k[nz]
                out[~nz] += lvl * span / TWO_PI
                out[nz] += lvl * (np.exp(-1j * kk * start) - np.exp(-1j * kk * (start + span))) / (2j * math.pi * kk)
                continue
            level = 8 if kmax * span < 200 else 10
            x, da, db, w = tanh_sinh(0.0, 1.0, level)
            vals = piece.value(x, da, db) * w * span / TWO_PI
            out += np.exp(-1j * np.outer(k, start + span * x)) @ vals
        return out

    def to_dict(self) -> dict:
        if self.carrier is None:
            return {"carrier": None, "pieces": []}
        return {"carrier": self.carrier.to_dict(), "pieces": [p.to_dict() for p in self.pieces]}

    @classmethod
    def from_dict(cls, data: dict | None) -> "BoundaryWeight":
        if not data or data.get("carrier") is None:
            return cls.zero()
        return cls(CircleSet.from_dict(data["carrier"]), tuple(piece_from_dict(p) for p in data["pieces"]))


@dataclass(frozen=True)
class SpaceMeasure:
    """``mu = scale * (1-|z|)^alpha dA + omega dm``.

    ``dA`` is normalized area; ``disk_mass_scale = 0`` drops the disk part.
    """

    disk_alpha: float = 0.0
    disk_mass_scale: float = 1.0
    boundary: BoundaryWeight = field(default_factory=BoundaryWeight.zero)
    t: float = 2.0
    beta_hint: float | None = None

    def __post_init__(self):
        if not self.disk_alpha > -1.0:
            raise ValueError("disk_alpha must exceed -1")
        if self.disk_mass_scale < 0:
            raise ValueError("disk_mass_scale must be nonnegative")
        if not self.t > 0:
            raise ValueError("t must be positive")
        if self.disk_mass_scale == 0 and self.boundary.is_zero:
            raise ValueError("measure has no mass")

    @property
    def t_conjugate(self) -> float:
        return math.inf if self.t == 1 else self.t / (self.t - 1) if self.t > 1 else math.nan

    def disk_mass(self) -> float:
        return self.disk_mass_scale * 2.0 * float(beta_fn(2.0, self.disk_alpha + 1.0))

    def total_mass(self) -> float:
        b = 0.0 if self.boundary.is_zero else self.boundary.total_mass()
        return self.disk_mass() + b

    def to_dict(self) -> dict:
        return {
            "disk_alpha": self.disk_alpha,
            "disk_mass_scale": self.disk_mass_scale,
            "boundary": self.boundary.to_dict(),
            "t": self.t,
            "beta_hint": self.beta_hint,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpaceMeasure":
        return cls(
            float(data.get("disk_alpha", 0.0)),
            float(data.get("disk_mass_scale", 1.0)),
            BoundaryWeight.from_dict(data.get("boundary")),
            float(data.get("t", 2.0)),
            data.get("beta_hint"),
        )


# ---------------------------------------------------------------------------
# operations


def _sorted_atoms(nu: SingularMeasure):
    atoms = _merge_atoms(nu.realized_atoms())
    ang = np.array([a.angle for a in atoms], dtype=float)
    mass = np.array([a.mass for a in atoms], dtype=float)
    return ang, mass


@dataclass(frozen=True)
class ModulusResult:
    value: float
    window_start: float | None
    window_atoms: int


def modulus_sweep(nu: SingularMeasure, delta: float) -> ModulusResult:
    """Largest mass carried by atoms whose angular span is below ``delta``.

    Any such cluster fits inside an open arc of normalized length
    ``< delta``, and conversely, so this is the exact supremum.
    """
    ang, mass = _sorted_atoms(nu)
    n = len(ang)
    if n == 0:
        return ModulusResult(0.0, None, 0)
    limit = TWO_PI * delta
    ext_ang = np.concatenate([ang, ang + TWO_PI])
    ext_mass = np.concatenate([mass, mass])
    best, best_i, best_len = -1.0, 0, 0
    j = 0
    for i in range(n):
        if j < i:
            j = i
        while j + 1 < i + n and ext_ang[j + 1] - ext_ang[i] < limit:
            j += 1
        s = math.fsum(ext_mass[i : j + 1])
        if s > best:
            best, best_i, best_len = s, i, j - i + 1
    return ModulusResult(best, float(ang[best_i]), best_len)


def modulus_of_continuity(nu: SingularMeasure, delta: float) -> float:
    """``sup_{|I| < delta} nu(I)`` over arcs of normalized length below ``delta``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    return modulus_sweep(nu, delta).value


class Predicate:
    def __call__(self, angles: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class DistanceAbove(Predicate):
    """Accepts points whose Euclidean distance to ``cset`` exceeds ``threshold``."""

    cset: CircleSet
    threshold: float

    def __call__(self, angles):
        return np.array(
            [distance_to(self.cset, complex(math.cos(a), math.sin(a))) > self.threshold for a in np.atleast_1d(angles)],
            dtype=bool,
        )


@dataclass(frozen=True)
class InSet(Predicate):
    cset: CircleSet

    def __call__(self, angles):
        return np.asarray(self.cset.contains(np.atleast_1d(angles)), dtype=bool)


@dataclass(frozen=True)
class AnglePredicate(Predicate):
    func: Callable[[np.ndarray], np.ndarray]

    def __call__(self, angles):
        return np.asarray(self.func(np.atleast_1d(angles)), dtype=bool)


def restrict(nu: SingularMeasure, predicate: Predicate | Callable) -> tuple[SingularMeasure, SingularMeasure]:
    """Split the realized measure into ``(kept, rest)`` by an atom predicate."""
    atoms = nu.realized_atoms()
    if not atoms:
        return nu, SingularMeasure.zero()
    keep = np.asarray(predicate(np.array([a.angle for a in atoms])), dtype=bool)
    if keep.all():
        return nu, SingularMeasure.zero()
    kept = SingularMeasure(tuple(_merge_atoms([a for a, k in zip(atoms, keep) if k])))
    rest = SingularMeasure(tuple(_merge_atoms([a for a, k in zip(atoms, keep) if not k])))
    return kept, rest


@dataclass(frozen=True)
class SplitResult:
    nu_c: SingularMeasure
    nu_k: SingularMeasure
    flags: tuple[tuple[str, str], ...]  # (component label, certainty)


def bc_kr_split(nu: SingularMeasure) -> SplitResult:
    """Sort declared families into the Beurling-Carleson and Korenblum-Roberts parts.

    Atoms are always certain.  Cantor components follow the entropy
    verdict of their generator: a convergent rule whose limit set has
    measure zero is certain, any divergent rule is only ``"heuristic"``
    and an unknown tail is flagged ``"unknown"`` and placed in the
    second part.
    """
    flags = []
    c_comp, k_comp = [], []
    for i, a in enumerate(nu.atoms):
        flags.append((f"atom[{i}]", "certain"))
    for i, comp in enumerate(nu.cantor):
        verdict = is_beurling_carleson(comp.circle_set()).verdict
        label = f"cantor[{i}]"
        if verdict == "yes":
            c_comp.append(comp)
            null_limit = comp.generator.rule.to_dict().get("rule") == "ratio"
            flags.append((label, "certain" if null_limit else "heuristic"))
        elif verdict == "diverging":
            k_comp.append(comp)
            flags.append((label, "heuristic"))
        else:
            k_comp.append(comp)
            flags.append((label, "unknown"))
    return SplitResult(SingularMeasure(nu.atoms, tuple(c_comp)), SingularMeasure((), tuple(k_comp)), tuple(flags))


def roberts_scale(N: int, k: int) -> int:
    """``n_k = 2**(2**(N+k))``."""
    e = N + k
    if e > 10:
        raise ValueError("scale exponent too large for floating point bookkeeping")
    return 2 ** (2**e)


@dataclass
class RobertsPiece:
    k: int
    n: int
    cap: float
    measure: SingularMeasure
    mass: float
    modulus: float
    passed: bool
    retries: int
    grid_cap: float


@dataclass
class RobertsResult:
    pieces: list[RobertsPiece]
    remainder: SingularMeasure
    c: float
    N: int
    reconciliation_error: float

    @property
    def scales(self) -> list[int]:
        return [p.n for p in self.pieces]

    def report(self) -> dict:
        return {
            "c": self.c,
            "N": self.N,
            "log": "natural",
            "pieces": [
                {
                    "k": p.k,
                    "n_k": p.n,
                    "cap": p.cap,
                    "grid_cap": p.grid_cap,
                    "mass": p.mass,
                    "modulus_at_1_over_n": p.modulus,
                    "passed": p.passed,
                    "retries": p.retries,
                }
                for p in self.pieces
            ],
            "remainder_mass": self.remainder.total_mass,
            "reconciliation_error": self.reconciliation_error,
        }


def roberts_decompose(
    nu: SingularMeasure, c: float, N: int, M: int, strict: bool = False, max_retries: int = 40
) -> RobertsResult:
    """Greedy grid decomposition into pieces with capped modulus of continuity.

    Stage ``k`` uses scale ``n_k``, splits the circle into ``2 n_k``
    half-open grid arcs and takes at most ``factor * c log(n_k) / (2 n_k)``
    from each, sweeping atoms counterclockwise.  The first attempt uses
    factor 2, so an isolated cluster may take the whole cap.  The piece is
    then checked by the exact modulus sweep; on failure the stage is
    retried with factors 1, 2/3, 4/9, ...
    """
    if c <= 0 or N < 1 or M < 1:
        raise ValueError("need c > 0, N >= 1, M >= 1")
    atoms = _merge_atoms(nu.realized_atoms())
    ang = np.array([a.angle for a in atoms], dtype=float)
    spread = [a.spread for a in atoms]
    orig = [a.mass for a in atoms]
    taken: list[list[float]] = [[] for _ in atoms]
    pieces = []
    for k in range(M):
        n = roberts_scale(N, k)
        cap = c * math.log(n) / n
        remaining = [max(0.0, m - math.fsum(t)) for m, t in zip(orig, taken)]
        cell = np.floor(ang / TWO_PI * (2 * n)).astype(np.int64) % (2 * n)
        factor = 2.0
        retries = 0
        while True:
            grid_cap = factor * c * math.log(n) / (2 * n)
            used: dict[int, float] = {}
            take = []
            for i, m in enumerate(remaining):
                room = grid_cap - used.get(int(cell[i]), 0.0)
                x = min(m, room) if room > 0 else 0.0
                used[int(cell[i])] = used.get(int(cell[i]), 0.0) + x
                take.append(x)
            piece = SingularMeasure(
                tuple(Atom(float(ang[i]), take[i], spread[i]) for i in range(len(take)) if take[i] > 0.0)
            )
            mod = modulus_of_continuity(piece, 1.0 / n)
            if mod <= cap:
                break
            retries += 1
            if retries > max_retries:
                raise InsufficientPieces("modulus cap could not be met", stage=k)
            # a window shorter than 1/n meets at most three grid arcs
            factor = 1.0 if retries == 1 else factor * (2.0 / 3.0) * (1.0 - 1e-12)
        for i, x in enumerate(take):
            if x > 0.0:
                taken[i].append(x)
        pieces.append(RobertsPiece(k, n, cap, piece, piece.total_mass, mod, mod <= cap, retries, grid_cap))
    rem_atoms = []
    for i, m in enumerate(orig):
        r = m - math.fsum(taken[i])
        if r > 0.0:
            rem_atoms.append(Atom(float(ang[i]), r, spread[i]))
    remainder = SingularMeasure(tuple(rem_atoms))
    recon = abs(math.fsum([p.mass for p in pieces] + [remainder.total_mass]) - math.fsum(orig))
    if strict and remainder.total_mass > 0.0:
        raise InsufficientPieces(
            f"mass {remainder.total_mass:.3e} left after {M} pieces", remainder=remainder.total_mass
        )
    return RobertsResult(pieces, remainder, c, N, recon)


def log_integrability(w: BoundaryWeight, k: int, nodes: int = 512) -> float:
    """``int_{E_k} log(omega) dm`` over carrier component ``k``.

    Uses a tanh-sinh rule with at least ``nodes`` points; logarithmic and
    algebraic endpoint singularities are handled by the node clustering.
    """
    segs = w.segments()
    if not 0 <= k < len(segs):
        raise IndexError(f"component {k} does not exist")
    start, span, piece = segs[k]
    if isinstance(piece, CuspPiece) and piece.gamma >= 1.0:
        raise NonIntegrableLog("cusp exponent gamma >= 1 gives a non-integrable log", component=k)
    level = 3
    while True:
        x, da, db, wts = tanh_sinh(0.0, 1.0, level)
        if len(x) >= nodes or level >= 12:
            break
        level += 1
    val = float(np.sum(wts * piece.log_value(x, da, db)))
    if not math.isfinite(val):
        raise NonIntegrableLog("log-weight integral is not finite", component=k)
    return span / TWO_PI * val
