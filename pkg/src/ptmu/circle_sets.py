"""Closed subsets of the unit circle described by their complementary arcs.

Lengths are normalized so the whole circle has measure one.  Angles are
radians.  An arc is stored by its start angle in ``[0, 2*pi)`` and its
length; it runs counterclockwise and may pass through angle zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .quadrature import TWO_PI

_OVERLAP_TOL = 1e-14


def wrap_angle(angle: float) -> float:
    """Reduce an angle to ``[0, 2*pi)``."""
    a = math.fmod(float(angle), TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        a = 0.0
    return a


def angular_offset(angle, start):
    """Counterclockwise offset from ``start`` to ``angle`` in ``[0, 2*pi)``."""
    return np.mod(np.asarray(angle, dtype=float) - start, TWO_PI)


@dataclass(frozen=True)
class Arc:
    """Counterclockwise arc from ``start`` of normalized ``length``."""

    start: float
    length: float

    def __post_init__(self):
        if not (self.length > 0.0 and self.length <= 1.0):
            raise ValueError(f"arc length must lie in (0, 1], got {self.length}")
        object.__setattr__(self, "start", wrap_angle(self.start))

    @property
    def span(self) -> float:
        """Angular width in radians."""
        return TWO_PI * self.length

    @property
    def end(self) -> float:
        return wrap_angle(self.start + self.span)

    @property
    def midpoint(self) -> float:
        return wrap_angle(self.start + 0.5 * self.span)

    def endpoints(self) -> tuple[complex, complex]:
        return complex(np.exp(1j * self.start)), complex(np.exp(1j * (self.start + self.span)))

    def contains(self, angle, closed: bool = False):
        """Membership of angles; the open arc unless ``closed`` is set."""
        off = angular_offset(angle, self.start)
        if self.length >= 1.0:
            return np.ones_like(off, dtype=bool) if closed else off > 0.0
        if closed:
            return (off <= self.span) | (off >= TWO_PI - 1e-15)
        return (off > 0.0) & (off < self.span)

    def to_dict(self) -> dict:
        return {"start": self.start, "length": self.length}


def _arcs_overlap(a: Arc, b: Arc) -> bool:
    off = float(angular_offset(b.start, a.start))
    if off < a.span - _OVERLAP_TOL * TWO_PI:
        return True
    back = float(angular_offset(a.start, b.start))
    return back < b.span - _OVERLAP_TOL * TWO_PI


# ---------------------------------------------------------------------------
# gap rules for Cantor-type constructions


class GapRule:
    """Length of the gap removed from each level-``k`` interval (``k >= 1``)."""

    #: "convergent", "divergent" or None when the entropy tail is not known
    entropy_class: str | None = None

    def gap(self, level: int, parent_length: float) -> float:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class RatioGapRule(GapRule):
    """Remove the middle ``ratio`` fraction of each interval (1/3 is middle thirds)."""

    ratio: float

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("ratio must lie in (0, 1)")

    entropy_class = "convergent"

    def gap(self, level, parent_length):
        return self.ratio * parent_length

    def to_dict(self):
        return {"rule": "ratio", "ratio": self.ratio}


@dataclass(frozen=True)
class PowerGapRule(GapRule):
    """Absolute gap ``scale * 2**-k / k**power`` at level ``k``.

    The level-``k`` entropy increment behaves like
    ``(scale*ln 2/2) * k**(1 - power)``, so the series converges exactly
    when ``power > 2``.
    """

    scale: float = 0.25
    power: float = 1.0

    def __post_init__(self):
        if self.scale <= 0.0:
            raise ValueError("scale must be positive")

    @property
    def entropy_class(self):
        return "convergent" if self.power > 2.0 else "divergent"

    def increment_limit(self) -> float:
        """Limit of the per-level entropy increments (``inf`` if they grow)."""
        if self.power > 1.0:
            return 0.0
        if self.power == 1.0:
            return 0.5 * self.scale * math.log(2.0)
        return math.inf

    def gap(self, level, parent_length):
        return self.scale * 2.0 ** (-level) / level ** self.power

    def to_dict(self):
        return {"rule": "power", "scale": self.scale, "power": self.power}


@dataclass(frozen=True)
class CallableGapRule(GapRule):
    """User-supplied ``gap(level, parent_length)``; entropy tail unknown."""

    func: Callable[[int, float], float]
    name: str = "callable"

    def gap(self, level, parent_length):
        return float(self.func(level, parent_length))

    def to_dict(self):
        return {"rule": "callable", "name": self.name}


def gap_rule_from_dict(data: dict) -> GapRule:
    kind = data.get("rule")
    if kind == "ratio":
        return RatioGapRule(float(data["ratio"]))
    if kind == "power":
        return PowerGapRule(float(data.get("scale", 0.25)), float(data.get("power", 1.0)))
    raise ValueError(f"unknown gap rule {kind!r}")


@dataclass(frozen=True)
class CantorGenerator:
    """Base arc plus gap rule; realized at any truncation depth."""

    base: Arc
    rule: GapRule

    def levels(self, depth: int) -> list[list[tuple[float, float]]]:
        """Kept intervals ``(start, normalized length)`` at levels ``0..depth``.

        Raises ``ValueError`` if a gap does not fit strictly inside its parent.
        """
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        current = [(self.base.start, self.base.length)]
        out = [current]
        for k in range(1, depth + 1):
            nxt = []
            for start, length in current:
                g = self.rule.gap(k, length)
                if not (0.0 < g < length):
                    raise ValueError(
                        f"gap {g:.6g} at level {k} does not fit inside parent of length {length:.6g}"
                    )
                half = 0.5 * (length - g)
                nxt.append((start, half))
                nxt.append((start + TWO_PI * (half + g), half))
            current = nxt
            out.append(current)
        return out

    def to_dict(self) -> dict:
        return {"base": self.base.to_dict(), **self.rule.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "CantorGenerator":
        base = data["base"]
        return cls(Arc(float(base["start"]), float(base["length"])), gap_rule_from_dict(data))


@dataclass(frozen=True)
class CircleSet:
    """Circle minus a finite family of disjoint open arcs.

    ``truncated`` marks a depth-limited description of an infinite arc
    system; ``generator`` and ``depth`` are kept when the set came from
    :func:`make_cantor_set` so classification can use the rule.
    """

    complementary_arcs: tuple[Arc, ...] = ()
    truncated: bool = False
    generator: CantorGenerator | None = field(default=None, compare=False)
    depth: int | None = field(default=None, compare=False)

    def __post_init__(self):
        arcs = tuple(sorted(self.complementary_arcs, key=lambda a: (a.start, a.length)))
        object.__setattr__(self, "complementary_arcs", arcs)
        total = math.fsum(a.length for a in arcs)
        if total > 1.0 + 1e-12:
            raise ValueError("complementary arc lengths exceed the circle")
        for i in range(len(arcs)):
            j = (i + 1) % len(arcs)
            if j != i and _arcs_overlap(arcs[i], arcs[j]):
                raise ValueError("complementary arcs overlap")

    # -- construction helpers
    @classmethod
    def full_circle(cls) -> "CircleSet":
        return cls(())

    @classmethod
    def from_closed_arc(cls, start: float, stop: float) -> "CircleSet":
        """The closed arc running counterclockwise from ``start`` to ``stop``."""
        span = float(angular_offset(stop, start))
        if span == 0.0:
            raise ValueError("degenerate arc; use a point set")
        return cls((Arc(start + span, 1.0 - span / TWO_PI),))

    @classmethod
    def from_points(cls, angles: Sequence[float]) -> "CircleSet":
        """A finite set of points."""
        pts = sorted({wrap_angle(a) for a in angles})
        if not pts:
            raise ValueError("need at least one point")
        if len(pts) == 1:
            return cls((Arc(pts[0], 1.0),))
        arcs = []
        for i, p in enumerate(pts):
            q = pts[(i + 1) % len(pts)]
            arcs.append(Arc(p, float(angular_offset(q, p)) / TWO_PI))
        return cls(tuple(arcs))

    # -- geometry
    @property
    def measure(self) -> float:
        return max(0.0, 1.0 - math.fsum(a.length for a in self.complementary_arcs))

    def components(self) -> list[tuple[float, float]]:
        """Closed pieces ``(start angle, angular span)`` between consecutive arcs."""
        arcs = self.complementary_arcs
        if not arcs:
            return [(0.0, TWO_PI)]
        out = []
        for i, a in enumerate(arcs):
            b = arcs[(i + 1) % len(arcs)]
            gap = float(angular_offset(b.start, a.start + a.span))
            if len(arcs) == 1:
                gap = TWO_PI * (1.0 - a.length)
            elif gap > TWO_PI - 1e-12:
                gap = 0.0
            out.append((wrap_angle(a.start + a.span), gap))
        return out

    def contains(self, angle) -> np.ndarray:
        angle = np.asarray(angle, dtype=float)
        inside = np.ones(angle.shape, dtype=bool)
        for a in self.complementary_arcs:
            inside &= ~a.contains(angle)
        return inside

    def to_dict(self) -> dict:
        return {"arcs": [a.to_dict() for a in self.complementary_arcs], "truncated": self.truncated}

    @classmethod
    def from_dict(cls, data: dict) -> "CircleSet":
        arcs = tuple(Arc(float(a["start"]), float(a["length"])) for a in data["arcs"])
        return cls(arcs, bool(data.get("truncated", False)))


def make_cantor_set(base: Arc, gap_rule: GapRule, depth: int) -> CircleSet:
    """Truncated Cantor-type set built by removing one gap per interval per level."""
    gen = CantorGenerator(base, gap_rule)
    levels = gen.levels(depth)
    arcs = []
    if base.length < 1.0:
        arcs.append(Arc(base.start + base.span, 1.0 - base.length))
    # gaps are the spaces between sibling intervals
    for k in range(1, depth + 1):
        kids = levels[k]
        for i in range(0, len(kids), 2):
            left, right = kids[i], kids[i + 1]
            gstart = left[0] + TWO_PI * left[1]
            glen = float(angular_offset(right[0], gstart)) / TWO_PI
            arcs.append(Arc(gstart, glen))
    truncated = depth > 0
    return CircleSet(tuple(arcs), truncated=truncated, generator=gen, depth=depth)


def entropy(cset: CircleSet) -> float:
    """``sum |A| log(1/|A|)`` over the stored complementary arcs."""
    terms = [a.length * math.log(1.0 / a.length) for a in cset.complementary_arcs]
    return math.fsum(terms)


@dataclass(frozen=True)
class BCVerdict:
    verdict: str
    partial_sums: tuple[float, ...]
    increments: tuple[float, ...]
    reason: str


def _level_entropy(gen: CantorGenerator, depth: int) -> list[float]:
    base_term = 0.0
    if gen.base.length < 1.0:
        L = 1.0 - gen.base.length
        base_term = L * math.log(1.0 / L)
    incs = [0.0] * (depth + 1)
    incs[0] = base_term
    levels = gen.levels(depth)
    for k in range(1, depth + 1):
        terms = []
        for i in range(0, len(levels[k]), 2):
            left, right = levels[k][i], levels[k][i + 1]
            g = float(angular_offset(right[0], left[0] + TWO_PI * left[1])) / TWO_PI
            terms.append(g * math.log(1.0 / g))
        incs[k] = math.fsum(terms)
    return incs


def is_beurling_carleson(cset: CircleSet, budget: float = 1e-3, depth: int | None = None) -> BCVerdict:
    """Classify the entropy series of ``cset``.

    Exact finite descriptions are always ``"yes"``.  Generator-described sets
    use the rule's known tail when available; otherwise the per-level
    increments are inspected and ``"diverging"`` is returned only if the
    last three stay at or above ``budget``.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    gen = cset.generator
    if gen is None:
        s = entropy(cset)
        if cset.truncated:
            return BCVerdict("truncated-unknown", (s,), (s,), "truncated arc list without a generator")
        return BCVerdict("yes", (s,), (s,), "finite arc system")
    d = cset.depth if depth is None else depth
    incs = _level_entropy(gen, d)
    sums = tuple(np.cumsum(incs).tolist())
    if d == 0:
        return BCVerdict("yes", sums, tuple(incs), "single closed arc")
    cls = gen.rule.entropy_class
    if cls == "convergent":
        return BCVerdict("yes", sums, tuple(incs), "rule has a convergent entropy series")
    if cls == "divergent":
        return BCVerdict("diverging", sums, tuple(incs), "rule has a divergent entropy series")
    tail = incs[-3:] if len(incs) > 3 else incs[1:]
    if tail and min(tail) >= budget:
        return BCVerdict("diverging", sums, tuple(incs), "increments do not decay below budget")
    return BCVerdict("truncated-unknown", sums, tuple(incs), "tail of user rule unknown")


def distance_to(cset: CircleSet, z: complex) -> float:
    """Euclidean distance from ``z`` to the set as a subset of the plane."""
    z = complex(z)
    r = abs(z)
    ang = math.atan2(z.imag, z.real)
    best = math.inf
    for start, span in cset.components():
        if r > 0.0 and span >= TWO_PI - 1e-15:
            return abs(1.0 - r)
        if r == 0.0:
            return 1.0
        if float(angular_offset(ang, start)) <= span:
            return abs(1.0 - r)
        for e in (start, start + span):
            best = min(best, abs(z - complex(math.cos(e), math.sin(e))))
    return best


def set_distance(a: CircleSet, b: CircleSet) -> float:
    """Chordal distance between two closed circle subsets."""
    best = math.inf
    for s, span in a.components():
        for e in (s, s + span):
            best = min(best, distance_to(b, complex(math.cos(e), math.sin(e))))
    for s, span in b.components():
        for e in (s, s + span):
            best = min(best, distance_to(a, complex(math.cos(e), math.sin(e))))
    return best
