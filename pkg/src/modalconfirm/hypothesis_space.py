"""Exact algebra of subsets of a one-dimensional parameter space.

A :class:`RegionSet` is either a canonical finite union of intervals or the
symbolic dense-codense region.  Every region carries its ambient space and
all complements are taken relative to it.  Endpoints are compared with exact
float equality; there is no tolerance anywhere in this module.
"""
from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

__all__ = [
    "NONNEGATIVE",
    "REAL_LINE",
    "UNIT_INTERVAL",
    "AmbientMismatchError",
    "Endpoint",
    "Interval",
    "RegionFormatError",
    "RegionSet",
    "boundary",
    "closed",
    "complement",
    "contains",
    "dense_codense",
    "empty",
    "full",
    "has_nonempty_interior",
    "interior",
    "intersection",
    "intersects",
    "interval_from_json",
    "interval_to_json",
    "is_confirmable",
    "member",
    "open_interval",
    "point",
    "points",
    "region_from_json",
    "region_to_json",
    "union",
]


class AmbientMismatchError(ValueError):
    """Two regions over different parameter spaces were combined."""


class RegionFormatError(ValueError):
    """A serialized region could not be decoded."""


@dataclass(frozen=True)
class Endpoint:
    value: float
    closed: bool = True

    def __post_init__(self) -> None:
        v = float(self.value)
        if math.isnan(v):
            raise ValueError("endpoint cannot be NaN")
        object.__setattr__(self, "value", v)
        # infinity is never attained
        if math.isinf(v) and self.closed:
            object.__setattr__(self, "closed", False)

    @property
    def lo_key(self) -> tuple[float, int]:
        return (self.value, 0 if self.closed else 1)

    @property
    def hi_key(self) -> tuple[float, int]:
        return (self.value, 0 if self.closed else -1)

    def flipped(self) -> Endpoint:
        return Endpoint(self.value, not self.closed)


def _nonempty(lo: Endpoint, hi: Endpoint) -> bool:
    return lo.lo_key <= hi.hi_key


@dataclass(frozen=True)
class Interval:
    """A nonempty interval; a degenerate one is a closed point."""

    lo: Endpoint
    hi: Endpoint

    def __post_init__(self) -> None:
        if self.lo.value > self.hi.value:
            raise ValueError(f"interval runs backwards: {self.lo.value} > {self.hi.value}")
        if not _nonempty(self.lo, self.hi):
            raise ValueError("empty interval; use an empty RegionSet instead")

    @classmethod
    def make(cls, lo: Endpoint, hi: Endpoint) -> Interval | None:
        """Build the interval, or return None if it would be empty."""
        if lo.value > hi.value or not _nonempty(lo, hi):
            return None
        return cls(lo, hi)

    @property
    def is_point(self) -> bool:
        return self.lo.value == self.hi.value

    def __contains__(self, x: float) -> bool:
        lo_ok = x > self.lo.value or (x == self.lo.value and self.lo.closed)
        hi_ok = x < self.hi.value or (x == self.hi.value and self.hi.closed)
        return lo_ok and hi_ok

    def within(self, other: Interval) -> bool:
        return self.lo.lo_key >= other.lo.lo_key and self.hi.hi_key <= other.hi.hi_key

    def meet(self, other: Interval) -> Interval | None:
        lo = max(self.lo, other.lo, key=lambda e: e.lo_key)
        hi = min(self.hi, other.hi, key=lambda e: e.hi_key)
        return Interval.make(lo, hi)

    def __str__(self) -> str:
        left = "[" if self.lo.closed else "("
        right = "]" if self.hi.closed else ")"
        if self.is_point:
            return f"{{{self.lo.value:g}}}"
        return f"{left}{self.lo.value:g}, {self.hi.value:g}{right}"


REAL_LINE = Interval(Endpoint(-math.inf, False), Endpoint(math.inf, False))
UNIT_INTERVAL = Interval(Endpoint(0.0), Endpoint(1.0))
NONNEGATIVE = Interval(Endpoint(0.0), Endpoint(math.inf, False))


def _touch(a: Interval, b: Interval) -> bool:
    # assumes a.lo <= b.lo; true when a and b overlap or share a boundary point
    if b.lo.value < a.hi.value:
        return True
    return b.lo.value == a.hi.value and (a.hi.closed or b.lo.closed)


def _canonical(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    ivs = sorted(intervals, key=lambda iv: (iv.lo.lo_key, iv.hi.hi_key))
    out: list[Interval] = []
    for iv in ivs:
        if out and _touch(out[-1], iv):
            last = out[-1]
            hi = max(last.hi, iv.hi, key=lambda e: e.hi_key)
            out[-1] = Interval(last.lo, hi)
        else:
            out.append(iv)
    return tuple(out)


@dataclass(frozen=True)
class RegionSet:
    """A subset of ``ambient``.

    With ``dense_codense`` false the region is the union of ``intervals``,
    stored sorted, disjoint and non-adjacent.  With it true the region is a
    symbolic set meeting every nonempty open subset of the ambient, as does
    its complement; ``complemented`` distinguishes the set from its complement
    so that the two are never mistaken for one another.
    """

    intervals: tuple[Interval, ...] = ()
    ambient: Interval = REAL_LINE
    dense_codense: bool = False
    complemented: bool = False

    def __post_init__(self) -> None:
        if self.dense_codense:
            if self.intervals:
                raise ValueError("a dense-codense region has no interval list")
            if self.ambient.is_point:
                raise ValueError("a point space has no dense-codense subsets")
            return
        if self.complemented:
            raise ValueError("complemented only applies to dense-codense regions")
        ivs = tuple(self.intervals)
        for iv in ivs:
            if not isinstance(iv, Interval):
                raise TypeError(f"expected Interval, got {type(iv).__name__}")
            if not iv.within(self.ambient):
                raise ValueError(f"{iv} is not inside the ambient space {self.ambient}")
        object.__setattr__(self, "intervals", _canonical(ivs))

    @property
    def kind(self) -> str:
        return "dense_codense" if self.dense_codense else "intervals"

    @property
    def is_empty(self) -> bool:
        return not self.dense_codense and not self.intervals

    @property
    def is_full(self) -> bool:
        return not self.dense_codense and self.intervals == (self.ambient,)

    def __contains__(self, x: float) -> bool:
        return member(self, x)

    def __str__(self) -> str:
        if self.dense_codense:
            return "DenseCodense^c" if self.complemented else "DenseCodense"
        if not self.intervals:
            return "∅"
        return " ∪ ".join(str(iv) for iv in self.intervals)


def _region(intervals: Iterable[Interval], ambient: Interval) -> RegionSet:
    return RegionSet(tuple(intervals), ambient)


def closed(lo: float, hi: float, ambient: Interval = REAL_LINE) -> RegionSet:
    return _region([Interval(Endpoint(lo), Endpoint(hi))], ambient)


def open_interval(lo: float, hi: float, ambient: Interval = REAL_LINE) -> RegionSet:
    return _region([Interval(Endpoint(lo, False), Endpoint(hi, False))], ambient)


def point(x: float, ambient: Interval = REAL_LINE) -> RegionSet:
    return closed(x, x, ambient)


def points(xs: Iterable[float], ambient: Interval = REAL_LINE) -> RegionSet:
    return _region([Interval(Endpoint(x), Endpoint(x)) for x in xs], ambient)


def empty(ambient: Interval = REAL_LINE) -> RegionSet:
    return RegionSet((), ambient)


def full(ambient: Interval = REAL_LINE) -> RegionSet:
    return RegionSet((ambient,), ambient)


def dense_codense(ambient: Interval = REAL_LINE) -> RegionSet:
    return RegionSet((), ambient, dense_codense=True)


def _same_ambient(a: RegionSet, b: RegionSet) -> None:
    if a.ambient != b.ambient:
        raise AmbientMismatchError(f"ambient spaces differ: {a.ambient} vs {b.ambient}")


def union(a: RegionSet, b: RegionSet) -> RegionSet:
    _same_ambient(a, b)
    if a.dense_codense or b.dense_codense:
        raise ValueError("union with a dense-codense region is not representable")
    return _region(a.intervals + b.intervals, a.ambient)


def intersection(a: RegionSet, b: RegionSet) -> RegionSet:
    _same_ambient(a, b)
    if a.dense_codense or b.dense_codense:
        raise ValueError("intersection with a dense-codense region is not representable")
    pieces = []
    for x in a.intervals:
        for y in b.intervals:
            m = x.meet(y)
            if m is not None:
                pieces.append(m)
    return _region(pieces, a.ambient)


def complement(r: RegionSet) -> RegionSet:
    """Return ``ambient \\ r``."""
    if r.dense_codense:
        return RegionSet((), r.ambient, dense_codense=True, complemented=not r.complemented)
    pieces = []
    cur = r.ambient.lo
    for iv in r.intervals:
        gap = Interval.make(cur, iv.lo.flipped())
        if gap is not None:
            pieces.append(gap)
        cur = iv.hi.flipped()
    gap = Interval.make(cur, r.ambient.hi)
    if gap is not None:
        pieces.append(gap)
    return _region(pieces, r.ambient)


def intersects(a: RegionSet, b: RegionSet) -> bool:
    """True iff ``a ∩ b`` is nonempty.

    A dense-codense region is taken to meet every nonempty interval union;
    for finite point sets this is a convention, not a decidable fact.
    """
    _same_ambient(a, b)
    if a.dense_codense and b.dense_codense:
        return a.complemented == b.complemented
    if a.dense_codense:
        return not b.is_empty
    if b.dense_codense:
        return not a.is_empty
    return any(x.meet(y) is not None for x in a.intervals for y in b.intervals)


def contains(a: RegionSet, b: RegionSet) -> bool:
    """True iff ``b ⊆ a``."""
    _same_ambient(a, b)
    if a.dense_codense and b.dense_codense:
        return a.complemented == b.complemented
    if a.dense_codense:
        return b.is_empty
    if b.dense_codense:
        # only the whole space provably contains a dense set
        return a.is_full
    return not intersects(complement(a), b)


def member(r: RegionSet, x: float) -> bool:
    if r.dense_codense:
        raise ValueError("point membership in a dense-codense region is undecidable")
    return any(x in iv for iv in r.intervals)


def _open_side(e: Endpoint, amb: Endpoint) -> Endpoint:
    # subspace topology: a closed ambient endpoint is interior to the space itself
    if e.closed and amb.closed and e.value == amb.value:
        return e
    return Endpoint(e.value, False)


def interior(r: RegionSet) -> RegionSet:
    """Topological interior relative to the ambient space."""
    if r.dense_codense:
        return empty(r.ambient)
    amb = r.ambient
    pieces = []
    for iv in r.intervals:
        m = Interval.make(_open_side(iv.lo, amb.lo), _open_side(iv.hi, amb.hi))
        if m is not None:
            pieces.append(m)
    return _region(pieces, amb)


def boundary(r: RegionSet) -> tuple[float, ...]:
    """Boundary points of an interval union relative to its ambient space."""
    if r.dense_codense:
        raise ValueError("the boundary of a dense-codense region is the whole space")
    amb = r.ambient
    out = set()
    for iv in r.intervals:
        for e, a in ((iv.lo, amb.lo), (iv.hi, amb.hi)):
            if math.isinf(e.value):
                continue
            if e.value == a.value and (a.closed == e.closed or not a.closed):
                # either interior to the subspace or not in the space at all
                continue
            out.add(e.value)
    return tuple(sorted(out))


def has_nonempty_interior(r: RegionSet) -> bool:
    return not interior(r).is_empty


def is_confirmable(h: RegionSet) -> bool:
    """Whether some evidence can confirm ``h`` under an open-valued rule.

    Confirmation requires a nonempty open confidence region inside ``h``,
    so ``h`` is confirmable exactly when its interior is nonempty.  The
    equivalence is guaranteed for connected ambient spaces, which is the
    only kind :class:`Interval` can describe.
    """
    return has_nonempty_interior(h)


# -- JSON ---------------------------------------------------------------------

_INF_NAMES = {"inf": math.inf, "+inf": math.inf, "infinity": math.inf,
              "-inf": -math.inf, "−inf": -math.inf, "-infinity": -math.inf}


def _value_to_json(v: float) -> Any:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _value_from_json(v: Any, where: str) -> float:
    if isinstance(v, bool):
        raise RegionFormatError(f"{where}: expected a number, got a boolean")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str) and v.strip().lower() in _INF_NAMES:
        return _INF_NAMES[v.strip().lower()]
    raise RegionFormatError(f"{where}: expected a number or '±inf', got {v!r}")


def _endpoint_from_json(d: Any, where: str) -> Endpoint:
    if not isinstance(d, dict) or "value" not in d:
        raise RegionFormatError(f"{where}: expected an object with 'value'")
    closed_ = d.get("closed", False)
    if not isinstance(closed_, bool):
        raise RegionFormatError(f"{where}.closed: expected a boolean")
    return Endpoint(_value_from_json(d["value"], f"{where}.value"), closed_)


def interval_to_json(iv: Interval) -> dict:
    return {
        "lo": {"value": _value_to_json(iv.lo.value), "closed": iv.lo.closed},
        "hi": {"value": _value_to_json(iv.hi.value), "closed": iv.hi.closed},
    }


def interval_from_json(d: Any, where: str = "interval") -> Interval:
    if not isinstance(d, dict):
        raise RegionFormatError(f"{where}: expected an object")
    lo = _endpoint_from_json(d.get("lo"), f"{where}.lo")
    hi = _endpoint_from_json(d.get("hi"), f"{where}.hi")
    try:
        return Interval(lo, hi)
    except ValueError as exc:
        raise RegionFormatError(f"{where}: {exc}") from None


def region_to_json(r: RegionSet) -> dict:
    out: dict[str, Any] = {
        "ambient": interval_to_json(r.ambient),
        "kind": r.kind,
        "intervals": [interval_to_json(iv) for iv in r.intervals],
    }
    if r.dense_codense:
        out["complemented"] = r.complemented
    return out


def region_from_json(d: Any) -> RegionSet:
    if not isinstance(d, dict):
        raise RegionFormatError("region: expected a JSON object")
    ambient = interval_from_json(d["ambient"], "ambient") if "ambient" in d else REAL_LINE
    kind = d.get("kind", "intervals")
    if kind == "dense_codense":
        return RegionSet((), ambient, dense_codense=True,
                         complemented=bool(d.get("complemented", False)))
    if kind != "intervals":
        raise RegionFormatError(f"kind: unknown region kind {kind!r}")
    raw = d.get("intervals", [])
    if not isinstance(raw, list):
        raise RegionFormatError("intervals: expected a list")
    ivs = [interval_from_json(x, f"intervals[{i}]") for i, x in enumerate(raw)]
    try:
        return RegionSet(tuple(ivs), ambient)
    except ValueError as exc:
        raise RegionFormatError(str(exc)) from None
