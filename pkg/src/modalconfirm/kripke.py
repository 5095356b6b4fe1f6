"""Finite Kripke frames over (θ, evidence) worlds.

Worlds pair a grid value of θ with a finite observation string of length at
most ``horizon``.  Two accessibility relations are supported:

* R_c: w R_c v iff θ_v ∈ c(E_w), whatever E_v is;
* R_E: w R_E v iff E_w is a prefix of E_v, whatever θ_v is.

Satisfaction is computed for all worlds at once, as a boolean table indexed
by (θ, evidence), and memoised per subformula on the frame.
"""
from __future__ import annotations

import re
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Union

import numpy as np

from .confidence import (
    BernoulliSequence,
    Evidence,
    NormalKnownSigma,
    Rule,
    WaldBinomial,
    base_of,
    rule_from_json,
    rule_to_json,
    sequences,
)
from .hypothesis_space import (
    AmbientMismatchError,
    Endpoint,
    Interval,
    RegionFormatError,
    RegionSet,
    contains,
    member,
    region_from_json,
    region_to_json,
)

# -- formulas -------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    h: RegionSet
    name: str = "H"

    def __str__(self) -> str:
        return f"(atom {self.name})"


@dataclass(frozen=True)
class Not:
    phi: Formula

    def __str__(self) -> str:
        return f"(not {self.phi})"


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"(and {self.left} {self.right})"


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"(or {self.left} {self.right})"


@dataclass(frozen=True)
class BoxC:
    phi: Formula

    def __str__(self) -> str:
        return f"(boxC {self.phi})"


@dataclass(frozen=True)
class DiamondC:
    phi: Formula

    def __str__(self) -> str:
        return f"(diamondC {self.phi})"


@dataclass(frozen=True)
class BoxE:
    phi: Formula

    def __str__(self) -> str:
        return f"(boxE {self.phi})"


@dataclass(frozen=True)
class DiamondE:
    phi: Formula

    def __str__(self) -> str:
        return f"(diamondE {self.phi})"


Formula = Union[Atom, Not, And, Or, BoxC, DiamondC, BoxE, DiamondE]

_UNARY = {"not": Not, "boxc": BoxC, "diamondc": DiamondC, "boxe": BoxE, "diamonde": DiamondE}
_BINARY = {"and": And, "or": Or}


class FormulaSyntaxError(ValueError):
    pass


def parse_formula(text: str, hypotheses: Mapping[str, RegionSet]) -> Formula:
    """Parse an s-expression such as ``(diamondE (diamondC (atom H)))``.

    ``and``/``or`` take two or more arguments and associate to the right.
    A bare name is shorthand for ``(atom name)``.
    """
    tokens = re.findall(r"\(|\)|[^\s()]+", text)
    pos = 0

    def expr() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            raise FormulaSyntaxError("unexpected end of formula")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise FormulaSyntaxError(f"unexpected ')' at token {pos - 1}")
        if tok != "(":
            return atom(tok)
        if pos >= len(tokens):
            raise FormulaSyntaxError("unexpected end of formula")
        head = tokens[pos].lower()
        pos += 1
        if head == "atom":
            out: Formula = atom(tokens[pos] if pos < len(tokens) else ")")
            pos += 1
        elif head in _UNARY:
            out = _UNARY[head](expr())
        elif head in _BINARY:
            args = [expr(), expr()]
            while pos < len(tokens) and tokens[pos] != ")":
                args.append(expr())
            out = args[-1]
            for a in reversed(args[:-1]):
                out = _BINARY[head](a, out)
        else:
            raise FormulaSyntaxError(f"unknown operator {tokens[pos - 1]!r}")
        if pos >= len(tokens) or tokens[pos] != ")":
            raise FormulaSyntaxError(f"expected ')' at token {pos}")
        pos += 1
        return out

    def atom(name: str) -> Atom:
        if name not in hypotheses:
            raise FormulaSyntaxError(f"unknown hypothesis {name!r}")
        return Atom(hypotheses[name], name)

    result = expr()
    if pos != len(tokens):
        raise FormulaSyntaxError(f"trailing input at token {pos}")
    return result


# -- frames -----------------------------------------------------------------------


@dataclass(frozen=True)
class World:
    theta: float
    evidence: Evidence

    def to_json(self) -> dict:
        return {"theta": self.theta, "evidence": list(self.evidence.observations)}


@dataclass(frozen=True)
class PepCounterexample:
    theta: float
    cell: RegionSet
    evidence: Evidence


@dataclass(frozen=True, eq=False)
class Frame:
    theta_grid: tuple[float, ...]
    alphabet: tuple
    horizon: int
    rule: Rule

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta_grid", tuple(float(t) for t in self.theta_grid))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if not self.theta_grid:
            raise ValueError("the theta grid is empty")
        if self.horizon < 0:
            raise ValueError("horizon must be nonnegative")
        amb = self.rule.ambient
        for t in self.theta_grid:
            if not Interval(Endpoint(t), Endpoint(t)).within(amb):
                raise ValueError(f"grid point {t} lies outside the parameter space")

    @cached_property
    def model(self):
        if isinstance(base_of(self.rule), WaldBinomial):
            if set(self.alphabet) - {0, 1}:
                raise ValueError("Bernoulli frames need the alphabet {0, 1}")
            return BernoulliSequence(max(self.horizon, 1))
        return NormalKnownSigma(base_of(self.rule).sigma)

    @cached_property
    def universe(self) -> tuple[Evidence, ...]:
        """All evidence strings, shortest first; parents precede children."""
        return tuple(Evidence(self.model, s) for s in sequences(self.alphabet, self.horizon))

    @cached_property
    def _index(self) -> dict[tuple, int]:
        return {e.observations: i for i, e in enumerate(self.universe)}

    @cached_property
    def _parent(self) -> np.ndarray:
        idx = self._index
        return np.array([idx[e.observations[:-1]] if e.n else -1 for e in self.universe])

    @cached_property
    def regions(self) -> tuple[RegionSet, ...]:
        return tuple(self.rule.region(e) for e in self.universe)

    @cached_property
    def coverage(self) -> np.ndarray:
        """``coverage[e, i]`` is True when grid point i lies in region(E_e)."""
        grid = self.theta_grid
        return np.array([[member(r, t) for t in grid] for r in self.regions], dtype=bool)

    @cached_property
    def _memo(self) -> dict:
        return {}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.theta_grid), len(self.universe)

    def __len__(self) -> int:
        return len(self.theta_grid) * len(self.universe)

    def world(self, theta: float, observations: Sequence = ()) -> World:
        if float(theta) not in self.theta_grid:
            raise ValueError(f"{theta} is not on the frame's grid")
        obs = Evidence(self.model, tuple(observations)).observations
        if obs not in self._index:
            raise ValueError(f"evidence {obs} is not in the frame")
        return World(float(theta), self.universe[self._index[obs]])

    def worlds(self) -> Iterator[World]:
        for e in self.universe:
            for t in self.theta_grid:
                yield World(t, e)

    def _locate(self, w: World) -> tuple[int, int]:
        try:
            return self.theta_grid.index(w.theta), self._index[w.evidence.observations]
        except (ValueError, KeyError):
            raise ValueError(f"world {w} is not in the frame") from None

    def extension_closure(self, flags: np.ndarray, how: str = "any") -> np.ndarray:
        """Fold ``flags`` (one per evidence) over every prefix extension, self included."""
        out = flags.copy()
        parent = self._parent
        for i in range(len(out) - 1, 0, -1):
            p = parent[i]
            if how == "any":
                out[p] |= out[i]
            else:
                out[p] &= out[i]
        return out

    def cell(self, center: int, radius: int) -> RegionSet:
        """Open neighbourhood spanning ``radius`` grid steps either side of a grid point."""
        grid, amb = self.theta_grid, self.rule.ambient
        lo = Endpoint(grid[center - radius], False) if center - radius >= 0 else amb.lo
        hi = Endpoint(grid[center + radius], False) if center + radius < len(grid) else amb.hi
        iv = Interval.make(lo, hi)
        return RegionSet(() if iv is None else (iv,), amb)


def accessible_c(f: Frame, w: World) -> frozenset[World]:
    _, e = f._locate(w)
    thetas = [t for t, hit in zip(f.theta_grid, f.coverage[e]) if hit]
    return frozenset(World(t, v) for t in thetas for v in f.universe)


def accessible_e(f: Frame, w: World) -> frozenset[World]:
    f._locate(w)
    ext = [v for v in f.universe if w.evidence.is_prefix_of(v)]
    return frozenset(World(t, v) for t in f.theta_grid for v in ext)


def truth_table(f: Frame, phi: Formula) -> np.ndarray:
    """Boolean array of shape (len(grid), len(universe)) for ``phi``."""
    memo = f._memo
    hit = memo.get(phi)
    if hit is not None:
        return hit
    shape = f.shape
    if isinstance(phi, Atom):
        if phi.h.ambient != f.rule.ambient:
            raise AmbientMismatchError(f"atom {phi.name} is not over the frame's parameter space")
        col = np.array([member(phi.h, t) for t in f.theta_grid], dtype=bool)
        out = np.repeat(col[:, None], shape[1], axis=1)
    elif isinstance(phi, Not):
        out = ~truth_table(f, phi.phi)
    elif isinstance(phi, And):
        out = truth_table(f, phi.left) & truth_table(f, phi.right)
    elif isinstance(phi, Or):
        out = truth_table(f, phi.left) | truth_table(f, phi.right)
    elif isinstance(phi, (DiamondC, BoxC)):
        sub = truth_table(f, phi.phi)
        if isinstance(phi, DiamondC):
            somewhere = sub.any(axis=1)
            per_e = (f.coverage & somewhere[None, :]).any(axis=1)
        else:
            everywhere = sub.all(axis=1)
            per_e = (~f.coverage | everywhere[None, :]).all(axis=1)
        out = np.repeat(per_e[None, :], shape[0], axis=0)
    elif isinstance(phi, (DiamondE, BoxE)):
        sub = truth_table(f, phi.phi)
        if isinstance(phi, DiamondE):
            per_e = f.extension_closure(sub.any(axis=0), "any")
        else:
            per_e = f.extension_closure(sub.all(axis=0), "all")
        out = np.repeat(per_e[None, :], shape[0], axis=0)
    else:
        raise TypeError(f"not a formula: {phi!r}")
    out.setflags(write=False)
    memo[phi] = out
    return out


def satisfies(f: Frame, w: World, phi: Formula) -> bool:
    i, e = f._locate(w)
    return bool(truth_table(f, phi)[i, e])


@dataclass(frozen=True)
class CheckResult:
    worlds_total: int
    worlds_satisfying: int
    counterexamples: tuple[World, ...]

    def to_json(self) -> dict:
        return {"worlds_total": self.worlds_total, "worlds_satisfying": self.worlds_satisfying,
                "counterexamples": [w.to_json() for w in self.counterexamples]}


def check(f: Frame, phi: Formula, limit: int = 10, max_len: int | None = None) -> CheckResult:
    """Count satisfying worlds, optionally restricted to evidence of length <= ``max_len``."""
    table = truth_table(f, phi)
    keep = np.array([max_len is None or e.n <= max_len for e in f.universe])
    sub = table[:, keep]
    bad = []
    for ei in np.flatnonzero(keep):
        for ti in np.flatnonzero(~table[:, ei]):
            if len(bad) >= limit:
                break
            bad.append(World(f.theta_grid[ti], f.universe[ei]))
    return CheckResult(int(sub.size), int(sub.sum()), tuple(bad))


def check_pep(f: Frame, radius: int = 1, max_prefix_len: int | None = None,
              limit: int | None = None) -> list[PepCounterexample]:
    """Triples (θ, U, E) with no extension E' of E such that θ ∈ c(E') ⊆ U.

    U ranges over the open cells of ``radius`` grid steps around every grid
    point, and θ over the grid points inside each cell.  Only evidence of
    length <= ``max_prefix_len`` is checked as E; extensions may use the
    whole horizon.  An empty list certifies the extension property at this
    resolution.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    grid = f.theta_grid
    lens = np.array([e.n for e in f.universe])
    check_mask = lens <= (f.horizon if max_prefix_len is None else max_prefix_len)
    out: list[PepCounterexample] = []
    for j in range(len(grid)):
        u = f.cell(j, radius)
        inside = np.array([contains(u, r) and not r.is_empty for r in f.regions], dtype=bool)
        for i in range(max(0, j - radius + 1), min(len(grid), j + radius)):
            good = f.coverage[:, i] & inside
            reach = f.extension_closure(good, "any")
            for ei in np.flatnonzero(check_mask & ~reach):
                out.append(PepCounterexample(grid[i], u, f.universe[ei]))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def pep_resolution(f: Frame, max_prefix_len: int | None = None) -> int | None:
    """Smallest cell radius at which the extension property holds, if any."""
    for r in range(1, len(f.theta_grid) + 1):
        if not check_pep(f, r, max_prefix_len, limit=1):
            return r
    return None


# -- JSON ------------------------------------------------------------------------


def frame_from_json(d: Any) -> tuple[Frame, dict[str, RegionSet]]:
    """Decode ``{"grid", "alphabet", "horizon", "rule", "hypotheses"}``.

    ``grid`` may be a list of values or an ``"a:b:k"`` string.
    """
    if not isinstance(d, dict):
        raise RegionFormatError("frame: expected a JSON object")
    try:
        grid = d["grid"]
        if isinstance(grid, str):
            a, b, k = grid.split(":")
            grid = list(np.linspace(float(a), float(b), int(k)))
        rule = rule_from_json(d["rule"])
        frame = Frame(tuple(grid), tuple(d.get("alphabet", (0, 1))), int(d["horizon"]), rule)
    except KeyError as exc:
        raise RegionFormatError(f"frame: missing field {exc.args[0]!r}") from None
    hyps = {name: region_from_json(r) for name, r in d.get("hypotheses", {}).items()}
    return frame, hyps


def frame_to_json(f: Frame, hypotheses: Mapping[str, RegionSet] | None = None) -> dict:
    return {"grid": list(f.theta_grid), "alphabet": list(f.alphabet), "horizon": f.horizon,
            "rule": rule_to_json(f.rule),
            "hypotheses": {k: region_to_json(v) for k, v in (hypotheses or {}).items()}}
