"""Finite weighted measure algebras and the step functions living on them.

A Space is an ordered list of cells with positive weights plus the norm
exponent p.  A StepFunction keeps one real value per cell (absent cells read
as 0).  Refinements split cells exactly; anything living on the parent space
can be lifted to the child space without changing norms, expectations or any
other invariant computed downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadExponent,
    BadFractions,
    DuplicateId,
    NonFiniteValue,
    NonPositiveDensity,
    NonPositiveWeight,
    SpaceMismatch,
    UnknownCell,
)

DEFAULT_TOL = 1e-9


def close(a: float, b: float, tol: float = DEFAULT_TOL) -> bool:
    """Tolerance comparison; relative once magnitudes exceed 1."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _finite(x: float, what: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteValue(f"{what} is not finite: {x!r}")
    return x


@dataclass(frozen=True)
class Space:
    """Ordered cells with strictly positive weights plus the exponent p >= 1."""

    cells: tuple[tuple[str, float], ...]
    p: float

    def __post_init__(self) -> None:
        seen = set()
        for cid, w in self.cells:
            if cid in seen:
                raise DuplicateId(f"duplicate cell id {cid!r}")
            seen.add(cid)
            _finite(w, f"weight of cell {cid!r}")
            if w <= 0.0:
                raise NonPositiveWeight(f"cell {cid!r} has weight {w!r}")
        _finite(self.p, "exponent p")
        if self.p < 1.0:
            raise BadExponent(f"p must be >= 1, got {self.p!r}")

    @cached_property
    def _weights(self) -> dict[str, float]:
        return dict(self.cells)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {cid: i for i, (cid, _) in enumerate(self.cells)}

    def ids(self) -> tuple[str, ...]:
        return tuple(cid for cid, _ in self.cells)

    def __contains__(self, cid: str) -> bool:
        return cid in self._weights

    def weight(self, cid: str) -> float:
        try:
            return self._weights[cid]
        except KeyError:
            raise UnknownCell(f"no cell {cid!r}") from None

    def index_of(self, cid: str) -> int:
        try:
            return self._index[cid]
        except KeyError:
            raise UnknownCell(f"no cell {cid!r}") from None

    def sort_cells(self, cids: Iterable[str]) -> tuple[str, ...]:
        """Cells sorted into this space's cell order."""
        return tuple(sorted(cids, key=self.index_of))


def make_space(cells: Iterable[tuple[str, float]], p: float) -> Space:
    """Validated Space from (id, weight) pairs."""
    return Space(tuple((str(cid), float(w)) for cid, w in cells), float(p))


@dataclass(frozen=True)
class StepFunction:
    """An element of L_p(space): one value per cell, exact zeros pruned."""

    space: Space
    values: dict[str, float]

    def __post_init__(self) -> None:
        pruned = {}
        for cid, v in self.values.items():
            if cid not in self.space:
                raise UnknownCell(f"no cell {cid!r}")
            v = _finite(v, f"value on cell {cid!r}")
            if v != 0.0:
                pruned[cid] = v
        object.__setattr__(self, "values", pruned)

    def _require_same(self, other: "StepFunction") -> None:
        if self.space != other.space:
            raise SpaceMismatch("functions live on different spaces")

    def __getitem__(self, cid: str) -> float:
        return self.values.get(cid, 0.0)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self.values)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        self._require_same(other)
        out = dict(self.values)
        for cid, v in other.values.items():
            out[cid] = out.get(cid, 0.0) + v
        return StepFunction(self.space, out)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + (-other)

    def __neg__(self) -> "StepFunction":
        return StepFunction(self.space, {c: -v for c, v in self.values.items()})

    def __mul__(self, scalar: float) -> "StepFunction":
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return StepFunction(self.space, {c: v * scalar for c, v in self.values.items()})

    __rmul__ = __mul__

    def meet(self, other: "StepFunction") -> "StepFunction":
        self._require_same(other)
        keys = set(self.values) | set(other.values)
        return StepFunction(
            self.space, {c: min(self[c], other[c]) for c in keys}
        )

    def join(self, other: "StepFunction") -> "StepFunction":
        self._require_same(other)
        keys = set(self.values) | set(other.values)
        return StepFunction(
            self.space, {c: max(self[c], other[c]) for c in keys}
        )

    def pos(self) -> "StepFunction":
        """Positive part f v 0."""
        return StepFunction(self.space, {c: v for c, v in self.values.items() if v > 0.0})

    def neg(self) -> "StepFunction":
        """Negative part (-f) v 0."""
        return StepFunction(self.space, {c: -v for c, v in self.values.items() if v < 0.0})

    def __abs__(self) -> "StepFunction":
        return StepFunction(self.space, {c: abs(v) for c, v in self.values.items()})

    def restrict(self, cells: Iterable[str]) -> "StepFunction":
        keep = set(cells)
        return StepFunction(self.space, {c: v for c, v in self.values.items() if c in keep})


def step_function(space: Space, values: Mapping[str, float]) -> StepFunction:
    """Validated StepFunction; absent cells mean value 0."""
    return StepFunction(space, dict(values))


def zero(space: Space) -> StepFunction:
    return StepFunction(space, {})


def indicator(space: Space, cells: Iterable[str]) -> StepFunction:
    return StepFunction(space, {cid: 1.0 for cid in cells})


def function_close(f: StepFunction, g: StepFunction, tol: float = DEFAULT_TOL) -> bool:
    """Cellwise equality within tol (requires one common space)."""
    if f.space != g.space:
        raise SpaceMismatch("functions live on different spaces")
    for cid in set(f.values) | set(g.values):
        if not close(f[cid], g[cid], tol):
            return False
    return True


def norm(f: StepFunction) -> float:
    """The L_p norm (sum_i mu_i |f_i|^p)^(1/p)."""
    p = f.space.p
    total = 0.0
    for cid, v in f.values.items():
        total += f.space.weight(cid) * abs(v) ** p
    return total ** (1.0 / p)


@dataclass(frozen=True)
class Refinement:
    """Exact replacement of parent cells by children of the same total weight.

    Every parent cell maps to at least one child.  Cells of the child space
    appearing under no parent are fresh; lifted objects are zero there.
    """

    parent: Space
    child: Space
    splitting: dict[str, tuple[tuple[str, float], ...]]

    def __post_init__(self) -> None:
        stray = set(self.splitting) - set(self.parent.ids())
        if stray:
            raise UnknownCell(f"splitting mentions unknown cell {sorted(stray)[0]!r}")
        seen: set[str] = set()
        for cid, w in self.parent.cells:
            kids = self.splitting.get(cid)
            if not kids:
                raise BadFractions(f"parent cell {cid!r} has no children")
            total = 0.0
            for kid, kw in kids:
                if kid in seen:
                    raise DuplicateId(f"child cell {kid!r} appears twice")
                seen.add(kid)
                if kid not in self.child or not close(self.child.weight(kid), kw):
                    raise SpaceMismatch(f"child cell {kid!r} disagrees with the child space")
                total += kw
            if not close(total, w):
                raise BadFractions(f"children of {cid!r} sum to {total!r}, expected {w!r}")

    @classmethod
    def identity(cls, space: Space) -> "Refinement":
        return cls(space, space, {cid: ((cid, w),) for cid, w in space.cells})

    def children_of(self, cid: str) -> tuple[str, ...]:
        return tuple(kid for kid, _ in self.splitting[cid])

    @cached_property
    def fresh_cells(self) -> tuple[str, ...]:
        under = {kid for kids in self.splitting.values() for kid, _ in kids}
        return tuple(cid for cid in self.child.ids() if cid not in under)

    def then(self, other: "Refinement") -> "Refinement":
        """Composite refinement: self followed by other."""
        if self.child != other.parent:
            raise SpaceMismatch("refinements do not chain")
        splitting = {}
        for cid in self.parent.ids():
            kids = []
            for kid, _ in self.splitting[cid]:
                kids.extend(other.splitting[kid])
            splitting[cid] = tuple(kids)
        return Refinement(self.parent, other.child, splitting)


def refine_space(
    space: Space,
    plan: Mapping[str, Sequence[float]],
    fresh: Iterable[tuple[str, float]] = (),
    tol: float = DEFAULT_TOL,
) -> tuple[Space, Refinement]:
    """Split several cells at once; children are named parent#k.

    plan maps cell id -> positive fractions summing to 1.  Cells listed in
    fresh are appended to the child space without a parent.
    """
    unknown = set(plan) - set(space.ids())
    if unknown:
        raise UnknownCell(f"no cell {sorted(unknown)[0]!r}")
    splitting = {}
    cells: list[tuple[str, float]] = []
    for cid, w in space.cells:
        if cid in plan:
            fr = [float(x) for x in plan[cid]]
            if not fr or any(not math.isfinite(x) or x <= 0.0 for x in fr):
                raise BadFractions(f"fractions for {cid!r} must be positive")
            if not close(sum(fr), 1.0, tol):
                raise BadFractions(f"fractions for {cid!r} sum to {sum(fr)!r}")
            kids = tuple((f"{cid}#{k}", w * x) for k, x in enumerate(fr))
        else:
            kids = ((cid, w),)
        splitting[cid] = kids
        cells.extend(kids)
    for cid, w in fresh:
        cells.append((str(cid), float(w)))
    child = Space(tuple(cells), space.p)
    return child, Refinement(space, child, splitting)


def split_cell(
    space: Space, cell: str, fractions: Sequence[float], tol: float = DEFAULT_TOL
) -> tuple[Space, Refinement]:
    """Replace one cell by sub-cells with weights weight*fraction."""
    if cell not in space:
        raise UnknownCell(f"no cell {cell!r}")
    return refine_space(space, {cell: tuple(fractions)}, (), tol)


def lift(f: StepFunction, r: Refinement) -> StepFunction:
    """Transport a step function to the refined space (constant on children)."""
    if f.space != r.parent:
        raise SpaceMismatch("function does not live on the refinement's parent space")
    out = {}
    for cid, v in f.values.items():
        for kid, _ in r.splitting[cid]:
            out[kid] = v
    return StepFunction(r.child, out)


def add_fresh_cells(space: Space, cells: Iterable[tuple[str, float]]) -> Space:
    """Enlarge a space by new cells; existing functions embed with value 0."""
    return Space(space.cells + tuple((str(cid), float(w)) for cid, w in cells), space.p)


def embed(f: StepFunction, bigger: Space) -> StepFunction:
    """Zero-extension of f onto an enlarged space."""
    if bigger.p != f.space.p:
        raise SpaceMismatch("exponents differ")
    for cid, w in f.space.cells:
        if cid not in bigger or bigger.weight(cid) != w:
            raise SpaceMismatch(f"cell {cid!r} missing or reweighted in the target space")
    return StepFunction(bigger, dict(f.values))


def fresh_ids(space: Space, count: int, prefix: str = "fresh") -> tuple[str, ...]:
    """Deterministic ids not colliding with the space's cells."""
    out: list[str] = []
    k = 0
    while len(out) < count:
        cid = f"{prefix}{k}"
        if cid not in space and cid not in out:
            out.append(cid)
        k += 1
    return tuple(out)


@dataclass(frozen=True)
class DensityChange:
    """Isometric re-presentation: weights mu*d^p, functions f -> f/d."""

    source: Space
    target: Space
    density: StepFunction

    def push(self, f: StepFunction) -> StepFunction:
        if f.space != self.source:
            raise SpaceMismatch("function does not live on the source space")
        return StepFunction(self.target, {c: v / self.density[c] for c, v in f.values.items()})

    def pull(self, g: StepFunction) -> StepFunction:
        if g.space != self.target:
            raise SpaceMismatch("function does not live on the target space")
        return StepFunction(self.source, {c: v * self.density[c] for c, v in g.values.items()})


def density_change(space: Space, d: StepFunction) -> DensityChange:
    """Re-present the space with weights mu_i * d_i^p; norms are preserved."""
    if d.space != space:
        raise SpaceMismatch("density does not live on the given space")
    for cid in space.ids():
        if d[cid] <= 0.0:
            raise NonPositiveDensity(f"density vanishes on cell {cid!r}")
    target = Space(
        tuple((cid, w * d[cid] ** space.p) for cid, w in space.cells), space.p
    )
    return DensityChange(space, target, d)
