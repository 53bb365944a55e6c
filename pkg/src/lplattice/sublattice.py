"""Closed sublattices in block/profile form, generated sublattices, bands,
and the conditional expectation projection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .core import (
    DEFAULT_TOL,
    DensityChange,
    Refinement,
    Space,
    StepFunction,
    close,
)
from .errors import SpaceMismatch, UnknownCell, ValidationError


@dataclass(frozen=True)
class Sublattice:
    """A closed sublattice: disjoint blocks of cells with a positive profile.

    Members are exactly the combinations sum_k c_k * (profile restricted to
    block k) with arbitrary real coefficients.  Canonical form: the profile
    peaks at 1 on every block and blocks are listed by least cell id.
    Construct through `make`.
    """

    space: Space
    blocks: tuple[tuple[str, ...], ...]
    profile: dict[str, float]

    @classmethod
    def make(
        cls,
        space: Space,
        blocks_with_profiles: Iterable[tuple[Sequence[str], dict[str, float]]],
    ) -> "Sublattice":
        seen: set[str] = set()
        canon = []
        for cells, prof in blocks_with_profiles:
            cells = tuple(cells)
            if not cells:
                raise ValidationError("empty block")
            vals = {}
            for cid in cells:
                if cid not in space:
                    raise UnknownCell(f"no cell {cid!r}")
                if cid in seen:
                    raise ValidationError(f"cell {cid!r} lies in two blocks")
                seen.add(cid)
                v = float(prof[cid])
                if not math.isfinite(v) or v <= 0.0:
                    raise ValidationError(f"profile on {cid!r} must be positive, got {v!r}")
                vals[cid] = v
            top = max(vals.values())
            ordered = space.sort_cells(cells)
            canon.append((ordered, {cid: vals[cid] / top for cid in ordered}))
        canon.sort(key=lambda item: min(item[0]))
        profile: dict[str, float] = {}
        for _, prof in canon:
            profile.update(prof)
        return cls(space, tuple(item[0] for item in canon), profile)

    @classmethod
    def trivial(cls, space: Space) -> "Sublattice":
        """The sublattice {0}."""
        return cls(space, (), {})

    @property
    def dim(self) -> int:
        return len(self.blocks)

    @cached_property
    def support(self) -> frozenset[str]:
        return frozenset(cid for block in self.blocks for cid in block)

    @cached_property
    def _block_of(self) -> dict[str, int]:
        return {cid: k for k, block in enumerate(self.blocks) for cid in block}

    def block_of(self, cid: str) -> Optional[int]:
        return self._block_of.get(cid)

    def nu(self, cid: str) -> float:
        """Cell weight in the nu-presentation: mu * w^p."""
        return self.space.weight(cid) * self.profile[cid] ** self.space.p

    def nu_block(self, k: int) -> float:
        return sum(self.nu(cid) for cid in self.blocks[k])

    def generators(self) -> tuple[StepFunction, ...]:
        """The block profiles as step functions, one per block."""
        return tuple(
            StepFunction(self.space, {cid: self.profile[cid] for cid in block})
            for block in self.blocks
        )

    def member(self, coeffs: Sequence[float]) -> StepFunction:
        """The member with the given per-block coefficients."""
        if len(coeffs) != len(self.blocks):
            raise ValidationError("one coefficient per block required")
        vals = {}
        for c, block in zip(coeffs, self.blocks):
            if c != 0.0:
                for cid in block:
                    vals[cid] = c * self.profile[cid]
        return StepFunction(self.space, vals)

    def equals(self, other: "Sublattice", tol: float = DEFAULT_TOL) -> bool:
        """Equality of canonical forms within tol."""
        if self.space != other.space or self.blocks != other.blocks:
            return False
        return all(close(self.profile[c], other.profile[c], tol) for c in self.profile)

    def subset(self, block_indices: Iterable[int]) -> "Sublattice":
        """The sublattice spanned by a subset of the blocks."""
        keep = sorted(set(block_indices))
        return Sublattice.make(
            self.space,
            [
                (self.blocks[k], {cid: self.profile[cid] for cid in self.blocks[k]})
                for k in keep
            ],
        )

    def lift(self, r: Refinement) -> "Sublattice":
        """Image of the sublattice on the refined space."""
        if self.space != r.parent:
            raise SpaceMismatch("sublattice does not live on the refinement's parent space")
        out = []
        for block in self.blocks:
            cells = []
            prof = {}
            for cid in block:
                for kid, _ in r.splitting[cid]:
                    cells.append(kid)
                    prof[kid] = self.profile[cid]
            out.append((cells, prof))
        return Sublattice.make(r.child, out)

    def density_push(self, dc: DensityChange) -> "Sublattice":
        """Transport across a density change: profiles become w/d."""
        if self.space != dc.source:
            raise SpaceMismatch("sublattice does not live on the density change's source")
        return Sublattice.make(
            dc.target,
            [
                (block, {cid: self.profile[cid] / dc.density[cid] for cid in block})
                for block in self.blocks
            ],
        )


def _positive_ratio(
    v: Sequence[float], u: Sequence[float], tol: float
) -> Optional[float]:
    # lam > 0 with v = lam * u, or None
    k = max(range(len(u)), key=lambda i: abs(u[i]))
    if u[k] == 0.0:
        return None
    lam = v[k] / u[k]
    if lam <= 0.0:
        return None
    for a, b in zip(v, u):
        if not close(a, lam * b, tol):
            return None
    return lam


def dcl(
    space: Space, generators: Iterable[StepFunction], tol: float = DEFAULT_TOL
) -> Sublattice:
    """The sublattice generated by the given functions.

    Two cells share a block exactly when their generator value vectors are
    positive scalar multiples of one another; the multiplier fixes the
    profile ratio.  Gated against the brute-force closure oracle in tests.
    """
    gens = list(generators)
    for g in gens:
        if g.space != space:
            raise SpaceMismatch("generator lives on a different space")
    classes: list[tuple[tuple[float, ...], list[tuple[str, float]]]] = []
    for cid in space.ids():
        vec = tuple(g[cid] for g in gens)
        if not any(v != 0.0 for v in vec):
            continue
        for rep, members in classes:
            lam = _positive_ratio(vec, rep, tol)
            if lam is not None:
                members.append((cid, lam))
                break
        else:
            classes.append((vec, [(cid, 1.0)]))
    return Sublattice.make(
        space,
        [(tuple(c for c, _ in members), dict(members)) for _, members in classes],
    )


def contains(
    C: Sublattice, f: StepFunction, tol: float = DEFAULT_TOL
) -> Optional[dict[int, float]]:
    """Per-block coefficients expressing f in C, or None if f is no member."""
    if C.space != f.space:
        raise SpaceMismatch("function lives on a different space")
    coeffs = {}
    for k, block in enumerate(C.blocks):
        anchor = max(block, key=lambda cid: C.profile[cid])
        c = f[anchor] / C.profile[anchor]
        for cid in block:
            if not close(f[cid], c * C.profile[cid], tol):
                return None
        coeffs[k] = c
    for cid, v in f.values.items():
        if cid not in C.support and not close(v, 0.0, tol):
            return None
    return coeffs


def is_sublattice_of(C: Sublattice, B: Sublattice, tol: float = DEFAULT_TOL) -> bool:
    """True when every block profile of C is a member of B."""
    if C.space != B.space:
        raise SpaceMismatch("sublattices live on different spaces")
    return all(contains(B, g, tol) is not None for g in C.generators())


def band_decompose(f: StepFunction, C: Sublattice) -> tuple[StepFunction, StepFunction]:
    """Split f into its components inside and orthogonal to the band of C."""
    if f.space != C.space:
        raise SpaceMismatch("function lives on a different space")
    supp = C.support
    inside = {c: v for c, v in f.values.items() if c in supp}
    outside = {c: v for c, v in f.values.items() if c not in supp}
    return StepFunction(f.space, inside), StepFunction(f.space, outside)


def cond_exp(f: StepFunction, C: Sublattice) -> StepFunction:
    """Conditional expectation of f onto C.

    Per block the coefficient is the nu-weighted average of f/w, the unique
    choice satisfying sum_B nu * (E f)/w = sum_B nu * f/w; the result
    vanishes on the band orthogonal to C.
    """
    if f.space != C.space:
        raise SpaceMismatch("function lives on a different space")
    p = C.space.p
    out = {}
    for block in C.blocks:
        num = 0.0
        den = 0.0
        for cid in block:
            mu = C.space.weight(cid)
            w = C.profile[cid]
            num += mu * w ** (p - 1.0) * f[cid]
            den += mu * w ** p
        c = num / den
        if c != 0.0:
            for cid in block:
                out[cid] = c * C.profile[cid]
    return StepFunction(C.space, out)


def lattice_intersection(
    A: Sublattice, C: Sublattice, tol: float = DEFAULT_TOL
) -> Sublattice:
    """Members common to A and C.

    Cells of the common support are joined by profile-ratio edges coming
    from either lattice's blocks; a connected component survives only if the
    ratios are cycle-consistent and no block touching it leaks outside the
    other lattice's support.  Everything else is forced to zero.
    """
    if A.space != C.space:
        raise SpaceMismatch("sublattices live on different spaces")
    space = A.space
    common = A.support & C.support
    adj: dict[str, list[tuple[str, float]]] = {cid: [] for cid in common}
    for lat in (A, C):
        for block in lat.blocks:
            inside = [cid for cid in block if cid in common]
            if len(inside) < 2:
                continue
            base = inside[0]
            for cid in inside[1:]:
                ratio = lat.profile[cid] / lat.profile[base]
                adj[base].append((cid, ratio))
                adj[cid].append((base, 1.0 / ratio))
    x: dict[str, float] = {}
    components: list[tuple[list[str], bool]] = []
    for start in space.ids():
        if start not in common or start in x:
            continue
        comp = [start]
        x[start] = 1.0
        consistent = True
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt, ratio in adj[cur]:
                want = x[cur] * ratio
                if nxt in x:
                    if not close(x[nxt], want, tol):
                        consistent = False
                else:
                    x[nxt] = want
                    comp.append(nxt)
                    stack.append(nxt)
        components.append((comp, consistent))
    kept = []
    for comp, consistent in components:
        if not consistent:
            continue
        cells = set(comp)
        leak = any(
            set(block) & cells and not set(block) <= common
            for lat in (A, C)
            for block in lat.blocks
        )
        if leak:
            continue
        kept.append((tuple(comp), {cid: x[cid] for cid in comp}))
    return Sublattice.make(space, kept)


def lattice_join(A: Sublattice, C: Sublattice, tol: float = DEFAULT_TOL) -> Sublattice:
    """The sublattice generated by the members of A and C together."""
    if A.space != C.space:
        raise SpaceMismatch("sublattices live on different spaces")
    return dcl(A.space, A.generators() + C.generators(), tol)


def intersects_well(A: Sublattice, C: Sublattice, tol: float = DEFAULT_TOL) -> bool:
    """True when the band of A meet the band of C is the band of A ∩ C."""
    return lattice_intersection(A, C, tol).support == (A.support & C.support)
