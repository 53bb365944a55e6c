"""Conditional distributions, conditional slices, 1-type invariants, the type
metric, and realization constructions by exact cell refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    DEFAULT_TOL,
    Refinement,
    Space,
    StepFunction,
    close,
    fresh_ids,
    norm,
    refine_space,
)
from .errors import (
    ArityMismatch,
    BadR,
    InvalidDistribution,
    SpaceMismatch,
    SublatticeMismatch,
    TargetOutOfRange,
    UnknownCell,
    ValidationError,
)
from .sublattice import Sublattice, band_decompose, contains

Segment = tuple[float, float]  # (length, value)
Atom = tuple[tuple[float, ...], float]  # (value vector, mass)


@dataclass(frozen=True)
class SliceProfile:
    """Per block of C, the decreasing rearrangement of f/w over (0,1).

    Stored as merged (length, value) segments: lengths sum to 1 per block
    and values strictly decrease, so a.e.-equal profiles canonicalize to the
    same object.  Evaluation at r returns the right-limit value.
    """

    sublattice: Sublattice
    per_block: tuple[tuple[Segment, ...], ...]

    def __post_init__(self) -> None:
        if len(self.per_block) != len(self.sublattice.blocks):
            raise ValidationError("one segment list per block required")
        for segments in self.per_block:
            if not segments:
                raise ValidationError("empty segment list")
            total = 0.0
            last = math.inf
            for length, value in segments:
                if length <= 0.0:
                    raise ValidationError("segment lengths must be positive")
                if value >= last:
                    raise ValidationError("segment values must strictly decrease")
                last = value
                total += length
            if not close(total, 1.0):
                raise ValidationError(f"segment lengths sum to {total!r}")

    def coefficient(self, block_index: int, r: float) -> float:
        """Right-continuous value of the rearrangement at r in (0,1)."""
        segments = self.per_block[block_index]
        cum = 0.0
        for length, value in segments:
            cum += length
            if cum > r:
                return value
        return segments[-1][1]

    def breakpoints(self) -> tuple[float, ...]:
        """Interior segment boundaries, merged across all blocks."""
        cuts: list[float] = []
        for segments in self.per_block:
            cum = 0.0
            for length, _ in segments[:-1]:
                cum += length
                if not any(abs(cum - c) <= 1e-12 for c in cuts):
                    cuts.append(cum)
        return tuple(sorted(cuts))

    def function_at(self, r: float) -> StepFunction:
        """The slice at r as a member of the sublattice."""
        return self.sublattice.member(
            [self.coefficient(k, r) for k in range(len(self.per_block))]
        )

    def integral_coefficients(self) -> tuple[float, ...]:
        """Per block, the exact value of the r-integral of the rearrangement."""
        return tuple(
            sum(length * value for length, value in segments)
            for segments in self.per_block
        )


@dataclass(frozen=True)
class TypeDatum:
    """Complete invariant of a 1-type over C: slice profile plus the norms of
    the positive and negative parts orthogonal to C."""

    profile: SliceProfile
    orth_pos: float
    orth_neg: float

    def __post_init__(self) -> None:
        if self.orth_pos < 0.0 or self.orth_neg < 0.0:
            raise ValidationError("orthogonal part norms must be nonnegative")

    @property
    def sublattice(self) -> Sublattice:
        return self.profile.sublattice

    def equals(self, other: "TypeDatum", tol: float = DEFAULT_TOL) -> bool:
        if not self.sublattice.equals(other.sublattice, tol):
            return False
        if not close(self.orth_pos, other.orth_pos, tol):
            return False
        if not close(self.orth_neg, other.orth_neg, tol):
            return False
        return _profiles_equal(self.profile, other.profile, tol)


@dataclass(frozen=True)
class ConditionalDistribution:
    """Per block of C, the nu-weighted law of the profile-normalized value
    vectors; plus the mu-weighted off-origin joint law of the orthogonal
    components."""

    sublattice: Sublattice
    arity: int
    per_block: tuple[tuple[Atom, ...], ...]
    orth: tuple[Atom, ...]

    def __post_init__(self) -> None:
        if len(self.per_block) != len(self.sublattice.blocks):
            raise InvalidDistribution("one atom list per block required")
        object.__setattr__(
            self,
            "per_block",
            tuple(tuple(sorted(atoms, key=lambda a: a[0])) for atoms in self.per_block),
        )
        object.__setattr__(self, "orth", tuple(sorted(self.orth, key=lambda a: a[0])))
        for k, atoms in enumerate(self.per_block):
            total = 0.0
            for vec, mass in atoms:
                if len(vec) != self.arity:
                    raise InvalidDistribution("atom arity mismatch")
                if mass < 0.0:
                    raise InvalidDistribution("negative mass")
                total += mass
            if not close(total, self.sublattice.nu_block(k)):
                raise InvalidDistribution(
                    f"block {k} mass {total!r} differs from nu(block)"
                )
        for vec, mass in self.orth:
            if len(vec) != self.arity:
                raise InvalidDistribution("atom arity mismatch")
            if mass < 0.0:
                raise InvalidDistribution("negative mass")
            if all(x == 0.0 for x in vec):
                raise InvalidDistribution("orthogonal part carries mass at the origin")


def _rearrange(pairs: Iterable[tuple[float, float]], tol: float) -> tuple[Segment, ...]:
    # pairs: (value, mass) -> merged decreasing segments with normalized lengths
    acc: dict[float, float] = {}
    total = 0.0
    for value, mass in pairs:
        acc[value] = acc.get(value, 0.0) + mass
        total += mass
    items = sorted(acc.items(), key=lambda it: -it[0])
    merged: list[tuple[float, float]] = []
    for value, mass in items:
        if merged and close(merged[-1][0], value, tol):
            v0, m0 = merged[-1]
            merged[-1] = ((v0 * m0 + value * mass) / (m0 + mass), m0 + mass)
        else:
            merged.append((value, mass))
    return tuple((mass / total, value) for value, mass in merged)


def _profiles_equal(a: SliceProfile, b: SliceProfile, tol: float) -> bool:
    if len(a.per_block) != len(b.per_block):
        return False
    for segs_a, segs_b in zip(a.per_block, b.per_block):
        if _piecewise_pth_power(segs_a, segs_b, 1.0) > tol:
            return False
    return True


def _cumulative(segs: Sequence[Segment]) -> list[float]:
    cuts = []
    cum = 0.0
    for length, _ in segs:
        cum += length
        cuts.append(cum)
    return cuts


def _piecewise_pth_power(
    segs1: Sequence[Segment], segs2: Sequence[Segment], p: float
) -> float:
    # integral over (0,1) of |v1(r) - v2(r)|^p, exact on the merged breakpoints
    cuts1 = _cumulative(segs1)
    cuts2 = _cumulative(segs2)
    total = 0.0
    i = j = 0
    pos = 0.0
    while True:
        end = min(cuts1[i], cuts2[j])
        total += (end - pos) * abs(segs1[i][1] - segs2[j][1]) ** p
        pos = end
        at_last1 = i == len(segs1) - 1
        at_last2 = j == len(segs2) - 1
        if at_last1 and at_last2:
            return total
        if cuts1[i] <= end + 1e-15 and not at_last1:
            i += 1
        if cuts2[j] <= end + 1e-15 and not at_last2:
            j += 1


def cond_probability(
    event: Iterable[str], C: Sublattice, tol: float = DEFAULT_TOL
) -> StepFunction:
    """The conditional probability of a cell event, as a member of C."""
    cells = set(event)
    for cid in cells:
        if cid not in C.space:
            raise UnknownCell(f"no cell {cid!r}")
    coeffs = []
    for k, block in enumerate(C.blocks):
        hit = sum(C.nu(cid) for cid in block if cid in cells)
        coeffs.append(hit / C.nu_block(k))
    return C.member(coeffs)


def slice_profile(f: StepFunction, C: Sublattice, tol: float = DEFAULT_TOL) -> SliceProfile:
    """The full conditional slice map of f over C, block by block."""
    f1, _ = band_decompose(f, C)
    per_block = []
    for block in C.blocks:
        pairs = [(f1[cid] / C.profile[cid], C.nu(cid)) for cid in block]
        per_block.append(_rearrange(pairs, tol))
    return SliceProfile(C, tuple(per_block))


def conditional_slice(
    f: StepFunction, C: Sublattice, r: float, tol: float = DEFAULT_TOL
) -> StepFunction:
    """The conditional r-slice of f over C (right-continuous in r)."""
    if not 0.0 < r < 1.0:
        raise BadR(f"r must lie in (0,1), got {r!r}")
    return slice_profile(f, C, tol).function_at(r)


def type_datum(f: StepFunction, C: Sublattice, tol: float = DEFAULT_TOL) -> TypeDatum:
    """The complete invariant of tp(f/C)."""
    _, f2 = band_decompose(f, C)
    return TypeDatum(slice_profile(f, C, tol), norm(f2.pos()), norm(f2.neg()))


def _merge_atoms(atoms: Iterable[Atom], tol: float) -> tuple[Atom, ...]:
    acc: dict[tuple[float, ...], float] = {}
    for vec, mass in atoms:
        acc[vec] = acc.get(vec, 0.0) + mass
    items = sorted(acc.items(), key=lambda it: it[0])
    merged: list[tuple[tuple[float, ...], float]] = []
    for vec, mass in items:
        if merged and all(close(a, b, tol) for a, b in zip(merged[-1][0], vec)):
            v0, m0 = merged[-1]
            total = m0 + mass
            mean = tuple((a * m0 + b * mass) / total for a, b in zip(v0, vec))
            merged[-1] = (mean, total)
        else:
            merged.append((vec, mass))
    return tuple((vec, mass) for vec, mass in merged if mass > 0.0)


def cond_distribution(
    fs: Sequence[StepFunction], C: Sublattice, tol: float = DEFAULT_TOL
) -> ConditionalDistribution:
    """The joint conditional distribution of a tuple over C."""
    fs = tuple(fs)
    for f in fs:
        if f.space != C.space:
            raise SpaceMismatch("function lives on a different space")
    n = len(fs)
    parts = [band_decompose(f, C) for f in fs]
    per_block = []
    for block in C.blocks:
        atoms = [
            (
                tuple(parts[i][0][cid] / C.profile[cid] for i in range(n)),
                C.nu(cid),
            )
            for cid in block
        ]
        per_block.append(_merge_atoms(atoms, tol))
    orth_atoms = []
    for cid in C.space.ids():
        if cid in C.support:
            continue
        vec = tuple(parts[i][1][cid] for i in range(n))
        if any(x != 0.0 for x in vec):
            orth_atoms.append((vec, C.space.weight(cid)))
    return ConditionalDistribution(C, n, tuple(per_block), _merge_atoms(orth_atoms, tol))


def _atoms_equal(a: tuple[Atom, ...], b: tuple[Atom, ...], tol: float) -> bool:
    a = _merge_atoms(a, tol)
    b = _merge_atoms(b, tol)
    if len(a) != len(b):
        return False
    for (va, ma), (vb, mb) in zip(a, b):
        if not close(ma, mb, tol):
            return False
        if not all(close(x, y, tol) for x, y in zip(va, vb)):
            return False
    return True


def tuple_type_equal(
    fs: Sequence[StepFunction],
    gs: Sequence[StepFunction],
    C: Sublattice,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Type equality over C: equal band conditional distributions and equal
    off-origin joint laws of the orthogonal parts."""
    fs = tuple(fs)
    gs = tuple(gs)
    if len(fs) != len(gs):
        raise ArityMismatch(f"tuples of arity {len(fs)} and {len(gs)}")
    d1 = cond_distribution(fs, C, tol)
    d2 = cond_distribution(gs, C, tol)
    for atoms1, atoms2 in zip(d1.per_block, d2.per_block):
        if not _atoms_equal(atoms1, atoms2, tol):
            return False
    return _atoms_equal(d1.orth, d2.orth, tol)


def distance(t1: TypeDatum, t2: TypeDatum, tol: float = DEFAULT_TOL) -> float:
    """Distance between two 1-types over one sublattice.

    d^p integrates the p-th power gap of the slice profiles block by block
    (nu-weighted) and adds the gaps of the orthogonal part norms.
    """
    C = t1.sublattice
    if not C.equals(t2.sublattice, tol):
        raise SublatticeMismatch("types live over different sublattices")
    p = C.space.p
    total = 0.0
    for k in range(len(C.blocks)):
        total += C.nu_block(k) * _piecewise_pth_power(
            t1.profile.per_block[k], t2.profile.per_block[k], p
        )
    total += abs(t1.orth_pos - t2.orth_pos) ** p
    total += abs(t1.orth_neg - t2.orth_neg) ** p
    return total ** (1.0 / p)


def canonical_realization(
    t: TypeDatum, tol: float = DEFAULT_TOL
) -> tuple[Space, Refinement, StepFunction]:
    """The unique decreasing realization of a 1-type.

    Every support cell is split along the profile's r-breakpoints with the
    slice values laid out in decreasing order; the orthogonal part goes onto
    fresh unit-weight cells.
    """
    C = t.sublattice
    space = C.space
    plan = {}
    for k, block in enumerate(C.blocks):
        segments = t.profile.per_block[k]
        if len(segments) > 1:
            fractions = tuple(length for length, _ in segments)
            for cid in block:
                plan[cid] = fractions
    fresh = []
    orth_ids = fresh_ids(space, 2)
    if t.orth_pos > 0.0:
        fresh.append((orth_ids[0], 1.0))
    if t.orth_neg > 0.0:
        fresh.append((orth_ids[1], 1.0))
    child, refinement = refine_space(space, plan, fresh, tol)
    values = {}
    for k, block in enumerate(C.blocks):
        segments = t.profile.per_block[k]
        for cid in block:
            kids = refinement.splitting[cid]
            for (kid, _), (_, value) in zip(kids, segments):
                values[kid] = value * C.profile[cid]
    if t.orth_pos > 0.0:
        values[orth_ids[0]] = t.orth_pos
    if t.orth_neg > 0.0:
        values[orth_ids[1]] = -t.orth_neg
    return child, refinement, StepFunction(child, values)


def realize_cond_distribution(
    d: ConditionalDistribution, C: Sublattice, tol: float = DEFAULT_TOL
) -> tuple[Space, Refinement, tuple[StepFunction, ...]]:
    """Realize a prescribed conditional law by proportional cell splitting.

    Each support cell splits by the block's normalized atom masses, so every
    atom occupies the same r-interval across the whole block; orthogonal
    atoms land on fresh cells whose weight equals the atom's mass.
    """
    if not d.sublattice.equals(C, tol):
        raise InvalidDistribution("distribution is over a different sublattice")
    space = C.space
    n = d.arity
    block_atoms = []
    plan = {}
    for k, block in enumerate(C.blocks):
        atoms = sorted(d.per_block[k], key=lambda a: tuple(-x for x in a[0]))
        if not atoms:
            raise InvalidDistribution(f"block {k} carries no mass")
        block_atoms.append(atoms)
        if len(atoms) > 1:
            total = C.nu_block(k)
            fractions = tuple(mass / total for _, mass in atoms)
            for cid in block:
                plan[cid] = fractions
    orth_cells = list(zip(fresh_ids(space, len(d.orth)), d.orth))
    fresh = [(fid, mass) for fid, (_, mass) in orth_cells]
    child, refinement = refine_space(space, plan, fresh, tol)
    value_maps: list[dict[str, float]] = [{} for _ in range(n)]
    for k, block in enumerate(C.blocks):
        atoms = block_atoms[k]
        for cid in block:
            kids = refinement.splitting[cid]
            for (kid, _), (vec, _) in zip(kids, atoms):
                for i in range(n):
                    value_maps[i][kid] = vec[i] * C.profile[cid]
    for fid, (vec, _) in orth_cells:
        for i in range(n):
            value_maps[i][fid] = vec[i]
    gs = tuple(StepFunction(child, vals) for vals in value_maps)
    return child, refinement, gs


def maharam_select(
    cells: Iterable[str],
    C: Sublattice,
    target: StepFunction,
    tol: float = DEFAULT_TOL,
) -> tuple[Space, Refinement, frozenset[str]]:
    """Select B inside the given cell set with E(chi_B | C) equal to target.

    Works per block by a greedy scan in cell order, splitting at most one
    cell per block; cells outside the support of C contribute nothing to the
    expectation and are never selected.
    """
    space = C.space
    A = set(cells)
    for cid in A:
        if cid not in space:
            raise UnknownCell(f"no cell {cid!r}")
    coeffs = contains(C, target, tol)
    if coeffs is None:
        raise TargetOutOfRange("target is not a member of C")
    p = space.p
    plan = {}
    selected: list[str] = []
    for k, block in enumerate(C.blocks):
        nu_b = C.nu_block(k)
        bound = sum(
            space.weight(cid) * C.profile[cid] ** (p - 1.0)
            for cid in block
            if cid in A
        )
        need = coeffs[k] * nu_b
        slack = tol * max(1.0, nu_b)
        if need < -slack or need > bound + slack:
            raise TargetOutOfRange(
                f"block {k}: target needs {need!r}, available {bound!r}"
            )
        need = min(max(need, 0.0), bound)
        for cid in block:
            if cid not in A or need <= slack:
                continue
            a = space.weight(cid) * C.profile[cid] ** (p - 1.0)
            if a <= need + slack:
                selected.append(cid)
                need = max(need - a, 0.0)
            else:
                phi = need / a
                plan[cid] = (phi, 1.0 - phi)
                selected.append(f"{cid}#0")
                need = 0.0
    child, refinement = refine_space(space, plan, (), tol)
    return child, refinement, frozenset(selected)


def lift_profile(profile: SliceProfile, r: Refinement) -> SliceProfile:
    """Transport a slice profile across a refinement (segments unchanged)."""
    return SliceProfile(profile.sublattice.lift(r), profile.per_block)


def lift_type_datum(t: TypeDatum, r: Refinement) -> TypeDatum:
    """Covariant transport of a 1-type invariant across a refinement."""
    return TypeDatum(lift_profile(t.profile, r), t.orth_pos, t.orth_neg)


def merged_midpoints(*profiles: SliceProfile) -> tuple[float, ...]:
    """Midpoints of the intervals cut out of (0,1) by all breakpoints."""
    cuts = [0.0, 1.0]
    for prof in profiles:
        for c in prof.breakpoints():
            if not any(abs(c - x) <= 1e-12 for x in cuts):
                cuts.append(c)
    cuts.sort()
    return tuple((a + b) / 2.0 for a, b in zip(cuts, cuts[1:]))
