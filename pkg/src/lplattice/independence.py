"""*-independence, its alternative characterizations, non-forking extensions,
and canonical bases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .core import (
    DEFAULT_TOL,
    Refinement,
    Space,
    StepFunction,
    close,
    function_close,
    norm,
)
from .errors import (
    CertificationFailed,
    NonTermination,
    PreconditionFailed,
    SpaceMismatch,
)
from .sublattice import (
    Sublattice,
    cond_exp,
    dcl,
    intersects_well,
    is_sublattice_of,
    lattice_join,
)
from .typespace import (
    cond_distribution,
    merged_midpoints,
    realize_cond_distribution,
    slice_profile,
    tuple_type_equal,
)

SideInput = Union[Sublattice, Iterable[StepFunction]]


@dataclass(frozen=True)
class Witness:
    """A concrete failure of an independence test.

    kind is "expectation" (element with differing expectations over B' and
    C) or "slice" (an r where the slices over B and C differ).
    """

    kind: str
    element: Optional[StepFunction]
    r: Optional[float]
    over_b: StepFunction
    over_c: StepFunction
    gap: float


@dataclass(frozen=True)
class IndependenceVerdict:
    independent: bool
    witness: Optional[Witness]


def _space_of(*sides: SideInput) -> Space:
    for side in sides:
        if isinstance(side, Sublattice):
            return side.space
        for f in side:
            return f.space
    raise SpaceMismatch("no space among the inputs")


def _as_sublattice(side: SideInput, space: Space, tol: float) -> Sublattice:
    if isinstance(side, Sublattice):
        if side.space != space:
            raise SpaceMismatch("inputs live on different spaces")
        return side
    return dcl(space, side, tol)


def star_independent(
    A: SideInput, B: SideInput, C: SideInput, tol: float = DEFAULT_TOL
) -> IndependenceVerdict:
    """Test whether A is *-independent from B over C.

    Joins everything with dcl(C) and compares the conditional expectations
    onto B' and onto C on the block generators of A' (enough, by linearity).
    The witness is the failing generator with the largest norm gap; ties go
    to the earliest block in canonical order.
    """
    space = _space_of(A, B, C)
    Cbar = _as_sublattice(C, space, tol)
    Aprime = lattice_join(_as_sublattice(A, space, tol), Cbar, tol)
    Bprime = lattice_join(_as_sublattice(B, space, tol), Cbar, tol)
    worst: Optional[Witness] = None
    for e in Aprime.generators():
        over_b = cond_exp(e, Bprime)
        over_c = cond_exp(e, Cbar)
        gap = norm(over_b - over_c)
        if gap > tol and (worst is None or gap > worst.gap):
            worst = Witness("expectation", e, None, over_b, over_c, gap)
    return IndependenceVerdict(worst is None, worst)


def restricted_star_check(
    A: Sublattice, B: Sublattice, C: Sublattice, tol: float = DEFAULT_TOL
) -> bool:
    """Expectation test on the generators of A alone (no join with C).

    Valid only when C <= B and A intersects C well; under those
    preconditions the verdict agrees with star_independent.
    """
    if not is_sublattice_of(C, B, tol):
        raise PreconditionFailed("C is not a sublattice of B")
    if not intersects_well(A, C, tol):
        raise PreconditionFailed("A and C do not intersect well")
    return all(
        norm(cond_exp(e, B) - cond_exp(e, C)) <= tol for e in A.generators()
    )


def product_check(
    A: Sublattice, B: Sublattice, C: Sublattice, tol: float = DEFAULT_TOL
) -> bool:
    """Conditional product criterion for indicator-profile lattices.

    Requires C <= A, C <= B, supp(A) & supp(B) == supp(C) and indicator
    profiles throughout; then A and B are independent over C exactly when
    E_C(chi_{P0 & P1}) = E_C(chi_P0) * E_C(chi_P1) for all blocks P0 of A
    and P1 of B.
    """
    for name, lat in (("A", A), ("B", B), ("C", C)):
        if any(not close(v, 1.0, tol) for v in lat.profile.values()):
            raise PreconditionFailed(f"{name} does not have an indicator profile")
    if not is_sublattice_of(C, A, tol):
        raise PreconditionFailed("C is not a sublattice of A")
    if not is_sublattice_of(C, B, tol):
        raise PreconditionFailed("C is not a sublattice of B")
    if (A.support & B.support) != C.support:
        raise PreconditionFailed("supp(A) & supp(B) differs from supp(C)")
    space = A.space
    for p0 in A.blocks:
        for p1 in B.blocks:
            both = set(p0) & set(p1)
            left = cond_exp(StepFunction(space, {c: 1.0 for c in both}), C)
            ea = cond_exp(StepFunction(space, {c: 1.0 for c in p0}), C)
            eb = cond_exp(StepFunction(space, {c: 1.0 for c in p1}), C)
            prod = StepFunction(
                space, {c: ea[c] * eb[c] for c in set(ea.values) & set(eb.values)}
            )
            if not function_close(left, prod, tol):
                return False
    return True


def slice_independent(
    f: StepFunction, B: Sublattice, C: Sublattice, tol: float = DEFAULT_TOL
) -> IndependenceVerdict:
    """Slice characterization: f is independent from B over C exactly when
    the conditional slices of f over B and over C agree at every r."""
    if not is_sublattice_of(C, B, tol):
        raise PreconditionFailed("C is not a sublattice of B")
    prof_b = slice_profile(f, B, tol)
    prof_c = slice_profile(f, C, tol)
    worst: Optional[Witness] = None
    for r in merged_midpoints(prof_b, prof_c):
        over_b = prof_b.function_at(r)
        over_c = prof_c.function_at(r)
        gap = norm(over_b - over_c)
        if gap > tol and (worst is None or gap > worst.gap):
            worst = Witness("slice", f, r, over_b, over_c, gap)
    return IndependenceVerdict(worst is None, worst)


def nonforking_extension(
    fs: Sequence[StepFunction],
    C: Sublattice,
    B: Sublattice,
    tol: float = DEFAULT_TOL,
) -> tuple[Space, Refinement, tuple[StepFunction, ...]]:
    """A tuple with the type of fs over C that is independent from B over C.

    Realizes the conditional law of fs given C by splitting every cell of
    each C-block proportionally (so the law given B collapses to the law
    given C) and moves the orthogonal parts onto fresh cells disjoint from
    B.  Both postconditions are asserted by the callers' tests.
    """
    if not is_sublattice_of(C, B, tol):
        raise PreconditionFailed("C is not a sublattice of B")
    d = cond_distribution(fs, C, tol)
    return realize_cond_distribution(d, C, tol)


@dataclass(frozen=True)
class StationarityResult:
    holds: bool
    hypotheses_met: bool


def stationarity_check(
    f1s: Sequence[StepFunction],
    f2s: Sequence[StepFunction],
    C: Sublattice,
    B: Sublattice,
    tol: float = DEFAULT_TOL,
) -> StationarityResult:
    """If both tuples share a type over C and are independent from B over C,
    they must share a type over B; vacuously true when hypotheses fail."""
    if not is_sublattice_of(C, B, tol):
        raise PreconditionFailed("C is not a sublattice of B")
    hypotheses = (
        tuple_type_equal(f1s, f2s, C, tol)
        and star_independent(f1s, B, C, tol).independent
        and star_independent(f2s, B, C, tol).independent
    )
    if not hypotheses:
        return StationarityResult(True, False)
    return StationarityResult(tuple_type_equal(f1s, f2s, B, tol), True)


def _slice_members(f: StepFunction, A: Sublattice, tol: float) -> list[StepFunction]:
    # the finitely many distinct conditional slices of f over A
    prof = slice_profile(f, A, tol)
    out: list[StepFunction] = []
    for r in merged_midpoints(prof):
        s = prof.function_at(r)
        if not any(function_close(s, seen, tol) for seen in out):
            out.append(s)
    return out


def canonical_base(
    fs: Sequence[StepFunction],
    A: Sublattice,
    tol: float = DEFAULT_TOL,
    max_rounds: int = 32,
) -> Sublattice:
    """The canonical base of tp(fs / A).

    For one function this is the sublattice generated by its distinct
    conditional slices over A.  For tuples, a join-and-reslice fixpoint runs
    until the block structure stabilizes; the output is always certified by
    an independence check and never silently accepted.
    """
    fs = tuple(fs)
    space = A.space
    for f in fs:
        if f.space != space:
            raise SpaceMismatch("function lives on a different space")
    seeds = [s for f in fs for s in _slice_members(f, A, tol)]
    cb = dcl(space, seeds, tol)
    if len(fs) > 1:
        for _ in range(max_rounds):
            joined = lattice_join(dcl(space, fs, tol), cb, tol)
            extra = [s for e in joined.generators() for s in _slice_members(e, A, tol)]
            nxt = lattice_join(cb, dcl(space, extra, tol), tol)
            if nxt.equals(cb, tol):
                break
            cb = nxt
        else:
            raise NonTermination("canonical base iteration did not stabilize")
    verdict = star_independent(fs, A, cb, tol)
    if not verdict.independent:
        raise CertificationFailed(
            "canonical base candidate failed the independence certificate"
        )
    return cb
