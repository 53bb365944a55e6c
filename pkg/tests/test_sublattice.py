import random

import pytest

from conftest import brute_intersection
from lplattice import (
    SpaceMismatch,
    Sublattice,
    band_decompose,
    close,
    cond_exp,
    contains,
    dcl,
    density_change,
    function_close,
    indicator,
    intersects_well,
    is_sublattice_of,
    lattice_intersection,
    lattice_join,
    make_space,
    norm,
    step_function,
)
from lplattice.oracles import brute_dcl_closure, random_instance
from lplattice.verify import masked_dependence_example


def unit_space(n=3, p=2.0):
    return make_space([(f"c{i}", 1.0) for i in range(n)], p)


class TestDcl:
    def test_single_generator_rays(self):
        # (2, 0, 1): the first and last cell are positively proportional
        space = unit_space(3)
        f = step_function(space, {"c0": 2.0, "c2": 1.0})
        C = dcl(space, [f])
        assert C.blocks == (("c0", "c2"),)
        assert C.profile["c0"] == 1.0
        assert close(C.profile["c2"], 0.5)

    def test_adding_constants_splits_everything(self):
        space = unit_space(3)
        f = step_function(space, {"c0": 2.0, "c2": 1.0})
        C = dcl(space, [f, indicator(space, space.ids())])
        assert C.blocks == (("c0",), ("c1",), ("c2",))

    def test_empty_generators(self):
        C = dcl(unit_space(3), [])
        assert C.dim == 0
        assert C.support == frozenset()

    def test_negative_scalar_is_not_a_ray(self):
        space = unit_space(2)
        f = step_function(space, {"c0": 1.0, "c1": -2.0})
        assert dcl(space, [f]).dim == 2

    @pytest.mark.parametrize("seed", range(60))
    def test_agrees_with_closure_oracle(self, seed):
        inst = random_instance(seed, 6)
        gens = list(inst.functions[:3])
        assert dcl(inst.space, gens).equals(
            brute_dcl_closure(inst.space, gens), 1e-6
        )


class TestContains:
    def test_block_profile_is_member(self):
        space = unit_space(3)
        C = dcl(space, [step_function(space, {"c0": 2.0, "c2": 1.0})])
        gen = C.generators()[0]
        assert contains(C, gen) == {0: 1.0}

    def test_off_support_function_is_not(self):
        space = unit_space(3)
        C = dcl(space, [step_function(space, {"c0": 2.0, "c2": 1.0})])
        assert contains(C, indicator(space, ["c1"])) is None

    def test_top_indicator_not_constant(self):
        fx = masked_dependence_example()
        assert contains(fx.C, fx.chi_top) is None

    def test_zero_is_member(self):
        space = unit_space(2)
        C = dcl(space, [indicator(space, space.ids())])
        assert contains(C, step_function(space, {})) == {0: 0.0}


class TestIsSublatticeOf:
    def test_constants_inside_halves(self):
        space = unit_space(4)
        constants = dcl(space, [indicator(space, space.ids())])
        halves = Sublattice.make(
            space,
            [
                (("c0", "c1"), {"c0": 1.0, "c1": 1.0}),
                (("c2", "c3"), {"c2": 1.0, "c3": 1.0}),
            ],
        )
        assert is_sublattice_of(constants, halves)
        assert not is_sublattice_of(halves, constants)
        assert is_sublattice_of(halves, halves)

    def test_trivial_in_everything(self):
        space = unit_space(2)
        assert is_sublattice_of(Sublattice.trivial(space), dcl(space, [indicator(space, ["c0"])]))


class TestBandDecompose:
    def test_off_support(self):
        space = unit_space(3)
        C = dcl(space, [indicator(space, ["c0", "c2"])])
        f = step_function(space, {"c1": 5.0})
        f1, f2 = band_decompose(f, C)
        assert f1.values == {}
        assert f2.values == {"c1": 5.0}

    def test_inside_support(self):
        space = unit_space(3)
        C = dcl(space, [indicator(space, ["c0", "c2"])])
        f = step_function(space, {"c0": 1.0, "c2": -2.0})
        f1, f2 = band_decompose(f, C)
        assert f2.values == {}
        assert f1.values == f.values

    @pytest.mark.parametrize("seed", range(20))
    def test_sum_and_disjointness(self, seed):
        inst = random_instance(seed, 7)
        C = inst.chain[1]
        f = inst.functions[0]
        f1, f2 = band_decompose(f, C)
        assert function_close(f1 + f2, f, 0.0)
        assert norm(abs(f1).meet(abs(f2))) == 0.0


class TestCondExp:
    def test_masked_dependence_values(self):
        for p in (1.0, 2.0, 1.5, 3.0):
            fx = masked_dependence_example(p)
            assert function_close(cond_exp(fx.f, fx.C), fx.chi, 1e-12)
            assert function_close(cond_exp(fx.f, fx.B), fx.chi, 1e-12)
            assert function_close(cond_exp(fx.chi_top, fx.B), fx.chi_top, 1e-12)
            assert function_close(
                cond_exp(fx.chi_top, fx.C), (1.0 / 3.0) * fx.chi, 1e-12
            )

    def test_member_is_fixed(self):
        space = unit_space(3)
        C = dcl(space, [step_function(space, {"c0": 2.0, "c2": 1.0})])
        member = 3.0 * C.generators()[0]
        assert function_close(cond_exp(member, C), member, 1e-12)

    def test_density_profile_p1(self):
        # one block, profile (2, 1), unit weights, p=1: nu = (2, 1)
        # E(f) coefficient solves 3c = sum nu * f/w = 1, so E = (2/3, 1/3)
        space = unit_space(2, 1.0)
        C = Sublattice.make(space, [(("c0", "c1"), {"c0": 2.0, "c1": 1.0})])
        got = cond_exp(step_function(space, {"c0": 1.0}), C)
        assert function_close(
            got, step_function(space, {"c0": 2.0 / 3.0, "c1": 1.0 / 3.0}), 1e-12
        )

    @pytest.mark.parametrize("seed", range(40))
    def test_defining_property_per_block(self, seed):
        inst = random_instance(seed, 7)
        C = inst.chain[seed % 3]
        f = inst.functions[0]
        e = cond_exp(f, C)
        for k, block in enumerate(C.blocks):
            lhs = sum(C.nu(c) * e[c] / C.profile[c] for c in block)
            rhs = sum(C.nu(c) * f[c] / C.profile[c] for c in block)
            assert abs(lhs - rhs) <= 1e-9 * (1.0 + abs(rhs))

    @pytest.mark.parametrize("seed", range(40))
    def test_characterization(self, seed):
        inst = random_instance(seed, 7)
        C = inst.chain[seed % 3]
        f, g = inst.functions[0], inst.functions[1]
        ef = cond_exp(f, C)
        assert function_close(cond_exp(ef, C), ef, 1e-9)
        assert all(v >= -1e-12 for v in cond_exp(abs(f), C).values.values())
        assert norm(ef) <= norm(f) + 1e-9
        assert function_close(
            cond_exp(f - 0.5 * g, C), ef - 0.5 * cond_exp(g, C), 1e-9
        )
        _, f2 = band_decompose(f, C)
        assert norm(cond_exp(f2, C)) == 0.0

    @pytest.mark.parametrize("seed", range(20))
    def test_p2_orthogonality(self, seed):
        inst = random_instance(seed, 7, p=2.0)
        C = inst.chain[seed % 3]
        f = inst.functions[0]
        resid = f - cond_exp(f, C)
        for e in C.generators():
            inner = sum(inst.space.weight(c) * resid[c] * e[c] for c in e.values)
            assert abs(inner) <= 1e-9


class TestIntersection:
    def test_masked_dependence_intersection_trivial(self):
        fx = masked_dependence_example()
        got = lattice_intersection(fx.A, fx.C)
        assert got.dim == 0
        assert brute_intersection(fx.A, fx.C).dim == 0

    def test_self_intersection(self):
        space = unit_space(3)
        A = dcl(space, [step_function(space, {"c0": 2.0, "c2": 1.0})])
        assert lattice_intersection(A, A).equals(A)

    def test_disjoint_supports(self):
        space = unit_space(4)
        A = dcl(space, [indicator(space, ["c0", "c1"])])
        C = dcl(space, [indicator(space, ["c2", "c3"])])
        assert lattice_intersection(A, C).dim == 0

    def test_cycle_inconsistency_forces_zero(self):
        space = unit_space(2)
        A = Sublattice.make(space, [(("c0", "c1"), {"c0": 1.0, "c1": 1.0})])
        C = Sublattice.make(space, [(("c0", "c1"), {"c0": 1.0, "c1": 2.0})])
        assert lattice_intersection(A, C).dim == 0

    def test_contained_lattice(self):
        space = unit_space(3)
        A = Sublattice.make(
            space,
            [(("c0", "c1"), {"c0": 1.0, "c1": 2.0}), (("c2",), {"c2": 1.0})],
        )
        C = Sublattice.make(space, [(("c0", "c1", "c2"), {"c0": 1.0, "c1": 2.0, "c2": 3.0})])
        assert is_sublattice_of(C, A)
        assert lattice_intersection(A, C).equals(C)

    @pytest.mark.parametrize("seed", range(60))
    def test_agrees_with_linear_oracle(self, seed):
        inst = random_instance(seed, 6)
        A = dcl(inst.space, [inst.functions[0], inst.functions[1]])
        C = inst.chain[seed % 3]
        got = lattice_intersection(A, C)
        want = brute_intersection(A, C)
        assert got.equals(want, 1e-6), (seed, got, want)


class TestJoin:
    def test_masked_dependence_join_splits(self):
        fx = masked_dependence_example()
        joined = lattice_join(fx.A, fx.C)
        assert joined.dim == 3

    def test_join_self(self):
        space = unit_space(3)
        C = dcl(space, [step_function(space, {"c0": 2.0, "c2": 1.0})])
        assert lattice_join(C, C).equals(C)

    def test_join_with_trivial(self):
        space = unit_space(3)
        C = dcl(space, [step_function(space, {"c0": 2.0, "c2": 1.0})])
        assert lattice_join(C, Sublattice.trivial(space)).equals(C)


class TestIntersectsWell:
    def test_masked_dependence_does_not(self):
        fx = masked_dependence_example()
        assert not intersects_well(fx.A, fx.C)

    def test_contained_does(self):
        space = unit_space(4)
        constants = dcl(space, [indicator(space, space.ids())])
        halves = Sublattice.make(
            space,
            [
                (("c0", "c1"), {"c0": 1.0, "c1": 1.0}),
                (("c2", "c3"), {"c2": 1.0, "c3": 1.0}),
            ],
        )
        assert intersects_well(halves, constants)

    def test_disjoint_supports_do(self):
        space = unit_space(4)
        A = dcl(space, [indicator(space, ["c0"])])
        C = dcl(space, [indicator(space, ["c3"])])
        assert intersects_well(A, C)


class TestMemberSetClosure:
    @pytest.mark.parametrize("seed", range(20))
    def test_members_closed_under_lattice_ops(self, seed):
        inst = random_instance(seed, 6)
        C = inst.chain[seed % 3]
        if C.dim == 0:
            return
        rng = random.Random(seed)
        coeffs1 = [rng.choice((-2.0, -1.0, 0.5, 1.0, 3.0)) for _ in range(C.dim)]
        coeffs2 = [rng.choice((-2.0, -1.0, 0.5, 1.0, 3.0)) for _ in range(C.dim)]
        f, g = C.member(coeffs1), C.member(coeffs2)
        for h in (f + g, 2.5 * f, f.meet(g), f.join(g)):
            assert contains(C, h) is not None


class TestRepresentationInvariance:
    @pytest.mark.parametrize("seed", range(25))
    def test_cond_exp_transports(self, seed):
        inst = random_instance(seed, 6)
        rng = random.Random(seed)
        d = step_function(
            inst.space, {c: rng.choice((0.5, 1.0, 2.0, 4.0)) for c in inst.space.ids()}
        )
        dc = density_change(inst.space, d)
        C = inst.chain[seed % 3]
        Cd = C.density_push(dc)
        f = inst.functions[0]
        assert function_close(
            dc.push(cond_exp(f, C)), cond_exp(dc.push(f), Cd), 1e-9
        )
        assert is_sublattice_of(Cd, Cd)
        for g in C.generators():
            assert contains(Cd, dc.push(g)) is not None

    @pytest.mark.parametrize("seed", range(25))
    def test_dcl_join_intersection_transport(self, seed):
        inst = random_instance(seed, 6)
        rng = random.Random(seed ^ 0xD)
        d = step_function(
            inst.space, {c: rng.choice((0.5, 1.0, 2.0)) for c in inst.space.ids()}
        )
        dc = density_change(inst.space, d)
        f0, f1 = inst.functions[0], inst.functions[1]
        A = dcl(inst.space, [f0, f1])
        assert dcl(dc.target, [dc.push(f0), dc.push(f1)]).equals(
            A.density_push(dc), 1e-9
        )
        C = inst.chain[seed % 3]
        assert lattice_join(A, C).density_push(dc).equals(
            lattice_join(A.density_push(dc), C.density_push(dc)), 1e-9
        )
        assert lattice_intersection(A, C).density_push(dc).equals(
            lattice_intersection(A.density_push(dc), C.density_push(dc)), 1e-9
        )

    def test_mismatched_space_raises(self):
        fx = masked_dependence_example()
        other = unit_space(3)
        with pytest.raises(SpaceMismatch):
            cond_exp(indicator(other, ["c0"]), fx.C)
