import numpy as np
import pytest

from looptransform import sampling as rs
from looptransform.errors import ArgumentError, RefinementError
from looptransform.hoop_core import abelianize, loop, path, path_abelianize
from looptransform.lattice import Level
from looptransform.torus import CoeffFunction, TrigPoly, character, constant
from looptransform.transform import (
    CylinderFunction,
    LoopState,
    cylinder_inner_product,
    equivalent,
    include_coeffs,
    include_function,
    inverse_transform,
    loop_to_edge_state,
    loop_transform,
    path_transform,
    verify_chain,
    verify_diagram,
    wilson_character,
)


def random_cylinder(rng, n):
    L = rs.random_level(rng, n)
    return CylinderFunction(L, rs.random_trig_poly(rng, L.rank))


class TestCylinder:
    def test_rank_mismatch(self):
        with pytest.raises(ArgumentError):
            CylinderFunction(Level.full(2), character([1]))


class TestInclusion:
    def test_identity(self, rng):
        psi = random_cylinder(rng, 3)
        assert include_function(psi, psi.level) == psi

    def test_single_character(self):
        psi = CylinderFunction(Level(2, ((2, 1),)), character([3]))
        up = include_function(psi, Level.full(2))
        assert up.poly.coeffs == {(6, 3): 1}

    def test_function_side_formula(self, rng):
        # psi at level <(2,1)> evaluated at 2θ1 + θ2 equals the included function at θ
        psi = CylinderFunction(Level(2, ((2, 1),)), rs.random_trig_poly(rng, 1))
        up = include_function(psi, Level.full(2))
        for _ in range(20):
            t = rng.uniform(0, 2 * np.pi, size=2)
            assert abs(up(t) - psi([2 * t[0] + t[1]])) <= 1e-10

    def test_not_a_sublevel(self):
        psi = CylinderFunction(Level(2, ((1, 1),)), character([1]))
        with pytest.raises(RefinementError):
            include_function(psi, Level(2, ((2, 0), (0, 1))))

    def test_isometry(self, rng):
        for _ in range(300):
            fine = rs.random_level(rng, int(rng.integers(1, 5)))
            coarse, _ = rs.random_sublevel(rng, fine)
            psi = CylinderFunction(coarse, rs.random_trig_poly(rng, coarse.rank))
            assert abs(include_function(psi, fine).norm() - psi.norm()) <= 1e-12

    def test_include_coeffs_identity(self, rng):
        L = rs.random_level(rng, 3)
        c = CoeffFunction(L.rank, rs.random_trig_poly(rng, L.rank).coeffs)
        assert include_coeffs(c, L, L) == c


class TestDiagram:
    def test_identity(self, rng):
        psi = random_cylinder(rng, 3)
        assert verify_diagram(psi, psi.level) == 0

    def test_single_character(self):
        psi = CylinderFunction(Level(2, ((2, 1),)), character([1]))
        assert verify_diagram(psi, Level.full(2)) == 0

    def test_chains(self, rng):
        for _ in range(300):
            top = rs.random_level(rng, int(rng.integers(1, 5)))
            mid, _ = rs.random_sublevel(rng, top)
            low, _ = rs.random_sublevel(rng, mid)
            psi = CylinderFunction(low, rs.random_trig_poly(rng, low.rank))
            assert verify_chain(psi, mid, top) <= 1e-12
            assert verify_diagram(psi, top) <= 1e-12


class TestTransform:
    def test_wilson_character(self, theta, theta_basis):
        hoop = abelianize(loop(theta, "e2", "~e3"), theta_basis)
        psi = wilson_character(Level.full(2), hoop)
        assert loop_transform(psi, theta_basis).coeffs == {(1, -1): 1}

    def test_constant(self):
        assert loop_transform(CylinderFunction(Level.full(2), constant(1, 2))).coeffs == {(0, 0): 1}

    def test_level_embedding(self):
        psi = CylinderFunction(Level(2, ((2, 1),)), TrigPoly(1, {(1,): 3j}))
        assert loop_transform(psi).coeffs == {(2, 1): 3j}

    def test_basis_rank_mismatch(self, theta_basis):
        with pytest.raises(ArgumentError):
            loop_transform(CylinderFunction(Level.full(3), constant(1, 3)), theta_basis)

    def test_unitarity(self, rng):
        for _ in range(300):
            n = int(rng.integers(1, 5))
            psi, phi = random_cylinder(rng, n), random_cylinder(rng, n)
            lhs = loop_transform(psi).inner(loop_transform(phi))
            assert abs(lhs - cylinder_inner_product(psi, phi)) <= 1e-12

    def test_disjoint_images_are_orthogonal(self):
        psi = CylinderFunction(Level(2, ((2, 0),)), character([1]))
        phi = CylinderFunction(Level(2, ((0, 3),)), character([1]))
        assert cylinder_inner_product(psi, phi) == 0

    def test_equivalence_across_levels(self, rng):
        for _ in range(100):
            fine = rs.random_level(rng, 3)
            coarse, _ = rs.random_sublevel(rng, fine)
            psi = CylinderFunction(coarse, rs.random_trig_poly(rng, coarse.rank))
            up = include_function(psi, fine)
            assert equivalent(psi, up)
            assert loop_transform(psi) == loop_transform(up)


class TestInverse:
    def test_unit_at_zero(self):
        psi = inverse_transform(LoopState(2, {(0, 0): 1}))
        assert psi.level.rank == 0 and psi.poly.coeffs == {(): 1}

    def test_point_mass(self):
        psi = inverse_transform(LoopState(2, {(2, 4): 1}))
        assert loop_transform(psi).coeffs == {(2, 4): 1}
        assert len(psi.poly.coeffs) == 1

    def test_two_hoops(self):
        state = LoopState(2, {(1, 0): 1, (1, 1): 1j})
        assert loop_transform(inverse_transform(state)) == state

    def test_empty_support(self):
        psi = inverse_transform(LoopState(3, {}))
        assert psi.level.rank == 0 and psi.poly.coeffs == {}

    def test_round_trips(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 5))
            state = LoopState(n, {rs.random_hoop(rng, n): complex(*rng.standard_normal(2)) for _ in range(4)})
            assert loop_transform(inverse_transform(state)) == state
            psi = random_cylinder(rng, n)
            assert equivalent(inverse_transform(loop_transform(psi)), psi)

    def test_injective(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 4))
            a = LoopState(n, {rs.random_hoop(rng, n): 1.0 for _ in range(3)})
            b = LoopState(n, {rs.random_hoop(rng, n): 1.0 for _ in range(3)})
            if a != b:
                assert not equivalent(inverse_transform(a), inverse_transform(b))


class TestPaths:
    def test_constant(self, theta):
        psi = CylinderFunction(Level.full(3), constant(1, 3))
        assert path_transform(psi, theta).coeffs == {(0, 0, 0): 1}

    def test_single_edge_path(self, theta):
        e = path_abelianize(path(theta, "e2"))
        psi = CylinderFunction(Level.full(3), TrigPoly(3, {e: 1}))
        assert path_transform(psi, theta).coeffs == {(0, 1, 0): 1}

    def test_edge_count_mismatch(self, theta):
        with pytest.raises(ArgumentError):
            path_transform(CylinderFunction(Level.full(2), constant(1, 2)), theta)

    def test_overlapping_paths_closing_into_loops(self, theta, theta_basis):
        p, q = path(theta, "e1"), path(theta, "~e2", start="v1")
        closed = p * q
        hoop = abelianize(closed, theta_basis)
        psi_loop = CylinderFunction(Level(2, (hoop,)), character([1]))
        via_loop = loop_to_edge_state(loop_transform(psi_loop, theta_basis), theta_basis)
        edge = path_abelianize(closed)
        via_path = path_transform(CylinderFunction(Level(3, (edge,)), character([1])), theta)
        assert via_loop == via_path
