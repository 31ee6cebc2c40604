import cmath
import math

import numpy as np
import pytest

from looptransform import sampling as rs
from looptransform.errors import ArgumentError, StructuralError
from looptransform.holonomy import (
    SU2,
    SU2_TAG,
    U1,
    U1_TAG,
    Connection,
    conjugation_invariance_check,
    holonomy,
    interpolate,
    mandelstam_check,
    random_connection,
    random_su2,
    random_u1,
    wilson,
)
from looptransform.hoop_core import (
    Graph,
    abelianize,
    compose,
    constant_loop,
    loop,
    power,
    reduce,
    spanning_tree_generators,
)


def matrix_holonomy(A, w):
    """Oracle: plain matrix products with explicit inverses."""
    m = np.eye(2, dtype=complex)
    for e, s in w.steps:
        u = np.array(A[e].matrix)
        m = m @ (u if s == 1 else np.linalg.inv(u))
    return m


class TestElements:
    def test_u1_angles_wrap(self):
        assert U1(3 * math.pi).angle == pytest.approx(math.pi)
        assert U1(-0.5).angle == pytest.approx(2 * math.pi - 0.5)

    def test_su2_projection(self, rng):
        for _ in range(100):
            m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            assert SU2(m).unitarity_defect() <= 1e-12

    def test_random_su2_is_special_unitary(self, rng):
        assert max(random_su2(rng).unitarity_defect() for _ in range(500)) <= 1e-12

    def test_su2_is_read_only(self):
        g = SU2.identity()
        with pytest.raises(ValueError):
            g.matrix[0, 0] = 2


class TestHolonomy:
    def test_constant_loop(self, theta, rng):
        for group in (U1_TAG, SU2_TAG):
            A = random_connection(rng, theta, group)
            assert holonomy(A, constant_loop(theta)).distance(
                U1.identity() if group == U1_TAG else SU2.identity()
            ) == 0

    def test_double_edge(self):
        g = Graph.from_edges([("e", "s", "s")])
        A = Connection(g, {"e": U1(0.7)})
        assert holonomy(A, loop(g, "e", "e")).angle == pytest.approx(1.4, abs=1e-15)

    def test_theta_example(self, theta):
        A = Connection(theta, {"e1": U1(0.0), "e2": U1(math.pi / 2), "e3": U1(math.pi)})
        assert abs(holonomy(A, loop(theta, "e2", "~e1")).value - 1j) <= 1e-15

    def test_multiplicative(self, rng):
        worst_u1 = worst_su2 = 0.0
        for _ in range(1000):
            g = rs.random_graph(rng, max_edges=8)
            a, b = rs.random_loop(rng, g), rs.random_loop(rng, g)
            A = random_connection(rng, g, U1_TAG)
            lhs, rhs = holonomy(A, compose(a, b)), holonomy(A, a) * holonomy(A, b)
            worst_u1 = max(worst_u1, lhs.distance(rhs))
            B = random_connection(rng, g, SU2_TAG)
            worst_su2 = max(worst_su2, holonomy(B, compose(a, b)).distance(holonomy(B, a) * holonomy(B, b)))
        assert worst_u1 <= 1e-12
        assert worst_su2 <= 1e-10

    def test_reduction_invariant(self, rng):
        for _ in range(300):
            g = rs.random_graph(rng, max_edges=8)
            w = rs.random_loop(rng, g, reduced=False)
            B = random_connection(rng, g, SU2_TAG)
            assert holonomy(B, w).distance(holonomy(B, reduce(w))) <= 1e-12

    def test_su2_against_matrix_oracle(self, rng):
        for _ in range(200):
            g = rs.random_graph(rng, max_edges=8)
            w = rs.random_loop(rng, g)
            B = random_connection(rng, g, SU2_TAG)
            assert np.max(np.abs(holonomy(B, w).matrix - matrix_holonomy(B, w))) <= 1e-12

    def test_wrong_graph(self, theta, figure_eight, rng):
        with pytest.raises(StructuralError):
            holonomy(random_connection(rng, theta), constant_loop(figure_eight))

    def test_incomplete_assignment(self, theta):
        with pytest.raises(StructuralError):
            Connection(theta, {"e1": U1(0.0)})

    def test_mixed_element_types(self, theta):
        with pytest.raises(ArgumentError):
            Connection(theta, {"e1": U1(0.0), "e2": SU2.identity(), "e3": U1(1.0)})


class TestWilson:
    def test_constant_loop_is_unit(self, theta, rng):
        for group in (U1_TAG, SU2_TAG):
            assert wilson(random_connection(rng, theta, group), constant_loop(theta)) == pytest.approx(1)

    def test_su2_diagonal(self):
        g = Graph.from_edges([("e", "s", "s")])
        phi = 0.9
        A = Connection(g, {"e": SU2(np.diag([cmath.exp(1j * phi), cmath.exp(-1j * phi)]))}, SU2_TAG)
        assert abs(wilson(A, loop(g, "e")) - math.cos(phi)) <= 1e-15

    def test_bounded(self, rng):
        for _ in range(200):
            g = rs.random_graph(rng)
            w = rs.random_loop(rng, g)
            assert abs(wilson(random_connection(rng, g, SU2_TAG), w)) <= 1 + 1e-12

    def test_abelian_factorization(self, rng):
        for _ in range(300):
            g = rs.random_graph(rng, max_edges=9, min_rank=1)
            basis = spanning_tree_generators(g)
            targets = [random_u1(rng) for _ in range(basis.rank)]
            A = interpolate(basis, targets)
            w = rs.random_loop(rng, g)
            v = abelianize(w, basis)
            expected = cmath.exp(1j * math.fsum(k * t.angle for k, t in zip(v, targets)))
            assert abs(wilson(A, w) - expected) <= 1e-12


class TestInterpolate:
    def test_identity_targets(self, theta_basis, rng):
        A = interpolate(theta_basis, [U1.identity()] * 2)
        for _ in range(20):
            assert wilson(A, rs.random_loop(rng, theta_basis.graph)) == 1

    def test_theta_example(self, theta_basis):
        A = interpolate(theta_basis, [U1(math.pi / 2), U1(math.pi)])
        assert [A[e].angle for e in ("e1", "e2", "e3")] == [0.0, math.pi / 2, math.pi]
        b1, b2 = theta_basis.generators
        assert abs(holonomy(A, b1).value - 1j) <= 1e-15
        assert abs(holonomy(A, b2).value + 1) <= 1e-15

    def test_su2_targets(self, theta_basis, rng):
        targets = [random_su2(rng), random_su2(rng)]
        A = interpolate(theta_basis, targets)
        for b, t in zip(theta_basis.generators, targets):
            assert holonomy(A, b).distance(t) <= 1e-12

    def test_length_mismatch(self, theta_basis):
        with pytest.raises(ArgumentError):
            interpolate(theta_basis, [U1(0.0)])

    def test_mixed_targets(self, theta_basis):
        with pytest.raises(ArgumentError):
            interpolate(theta_basis, [U1(0.0), SU2.identity()])


class TestMandelstam:
    def test_trivial(self, theta, rng):
        A = random_connection(rng, theta, SU2_TAG)
        assert mandelstam_check(A, constant_loop(theta), constant_loop(theta)) <= 1e-15

    def test_cayley_hamilton(self, rng):
        for _ in range(200):
            g = rs.random_graph(rng)
            A = random_connection(rng, g, SU2_TAG)
            a = rs.random_loop(rng, g)
            T = wilson(A, a)
            assert abs(2 * T * T - wilson(A, power(a, 2)) - 1) <= 1e-12
            assert mandelstam_check(A, a, a) <= 1e-12

    def test_u1_rejected(self, theta, rng):
        with pytest.raises(ArgumentError):
            mandelstam_check(random_connection(rng, theta), constant_loop(theta), constant_loop(theta))


class TestConjugation:
    def test_identity_gauge(self, theta, rng):
        A = random_connection(rng, theta, SU2_TAG)
        w = loop(theta, "e2", "~e3")
        assert conjugation_invariance_check(A, SU2.identity(), w) <= 1e-15

    def test_u1_exact(self, theta, rng):
        A = random_connection(rng, theta)
        assert conjugation_invariance_check(A, random_u1(rng), loop(theta, "e2", "~e3")) == 0

    def test_su2_sweep(self, rng):
        worst = 0.0
        for _ in range(300):
            g = rs.random_graph(rng)
            A = random_connection(rng, g, SU2_TAG)
            worst = max(worst, conjugation_invariance_check(A, random_su2(rng), rs.random_loop(rng, g)))
        assert worst <= 1e-10
