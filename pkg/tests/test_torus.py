import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from looptransform.errors import AliasingError, ArgumentError
from looptransform.torus import (
    TrigPoly,
    add,
    character,
    conj,
    constant,
    eval_at,
    fft_oracle,
    fourier,
    grid_average,
    haar_integral,
    inner_product,
    inverse_fourier,
    mul,
    scale,
    zero,
)

from strategies import poly_pairs, trig_polys


def direct_eval(p, theta):
    """Oracle: plain Python sum of characters."""
    return sum(c * cmath.exp(1j * sum(a * b for a, b in zip(k, theta))) for k, c in p.coeffs.items())


def riemann_coefficient(p, k, n):
    """Oracle: explicit quadrature of ``conj(χ_k) p`` on an n-point grid per axis."""
    total = 0j
    for idx in itertools.product(range(n), repeat=p.dim):
        theta = [2 * math.pi * j / n for j in idx]
        total += direct_eval(p, theta) * cmath.exp(-1j * sum(a * b for a, b in zip(k, theta)))
    return total / n**p.dim


class TestAlgebra:
    def test_pruning(self):
        assert TrigPoly(1, {(1,): 1e-16, (2,): 1.0}).support == [(2,)]

    def test_operators(self):
        p = character([1])
        assert (p + p).coeffs == {(1,): 2}
        assert (p - p).coeffs == {}
        assert (2 * p).coeffs == {(1,): 2}
        assert (p * p).coeffs == {(2,): 1}
        assert (p / 2).coeffs == {(1,): 0.5}
        assert (-p).coeffs == {(1,): -1}
        assert (1 + p).coeffs == {(0,): 1, (1,): 1}

    def test_dim_mismatch(self):
        for op in (add, mul, inner_product):
            with pytest.raises(ArgumentError):
                op(character([1]), character([1, 0]))

    def test_conj(self):
        p = TrigPoly(1, {(2,): 1 + 2j})
        assert conj(p).coeffs == {(-2,): 1 - 2j}

    @given(poly_pairs())
    def test_product_is_pointwise(self, pq):
        p, q = pq
        theta = np.linspace(0.1, 2.0, p.dim)
        assert abs(eval_at(mul(p, q), theta) - eval_at(p, theta) * eval_at(q, theta)) <= 1e-10 * (
            1 + p.norm() * q.norm() * 36
        )


class TestIntegral:
    def test_examples(self):
        assert haar_integral(constant(1, 2)) == 1
        assert haar_integral(character([3, -1])) == 0
        p = 1 + character([1])
        assert haar_integral(mul(conj(p), p)) == 2

    @settings(max_examples=200)
    @given(poly_pairs())
    def test_parseval(self, pq):
        p, q = pq
        fp, fq = fourier(p), fourier(q)
        coeff_side = sum((fp[k].conjugate() * c for k, c in fq.coeffs.items()), 0j)
        assert abs(haar_integral(mul(conj(p), q)) - coeff_side) <= 1e-12 * (1 + p.norm() * q.norm())
        assert abs(inner_product(p, q) - coeff_side) <= 1e-12 * (1 + p.norm() * q.norm())

    def test_inner_product_is_conjugate_linear_in_first(self):
        p, q = character([1]), character([1])
        assert inner_product(scale(p, 1j), q) == -1j

    @given(trig_polys(bound=4))
    def test_quadrature(self, p):
        assert abs(grid_average(p, 9) - haar_integral(p)) <= 1e-9 * (1 + p.norm())


class TestEval:
    def test_examples(self):
        assert eval_at(constant(1, 1), [0.3]) == 1
        assert abs(eval_at(character([1]), [math.pi]) + 1) <= 1e-15
        assert eval_at(2 + character([1]) + character([-1]), [0.0]) == 4

    def test_stack(self, rng):
        p = TrigPoly(2, {(1, 2): 1j, (0, -1): 2.0})
        pts = rng.uniform(0, 2 * np.pi, size=(5, 3, 2))
        vals = eval_at(p, pts)
        assert vals.shape == (5, 3)
        assert abs(vals[2, 1] - direct_eval(p, pts[2, 1])) <= 1e-12

    def test_wrong_length(self):
        with pytest.raises(ArgumentError):
            eval_at(character([1, 2]), [0.0])

    def test_zero_dimensional(self):
        assert eval_at(constant(3j, 0), []) == 3j

    @given(trig_polys())
    def test_matches_direct_sum(self, p):
        theta = [0.4 * (j + 1) for j in range(p.dim)]
        assert abs(eval_at(p, theta) - direct_eval(p, theta)) <= 1e-11 * (1 + sum(abs(c) for c in p.coeffs.values()))


class TestFourier:
    def test_round_trip(self):
        p = TrigPoly(2, {(1, -1): 2j})
        assert inverse_fourier(fourier(p)) == p

    def test_pure_tone(self):
        got = fft_oracle(character([1]), 5)
        assert got.max_difference(fourier(character([1]))) <= 1e-12

    def test_constant_grid_3(self):
        got = fft_oracle(constant(1, 1), 3)
        assert got.max_difference(fourier(constant(1, 1))) <= 1e-15

    def test_two_dim_sweep(self, rng):
        for _ in range(50):
            coeffs = {tuple(rng.integers(-3, 4, size=2)): complex(*rng.standard_normal(2)) for _ in range(6)}
            p = TrigPoly(2, coeffs)
            assert fft_oracle(p, (9, 9)).max_difference(fourier(p)) <= 1e-9

    def test_against_explicit_quadrature(self, rng):
        p = TrigPoly(2, {(1, -2): 1 + 1j, (0, 2): -0.5, (-2, 0): 2j})
        got = fft_oracle(p, 5)
        for k in itertools.product(range(-2, 3), repeat=2):
            assert abs(got[k] - riemann_coefficient(p, k, 5)) <= 1e-12

    def test_aliasing_refused(self):
        with pytest.raises(AliasingError):
            fft_oracle(character([3]), 5)
        with pytest.raises(AliasingError):
            fft_oracle(character([0, 2]), (9, 3))

    def test_even_grid_rejected(self):
        with pytest.raises(ArgumentError):
            fft_oracle(character([1]), 6)

    @given(trig_polys(bound=5), st.integers(0, 2))
    def test_oracle_equivalence(self, p, pad):
        grid = [2 * b + 1 + 2 * pad for b in p.axis_bandwidth()]
        assert fft_oracle(p, grid).max_difference(fourier(p)) <= 1e-9 * (1 + p.norm())

    def test_zero_poly(self):
        assert fft_oracle(zero(2), 1).coeffs == {}
