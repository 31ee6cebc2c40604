"""Randomized verification sweeps.

Each suite draws its inputs from a seeded generator and returns a list of
:class:`Check` records (worst residual seen, tolerance, verdict).  The CLI
``selftest`` command and the acceptance tests both run these.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import sampling as rs
from .hoop_core import (
    abelianize,
    generator_power_word,
    kernel_test,
    path_abelianize,
    spanning_tree_generators,
)
from .holonomy import (
    SU2_TAG,
    U1,
    U1_TAG,
    holonomy,
    interpolate,
    mandelstam_check,
    random_connection,
    random_su2,
    random_u1,
)
from .lattice import Level, matmul, refinement_matrix
from .positivity import (
    MeasureDensity,
    box_window,
    density_from_functional,
    functional_from_density,
    grid_positivity_test,
    psd_test,
    square_modulus,
)
from .torus import character, conj, eval_at, fft_oracle, fourier, haar_integral, mul
from .transform import (
    CylinderFunction,
    LoopState,
    cylinder_inner_product,
    include_function,
    inverse_transform,
    loop_to_edge_state,
    loop_transform,
    path_transform,
    verify_chain,
    verify_diagram,
)


@dataclass
class Check:
    """One verdict.  ``kind`` is ``"max"`` for residuals bounded above by
    ``tol``, ``"min"`` for values bounded below, ``"bool"`` for exact checks."""

    name: str
    value: Any
    tol: float | None
    passed: bool
    kind: str = "bool"

    @classmethod
    def at_most(cls, name: str, value: float, tol: float) -> Check:
        return cls(name, float(value), tol, bool(value <= tol), "max")

    @classmethod
    def at_least(cls, name: str, value: float, tol: float) -> Check:
        return cls(name, float(value), tol, bool(value >= tol), "min")

    @classmethod
    def holds(cls, name: str, ok: bool, value: Any = None) -> Check:
        return cls(name, bool(ok) if value is None else value, None, bool(ok))

    def with_tol(self, tol: float) -> Check:
        """Re-judge a residual check against a different tolerance."""
        if self.kind != "max":
            return self
        return Check.at_most(self.name, self.value, tol)

    def to_json(self) -> dict:
        value = self.value
        if isinstance(value, float) and not math.isfinite(value):
            value = None
        return {"check": self.name, "value": value, "pass": self.passed, "tol": self.tol}


def scaled(base: int, trials: int) -> int:
    """Trial count for a suite whose nominal size is ``base`` at 1000 trials."""
    return max(1, round(base * trials / 1000))


def unitarity(rng, trials: int = 1000) -> list[Check]:
    worst = 0.0
    for _ in range(trials):
        g = rs.random_graph(rng, max_edges=10)
        basis = spanning_tree_generators(g)
        n = basis.rank
        psi = CylinderFunction(L := rs.random_level(rng, n), rs.random_trig_poly(rng, L.rank))
        phi = CylinderFunction(M := rs.random_level(rng, n), rs.random_trig_poly(rng, M.rank))
        lhs = loop_transform(psi, basis).inner(loop_transform(phi, basis))
        worst = max(worst, abs(lhs - cylinder_inner_product(psi, phi)))
    return [Check.at_most("unitarity.max_residual", worst, 1e-12)]


def inclusion(rng, trials: int = 1000, chains: int = 200) -> list[Check]:
    norm_gap = diagram_gap = eval_gap = 0.0
    k_exact = True
    for _ in range(trials):
        n = int(rng.integers(1, 6))
        fine = rs.random_level(rng, n)
        coarse, K = rs.random_sublevel(rng, fine)
        k_exact &= refinement_matrix(coarse, fine) == K
        psi = CylinderFunction(coarse, rs.random_trig_poly(rng, coarse.rank))
        up = include_function(psi, fine)
        norm_gap = max(norm_gap, abs(up.norm() - psi.norm()))
        diagram_gap = max(diagram_gap, verify_diagram(psi, fine))
        theta = rng.uniform(0, 2 * np.pi, size=fine.rank)
        pulled = np.array(K, dtype=float).reshape(fine.rank, coarse.rank).T @ theta
        eval_gap = max(eval_gap, abs(eval_at(up.poly, theta) - eval_at(psi.poly, pulled)))

    chain_gap = 0.0
    consistent = True
    for _ in range(chains):
        n = int(rng.integers(1, 6))
        top = rs.random_level(rng, n)
        mid, K2 = rs.random_sublevel(rng, top)
        low, K1 = rs.random_sublevel(rng, mid)
        K_direct = refinement_matrix(low, top)
        K_mid_top = refinement_matrix(mid, top)
        K_low_mid = refinement_matrix(low, mid)
        consistent &= K_mid_top == K2 and K_low_mid == K1
        consistent &= K_direct == _compose(K_mid_top, K_low_mid, top.rank)
        consistent &= refinement_matrix(low, low) == Level.full(low.rank).basis
        psi = CylinderFunction(low, rs.random_trig_poly(rng, low.rank))
        chain_gap = max(
            chain_gap,
            verify_chain(psi, mid, top),
            verify_diagram(psi, mid),
            verify_diagram(include_function(psi, mid), top),
            verify_diagram(psi, top),
        )
    return [
        Check.holds("inclusion.refinement_matrix_recovered", k_exact),
        Check.at_most("inclusion.isometry_residual", norm_gap, 1e-12),
        Check.at_most("inclusion.diagram_residual", diagram_gap, 1e-12),
        Check.at_most("inclusion.point_evaluation_residual", eval_gap, 1e-10),
        Check.at_most("inclusion.chain_residual", chain_gap, 1e-12),
        Check.holds("inclusion.two_step_consistency_exact", consistent),
    ]


def _compose(A, B, rows: int):
    if not B or not B[0]:
        return tuple(() for _ in range(rows))
    return matmul(A, B)


def kernel(rng, trials: int = 500, connections: int = 100) -> list[Check]:
    max_dev = 0.0
    all_in_kernel = True
    for _ in range(trials):
        g = rs.random_graph(rng, max_edges=8, min_rank=1)
        basis = spanning_tree_generators(g)
        loops = [rs.random_loop(rng, g, max_length=5) for _ in range(int(rng.integers(1, 4)))]
        exps = rs.zero_sum_exponents(rng, len(loops), int(rng.integers(2, 5)))
        w = generator_power_word(exps, loops)
        all_in_kernel &= kernel_test(w, basis)
        for _ in range(connections):
            A = random_connection(rng, g, U1_TAG)
            max_dev = max(max_dev, abs(holonomy(A, w).value - 1.0))

    all_rejected = True
    exponents_match = True
    min_witness = math.inf
    for _ in range(trials):
        g = rs.random_graph(rng, max_edges=8, min_rank=1)
        basis = spanning_tree_generators(g)
        exps = rs.nonzero_sum_exponents(rng, basis.rank, int(rng.integers(1, 5)))
        w = generator_power_word(exps, list(basis.generators))
        all_rejected &= not kernel_test(w, basis)
        v = abelianize(w, basis)
        exponents_match &= list(v) == [sum(row) for row in exps]
        k = next(i for i, x in enumerate(v) if x)
        targets = [U1.identity()] * basis.rank
        targets[k] = U1(math.pi / v[k])
        A = interpolate(basis, targets)
        min_witness = min(min_witness, abs(holonomy(A, w).value - 1.0))
    return [
        Check.holds("kernel.zero_sums_pass_kernel_test", all_in_kernel),
        Check.at_most("kernel.zero_sums_holonomy_residual", max_dev, 1e-10),
        Check.holds("kernel.nonzero_sums_fail_kernel_test", all_rejected),
        Check.holds("kernel.abelianization_equals_row_sums", exponents_match),
        Check(
            "kernel.witness_min_deviation", float(min_witness), 0.1, bool(min_witness > 0.1), "min"
        ),
    ]


def interpolation(rng, trials: int = 500) -> list[Check]:
    out = []
    for group, draw in ((U1_TAG, random_u1), (SU2_TAG, random_su2)):
        worst = 0.0
        for _ in range(trials):
            g = rs.random_graph(rng, max_edges=10, min_rank=1)
            basis = spanning_tree_generators(g)
            targets = [draw(rng) for _ in range(basis.rank)]
            A = interpolate(basis, targets)
            for b, t in zip(basis.generators, targets):
                worst = max(worst, holonomy(A, b).distance(t))
        out.append(Check.at_most(f"interpolation.{group}_max_error", worst, 1e-12))
    return out


def mandelstam(rng, trials: int = 1000) -> list[Check]:
    worst = 0.0
    for _ in range(trials):
        g = rs.random_graph(rng, max_edges=8)
        A = random_connection(rng, g, SU2_TAG)
        a = rs.random_loop(rng, g)
        b = rs.random_loop(rng, g)
        worst = max(worst, mandelstam_check(A, a, b))
    return [Check.at_most("mandelstam.max_residual", worst, 1e-10)]


def fourier_checks(rng, trials: int = 500, pairs: int = 1000) -> list[Check]:
    worst_fft = 0.0
    for _ in range(trials):
        dim = int(rng.integers(1, 4))
        p = rs.random_trig_poly(rng, dim, bandwidth=int(rng.integers(0, 6)))
        grid = [2 * b + 1 + 2 * int(rng.integers(0, 2)) for b in p.axis_bandwidth()]
        worst_fft = max(worst_fft, fft_oracle(p, grid).max_difference(fourier(p)))
    worst_parseval = 0.0
    for _ in range(pairs):
        dim = int(rng.integers(1, 4))
        p = rs.random_trig_poly(rng, dim, bandwidth=5)
        q = rs.random_trig_poly(rng, dim, bandwidth=5)
        fp, fq = fourier(p), fourier(q)
        coeff_side = sum((fp.coeffs[k].conjugate() * c for k, c in fq.coeffs.items() if k in fp.coeffs), 0j)
        worst_parseval = max(worst_parseval, abs(haar_integral(mul(conj(p), q)) - coeff_side))
    return [
        Check.at_most("fourier.fft_oracle_max_error", worst_fft, 1e-9),
        Check.at_most("fourier.parseval_residual", worst_parseval, 1e-12),
    ]


def bochner(rng, trials: int = 500, windows_per_density: int = 6) -> list[Check]:
    roundtrip = True
    min_eig = math.inf
    min_grid = math.inf
    for _ in range(trials):
        dim = int(rng.integers(1, 3))
        q = rs.random_trig_poly(rng, dim, bandwidth=2, terms=int(rng.integers(1, 5)))
        p = MeasureDensity(square_modulus(q))
        ell = functional_from_density(p)
        roundtrip &= density_from_functional(ell).density == p.density
        band = max(p.density.bandwidth(), 1)
        wins = [box_window(dim, min(band, 5 if dim == 1 else 1))]
        for _ in range(windows_per_density):
            size = int(rng.integers(1, 7))
            pts = {tuple(int(x) for x in rng.integers(-band, band + 1, size=dim)) for _ in range(size)}
            wins.append(sorted(pts))
        for win in wins:
            min_eig = min(min_eig, psd_test(ell, win))
        min_grid = min(min_grid, grid_positivity_test(p, 2 * band + 1 + 16))

    signed = MeasureDensity(character([1]) + character([-1]))
    signed_eig = psd_test(functional_from_density(signed), [(0,), (1,)])
    signed_grid = grid_positivity_test(signed, 65)
    return [
        Check.holds("bochner.roundtrip_exact", roundtrip),
        Check.at_least("bochner.nonnegative_min_eigenvalue", min_eig, -1e-9),
        Check.at_least("bochner.nonnegative_grid_minimum", min_grid, -1e-9),
        Check.at_most("bochner.signed_min_eigenvalue_error", abs(signed_eig + 1.0), 1e-9),
        Check.at_most("bochner.signed_grid_minimum_error", abs(signed_grid + 2.0), 1e-9),
    ]


def inverse(rng, trials: int = 500) -> list[Check]:
    states_exact = True
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        support = {rs.random_hoop(rng, n): complex(*rng.standard_normal(2)) for _ in range(int(rng.integers(0, 6)))}
        ell = LoopState(n, support)
        states_exact &= loop_transform(inverse_transform(ell)) == ell
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        L = rs.random_level(rng, n)
        psi = CylinderFunction(L, rs.random_trig_poly(rng, L.rank))
        back = inverse_transform(loop_transform(psi))
        top = Level.spanned_by(n, L.basis + back.level.basis)
        gap = include_function(psi, top).poly.max_difference(include_function(back, top).poly)
        worst = max(worst, gap)
    return [
        Check.holds("inverse.forward_after_inverse_exact", states_exact),
        Check.at_most("inverse.inverse_after_forward_residual", worst, 0.0),
    ]


def paths(rng, trials: int = 300) -> list[Check]:
    kernel_zero = True
    factor_ok = True
    worst = 0.0
    for _ in range(trials):
        g = rs.random_graph(rng, max_edges=8, min_rank=1)
        basis = spanning_tree_generators(g)
        at = g.vertices[int(rng.integers(0, len(g.vertices)))]
        closed = [rs.random_loop(rng, g, max_length=5, at=at) for _ in range(int(rng.integers(1, 4)))]
        exps = rs.zero_sum_exponents(rng, len(closed), int(rng.integers(2, 5)))
        kernel_zero &= not any(path_abelianize(generator_power_word(exps, closed)))

        loops = [rs.random_loop(rng, g, max_length=6) for _ in range(int(rng.integers(1, 4)))]
        C = basis.edge_matrix()
        for a in loops:
            factor_ok &= path_abelianize(a) == _apply(C, abelianize(a, basis))
        chord_level = Level.spanned_by(basis.rank, [abelianize(a, basis) for a in loops])
        edge_level = Level(len(g.edges), tuple(_apply(C, u) for u in chord_level.basis))
        poly = rs.random_trig_poly(rng, chord_level.rank)
        via_loops = loop_to_edge_state(loop_transform(CylinderFunction(chord_level, poly), basis), basis)
        via_paths = path_transform(CylinderFunction(edge_level, poly), g)
        worst = max(worst, via_loops.max_difference(via_paths))
    return [
        Check.holds("paths.kernel_words_have_zero_edge_exponents", kernel_zero),
        Check.holds("paths.edge_exponents_factor_through_hoops", factor_ok),
        Check.at_most("paths.loop_vs_path_transform_residual", worst, 1e-12),
    ]


def _apply(M, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


# name -> (runner taking (rng, trials), runtime budget in seconds)
CRITERIA: dict[str, tuple[Callable[[Any, int], list[Check]], float]] = {
    "unitarity": (lambda rng, t: unitarity(rng, scaled(1000, t)), 30.0),
    "inclusion": (lambda rng, t: inclusion(rng, scaled(1000, t), scaled(200, t)), 30.0),
    "kernel": (lambda rng, t: kernel(rng, scaled(500, t)), 60.0),
    "interpolation": (lambda rng, t: interpolation(rng, scaled(500, t)), 10.0),
    "mandelstam": (lambda rng, t: mandelstam(rng, scaled(1000, t)), 10.0),
    "fourier": (lambda rng, t: fourier_checks(rng, scaled(500, t), scaled(1000, t)), 30.0),
    "bochner": (lambda rng, t: bochner(rng, scaled(500, t)), 30.0),
    "inverse": (lambda rng, t: inverse(rng, scaled(500, t)), 10.0),
    "paths": (lambda rng, t: paths(rng, scaled(300, t)), 10.0),
}


def run_criterion(name: str, seed: int = rs.DEFAULT_SEED, trials: int = 1000) -> tuple[list[Check], float]:
    """Run one suite with its own generator; return checks and elapsed seconds."""
    runner, _ = CRITERIA[name]
    rng = rs.rng_from(seed)
    start = time.perf_counter()
    checks = runner(rng, trials)
    return checks, time.perf_counter() - start
