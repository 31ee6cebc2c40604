"""Measures on the torus given by densities, and functionals on characters.

A measure ``dμ = p dμ₀`` with ``p`` a real trigonometric polynomial pairs
with the character ``χ_k`` as ``∫ conj(χ_k) dμ = p̂(k)``.  Positivity of the
measure is checked two ways, reported separately: the Toeplitz-type matrix
``[ℓ(k_i - k_j)]`` over a finite window, and the minimum of ``p`` itself.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError
from .torus import LatticeFunction, TrigPoly, haar_integral, mul, sample

HERMITIAN_TOL = 1e-14
POSITIVITY_TOL = 1e-9


def hermitian_defect(f: LatticeFunction) -> float:
    """``max |f(-k) - conj f(k)|`` over the support."""
    return max(
        (abs(f[tuple(-x for x in k)] - c.conjugate()) for k, c in f.coeffs.items()),
        default=0.0,
    )


@dataclass(frozen=True)
class MeasureDensity:
    """The signed measure ``p dμ₀``; ``p`` must be real-valued."""

    density: TrigPoly

    def __post_init__(self):
        if hermitian_defect(self.density) > HERMITIAN_TOL:
            raise ArgumentError("density coefficients are not Hermitian (p is not real)")

    @property
    def dim(self) -> int:
        return self.density.dim

    def mass(self) -> float:
        return haar_integral(self.density).real


class CharacterFunctional(LatticeFunction):
    """Values ``ℓ(χ_k)`` of a functional on the characters of ``U(1)^dim``."""


def functional_from_density(p: MeasureDensity) -> CharacterFunctional:
    if not isinstance(p, MeasureDensity):
        p = MeasureDensity(p)
    return CharacterFunctional(p.dim, p.density.coeffs)


def density_from_functional(ell: CharacterFunctional) -> MeasureDensity:
    if hermitian_defect(ell) > HERMITIAN_TOL:
        raise ArgumentError("functional is not Hermitian; no real measure induces it")
    return MeasureDensity(TrigPoly(ell.dim, ell.coeffs))


def psd_matrix(ell: LatticeFunction, window: Sequence[Sequence[int]]) -> np.ndarray:
    pts = [tuple(int(x) for x in k) for k in window]
    n = len(pts)
    M = np.empty((n, n), dtype=complex)
    for i, a in enumerate(pts):
        for j, b in enumerate(pts):
            M[i, j] = ell[tuple(x - y for x, y in zip(a, b))]
    return M


def psd_test(ell: LatticeFunction, window: Sequence[Sequence[int]]) -> float:
    """Smallest eigenvalue of ``M[i, j] = ℓ(k_i - k_j)`` over the window."""
    if not len(window):
        return math.inf
    M = psd_matrix(ell, window)
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0])


def box_window(dim: int, size: int) -> list[tuple[int, ...]]:
    """All points of ``{0, ..., size}^dim``."""
    return list(itertools.product(range(size + 1), repeat=dim))


def _real_parts(p: TrigPoly):
    ks = np.array(list(p.coeffs), dtype=float).reshape(len(p.coeffs), p.dim)
    cs = np.array(list(p.coeffs.values()), dtype=complex)

    def value(t):
        return float(np.real(np.exp(1j * (ks @ t)) @ cs))

    def grad(t):
        return np.real((1j * np.exp(1j * (ks @ t)) * cs) @ ks)

    def hess(t):
        w = -np.exp(1j * (ks @ t)) * cs
        return np.real((ks.T * w) @ ks)

    return value, grad, hess


def grid_positivity_test(p: MeasureDensity, grid, polish: int = 4) -> float:
    """Minimum of the density over an odd Nyquist grid, refined locally.

    The ``polish`` lowest grid samples seed a damped Newton descent, so
    minima that fall between grid points are still found to high accuracy.
    """
    if not isinstance(p, MeasureDensity):
        p = MeasureDensity(p)
    density = p.density
    pts, values = sample(density, grid)
    values = np.real(values)
    if density.dim == 0 or not density.coeffs:
        return float(values.min()) if np.ndim(values) else float(values)
    flat_pts = pts.reshape(-1, density.dim)
    flat = values.ravel()
    best = float(flat.min())
    if polish <= 0:
        return best
    value, grad, hess = _real_parts(density)
    for idx in np.argsort(flat, kind="stable")[:polish]:
        best = min(best, _descend(value, grad, hess, flat_pts[idx]))
    return best


def _descend(value, grad, hess, x, iters: int = 60) -> float:
    """Newton descent with backtracking; gradient steps where the Hessian is not PD."""
    fx = value(x)
    for _ in range(iters):
        g = grad(x)
        if not np.any(np.abs(g) > 1e-15):
            break
        H = hess(x)
        eig = np.linalg.eigvalsh(H)
        if eig[0] > 1e-12:
            step = -np.linalg.solve(H, g)
        else:
            step = -g / max(float(np.max(np.abs(eig))), 1.0)
        t = 1.0
        while t > 1e-10:
            cand = x + t * step
            fc = value(cand)
            if fc < fx:
                x, fx = cand, fc
                break
            t *= 0.5
        else:
            break
    return fx


def default_grid(p: LatticeFunction, minimum: int = 65) -> int:
    n = max(minimum, 2 * p.bandwidth() + 1)
    return n if n % 2 else n + 1


def l2_continuity_check(
    p: MeasureDensity, psi: TrigPoly, grid=None, tol: float = POSITIVITY_TOL
) -> bool:
    """Check ``|ℓ_{μψ}(χ_k)| <= ||ψ||_{L²(μ)} ||μ||^{1/2}`` on the support of ``ψ p``."""
    if not isinstance(p, MeasureDensity):
        p = MeasureDensity(p)
    if grid is None:
        grid = default_grid(p.density)
    if grid_positivity_test(p, grid) < -tol:
        raise ArgumentError("the bound needs a nonnegative density")
    weighted = mul(psi, p.density)
    psi_norm_sq = haar_integral(mul(mul(psi.conj(), psi), p.density)).real
    bound = math.sqrt(max(psi_norm_sq, 0.0)) * math.sqrt(max(p.mass(), 0.0))
    return all(abs(c) <= bound + tol for c in weighted.coeffs.values())


def square_modulus(q: TrigPoly) -> TrigPoly:
    """``|q|²``, a nonnegative density.  Coefficients are symmetrized exactly."""
    r = mul(q.conj(), q)
    sym = {}
    for k, c in r.coeffs.items():
        mk = tuple(-x for x in k)
        sym[k] = (c + r[mk].conjugate()) / 2
    return TrigPoly(q.dim, sym)


def windows(points: Iterable[Sequence[int]], max_size: int):
    """Every nonempty subset of ``points`` with at most ``max_size`` elements."""
    pts = [tuple(k) for k in points]
    for size in range(1, max_size + 1):
        yield from itertools.combinations(pts, size)
