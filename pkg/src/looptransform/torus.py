"""Trigonometric polynomials on the torus U(1)^n and their Fourier coefficients.

A :class:`TrigPoly` stores its coefficients ``{k: c_k}`` over the lattice
``Z^n`` and represents the function ``θ ↦ Σ c_k exp(i k·θ)``.  Coefficients
are the primary data; point values are derived.  Haar measure is normalized,
so the characters ``χ_k`` are orthonormal and the Fourier transform is just
the coefficient map.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import AliasingError, ArgumentError

PRUNE_TOL = 1e-15

Index = tuple[int, ...]


def _pruned(coeffs: Mapping, dim: int) -> dict[Index, complex]:
    out = {}
    for k, c in coeffs.items():
        k = tuple(int(x) for x in k)
        if len(k) != dim:
            raise ArgumentError(f"index {k} does not have length {dim}")
        c = complex(c)
        if abs(c) > PRUNE_TOL:
            out[k] = c
    return out


@dataclass(frozen=True)
class LatticeFunction:
    """Finitely supported complex function on ``Z^dim``."""

    dim: int
    coeffs: Mapping[Index, complex]

    def __post_init__(self):
        if self.dim < 0:
            raise ArgumentError("dimension must be non-negative")
        object.__setattr__(self, "coeffs", _pruned(self.coeffs, self.dim))

    def __getitem__(self, k) -> complex:
        return self.coeffs.get(tuple(k), 0j)

    def __len__(self):
        return len(self.coeffs)

    @property
    def support(self) -> list[Index]:
        return sorted(self.coeffs)

    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(c) ** 2 for c in self.coeffs.values()))

    def bandwidth(self) -> int:
        """Largest ``|k_j|`` over the support (0 for the zero function)."""
        return max((max(map(abs, k), default=0) for k in self.coeffs), default=0)

    def axis_bandwidth(self) -> tuple[int, ...]:
        return tuple(
            max((abs(k[j]) for k in self.coeffs), default=0) for j in range(self.dim)
        )

    def max_difference(self, other: LatticeFunction) -> float:
        _check_dims(self, other)
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def pushforward(self, matrix: Sequence[Sequence[int]], dim: int) -> dict:
        """Coefficients moved along ``k ↦ matrix · k`` (matrix has ``dim`` rows)."""
        out: dict = {}
        cols = len(matrix[0]) if matrix else self.dim
        if cols != self.dim:
            raise ArgumentError("matrix width does not match the dimension")
        for k, c in self.coeffs.items():
            image = tuple(sum(row[j] * k[j] for j in range(self.dim)) for row in matrix)
            if len(image) != dim:
                raise ArgumentError("matrix height does not match the target dimension")
            out[image] = out.get(image, 0j) + c
        return out


class TrigPoly(LatticeFunction):
    """Trigonometric polynomial ``Σ c_k χ_k`` on the ``dim``-torus."""

    def __add__(self, other):
        return add(self, _lift(other, self.dim))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, scale(_lift(other, self.dim), -1.0))

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return mul(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __truediv__(self, c):
        return scale(self, 1.0 / c)

    def conj(self) -> TrigPoly:
        return conj(self)

    def __call__(self, theta):
        return eval_at(self, theta)


class CoeffFunction(LatticeFunction):
    """A function on the dual lattice ``Z^dim`` (the Fourier side)."""


def _check_dims(p: LatticeFunction, q: LatticeFunction):
    if p.dim != q.dim:
        raise ArgumentError(f"dimension mismatch: {p.dim} vs {q.dim}")


def _lift(x, dim: int) -> TrigPoly:
    if isinstance(x, TrigPoly):
        return x
    return constant(x, dim)


def character(k: Iterable[int]) -> TrigPoly:
    k = tuple(int(x) for x in k)
    return TrigPoly(len(k), {k: 1.0})


def constant(c: complex, dim: int) -> TrigPoly:
    return TrigPoly(dim, {(0,) * dim: c})


def zero(dim: int) -> TrigPoly:
    return TrigPoly(dim, {})


def add(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    _check_dims(p, q)
    out = dict(p.coeffs)
    for k, c in q.coeffs.items():
        out[k] = out.get(k, 0j) + c
    return TrigPoly(p.dim, out)


def scale(p: TrigPoly, c: complex) -> TrigPoly:
    c = complex(c)
    return TrigPoly(p.dim, {k: c * v for k, v in p.coeffs.items()})


def mul(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Pointwise product, i.e. convolution of coefficients."""
    _check_dims(p, q)
    out: dict = defaultdict(complex)
    for k, a in p.coeffs.items():
        for m, b in q.coeffs.items():
            out[tuple(x + y for x, y in zip(k, m))] += a * b
    return TrigPoly(p.dim, out)


def conj(p: TrigPoly) -> TrigPoly:
    return TrigPoly(p.dim, {tuple(-x for x in k): c.conjugate() for k, c in p.coeffs.items()})


def haar_integral(p: TrigPoly) -> complex:
    return p[(0,) * p.dim]


def inner_product(p: TrigPoly, q: TrigPoly) -> complex:
    """``∫ conj(p) q dμ₀``, linear in the second argument."""
    _check_dims(p, q)
    small, large = (p, q) if len(p) <= len(q) else (q, p)
    total = 0j
    for k, c in small.coeffs.items():
        d = large.coeffs.get(k)
        if d is not None:
            total += c.conjugate() * d if small is p else d.conjugate() * c
    return total


def norm(p: TrigPoly) -> float:
    return p.norm()


def eval_at(p: TrigPoly, theta) -> complex | np.ndarray:
    """Evaluate at one point (shape ``(dim,)``) or a stack (shape ``(..., dim)``)."""
    theta = np.asarray(theta, dtype=float)
    if p.dim == 0:
        value = haar_integral(p)
        return value if theta.ndim <= 1 else np.full(theta.shape[:-1], value)
    if theta.shape[-1] != p.dim:
        raise ArgumentError(f"point has {theta.shape[-1]} coordinates, expected {p.dim}")
    if not p.coeffs:
        return 0j if theta.ndim == 1 else np.zeros(theta.shape[:-1], dtype=complex)
    ks = np.array(list(p.coeffs), dtype=float)
    cs = np.array(list(p.coeffs.values()), dtype=complex)
    out = np.exp(1j * (theta @ ks.T)) @ cs
    return complex(out) if theta.ndim == 1 else out


def fourier(p: TrigPoly) -> CoeffFunction:
    """The level Fourier transform: ``k ↦ <χ_k, p>``."""
    return CoeffFunction(p.dim, p.coeffs)


def inverse_fourier(c: CoeffFunction) -> TrigPoly:
    return TrigPoly(c.dim, c.coeffs)


def _grid_sizes(grid, dim: int) -> tuple[int, ...]:
    if isinstance(grid, (int, np.integer)):
        sizes = (int(grid),) * dim
    else:
        sizes = tuple(int(g) for g in grid)
    if len(sizes) != dim:
        raise ArgumentError(f"need one grid size per axis ({dim}), got {len(sizes)}")
    for n in sizes:
        if n < 1 or n % 2 == 0:
            raise ArgumentError(f"grid sizes must be odd and positive, got {n}")
    return sizes


def check_nyquist(p: LatticeFunction, grid) -> tuple[int, ...]:
    """Validate a sampling grid for ``p`` and return its per-axis sizes."""
    sizes = _grid_sizes(grid, p.dim)
    for axis, (n, band) in enumerate(zip(sizes, p.axis_bandwidth())):
        if n <= 2 * band:
            raise AliasingError(
                f"grid size {n} on axis {axis} cannot resolve frequency {band}"
            )
    return sizes


def grid_points(sizes: Sequence[int]) -> np.ndarray:
    """Uniform grid ``2π j / N`` per axis, shape ``(*sizes, dim)``."""
    axes = [2.0 * np.pi * np.arange(n) / n for n in sizes]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


def sample(p: TrigPoly, grid) -> tuple[np.ndarray, np.ndarray]:
    """Grid points and values of ``p`` on a Nyquist-valid odd grid."""
    sizes = check_nyquist(p, grid)
    if p.dim == 0:
        return np.zeros((0,)), np.array(haar_integral(p))
    pts = grid_points(sizes)
    return pts, eval_at(p, pts)


def fft_oracle(p: TrigPoly, grid) -> CoeffFunction:
    """Recover the coefficients of ``p`` from grid samples with an FFT.

    Independent of :func:`fourier`: only point values of ``p`` are used.
    """
    sizes = check_nyquist(p, grid)
    if p.dim == 0:
        return CoeffFunction(0, {(): haar_integral(p)})
    _, values = sample(p, sizes)
    spectrum = np.fft.fftn(values) / values.size
    out = {}
    half = [n // 2 for n in sizes]
    for k in itertools.product(*(range(-h, h + 1) for h in half)):
        out[k] = spectrum[tuple(x % n for x, n in zip(k, sizes))]
    return CoeffFunction(p.dim, out)


def grid_average(p: TrigPoly, grid) -> complex:
    """Quadrature estimate of the Haar integral from grid samples."""
    _, values = sample(p, grid)
    return complex(np.mean(values))
