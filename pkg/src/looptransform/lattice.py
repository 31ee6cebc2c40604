"""Sublattices of the hoop lattice Z^n and the refinement maps between them.

All arithmetic is on Python integers, so intermediate values never wrap.
Vectors are tuples; a basis is a sequence of vectors, read as the columns of
an ``n x m`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import ArgumentError, RefinementError

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U @ rows == H``, ``U`` unimodular and ``H`` in
    row echelon form: positive pivots, entries above each pivot reduced into
    ``[0, pivot)``, zero rows last.  Row ``i`` of ``rows`` is a generator, so
    the nonzero rows of ``H`` are a canonical basis of the generated lattice.
    """
    A = [[int(x) for x in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = A[i][c]
            if b == 0:
                continue
            a = A[r][c]
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            for M in (A, U):
                Rr, Ri = M[r], M[i]
                M[r] = [s * x + t * y for x, y in zip(Rr, Ri)]
                M[i] = [-bg * x + ag * y for x, y in zip(Rr, Ri)]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    H, _ = hermite_normal_form(vectors)
    return sum(1 for row in H if any(row))


def is_independent(vectors: Sequence[Sequence[int]]) -> bool:
    """Full rank over the rationals (exact)."""
    vectors = [tuple(v) for v in vectors]
    if len({len(v) for v in vectors}) > 1:
        raise ArgumentError("vectors have different lengths")
    return integer_rank(vectors) == len(vectors)


class _Solver:
    """Precomputed HNF of a basis, reused for many membership queries."""

    def __init__(self, basis: Sequence[Sequence[int]]):
        self.basis = [tuple(int(x) for x in v) for v in basis]
        H, U = hermite_normal_form(self.basis)
        rank = sum(1 for row in H if any(row))
        if rank != len(self.basis):
            raise ArgumentError("basis is not linearly independent")
        self.H, self.U = H, U
        self.pivots = [next(j for j, x in enumerate(row) if x) for row in H]

    def solve(self, target: Sequence[int]) -> Vector | None:
        t = [int(x) for x in target]
        if self.basis and len(t) != len(self.basis[0]):
            raise ArgumentError("target length does not match the basis")
        y = []
        for row, p in zip(self.H, self.pivots):
            q, rem = divmod(t[p], row[p])
            if rem:
                return None
            y.append(q)
            if q:
                t = [a - q * b for a, b in zip(t, row)]
        if any(t):
            return None
        # x^T = y^T U since rows of H = U @ basis rows
        m = len(self.basis)
        return tuple(sum(y[i] * self.U[i][j] for i in range(m)) for j in range(m))


def hnf_solve(basis: Sequence[Sequence[int]], target: Sequence[int]) -> Vector | None:
    """Integer ``x`` with ``Σ x_j basis[j] = target``, or ``None`` if none exists."""
    if not basis:
        return () if not any(target) else None
    return _Solver(basis).solve(target)


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    inner = len(B)
    cols = len(B[0]) if B else 0
    return tuple(
        tuple(sum(row[k] * B[k][j] for k in range(inner)) for j in range(cols)) for row in A
    )


def columns_to_matrix(cols: Sequence[Sequence[int]], rows: int) -> Matrix:
    return tuple(tuple(c[r] for c in cols) for r in range(rows))


@dataclass(frozen=True)
class Level:
    """A sublattice of ``Z^ambient`` with an ordered basis.

    Basis order is meaningful: it coordinatizes the torus of this level.
    """

    ambient: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in v) for v in self.basis)
        object.__setattr__(self, "basis", basis)
        if self.ambient < 0:
            raise ArgumentError("ambient dimension must be non-negative")
        if any(len(v) != self.ambient for v in basis):
            raise ArgumentError(f"basis vectors must have length {self.ambient}")
        if len(basis) > self.ambient or not is_independent(basis):
            raise ArgumentError("level basis is not linearly independent")

    @classmethod
    def full(cls, n: int) -> Level:
        return cls(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def trivial(cls, n: int) -> Level:
        return cls(n, ())

    @classmethod
    def spanned_by(cls, ambient: int, vectors: Sequence[Sequence[int]]) -> Level:
        """Level generated by arbitrary vectors, with its canonical basis."""
        vectors = [tuple(v) for v in vectors]
        if any(len(v) != ambient for v in vectors):
            raise ArgumentError(f"vectors must have length {ambient}")
        H, _ = hermite_normal_form(vectors)
        return cls(ambient, tuple(tuple(r) for r in H if any(r)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> Matrix:
        """``ambient x rank`` matrix whose columns are the basis vectors."""
        return columns_to_matrix(self.basis, self.ambient)

    @cached_property
    def _solver(self) -> _Solver:
        return _Solver(self.basis)

    def coordinates(self, v: Sequence[int]) -> Vector | None:
        """Coordinates of ``v`` in this basis, or ``None`` if ``v`` is not in the lattice."""
        if not self.basis:
            return () if not any(v) else None
        return self._solver.solve(v)

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def embed(self, m: Sequence[int]) -> Vector:
        """The ambient vector with coordinates ``m``."""
        out = [0] * self.ambient
        for coeff, b in zip(m, self.basis):
            if coeff:
                for i, x in enumerate(b):
                    out[i] += coeff * x
        return tuple(out)

    def canonical(self) -> Level:
        return Level.spanned_by(self.ambient, self.basis)

    def same_lattice(self, other: Level) -> bool:
        return self.ambient == other.ambient and self.canonical().basis == other.canonical().basis

    def __le__(self, other: Level) -> bool:
        return self.ambient == other.ambient and all(other.contains(b) for b in self.basis)


def refinement_matrix(coarse: Level, fine: Level) -> Matrix | None:
    """``K`` with ``fine.matrix @ K == coarse.matrix``, or ``None`` if coarse ⊄ fine.

    ``K`` has one row per fine generator and one column per coarse generator.
    """
    if coarse.ambient != fine.ambient:
        raise ArgumentError(f"ambient mismatch: {coarse.ambient} vs {fine.ambient}")
    cols = []
    for b in coarse.basis:
        x = fine.coordinates(b)
        if x is None:
            return None
        cols.append(x)
    return columns_to_matrix(cols, fine.rank)


def require_refinement(coarse: Level, fine: Level) -> Matrix:
    K = refinement_matrix(coarse, fine)
    if K is None:
        raise RefinementError("the coarse level is not a sublattice of the fine level")
    return K


def join_levels(a: Level, b: Level) -> Level:
    """Smallest level containing both, with canonical HNF basis."""
    if a.ambient != b.ambient:
        raise ArgumentError(f"ambient mismatch: {a.ambient} vs {b.ambient}")
    return Level.spanned_by(a.ambient, a.basis + b.basis)
