"""Connections on a graph with values in U(1) or SU(2), and their holonomies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import ArgumentError, StructuralError
from .hoop_core import GeneratorBasis, Graph, Word, compose, invert

TAU = 2.0 * math.pi
U1_TAG = "U1"
SU2_TAG = "SU2"


def _wrap(angle: float) -> float:
    a = angle % TAU
    # -tiny % TAU rounds up to TAU
    return 0.0 if a >= TAU else a


@dataclass(frozen=True)
class U1:
    """The phase ``exp(i * angle)`` stored as an angle in ``[0, 2π)``."""

    angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "angle", _wrap(float(self.angle)))

    group = U1_TAG

    def __mul__(self, other: U1) -> U1:
        return U1(self.angle + other.angle)

    def inverse(self) -> U1:
        return U1(-self.angle)

    @property
    def value(self) -> complex:
        return complex(math.cos(self.angle), math.sin(self.angle))

    def trace(self) -> complex:
        """Normalized trace; for U(1) the phase itself."""
        return self.value

    def distance(self, other: U1) -> float:
        """Angular distance on the circle."""
        d = abs(self.angle - other.angle) % TAU
        return min(d, TAU - d)

    @classmethod
    def identity(cls) -> U1:
        return cls(0.0)


class SU2:
    """A 2x2 special unitary matrix.

    The constructor projects the input onto SU(2) (polar factor, then the
    determinant phase is divided out).  ``SU2.exact`` wraps a matrix without
    touching it; products of SU(2) elements use it so that nothing is
    silently renormalized along a word.
    """

    __slots__ = ("matrix",)
    group = SU2_TAG

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex).reshape(2, 2)
        u, _, vh = np.linalg.svd(m)
        m = u @ vh
        m = m / np.sqrt(np.linalg.det(m))
        self.matrix = m
        self.matrix.setflags(write=False)

    @classmethod
    def exact(cls, matrix) -> SU2:
        obj = cls.__new__(cls)
        obj.matrix = np.array(matrix, dtype=complex).reshape(2, 2)
        obj.matrix.setflags(write=False)
        return obj

    @classmethod
    def identity(cls) -> SU2:
        return cls.exact(np.eye(2))

    @classmethod
    def from_quaternion(cls, a, b, c, d) -> SU2:
        return cls([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])

    def __mul__(self, other: SU2) -> SU2:
        return SU2.exact(self.matrix @ other.matrix)

    def inverse(self) -> SU2:
        return SU2.exact(self.matrix.conj().T)

    def trace(self) -> complex:
        """Normalized trace ``Tr(U) / 2``."""
        return complex(np.trace(self.matrix)) / 2.0

    def distance(self, other: SU2) -> float:
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def unitarity_defect(self) -> float:
        m = self.matrix
        return max(
            float(np.max(np.abs(m.conj().T @ m - np.eye(2)))),
            abs(complex(np.linalg.det(m)) - 1.0),
        )

    def __eq__(self, other):
        return isinstance(other, SU2) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        return f"SU2({self.matrix.tolist()!r})"


GroupElement = Union[U1, SU2]


def identity(group: str) -> GroupElement:
    if group == U1_TAG:
        return U1.identity()
    if group == SU2_TAG:
        return SU2.identity()
    raise ArgumentError(f"unknown group tag {group!r}")


def conjugate(g0: GroupElement, g: GroupElement) -> GroupElement:
    if isinstance(g, U1):
        # abelian: skip the angle arithmetic so the result is exact
        return g
    return g0 * g * g0.inverse()


@dataclass(frozen=True)
class Connection:
    graph: Graph = field(repr=False)
    assignment: Mapping
    group: str = U1_TAG

    def __post_init__(self):
        if self.group not in (U1_TAG, SU2_TAG):
            raise ArgumentError(f"unknown group tag {self.group!r}")
        want = U1 if self.group == U1_TAG else SU2
        assignment = dict(self.assignment)
        ids = set(self.graph.edge_ids)
        if set(assignment) != ids:
            missing = ids - set(assignment)
            extra = set(assignment) - ids
            raise StructuralError(f"assignment mismatch: missing {missing}, unknown {extra}")
        for e, g in assignment.items():
            if not isinstance(g, want):
                raise ArgumentError(f"edge {e!r} carries {type(g).__name__}, expected {want.__name__}")
        object.__setattr__(self, "assignment", assignment)

    def __getitem__(self, edge_id) -> GroupElement:
        return self.assignment[edge_id]

    def conjugated(self, g0: GroupElement) -> Connection:
        """The connection obtained by a constant gauge transformation ``g0``."""
        return Connection(
            self.graph,
            {e: conjugate(g0, g) for e, g in self.assignment.items()},
            self.group,
        )


def holonomy(A: Connection, w: Word) -> GroupElement:
    """Ordered product of edge elements along ``w`` (inverse for ``-1`` steps)."""
    if w.graph != A.graph:
        raise StructuralError("word and connection live on different graphs")
    if A.group == U1_TAG:
        return U1(math.fsum(s * A.assignment[e].angle for e, s in w.steps))
    m = np.eye(2, dtype=complex)
    for e, s in w.steps:
        u = A.assignment[e].matrix
        m = m @ (u if s == 1 else u.conj().T)
    return SU2.exact(m)


def wilson(A: Connection, w: Word) -> complex:
    """Normalized trace of the holonomy around the loop ``w``."""
    return holonomy(A, w).trace()


def interpolate(basis: GeneratorBasis, targets: Sequence[GroupElement]) -> Connection:
    """Connection in tree gauge whose generator holonomies are ``targets``."""
    targets = list(targets)
    if len(targets) != basis.rank:
        raise ArgumentError(f"expected {basis.rank} targets, got {len(targets)}")
    if targets:
        kinds = {type(t) for t in targets}
        if len(kinds) != 1:
            raise ArgumentError("targets mix U(1) and SU(2) elements")
        group = targets[0].group
    else:
        group = U1_TAG
    one = identity(group)
    chord_target = dict(zip(basis.chords, targets))
    assignment = {e: chord_target.get(e, one) for e in basis.graph.edge_ids}
    return Connection(basis.graph, assignment, group)


def mandelstam_check(A: Connection, alpha: Word, beta: Word) -> float:
    """Residual of ``2 T_a T_b = T_ab + T_ab^-1`` for an SU(2) connection."""
    if A.group != SU2_TAG:
        raise ArgumentError("the Mandelstam identity check needs an SU(2) connection")
    lhs = 2.0 * wilson(A, alpha) * wilson(A, beta)
    rhs = wilson(A, compose(alpha, beta)) + wilson(A, compose(alpha, invert(beta)))
    return abs(lhs - rhs)


def conjugation_invariance_check(A: Connection, g0: GroupElement, w: Word) -> float:
    if g0.group != A.group:
        raise ArgumentError("g0 must belong to the connection's group")
    return abs(wilson(A.conjugated(g0), w) - wilson(A, w))


def random_u1(rng: np.random.Generator) -> U1:
    return U1(rng.uniform(0.0, TAU))


def random_su2(rng: np.random.Generator) -> SU2:
    """Haar-random SU(2) element from a normalized Gaussian quaternion."""
    q = rng.standard_normal(4)
    return SU2.from_quaternion(*(q / np.linalg.norm(q)))


def random_connection(rng: np.random.Generator, graph: Graph, group: str = U1_TAG) -> Connection:
    draw = random_u1 if group == U1_TAG else random_su2
    return Connection(graph, {e: draw(rng) for e in graph.edge_ids}, group)
