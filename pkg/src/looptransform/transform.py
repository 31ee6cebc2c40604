"""The loop transform as an inductive limit of torus Fourier transforms.

A state on the connection side is a :class:`CylinderFunction`: a
trigonometric polynomial on the torus of some :class:`Level`.  Including it
into a finer level pushes its coefficients forward along the refinement
matrix.  A state on the loop side is a :class:`LoopState`, a finitely
supported function on the ambient hoop lattice with counting measure.  The
loop transform sends the coefficient at level coordinates ``m`` to the hoop
``basis · m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ArgumentError
from .hoop_core import GeneratorBasis, Graph
from .lattice import Level, join_levels, require_refinement
from .torus import (
    CoeffFunction,
    LatticeFunction,
    TrigPoly,
    eval_at,
    fourier,
    inner_product,
    inverse_fourier,
)


@dataclass(frozen=True)
class CylinderFunction:
    level: Level
    poly: TrigPoly

    def __post_init__(self):
        if self.poly.dim != self.level.rank:
            raise ArgumentError(
                f"polynomial has dimension {self.poly.dim}, level has rank {self.level.rank}"
            )

    @property
    def ambient(self) -> int:
        return self.level.ambient

    def norm(self) -> float:
        return self.poly.norm()

    def __call__(self, theta):
        return eval_at(self.poly, theta)


@dataclass(frozen=True)
class LoopState(LatticeFunction):
    """Finitely supported function on the hoop lattice ``Z^ambient``."""

    @property
    def ambient(self) -> int:
        return self.dim

    def inner(self, other: LoopState) -> complex:
        """ℓ² inner product with counting measure, linear in ``other``."""
        if self.dim != other.dim:
            raise ArgumentError("loop states on different hoop lattices")
        return sum(
            (c.conjugate() * other.coeffs[h] for h, c in self.coeffs.items() if h in other.coeffs),
            0j,
        )


def include_function(psi: CylinderFunction, fine: Level) -> CylinderFunction:
    """Pull ``psi`` back to the torus of ``fine`` (coefficient pushforward by K)."""
    K = require_refinement(psi.level, fine)
    return CylinderFunction(fine, TrigPoly(fine.rank, psi.poly.pushforward(K, fine.rank)))


def include_coeffs(coeffs: CoeffFunction, coarse: Level, fine: Level) -> CoeffFunction:
    """Coefficient-side inclusion between the dual lattices of two levels."""
    if coeffs.dim != coarse.rank:
        raise ArgumentError("coefficient function does not match the coarse level")
    K = require_refinement(coarse, fine)
    return CoeffFunction(fine.rank, coeffs.pushforward(K, fine.rank))


def common_level(psi: CylinderFunction, phi: CylinderFunction) -> Level:
    if psi.ambient != phi.ambient:
        raise ArgumentError(f"ambient mismatch: {psi.ambient} vs {phi.ambient}")
    return join_levels(psi.level, phi.level)


def cylinder_inner_product(psi: CylinderFunction, phi: CylinderFunction) -> complex:
    top = common_level(psi, phi)
    return inner_product(include_function(psi, top).poly, include_function(phi, top).poly)


def equivalent(psi: CylinderFunction, phi: CylinderFunction, tol: float = 0.0) -> bool:
    """Equality after inclusion into the join of the two levels."""
    top = common_level(psi, phi)
    a = include_function(psi, top).poly
    b = include_function(phi, top).poly
    return a.max_difference(b) <= tol


def loop_transform(psi: CylinderFunction, basis: GeneratorBasis | None = None) -> LoopState:
    if basis is not None and basis.rank != psi.ambient:
        raise ArgumentError(
            f"level lives in Z^{psi.ambient} but the graph has {basis.rank} generators"
        )
    coeffs = fourier(psi.poly)
    return LoopState(psi.ambient, coeffs.pushforward(psi.level.matrix, psi.ambient))


def inverse_transform(state: LoopState) -> CylinderFunction:
    """``Σ_h ℓ(h) T_h`` as a cylinder function on the level the support generates."""
    level = Level.spanned_by(state.ambient, list(state.coeffs))
    coeffs = {}
    for h, c in state.coeffs.items():
        coeffs[level.coordinates(h)] = c
    return CylinderFunction(level, inverse_fourier(CoeffFunction(level.rank, coeffs)))


def wilson_character(level: Level, hoop: Sequence[int]) -> CylinderFunction:
    """The Wilson function of ``hoop`` as a cylinder function on ``level``."""
    m = level.coordinates(hoop)
    if m is None:
        raise ArgumentError(f"hoop {tuple(hoop)} is not in the level")
    return CylinderFunction(level, TrigPoly(level.rank, {m: 1.0}))


def verify_diagram(psi: CylinderFunction, fine: Level) -> float:
    """Largest coefficient gap between ``F_fine ∘ i`` and ``j ∘ F_coarse``."""
    left = fourier(include_function(psi, fine).poly)
    right = include_coeffs(fourier(psi.poly), psi.level, fine)
    return left.max_difference(right)


def verify_chain(psi: CylinderFunction, mid: Level, fine: Level) -> float:
    """Gap between including through ``mid`` and including directly."""
    direct = include_function(psi, fine).poly
    stepped = include_function(include_function(psi, mid), fine).poly
    return direct.max_difference(stepped)


def pushforward_state(state: LoopState, matrix: Sequence[Sequence[int]], ambient: int) -> LoopState:
    return LoopState(ambient, state.pushforward(matrix, ambient))


def path_transform(psi: CylinderFunction, graph: Graph | None = None) -> LoopState:
    """Loop transform over the edge lattice ``Z^E`` of a graph."""
    if graph is not None and len(graph.edges) != psi.ambient:
        raise ArgumentError(
            f"level lives in Z^{psi.ambient} but the graph has {len(graph.edges)} edges"
        )
    return loop_transform(psi)


def loop_to_edge_state(state: LoopState, basis: GeneratorBasis) -> LoopState:
    """Re-express a loop state on the chord lattice as one on the edge lattice."""
    if state.ambient != basis.rank:
        raise ArgumentError("loop state does not live on this basis' hoop lattice")
    return pushforward_state(state, basis.edge_matrix(), len(basis.graph.edges))
