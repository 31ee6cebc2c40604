"""Abelian loop transform built as an inductive limit of torus Fourier transforms."""

from .errors import (
    AliasingError,
    ArgumentError,
    CompositionError,
    LoopTransformError,
    RefinementError,
    StructuralError,
)
from .hoop_core import (
    Edge,
    GeneratorBasis,
    Graph,
    Word,
    abelianize,
    compose,
    decompose,
    invert,
    kernel_test,
    loop,
    path,
    path_abelianize,
    reduce,
    spanning_tree_generators,
)
from .holonomy import SU2, U1, Connection, interpolate, mandelstam_check, wilson
from .lattice import Level, hnf_solve, join_levels, refinement_matrix
from .positivity import (
    MeasureDensity,
    density_from_functional,
    functional_from_density,
    grid_positivity_test,
    psd_test,
)
from .torus import TrigPoly, character, fft_oracle, fourier, inverse_fourier
from .transform import (
    CylinderFunction,
    LoopState,
    include_function,
    inverse_transform,
    loop_transform,
    path_transform,
    verify_diagram,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "ArgumentError",
    "CompositionError",
    "Connection",
    "CylinderFunction",
    "Edge",
    "GeneratorBasis",
    "Graph",
    "Level",
    "LoopState",
    "LoopTransformError",
    "MeasureDensity",
    "RefinementError",
    "SU2",
    "StructuralError",
    "TrigPoly",
    "U1",
    "Word",
    "abelianize",
    "character",
    "compose",
    "decompose",
    "density_from_functional",
    "fft_oracle",
    "fourier",
    "functional_from_density",
    "grid_positivity_test",
    "hnf_solve",
    "include_function",
    "interpolate",
    "inverse_fourier",
    "inverse_transform",
    "invert",
    "join_levels",
    "kernel_test",
    "loop",
    "loop_transform",
    "mandelstam_check",
    "path",
    "path_abelianize",
    "path_transform",
    "psd_test",
    "reduce",
    "refinement_matrix",
    "spanning_tree_generators",
    "verify_diagram",
    "wilson",
]
