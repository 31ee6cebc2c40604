"""JSON encodings of graphs, words, connections, polynomials, levels and states.

Canonical JSON uses sorted keys and integer arrays for lattice vectors;
coefficient lists are sorted by lattice index so equal objects encode to
identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

import numpy as np

from .errors import ArgumentError, LoopTransformError, StructuralError
from .hoop_core import Edge, GeneratorBasis, Graph, Word, parse_step, reduce
from .holonomy import SU2, SU2_TAG, U1, U1_TAG, Connection
from .lattice import Level
from .positivity import CharacterFunctional, MeasureDensity
from .torus import CoeffFunction, LatticeFunction, TrigPoly
from .transform import CylinderFunction, LoopState


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"), allow_nan=False)


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


def _num(x: float) -> float:
    x = float(x)
    return 0.0 if x == 0 else x


def complex_to_json(c: complex) -> dict:
    return {"re": _num(c.real), "im": _num(c.imag)}


# graphs and words

def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "base": g.base,
        "edges": [{"id": e.id, "from": e.source, "to": e.target} for e in g.edges],
    }


def graph_from_json(d: dict) -> Graph:
    try:
        edges = tuple(Edge(e["id"], e["from"], e["to"]) for e in d["edges"])
        return Graph(tuple(d["vertices"]), edges, d["base"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise StructuralError(f"malformed graph JSON: {exc}") from None


def word_to_json(w: Word) -> dict:
    d = {"kind": w.kind, "steps": w.tokens()}
    if w.kind == "path":
        d["start"] = w.start
    return d


def word_from_json(d: dict | list, g: Graph, normalize: bool = True) -> Word:
    if isinstance(d, list):
        d = {"kind": "loop", "steps": d}
    try:
        steps = tuple(parse_step(t) for t in d["steps"])
        w = Word(g, steps, d.get("kind", "loop"), d.get("start"))
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        if isinstance(exc, LoopTransformError):
            raise
        raise StructuralError(f"malformed word JSON: {exc}") from None
    return reduce(w) if normalize else w


def basis_to_json(b: GeneratorBasis) -> dict:
    return {
        "tree": sorted(b.tree, key=b.graph.edge_index),
        "chords": list(b.chords),
        "generators": [word_to_json(w)["steps"] for w in b.generators],
        "rank": b.rank,
    }


# connections

def element_to_json(g):
    if isinstance(g, U1):
        return g.angle
    return [[_num(z.real), _num(z.imag)] for z in np.asarray(g.matrix).ravel()]


def element_from_json(x, group: str):
    try:
        if group == U1_TAG:
            return U1(float(x))
        if group == SU2_TAG:
            entries = [complex(re, im) for re, im in x]
            if len(entries) != 4:
                raise ArgumentError("an SU(2) element needs 4 complex entries")
            return SU2(np.array(entries).reshape(2, 2))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ArgumentError):
            raise
        raise ArgumentError(f"malformed {group} element: {exc}") from None
    raise ArgumentError(f"unknown group tag {group!r}")


def connection_to_json(A: Connection) -> dict:
    return {
        "group": A.group,
        "assignment": {str(e): element_to_json(g) for e, g in A.assignment.items()},
    }


def connection_from_json(d: dict, g: Graph) -> Connection:
    try:
        group = d.get("group", U1_TAG)
        items = d["assignment"].items()
    except (AttributeError, KeyError) as exc:
        raise ArgumentError(f"malformed connection JSON: {exc}") from None
    assignment = {e: element_from_json(x, group) for e, x in items}
    return Connection(g, assignment, group)


# lattice functions

def _coeff_list(f: LatticeFunction, key: str = "k") -> list:
    return [{key: list(k), **complex_to_json(f.coeffs[k])} for k in f.support]


def _coeffs_from_list(items: list, key: str = "k") -> dict:
    out = {}
    for item in items:
        k = tuple(int(x) for x in item[key])
        out[k] = out.get(k, 0j) + complex(item.get("re", 0.0), item.get("im", 0.0))
    return out


def poly_to_json(p: LatticeFunction) -> dict:
    return {"dim": p.dim, "coeffs": _coeff_list(p)}


def poly_from_json(d: dict, cls=TrigPoly):
    try:
        return cls(int(d["dim"]), _coeffs_from_list(d["coeffs"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ArgumentError(f"malformed polynomial JSON: {exc}") from None


def coeffs_from_json(d: dict) -> CoeffFunction:
    return poly_from_json(d, CoeffFunction)


def density_to_json(p: MeasureDensity) -> dict:
    return {**poly_to_json(p.density), "hermitian": True}


def density_from_json(d: dict) -> MeasureDensity:
    return MeasureDensity(poly_from_json(d))


def functional_to_json(f: CharacterFunctional) -> dict:
    return poly_to_json(f)


def functional_from_json(d: dict) -> CharacterFunctional:
    return poly_from_json(d, CharacterFunctional)


def level_to_json(L: Level) -> dict:
    return {"ambient": L.ambient, "basis": [list(v) for v in L.basis]}


def level_from_json(d: dict) -> Level:
    try:
        return Level(int(d["ambient"]), tuple(tuple(v) for v in d["basis"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, LoopTransformError):
            raise
        raise ArgumentError(f"malformed level JSON: {exc}") from None


def cylinder_to_json(psi: CylinderFunction) -> dict:
    return {"level": level_to_json(psi.level), "poly": poly_to_json(psi.poly)}


def cylinder_from_json(d: dict) -> CylinderFunction:
    try:
        level, poly = d["level"], d["poly"]
    except (KeyError, TypeError) as exc:
        raise ArgumentError(f"malformed cylinder JSON: {exc}") from None
    return CylinderFunction(level_from_json(level), poly_from_json(poly))


def state_to_json(s: LoopState) -> dict:
    return {"ambient": s.ambient, "support": _coeff_list(s, "h")}


def state_from_json(d: dict) -> LoopState:
    try:
        return LoopState(int(d["ambient"]), _coeffs_from_list(d["support"], "h"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ArgumentError(f"malformed loop state JSON: {exc}") from None


def finite(x: float) -> float | None:
    """JSON-safe float: infinities and NaN become ``None``."""
    return x if math.isfinite(x) else None
